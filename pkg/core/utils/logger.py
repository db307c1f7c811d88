"""Shared logger for the complex SOR toolkit with a failure tally by kind.

Solvers, property suites and the experiment engine all log through one
``complex_sor`` logger. A counting handler sorts failure records into three
kinds so a verification run can report, for example, "2 violations,
1 non-convergence" whatever the console verbosity.
"""
import logging
import threading
from collections import Counter
from typing import Dict, List, Optional

LOGGER_NAME = "complex_sor"
MAX_CAPTURED = 500

VIOLATION = "violation"
NON_CONVERGENCE = "non_convergence"
FAILED_STEP = "failed_step"

# First match wins.
_KIND_MARKERS = (
    ("violat", VIOLATION),
    ("non-converg", NON_CONVERGENCE),
    (" fail", FAILED_STEP),
)

_logger = None
_console_handler = None
_counter = None
_lock = threading.Lock()


def classify_failure(message: str) -> Optional[str]:
    """Failure kind of a log message, or ``None`` for ordinary records."""
    lowered = message.lower()
    for marker, kind in _KIND_MARKERS:
        if marker in lowered:
            return kind
    if lowered.endswith("failed"):
        return FAILED_STEP
    return None


class _CountingHandler(logging.Handler):
    """Tallies failure records by kind; emits nothing."""

    def __init__(self):
        super().__init__(level=logging.DEBUG)
        self.by_kind: Counter = Counter()
        self.failures: List[str] = []

    @property
    def failure_count(self) -> int:
        return sum(self.by_kind.values())

    def emit(self, record: logging.LogRecord) -> None:
        try:
            message = record.getMessage()
        except Exception:
            return
        kind = classify_failure(message)
        if kind is None:
            return
        self.by_kind[kind] += 1
        if len(self.failures) < MAX_CAPTURED:
            self.failures.append(message)

    def reset(self) -> None:
        self.by_kind.clear()
        self.failures.clear()


def get_logger(name: str = LOGGER_NAME) -> logging.Logger:
    """Return the shared logger; *name* is accepted for ``__name__`` call sites only."""
    global _logger, _console_handler, _counter
    with _lock:
        if _logger is None:
            _logger = logging.getLogger(LOGGER_NAME)
            _counter = _CountingHandler()
            has_external = bool(_logger.handlers)
            _logger.addHandler(_counter)
            _logger.setLevel(logging.DEBUG)
            _logger.propagate = False
            if not has_external:
                _console_handler = logging.StreamHandler()
                _console_handler.setFormatter(logging.Formatter(
                    '%(asctime)s [%(levelname)s] %(name)s: %(message)s',
                    datefmt='%H:%M:%S'
                ))
                _console_handler.setLevel(logging.WARNING)
                _logger.addHandler(_console_handler)
    return _logger


def set_level(level: int) -> None:
    """Console verbosity (-v / -q). The logger itself stays at DEBUG."""
    get_logger()
    if _console_handler is not None:
        _console_handler.setLevel(level)


def failure_count() -> int:
    get_logger()
    with _lock:
        return _counter.failure_count if _counter else 0


def failure_breakdown() -> Dict[str, int]:
    """Failure counts per kind since the last reset (zero kinds included)."""
    get_logger()
    with _lock:
        counts = _counter.by_kind if _counter else Counter()
        return {kind: counts[kind] for _, kind in _KIND_MARKERS}


def failures() -> List[str]:
    """Captured failure messages, at most ``MAX_CAPTURED``."""
    get_logger()
    with _lock:
        return list(_counter.failures) if _counter else []


def reset_failures() -> None:
    get_logger()
    with _lock:
        if _counter is not None:
            _counter.reset()
