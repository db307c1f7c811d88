import logging

import pytest

import core.utils.logger as logger_module


def _detach_handlers():
    shared = logging.getLogger(logger_module.LOGGER_NAME)
    for h in list(shared.handlers):
        if isinstance(h, logger_module._CountingHandler) or h is logger_module._console_handler:
            shared.removeHandler(h)


@pytest.fixture(autouse=True)
def reset_logger_singleton():
    _detach_handlers()
    logger_module._logger = None
    logger_module._console_handler = None
    logger_module._counter = None
    yield
    _detach_handlers()
    logger_module._logger = None
    logger_module._console_handler = None
    logger_module._counter = None


class TestCountingHandler:
    def test_counts_failure_messages(self):
        log = logger_module.get_logger()

        log.error("property 'spectra/sandwich' violated by 1e-3")
        log.warning("non-convergence after 3 sweeps (residual 1.0e-02)")
        log.warning("Table phase 'predicted_iterations' failed for alpha=0.5, N=80")
        log.debug("operation fail")
        log.debug("not a match")
        log.info("assembled Helmholtz matrix N=4")

        assert logger_module.failure_count() == 4
        assert len(logger_module.failures()) == 4
        assert logger_module.failure_breakdown() == {
            logger_module.VIOLATION: 1,
            logger_module.NON_CONVERGENCE: 1,
            logger_module.FAILED_STEP: 2,
        }

    def test_reset_clears_counts(self):
        log = logger_module.get_logger()

        log.debug("sweep failed")
        assert logger_module.failure_count() == 1

        logger_module.reset_failures()
        assert logger_module.failure_count() == 0
        assert logger_module.failures() == []

    def test_module_loggers_share_the_tally(self):
        logger_module.get_logger("core.sparse.iteration").warning("solve failed")
        logger_module.get_logger("app.engine").warning("cell failed")
        assert logger_module.failure_count() == 2

    def test_console_level_does_not_hide_failures(self):
        logger_module.set_level(logging.CRITICAL)
        logger_module.get_logger().debug("property 'a/b' violated")
        assert logger_module.failure_count() == 1

    def test_captured_messages_are_capped(self):
        log = logger_module.get_logger()
        for i in range(600):
            log.debug("check %d failed", i)
        assert logger_module.failure_count() == 600
        assert len(logger_module.failures()) == 500


class TestConsoleLevel:
    def test_default_console_level_is_warning(self):
        logger_module.get_logger()
        assert logger_module._console_handler.level == logging.WARNING

    def test_verbose_console(self):
        logger_module.set_level(logging.DEBUG)
        assert logger_module._console_handler.level == logging.DEBUG

    def test_logger_itself_stays_at_debug(self):
        logger_module.set_level(logging.ERROR)
        assert logger_module.get_logger().level == logging.DEBUG


class TestCountingHandlerWithExternalHandler:
    def test_counter_works_when_external_handler_exists(self):
        shared = logging.getLogger(logger_module.LOGGER_NAME)
        external_handler = logging.StreamHandler()
        external_handler.setLevel(logging.DEBUG)
        shared.addHandler(external_handler)

        try:
            log = logger_module.get_logger()
            log.debug("solve failed")
            log.debug("external handler present failure")

            assert logger_module.failure_count() == 2
            assert len(logger_module.failures()) == 2
            assert logger_module._console_handler is None
        finally:
            shared.removeHandler(external_handler)

    def test_counter_attached_only_once_with_external_handler(self):
        shared = logging.getLogger(logger_module.LOGGER_NAME)
        external_handler = logging.StreamHandler()
        shared.addHandler(external_handler)

        try:
            logger_module.get_logger()
            logger_module.get_logger()
            counting_handlers = [
                h for h in shared.handlers
                if isinstance(h, logger_module._CountingHandler)
            ]
            assert len(counting_handlers) == 1
        finally:
            shared.removeHandler(external_handler)


class TestClassifyFailure:
    @pytest.mark.parametrize("message, kind", [
        ("property 'a/b' violated: 2 of 10 checks", logger_module.VIOLATION),
        ("bracket violation at alpha=0.5", logger_module.VIOLATION),
        ("non-convergence after 50000 sweeps", logger_module.NON_CONVERGENCE),
        ("cell alpha=0.5 N=80 failed", logger_module.FAILED_STEP),
        ("dense oracle fail", logger_module.FAILED_STEP),
        ("non-convergence and a failed solve", logger_module.NON_CONVERGENCE),
    ])
    def test_kinds(self, message, kind):
        assert logger_module.classify_failure(message) == kind

    @pytest.mark.parametrize("message", ["converged in 114 sweeps", "failover", "assembled N=4"])
    def test_ordinary_messages(self, message):
        assert logger_module.classify_failure(message) is None

    def test_breakdown_starts_at_zero(self):
        assert logger_module.failure_breakdown() == {
            logger_module.VIOLATION: 0,
            logger_module.NON_CONVERGENCE: 0,
            logger_module.FAILED_STEP: 0,
        }
