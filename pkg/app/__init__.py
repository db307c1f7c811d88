"""Complex SOR Toolkit - CLI, experiment engine and export application layer."""

# ruff: noqa: F401

from app.config import ExperimentSpec, load_spec
from app.engine import ExperimentRunner
from app.export import ExportManager
