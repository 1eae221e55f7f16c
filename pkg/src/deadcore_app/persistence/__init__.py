from .config_loader import ConfigLoader, ExperimentConfig
from .file_manager import FileManager
from .db_manager import RunCatalog

__all__ = [
    "ConfigLoader",
    "ExperimentConfig",
    "FileManager",
    "RunCatalog",
]
