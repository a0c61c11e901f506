from .app import create_app
from .config import ServiceConfig
from .model import ModelBundle

__all__ = ["ServiceConfig", "ModelBundle", "create_app"]
__version__ = "0.1.0"
