"""Session server: FastAPI app over the core engine."""

from .app import create_app
from .sessions import Session, SessionError, SessionManager

__all__ = ["Session", "SessionError", "SessionManager", "create_app"]
