"""HTTP service exposing the package; run with ``uvicorn free_statics.service:app``."""

from .routes import app

__all__ = ["app"]
