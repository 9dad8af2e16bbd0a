"""HTTP service for the analysis pipeline."""

from .app import app

__all__ = ["app"]
