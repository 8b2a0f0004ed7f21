"""Command-line and HTTP front doors over the library."""

from .store import SessionStore, StoredSession

__all__ = ["SessionStore", "StoredSession"]
