"""In-memory session store with optional directory preload."""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from pathlib import Path

from ..oplog import LogDiagnostic, LogParseError, Session, parse_tabular_log, parse_xml_log, validate_session
from ..replay import ProcessModelState, final_model


def sniff_format(data: bytes) -> str:
    """Guess xml vs csv from the content head."""
    head = data.lstrip()[:1]
    return "xml" if head == b"<" else "csv"


def parse_log(data: bytes, fmt: str | None = None, session_id: str | None = None) -> Session:
    """Parse a log in either format, sniffing when not told."""
    fmt = fmt or sniff_format(data)
    if fmt == "xml":
        session = parse_xml_log(data)
        if session_id:
            session = Session(session_id, session.events, session.source_format)
        return session
    return parse_tabular_log(data, session_id=session_id or "session")


@dataclass
class StoredSession:
    session_id: str
    session: Session
    diagnostics: list[LogDiagnostic]
    _final: ProcessModelState | None = None

    @property
    def final(self) -> ProcessModelState:
        if self._final is None:
            self._final = final_model(self.session)
        return self._final


class SessionStore:
    """Insertion-ordered map of uploaded sessions.

    Uploads serialize on a lock; everything handed out is an immutable
    snapshot, so concurrent reads never block each other.  Re-uploading an
    id replaces the entry (and with it the cached final model).
    """

    def __init__(self) -> None:
        self._entries: dict[str, StoredSession] = {}
        self._lock = threading.Lock()

    def add(self, data: bytes, fmt: str | None = None, session_id: str | None = None) -> StoredSession:
        """Parse and store a log; raises LogParseError when unparseable."""
        if session_id is None:
            session_id = "s-" + hashlib.sha1(data).hexdigest()[:12]
        session = parse_log(data, fmt=fmt, session_id=session_id)
        entry = StoredSession(
            session_id=session_id,
            session=session,
            diagnostics=validate_session(session),
        )
        with self._lock:
            if session_id in self._entries:
                del self._entries[session_id]  # re-insert at the end
            self._entries[session_id] = entry
        return entry

    def preload_directory(self, directory: str | Path) -> list[str]:
        """Load every .xml/.csv file in a directory; returns loaded ids."""
        loaded = []
        for path in sorted(Path(directory).iterdir()):
            if path.suffix.lower() not in (".xml", ".csv"):
                continue
            fmt = path.suffix.lower().lstrip(".")
            self.add(path.read_bytes(), fmt=fmt, session_id=path.stem)
            loaded.append(path.stem)
        return loaded

    def get(self, session_id: str) -> StoredSession | None:
        return self._entries.get(session_id)

    def list(self) -> list[StoredSession]:
        return list(self._entries.values())
