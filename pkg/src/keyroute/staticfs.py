"""Serving files from a webroot."""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import FrozenSet, Optional, Union

from .errors import ConfigurationError, ExposureError, FilterError, StaticNotFoundError, TraversalError
from .messages import Request, Response
from .router import HttpVerb, PathPattern, RouteTable

CONTENT_TYPES = {
    "html": "text/html",
    "css": "text/css",
    "js": "text/javascript",
    "json": "application/json",
    "txt": "text/plain",
    "png": "image/png",
    "jpg": "image/jpeg",
    "jpeg": "image/jpeg",
    "gif": "image/gif",
    "svg": "image/svg+xml",
}


def content_type_for(extension: str) -> str:
    return CONTENT_TYPES.get(extension.lower().lstrip("."), "application/octet-stream")


class All:
    """Filter that lets every file through."""

    def allows(self, extension: str) -> bool:
        return True

    def __eq__(self, other):
        return isinstance(other, All)

    def __hash__(self):
        return hash(All)

    def __repr__(self):
        return "All()"


@dataclass(frozen=True)
class Extensions:
    names: FrozenSet[str]

    def __post_init__(self):
        if not self.names:
            raise FilterError("extension filter needs at least one extension")
        for name in self.names:
            if not name or "." in name or "|" in name:
                raise FilterError(f"bad extension {name!r}")

    def allows(self, extension: str) -> bool:
        return extension.lower() in self.names


ExtensionFilter = Union[All, Extensions]


def parse_filter(raw: str) -> ExtensionFilter:
    """``"*"`` exposes everything; ``"html|css"`` only those extensions."""
    if raw == "*":
        return All()
    if not raw:
        raise FilterError("empty filter")
    pieces = [p.strip().lower() for p in raw.split("|")]
    if any(not p for p in pieces):
        raise FilterError(f"empty extension in filter {raw!r}")
    return Extensions(frozenset(pieces))


def _extension(name: str) -> str:
    stem, dot, ext = name.rpartition(".")
    return ext if dot and stem else ""


@dataclass
class StaticFiles:
    webroot: Optional[Path] = None
    exposed: set[str] = field(default_factory=set)

    @property
    def root(self) -> Path:
        """The configured webroot, or the process working directory."""
        root = Path(self.webroot) if self.webroot is not None else Path.cwd()
        if not root.is_dir():
            raise ConfigurationError(f"webroot is not a directory: {root}")
        return root.resolve()

    def set_webroot(self, directory) -> None:
        path = Path(directory)
        if not path.is_dir():
            raise ConfigurationError(f"webroot is not a directory: {directory}")
        self.webroot = path.resolve()

    def resolve(self, rel: str, root: Optional[Path] = None) -> Path:
        root = root or self.root
        target = (root / rel.lstrip("/")).resolve()
        if target != root and root not in target.parents:
            raise TraversalError(f"{rel!r} resolves outside the webroot")
        return target

    def file_contents(self, rel: str, root: Optional[Path] = None) -> bytes:
        target = self.resolve(rel, root)
        if not target.is_file():
            raise StaticNotFoundError(f"no such file: {rel}")
        return target.read_bytes()

    def expose_files(self, filt: ExtensionFilter, table: RouteTable) -> int:
        """Register a GET route for every file under the webroot that passes ``filt``.

        The walk is a snapshot; files added afterwards are not served.
        Symlinks that point outside the webroot are skipped.
        """
        root = self.root
        count = 0

        def fail(exc: OSError):
            raise ExposureError(f"cannot read {exc.filename}: {exc.strerror}") from exc

        for dirpath, dirnames, filenames in os.walk(root, onerror=fail):
            dirnames.sort()
            for name in sorted(filenames):
                full = Path(dirpath) / name
                if not full.is_file() or not filt.allows(_extension(name)):
                    continue
                rel = full.relative_to(root).as_posix()
                try:
                    self.resolve(rel, root)
                except TraversalError:
                    continue
                table.insert(HttpVerb.GET, PathPattern.literal("/" + rel), self._file_handler(root, rel))
                self.exposed.add(rel)
                count += 1
        return count

    def _file_handler(self, root: Path, rel: str):
        ctype = content_type_for(_extension(rel))

        def serve_file(request: Request) -> Response:
            try:
                data = self.file_contents(rel, root)
            except (TraversalError, FileNotFoundError):
                return Response(404, "Not found", [("Content-Type", "text/plain")])
            return Response(200, data, [("Content-Type", ctype)])

        return serve_file
