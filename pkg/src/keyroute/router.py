"""Hash-keyed route table.

Routes are bucketed by an integer key built from the verb's code and the
number of path segments, so a lookup only ever examines routes that share
both. Inside a bucket, candidates are tried in registration order and the
first one whose segments all match wins. Requests that match nothing are
answered by the fallback stored under key 0.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional
from urllib.parse import unquote

from .errors import CapacityError, MalformedPathError, PatternError, PhaseError
from .messages import Request, Response, text_response

Handler = Callable[[Request], Response]

MAX_SEGMENTS = 999
NOT_FOUND_KEY = 0


class HttpVerb(enum.Enum):
    GET = 1
    POST = 2
    PUT = 3
    DELETE = 4
    CONNECT = 5
    TRACE = 6
    HEAD = 7
    PATCH = 8
    OPTIONS = 9

    @classmethod
    def parse(cls, name: str) -> "HttpVerb":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(f"unknown HTTP verb: {name!r}") from None


def verb_code(verb: HttpVerb) -> int:
    return verb.value


def compute_key(verb: HttpVerb, count: int) -> int:
    """Bucket key for ``verb`` and a path of ``count`` segments."""
    if count < 0:
        raise ValueError("segment count must be non-negative")
    if count > MAX_SEGMENTS:
        raise CapacityError(f"path has {count} segments; at most {MAX_SEGMENTS} are supported")
    return verb.value * 1000 + count


def normalize_path(raw: str) -> str:
    if not raw.startswith("/"):
        raise MalformedPathError(f"path must start with '/': {raw!r}")
    return raw.rstrip("/") or "/"


def split_path(path: str) -> list[str]:
    """Non-empty, percent-decoded segments of a normalized path."""
    return [unquote(s) for s in path.split("/") if s]


def segment_count(path: str) -> int:
    return sum(1 for s in path.split("/") if s)


@dataclass(frozen=True)
class Literal:
    text: str


@dataclass(frozen=True)
class Named:
    name: str


@dataclass(frozen=True)
class Regex:
    source: str
    position: int
    compiled: re.Pattern = field(compare=False, repr=False)

    @property
    def key(self) -> str:
        return str(self.position)


Segment = Literal | Named | Regex

_LIT, _NAMED, _REGEX = 0, 1, 2


@dataclass(frozen=True)
class PathPattern:
    raw: str
    segments: tuple[Segment, ...]
    # (kind, payload, capture key) per segment; avoids isinstance checks on the hot path
    plan: tuple[tuple[int, object, str], ...] = field(compare=False, repr=False, default=())

    @classmethod
    def build(cls, raw: str, segments) -> "PathPattern":
        plan = []
        for seg in segments:
            if isinstance(seg, Literal):
                plan.append((_LIT, seg.text, ""))
            elif isinstance(seg, Named):
                plan.append((_NAMED, None, seg.name))
            else:
                plan.append((_REGEX, seg.compiled.fullmatch, seg.key))
        return cls(raw, tuple(segments), tuple(plan))

    @classmethod
    def literal(cls, path: str) -> "PathPattern":
        """Pattern whose segments are all literal, whatever characters they hold."""
        return cls.build(path, [Literal(s) for s in path.split("/") if s])

    @property
    def segment_count(self) -> int:
        return len(self.segments)

    def capture_keys(self) -> set[str]:
        return {key for kind, _, key in self.plan if kind != _LIT}


def parse_pattern(raw: str) -> PathPattern:
    """Parse route text such as ``/hola/:usr`` or ``/regex/(\\w+\\d+)``.

    ``:name`` binds the segment under ``name``; ``(expr)`` must match the whole
    segment and binds it under its 1-based position in the path.
    """
    raw = normalize_path(raw)
    segments: list[Segment] = []
    for pos, piece in enumerate((s for s in raw.split("/") if s), start=1):
        if piece.startswith(":"):
            name = piece[1:]
            if not name:
                raise PatternError(f"empty parameter name in {raw!r}")
            segments.append(Named(name))
        elif len(piece) >= 2 and piece.startswith("(") and piece.endswith(")"):
            source = piece[1:-1]
            try:
                compiled = re.compile(source)
            except re.error as exc:
                raise PatternError(f"bad regex segment {piece!r} in {raw!r}: {exc}") from None
            segments.append(Regex(source, pos, compiled))
        else:
            segments.append(Literal(piece))
    if len(segments) > MAX_SEGMENTS:
        raise CapacityError(f"pattern {raw!r} is deeper than {MAX_SEGMENTS} segments")
    return PathPattern.build(raw, segments)


def match_segments(pattern: PathPattern, parts: list[str]) -> Optional[dict[str, str]]:
    """Params bound by matching ``parts`` against ``pattern``, or None."""
    params: dict[str, str] = {}
    for (kind, payload, key), text in zip(pattern.plan, parts):
        if kind == _LIT:
            if payload != text:
                return None
        elif kind == _NAMED:
            if not text:
                return None
            params[key] = text
        else:
            if payload(text) is None:
                return None
            params[key] = text
    return params


@dataclass(frozen=True)
class RouteEntry:
    verb: HttpVerb
    pattern: PathPattern
    handler: Handler
    ordinal: int


class MatchResult(NamedTuple):
    handler: Handler
    params: dict[str, str]
    entry: RouteEntry


def default_not_found(request: Request) -> Response:
    return text_response(404, "Not found")


class RouteTable:
    """Routes bucketed by :func:`compute_key`.

    Key 0 is never produced for a route; it names the not-found handler,
    which lives in :attr:`not_found` rather than in a bucket.
    """

    def __init__(self):
        self.buckets: dict[int, list[RouteEntry]] = {}
        # per bucket: (segment plan, entry) pairs, so rejects skip attribute lookups
        self._scan: dict[int, list[tuple[tuple, RouteEntry]]] = {}
        self._not_found: Handler = default_not_found
        self._next_ordinal = 0
        self.frozen = False

    def _check_setup(self):
        if self.frozen:
            raise PhaseError("route table is frozen")

    def insert(self, verb: HttpVerb, pattern: PathPattern, handler: Handler) -> int:
        self._check_setup()
        key = compute_key(verb, pattern.segment_count)
        ordinal = self._next_ordinal
        self._next_ordinal += 1
        entry = RouteEntry(verb, pattern, handler, ordinal)
        self.buckets.setdefault(key, []).append(entry)
        self._scan.setdefault(key, []).append((pattern.plan, entry))
        return ordinal

    def add(self, verb: HttpVerb, pattern: str, handler: Handler) -> int:
        return self.insert(verb, parse_pattern(pattern), handler)

    def lookup(self, verb: HttpVerb, path: str) -> Optional[MatchResult]:
        parts = split_path(path)
        if len(parts) > MAX_SEGMENTS:
            return None
        candidates = self._scan.get(verb.value * 1000 + len(parts))
        if not candidates:
            return None
        for plan, entry in candidates:
            for (kind, payload, _), text in zip(plan, parts):
                if kind == _LIT:
                    if payload != text:
                        break
                elif kind == _REGEX and payload(text) is None:
                    break
            else:
                return MatchResult(entry.handler, match_segments(entry.pattern, parts), entry)
        return None

    @property
    def not_found(self) -> Handler:
        return self._not_found

    def set_not_found(self, handler: Handler) -> None:
        self._check_setup()
        self._not_found = handler

    def freeze(self) -> None:
        self.frozen = True

    def entries(self) -> Iterator[RouteEntry]:
        """All routes in registration order."""
        every = [e for bucket in self.buckets.values() for e in bucket]
        return iter(sorted(every, key=lambda e: e.ordinal))

    def __len__(self) -> int:
        return sum(len(b) for b in self.buckets.values())


def lookup(table: RouteTable, verb: HttpVerb, path: str) -> Optional[MatchResult]:
    return table.lookup(verb, path)


def insert_route(table: RouteTable, verb: HttpVerb, pattern: PathPattern, handler: Handler) -> int:
    return table.insert(verb, pattern, handler)


def set_not_found(table: RouteTable, handler: Handler) -> None:
    table.set_not_found(handler)
