"""From a parsed request to a response: routing, body parsing, middleware,
the not-found fallback, CORS preflight routes and always-on headers."""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Optional, Sequence

from .errors import BodyParseError, ConfigurationError, PhaseError
from .messages import Request, Response, text_response
from .router import Handler, HttpVerb, RouteTable

BodyParser = Callable[[str], Any]
# Returns None to continue with the same request, a Request to continue with
# that one, or a Response to stop the chain.
Middleware = Callable[[Request], Optional["Request | Response"]]

_MEDIA_TYPE = re.compile(r"^[a-z0-9!#$&^_.+-]+/[a-z0-9!#$&^_.+-]+$")

CORS_HEADER_NAMES = (
    "Access-Control-Allow-Origin",
    "Access-Control-Allow-Headers",
    "Access-Control-Allow-Methods",
    "Access-Control-Max-Age",
)


@dataclass(frozen=True)
class CorsConfig:
    allow_origins: str = "*"
    allow_headers: str = "Origin, Content-Type, Accept"
    allow_methods: str = "GET,POST,PUT,DELETE"
    max_age: str = "178000"

    def __post_init__(self):
        for name in ("allow_origins", "allow_headers", "allow_methods", "max_age"):
            if not str(getattr(self, name)):
                raise ConfigurationError(f"CORS setting {name} must be non-empty")

    def headers(self) -> list[tuple[str, str]]:
        values = (self.allow_origins, self.allow_headers, self.allow_methods, str(self.max_age))
        return list(zip(CORS_HEADER_NAMES, values))


def media_type(content_type: str) -> str:
    """``"Application/JSON; charset=utf-8"`` -> ``"application/json"``."""
    return content_type.split(";", 1)[0].strip().lower()


def apply_headers(response: Response, pairs: Sequence[tuple[str, str]]) -> Response:
    """Copy of ``response`` with each pair added unless a same-named header exists."""
    present = {k.lower() for k, _ in response.headers}
    missing = []
    for name, value in pairs:
        if name.lower() not in present:
            present.add(name.lower())
            missing.append((name, value))
    if not missing:
        return response
    return replace(response, headers=response.headers + missing)


def wrap_with_middleware(handler: Handler, chain: Sequence[Middleware]) -> Handler:
    if not chain:
        return handler
    chain = tuple(chain)

    def wrapped(request: Request) -> Response:
        for middleware in chain:
            outcome = middleware(request)
            if isinstance(outcome, Response):
                return outcome
            if isinstance(outcome, Request):
                request = outcome
            elif outcome is not None:
                raise TypeError(f"middleware returned {type(outcome).__name__}")
        return handler(request)

    wrapped.__wrapped__ = handler
    return wrapped


def _coerce(result: Any) -> Response:
    if isinstance(result, Response):
        return result
    if isinstance(result, (str, bytes)):
        return Response(200, result)
    raise TypeError(f"handler returned {type(result).__name__}, expected Response")


@dataclass
class Pipeline:
    table: RouteTable = field(default_factory=RouteTable)
    always_headers: list[tuple[str, str]] = field(default_factory=list)
    cors: Optional[CorsConfig] = None
    parsers: dict[str, BodyParser] = field(default_factory=dict)
    frozen: bool = False
    _effective_headers: tuple[tuple[str, str], ...] = ()

    def _check_setup(self):
        if self.frozen:
            raise PhaseError("pipeline is frozen")

    def headers_always(self, pairs) -> None:
        self._check_setup()
        if isinstance(pairs, dict):
            pairs = pairs.items()
        self.always_headers.extend((str(k), str(v)) for k, v in pairs)

    def use_cors(self, cfg: CorsConfig) -> None:
        self._check_setup()
        self.cors = cfg

    def register_body_parser(self, content_type: str, parser: BodyParser) -> None:
        self._check_setup()
        if not _MEDIA_TYPE.match(content_type):
            raise ConfigurationError(f"expected a lower-case media type without parameters, got {content_type!r}")
        self.parsers[content_type] = parser

    def _current_headers(self) -> Sequence[tuple[str, str]]:
        if self.frozen:
            return self._effective_headers
        pairs = list(self.always_headers)
        if self.cors is not None:
            pairs.append(("Access-Control-Allow-Origin", self.cors.allow_origins))
        return pairs

    def apply_always_headers(self, response: Response) -> Response:
        return apply_headers(response, self._current_headers())

    def parse_body(self, content_type: Optional[str], raw: str) -> tuple[Any, bool]:
        """Return ``(body, parsed)``; raises :class:`BodyParseError` if a parser fails."""
        if content_type is None:
            return raw, False
        parser = self.parsers.get(media_type(content_type))
        if parser is None:
            return raw, False
        try:
            return parser(raw), True
        except Exception as exc:
            raise BodyParseError(str(exc) or type(exc).__name__) from exc

    def _synthesize_preflight(self) -> int:
        cfg = self.cors
        headers = cfg.headers()

        def preflight(request: Request) -> Response:
            return Response(204, b"", list(headers))

        existing = {e.pattern.raw for e in self.table.entries() if e.verb is HttpVerb.OPTIONS}
        added = 0
        for entry in list(self.table.entries()):
            raw = entry.pattern.raw
            if raw in existing:
                continue
            existing.add(raw)
            self.table.insert(HttpVerb.OPTIONS, entry.pattern, preflight)
            added += 1
        return added

    def freeze(self) -> None:
        if self.frozen:
            return
        if self.cors is not None:
            self._synthesize_preflight()
        self._effective_headers = tuple(self._current_headers())
        self.frozen = True
        self.table.freeze()

    def dispatch(self, request: Request) -> Response:
        match = self.table.lookup(request.verb, request.path)
        if match is None:
            response = _coerce(self.table.not_found(request))
        else:
            request.params = match.params
            try:
                request.body, request.parsed = self.parse_body(
                    request.headers.get("Content-Type"), request.body
                )
            except BodyParseError as exc:
                response = text_response(400, f"Bad request body: {exc}")
            else:
                response = _coerce(match.handler(request))
        return self.apply_always_headers(response)
