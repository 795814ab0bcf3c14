"""Application facade: route registration per verb, configuration, start."""

from __future__ import annotations

import logging
from typing import Callable, Optional, Sequence

from .errors import PhaseError, UnsupportedFeatureError
from .messages import Request, Response
from .pipeline import BodyParser, CorsConfig, Middleware, Pipeline, wrap_with_middleware
from .router import Handler, HttpVerb, RouteTable, parse_pattern
from .staticfs import ExtensionFilter, StaticFiles, parse_filter
from .wire import Server, ServerConfig

log = logging.getLogger(__name__)


class App:
    """Collects routes and settings during setup, then serves them.

    Every mutating method raises :class:`PhaseError` once :meth:`start` (or
    :meth:`start_background`) has been called.
    """

    def __init__(self):
        self.table = RouteTable()
        self.pipeline = Pipeline(self.table)
        self.statics = StaticFiles()
        self.running = False

    def _check_setup(self):
        if self.running:
            raise PhaseError("app is already running; configuration is frozen")

    # -- routes ---------------------------------------------------------

    def register(
        self,
        verb: HttpVerb | str,
        pattern: str,
        handler: Handler,
        middleware: Optional[Sequence[Middleware]] = None,
    ) -> int:
        self._check_setup()
        if isinstance(verb, str):
            verb = HttpVerb.parse(verb)
        parsed = parse_pattern(pattern)
        return self.table.insert(verb, parsed, wrap_with_middleware(handler, middleware or ()))

    def get(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.GET, pattern, handler, middleware)

    def post(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.POST, pattern, handler, middleware)

    def put(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.PUT, pattern, handler, middleware)

    def delete(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.DELETE, pattern, handler, middleware)

    def connect(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.CONNECT, pattern, handler, middleware)

    def trace(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.TRACE, pattern, handler, middleware)

    def head(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.HEAD, pattern, handler, middleware)

    def patch(self, pattern, handler, middleware=None):
        return self.register(HttpVerb.PATCH, pattern, handler, middleware)

    def route(self, verbs: str | Sequence[str | HttpVerb], pattern: str, middleware=None) -> Callable[[Handler], Handler]:
        """Decorator form; ``verbs`` may be ``"POST|PUT"`` or a list."""
        if isinstance(verbs, str):
            verbs = verbs.split("|")

        def decorate(handler: Handler) -> Handler:
            for verb in verbs:
                self.register(verb, pattern, handler, middleware)
            return handler

        return decorate

    def not_found(self, handler: Handler) -> Handler:
        self._check_setup()
        self.table.set_not_found(handler)
        return handler

    # -- pipeline configuration -----------------------------------------

    def headers_always(self, pairs) -> None:
        self._check_setup()
        self.pipeline.headers_always(pairs)

    def use_cors(
        self,
        allow_origins: str = "*",
        allow_headers: str = "Origin, Content-Type, Accept",
        allow_methods: str = "GET,POST,PUT,DELETE",
        max_age: str = "178000",
    ) -> None:
        self._check_setup()
        self.pipeline.use_cors(CorsConfig(allow_origins, allow_headers, allow_methods, str(max_age)))

    def register_body_parser(self, content_type: str, parser: BodyParser) -> None:
        self._check_setup()
        self.pipeline.register_body_parser(content_type, parser)

    # -- static files ---------------------------------------------------

    def set_webroot(self, directory) -> None:
        self._check_setup()
        self.statics.set_webroot(directory)

    def file(self, rel: str) -> bytes:
        return self.statics.file_contents(rel)

    def expose_files(self, filt: str | ExtensionFilter = "*") -> int:
        self._check_setup()
        if isinstance(filt, str):
            filt = parse_filter(filt)
        return self.statics.expose_files(filt, self.table)

    # -- running --------------------------------------------------------

    def freeze(self) -> None:
        self._check_setup()
        self.pipeline.freeze()
        self.running = True

    def dispatch(self, request: Request) -> Response:
        return self.pipeline.dispatch(request)

    def _prepare(self, host: str, port: int, tls) -> Server:
        self._check_setup()
        if tls is not None:
            raise UnsupportedFeatureError("TLS is not implemented; serve behind a TLS-terminating proxy")
        server = Server(ServerConfig(host, port), self.dispatch)
        self.freeze()
        return server

    def start(self, host: str = "127.0.0.1", port: int = 8086, tls: Optional[tuple[str, str]] = None) -> None:
        """Freeze configuration and serve until interrupted."""
        server = self._prepare(host, port, tls)
        log.info("serving on %s:%s", *server.address)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            log.info("interrupted; shutting down")

    def start_background(self, host: str = "127.0.0.1", port: int = 8086, tls=None) -> Server:
        """Like :meth:`start` but serves from a daemon thread and returns the server."""
        return self._prepare(host, port, tls).start()
