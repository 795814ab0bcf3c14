"""HTTP/1.1 subset: request parsing, response serialization and the accept loop.

Only ``Content-Length`` framing is understood; chunked transfer coding and
pipelining are not. Connections stay open for further requests only when
the client sends ``Connection: keep-alive``.
"""

from __future__ import annotations

import io
import ipaddress
import logging
import socket
import socketserver
import threading
from dataclasses import dataclass
from typing import BinaryIO, Callable, Optional
from urllib.parse import unquote_plus

from .errors import ConnectionClosed, MalformedPathError, ParseError, StartupError, UnsupportedFeatureError
from .messages import Headers, Request, Response, text_response
from .router import HttpVerb, normalize_path

log = logging.getLogger(__name__)

MAX_HEADER_BYTES = 64 * 1024
MAX_BODY_BYTES = 8 * 1024 * 1024
KEEP_ALIVE_TIMEOUT = 5.0

_TOKEN_CHARS = frozenset("!#$%&'*+-.^_`|~0123456789abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ")


def parse_query(raw: str) -> dict[str, str]:
    """Decode ``a=1&b=x%20y`` style query text; later duplicates win."""
    out: dict[str, str] = {}
    if not raw:
        return out
    for piece in raw.split("&"):
        if not piece:
            continue
        name, _, value = piece.partition("=")
        out[unquote_plus(name)] = unquote_plus(value)
    return out


def _read_head(stream: BinaryIO) -> list[bytes]:
    lines: list[bytes] = []
    total = 0
    while True:
        line = stream.readline(MAX_HEADER_BYTES + 1 - total)
        if not line:
            if not lines and total == 0:
                raise ConnectionClosed("connection closed before a request arrived")
            raise ParseError("connection closed inside the header section")
        total += len(line)
        if total > MAX_HEADER_BYTES:
            raise ParseError("header section exceeds 64 KiB")
        if not line.endswith(b"\r\n"):
            raise ParseError("header lines must end with CRLF")
        if line == b"\r\n":
            if not lines:
                # tolerate a stray CRLF before the request line (RFC 9112 2.2)
                continue
            return lines
        lines.append(line[:-2])


def parse_request(stream: BinaryIO | bytes) -> Request:
    """Read exactly one request from ``stream``.

    Raises :class:`ParseError` (``status`` 400 or 413) on bad framing and
    :class:`ConnectionClosed` if the stream ends before any byte arrives.
    """
    if isinstance(stream, (bytes, bytearray)):
        stream = io.BytesIO(bytes(stream))
    lines = _read_head(stream)

    try:
        request_line = lines[0].decode("ascii")
    except UnicodeDecodeError:
        raise ParseError("request line is not ASCII") from None
    parts = request_line.split(" ")
    if len(parts) != 3 or not all(parts):
        raise ParseError(f"malformed request line: {request_line!r}")
    method, target, version = parts
    if version not in ("HTTP/1.1", "HTTP/1.0"):
        raise ParseError(f"unsupported protocol version: {version!r}")
    try:
        verb = HttpVerb[method]
    except KeyError:
        raise ParseError(f"unknown verb: {method!r}") from None

    raw_path, _, raw_query = target.partition("?")
    if "#" in raw_path or any(c.isspace() or ord(c) < 0x21 for c in target):
        raise ParseError(f"malformed request target: {target!r}")
    try:
        path = normalize_path(raw_path)
    except MalformedPathError as exc:
        raise ParseError(str(exc)) from None

    headers = Headers()
    for line in lines[1:]:
        try:
            text = line.decode("latin-1")
        except UnicodeDecodeError:  # pragma: no cover - latin-1 decodes everything
            raise ParseError("undecodable header") from None
        name, sep, value = text.partition(":")
        if not sep or not name or any(c not in _TOKEN_CHARS for c in name):
            raise ParseError(f"malformed header line: {text!r}")
        headers.add(name, value.strip(" \t"))

    if "Transfer-Encoding" in headers:
        raise ParseError("Transfer-Encoding is not supported")

    length = 0
    lengths = headers.get_all("Content-Length")
    if lengths:
        if len(set(lengths)) != 1 or not lengths[0].isdigit() or not lengths[0].isascii():
            raise ParseError(f"invalid Content-Length: {lengths!r}")
        length = int(lengths[0])
        if length > MAX_BODY_BYTES:
            raise ParseError("request body exceeds 8 MiB", status=413)

    body = b""
    if length:
        chunks = []
        remaining = length
        while remaining:
            chunk = stream.read(remaining)
            if not chunk:
                raise ParseError("connection closed inside the body")
            chunks.append(chunk)
            remaining -= len(chunk)
        body = b"".join(chunks)

    return Request(
        verb=verb,
        path=path,
        raw_query=raw_query,
        query=parse_query(raw_query),
        headers=headers,
        raw_body=body,
    )


def serialize_response(r: Response, keep_alive: bool = False) -> bytes:
    lines = [f"HTTP/1.1 {r.status} {r.reason}"]
    for name, value in r.headers:
        low = name.lower()
        if low in ("content-length", "connection"):
            continue
        lines.append(f"{name}: {value}")
    lines.append(f"Content-Length: {len(r.body)}")
    lines.append("Connection: keep-alive" if keep_alive else "Connection: close")
    head = "\r\n".join(lines) + "\r\n\r\n"
    return head.encode("latin-1", errors="replace") + r.body


def serialize_request(req: Request) -> bytes:
    """Wire form of ``req``; the inverse of :func:`parse_request` for plain requests."""
    target = req.path + (f"?{req.raw_query}" if req.raw_query else "")
    lines = [f"{req.verb.name} {target} HTTP/1.1"]
    lines += [f"{k}: {v}" for k, v in req.headers]
    return ("\r\n".join(lines) + "\r\n\r\n").encode("latin-1") + req.raw_body


@dataclass(frozen=True)
class ServerConfig:
    host: str = "127.0.0.1"
    port: int = 8086
    tls: Optional[tuple[str, str]] = None

    def __post_init__(self):
        try:
            ipaddress.ip_address(self.host)
        except ValueError:
            raise StartupError(f"host must be a literal IPv4 or IPv6 address: {self.host!r}") from None
        if not 1 <= int(self.port) <= 65535:
            raise StartupError(f"port out of range: {self.port}")


Dispatch = Callable[[Request], Response]


class _ConnectionHandler(socketserver.StreamRequestHandler):
    timeout = KEEP_ALIVE_TIMEOUT

    def handle(self):
        dispatch: Dispatch = self.server.dispatch
        while True:
            try:
                request = parse_request(self.rfile)
            except (ConnectionClosed, socket.timeout, ConnectionError):
                return
            except ParseError as exc:
                self._send(text_response(exc.status, str(exc)), keep_alive=False)
                return
            try:
                response = dispatch(request)
                if not isinstance(response, Response):
                    raise TypeError(f"handler returned {type(response).__name__}, not Response")
            except Exception:
                log.exception("handler failed for %s %s", request.verb.name, request.path)
                response = text_response(500, "Internal Server Error")
            keep = request.keep_alive
            if not self._send(response, keep_alive=keep) or not keep:
                return

    def _send(self, response: Response, keep_alive: bool) -> bool:
        try:
            self.wfile.write(serialize_response(response, keep_alive))
            self.wfile.flush()
            return True
        except (ConnectionError, socket.timeout):
            return False


class _TCPServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, config: ServerConfig, dispatch: Dispatch):
        self.address_family = socket.AF_INET6 if ":" in config.host else socket.AF_INET
        self.dispatch = dispatch
        super().__init__((config.host, config.port), _ConnectionHandler)


class Server:
    """A bound listener; call :meth:`serve_forever` or :meth:`start` (background thread)."""

    def __init__(self, config: ServerConfig, dispatch: Dispatch):
        if config.tls is not None:
            raise UnsupportedFeatureError("TLS is not implemented")
        try:
            self._server = _TCPServer(config, dispatch)
        except OSError as exc:
            raise StartupError(f"cannot bind {config.host}:{config.port}: {exc.strerror or exc}") from exc
        self.config = config
        self._thread: Optional[threading.Thread] = None

    @property
    def address(self) -> tuple[str, int]:
        return self._server.server_address[:2]

    def serve_forever(self) -> None:
        try:
            self._server.serve_forever(poll_interval=0.2)
        finally:
            self._server.server_close()

    def start(self) -> "Server":
        self._thread = threading.Thread(target=self.serve_forever, name="keyroute-server", daemon=True)
        self._thread.start()
        return self

    def shutdown(self) -> None:
        """Stop a server started with :meth:`start` and release the port."""
        if self._thread is not None:
            self._server.shutdown()
            self._thread.join()
            self._thread = None
        self._server.server_close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.shutdown()


def serve(config: ServerConfig, dispatch: Dispatch) -> None:
    """Bind and serve until :class:`KeyboardInterrupt` or ``shutdown``."""
    server = Server(config, dispatch)
    log.info("listening on %s:%s", *server.address)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        log.info("shutting down")
