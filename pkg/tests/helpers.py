"""Shared test utilities: loopback HTTP client and random route tables."""

from __future__ import annotations

import random
import socket
from contextlib import closing

from keyroute.router import HttpVerb

ROUTE_VERBS = [v for v in HttpVerb if v is not HttpVerb.OPTIONS]
WORDS = ["a", "b", "ab", "x1", "data", "12", "hola"]
REGEXES = [r"\d+", r"[ab]+", r"\w+\d+", r"a|b", r"x.?"]


def free_port() -> int:
    with closing(socket.socket()) as s:
        s.bind(("127.0.0.1", 0))
        return s.getsockname()[1]


class WireResponse:
    def __init__(self, status, headers, body):
        self.status = status
        self.headers = headers
        self.body = body

    def header(self, name):
        for k, v in self.headers:
            if k.lower() == name.lower():
                return v
        return None

    @property
    def text(self):
        return self.body.decode()


def read_response(f) -> WireResponse:
    status_line = f.readline().decode("latin-1")
    if not status_line:
        raise ConnectionError("no response")
    status = int(status_line.split(" ")[1])
    headers = []
    while True:
        line = f.readline().decode("latin-1")
        if line in ("\r\n", ""):
            break
        name, _, value = line.rstrip("\r\n").partition(":")
        headers.append((name, value.strip()))
    length = int(next(v for k, v in headers if k.lower() == "content-length"))
    body = f.read(length) if length else b""
    return WireResponse(status, headers, body)


def send_raw(address, payload: bytes, responses: int = 1) -> list[WireResponse]:
    with socket.create_connection(address, timeout=5) as sock:
        sock.sendall(payload)
        f = sock.makefile("rb")
        return [read_response(f) for _ in range(responses)]


def request(address, verb, target, headers=(), body=b"") -> WireResponse:
    if isinstance(body, str):
        body = body.encode()
    lines = [f"{verb} {target} HTTP/1.1", f"Host: {address[0]}"]
    lines += [f"{k}: {v}" for k, v in headers]
    if body:
        lines.append(f"Content-Length: {len(body)}")
    payload = ("\r\n".join(lines) + "\r\n\r\n").encode() + body
    return send_raw(address, payload)[0]


def random_pattern(rng: random.Random) -> str:
    depth = rng.randint(0, 6)
    segs = []
    for i in range(depth):
        roll = rng.random()
        if roll < 0.6:
            segs.append(rng.choice(WORDS))
        elif roll < 0.8:
            segs.append(":" + rng.choice(["id", "usr", "x", "name"]) + str(i))
        else:
            segs.append("(" + rng.choice(REGEXES) + ")")
    return "/" + "/".join(segs)


def random_table_spec(rng: random.Random, max_routes: int = 200):
    """List of ``(verb, pattern, handler)``; every handler is a distinct object."""
    routes = []
    for i in range(rng.randint(0, max_routes)):
        def handler(request, _i=i):
            return None
        routes.append((rng.choice(ROUTE_VERBS), random_pattern(rng), handler))
    return routes


def random_probe(rng: random.Random, routes):
    if routes and rng.random() < 0.5:
        verb, pattern, _ = rng.choice(routes)
        segs = []
        for seg in pattern.strip("/").split("/"):
            if not seg:
                continue
            segs.append(rng.choice(WORDS) if seg.startswith((":", "(")) else seg)
        if rng.random() < 0.3:
            verb = rng.choice(ROUTE_VERBS)
        return verb, "/" + "/".join(segs)
    depth = rng.randint(0, 6)
    return rng.choice(ROUTE_VERBS), "/" + "/".join(rng.choice(WORDS) for _ in range(depth))


MALFORMED_REQUESTS = [
    b"BLORP / HTTP/1.1\r\n\r\n",
    b"get / HTTP/1.1\r\n\r\n",
    b"GET / HTTP/2.0\r\n\r\n",
    b"GET /\r\n\r\n",
    b"GET  / HTTP/1.1\r\n\r\n",
    b"GET / HTTP/1.1 extra\r\n\r\n",
    b"GET data HTTP/1.1\r\n\r\n",
    b"GET http://example.com/ HTTP/1.1\r\n\r\n",
    b"GET /a#frag HTTP/1.1\r\n\r\n",
    b"GET / HTTP/1.1\nHost: x\n\n",
    b"GET / HTTP/1.1\r\nHost x\r\n\r\n",
    b"GET / HTTP/1.1\r\n: novalue\r\n\r\n",
    b"GET / HTTP/1.1\r\nBad Name: v\r\n\r\n",
    b"POST / HTTP/1.1\r\nContent-Length: abc\r\n\r\n",
    b"POST / HTTP/1.1\r\nContent-Length: -1\r\n\r\n",
    b"POST / HTTP/1.1\r\nContent-Length: 1\r\nContent-Length: 2\r\n\r\nab",
    b"POST / HTTP/1.1\r\nContent-Length: 10\r\n\r\nshort",
    b"POST / HTTP/1.1\r\nTransfer-Encoding: chunked\r\n\r\n0\r\n\r\n",
    b"GET / HTTP/1.1\r\nHost: x\r\n",
    b"GET / HTTP/1.1\r\nX: " + b"a" * (70 * 1024) + b"\r\n\r\n",
    b"POST / HTTP/1.1\r\nContent-Length: 9000000\r\n\r\n",
    b"\xff\xfe / HTTP/1.1\r\n\r\n",
    b"GET /a\x00b HTTP/1.1\r\n\r\n",
]

_TOKENS = "abcdefghijklmnopqrstuvwxyz0123456789-"


def random_wire_request(rng: random.Random, verbs):
    """``(verb, path, raw_query, headers, body)`` for a well-formed request."""
    verb = rng.choice(verbs)
    segs = ["".join(rng.choice(_TOKENS + "%20.~") for _ in range(rng.randint(1, 6)))
            for _ in range(rng.randint(0, 5))]
    path = "/" + "/".join(s.strip("/") or "x" for s in segs)
    query = "&".join(
        f"{rng.choice(['a', 'b', 'q'])}={''.join(rng.choice(_TOKENS) for _ in range(rng.randint(0, 4)))}"
        for _ in range(rng.randint(0, 3))
    )
    headers = []
    for _ in range(rng.randint(0, 5)):
        name = rng.choice(["X-A", "x-b", "Accept", "User-Agent", "X-Multi", "x-multi"])
        value = "".join(rng.choice(_TOKENS + " ,;=/") for _ in range(rng.randint(1, 12))).strip() or "v"
        headers.append((name, value))
    body = bytes(rng.randrange(256) for _ in range(rng.choice([0, 0, 1, 17, 300])))
    if body:
        headers.append(("Content-Length", str(len(body))))
    return verb, path, query, headers, body


def encode_request(verb, path, query, headers, body) -> bytes:
    target = path + ("?" + query if query else "")
    lines = [f"{verb} {target} HTTP/1.1"] + [f"{k}: {v}" for k, v in headers]
    return ("\r\n".join(lines) + "\r\n\r\n").encode("latin-1") + body
