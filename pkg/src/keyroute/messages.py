"""Request and response values passed between the wire, the pipeline and handlers."""

from __future__ import annotations

from dataclasses import dataclass, field
from http import HTTPStatus
from typing import Any, Iterable, Iterator


class Headers:
    """Ordered header multimap with case-insensitive lookup.

    Names keep the casing they were added with; ``get``/``in``/``get_all``
    ignore case.
    """

    __slots__ = ("_items",)

    def __init__(self, items: Iterable[tuple[str, str]] = ()):
        self._items: list[tuple[str, str]] = [(str(k), str(v)) for k, v in items]

    def add(self, name: str, value: str) -> None:
        self._items.append((name, value))

    def set(self, name: str, value: str) -> None:
        self.remove(name)
        self._items.append((name, value))

    def remove(self, name: str) -> None:
        low = name.lower()
        self._items = [(k, v) for k, v in self._items if k.lower() != low]

    def get(self, name: str, default: str | None = None) -> str | None:
        low = name.lower()
        for k, v in self._items:
            if k.lower() == low:
                return v
        return default

    def get_all(self, name: str) -> list[str]:
        low = name.lower()
        return [v for k, v in self._items if k.lower() == low]

    def items(self) -> list[tuple[str, str]]:
        return list(self._items)

    def __contains__(self, name: object) -> bool:
        if not isinstance(name, str):
            return False
        low = name.lower()
        return any(k.lower() == low for k, _ in self._items)

    def __iter__(self) -> Iterator[tuple[str, str]]:
        return iter(self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Headers):
            return self._items == other._items
        return NotImplemented

    def __repr__(self) -> str:
        return f"Headers({self._items!r})"


@dataclass
class Request:
    verb: Any  # HttpVerb; typed loosely to avoid an import cycle with router
    path: str
    raw_query: str = ""
    query: dict[str, str] = field(default_factory=dict)
    headers: Headers = field(default_factory=Headers)
    raw_body: bytes = b""
    body: Any = ""
    parsed: bool = False
    params: dict[str, str] = field(default_factory=dict)
    attachments: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.headers, Headers):
            self.headers = Headers(self.headers)
        if self.raw_body and self.body == "":
            self.body = self.raw_body.decode("utf-8", errors="replace")

    @property
    def keep_alive(self) -> bool:
        tokens = ",".join(self.headers.get_all("Connection")).lower()
        return "keep-alive" in [t.strip() for t in tokens.split(",")]


@dataclass
class Response:
    status: int = 200
    body: bytes = b""
    headers: list[tuple[str, str]] = field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.body, str):
            self.body = self.body.encode("utf-8")
        elif not isinstance(self.body, bytes):
            self.body = bytes(self.body)
        if isinstance(self.headers, dict):
            self.headers = list(self.headers.items())
        else:
            self.headers = [(str(k), str(v)) for k, v in self.headers]
        if not 100 <= self.status <= 599:
            raise ValueError(f"status out of range: {self.status}")

    def header(self, name: str) -> str | None:
        low = name.lower()
        for k, v in self.headers:
            if k.lower() == low:
                return v
        return None

    def has_header(self, name: str) -> bool:
        return self.header(name) is not None

    @property
    def text(self) -> str:
        return self.body.decode("utf-8", errors="replace")

    @property
    def reason(self) -> str:
        try:
            return HTTPStatus(self.status).phrase
        except ValueError:
            return ""


def text_response(status: int, text: str, content_type: str = "text/plain; charset=utf-8") -> Response:
    return Response(status, text, [("Content-Type", content_type)])
