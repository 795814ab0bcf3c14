"""Brute-force route matching used to cross-check the hash-keyed table.

Deliberately shares no code with :mod:`keyroute.router`: patterns are
re-read from their raw text and every registered route is scanned in
registration order.
"""

from __future__ import annotations

import re
from typing import Any, Callable, Optional
from urllib.parse import unquote


def _pieces(path: str) -> list[str]:
    out = []
    for s in path.split("/"):
        if s != "":
            out.append(s)
    return out


def _segment_matches(spec: str, position: int, text: str, params: dict) -> bool:
    if spec[:1] == ":":
        if text == "":
            return False
        params[spec[1:]] = text
        return True
    if len(spec) >= 2 and spec[0] == "(" and spec[-1] == ")":
        if re.match("(?:" + spec[1:-1] + r")\Z", text) is None:
            return False
        params[str(position)] = text
        return True
    return spec == text


def linear_lookup(routes, verb: str, path: str) -> Optional[tuple[Any, dict[str, str]]]:
    """First route in ``routes`` matching ``verb`` and ``path``.

    ``routes`` is a sequence of ``(verb_name, raw_pattern, handler)`` in
    registration order. Returns ``(handler, params)`` or None.
    """
    wanted = [unquote(p) for p in _pieces(path)]
    for route_verb, raw, handler in routes:
        if route_verb != verb:
            continue
        specs = _pieces(raw)
        if len(specs) != len(wanted):
            continue
        params: dict[str, str] = {}
        ok = True
        for i in range(len(specs)):
            if not _segment_matches(specs[i], i + 1, wanted[i], params):
                ok = False
                break
        if ok:
            return handler, params
    return None


class LinearScanner:
    """Flat list of routes, scanned front to back on every lookup.

    Each route is pre-split once so the benchmark measures scanning cost and
    not repeated string parsing.
    """

    def __init__(self, routes):
        self._rows = []
        for verb, raw, handler in routes:
            specs = _pieces(raw)
            compiled = []
            for i, spec in enumerate(specs, start=1):
                if spec[:1] == ":":
                    compiled.append((1, spec[1:]))
                elif len(spec) >= 2 and spec[0] == "(" and spec[-1] == ")":
                    compiled.append((2, (re.compile("(?:" + spec[1:-1] + r")\Z"), str(i))))
                else:
                    compiled.append((0, spec))
            self._rows.append((verb, len(specs), compiled, handler))

    def lookup(self, verb: str, path: str) -> Optional[tuple[Callable, dict[str, str]]]:
        wanted = [unquote(p) for p in _pieces(path)]
        n = len(wanted)
        for row_verb, count, compiled, handler in self._rows:
            if row_verb != verb or count != n:
                continue
            params = {}
            for (kind, spec), text in zip(compiled, wanted):
                if kind == 0:
                    if spec != text:
                        break
                elif kind == 1:
                    params[spec] = text
                else:
                    rx, key = spec
                    if rx.match(text) is None:
                        break
                    params[key] = text
            else:
                return handler, params
        return None
