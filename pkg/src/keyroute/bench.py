"""Router micro-benchmark: hash-keyed table against a flat linear scan."""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass

from .oracle import LinearScanner
from .router import HttpVerb, RouteTable, parse_pattern

BENCH_VERBS = [v for v in HttpVerb if v is not HttpVerb.OPTIONS]
_WORDS = [
    "api", "users", "items", "orders", "data", "files", "admin", "search",
    "v1", "v2", "status", "hola", "report", "cart", "blog", "tags",
]


@dataclass
class BenchReport:
    route_count: int
    lookup_count: int
    hash_mean_ns: float
    linear_mean_ns: float
    speedup: float
    mismatches: int

    def as_dict(self) -> dict:
        return asdict(self)


def _handler(i):
    def handler(request):  # pragma: no cover - never invoked by the bench
        return None

    handler.route_id = i
    return handler


def generate_routes(n: int, rng: random.Random):
    """``n`` routes as ``(verb, pattern, handler)``; ~20% carry a parameter segment."""
    routes = []
    for i in range(n):
        verb = rng.choice(BENCH_VERBS)
        depth = rng.randint(1, 6)
        segs = [f"{rng.choice(_WORDS)}{rng.randrange(1000)}" for _ in range(depth)]
        if rng.random() < 0.2:
            pos = rng.randrange(depth)
            segs[pos] = f":p{pos}" if rng.random() < 0.5 else r"(\d+)"
        routes.append((verb, "/" + "/".join(segs), _handler(i)))
    return routes


def _concrete_path(pattern: str, rng: random.Random) -> str:
    out = []
    for seg in pattern.strip("/").split("/"):
        if seg.startswith(":") or seg.startswith("("):
            out.append(str(rng.randrange(10**6)))
        else:
            out.append(seg)
    return "/" + "/".join(out)


def generate_lookups(routes, m: int, rng: random.Random):
    """``m`` ``(verb, path)`` probes; ~80% target a registered route."""
    lookups = []
    for _ in range(m):
        if routes and rng.random() < 0.8:
            verb, pattern, _ = rng.choice(routes)
            lookups.append((verb, _concrete_path(pattern, rng)))
        else:
            depth = rng.randint(1, 6)
            path = "/" + "/".join(f"miss{rng.randrange(10**6)}" for _ in range(depth))
            lookups.append((rng.choice(BENCH_VERBS), path))
    return lookups


def run_bench(routes: int = 10_000, lookups: int = 100_000, seed: int = 42) -> BenchReport:
    rng = random.Random(seed)
    route_specs = generate_routes(routes, rng)
    probes = generate_lookups(route_specs, lookups, rng)

    table = RouteTable()
    for verb, pattern, handler in route_specs:
        table.insert(verb, parse_pattern(pattern), handler)
    table.freeze()
    scanner = LinearScanner([(v.name, p, h) for v, p, h in route_specs])

    clock = time.perf_counter_ns
    t0 = clock()
    hashed = [table.lookup(v, p) for v, p in probes]
    t1 = clock()
    linear = [scanner.lookup(v.name, p) for v, p in probes]
    t2 = clock()

    mismatches = 0
    for h, l in zip(hashed, linear):
        got = None if h is None else (h.handler, h.params)
        if got != l:
            mismatches += 1

    count = max(len(probes), 1)
    hash_mean = (t1 - t0) / count
    linear_mean = (t2 - t1) / count
    return BenchReport(
        route_count=routes,
        lookup_count=lookups,
        hash_mean_ns=round(hash_mean, 1),
        linear_mean_ns=round(linear_mean, 1),
        speedup=round(linear_mean / hash_mean, 3) if hash_mean else 0.0,
        mismatches=mismatches,
    )
