"""Command line: ``keyroute serve`` runs the demo app, ``keyroute bench`` times the router."""

from __future__ import annotations

import argparse
import json
import logging
import signal
import sys

from .app import App
from .demo import build_demo
from .errors import KeyrouteError

EXIT_OK, EXIT_FAILURE, EXIT_STARTUP = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_FAILURE, f"{self.prog}: error: {message}\n")


def _header_pair(text: str) -> tuple[str, str]:
    name, sep, value = text.partition("=")
    if not sep or not name:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    return name, value


def _count(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="keyroute", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    serve = sub.add_parser("serve", help="run the demo application")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8086)
    serve.add_argument("--root", help="webroot for static files")
    serve.add_argument("--expose", metavar="FILTER", help='expose webroot files: "*" or "html|css"')
    serve.add_argument("--cors", action="store_true", help="enable CORS with the default settings")
    serve.add_argument("--always", action="append", type=_header_pair, default=[], metavar="NAME=VALUE",
                       help="header added to every response (repeatable)")
    serve.add_argument("-v", "--verbose", action="store_true")

    bench = sub.add_parser("bench", help="compare hash-keyed lookup with a linear scan")
    bench.add_argument("--routes", type=_count, default=10_000)
    bench.add_argument("--lookups", type=_count, default=100_000)
    bench.add_argument("--seed", type=int, default=42)
    return parser


def make_app(args) -> App:
    app = build_demo()
    if args.always:
        app.headers_always(args.always)
    if args.cors:
        app.use_cors()
    if args.root:
        app.set_webroot(args.root)
    if args.expose:
        app.expose_files(args.expose)
    return app


def cmd_serve(args) -> int:
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(message)s")
    try:
        app = make_app(args)
    except KeyrouteError as exc:
        print(f"keyroute: {exc}", file=sys.stderr)
        return EXIT_FAILURE

    def _stop(signum, frame):
        raise KeyboardInterrupt

    signal.signal(signal.SIGTERM, _stop)
    try:
        app.start(host=args.host, port=args.port)
    except KeyrouteError as exc:
        print(f"keyroute: {exc}", file=sys.stderr)
        return EXIT_STARTUP
    return EXIT_OK


def cmd_bench(args) -> int:
    from .bench import run_bench

    report = run_bench(args.routes, args.lookups, args.seed)
    print(json.dumps(report.as_dict()))
    return EXIT_OK if report.mismatches == 0 else EXIT_FAILURE


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        return cmd_serve(args)
    return cmd_bench(args)


if __name__ == "__main__":
    sys.exit(main())
