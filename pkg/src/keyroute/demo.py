"""The example application served by ``keyroute serve``."""

from __future__ import annotations

import json

from .app import App
from .messages import Request, Response

VERB_BODIES = {
    "GET": "test text Get",
    "POST": "test text Post",
    "PUT": "test text Put",
    "DELETE": "test text Delete",
    "CONNECT": "test text Connect",
    "TRACE": "test text Trace",
    "HEAD": "test text head",
    "PATCH": "test text Patch",
}


def authenticate(request: Request):
    if request.params.get("status") != "authenticated":
        return Response(403, "Unauthenticated. Please signup!")
    request.attachments["authenticated"] = True
    return None


def _verb_handler(text):
    return lambda request: Response(200, text)


def _data_post(request: Request) -> Response:
    if request.parsed and isinstance(request.body, dict):
        return Response(
            200,
            f"I did something! {request.body.get('query', '')}",
            [("Content-Type", "text/plain")],
        )
    return Response(200, VERB_BODIES["POST"])


def build_demo(app: App | None = None) -> App:
    """Register the example routes on ``app`` (a fresh one if omitted)."""
    app = app or App()
    app.register_body_parser("application/json", json.loads)

    app.get("/data", _verb_handler(VERB_BODIES["GET"]))
    app.post("/data", _data_post)
    for verb in ("PUT", "DELETE", "CONNECT", "TRACE", "HEAD", "PATCH"):
        app.register(verb, "/data", _verb_handler(VERB_BODIES[verb]))

    app.get("/hola/:usr", lambda r: Response(200, f"<b>Hello {r.params['usr']}!</b>"))
    app.get("/regex/(\\w+\\d+)", lambda r: Response(200, f"datos {r.params['2']}"))
    app.get("/verify/:status", lambda r: Response(200, "<b>verify !</b>"), middleware=[authenticate])
    return app
