"""A small HTTP framework whose router buckets routes by verb and path depth."""

from .app import App
from .errors import (
    CapacityError,
    ConfigurationError,
    KeyrouteError,
    MalformedPathError,
    ParseError,
    PatternError,
    PhaseError,
    StartupError,
    TraversalError,
    UnsupportedFeatureError,
)
from .messages import Headers, Request, Response
from .pipeline import CorsConfig, Pipeline, wrap_with_middleware
from .router import HttpVerb, RouteTable, compute_key, parse_pattern
from .wire import Server, ServerConfig, parse_request, serialize_response

__all__ = [
    "App",
    "CapacityError",
    "ConfigurationError",
    "CorsConfig",
    "Headers",
    "HttpVerb",
    "KeyrouteError",
    "MalformedPathError",
    "ParseError",
    "PatternError",
    "PhaseError",
    "Pipeline",
    "Request",
    "Response",
    "RouteTable",
    "Server",
    "ServerConfig",
    "StartupError",
    "TraversalError",
    "UnsupportedFeatureError",
    "compute_key",
    "parse_pattern",
    "parse_request",
    "serialize_response",
    "wrap_with_middleware",
]
