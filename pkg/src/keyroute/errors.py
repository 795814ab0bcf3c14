"""Exception types raised by keyroute."""


class KeyrouteError(Exception):
    """Base class for every error raised by the framework."""


class CapacityError(KeyrouteError):
    """Path is deeper than the route key scheme can represent."""


class MalformedPathError(KeyrouteError):
    pass


class PatternError(KeyrouteError):
    pass


class PhaseError(KeyrouteError):
    """A setup-only call was made after the app started (or start ran twice)."""


class ConfigurationError(KeyrouteError):
    pass


class UnsupportedFeatureError(KeyrouteError):
    pass


class StartupError(KeyrouteError):
    pass


class ParseError(KeyrouteError):
    """Request could not be framed; ``status`` is the HTTP reply to send."""

    def __init__(self, message, status=400):
        super().__init__(message)
        self.status = status


class ConnectionClosed(KeyrouteError):
    """Peer closed the connection before sending any request bytes."""


class BodyParseError(KeyrouteError):
    """A registered body parser rejected the payload."""


class TraversalError(KeyrouteError):
    """Resolved file path falls outside the webroot."""


class StaticNotFoundError(KeyrouteError, FileNotFoundError):
    pass


class FilterError(KeyrouteError):
    pass


class ExposureError(KeyrouteError):
    pass
