"""Typed TCP client for the eden environment server."""

from .client import DEFAULT_PORT, PROTOCOL_VERSION, RemoteEnv, connect
from .errors import (
    BadActionError,
    BadJsonError,
    BadPresetError,
    ClientError,
    ClosedHandleError,
    DoneWorldError,
    NoWorldError,
    ProtocolError,
    ServerError,
    UnknownOpError,
    VersionMismatch,
    error_for,
)

__all__ = [
    "BadActionError",
    "BadJsonError",
    "BadPresetError",
    "ClientError",
    "ClosedHandleError",
    "DEFAULT_PORT",
    "DoneWorldError",
    "NoWorldError",
    "PROTOCOL_VERSION",
    "ProtocolError",
    "RemoteEnv",
    "ServerError",
    "UnknownOpError",
    "VersionMismatch",
    "connect",
    "error_for",
]

__version__ = "0.1.0"
