"""Typed exceptions for the remote environment client.

Transport problems and in-band server errors are kept apart so callers
can retry connections without masking protocol bugs. Every server error
code has a dedicated class; `error_for` maps a code to it.
"""

from __future__ import annotations


class ClientError(Exception):
    """Base class for everything this package raises on purpose."""


class ProtocolError(ClientError):
    """Broken framing: EOF mid-session, non-JSON reply, or bad sequence."""


class VersionMismatch(ClientError):
    """Server speaks a different protocol version; nothing is negotiated."""

    def __init__(self, client_version: int, server_version) -> None:
        super().__init__(
            f"client speaks protocol {client_version}, server speaks {server_version}"
        )
        self.client_version = client_version
        self.server_version = server_version


class ClosedHandleError(ClientError):
    """The handle was closed; open a new one instead of reusing it."""


class ServerError(ClientError):
    """An in-band error object reported by the server."""

    code = "error"

    def __init__(self, message: str, seq: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.seq = seq


class BadJsonError(ServerError):
    code = "bad_json"


class UnknownOpError(ServerError):
    code = "unknown_op"


class NoWorldError(ServerError):
    code = "no_world"


class BadActionError(ServerError):
    code = "bad_action"


class DoneWorldError(ServerError):
    code = "done_world"


class BadPresetError(ServerError):
    code = "bad_preset"


_BY_CODE = {
    cls.code: cls
    for cls in (
        BadJsonError,
        UnknownOpError,
        NoWorldError,
        BadActionError,
        DoneWorldError,
        BadPresetError,
    )
}


def error_for(code: str, message: str, seq: int | None = None) -> ServerError:
    """Build the typed exception for a server error code."""
    cls = _BY_CODE.get(code, ServerError)
    exc = cls(message, seq)
    if cls is ServerError:
        exc.code = code
    return exc
