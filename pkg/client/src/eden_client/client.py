"""Blocking line-JSON client for the environment server.

`RemoteEnv` owns one TCP session and exposes the usual episodic
reset/step surface. Every value is handed back exactly as the server
encoded it: the client never casts, rounds, or reorders anything, so a
wire-driven episode is bit-identical to an in-process one.
"""

from __future__ import annotations

import json
import socket

from .errors import ClosedHandleError, ProtocolError, VersionMismatch, error_for

PROTOCOL_VERSION = 1
DEFAULT_PORT = 7777


class RemoteEnv:
    """One live server session. Context-manager friendly.

    Pass exactly one of `preset` (a server-known name) or `config` (a
    full config object). `bundle` may pin observation/action/reward
    preset ids. Dimensions are cached from the post-make describe call.
    """

    def __init__(
        self,
        host: str = "127.0.0.1",
        port: int = DEFAULT_PORT,
        preset: str | None = None,
        config: dict | None = None,
        bundle: dict | None = None,
        timeout: float = 30.0,
        protocol_version: int = PROTOCOL_VERSION,
    ) -> None:
        if (preset is None) == (config is None):
            raise ValueError("pass exactly one of preset or config")
        self.host = host
        self.port = port
        self.bundle = dict(bundle) if bundle else {}
        self._seq = 0
        self._closed = False
        self._sock = socket.create_connection((host, port), timeout=timeout)
        self._reader = self._sock.makefile("r", encoding="utf-8")

        hello = self._call("hello", version=protocol_version)
        if not hello.get("ok", False):
            server_version = hello.get("version")
            self.close()
            raise VersionMismatch(protocol_version, server_version)

        payload: dict = {"config": config} if config is not None else {"preset": preset}
        if self.bundle:
            payload["bundle"] = self.bundle
        made = self._call("make", **payload)
        self.kind: str = made["kind"]
        self.obs_dim: int = made["dim"]
        self.action_count: int | None = made.get("actions")

        described = self._call("describe")
        self.obs_dim = described["dim"]
        if "actions" in described:
            self.action_count = described["actions"]

    # -- episodic surface ---------------------------------------------------

    def reset(self, seed: int = 0) -> list:
        """Start a fresh episode; returns the first observation."""
        return self._call("reset", seed=seed)["obs"]

    def step(self, action) -> tuple[list, float, bool, dict]:
        """Apply one action; returns (observation, reward, done, info)."""
        reply = self._call("step", action=action)
        return reply["obs"], reply["reward"], reply["done"], reply.get("info", {})

    def describe(self) -> dict:
        """The server's live description of the bound world."""
        return self._call("describe")

    # -- lifecycle ----------------------------------------------------------

    def close(self) -> None:
        """Close the session; idempotent. Later calls raise."""
        if self._closed:
            return
        self._closed = True
        try:
            self._send({"op": "close", "seq": self._next_seq()})
            self._reader.readline()
        except OSError:
            pass
        finally:
            try:
                self._reader.close()
            except OSError:
                pass
            self._sock.close()

    def __enter__(self) -> "RemoteEnv":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- wire ---------------------------------------------------------------

    def _next_seq(self) -> int:
        self._seq += 1
        return self._seq

    def _send(self, payload: dict) -> None:
        self._sock.sendall(json.dumps(payload).encode("utf-8") + b"\n")

    def _call(self, op: str, **fields) -> dict:
        if self._closed:
            raise ClosedHandleError("session is closed")
        seq = self._next_seq()
        request = {"op": op, "seq": seq}
        request.update(fields)
        self._send(request)
        line = self._reader.readline()
        if not line:
            self._closed = True
            raise ProtocolError(f"server closed the connection during {op!r}")
        try:
            reply = json.loads(line)
        except ValueError as exc:
            raise ProtocolError(f"unparseable reply to {op!r}: {exc}") from None
        if not isinstance(reply, dict):
            raise ProtocolError(f"reply to {op!r} is not an object")
        if reply.get("seq") != seq:
            raise ProtocolError(f"reply seq {reply.get('seq')} != request seq {seq}")
        if "error" in reply:
            raise error_for(reply["error"], reply.get("message", ""), reply.get("seq"))
        return reply


def connect(
    host: str = "127.0.0.1",
    port: int = DEFAULT_PORT,
    preset: str = "day_and_night",
    **kwargs,
) -> RemoteEnv:
    """Convenience constructor mirroring RemoteEnv's signature."""
    return RemoteEnv(host=host, port=port, preset=preset, **kwargs)
