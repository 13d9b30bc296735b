"""TCP environment server: one world per connection, JSON per line.

The protocol is newline-delimited JSON. Each request carries an `op`
and an optional `seq`; the response mirrors `seq` (or numbers itself
when the request had none). Ops:

  hello     {"op":"hello","version":1}            -> {"ok":bool,"version":1}
  make      {"op":"make","preset":...|"config":{...},"bundle":{...}}
  reset     {"op":"reset","seed":7}               -> {"obs":[...],"dim":N,...}
  step      {"op":"step","action":3}              -> {"obs":...,"reward":...,"done":...,"info":...}
  describe  {"op":"describe"}                     -> dims, action names, reward table
  close     {"op":"close"}                        -> {"ok":true}, then disconnect

Errors come back in-band as {"error": code, "message": ..., "seq": ...}
with code in {bad_json, unknown_op, no_world, bad_action, done_world,
bad_preset}; the session survives everything except oversized lines.
Sessions are fully isolated: no state is shared across connections.
Values ride plain JSON; Python's float encoding round-trips exactly, so
a wire-driven episode is bit-identical to an in-process one.
"""

from __future__ import annotations

import json
import socketserver
import threading

from . import obs as obs_mod
from .act import ACTION_PRESETS, action_count, decode
from .config import PRESET_NAMES, parse_config_dict, preset
from .engine import WorldState, new_world, step
from .errors import ConfigError
from .harness import PresetBundle
from .nav import NavState, nav_step
from .reward import compute_reward, reward_spec

PROTOCOL_VERSION = 1
DEFAULT_PORT = 7777
MAX_LINE = 1 << 20  # 1 MiB


class _Session:
    """Per-connection protocol state: at most one configured world."""

    def __init__(self):
        self.cfg = None
        self.bundle = PresetBundle()
        self.rspec = None
        self.world = None
        self.seq = -1

    # -- op handlers ------------------------------------------------------

    def handle(self, request: dict) -> tuple[dict, bool]:
        """Returns (response, keep_session_open)."""
        seq = request.get("seq")
        self.seq = seq if isinstance(seq, int) else self.seq + 1
        op = request.get("op")
        handler = {
            "hello": self._op_hello,
            "make": self._op_make,
            "reset": self._op_reset,
            "step": self._op_step,
            "describe": self._op_describe,
            "close": self._op_close,
        }.get(op)
        if handler is None:
            return self._error("unknown_op", f"unknown op {op!r}"), True
        return handler(request)

    def _reply(self, payload: dict) -> dict:
        payload["seq"] = self.seq
        return payload

    def _error(self, code: str, message: str) -> dict:
        return self._reply({"error": code, "message": message})

    def _op_hello(self, request: dict) -> tuple[dict, bool]:
        version = request.get("version", PROTOCOL_VERSION)
        return self._reply({"ok": version == PROTOCOL_VERSION, "version": PROTOCOL_VERSION}), True

    def _op_make(self, request: dict) -> tuple[dict, bool]:
        try:
            if "config" in request:
                cfg = parse_config_dict(request["config"])
            else:
                name = request.get("preset", "day_and_night")
                if name not in PRESET_NAMES:
                    return self._error("bad_preset", f"unknown preset {name!r}"), True
                cfg = preset(name)
        except ConfigError as exc:
            return self._error("bad_preset", str(exc)), True
        bundle = request.get("bundle", {})
        if not isinstance(bundle, dict):
            return self._error("bad_preset", "bundle must be an object"), True
        try:
            self.bundle = PresetBundle(
                obs=bundle.get("obs", "baseline"),
                act=bundle.get("act", "baseline9"),
                reward=bundle.get("reward", "dense"),
            )
            if cfg.kind == "survival":
                if self.bundle.obs not in obs_mod.WRAP_PRESETS:
                    raise ValueError(f"unknown observation preset {self.bundle.obs!r}")
                if self.bundle.act not in ACTION_PRESETS:
                    raise ValueError(f"unknown action preset {self.bundle.act!r}")
            self.rspec = reward_spec(self.bundle.reward)
        except ValueError as exc:
            return self._error("bad_preset", str(exc)), True
        self.cfg = cfg
        self.world = None
        dim = obs_mod.dimension(cfg, self.bundle.obs if cfg.kind == "survival" else "native")
        actions = action_count(self.bundle.act) if cfg.kind == "survival" else None
        payload = {"ok": True, "kind": cfg.kind, "dim": dim}
        if actions is not None:
            payload["actions"] = actions
        return self._reply(payload), True

    def _op_reset(self, request: dict) -> tuple[dict, bool]:
        if self.cfg is None:
            return self._error("no_world", "no configuration; send make first"), True
        seed = request.get("seed", 0)
        if isinstance(seed, bool) or not isinstance(seed, int):
            return self._error("bad_action", "seed must be an integer"), True
        self.world = new_world(self.cfg, seed)
        if isinstance(self.world, NavState):
            vec = [float(v) for v in self.world.observation()]
        else:
            vec = [float(v) for v in obs_mod.observe(self.world, self.bundle.obs)]
        return self._reply({"obs": vec, "dim": len(vec), "done": False, "info": {}}), True

    def _op_step(self, request: dict) -> tuple[dict, bool]:
        if self.world is None:
            return self._error("no_world", "no live world; send reset first"), True
        if isinstance(self.world, NavState):
            return self._step_nav(request)
        world: WorldState = self.world
        if world.done:
            return self._error("done_world", "episode is over; reset for a new one"), True
        action = request.get("action")
        n = action_count(self.bundle.act)
        if isinstance(action, bool) or not isinstance(action, int) or not 0 <= action < n:
            return self._error("bad_action", f"action must be an integer in [0, {n})"), True
        cmd = decode(self.bundle.act, action, world)
        out = step(world, cmd)
        reward = compute_reward(None, cmd, out, out.done, self.rspec)
        vec = [float(v) for v in obs_mod.observe(world, self.bundle.obs)]
        info = {"result": out.result}
        info.update(out.info)
        return self._reply({"obs": vec, "reward": reward, "done": out.done, "info": info}), True

    def _step_nav(self, request: dict) -> tuple[dict, bool]:
        state: NavState = self.world
        if state.done:
            return self._error("done_world", "episode is over; reset for a new one"), True
        action = request.get("action")
        ok = (
            isinstance(action, (list, tuple))
            and len(action) == 2
            and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in action)
        )
        if not ok:
            return self._error("bad_action", "action must be a [dx, dy] pair"), True
        self.world, vec, reward, done = nav_step(state, (action[0], action[1]))
        payload = {
            "obs": [float(v) for v in vec],
            "reward": float(reward),
            "done": done,
            "info": {},
        }
        return self._reply(payload), True

    def _op_describe(self, request: dict) -> tuple[dict, bool]:
        if self.cfg is None:
            return self._error("no_world", "no configuration; send make first"), True
        cfg = self.cfg
        if cfg.kind == "navigation":
            payload = {
                "ok": True,
                "kind": "navigation",
                "dim": 2,
                "horizon": cfg.nav.horizon,
                "offset_limit": cfg.nav.offset_limit,
            }
        else:
            payload = {
                "ok": True,
                "kind": "survival",
                "dim": obs_mod.dimension(cfg, self.bundle.obs),
                "actions": action_count(self.bundle.act),
                "action_names": list(ACTION_PRESETS[self.bundle.act]),
                "reward": {"variant": self.rspec.variant, "table": self.rspec.table},
                "obs": obs_mod.describe(cfg, self.bundle.obs),
            }
        payload["version"] = PROTOCOL_VERSION
        return self._reply(payload), True

    def _op_close(self, request: dict) -> tuple[dict, bool]:
        return self._reply({"ok": True}), False


class _Handler(socketserver.StreamRequestHandler):
    def handle(self):
        server: EdenServer = self.server
        if not server.try_admit():
            self.wfile.write(
                json.dumps({"error": "unknown_op", "message": "server at session capacity"}).encode()
                + b"\n"
            )
            return
        try:
            self.connection.settimeout(server.idle_timeout)
            session = _Session()
            while True:
                try:
                    line = self.rfile.readline(MAX_LINE + 1)
                except (TimeoutError, OSError):
                    return  # idle or broken connection: reap silently
                if not line:
                    return
                if len(line) > MAX_LINE:
                    self._send(session._error("bad_json", "line exceeds 1 MiB"))
                    return
                line = line.strip()
                if not line:
                    continue
                try:
                    request = json.loads(line)
                    if not isinstance(request, dict):
                        raise ValueError("request must be a JSON object")
                except ValueError as exc:
                    self._send(session._error("bad_json", f"unparseable request: {exc}"))
                    continue
                response, keep = session.handle(request)
                self._send(response)
                if not keep:
                    return
        finally:
            server.release()

    def _send(self, payload: dict) -> None:
        self.wfile.write(json.dumps(payload).encode("utf-8") + b"\n")


class EdenServer(socketserver.ThreadingTCPServer):
    """Threaded accept loop; every connection gets an isolated session."""

    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = DEFAULT_PORT,
                 max_sessions: int = 64, idle_timeout: float = 300.0):
        super().__init__((host, port), _Handler)
        self.max_sessions = max_sessions
        self.idle_timeout = idle_timeout
        self._active = 0
        self._lock = threading.Lock()

    @property
    def port(self) -> int:
        return self.server_address[1]

    def try_admit(self) -> bool:
        with self._lock:
            if self._active >= self.max_sessions:
                return False
            self._active += 1
            return True

    def release(self) -> None:
        with self._lock:
            self._active -= 1


def start_server(host: str = "127.0.0.1", port: int = 0, max_sessions: int = 64,
                 idle_timeout: float = 300.0) -> EdenServer:
    """Start a server on a background thread; caller owns shutdown()."""
    server = EdenServer(host, port, max_sessions, idle_timeout)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    return server


def serve(host: str = "127.0.0.1", port: int = DEFAULT_PORT, max_sessions: int = 64,
          idle_timeout: float = 300.0) -> None:
    """Run the accept loop in the foreground until interrupted."""
    with EdenServer(host, port, max_sessions, idle_timeout) as server:
        print(f"listening on {server.server_address[0]}:{server.port}", flush=True)
        try:
            server.serve_forever()
        except KeyboardInterrupt:
            pass
