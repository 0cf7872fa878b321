"""Local play service: session lifecycle over HTTP, live play over
WebSocket, transcript persistence on disk.

Wire protocol (``wire_v1``): every server message is a JSON object
``{"v": "wire_v1", "kind": ..., "seq": n, "payload": {...}}`` with a
per-session strictly increasing ``seq``.  Kinds: ``state`` (full
snapshot, never a delta), ``options``, ``pause``, ``event``,
``result``, ``error``.  The client sends ``input`` messages
``{"kind": "input", "payload": {"action": ..., ...}}``; actions are
``steer``, ``end_pause``, ``self_text``, ``choose_slot``,
``end_story``, and — in manual mode — ``advance`` (one engine frame,
for deterministic headless drivers).  Transcripts live at
``<log_dir>/<session-id>.<version>.log`` and are flushed after every
appended line, so an active session's file is always a valid prefix.

A second socket on the same session takes over: the old socket gets an
``error`` message (code ``socket_takeover``) and is closed.  A
disconnected game session holds still and auto-ends if no one returns
within the grace window (default 120 s).
"""

from __future__ import annotations

import asyncio
import os
from contextlib import suppress
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect
from fastapi.responses import JSONResponse, Response

from . import orchestrator, provider, sessionlog
from .engine import Direction, GameConfig, Phase
from .errors import (
    ConfigError,
    ConsistencyError,
    PhaseError,
    ProviderUnavailable,
    SequencingError,
    UsageError,
    VersionError,
)
from .orchestrator import Choice, SessionStatus, SessionVersion, TickInput

WIRE_VERSION = "wire_v1"
DEFAULT_PORT = 8473
DEFAULT_GRACE_SECONDS = 120.0

_DIRECTIONS = {
    "up": Direction.UP,
    "down": Direction.DOWN,
    "left": Direction.LEFT,
    "right": Direction.RIGHT,
}

_CONFIG_FIELDS = {
    "map_size",
    "initial_lives",
    "initial_snake_length",
    "tick_interval_ms",
    "pause_seconds",
    "self_write_pause_seconds",
    "obstacles_per_turn",
    "option_word_limit",
    "ending_word_limit",
    "temperature_low",
    "temperature_high",
}


@dataclass
class _Managed:
    session: orchestrator.Session
    log_path: Path
    manual: bool
    grace_seconds: float
    seq: int = 0
    lock: asyncio.Lock = field(default_factory=asyncio.Lock)
    socket: Optional[WebSocket] = None
    driver: Optional[asyncio.Task] = None
    steer: Optional[Direction] = None
    wake: asyncio.Event = field(default_factory=asyncio.Event)
    reconnected: asyncio.Event = field(default_factory=asyncio.Event)

    def next_seq(self) -> int:
        self.seq += 1
        return self.seq


def _snapshot(managed: _Managed) -> dict[str, Any]:
    session = managed.session
    base: dict[str, Any] = {
        "session_id": session.id,
        "version": session.version.value,
        "status": session.status.value,
        "story": session.story,
        "story_word_count": len(session.story.split()),
        "turns_completed": len(session.decision_times),
        "holding": session.holding,
    }
    if session.version is SessionVersion.GAME and session.game is not None:
        game = session.game
        base.update(
            {
                "phase": game.phase.value,
                "map_size": game.config.map_size,
                "lives": game.lives,
                "turn": game.turn_index,
                "snake": {
                    "body": [[p.x, p.y] for p in game.snake.body],
                    "heading": game.snake.heading.name.lower(),
                },
                "candies": [
                    {
                        "kind": int(c.kind),
                        "slot": c.option_slot,
                        "position": [c.position.x, c.position.y],
                        "inert": c.inert,
                    }
                    for c in game.candies
                ],
                "obstacles": sorted([p.x, p.y] for p in game.obstacles),
                "eaten": {int(k): v for k, v in game.eaten_counts.items() if v},
                "snake_length": len(game.snake),
                "self_write_open": game.self_write_open,
                "pause_remaining_ms": game.pause_remaining_ms,
                "tick_interval_ms": game.config.tick_interval_ms,
            }
        )
    return base


def _options_payload(managed: _Managed) -> Optional[dict[str, Any]]:
    session = managed.session
    if session.pending_options is None:
        return None
    low, high = session.pending_options
    options = [
        {"slot": 0, "temperature": low.temperature, "text": low.text},
        {"slot": 1, "temperature": high.temperature, "text": high.text},
    ]
    if session.version is SessionVersion.GAME and session.game is not None:
        by_slot = {c.option_slot: c for c in session.game.candies}
        for entry in options:
            candy = by_slot.get(entry["slot"])
            if candy is not None:
                entry["kind"] = int(candy.kind)
        self_candy = by_slot.get(2)
        if self_candy is not None:
            options.append(
                {"slot": 2, "kind": int(self_candy.kind), "text": self_candy.text}
            )
    return {"options": options}


def _result_payload(session: orchestrator.Session) -> dict[str, Any]:
    result = orchestrator.finalize(session)
    return {
        "full_story": result.full_story,
        "story_word_count": result.story_word_count,
        "snake_length": result.snake_length,
        "candies_eaten": (
            {int(k): v for k, v in result.candies_eaten.items() if v}
            if result.candies_eaten is not None
            else None
        ),
        "decision_times": list(session.decision_times),
    }


def _event_payload(event) -> dict[str, Any]:
    return {
        "type": event.type.value,
        "kind": int(event.kind) if event.kind is not None else None,
        "slot": event.option_slot,
        "cause": event.cause.value if event.cause is not None else None,
        "count": event.count,
        "text": event.text,
    }


def create_app(
    log_dir: str | Path = "logs",
    grace_seconds: float = DEFAULT_GRACE_SECONDS,
    force_offline: bool = False,
    ui_dir: Optional[str | Path] = None,
) -> FastAPI:
    app = FastAPI(title="snake-story service")
    registry: dict[str, _Managed] = {}
    log_root = Path(log_dir)

    def flush_log(managed: _Managed) -> None:
        text = sessionlog.serialize_session_log(managed.session.session_log())
        managed.log_path.parent.mkdir(parents=True, exist_ok=True)
        managed.log_path.write_text(text, encoding="utf-8", newline="")

    async def send(managed: _Managed, kind: str, payload: dict[str, Any]) -> None:
        socket = managed.socket
        if socket is None:
            return
        message = {
            "v": WIRE_VERSION,
            "kind": kind,
            "seq": managed.next_seq(),
            "payload": payload,
        }
        try:
            await socket.send_json(message)
        except Exception:
            managed.socket = None

    async def send_turn_opening(managed: _Managed) -> None:
        options = _options_payload(managed)
        if options is not None:
            await send(managed, "options", options)
        session = managed.session
        if (
            session.version is SessionVersion.GAME
            and session.game is not None
            and session.game.phase is Phase.PAUSED
        ):
            await send(
                managed,
                "pause",
                {
                    "seconds": session.game.pause_remaining_ms / 1000.0,
                    "self_write": session.game.self_write_open,
                },
            )

    async def send_closing(managed: _Managed) -> None:
        await send(managed, "result", _result_payload(managed.session))
        socket = managed.socket
        managed.socket = None
        if socket is not None:
            with suppress(Exception):
                await socket.close()

    async def apply_frame(managed: _Managed, tick: TickInput) -> None:
        """One advance_game frame plus the resulting wire traffic."""
        session = managed.session
        _, events = orchestrator.advance_game(session, tick)
        flush_log(managed)
        for event in events:
            await send(managed, "event", _event_payload(event))
        await send(managed, "state", _snapshot(managed))
        if session.status is SessionStatus.ENDED:
            await send_closing(managed)
        elif events and session.game is not None and session.game.phase is Phase.PAUSED:
            await send_turn_opening(managed)

    async def drive(managed: _Managed) -> None:
        """Auto-mode pacing: ticks while moving, countdown while paused."""
        session = managed.session
        loop = asyncio.get_running_loop()
        try:
            while session.status is SessionStatus.ACTIVE:
                if managed.socket is None:
                    managed.reconnected.clear()
                    try:
                        await asyncio.wait_for(
                            managed.reconnected.wait(), timeout=managed.grace_seconds
                        )
                    except asyncio.TimeoutError:
                        async with managed.lock:
                            session.abort()
                            flush_log(managed)
                        return
                    continue
                game = session.game
                assert game is not None
                if game.phase is Phase.PAUSED:
                    deadline = loop.time() + game.pause_remaining_ms / 1000.0
                    managed.wake.clear()
                    remaining = deadline - loop.time()
                    while (
                        session.status is SessionStatus.ACTIVE
                        and game.phase is Phase.PAUSED
                        and remaining > 0
                        and managed.socket is not None
                    ):
                        with suppress(asyncio.TimeoutError):
                            await asyncio.wait_for(
                                managed.wake.wait(), timeout=remaining
                            )
                        managed.wake.clear()
                        game = session.game
                        assert game is not None
                        remaining = deadline - loop.time()
                    if (
                        session.status is SessionStatus.ACTIVE
                        and game.phase is Phase.PAUSED
                        and managed.socket is not None
                    ):
                        async with managed.lock:
                            await apply_frame(managed, TickInput(end_pause=True))
                elif game.phase is Phase.MOVING:
                    await asyncio.sleep(game.config.tick_interval_ms / 1000.0)
                    if managed.socket is None or session.status is not SessionStatus.ACTIVE:
                        continue
                    async with managed.lock:
                        steer, managed.steer = managed.steer, None
                        await apply_frame(managed, TickInput(steer=steer))
                else:
                    # Awaiting texts: the provider failed earlier; retry.
                    try:
                        async with managed.lock:
                            await apply_frame(managed, TickInput())
                            await send_turn_opening(managed)
                    except ProviderUnavailable:
                        await asyncio.sleep(2.0)
        except Exception:
            async with managed.lock:
                if session.status is SessionStatus.ACTIVE:
                    session.abort()
                    flush_log(managed)
            raise

    @app.post("/sessions", status_code=201)
    async def create_session(body: dict[str, Any]) -> JSONResponse:
        version_name = body.get("version", "game")
        try:
            version = SessionVersion(version_name)
        except ValueError:
            return JSONResponse(
                {"error": f"unknown version {version_name!r}"}, status_code=400
            )
        overrides = body.get("config") or {}
        unknown = set(overrides) - _CONFIG_FIELDS
        if unknown:
            return JSONResponse(
                {"error": f"unknown config fields: {sorted(unknown)}"},
                status_code=400,
            )
        seed = body.get("seed", 0)
        offline = True if force_offline else body.get("offline")
        if offline is None:
            offline = not os.environ.get(provider.API_KEY_ENV)
        if not offline and not os.environ.get(provider.API_KEY_ENV):
            return JSONResponse(
                {"error": "online mode requires an API key in the environment"},
                status_code=503,
            )
        try:
            config = GameConfig(**overrides)
            session = orchestrator.start_session(
                version,
                config,
                provider.config_from_env(offline=offline, offline_seed=seed),
                seed=seed,
            )
        except (ConfigError, UsageError, TypeError) as exc:
            return JSONResponse({"error": str(exc)}, status_code=400)
        except ProviderUnavailable as exc:
            return JSONResponse({"error": str(exc)}, status_code=503)
        managed = _Managed(
            session=session,
            log_path=log_root / f"{session.id}.{version.value}.log",
            manual=bool(body.get("manual", False)),
            grace_seconds=float(body.get("grace_seconds", grace_seconds)),
        )
        registry[session.id] = managed
        flush_log(managed)
        return JSONResponse(
            {"session_id": session.id, "ws_url": f"/sessions/{session.id}/ws"},
            status_code=201,
        )

    @app.get("/sessions")
    async def list_sessions() -> list[dict[str, Any]]:
        return [
            {
                "session_id": managed.session.id,
                "version": managed.session.version.value,
                "status": managed.session.status.value,
                "turns_completed": len(managed.session.decision_times),
            }
            for managed in registry.values()
        ]

    @app.get("/sessions/{session_id}/log")
    async def get_log(session_id: str) -> Response:
        managed = registry.get(session_id)
        if managed is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return Response(
            content=managed.log_path.read_bytes(),
            media_type="text/plain; charset=utf-8",
        )

    @app.get("/sessions/{session_id}")
    async def get_session(session_id: str) -> Response:
        managed = registry.get(session_id)
        if managed is None:
            return JSONResponse({"error": "unknown session"}, status_code=404)
        return JSONResponse(_snapshot(managed))

    async def handle_input(managed: _Managed, payload: dict[str, Any]) -> None:
        session = managed.session
        action = payload.get("action")
        if session.status is not SessionStatus.ACTIVE:
            raise SequencingError("session already ended")
        if session.version is SessionVersion.GAME:
            if action == "steer":
                direction = _DIRECTIONS.get(str(payload.get("direction")).lower())
                if direction is None:
                    raise UsageError(f"unknown direction {payload.get('direction')!r}")
                game = session.game
                assert game is not None
                if game.phase is not Phase.MOVING:
                    raise PhaseError("not moving")
                managed.steer = direction
                if managed.manual:
                    return
            elif action == "end_pause":
                await apply_frame(managed, TickInput(end_pause=True))
                managed.wake.set()
            elif action == "self_text":
                text = payload.get("text")
                if not isinstance(text, str) or not text.strip():
                    raise UsageError("self_text requires non-empty text")
                await apply_frame(managed, TickInput(self_text=text))
                managed.wake.set()
            elif action == "advance":
                if not managed.manual:
                    raise UsageError("advance is only valid in manual mode")
                steer, managed.steer = managed.steer, None
                await apply_frame(managed, TickInput(steer=steer))
            elif action == "end_story":
                raise SequencingError(
                    "the game version ends only when life points are exhausted"
                )
            else:
                raise UsageError(f"unknown action {action!r}")
        else:
            if action == "choose_slot":
                slot = payload.get("slot")
                if slot not in (0, 1):
                    raise UsageError("choose_slot requires slot 0 or 1")
                choice = Choice.slot0() if slot == 0 else Choice.slot1()
            elif action == "self_text":
                text = payload.get("text")
                if not isinstance(text, str) or not text.strip():
                    raise UsageError("self_text requires non-empty text")
                choice = Choice.self_text(text)
            elif action == "end_story":
                choice = Choice.end_story()
            elif action in ("steer", "end_pause", "advance"):
                raise VersionError(f"{action} does not apply to the non-game version")
            else:
                raise UsageError(f"unknown action {action!r}")
            orchestrator.submit_choice(session, choice)
            flush_log(managed)
            await send(managed, "state", _snapshot(managed))
            if session.status is SessionStatus.ENDED:
                await send_closing(managed)
            else:
                await send_turn_opening(managed)

    @app.websocket("/sessions/{session_id}/ws")
    async def session_socket(websocket: WebSocket, session_id: str) -> None:
        managed = registry.get(session_id)
        if managed is None:
            await websocket.close(code=4404)
            return
        await websocket.accept()
        old = managed.socket
        if old is not None:
            managed.socket = None
            message = {
                "v": WIRE_VERSION,
                "kind": "error",
                "seq": managed.next_seq(),
                "payload": {
                    "code": "socket_takeover",
                    "message": "another client took over this session",
                },
            }
            with suppress(Exception):
                await old.send_json(message)
            with suppress(Exception):
                await old.close()
        managed.socket = websocket
        managed.reconnected.set()

        async with managed.lock:
            await send(managed, "state", _snapshot(managed))
            if managed.session.status is SessionStatus.ENDED:
                await send_closing(managed)
            else:
                await send_turn_opening(managed)
        if (
            not managed.manual
            and managed.session.version is SessionVersion.GAME
            and managed.session.status is SessionStatus.ACTIVE
            and (managed.driver is None or managed.driver.done())
        ):
            managed.driver = asyncio.create_task(drive(managed))

        try:
            while True:
                message = await websocket.receive_json()
                if managed.socket is not websocket:
                    break  # taken over
                if not isinstance(message, dict) or message.get("kind") != "input":
                    await send(
                        managed,
                        "error",
                        {"code": "bad_message", "message": "expected an input message"},
                    )
                    continue
                payload = message.get("payload") or {}
                try:
                    if payload.get("action") in ("steer",) and not managed.manual:
                        # steering is buffered, no lock needed beyond assignment
                        await handle_input(managed, payload)
                    else:
                        async with managed.lock:
                            await handle_input(managed, payload)
                except (
                    PhaseError,
                    SequencingError,
                    VersionError,
                    UsageError,
                    ConsistencyError,
                ) as exc:
                    await send(
                        managed,
                        "error",
                        {"code": type(exc).__name__, "message": str(exc)},
                    )
                except ProviderUnavailable as exc:
                    await send(
                        managed,
                        "error",
                        {"code": "provider_unavailable", "message": str(exc)},
                    )
        except WebSocketDisconnect:
            pass
        except RuntimeError:
            pass  # receive after close
        finally:
            if managed.socket is websocket:
                managed.socket = None

    @app.get("/healthz")
    async def healthz() -> dict[str, str]:
        return {"status": "ok", "wire": WIRE_VERSION}

    if ui_dir is not None and Path(ui_dir).is_dir():
        # Browser frontend as static assets; mounted last so the API
        # routes above keep precedence.
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def run(
    host: str = "127.0.0.1",
    port: int = DEFAULT_PORT,
    log_dir: str | Path = "logs",
    force_offline: bool = False,
    ui_dir: Optional[str | Path] = None,
) -> None:
    """Blocking entry point used by the command line."""
    import uvicorn

    uvicorn.run(
        create_app(log_dir=log_dir, force_offline=force_offline, ui_dir=ui_dir),
        host=host,
        port=port,
    )
