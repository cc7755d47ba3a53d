"""Live-session HTTP service for the arena client.

Synchronous protocol: the human environment posts one move, the
service advances the machine until it passes and replies with every
machine move made.  Sessions live in memory and are evicted after an
idle timeout.

    POST /sessions {formula_id | formula_text, strategy_id}
    GET  /sessions/{id}
    POST /sessions/{id}/moves {address, payload}
    GET  /corpus

Addresses are the transcript form ("-" for the root, "L/R" paths);
payloads are "L"/"R" or decimal numerals.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel

from .corpus import load_corpus
from .engine import (
    IllegalMoveError,
    Move,
    Player,
    Position,
    Verdict,
    apply_move,
    format_address,
    format_move,
    initial_position,
    legal_moves,
    parse_address,
    target_kind,
    winner,
)
from .parser import ParseError, parse_formula
from .session import payload_bits
from .strategies import Agent, BUILTIN_NAMES, CostMeter, builtin
from .syntax import (
    And,
    BlindAll,
    BlindExists,
    ChAll,
    ChAnd,
    ChExists,
    ChOr,
    Formula,
    Or,
    print_formula,
)

IDLE_TIMEOUT = 30 * 60
MACHINE_MOVE_CAP = 500


def verdict_text(v: Verdict) -> str:
    if v.is_top:
        return "⊤ wins"
    if v.is_bot:
        return "⊥ wins"
    return f"unknown: {v.reason}"


@dataclass
class LiveSession:
    id: str
    formula_text: str
    strategy_name: str
    pos: Position
    agent: Agent
    meter: CostMeter
    lock: threading.Lock = field(default_factory=threading.Lock)
    last_access: float = field(default_factory=time.monotonic)
    machine_bits: list[tuple[int, int]] = field(default_factory=list)
    max_env_bits: int = 0
    space_peak: int = 0
    rounds: int = 0
    notes: list[str] = field(default_factory=list)


def position_tree(f: Formula, prefix: tuple[str, ...] = ()) -> dict:
    """Structured rendering of the current position: parallel nodes
    carry children at extended addresses, accessible choice nodes carry
    their address and owner, and the subgames of an unresolved choice
    come as collapsed text (they are unreachable until chosen)."""
    if isinstance(f, (And, Or)):
        return {
            "kind": "par_and" if isinstance(f, And) else "par_or",
            "children": [position_tree(f.left, prefix + ("L",)),
                         position_tree(f.right, prefix + ("R",))],
        }
    if isinstance(f, (BlindAll, BlindExists)):
        return {
            "kind": "blind_all" if isinstance(f, BlindAll) else "blind_exists",
            "var": f.var,
            "children": [position_tree(f.body, prefix)],
        }
    if isinstance(f, (ChAnd, ChOr)):
        return {
            "kind": "choice_and" if isinstance(f, ChAnd) else "choice_or",
            "owner": "B" if isinstance(f, ChAnd) else "T",
            "address": format_address(prefix),
            "collapsed": [print_formula(f.left), print_formula(f.right)],
        }
    if isinstance(f, (ChAll, ChExists)):
        return {
            "kind": "choice_all" if isinstance(f, ChAll) else "choice_exists",
            "owner": "B" if isinstance(f, ChAll) else "T",
            "address": format_address(prefix),
            "var": f.var,
            "collapsed": [print_formula(f.body)],
        }
    return {"kind": "atom", "text": print_formula(f)}


class CreateSession(BaseModel):
    formula_id: str | None = None
    formula_text: str | None = None
    strategy_id: str | None = None


class PostMove(BaseModel):
    address: str
    payload: int | str


def create_app(corpus_dir=None, budget: int = 65536,
               idle_timeout: float = IDLE_TIMEOUT) -> FastAPI:
    app = FastAPI(title="clarithmetic game arena service")
    corpus = load_corpus(corpus_dir)
    sessions: dict[str, LiveSession] = {}
    store_lock = threading.Lock()

    def evict_idle() -> None:
        now = time.monotonic()
        with store_lock:
            dead = [sid for sid, s in sessions.items()
                    if now - s.last_access > idle_timeout]
            for sid in dead:
                del sessions[sid]

    def get_session(sid: str) -> LiveSession:
        evict_idle()
        with store_lock:
            s = sessions.get(sid)
        if s is None:
            raise HTTPException(status_code=404, detail=f"no session {sid!r}")
        s.last_access = time.monotonic()
        return s

    def advance_machine(s: LiveSession) -> list[Move]:
        replies: list[Move] = []
        for _ in range(MACHINE_MOVE_CAP):
            m = s.agent.propose(s.pos, s.pos.moves)
            if m is None:
                break
            s.pos = apply_move(s.pos, m)
            s.machine_bits.append((s.max_env_bits, payload_bits(m.payload)))
            s.space_peak = max(s.space_peak, s.pos.size())
            replies.append(m)
        return replies

    def env_options(s: LiveSession) -> list[dict]:
        out = []
        for m in legal_moves(s.pos, Player.BOT):
            kind = target_kind(s.pos, m.address)
            entry = {"address": format_address(m.address), "kind": kind}
            if kind == "binary":
                entry["options"] = ["L", "R"]
            out.append(entry)
        return out

    def state_body(s: LiveSession, replies: list[Move] | None = None) -> dict:
        options = env_options(s)
        v = winner(s.pos, budget)
        finished = not options
        body = {
            "session_id": s.id,
            "formula": s.formula_text,
            "strategy": s.strategy_name,
            "position": print_formula(s.pos.current),
            "position_tree": position_tree(s.pos.current),
            "legal_env_moves": options,
            "status": "finished" if finished else "ongoing",
            "verdict": verdict_text(v) if finished else None,
            "transcript": [format_move(m) for m in s.pos.moves],
            "complexity": {
                "time": s.rounds + s.meter.forward_steps,
                "space": s.space_peak,
                "amplitude": s.machine_bits,
                "compositions": s.meter.compositions,
            },
            "notes": s.notes,
        }
        if replies is not None:
            body["machine_replies"] = [
                {"address": format_address(m.address), "payload": m.payload}
                for m in replies]
        return body

    @app.get("/corpus")
    def corpus_list() -> dict:
        return {"entries": [
            {"id": e.id, "formula": e.formula_text, "description": e.description,
             "has_strategy": e.strategy_kind is not None}
            for e in corpus]}

    @app.post("/sessions")
    def create(req: CreateSession) -> dict:
        evict_idle()
        if req.formula_id:
            if req.formula_id not in corpus.entries:
                raise HTTPException(status_code=404,
                                    detail=f"no corpus entry {req.formula_id!r}")
            entry = corpus[req.formula_id]
            formula = entry.formula
            formula_text = entry.formula_text
            strategy_id = req.strategy_id or req.formula_id
        elif req.formula_text:
            try:
                formula = parse_formula(req.formula_text)
            except ParseError as e:
                raise HTTPException(status_code=400, detail=f"syntax error: {e}")
            formula_text = req.formula_text
            if not req.strategy_id:
                raise HTTPException(status_code=400,
                                    detail="formula_text needs a strategy_id")
            strategy_id = req.strategy_id
        else:
            raise HTTPException(status_code=400,
                                detail="give formula_id or formula_text")
        if strategy_id in BUILTIN_NAMES:
            strategy = builtin(strategy_id)
        elif strategy_id in corpus.entries and corpus[strategy_id].strategy_kind:
            strategy = corpus.strategy(strategy_id)
        else:
            raise HTTPException(status_code=404,
                                detail=f"no strategy {strategy_id!r}")
        from .syntax import alpha_eq
        if not alpha_eq(strategy.formula, formula):
            raise HTTPException(
                status_code=400,
                detail=f"strategy {strategy_id!r} targets a different formula: "
                       f"{print_formula(strategy.formula)}")
        meter = CostMeter()
        s = LiveSession(
            id=uuid.uuid4().hex[:12],
            formula_text=formula_text,
            strategy_name=strategy_id,
            pos=initial_position(formula),
            agent=strategy.session(meter),
            meter=meter,
        )
        s.space_peak = s.pos.size()
        s.rounds += 1
        replies = advance_machine(s)
        with store_lock:
            sessions[s.id] = s
        return state_body(s, replies)

    @app.get("/sessions/{sid}")
    def get_state(sid: str) -> dict:
        s = get_session(sid)
        with s.lock:
            return state_body(s)

    @app.post("/sessions/{sid}/moves")
    def post_move(sid: str, req: PostMove) -> dict:
        s = get_session(sid)
        with s.lock:
            try:
                address = parse_address(req.address)
            except ValueError as e:
                raise HTTPException(status_code=400, detail=str(e))
            payload: int | str = req.payload
            if isinstance(payload, str) and payload not in ("L", "R"):
                if payload.isdigit():
                    payload = int(payload)
                else:
                    raise HTTPException(status_code=400,
                                        detail=f"bad payload {req.payload!r}")
            move = Move(Player.BOT, address, payload)
            try:
                s.pos = apply_move(s.pos, move)
            except IllegalMoveError as e:
                raise HTTPException(status_code=409, detail=f"illegal move: {e.reason}")
            s.rounds += 1
            s.max_env_bits = max(s.max_env_bits, payload_bits(payload))
            s.space_peak = max(s.space_peak, s.pos.size())
            replies = advance_machine(s)
            notes = getattr(s.agent, "notes", None)
            if notes:
                s.notes = list(notes)
            return state_body(s, replies)

    return app
