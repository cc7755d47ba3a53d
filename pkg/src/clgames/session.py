"""Play sessions: a strategy against an environment adapter.

Scheduling is a fair alternating poll, environment first, then the
machine, with explicit passes; a session ends after a full round of
mutual passes, or at the step limit.  Passes are not moves and are not
recorded in the run.

The complexity report counts polling rounds plus the internal
forwarding steps of composed strategies as time; space is the peak
symbol size of the position over the run; amplitude pairs the running
maximum environment payload size with the size of each machine
payload, in bits of the binary numeral (payload 0 has size 1, and the
L/R payloads of binary choices count as 1 bit).
"""

from __future__ import annotations

import random
import sys
from dataclasses import dataclass

from .engine import (
    IllegalMoveError,
    Move,
    Payload,
    Player,
    Position,
    Run,
    Verdict,
    apply_move,
    evaluate_run,
    format_move,
    initial_position,
    legal_moves,
    parse_move,
    target_kind,
    unknown,
)
from .strategies import CostMeter, Strategy
from .syntax import Formula, alpha_eq, print_formula


@dataclass(frozen=True)
class Limits:
    max_steps: int = 200
    budget: int = 65536


def payload_bits(p: Payload) -> int:
    if isinstance(p, int):
        return 1 if p == 0 else p.bit_length()
    return 1  # L/R


@dataclass(frozen=True)
class ComplexityReport:
    time_steps: int
    space_peak: int
    amplitude: tuple[tuple[int, int], ...]  # (max env bits so far, machine bits)
    compositions: int = 0
    forward_steps: int = 0


@dataclass(frozen=True)
class Transcript:
    formula: Formula
    valuation: dict[str, int]
    run: Run
    verdict: Verdict
    report: ComplexityReport
    notes: tuple[str, ...] = ()

    def render(self) -> str:
        lines = [format_move(m) for m in self.run]
        lines += [f"# {n}" for n in self.notes]
        amp = " ".join(f"({i},{o})" for i, o in self.report.amplitude)
        lines.append(f"verdict: {self.verdict}")
        lines.append(f"time: {self.report.time_steps}")
        lines.append(f"space: {self.report.space_peak}")
        lines.append(("amplitude: " + amp) if amp else "amplitude:")
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# Environment adapters
# ---------------------------------------------------------------------------

class EnvAgent:
    def propose(self, pos: Position, run: Run) -> Move | None:
        raise NotImplementedError


class EnvAdapter:
    def session(self) -> EnvAgent:
        raise NotImplementedError


class Silent(EnvAdapter):
    """Environment that never moves."""

    class _A(EnvAgent):
        def propose(self, pos, run):
            return None

    def session(self) -> EnvAgent:
        return Silent._A()


class Scripted(EnvAdapter):
    """Plays a fixed list of moves in order, then passes forever."""

    def __init__(self, moves: list[Move]):
        self.moves = [Move(Player.BOT, m.address, m.payload) for m in moves]

    @classmethod
    def of_payloads(cls, payloads: list[Payload], address: tuple[str, ...] = ()) -> "Scripted":
        return cls([Move(Player.BOT, address, p) for p in payloads])

    class _A(EnvAgent):
        def __init__(self, moves):
            self.moves = moves
            self.i = 0

        def propose(self, pos, run):
            if self.i >= len(self.moves):
                return None
            m = self.moves[self.i]
            self.i += 1
            return m

    def session(self) -> EnvAgent:
        return Scripted._A(self.moves)


class RandomEnv(EnvAdapter):
    """Seed-determined random play: a uniform pick among the legal
    choice nodes plus one extra "pass" option; quantifier payloads are
    uniform on [0, payload_bound]."""

    def __init__(self, seed: int, payload_bound: int = 16):
        self.seed = seed
        self.payload_bound = payload_bound

    class _A(EnvAgent):
        def __init__(self, seed, bound):
            self.rng = random.Random(seed)
            self.bound = bound

        def propose(self, pos, run):
            options = legal_moves(pos, Player.BOT)
            if not options:
                return None
            k = self.rng.randrange(len(options) + 1)
            if k == len(options):
                return None
            m = options[k]
            if target_kind(pos, m.address) == "binary":
                payload: Payload = self.rng.choice(("L", "R"))
            else:
                payload = self.rng.randint(0, self.bound)
            return Move(Player.BOT, m.address, payload)

    def session(self) -> EnvAgent:
        return RandomEnv._A(self.seed, self.payload_bound)


class Interactive(EnvAdapter):
    """Reads moves from a stream: lines ``address payload`` (address
    ``-`` for the root), an empty line or EOF is a pass."""

    def __init__(self, infile=None, outfile=None):
        self.infile = infile or sys.stdin
        self.outfile = outfile or sys.stdout

    class _A(EnvAgent):
        def __init__(self, infile, outfile):
            self.infile = infile
            self.outfile = outfile

        def propose(self, pos, run):
            options = legal_moves(pos, Player.BOT)
            if not options:
                return None
            print(f"position: {print_formula(pos.current)}", file=self.outfile)
            for m in options:
                kind = target_kind(pos, m.address)
                addr = "/".join(m.address) if m.address else "-"
                print(f"  your move at {addr} ({kind})", file=self.outfile)
            print("move (address payload, empty to pass): ",
                  end="", flush=True, file=self.outfile)
            line = self.infile.readline()
            if not line or not line.strip():
                return None
            return parse_move("B " + line.strip())

    def session(self) -> EnvAgent:
        return Interactive._A(self.infile, self.outfile)


# ---------------------------------------------------------------------------
# The session loop
# ---------------------------------------------------------------------------

def run_session(f: Formula, valuation: dict[str, int] | None, strategy: Strategy,
                env: EnvAdapter, limits: Limits = Limits()) -> Transcript:
    """Alternating-poll play of ``strategy`` (machine) against ``env``.

    An illegal proposal ends the session immediately with the verdict
    against its proposer; otherwise the verdict is the winner of the
    final position, or Unknown("step limit") when the round budget runs
    out.
    """
    if not alpha_eq(strategy.formula, f):
        raise ValueError(
            "strategy/formula mismatch:\n"
            f"  formula: {print_formula(f)}\n"
            f"  strategy target: {print_formula(strategy.formula)}")
    sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))
    pos = initial_position(f, valuation)
    meter = CostMeter()
    agent = strategy.session(meter)
    env_agent = env.session()

    space_peak = pos.size()
    amplitude: list[tuple[int, int]] = []
    max_env_bits = 0
    rounds = 0
    override: Verdict | None = None
    notes: list[str] = []

    while rounds < limits.max_steps:
        rounds += 1
        env_move = env_agent.propose(pos, pos.moves)
        if env_move is not None:
            env_move = Move(Player.BOT, env_move.address, env_move.payload)
            try:
                pos = apply_move(pos, env_move)
            except IllegalMoveError as e:
                override = Verdict(Player.TOP, f"environment played illegally: {e.reason}")
                break
            max_env_bits = max(max_env_bits, payload_bits(env_move.payload))
            space_peak = max(space_peak, pos.size())
        machine_move = agent.propose(pos, pos.moves)
        if machine_move is not None:
            try:
                pos = apply_move(pos, machine_move)
            except IllegalMoveError as e:
                override = Verdict(Player.BOT, f"strategy played illegally: {e.reason}")
                break
            amplitude.append((max_env_bits, payload_bits(machine_move.payload)))
            space_peak = max(space_peak, pos.size())
        if env_move is None and machine_move is None:
            break
    else:
        override = unknown("step limit", limits.max_steps)

    if override is not None:
        verdict = override
        notes.append(f"session ended early: {override.reason}")
    else:
        verdict = evaluate_run(f, pos.moves, valuation, limits.budget)

    agent_notes = getattr(agent, "notes", None)
    if agent_notes:
        notes.extend(agent_notes)

    report = ComplexityReport(
        time_steps=rounds + meter.forward_steps,
        space_peak=space_peak,
        amplitude=tuple(amplitude),
        compositions=meter.compositions,
        forward_steps=meter.forward_steps,
    )
    return Transcript(formula=f, valuation=dict(valuation or {}), run=pos.moves,
                      verdict=verdict, report=report, notes=tuple(notes))
