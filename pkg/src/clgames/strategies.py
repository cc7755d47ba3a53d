"""Machine strategies: built-ins, copycat, and strategy composition.

A Strategy is a deterministic recipe for playing the machine side of
one target formula.  Each play spawns a fresh agent (``session``), so
strategies can be reused across sessions without shared state; agents
may keep per-session state such as the internal dialogue positions of
a composed strategy.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass

from .engine import (
    Move,
    Player,
    Position,
    Run,
    apply_move,
    initial_position,
)
from .parser import parse_formula
from .syntax import (
    Formula,
    Implies,
    Term,
    alpha_eq,
    free_vars,
    print_formula,
    rename_apart,
    subst_formula,
)


@dataclass
class CostMeter:
    """Per-session accounting: composition constructions and internal
    forwarding steps performed by composed strategies."""

    compositions: int = 0
    forward_steps: int = 0


class Agent:
    """One session's worth of strategy state."""

    def propose(self, pos: Position, run: Run) -> Move | None:
        raise NotImplementedError


class Strategy:
    def __init__(self, name: str, formula: Formula):
        self.name = name
        self.formula = formula

    def session(self, meter: CostMeter) -> Agent:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<strategy {self.name} on {print_formula(self.formula)}>"


class _FnAgent(Agent):
    def __init__(self, fn):
        self.fn = fn

    def propose(self, pos: Position, run: Run) -> Move | None:
        return self.fn(pos, run)


class FnStrategy(Strategy):
    """Stateless strategy defined by a propose function."""

    def __init__(self, name: str, formula: Formula, fn):
        super().__init__(name, formula)
        self.fn = fn

    def session(self, meter: CostMeter) -> Agent:
        return _FnAgent(self.fn)


class PassStrategy(Strategy):
    """Never moves.  Wins exactly the games won by machine defaults,
    e.g. true elementary formulas."""

    def __init__(self, formula: Formula, name: str = "pass"):
        super().__init__(name, formula)

    def session(self, meter: CostMeter) -> Agent:
        return _FnAgent(lambda pos, run: None)


# ---------------------------------------------------------------------------
# Input/output strategies for choice-prefix formulas  !x1 .. !xk ?z M
# ---------------------------------------------------------------------------

def _env_numerals(run: Run) -> list[int]:
    return [m.payload for m in run if m.by is Player.BOT and isinstance(m.payload, int)]


def io_strategy(name: str, formula_text: str, arity: int, out) -> FnStrategy:
    """Waits for ``arity`` environment numerals, then answers the
    machine's choice quantifier with ``out(*inputs)``."""
    formula = parse_formula(formula_text)

    def propose(pos: Position, run: Run):
        from .syntax import ChExists
        if not isinstance(pos.current, ChExists):
            return None
        ins = _env_numerals(run)
        if len(ins) < arity:
            return None
        return Move(Player.TOP, (), out(*ins[:arity]))

    return FnStrategy(name, formula, propose)


def trial_division_factor(n: int) -> tuple[int, int] | None:
    """Smallest nontrivial factorization (y, z) with y*z = n and
    y, z > 1, or None when n is prime or < 4."""
    if n < 4:
        return None
    d = 2
    while d * d <= n:
        if n % d == 0:
            return (d, n // d)
        d += 1
    return None


def is_composite(n: int) -> bool:
    return trial_division_factor(n) is not None


SUCCESSOR_TEXT = "!x ?y (y = x')"
DOUBLING_TEXT = "!x ?y (y = 2*x)"
ADDITION_TEXT = "!x !y ?z (z = x + y)"
MULTIPLICATION_TEXT = "!x !y ?z (z = x*y)"
PRIMALITY_TEXT = "!x ( Ey>1 Ez>1 (x = y*z) ++ ~Ey>1 Ez>1 (x = y*z) )"


class _PrimalityAgent(Agent):
    def __init__(self):
        self.notes: list[str] = []

    def propose(self, pos: Position, run: Run):
        from .syntax import ChOr
        if not isinstance(pos.current, ChOr):
            return None
        ins = _env_numerals(run)
        if not ins:
            return None
        pair = trial_division_factor(ins[0])
        if pair is not None:
            self.notes.append(f"witnesses: {pair[0]} {pair[1]}")
            return Move(Player.TOP, (), "L")
        return Move(Player.TOP, (), "R")


class PrimalityStrategy(Strategy):
    """Decides compositeness by trial division and picks the matching
    disjunct; the factorization found is reported as a session note."""

    def __init__(self):
        super().__init__("primality", parse_formula(PRIMALITY_TEXT))

    def session(self, meter: CostMeter) -> Agent:
        return _PrimalityAgent()

    @staticmethod
    def witnesses(n: int) -> tuple[int, int] | None:
        return trial_division_factor(n)


def builtin(name: str) -> Strategy:
    """The stock strategies for the extra-Peano axioms and examples."""
    makers = {
        "successor": lambda: io_strategy("successor", SUCCESSOR_TEXT, 1, lambda x: x + 1),
        "doubling": lambda: io_strategy("doubling", DOUBLING_TEXT, 1, lambda x: 2 * x),
        "addition": lambda: io_strategy("addition", ADDITION_TEXT, 2, lambda x, y: x + y),
        "multiplication": lambda: io_strategy(
            "multiplication", MULTIPLICATION_TEXT, 2, lambda x, y: x * y),
        "primality": PrimalityStrategy,
    }
    if name not in makers:
        raise KeyError(f"unknown builtin strategy {name!r}")
    return makers[name]()


BUILTIN_NAMES = ("successor", "doubling", "addition", "multiplication", "primality")


# ---------------------------------------------------------------------------
# Copycat
# ---------------------------------------------------------------------------

def _flip_side(address: tuple[str, ...]) -> tuple[str, ...]:
    head = {"L": "R", "R": "L"}[address[0]]
    return (head,) + address[1:]


class CopycatStrategy(Strategy):
    """Wins a -> a by mirroring: every environment move in one copy is
    replayed at the same address in the other copy (the components of
    the implication are path-for-path duals, so the mirrored move has
    machine polarity)."""

    def __init__(self, a: Formula):
        super().__init__("copycat", rename_apart(Implies(a, a)))
        self.component = a

    def session(self, meter: CostMeter) -> Agent:
        return _FnAgent(self._propose)

    @staticmethod
    def _propose(pos: Position, run: Run):
        made = Counter(
            (m.address, m.payload) for m in run if m.by is Player.TOP)
        for m in run:
            if m.by is not Player.BOT:
                continue
            mirror = (_flip_side(m.address), m.payload)
            if made[mirror] > 0:
                made[mirror] -= 1
            else:
                return Move(Player.TOP, mirror[0], mirror[1])
        return None


def copycat(a: Formula) -> CopycatStrategy:
    return CopycatStrategy(a)


# ---------------------------------------------------------------------------
# Composition
# ---------------------------------------------------------------------------

class ComposedStrategy(Strategy):
    """Strategy for B built from sigma (for A) and tau (for A -> B).

    The agent runs both players' games internally: tau's machine moves
    in the negated-A component become environment moves for sigma, and
    sigma's machine moves in A become environment moves for tau; tau's
    moves in the B component surface as the composed strategy's own
    moves, and outside environment moves in B are fed to tau.
    """

    def __init__(self, sigma: Strategy, tau: Strategy):
        tf = tau.formula
        if not isinstance(tf, Implies):
            raise ValueError("composition needs tau to target an implication")
        if not alpha_eq(tf.left, sigma.formula):
            raise ValueError(
                "composition mismatch: tau's antecedent differs from sigma's target\n"
                f"  sigma: {print_formula(sigma.formula)}\n"
                f"  tau antecedent: {print_formula(tf.left)}")
        super().__init__(f"{tau.name}o{sigma.name}", tf.right)
        self.sigma = sigma
        self.tau = tau

    def session(self, meter: CostMeter) -> Agent:
        return _ComposedAgent(self.sigma, self.tau, meter)


class _ComposedAgent(Agent):
    def __init__(self, sigma: Strategy, tau: Strategy, meter: CostMeter):
        self.meter = meter
        self.sigma_agent = sigma.session(meter)
        self.tau_agent = tau.session(meter)
        self.sigma_pos = initial_position(sigma.formula)
        self.tau_pos = initial_position(tau.formula)
        self.consumed = 0
        self.outbox: deque[Move] = deque()

    def _apply_sigma(self, m: Move) -> None:
        self.sigma_pos = apply_move(self.sigma_pos, m)

    def _apply_tau(self, m: Move) -> None:
        self.tau_pos = apply_move(self.tau_pos, m)

    def _pump(self) -> None:
        while True:
            mv = self.tau_agent.propose(self.tau_pos, self.tau_pos.moves)
            if mv is not None:
                self._apply_tau(mv)
                self.meter.forward_steps += 1
                if mv.address[:1] == ("L",):
                    # tau queried the resource: environment move for sigma
                    self._apply_sigma(Move(Player.BOT, mv.address[1:], mv.payload))
                else:
                    self.outbox.append(Move(Player.TOP, mv.address[1:], mv.payload))
                continue
            mv = self.sigma_agent.propose(self.sigma_pos, self.sigma_pos.moves)
            if mv is not None:
                self._apply_sigma(mv)
                self.meter.forward_steps += 1
                self._apply_tau(Move(Player.BOT, ("L",) + mv.address, mv.payload))
                continue
            return

    def propose(self, pos: Position, run: Run) -> Move | None:
        for m in run[self.consumed:]:
            self.consumed += 1
            if m.by is Player.BOT:
                self._apply_tau(Move(Player.BOT, ("R",) + m.address, m.payload))
            elif self.outbox and (self.outbox[0].address, self.outbox[0].payload) == (
                    m.address, m.payload):
                # our previously emitted move, now recorded externally
                self.outbox.popleft()
        self._pump()
        if self.outbox:
            return self.outbox[0]
        return None


def compose(sigma: Strategy, tau: Strategy) -> ComposedStrategy:
    """Modus-ponens engine: from sigma winning A and tau winning A -> B,
    a strategy winning B."""
    return ComposedStrategy(sigma, tau)


# ---------------------------------------------------------------------------
# Strategy families (premises with free parameters)
# ---------------------------------------------------------------------------

class StrategyFamily:
    """A strategy for each instantiation of the free variables of an
    open formula; induction steps are the canonical case."""

    def __init__(self, name: str, formula: Formula, make):
        self.name = name
        self.formula = formula  # open: free variables are the parameters
        self.make = make        # make(instantiated_formula) -> Strategy

    def at(self, mapping: dict[str, Term]) -> Strategy:
        inst = subst_formula(self.formula, mapping)
        return self.make(inst)

    def closed(self) -> Strategy:
        if free_vars(self.formula):
            raise ValueError(f"strategy {self.name!r} has free parameters "
                             f"{sorted(free_vars(self.formula))}")
        return self.make(self.formula)


def relay_step(name: str, formula_text: str, out) -> StrategyFamily:
    """Implication step strategy: waits for the environment's witness v
    in the negated antecedent and answers ``out(v)`` in the consequent.

    Fits premises of shape  ?y (... y ...) -> ?y (... y ...)  whose
    negation-normal antecedent starts with an environment quantifier.
    """
    formula = parse_formula(formula_text)

    def propose(pos: Position, run: Run):
        received = [m for m in run
                    if m.by is Player.BOT and m.address[:1] == ("L",)
                    and isinstance(m.payload, int)]
        answered = [m for m in run if m.by is Player.TOP and m.address[:1] == ("R",)]
        if received and not answered:
            return Move(Player.TOP, ("R",), out(received[0].payload))
        return None

    def make(inst: Formula) -> Strategy:
        return FnStrategy(name, inst, propose)

    return StrategyFamily(name, formula, make)
