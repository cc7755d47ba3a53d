"""Derivations and strategy extraction.

A derivation is a DAG of rule applications.  Checking verifies each
node's shape against its rule (formula matching up to bound-variable
renaming, induction side conditions via the boundedness classifier,
elementary axioms by evaluation).  Extraction turns a checked
derivation into a strategy for its root conclusion:

  * premises refer to named strategies (built-ins or registered step
    families, possibly with free parameters);
  * choice introductions wrap the premise strategy with the declared
    first move;
  * modus ponens is strategy composition;
  * binary induction, on input n, composes the base strategy through
    one doubling/doubling-plus-one step per bit of n (the prefix chain
    0, ..., n of binary expansions); unary induction composes the step
    n times.

The file format is JSON: {"version": 1, "root": id, "nodes": [{"id",
"rule", "conclusion", "premises", "data"}]} with conclusions in the
formula grammar.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from graphlib import CycleError, TopologicalSorter

from .classify import Discipline, Exponential, Polynomial, classify_bounded
from .engine import Move, Player, Verdict, evaluate_elementary
from .parser import parse_formula
from .session import (
    ComplexityReport,
    EnvAdapter,
    Limits,
    RandomEnv,
    Scripted,
    Transcript,
    run_session,
)
from .strategies import (
    Agent,
    CopycatStrategy,
    CostMeter,
    PassStrategy,
    Strategy,
    StrategyFamily,
    builtin,
    compose,
)
from .syntax import (
    ChAll,
    ChExists,
    Formula,
    Implies,
    Num,
    Succ,
    Term,
    Times,
    Var,
    alpha_eq,
    free_vars,
    print_formula,
    subst_formula,
    succ,
)

FORMAT_VERSION = 1

RULE_NAMES = {
    "premise", "axiom", "copycat", "choose_left", "choose_right",
    "choose_value", "chall_intro", "mp", "ind_binary", "ind_unary",
}

_PREMISE_COUNT = {
    "premise": 0, "axiom": 0, "copycat": 0,
    "choose_left": 1, "choose_right": 1, "choose_value": 1,
    "chall_intro": 1, "mp": 2, "ind_binary": 3, "ind_unary": 2,
}

_DISCIPLINES: dict[str, Discipline | None] = {
    "poly": Polynomial(),
    "exp": Exponential(),
    "unrestricted": None,
}


class DerivationError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: str
    rule: str
    conclusion: Formula
    premises: tuple[str, ...]
    data: dict


@dataclass(frozen=True)
class Derivation:
    nodes: dict[str, Node]
    root: str
    order: tuple[str, ...]  # a topological order, premises first

    @property
    def theorem(self) -> Formula:
        return self.nodes[self.root].conclusion


def load_derivation(doc: dict | str) -> Derivation:
    """Parse and reference-resolve a derivation document (a JSON object
    or its text)."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if not isinstance(doc, dict):
        raise DerivationError("derivation document must be an object")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise DerivationError(f"unsupported format version {version!r}")
    raw_nodes = doc.get("nodes")
    if not isinstance(raw_nodes, list) or not raw_nodes:
        raise DerivationError("derivation needs a nonempty node list")
    nodes: dict[str, Node] = {}
    for entry in raw_nodes:
        nid = entry.get("id")
        if not isinstance(nid, str) or not nid:
            raise DerivationError(f"bad node id {nid!r}")
        if nid in nodes:
            raise DerivationError(f"duplicate node id {nid!r}")
        rule = entry.get("rule")
        if rule not in RULE_NAMES:
            raise DerivationError(f"node {nid}: unknown rule {rule!r}")
        try:
            conclusion = parse_formula(entry["conclusion"])
        except KeyError:
            raise DerivationError(f"node {nid}: missing conclusion") from None
        premises = tuple(entry.get("premises", ()))
        want = _PREMISE_COUNT[rule]
        if len(premises) != want:
            raise DerivationError(
                f"node {nid}: rule {rule} takes {want} premise(s), got {len(premises)}")
        data = entry.get("data", {})
        if not isinstance(data, dict):
            raise DerivationError(f"node {nid}: data must be an object")
        nodes[nid] = Node(nid, rule, conclusion, premises, dict(data))
    root = doc.get("root")
    if root not in nodes:
        raise DerivationError(f"root {root!r} is not a node id")
    for node in nodes.values():
        for p in node.premises:
            if p not in nodes:
                raise DerivationError(f"node {node.id}: unresolved premise id {p!r}")
    try:
        order = tuple(TopologicalSorter(
            {nid: set(n.premises) for nid, n in nodes.items()}).static_order())
    except CycleError as e:
        raise DerivationError(f"premise cycle: {e.args[1]}") from None
    return Derivation(nodes=nodes, root=root, order=order)


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

# canonical term spellings for the induction step targets
def _double(x: str) -> Term:
    return Times(Num(2), Var(x))


def _double_succ(x: str) -> Term:
    return Succ(Times(Num(2), Var(x)))


@dataclass(frozen=True)
class NodeReport:
    node_id: str
    ok: bool
    issues: tuple[str, ...] = ()
    trusted_unknown: bool = False


@dataclass(frozen=True)
class CheckReport:
    nodes: tuple[NodeReport, ...]

    @property
    def ok(self) -> bool:
        return all(n.ok for n in self.nodes)

    @property
    def failures(self) -> tuple[NodeReport, ...]:
        return tuple(n for n in self.nodes if not n.ok)

    @property
    def trusted(self) -> tuple[NodeReport, ...]:
        return tuple(n for n in self.nodes if n.trusted_unknown)

    def render(self) -> str:
        lines = []
        for n in self.nodes:
            status = "ok" if n.ok else "FAIL"
            if n.trusted_unknown:
                status += " (trusted, unverified)"
            lines.append(f"{n.node_id}: {status}")
            for issue in n.issues:
                lines.append(f"  - {issue}")
        return "\n".join(lines)


def check_derivation(d: Derivation, registry: dict[str, StrategyFamily] | None = None,
                     budget: int = 4096) -> CheckReport:
    """Shape- and side-condition-check every node; all findings are
    reported rather than raised."""
    registry = registry if registry is not None else default_registry()
    reports: list[NodeReport] = []
    for nid in d.order:
        node = d.nodes[nid]
        issues: list[str] = []
        trusted_unknown = False
        concl = node.conclusion
        prem = [d.nodes[p] for p in node.premises]

        if node.rule == "premise":
            ref = node.data.get("builtin") or node.data.get("ref")
            if not ref:
                issues.append("premise needs data.builtin naming a strategy")
            elif ref not in registry:
                issues.append(f"unknown strategy reference {ref!r}")
            else:
                fam = registry[ref]
                if not alpha_eq(concl, fam.formula):
                    issues.append(
                        f"conclusion differs from the target of strategy {ref!r}: "
                        f"{print_formula(fam.formula)}")
        elif node.rule == "axiom":
            if free_vars(concl):
                issues.append("elementary axiom must be closed")
            else:
                try:
                    v = evaluate_elementary(concl, budget)
                except ValueError as e:
                    issues.append(str(e))
                else:
                    if v.is_bot:
                        issues.append("elementary axiom is false")
                    elif v.is_unknown:
                        if node.data.get("trusted"):
                            trusted_unknown = True
                        else:
                            issues.append(
                                "axiom not decidable within budget; "
                                "set data.trusted to accept it unverified")
        elif node.rule == "copycat":
            if not (isinstance(concl, Implies) and alpha_eq(concl.left, concl.right)):
                issues.append("copycat conclusion must be A -> A")
        elif node.rule in ("choose_left", "choose_right"):
            from .syntax import ChOr
            if not isinstance(concl, ChOr):
                issues.append("conclusion must be a choice disjunction")
            else:
                side = concl.left if node.rule == "choose_left" else concl.right
                if not alpha_eq(prem[0].conclusion, side):
                    issues.append("premise does not match the chosen disjunct")
        elif node.rule == "choose_value":
            n = node.data.get("value")
            if not isinstance(n, int) or n < 0:
                issues.append("choose_value needs a natural data.value")
            elif not isinstance(concl, ChExists):
                issues.append("conclusion must be a choice existential")
            else:
                want = subst_formula(concl.body, {concl.var: Num(n)})
                if not alpha_eq(prem[0].conclusion, want):
                    issues.append(
                        f"premise must conclude the instance at {n}: {print_formula(want)}")
        elif node.rule == "chall_intro":
            if not isinstance(concl, ChAll):
                issues.append("conclusion must be a choice universal")
            elif not alpha_eq(prem[0].conclusion, concl.body):
                issues.append("premise must conclude the body with the bound "
                              "variable free (same parameter name)")
        elif node.rule == "mp":
            a, ab = prem
            if not isinstance(ab.conclusion, Implies):
                issues.append("second premise must be an implication")
            else:
                if not alpha_eq(ab.conclusion.left, a.conclusion):
                    issues.append("antecedent does not match the first premise")
                if not alpha_eq(ab.conclusion.right, concl):
                    issues.append("conclusion does not match the consequent")
        elif node.rule in ("ind_binary", "ind_unary"):
            issues.extend(_check_induction(node, prem))
        reports.append(NodeReport(nid, not issues, tuple(issues), trusted_unknown))
    return CheckReport(tuple(reports))


def _check_induction(node: Node, prem: list[Node]) -> list[str]:
    issues: list[str] = []
    concl = node.conclusion
    if not isinstance(concl, ChAll):
        return ["induction concludes a choice universal"]
    x, a = concl.var, concl.body
    base = prem[0]
    if not alpha_eq(base.conclusion, subst_formula(a, {x: Num(0)})):
        issues.append(f"base premise must conclude {print_formula(subst_formula(a, {x: Num(0)}))}")
    if node.rule == "ind_binary":
        steps = [
            (prem[1], _double(x), "even step A(x) -> A(2*x)"),
            (prem[2], _double_succ(x), "odd step A(x) -> A((2*x)')"),
        ]
        discipline: Discipline | None = Polynomial()
    else:
        steps = [(prem[1], Succ(Var(x)), "step A(x) -> A(x')")]
        tag = node.data.get("discipline", "poly")
        if tag not in _DISCIPLINES:
            issues.append(f"unknown discipline tag {tag!r}")
            tag = "unrestricted"
        discipline = _DISCIPLINES[tag]
    for p, t, desc in steps:
        want = Implies(a, subst_formula(a, {x: t}))
        if not alpha_eq(p.conclusion, want):
            issues.append(f"{desc} must conclude {print_formula(want)}")
    if discipline is not None:
        rep = classify_bounded(a, discipline)
        if not rep.conforming:
            kind = "Polynomial" if isinstance(discipline, Polynomial) else "Exponential"
            for v in rep.violations:
                issues.append(f"side condition ({kind} boundedness) fails at {v.path}: {v.reason}")
    return issues


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

class _RootInputAgent(Agent):
    """Waits for the environment's payload at the root choice universal,
    then delegates to a strategy built for that instance."""

    def __init__(self, make_inner, meter: CostMeter):
        self.make_inner = make_inner
        self.meter = meter
        self.inner: Agent | None = None

    def propose(self, pos, run):
        if not run:
            return None
        n = run[0].payload
        if not isinstance(n, int):
            return None
        if self.inner is None:
            self.inner = self.make_inner(n, self.meter).session(self.meter)
        return self.inner.propose(pos, run[1:])


class RootInputStrategy(Strategy):
    def __init__(self, name: str, formula: Formula, make_inner):
        super().__init__(name, formula)
        self.make_inner = make_inner

    def session(self, meter: CostMeter) -> Agent:
        return _RootInputAgent(self.make_inner, meter)


class _FirstMoveAgent(Agent):
    """Makes one declared move at the root choice, then delegates."""

    def __init__(self, payload, inner: Agent):
        self.payload = payload
        self.inner = inner

    def propose(self, pos, run):
        if not run:
            return Move(Player.TOP, (), self.payload)
        return self.inner.propose(pos, run[1:])


class FirstMoveStrategy(Strategy):
    def __init__(self, name: str, formula: Formula, payload, inner: Strategy):
        super().__init__(name, formula)
        self.payload = payload
        self.inner = inner

    def session(self, meter: CostMeter) -> Agent:
        return _FirstMoveAgent(self.payload, self.inner.session(meter))


def extract(d: Derivation, registry: dict[str, StrategyFamily] | None = None,
            check: bool = True, budget: int = 4096) -> Strategy:
    """Turn a derivation into a strategy for its root conclusion.

    Fails on any check finding except Unknown elementary axioms that
    carry the trusted flag.
    """
    registry = registry if registry is not None else default_registry()
    if check:
        report = check_derivation(d, registry, budget)
        if not report.ok:
            detail = "; ".join(
                f"{n.node_id}: {issue}" for n in report.failures for issue in n.issues)
            raise DerivationError(f"derivation does not check: {detail}")
    return _extract_node(d, d.root, {}, registry)


def _extract_node(d: Derivation, nid: str, tsubst: dict[str, Term],
                  registry: dict[str, StrategyFamily]) -> Strategy:
    node = d.nodes[nid]
    concl = subst_formula(node.conclusion, tsubst)

    if node.rule == "premise":
        ref = node.data.get("builtin") or node.data.get("ref")
        fam = registry[ref]
        params = sorted(free_vars(fam.formula))
        mapping = {}
        for v in params:
            if v not in tsubst:
                raise DerivationError(
                    f"premise {ref!r} parameter {v!r} not instantiated at extraction")
            mapping[v] = tsubst[v]
        return fam.at(mapping) if mapping else fam.closed()
    if node.rule == "axiom":
        return PassStrategy(concl, name=f"axiom[{nid}]")
    if node.rule == "copycat":
        assert isinstance(concl, Implies)
        return CopycatStrategy(concl.left)
    if node.rule in ("choose_left", "choose_right"):
        inner = _extract_node(d, node.premises[0], tsubst, registry)
        payload = "L" if node.rule == "choose_left" else "R"
        return FirstMoveStrategy(f"choose[{nid}]", concl, payload, inner)
    if node.rule == "choose_value":
        inner = _extract_node(d, node.premises[0], tsubst, registry)
        return FirstMoveStrategy(f"choose[{nid}]", concl, node.data["value"], inner)
    if node.rule == "chall_intro":
        assert isinstance(concl, ChAll)
        var = concl.var
        pid = node.premises[0]

        def make_inner(n: int, meter: CostMeter, _pid=pid, _var=var) -> Strategy:
            return _extract_node(d, _pid, {**tsubst, _var: Num(n)}, registry)

        return RootInputStrategy(f"for_each[{nid}]", concl, make_inner)
    if node.rule == "mp":
        sigma = _extract_node(d, node.premises[0], tsubst, registry)
        tau = _extract_node(d, node.premises[1], tsubst, registry)
        return compose(sigma, tau)
    if node.rule in ("ind_binary", "ind_unary"):
        return _extract_induction(d, node, tsubst, registry)
    raise DerivationError(f"unknown rule {node.rule!r}")


def _extract_induction(d: Derivation, node: Node, tsubst: dict[str, Term],
                       registry: dict[str, StrategyFamily]) -> Strategy:
    concl = subst_formula(node.conclusion, tsubst)
    assert isinstance(concl, ChAll)
    var = concl.var
    binary = node.rule == "ind_binary"

    def make_inner(n: int, meter: CostMeter) -> Strategy:
        sigma = _extract_node(d, node.premises[0], tsubst, registry)
        acc: Term = Num(0)
        if binary:
            if n > 0:
                for bit in bin(n)[2:]:
                    step_id = node.premises[2] if bit == "1" else node.premises[1]
                    tau = _extract_node(d, step_id, {**tsubst, var: acc}, registry)
                    sigma = compose(sigma, tau)
                    meter.compositions += 1
                    # mirror the substitution's numeral collapsing exactly,
                    # so successive step antecedents match syntactically
                    acc = succ(Times(Num(2), acc)) if bit == "1" else Times(Num(2), acc)
        else:
            for _ in range(n):
                tau = _extract_node(d, node.premises[1], {**tsubst, var: acc}, registry)
                sigma = compose(sigma, tau)
                meter.compositions += 1
                acc = succ(acc)
        return sigma

    kind = "by_bits" if binary else "by_count"
    return RootInputStrategy(f"induction_{kind}[{node.id}]", concl, make_inner)


# ---------------------------------------------------------------------------
# Verification harness
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VerifySample:
    payload: int | None
    seed: int | None
    input_bits: int
    verdict: Verdict
    report: ComplexityReport


@dataclass(frozen=True)
class VerifyReport:
    wins: int
    losses: int
    unknowns: int
    samples: tuple[VerifySample, ...]
    loss_details: tuple[str, ...]

    def render(self) -> str:
        lines = [f"wins: {self.wins}", f"losses: {self.losses}", f"unknowns: {self.unknowns}"]
        for detail in self.loss_details[:20]:
            lines.append(f"  loss: {detail}")
        return "\n".join(lines)


def verify_strategy(f: Formula, s: Strategy, payload_range: range | None = None,
                    seeds: range | list[int] | None = None,
                    limits: Limits = Limits(), payload_bound: int = 16) -> VerifyReport:
    """Run the strategy over scripted root payloads and/or seeded random
    environments; count outcomes and collect complexity samples."""
    if payload_range is None and seeds is None:
        raise ValueError("verification plan needs a payload range or seeds")
    wins = losses = unknowns = 0
    samples: list[VerifySample] = []
    loss_details: list[str] = []

    def record(t: Transcript, payload: int | None, seed: int | None) -> None:
        nonlocal wins, losses, unknowns
        if t.verdict.is_top:
            wins += 1
        elif t.verdict.is_bot:
            losses += 1
            head = f"payload {payload}" if payload is not None else f"seed {seed}"
            loss_details.append(f"{head}: {t.verdict.reason or 'machine loses the final position'}")
        else:
            unknowns += 1
        bits = 1 if not payload else payload.bit_length()
        samples.append(VerifySample(payload, seed, bits, t.verdict, t.report))

    for n in payload_range or ():
        env: EnvAdapter = Scripted([Move(Player.BOT, (), n)])
        record(run_session(f, {}, s, env, limits), n, None)
    for seed in seeds or ():
        env = RandomEnv(seed, payload_bound)
        record(run_session(f, {}, s, env, limits), None, seed)
    return VerifyReport(wins, losses, unknowns, tuple(samples), tuple(loss_details))


def default_registry() -> dict[str, StrategyFamily]:
    """Built-ins plus the corpus step families, by name."""
    from .corpus import step_registry

    reg: dict[str, StrategyFamily] = {}
    for name in ("successor", "doubling", "addition", "multiplication", "primality"):
        s = builtin(name)
        reg[name] = StrategyFamily(name, s.formula, lambda _f, _s=s: _s)
    reg.update(step_registry())
    return reg
