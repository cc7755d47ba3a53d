"""Derivation loading, checking, extraction, and verification."""

import json

import pytest

from clgames.corpus import load_corpus
from clgames.derivation import (
    DerivationError,
    check_derivation,
    default_registry,
    extract,
    load_derivation,
    verify_strategy,
)
from clgames.engine import Move, Player
from clgames.parser import parse_formula
from clgames.session import Scripted, Silent, run_session
from clgames.strategies import builtin

CORPUS = load_corpus()


def B(payload, addr=()):
    return Move(Player.BOT, addr, payload)


def doc(nodes, root):
    return {"version": 1, "root": root, "nodes": nodes}


def node(id, rule, conclusion, premises=(), **data):
    return {"id": id, "rule": rule, "conclusion": conclusion,
            "premises": list(premises), "data": data}


# ---------------------------------------------------------------------------
# Loading
# ---------------------------------------------------------------------------

def test_load_single_premise():
    d = load_derivation(doc([node("goal", "premise", "!x ?y (y = x')", builtin="successor")],
                            "goal"))
    assert len(d.nodes) == 1
    assert d.theorem == parse_formula("!x ?y (y = x')")


def test_load_two_node_mp():
    d = load_derivation(CORPUS.derivation_doc("quadrupling_mp.json"))
    assert len(d.nodes) == 3
    assert d.order.index("goal") == 2


def test_load_rejects_cycles():
    with pytest.raises(DerivationError, match="cycle"):
        load_derivation(doc([
            node("a", "mp", "0 = 0", premises=("a", "b")),
            node("b", "axiom", "0 = 0"),
        ], "a"))


def test_load_rejects_unresolved_and_bad_rules():
    with pytest.raises(DerivationError, match="unresolved"):
        load_derivation(doc([node("a", "mp", "0 = 0", premises=("x", "y"))], "a"))
    with pytest.raises(DerivationError, match="unknown rule"):
        load_derivation(doc([node("a", "frobnicate", "0 = 0")], "a"))
    with pytest.raises(DerivationError, match="version"):
        load_derivation({"version": 99, "root": "a", "nodes": []})
    with pytest.raises(DerivationError, match="root"):
        load_derivation(doc([node("a", "axiom", "0 = 0")], "nope"))


# ---------------------------------------------------------------------------
# Checking
# ---------------------------------------------------------------------------

def test_corpus_derivations_check():
    for name in ("successor.json", "doubling_binary.json",
                 "doubling_unary.json", "quadrupling_mp.json"):
        d = load_derivation(CORPUS.derivation_doc(name))
        report = check_derivation(d)
        assert report.ok, f"{name}:\n{report.render()}"


def test_false_axiom_fails():
    d = load_derivation(doc([node("a", "axiom", "0 = 0'")], "a"))
    report = check_derivation(d)
    assert not report.ok
    assert "false" in report.failures[0].issues[0]


def test_undecidable_axiom_needs_trusted_flag():
    text = "Ax (x = x)"
    d = load_derivation(doc([node("a", "axiom", text)], "a"))
    assert not check_derivation(d).ok
    d2 = load_derivation(doc([node("a", "axiom", text, trusted=True)], "a"))
    rep = check_derivation(d2)
    assert rep.ok and rep.trusted[0].node_id == "a"


def test_unguarded_binary_induction_fails_side_condition():
    d = load_derivation(doc([
        node("b", "axiom", "0 = 2*0"),
        node("base", "choose_value", "?y (y = 2*0)", premises=("b",), value=0),
        node("even", "premise", "?y (y = 2*x) -> ?y (y = 2*(2*x))",
             builtin="guarded_double_even"),
        node("odd", "premise", "?y (y = 2*x) -> ?y (y = 2*(2*x)')",
             builtin="guarded_double_odd"),
        node("goal", "ind_binary", "!x ?y (y = 2*x)", premises=("base", "even", "odd")),
    ], "goal"))
    report = check_derivation(d)
    bad = {n.node_id for n in report.failures}
    assert "goal" in bad
    assert any("side condition" in i for n in report.failures for i in n.issues)


def test_unrestricted_unary_induction_skips_side_condition():
    d = load_derivation(doc([
        node("b", "axiom", "0 = 2*0"),
        node("base", "choose_value", "?y (y = 2*0)", premises=("b",), value=0),
        node("step", "premise", "?y (y = 2*x) -> ?y (y = 2*x')", ref="plain_double_succ"),
        node("goal", "ind_unary", "!x ?y (y = 2*x)", premises=("base", "step"),
             discipline="unrestricted"),
    ], "goal"))
    from clgames.strategies import relay_step
    registry = dict(default_registry())
    registry["plain_double_succ"] = relay_step(
        "plain_double_succ", "?y (y = 2*x) -> ?y (y = 2*x')", lambda v: v + 2)
    report = check_derivation(d, registry)
    assert report.ok, report.render()
    s = extract(d, registry)
    t = run_session(s.formula, {}, s, Scripted([B(6)]))
    assert [str(m) for m in t.run] == ["B - 6", "T - 12"]


def test_rule_locality_each_mutation_fails_at_its_node():
    base_doc = CORPUS.derivation_doc("doubling_binary.json")
    d0 = load_derivation(base_doc)
    assert check_derivation(d0).ok
    for i, entry in enumerate(base_doc["nodes"]):
        mutated = json.loads(json.dumps(base_doc))
        # swap the conclusion for a shape-breaking one
        mutated["nodes"][i]["conclusion"] = "0 = 0 ++ 0 = 0'"
        rep = check_derivation(load_derivation(mutated))
        assert not rep.ok
        failing = {n.node_id for n in rep.failures}
        nid = entry["id"]
        # the mutated node or its direct consumers must fail; nodes not
        # depending on it must stay clean
        consumers = {e["id"] for e in mutated["nodes"] if nid in e.get("premises", [])}
        assert failing & ({nid} | consumers)
        untouched = {e["id"] for e in mutated["nodes"]} - {nid} - consumers
        assert not (failing & untouched)


def test_premise_conclusion_must_match_builtin():
    d = load_derivation(doc([node("g", "premise", "!x ?y (y = 2*x)", builtin="successor")],
                            "g"))
    rep = check_derivation(d)
    assert not rep.ok and "differs" in rep.failures[0].issues[0]


def test_copycat_and_choose_rules_check():
    good = load_derivation(doc([
        node("cc", "copycat", "!x ?y (y = x') -> !a ?b (b = a')"),
    ], "cc"))
    assert check_derivation(good).ok
    bad = load_derivation(doc([
        node("cc", "copycat", "!x ?y (y = x') -> !a ?b (b = a + a)"),
    ], "cc"))
    assert not check_derivation(bad).ok

    ch = load_derivation(doc([
        node("ax", "axiom", "0 = 0"),
        node("g", "choose_left", "0 = 0 ++ 0 = 0'", premises=("ax",)),
    ], "g"))
    assert check_derivation(ch).ok
    ch_bad = load_derivation(doc([
        node("ax", "axiom", "0 = 0"),
        node("g", "choose_right", "0 = 0 ++ 0 = 0'", premises=("ax",)),
    ], "g"))
    assert not check_derivation(ch_bad).ok


# ---------------------------------------------------------------------------
# Extraction
# ---------------------------------------------------------------------------

def test_extract_premise_behaves_as_builtin():
    d = load_derivation(CORPUS.derivation_doc("successor.json"))
    s = extract(d)
    t = run_session(s.formula, {}, s, Scripted([B(2)]))
    assert [str(m) for m in t.run] == ["B - 2", "T - 3"]


def test_extract_refuses_failed_check():
    d = load_derivation(doc([node("a", "axiom", "0 = 0'")], "a"))
    with pytest.raises(DerivationError, match="does not check"):
        extract(d)


def test_extract_choose_value_moves_first():
    d = load_derivation(doc([
        node("ax", "axiom", "5 = 5"),
        node("g", "choose_value", "?x (x = 5)", premises=("ax",), value=5),
    ], "g"))
    s = extract(d)
    t = run_session(s.formula, {}, s, Silent())
    assert [str(m) for m in t.run] == ["T - 5"]
    assert t.verdict.is_top


def test_extract_choose_left_then_inner():
    d = load_derivation(doc([
        node("ax", "axiom", "3 = 3"),
        node("v", "choose_value", "?x (x = 3)", premises=("ax",), value=3),
        node("g", "choose_left", "?x (x = 3) ++ 0 = 0'", premises=("v",)),
    ], "g"))
    s = extract(d)
    t = run_session(s.formula, {}, s, Silent())
    assert [str(m) for m in t.run] == ["T - L", "T - 3"]
    assert t.verdict.is_top


def test_extract_chall_intro_instantiates_family():
    from clgames.strategies import StrategyFamily, FnStrategy

    def make(inst):
        def propose(pos, run):
            from clgames.semantics import eval_term_value
            from clgames.syntax import ChExists
            if isinstance(pos.current, ChExists) and not any(
                    m.by is Player.TOP for m in run):
                # read the required answer off the instantiated target:
                # the body is y = <closed term>
                return Move(Player.TOP, (), eval_term_value(inst.body.right))
            return None
        return FnStrategy("succ_at", inst, propose)

    fam = StrategyFamily("succ_at", parse_formula("?y (y = x')"), make)
    registry = dict(default_registry())
    registry["succ_at"] = fam
    d = load_derivation(doc([
        node("p", "premise", "?y (y = x')", ref="succ_at"),
        node("g", "chall_intro", "!x ?y (y = x')", premises=("p",)),
    ], "g"))
    assert check_derivation(d, registry).ok
    s = extract(d, registry)
    t = run_session(s.formula, {}, s, Scripted([B(41)]))
    assert [str(m) for m in t.run] == ["B - 41", "T - 42"]
    assert t.verdict.is_top


def test_extract_mp_with_copycat_is_identity():
    d = load_derivation(doc([
        node("dbl", "premise", "!x ?y (y = 2*x)", builtin="doubling"),
        node("cc", "copycat", "!x ?y (y = 2*x) -> !x ?y (y = 2*x)"),
        node("g", "mp", "!x ?y (y = 2*x)", premises=("dbl", "cc")),
    ], "g"))
    s = extract(d)
    for x in [*range(0, 513), 2 ** 12 - 1, 2 ** 12]:
        t = run_session(s.formula, {}, s, Scripted([B(x)]))
        assert [str(m) for m in t.run] == [f"B - {x}", f"T - {2 * x}"]
        assert t.verdict.is_top


def test_binary_prefix_chain_for_13():
    d = load_derivation(CORPUS.derivation_doc("doubling_binary.json"))
    s = extract(d)
    t = run_session(s.formula, {}, s, Scripted([B(13)]))
    assert [str(m) for m in t.run] == ["B - 13", "T - 26"]
    assert t.verdict.is_top
    assert t.report.compositions == 4  # the 0,1,3,6,13 prefix chain


def test_induction_composition_counts_exact():
    dbin = extract(load_derivation(CORPUS.derivation_doc("doubling_binary.json")))
    duna = extract(load_derivation(CORPUS.derivation_doc("doubling_unary.json")))
    for n in (0, 1, 2, 3, 7, 8, 100, 255, 256):
        tb = run_session(dbin.formula, {}, dbin, Scripted([B(n)]))
        tu = run_session(duna.formula, {}, duna, Scripted([B(n)]))
        assert tb.verdict.is_top and tu.verdict.is_top
        assert tb.report.compositions == n.bit_length(), n
        assert tu.report.compositions == n, n


def test_verify_strategy_range_and_seeds():
    s = builtin("successor")
    rep = verify_strategy(s.formula, s, payload_range=range(0, 50))
    assert (rep.wins, rep.losses, rep.unknowns) == (50, 0, 0)

    cheat = builtin("doubling")
    rep2 = verify_strategy(parse_formula("!x ?y (y = 2*x)"),
                           _shifted_doubling(), payload_range=range(0, 11))
    # answering x+1 instead of 2x only works at x = 1
    assert rep2.wins == 1 and rep2.losses == 10

    rep3 = verify_strategy(s.formula, s, seeds=range(10))
    assert rep3.losses == 0

    with pytest.raises(ValueError):
        verify_strategy(s.formula, s)


def _shifted_doubling():
    from clgames.strategies import io_strategy
    return io_strategy("offbyone", "!x ?y (y = 2*x)", 1, lambda x: x + 1)


def test_silent_env_single_win():
    s = builtin("successor")
    t = run_session(s.formula, {}, s, Silent())
    assert t.verdict.is_top


def test_every_corpus_derivation_extracts_and_verifies_clean():
    for name, lo, hi in [
        ("successor.json", 0, 300),
        ("doubling_binary.json", 0, 300),
        ("doubling_unary.json", 0, 80),
        ("quadrupling_mp.json", 0, 300),
    ]:
        d = load_derivation(CORPUS.derivation_doc(name))
        assert check_derivation(d).ok, name
        s = extract(d)
        rep = verify_strategy(s.formula, s, payload_range=range(lo, hi + 1))
        assert rep.losses == 0 and rep.unknowns == 0, (name, rep.render())
