"""Acceptance criteria, one test per criterion.

Each criterion prints a [PASS]/[FAIL] line with its elapsed time and
asserts both the property and its time budget.  Run with ``-s`` to see
the lines as they complete:

    pytest tests/test_acceptance.py -s
"""

import random
import subprocess
import sys
import time
from contextlib import contextmanager

from clgames.bench import bench_strategy, fit_complexity, parse_inputs_spec
from clgames.classify import CLA11_PTIME, Exponential, Polynomial, check_bound_term, classify_bounded
from clgames.corpus import GUARDED_DOUBLING, load_corpus, step_registry
from clgames.derivation import extract, load_derivation, verify_strategy
from clgames.engine import Move, Player, evaluate_run
from clgames.families import all_complete_runs, enumeration_family, random_guarded_formula
from clgames.parser import parse_formula, parse_term
from clgames.rawgame import tree_winner
from clgames.session import Limits, RandomEnv, Scripted, run_session
from clgames.strategies import builtin, compose, copycat, trial_division_factor

from oracle_direct import direct_evaluate_run

CORPUS = load_corpus()


@contextmanager
def criterion(name: str, budget_s: float):
    t0 = time.monotonic()
    failed = None
    try:
        yield
    except BaseException as e:
        failed = e
        raise
    finally:
        dt = time.monotonic() - t0
        status = "PASS" if failed is None and dt < budget_s else "FAIL"
        print(f"[{status}] {name} ({dt:.2f}s < {budget_s:.0f}s)", flush=True)
    assert dt < budget_s, f"{name}: {dt:.2f}s exceeded the {budget_s:.0f}s budget"


def B(payload, addr=()):
    return Move(Player.BOT, addr, payload)


def test_raw_tree_fidelity():
    with criterion("raw game tree fidelity", 1.0):
        g = CORPUS.rawgame("branching_demo.game")
        assert tree_winner(g, ["Ta", "Bg"]) is Player.BOT
        assert tree_winner(g, []) is Player.BOT
        assert tree_winner(g, ["Ta"]) is Player.TOP


def test_successor_axiom_full_sweep():
    with criterion("successor strategy wins for all x <= 2^16, amplitude within +1", 60.0):
        s = builtin("successor")
        f = s.formula
        for x in range(0, 2 ** 16 + 1):
            t = run_session(f, {}, s, Scripted([B(x)]), Limits(budget=2 ** 20))
            assert t.verdict.is_top, x
            for in_bits, out_bits in t.report.amplitude:
                assert out_bits <= max(in_bits, 1) + 1, x


def test_copycat_never_loses_200_plays():
    with criterion("copycat never loses on 200 seeded plays over the family", 60.0):
        family = enumeration_family()
        rng = random.Random(17)
        plays = 0
        while plays < 200:
            a = family[rng.randrange(len(family))]
            cc = copycat(a)
            t = run_session(cc.formula, {}, cc,
                            RandomEnv(seed=1000 + plays, payload_bound=6),
                            Limits(budget=64))
            assert not t.verdict.is_bot, (plays, a)
            plays += 1


def test_composition_soundness_harness():
    with criterion("doubling composed to quadrupling wins 100 random payloads", 30.0):
        dbl = builtin("doubling")
        lift = step_registry()["double_to_quadruple"].closed()
        comp = compose(dbl, lift)
        quadrupling = CORPUS["quadrupling"].formula
        rng = random.Random(20260810)
        for _ in range(100):
            n = rng.randrange(2 ** 12 + 1)
            t = run_session(quadrupling, {}, comp, Scripted([B(n)]),
                            Limits(budget=2 ** 20))
            assert t.verdict.is_top, n


def test_induction_extraction():
    with criterion("binary/unary induction: zero losses, exact composition counts", 120.0):
        dbin = extract(load_derivation(CORPUS.derivation_doc("doubling_binary.json")))
        rep = verify_strategy(dbin.formula, dbin, payload_range=range(0, 2 ** 12 + 1),
                              limits=Limits(budget=2 ** 20))
        assert rep.losses == 0 and rep.unknowns == 0
        for smp in rep.samples:
            assert smp.report.compositions == smp.payload.bit_length(), smp.payload

        duna = extract(load_derivation(CORPUS.derivation_doc("doubling_unary.json")))
        rep2 = verify_strategy(duna.formula, duna, payload_range=range(0, 257),
                               limits=Limits(budget=2 ** 20))
        assert rep2.losses == 0 and rep2.unknowns == 0
        for smp in rep2.samples:
            assert smp.report.compositions == smp.payload, smp.payload


def sieve(limit: int) -> list[bool]:
    is_prime = [True] * (limit + 1)
    is_prime[0] = is_prime[1] = False
    for p in range(2, int(limit ** 0.5) + 1):
        if is_prime[p]:
            for q in range(p * p, limit + 1, p):
                is_prime[q] = False
    return is_prime


def test_primality_against_sieve():
    with criterion("primality choice matches the sieve on [2, 10^4], witnesses check", 60.0):
        from clgames.engine import apply_move, initial_position
        from clgames.strategies import CostMeter

        s = builtin("primality")
        f = s.formula
        is_prime = sieve(10 ** 4)
        base = initial_position(f)
        for x in range(2, 10 ** 4 + 1):
            pos = apply_move(base, B(x))
            agent = s.session(CostMeter())
            move = agent.propose(pos, pos.moves)
            assert move is not None
            expected = "R" if is_prime[x] else "L"
            assert move.payload == expected, x
            if not is_prime[x]:
                y, z = trial_division_factor(x)
                assert y * z == x and y > 1 and z > 1, x
        # full sessions with verdicts on a slice, tying choices to wins
        for x in range(2, 266):
            t = run_session(f, {}, s, Scripted([B(x)]), Limits(budget=2 ** 20))
            assert t.verdict.is_top, x


def test_classifier_ground_truth():
    with criterion("classifier ground truth and poly=>exp inclusion", 30.0):
        assert not classify_bounded(parse_formula("!x ?y (y = x')"), Polynomial()).conforming
        guarded = [
            parse_formula(GUARDED_DOUBLING).body,
            parse_formula("!z (|z| <= |x|*|x| -> ?w (|w| <= |z| /\\ w = z))"),
            parse_formula("?y (|y| <= |x|' /\\ y = 2*(2*x))"),
        ]
        for g in guarded:
            assert classify_bounded(g, Polynomial()).conforming
            assert classify_bounded(g, Exponential()).conforming

        T, S, A = CLA11_PTIME.time, CLA11_PTIME.space, CLA11_PTIME.amplitude
        assert check_bound_term(parse_term("|x|*|y| + 0'"), T)
        assert check_bound_term(parse_term("|x| + |y|"), A)
        assert not check_bound_term(parse_term("|x|*|y|"), A)
        assert not check_bound_term(parse_term("x"), T)
        assert check_bound_term(parse_term("||x||*||y||"), S)

        exp_only = parse_formula("!z (|z| <= x*x -> z = z)")
        assert not classify_bounded(exp_only, Polynomial()).conforming
        assert classify_bounded(exp_only, Exponential()).conforming

        rng = random.Random(31337)
        for _ in range(500):
            f = random_guarded_formula(rng, outer_vars=["u", "v"], depth=3)
            assert classify_bounded(f, Polynomial()).conforming
            assert classify_bounded(f, Exponential()).conforming


def test_nnf_preservation_run_by_run():
    with criterion("verdicts preserved by negation normal form, run by run", 120.0):
        from clgames.syntax import to_nnf

        checked_runs = 0
        for f in enumeration_family():
            nf = to_nnf(f)
            for run in all_complete_runs(f, payload_cap=3):
                v_engine = evaluate_run(f, run, budget=64)
                v_nnf = evaluate_run(nf, run, budget=64)
                assert v_engine.winner is v_nnf.winner, (f, run)
                # independent check: the direct evaluator never builds NNF
                if v_engine.winner is not None:
                    assert v_engine.winner is direct_evaluate_run(f, run), (f, run)
                checked_runs += 1
        assert checked_runs > 5_000


def test_cli_determinism():
    with criterion("corpus CLI commands byte-identical across reruns", 120.0):
        commands = [
            ["corpus"],
            ["parse", "!x ?y (y = x')"],
            ["classify", "?y (|y| <= |x|' /\\ y = 2*x)", "--discipline", "poly"],
            ["play", "successor", "--moves", "B - 2"],
            ["play", "primality", "--moves", "B - 91"],
            ["play", "quadrupling", "--env", "random:7"],
            ["verify", "doubling", "--range", "0..64"],
            ["bench", "successor", "--inputs", "bits:1..10"],
        ]
        for cmd in commands:
            def invoke():
                return subprocess.run([sys.executable, "-m", "clgames", *cmd],
                                      capture_output=True, timeout=120)
            a, b = invoke(), invoke()
            assert (a.returncode, a.stdout, a.stderr) == (b.returncode, b.stdout, b.stderr), cmd


def test_report_amplitude_of_successor_bench():
    # supporting evidence for the successor amplitude criterion at the
    # report level: the bench summary states the +1 linear bound
    samples = bench_strategy(builtin("successor").formula, builtin("successor"),
                             parse_inputs_spec("bits:1..16"))
    rep = fit_complexity(samples)
    assert rep.linear_amplitude_offset == 1
