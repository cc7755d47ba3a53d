"""Command-line interface.

Exit codes follow the play/classify conventions: ``classify`` exits 2
on a violating formula; ``play`` exits 0/2/3 for a machine win, an
environment win, or an undecided session; ``verify`` exits 0 only with
zero losses.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import bench as bench_mod
from .classify import (
    CLA11_PTIME,
    Cla11,
    Exponential,
    Polynomial,
    TermGrammar,
    classify_bounded,
)
from .corpus import Corpus, load_corpus
from .derivation import (
    DerivationError,
    check_derivation,
    default_registry,
    extract,
    load_derivation,
    verify_strategy,
)
from .engine import parse_run
from .parser import ParseError, parse_formula
from .session import Interactive, Limits, RandomEnv, Scripted, Silent, run_session
from .strategies import BUILTIN_NAMES, Strategy, builtin
from .syntax import print_formula, to_nnf


@click.group()
def main() -> None:
    """Clarithmetic games: parse, classify, play, extract, verify, bench."""


def _read_formula_arg(text: str, corpus: Corpus):
    if text in corpus.entries:
        return corpus[text].formula
    return parse_formula(text)


def _corpus_option(f):
    return click.option("--corpus", "corpus_dir", type=click.Path(exists=True, file_okay=False),
                        default=None, help="Corpus directory (defaults to the packaged corpus).")(f)


@main.command("parse")
@click.argument("text", required=False)
@click.option("-f", "--file", "infile", type=click.Path(exists=True, dir_okay=False),
              help="Read the formula from a file instead.")
@click.option("--nnf", is_flag=True, help="Print the negation normal form instead.")
def cmd_parse(text: str | None, infile: str | None, nnf: bool) -> None:
    """Parse formula TEXT (or --file) and echo its canonical form."""
    if (text is None) == (infile is None):
        raise click.ClickException("give formula text or --file, not both")
    source = text if text is not None else Path(infile).read_text()
    try:
        f = parse_formula(source)
    except ParseError as e:
        click.echo(f"syntax error: {e}", err=True)
        sys.exit(1)
    click.echo(print_formula(to_nnf(f) if nnf else f))


@main.command("classify")
@click.argument("text")
@click.option("--discipline", type=click.Choice(["poly", "exp", "cla11"]), default="poly")
@click.option("--grammar", "grammar_file", type=click.Path(exists=True, dir_okay=False),
              help="JSON grammar file for --discipline cla11 "
                   '({"T": {"ops": [...], "var_form": k}, "S": ..., "A": ...}).')
@_corpus_option
def cmd_classify(text: str, discipline: str, grammar_file: str | None,
                 corpus_dir: str | None) -> None:
    """Check the boundedness discipline of a formula (or corpus id)."""
    corpus = load_corpus(corpus_dir)
    try:
        f = _read_formula_arg(text, corpus)
    except ParseError as e:
        click.echo(f"syntax error: {e}", err=True)
        sys.exit(1)
    if discipline == "poly":
        d = Polynomial()
    elif discipline == "exp":
        d = Exponential()
    else:
        d = CLA11_PTIME if grammar_file is None else _load_grammar(Path(grammar_file))
    report = classify_bounded(f, d)
    click.echo(report.render())
    sys.exit(0 if report.conforming else 2)


def _load_grammar(path: Path) -> Cla11:
    try:
        doc = json.loads(path.read_text())
        def g(key: str) -> TermGrammar:
            return TermGrammar(frozenset(doc[key]["ops"]), int(doc[key]["var_form"]))
        return Cla11(time=g("T"), space=g("S"), amplitude=g("A"))
    except (KeyError, ValueError, json.JSONDecodeError) as e:
        click.echo(f"bad grammar file: {e}", err=True)
        sys.exit(1)


def _load_strategy(ref: str, corpus: Corpus) -> Strategy:
    if ref in BUILTIN_NAMES:
        return builtin(ref)
    if ref in corpus.entries and corpus[ref].strategy_kind:
        return corpus.strategy(ref)
    path = Path(ref)
    if not path.exists():
        raise click.ClickException(
            f"unknown strategy {ref!r}: not a builtin, corpus id, or file")
    doc = json.loads(path.read_text())
    if doc.get("kind") == "strategy_bundle":
        doc = doc["derivation"]
    d = load_derivation(doc)
    return extract(d, default_registry())


def _make_env(spec: str):
    if spec == "silent":
        return Silent()
    if spec == "interactive":
        return Interactive()
    if spec.startswith("random:"):
        parts = spec.split(":")
        seed = int(parts[1])
        bound = int(parts[2]) if len(parts) > 2 else 16
        return RandomEnv(seed, bound)
    if spec.startswith("script:"):
        return Scripted(parse_run(Path(spec[len("script:"):]).read_text()))
    raise click.ClickException(
        f"bad --env {spec!r} (want silent, interactive, random:SEED[:BOUND], script:FILE)")


@main.command("play")
@click.argument("formula_ref")
@click.option("--strategy", "strategy_ref", default=None,
              help="Builtin name, corpus id, bundle or derivation file. "
                   "Defaults to the corpus entry's strategy.")
@click.option("--env", "env_spec", default="silent", show_default=True,
              help="silent | interactive | random:SEED[:BOUND] | script:FILE")
@click.option("--moves", default=None,
              help="Inline script: move lines separated by ';' (e.g. 'B - 2').")
@click.option("--max-steps", default=200, show_default=True)
@click.option("--budget", default=65536, show_default=True)
@_corpus_option
def cmd_play(formula_ref: str, strategy_ref: str | None, env_spec: str,
             moves: str | None, max_steps: int, budget: int,
             corpus_dir: str | None) -> None:
    """Play a formula (text or corpus id) and print the transcript."""
    corpus = load_corpus(corpus_dir)
    try:
        f = _read_formula_arg(formula_ref, corpus)
    except ParseError as e:
        click.echo(f"syntax error: {e}", err=True)
        sys.exit(1)
    if strategy_ref is None:
        if formula_ref in corpus.entries and corpus[formula_ref].strategy_kind:
            strategy = corpus.strategy(formula_ref)
        else:
            raise click.ClickException("no --strategy given and no corpus default")
    else:
        strategy = _load_strategy(strategy_ref, corpus)
    env = Scripted(parse_run(moves.replace(";", "\n"))) if moves else _make_env(env_spec)
    try:
        t = run_session(f, {}, strategy, env, Limits(max_steps, budget))
    except ValueError as e:
        click.echo(str(e), err=True)
        sys.exit(1)
    click.echo(t.render())
    sys.exit(0 if t.verdict.is_top else 2 if t.verdict.is_bot else 3)


@main.command("extract")
@click.argument("derivation_file", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "out_file", type=click.Path(dir_okay=False), required=True,
              help="Where to write the strategy bundle.")
@click.option("--budget", default=4096, show_default=True,
              help="Budget for checking elementary axioms.")
def cmd_extract(derivation_file: str, out_file: str, budget: int) -> None:
    """Check a derivation and write a self-contained strategy bundle."""
    doc = json.loads(Path(derivation_file).read_text())
    try:
        d = load_derivation(doc)
    except DerivationError as e:
        click.echo(f"bad derivation: {e}", err=True)
        sys.exit(1)
    report = check_derivation(d, budget=budget)
    if not report.ok:
        click.echo(report.render(), err=True)
        sys.exit(1)
    for n in report.trusted:
        click.echo(f"note: axiom {n.node_id} accepted on trust (not machine-checked)")
    bundle = {
        "kind": "strategy_bundle",
        "version": 1,
        "target": print_formula(d.theorem),
        "derivation": doc,
    }
    Path(out_file).write_text(json.dumps(bundle, indent=2) + "\n")
    click.echo(f"bundle written: {out_file}")


def _parse_range(spec: str) -> range:
    a, sep, b = spec.partition("..")
    if not sep:
        raise click.ClickException(f"bad --range {spec!r} (want A..B, inclusive)")
    lo, hi = int(a), int(b)
    if hi < lo:
        raise click.ClickException("empty --range")
    return range(lo, hi + 1)


@main.command("verify")
@click.argument("strategy_ref")
@click.option("--range", "range_spec", default=None, help="Root payloads A..B (inclusive).")
@click.option("--seeds", default=None, type=int, help="Number of seeded random environments.")
@click.option("--payload-bound", default=16, show_default=True)
@click.option("--max-steps", default=200, show_default=True)
@click.option("--budget", default=65536, show_default=True)
@_corpus_option
def cmd_verify(strategy_ref: str, range_spec: str | None, seeds: int | None,
               payload_bound: int, max_steps: int, budget: int,
               corpus_dir: str | None) -> None:
    """Sweep a strategy over environments; exit 0 only with zero losses."""
    corpus = load_corpus(corpus_dir)
    strategy = _load_strategy(strategy_ref, corpus)
    if range_spec is None and seeds is None:
        raise click.ClickException("give --range A..B and/or --seeds N")
    report = verify_strategy(
        strategy.formula, strategy,
        payload_range=_parse_range(range_spec) if range_spec else None,
        seeds=range(seeds) if seeds else None,
        limits=Limits(max_steps, budget), payload_bound=payload_bound)
    click.echo(report.render())
    sys.exit(0 if report.losses == 0 else 2)


@main.command("bench")
@click.argument("strategy_ref")
@click.option("--inputs", "inputs_spec", default="bits:1..16", show_default=True,
              help="bits:A..B or values:A..B or values:a,b,c")
@click.option("--out-dir", type=click.Path(file_okay=False), default=None,
              help="Write bench.csv and figures here as well as stdout.")
@click.option("--max-steps", default=200, show_default=True)
@click.option("--budget", default=65536, show_default=True)
@_corpus_option
def cmd_bench(strategy_ref: str, inputs_spec: str, out_dir: str | None,
              max_steps: int, budget: int, corpus_dir: str | None) -> None:
    """Sample a strategy over growing inputs; print the table and the
    growth fit, optionally writing CSV + figures."""
    corpus = load_corpus(corpus_dir)
    strategy = _load_strategy(strategy_ref, corpus)
    payloads = bench_mod.parse_inputs_spec(inputs_spec)
    samples = bench_mod.bench_strategy(strategy.formula, strategy, payloads,
                                       Limits(max_steps, budget))
    table = bench_mod.table_csv(samples)
    click.echo(table, nl=False)
    try:
        fit = bench_mod.fit_complexity(samples)
        click.echo(fit.render())
    except ValueError as e:
        click.echo(f"(no growth fit: {e})")
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "bench.csv").write_text(table)
        for p in bench_mod.save_figures(samples, out):
            click.echo(f"figure written: {p}")
        click.echo(f"table written: {out / 'bench.csv'}")


@main.command("corpus")
@_corpus_option
def cmd_corpus(corpus_dir: str | None) -> None:
    """List the corpus entries."""
    corpus = load_corpus(corpus_dir)
    for e in corpus:
        strat = f" [{e.strategy_kind}:{e.strategy_ref}]" if e.strategy_kind else ""
        click.echo(f"{e.id}: {e.formula_text}{strat}")
        if e.description:
            click.echo(f"    {e.description}")


@main.command("serve")
@click.option("--port", default=8797, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@_corpus_option
def cmd_serve(port: int, host: str, corpus_dir: str | None) -> None:
    """Run the live-session HTTP service for the arena client."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(corpus_dir), host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()
