"""Growth fitting and bench sampling."""

import pytest

from clgames.bench import (
    BenchSample,
    bench_strategy,
    fit_complexity,
    parse_inputs_spec,
    save_figures,
    table_csv,
)
from clgames.strategies import builtin


def mk(bits, time, space=10, amp=1):
    return BenchSample(input_bits=bits, time_steps=time, space_peak=space,
                       amp_out_bits=amp)


def test_fit_needs_eight_increasing_samples():
    with pytest.raises(ValueError):
        fit_complexity([mk(n, 1) for n in range(1, 8)])
    with pytest.raises(ValueError):
        fit_complexity([mk(1, 1)] * 8)


def test_constant_metric_fits_degree_zero():
    rep = fit_complexity([mk(n, 3) for n in range(1, 13)])
    assert rep.time_degree == 0


def test_linear_metric_fits_degree_one():
    rep = fit_complexity([mk(n, 5 * n) for n in range(1, 13)])
    assert rep.time_degree == 1


def test_quadratic_metric_fits_degree_two():
    rep = fit_complexity([mk(n, n * n + 2) for n in range(1, 13)])
    assert rep.time_degree == 2


def test_exponential_metric_reported_super_polynomial():
    rep = fit_complexity([mk(n, 2 ** n) for n in range(1, 40)])
    assert rep.time_degree is None
    assert "super-polynomial" in rep.render()


def test_amplitude_linear_summary():
    rep = fit_complexity([BenchSample(n, 1, 1, n + 1) for n in range(1, 13)])
    assert rep.linear_amplitude_offset == 1
    assert "out_bits <= in_bits + 1" in rep.render()


def test_inputs_spec_parsing():
    assert parse_inputs_spec("bits:1..3") == [1, 3, 7]
    assert parse_inputs_spec("values:2..5") == [2, 3, 4, 5]
    assert parse_inputs_spec("values:1,2,4") == [1, 2, 4]
    with pytest.raises(ValueError):
        parse_inputs_spec("nope:1")
    with pytest.raises(ValueError):
        parse_inputs_spec("bits:0..3")


def test_bench_successor_amplitude_bound():
    s = builtin("successor")
    samples = bench_strategy(s.formula, s, parse_inputs_spec("bits:1..16"))
    for smp in samples:
        assert smp.amp_out_bits <= smp.input_bits + 1
    rep = fit_complexity(samples)
    assert rep.linear_amplitude_offset is not None
    csv_text = table_csv(samples)
    assert csv_text.splitlines()[0] == \
        "payload,input_bits,time,space,amp_in_bits,amp_out_bits,compositions"
    assert len(csv_text.splitlines()) == 17


def test_save_figures(tmp_path):
    s = builtin("successor")
    samples = bench_strategy(s.formula, s, parse_inputs_spec("bits:1..8"))
    files = save_figures(samples, tmp_path)
    assert len(files) == 3
    for f in files:
        assert f.exists() and f.stat().st_size > 500
