"""Complexity instrumentation: sampling a strategy over inputs of
growing size, descriptive polynomial-degree fitting, and report
rendering (CSV plus figures).

The fit is deliberately modest: it reports the least degree k <= 4
such that metric <= c * n^k holds on all samples with the constant c
calibrated on the first half of them (times a small slack), or
"super-polynomial at tested scale" when no degree fits.  Nothing here
is an asymptotic claim.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .engine import Move, Player
from .session import Limits, Scripted, run_session
from .strategies import Strategy
from .syntax import Formula


@dataclass(frozen=True)
class BenchSample:
    input_bits: int
    time_steps: int
    space_peak: int
    amp_out_bits: int
    amp_in_bits: int = 0
    payload: int | None = None
    compositions: int = 0


MAX_DEGREE = 4
_SLACK = 1.2


def _fit_degree(ns: list[int], ys: list[int]) -> int | None:
    """Least k with y <= c*n^k for a constant calibrated on the first
    half of the samples; None means super-polynomial at tested scale."""
    half = max(4, len(ns) // 2)
    for k in range(MAX_DEGREE + 1):
        c = max((y / (n ** k) for n, y in zip(ns[:half], ys[:half]) if n > 0), default=0.0)
        c = max(c * _SLACK, 1e-9)
        if all(y <= c * (n ** k) for n, y in zip(ns, ys) if n > 0):
            return k
    return None


@dataclass(frozen=True)
class GrowthReport:
    time_degree: int | None
    space_degree: int | None
    amplitude_degree: int | None
    linear_amplitude_offset: int | None  # least b with out <= in + b, if any
    linear_amplitude_factor: int | None  # least a with out <= a*in, if any

    @staticmethod
    def _fmt(k: int | None) -> str:
        return "super-polynomial at tested scale" if k is None else f"O(n^{k}) at tested scale"

    def render(self) -> str:
        lines = [
            f"time: {self._fmt(self.time_degree)}",
            f"space: {self._fmt(self.space_degree)}",
            f"amplitude: {self._fmt(self.amplitude_degree)}",
        ]
        if self.linear_amplitude_offset is not None:
            lines.append(
                f"amplitude is linear: out_bits <= in_bits + {self.linear_amplitude_offset}")
        elif self.linear_amplitude_factor is not None:
            lines.append(
                f"amplitude is linear: out_bits <= {self.linear_amplitude_factor}*in_bits")
        return "\n".join(lines)


def fit_complexity(samples: list[BenchSample]) -> GrowthReport:
    """Descriptive growth report over samples with strictly increasing
    input bit length (at least 8 of them)."""
    if len(samples) < 8:
        raise ValueError("need at least 8 samples")
    ns = [s.input_bits for s in samples]
    if any(b >= a for a, b in zip(ns[1:], ns)):
        raise ValueError("samples must have strictly increasing input length")
    time_k = _fit_degree(ns, [s.time_steps for s in samples])
    space_k = _fit_degree(ns, [s.space_peak for s in samples])
    amp_k = _fit_degree(ns, [s.amp_out_bits for s in samples])

    offset: int | None = max(s.amp_out_bits - s.input_bits for s in samples)
    if offset < 0:
        offset = 0
    if offset > 8:
        offset = None
    factor: int | None = None
    if offset is None:
        f = max((s.amp_out_bits + s.input_bits - 1) // s.input_bits
                for s in samples if s.input_bits > 0)
        if f <= 8:
            factor = f
    return GrowthReport(time_k, space_k, amp_k, offset, factor)


# ---------------------------------------------------------------------------
# Sampling and rendering
# ---------------------------------------------------------------------------

def parse_inputs_spec(spec: str) -> list[int]:
    """``bits:1..16`` (largest payload of each bit length),
    ``values:0..64`` or ``values:1,2,4,8`` (explicit payloads)."""
    kind, _, rest = spec.partition(":")
    if kind == "bits":
        a, _, b = rest.partition("..")
        lo, hi = int(a), int(b or a)
        if lo < 1 or hi < lo:
            raise ValueError(f"bad bits range {rest!r}")
        return [(1 << b) - 1 for b in range(lo, hi + 1)]
    if kind == "values":
        if ".." in rest:
            a, _, b = rest.partition("..")
            return list(range(int(a), int(b) + 1))
        return [int(v) for v in rest.split(",") if v != ""]
    raise ValueError(f"bad inputs spec {spec!r} (want bits:A..B or values:...)")


def bench_strategy(f: Formula, s: Strategy, payloads: list[int],
                   limits: Limits = Limits()) -> list[BenchSample]:
    """One scripted session per payload at the root choice universal."""
    out = []
    for n in payloads:
        t = run_session(f, {}, s, Scripted([Move(Player.BOT, (), n)]), limits)
        amp_out = max((o for _, o in t.report.amplitude), default=0)
        amp_in = max((i for i, _ in t.report.amplitude), default=0)
        out.append(BenchSample(
            input_bits=1 if n == 0 else n.bit_length(),
            time_steps=t.report.time_steps,
            space_peak=t.report.space_peak,
            amp_out_bits=amp_out,
            amp_in_bits=amp_in,
            payload=n,
            compositions=t.report.compositions,
        ))
    return out


_COLUMNS = ("payload", "input_bits", "time", "space", "amp_in_bits",
            "amp_out_bits", "compositions")


def table_csv(samples: list[BenchSample]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(_COLUMNS)
    for s in samples:
        w.writerow([s.payload, s.input_bits, s.time_steps, s.space_peak,
                    s.amp_in_bits, s.amp_out_bits, s.compositions])
    return buf.getvalue()


def save_figures(samples: list[BenchSample], out_dir: Path, stem: str = "bench") -> list[Path]:
    """Render metric-vs-input-size figures next to the CSV."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ns = [s.input_bits for s in samples]
    written: list[Path] = []
    panels = [
        ("time", [s.time_steps for s in samples], "polling + forwarding steps"),
        ("space", [s.space_peak for s in samples], "peak position size (symbols)"),
        ("amplitude", [s.amp_out_bits for s in samples], "machine payload bits"),
    ]
    for name, ys, ylabel in panels:
        fig, ax = plt.subplots(figsize=(5, 3.4))
        ax.plot(ns, ys, marker="o", lw=1.2)
        if name == "amplitude":
            ax.plot(ns, [s.amp_in_bits for s in samples], marker=".",
                    lw=1.0, ls="--", label="environment payload bits")
            ax.legend(fontsize=8)
        ax.set_xlabel("input bits")
        ax.set_ylabel(ylabel)
        ax.grid(True, alpha=0.3)
        fig.tight_layout()
        path = out_dir / f"{stem}_{name}.png"
        fig.savefig(path, dpi=110)
        plt.close(fig)
        written.append(path)
    return written
