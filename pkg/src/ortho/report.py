"""Experiment harness: asymptotic constant fitting, a uniformity statistic and
CSV/JSON serialization of count tables."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats


@dataclass
class CountReport:
    experiment: str
    params: dict
    rows: list[tuple[float, int, float, float]] = field(default_factory=list)
    delta: float = 1.0
    fit: dict = field(default_factory=dict)

    def add(self, s: float, count: int, prediction: float) -> None:
        if not prediction > 0:
            raise ValueError("prediction must be positive")
        self.rows.append((float(s), int(count), float(prediction), count / prediction))
        self.rows.sort(key=lambda r: r[0])

    def refit(self) -> dict:
        constant, drift = fit_constant(self.rows, self.delta)
        self.fit = {"constant": constant, "drift": drift}
        return self.fit

    @property
    def ratios(self) -> list[float]:
        return [r[3] for r in self.rows]


def fit_constant(rows, delta: float) -> tuple[float, float]:
    """Geometric mean of count e^(-delta s) over the top third of the s values,
    and the largest relative deviation from it inside that window."""
    pts = sorted({(float(r[0]), float(r[1])) for r in rows})
    if not pts:
        raise ValueError("no rows to fit")
    window = pts[len(pts) - max(1, math.ceil(len(pts) / 3)):]
    if any(c <= 0 for _, c in window):
        raise ValueError("counts in the fit window must be positive")
    logs = np.array([math.log(c) - delta * s for s, c in window])
    constant = float(math.exp(logs.mean()))
    drift = float(np.max(np.abs(np.exp(logs) / constant - 1)))
    return constant, drift


def fit_exponent(rows) -> tuple[float, float]:
    """Least-squares slope and intercept of log count against log s."""
    pts = np.array([(r[0], r[1]) for r in rows if r[1] > 0 and r[0] > 0], dtype=float)
    if len(pts) < 2:
        raise ValueError("need two positive rows")
    slope, intercept = np.polyfit(np.log(pts[:, 0]), np.log(pts[:, 1]), 1)
    return float(slope), float(math.exp(intercept))


def ks_uniform(samples) -> float:
    """Kolmogorov-Smirnov distance between the samples and the uniform law on [0, 1)."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("no samples")
    return float(stats.kstest(x, "uniform").statistic)


def _num(x) -> str:
    # repr is locale independent and round-trips floats exactly
    return repr(float(x)) if not isinstance(x, (int, np.integer)) else str(int(x))


def emit(report: CountReport, fmt: str = "csv") -> bytes:
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["s", "count", "prediction", "ratio"])
        for s, c, p, r in report.rows:
            w.writerow([_num(s), str(int(c)), _num(p), _num(r)])
        return buf.getvalue().encode()
    if fmt == "json":
        doc = {
            "experiment": report.experiment,
            "params": report.params,
            "rows": [{"s": s, "count": int(c), "prediction": p, "ratio": r}
                     for s, c, p, r in report.rows],
            "fit": {"constant": report.fit.get("constant"), "drift": report.fit.get("drift")},
        }
        return (json.dumps(doc, sort_keys=True, indent=2, default=_jsonable) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def _jsonable(x):
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return str(x)
