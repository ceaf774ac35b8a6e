"""Per-criterion detection thresholds along the paper-ppt state family.

A coarse grid brackets every change of decision, then bisection on the
decision itself narrows each bracket.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

from .bipartite import paper_ppt_family
from .criteria import ALL_CRITERIA, DEFAULT_TOL, Verdict, evaluate_all
from .errors import DomainError, ValidationError
from .maps import PositiveMapSpec, hou_gamma

FAMILIES = ("paper-ppt",)
BISECTION_STEPS = 40
FAMILY_MIN = 0.5


@dataclass
class ScanResult:
    criterion: str
    threshold: float | None
    iterations: int
    transitions: list[tuple[float, str]] = field(default_factory=list)
    grid_points: int = 0
    fires_at: list[bool] = field(default_factory=list, repr=False)
    residual: float = 0.0

    def summary(self) -> str:
        if self.threshold is None:
            if self.fires_at and all(self.fires_at):
                return "fires on the whole range"
            if self.fires_at and not any(self.fires_at):
                return "never fires"
            return "no fire-to-quiet transition"
        return f"{self.threshold:.6f}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.criterion,
            "threshold": self.threshold,
            "iterations": self.iterations,
            "residual": self.residual,
            "grid_points": self.grid_points,
            "transitions": [{"a": a, "kind": kind} for a, kind in self.transitions],
            "summary": self.summary(),
        }


@dataclass(frozen=True)
class GridRow:
    a: float
    criterion: str
    witness: float
    decision: str


def grid(lo: float, hi: float, step: float) -> np.ndarray:
    if step <= 0:
        raise ValidationError(f"step must be positive, got {step}")
    if hi < lo:
        raise ValidationError(f"empty range {lo}:{hi}")
    if lo < FAMILY_MIN:
        raise DomainError(f"paper-ppt family is defined for a >= {FAMILY_MIN}; range starts at {lo}")
    n = int(round((hi - lo) / step))
    return np.linspace(lo, lo + n * step, n + 1)


def _evaluate(a: float, which, maps, tol) -> list[Verdict]:
    s = paper_ppt_family(float(a))
    return list(evaluate_all(s, maps, which, tol, label=f"paper-ppt(a={a!r})").verdicts)


def _fires(a: float, criterion: str, base: str, maps, tol) -> bool:
    for v in _evaluate(a, (base,), maps, tol):
        if v.criterion == criterion:
            return v.entangled
    raise KeyError(criterion)


def _bisect(lo: float, hi: float, fires_lo: bool, criterion: str, base: str, maps, tol) -> tuple[float, float, int]:
    steps = 0
    for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if _fires(mid, criterion, base, maps, tol) == fires_lo:
            lo = mid
        else:
            hi = mid
        steps += 1
    return 0.5 * (lo + hi), 0.5 * (hi - lo), steps


def scan_family(
    family: str = "paper-ppt",
    lo: float = 0.5,
    hi: float = 1.5,
    step: float = 0.01,
    criteria=ALL_CRITERIA,
    maps: list[PositiveMapSpec] | None = None,
    tol: float = DEFAULT_TOL,
) -> tuple[list[GridRow], list[ScanResult]]:
    """Evaluate the criteria on a grid of ``a`` and bisect every decision flip.

    ``threshold`` is the largest ``a`` at which a criterion stops firing when
    ``a`` increases; all flips, in both directions, are kept in ``transitions``.
    """
    if family not in FAMILIES:
        raise ValidationError(f"unknown family '{family}' (known: {', '.join(FAMILIES)})")
    maps = list(maps) if maps else [hou_gamma()]
    points = grid(lo, hi, step)
    rows: list[GridRow] = []
    series: dict[str, list[Verdict]] = {}
    for a in points:
        for v in _evaluate(a, criteria, maps, tol):
            rows.append(GridRow(float(a), v.criterion, v.witness, v.decision.value))
            series.setdefault(v.criterion, []).append(v)

    results = []
    for cid, verdicts in series.items():
        base = cid.split("[", 1)[0]
        fires = [v.entangled for v in verdicts]
        res = ScanResult(cid, None, 0, grid_points=len(points), fires_at=fires)
        for k in range(len(points) - 1):
            if fires[k] == fires[k + 1]:
                continue
            at, resid, steps = _bisect(points[k], points[k + 1], fires[k], cid, base, maps, tol)
            res.iterations += steps
            kind = "stops" if fires[k] else "starts"
            res.transitions.append((at, kind))
            if fires[k]:
                res.threshold = at
                res.residual = resid
        results.append(res)
    return rows, results


def rows_to_csv(rows: list[GridRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["a", "criterion", "witness", "decision"])
    for r in rows:
        w.writerow([format(r.a, ".17g"), r.criterion, format(r.witness, ".17g"), r.decision])
    return buf.getvalue()
