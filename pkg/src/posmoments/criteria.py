"""The criterion battery.

Every criterion reduces a state to a signed witness; separable states always
give ``witness <= 0``, and a criterion fires (``Entangled``) only when the
witness exceeds zero by more than ``tol``.
"""

from __future__ import annotations

import enum
import functools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .bipartite import BipartiteState, partial_transpose, realign
from .errors import PosMomentsError, ShapeError, ValidationError
from .linalg import hermitian_eigenvalues, singular_values
from .maps import MapKind, PositiveMapSpec, extend_and_apply, transpose_map
from .spectra import MomentVector, hankel_matrix, newton_coefficients

DEFAULT_TOL = 1e-9
RANK_RTOL = 1e-10
RADICAND_CLAMP = 1e-12

ALL_CRITERIA = ("L1", "L2", "L3", "L4", "L5", "L6", "CCNR", "T1", "PPT")
MAP_DEPENDENT = frozenset({"L4", "T1"})


class Decision(str, enum.Enum):
    ENTANGLED = "Entangled"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    criterion: str
    decision: Decision
    witness: float
    margin: float
    tol: float
    detail: str = ""

    @property
    def entangled(self) -> bool:
        return self.decision is Decision.ENTANGLED

    def to_dict(self) -> dict:
        def num(x):
            return x if math.isfinite(x) else None

        return {
            "criterion": self.criterion,
            "decision": self.decision.value,
            "witness": num(self.witness),
            "margin": num(self.margin),
            "tol": self.tol,
            "detail": self.detail,
        }


def _verdict(criterion: str, witness: float, tol: float, detail: str = "", threshold: float = 0.0) -> Verdict:
    witness = float(witness)
    decision = Decision.ENTANGLED if witness - threshold > tol else Decision.INCONCLUSIVE
    return Verdict(criterion, decision, witness, abs(witness - threshold), tol, detail)


def _failed(criterion: str, tol: float, exc: Exception) -> Verdict:
    return Verdict(criterion, Decision.INCONCLUSIVE, math.nan, math.nan, tol, f"error: {exc}")


# States and maps are immutable and hash by identity, so spectra shared by
# several criteria are computed once per (state, map).
def _output_spectrum(s: BipartiteState, m: PositiveMapSpec | None) -> np.ndarray:
    if m is not None and m.kind is MapKind.TRANSPOSE:
        if m.dimB != s.dimB:
            raise ShapeError(f"map '{m.label}' has dimB = {m.dimB}, state has dimB = {s.dimB}")
        m = None
    return _cached_output_spectrum(s, m)


@functools.lru_cache(maxsize=256)
def _cached_output_spectrum(s: BipartiteState, m: PositiveMapSpec | None) -> np.ndarray:
    mat = partial_transpose(s) if m is None else extend_and_apply(m, s)
    lam = hermitian_eigenvalues(mat)
    lam.setflags(write=False)
    return lam


@functools.lru_cache(maxsize=256)
def _realigned_sv(s: BipartiteState) -> np.ndarray:
    sv = singular_values(realign(s))
    sv.setflags(write=False)
    return sv


def _pt_spectrum_moments(s: BipartiteState, kmax: int) -> MomentVector:
    return MomentVector.from_spectrum(_output_spectrum(s, None), kmax)


def l1_p3ppt(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    """p3-PPT: ``p_2^2 - p_3 p_1``."""
    p = _pt_spectrum_moments(s, min(3, s.dim))
    p1, p2, p3 = _first_three(p)
    return _verdict("L1", p2 * p2 - p3 * p1, tol, f"p1={p1:.17g} p2={p2:.17g} p3={p3:.17g}")


def l2_d3in(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    """Third-order D_in condition: ``(3/2) p_1 p_2 - (1/2) p_1^3 - p_3``."""
    p = _pt_spectrum_moments(s, min(3, s.dim))
    p1, p2, p3 = _first_three(p)
    return _verdict("L2", 1.5 * p1 * p2 - 0.5 * p1**3 - p3, tol, f"p1={p1:.17g} p2={p2:.17g} p3={p3:.17g}")


def _first_three(p: MomentVector) -> tuple[float, float, float]:
    vals = list(p.values) + [0.0] * (3 - p.kmax)
    return vals[0], vals[1], vals[2]


def l3_p3oppt(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    """p3-OPPT: ``mu x^3 + (1 - mu x)^3 - p_3`` with ``mu = 1/p_2``.

    Evaluated literally.  With ``mu = 1/p_2`` the radicand is identically 1 in
    exact arithmetic, so this coincides with ``p_2^2 - p_3`` for trace-one
    inputs.
    """
    p = _pt_spectrum_moments(s, min(3, s.dim))
    _, p2, p3 = _first_three(p)
    if p2 <= 0:
        raise ValidationError(f"p3-OPPT needs p_2 > 0, got {p2}")
    mu = 1.0 / p2
    radicand = mu * (p2 * (mu + 1.0) - 1.0)
    if radicand < 0:
        if radicand < -RADICAND_CLAMP:
            return Verdict(
                "L3", Decision.INCONCLUSIVE, math.nan, math.nan, tol,
                f"numerical-domain: radicand {radicand:.3e} < 0",
            )
        radicand = 0.0
    x = (mu + math.sqrt(radicand)) / (mu * (mu + 1.0))
    witness = mu * x**3 + (1.0 - mu * x) ** 3 - p3
    return _verdict("L3", witness, tol, f"p2={p2:.17g} p3={p3:.17g} mu={mu:.17g} x={x:.17g}")


def _map_label(m: PositiveMapSpec | None) -> str:
    return "transpose" if m is None else m.label


def l4_hankel(s: BipartiteState, m: PositiveMapSpec | None = None, tol: float = DEFAULT_TOL) -> Verdict:
    """Hankel moment matrices ``[p_{i+j+1}]`` must be PSD for l = 1..floor((n-1)/2).

    Moments are those of the partial transpose by default, or of
    ``(I x Lambda)(rho)`` when a map is given.  The spectrum is divided by its
    RMS value first; this is a diagonal congruence of every Hankel matrix, so
    definiteness is unchanged while the entries become O(1) and ``tol`` acts on
    a scale-free witness.
    """
    cid = f"L4[{_map_label(m)}]"
    n = s.dim
    if n < 3:
        raise ValidationError(f"Hankel criterion needs dimA*dimB >= 3, got {n}")
    lam = _output_spectrum(s, m)
    rms = math.sqrt(float(np.sum(lam**2)) / n)
    if rms == 0.0:
        raise ValidationError("output of the map is the zero matrix")
    lmax = (n - 1) // 2
    p = MomentVector.from_spectrum(lam / rms, 2 * lmax + 1)
    mins = [float(hermitian_eigenvalues(hankel_matrix(p, l))[0]) for l in range(1, lmax + 1)]
    witness = -min(mins)
    bad = [l for l, v in zip(range(1, lmax + 1), mins) if -v > tol]
    detail = "min eig per l: " + ", ".join(f"l={l}:{v:.3e}" for l, v in zip(range(1, lmax + 1), mins))
    if bad:
        detail += f"; violating l = {bad}"
    return _verdict(cid, witness, tol, detail)


def l5_realign_moments(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    """``r_2^2 - r_3`` over singular values of the realigned matrix."""
    sv = _realigned_sv(s)
    r2 = float(np.sum(sv**2))
    r3 = float(np.sum(sv**3))
    return _verdict("L5", r2 * r2 - r3, tol, f"r2={r2:.17g} r3={r3:.17g}")


def l6_rmoments(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    """R-moments: ``k(k-1) D_k^(1/k) + T_1 - 1`` with k the numerical rank of rho^R."""
    sv = _realigned_sv(s)
    nz = sv[sv > RANK_RTOL * sv[0]]
    k = len(nz)
    dk = float(np.prod(nz**2))
    t1 = float(np.sum(sv**2))
    witness = k * (k - 1) * dk ** (1.0 / k) + t1 - 1.0
    return _verdict("L6", witness, tol, f"k={k} D_k={dk:.17g} T_1={t1:.17g}")


def ccnr_trace_norm(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    norm1 = float(np.sum(_realigned_sv(s)))
    return _verdict("CCNR", norm1 - 1.0, tol, f"||rho^R||_1={norm1:.17g}")


def normalized_coefficients(lam) -> tuple[list[float], list[float]]:
    """Characteristic coefficients from the moments of a spectrum.

    Returns ``(raw, scaled)``.  ``raw`` are the ``D_i``.  ``scaled`` are
    ``D_i / (C(d, i) s^i)`` with ``s = sqrt(T_2 / d)`` the RMS eigenvalue, which
    puts every coefficient on an O(1) scale (``|scaled_i| <= 1`` whenever the
    spectrum has a single sign) without changing any sign.
    """
    lam = np.asarray(lam, dtype=float)
    d = len(lam)
    t2 = float(np.sum(lam**2))
    if t2 == 0.0:
        return [0.0] * d, [0.0] * d
    scale = math.sqrt(t2 / d)
    t_hat = MomentVector.from_spectrum(lam / scale, d)
    d_hat = newton_coefficients(t_hat.values, d)
    raw = [v * scale**i for i, v in enumerate(d_hat, start=1)]
    scaled = [v / math.comb(d, i) for i, v in enumerate(d_hat, start=1)]
    return raw, scaled


def theorem1_sign_pattern(s: BipartiteState, m: PositiveMapSpec, tol: float = DEFAULT_TOL) -> Verdict:
    """Sign pattern of the characteristic coefficients of ``(I x Lambda)(rho)``.

    For a PSD output, ``D_i <= 0`` for odd i and ``D_i >= 0`` for even i.  The
    witness is the largest scale-normalized violation; coefficients within
    ``tol`` of zero count as consistent.
    """
    cid = f"T1[{m.label}]"
    lam = _output_spectrum(s, m)
    raw, scaled = normalized_coefficients(lam)
    signed = [v if i % 2 else -v for i, v in enumerate(scaled, start=1)]
    witness = max(signed)
    bad = [i for i, v in enumerate(signed, start=1) if v > tol]
    if bad:
        detail = "violations: " + ", ".join(f"D_{i}={raw[i - 1]:.6e} (scaled {scaled[i - 1]:.3e})" for i in bad)
    else:
        detail = f"sign pattern consistent; D_{len(raw)}={raw[-1]:.6e}"
    return _verdict(cid, witness, tol, detail)


def ppt_eigen_oracle(s: BipartiteState, tol: float = DEFAULT_TOL) -> Verdict:
    lam_min = float(_output_spectrum(s, None)[0])
    return _verdict("PPT", -lam_min, tol, f"min eig of rho^T_B = {lam_min:.17g}")


@dataclass(frozen=True)
class CriterionReport:
    state: str
    verdicts: tuple[Verdict, ...]
    maps: tuple[str, ...] = field(default=())

    def entangled_by(self) -> set[str]:
        return {v.criterion for v in self.verdicts if v.entangled}

    def __getitem__(self, criterion: str) -> Verdict:
        for v in self.verdicts:
            if v.criterion == criterion:
                return v
        raise KeyError(criterion)

    def to_dict(self) -> dict:
        return {"state": self.state, "maps": list(self.maps), "verdicts": [v.to_dict() for v in self.verdicts]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def parse_criteria(spec: str | None) -> tuple[str, ...]:
    """``"all"`` or a comma list such as ``"l1,ccnr,t1"``; output keeps battery order."""
    if spec is None or spec.strip().lower() == "all":
        return ALL_CRITERIA
    wanted = {c.strip().upper() for c in spec.split(",") if c.strip()}
    unknown = wanted - set(ALL_CRITERIA)
    if unknown:
        raise ValidationError(f"unknown criteria {sorted(unknown)}; choose from {', '.join(ALL_CRITERIA)}")
    return tuple(c for c in ALL_CRITERIA if c in wanted)


_SIMPLE = {
    "L1": l1_p3ppt,
    "L2": l2_d3in,
    "L3": l3_p3oppt,
    "L5": l5_realign_moments,
    "L6": l6_rmoments,
    "CCNR": ccnr_trace_norm,
    "PPT": ppt_eigen_oracle,
}


def evaluate_all(
    s: BipartiteState,
    maps: list[PositiveMapSpec] | None = None,
    which=ALL_CRITERIA,
    tol: float = DEFAULT_TOL,
    label: str = "state",
) -> CriterionReport:
    """Run the requested criteria; map-dependent ones run once per map.

    With no maps the partial transpose is used.  A failing criterion yields an
    Inconclusive verdict carrying the error text instead of aborting.
    """
    maps = list(maps) if maps else [transpose_map(s.dimB)]
    out: list[Verdict] = []
    for cid in ALL_CRITERIA:
        if cid not in which:
            continue
        if cid in MAP_DEPENDENT:
            for m in maps:
                name = f"{cid}[{m.label}]"
                try:
                    if cid == "L4":
                        out.append(l4_hankel(s, m, tol))
                    else:
                        out.append(theorem1_sign_pattern(s, m, tol))
                except (PosMomentsError, ArithmeticError, ValueError) as exc:
                    out.append(_failed(name, tol, exc))
        else:
            try:
                out.append(_SIMPLE[cid](s, tol))
            except (PosMomentsError, ArithmeticError, ValueError) as exc:
                out.append(_failed(cid, tol, exc))
    return CriterionReport(label, tuple(out), tuple(m.label for m in maps))
