"""Positive maps acting on the B factor and their extension I (x) Lambda."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from .bipartite import BipartiteState, format_matrix_rows, parse_complex_matrix, read_json, require_int
from .errors import ShapeError, ValidationError
from .linalg import HERMITIAN_TOL, as_cmat, check_hermitian


class MapKind(str, enum.Enum):
    TRANSPOSE = "transpose"
    HOU_GAMMA = "gamma"
    REDUCTION = "reduction"
    SUPEROPERATOR = "superop"


@dataclass(frozen=True, eq=False)
class PositiveMapSpec:
    """A (trusted) positive map on dimB x dimB matrices.

    Builtins are applied by their closed forms.  A ``SUPEROPERATOR`` carries a
    (dimB^2 x dimB^2) matrix L with ``vec(Lambda(X)) = L vec(X)``, vec taken
    row-major as in the realignment.  Only Hermiticity preservation is checked
    at construction; positivity of a user map is taken on trust.
    """

    dimB: int
    kind: MapKind
    superop: np.ndarray | None = None
    label: str = field(default="")

    def __post_init__(self):
        kind = MapKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not isinstance(self.dimB, (int, np.integer)) or self.dimB < 1:
            raise ValidationError(f"dimB must be a positive integer, got {self.dimB!r}")
        if kind is MapKind.HOU_GAMMA and self.dimB != 3:
            raise ValidationError(f"the gamma map acts on 3x3 matrices, got dimB = {self.dimB}")
        if kind is MapKind.SUPEROPERATOR:
            if self.superop is None:
                raise ValidationError("superoperator map requires a superop matrix")
            L = as_cmat(self.superop, "superop")
            n = self.dimB**2
            if L.shape != (n, n):
                raise ValidationError(f"superop must be {n}x{n} for dimB = {self.dimB}, got {L.shape[0]}x{L.shape[1]}")
            L.setflags(write=False)
            object.__setattr__(self, "superop", L)
        elif self.superop is not None:
            raise ValidationError(f"builtin map '{kind.value}' must not carry a superop")
        if not self.label:
            object.__setattr__(self, "label", kind.value)
        _check_hermiticity_preserving(self)

    @property
    def is_builtin(self) -> bool:
        return self.kind is not MapKind.SUPEROPERATOR


def _check_hermiticity_preserving(m: PositiveMapSpec, tol: float = HERMITIAN_TOL) -> None:
    d = m.dimB
    for i in range(d):
        for j in range(i, d):
            e = np.zeros((d, d), dtype=complex)
            e[i, j] = 1.0
            lhs = _apply(m, e.conj().T)
            rhs = _apply(m, e).conj().T
            err = np.max(np.abs(lhs - rhs))
            if err > tol:
                raise ValidationError(
                    f"map '{m.label}' is not Hermiticity-preserving: "
                    f"Lambda(E_{j}{i}) differs from Lambda(E_{i}{j})^H by {err:.3e}"
                )


def transpose_map(dimB: int) -> PositiveMapSpec:
    return PositiveMapSpec(dimB, MapKind.TRANSPOSE)


def hou_gamma() -> PositiveMapSpec:
    return PositiveMapSpec(3, MapKind.HOU_GAMMA)


def reduction_map(dimB: int) -> PositiveMapSpec:
    return PositiveMapSpec(dimB, MapKind.REDUCTION)


def builtin(name: str, dimB: int) -> PositiveMapSpec:
    name = name.lower()
    if name in ("transpose", "t"):
        return transpose_map(dimB)
    if name in ("gamma", "hou-gamma", "hou_gamma"):
        if dimB != 3:
            raise ValidationError(f"the gamma map needs dimB = 3, state has dimB = {dimB}")
        return hou_gamma()
    if name == "reduction":
        return reduction_map(dimB)
    raise ValidationError(f"unknown builtin map '{name}' (expected transpose, gamma or reduction)")


def _gamma(x: np.ndarray) -> np.ndarray:
    out = -x.copy()
    out[0, 0] = x[0, 0] + x[1, 1]
    out[1, 1] = x[1, 1] + x[2, 2]
    out[2, 2] = x[2, 2] + x[0, 0]
    return out / 2


def _apply(m: PositiveMapSpec, x: np.ndarray) -> np.ndarray:
    if m.kind is MapKind.TRANSPOSE:
        return x.T.copy()
    if m.kind is MapKind.HOU_GAMMA:
        return _gamma(x)
    if m.kind is MapKind.REDUCTION:
        return np.trace(x) * np.eye(m.dimB) - x
    return (m.superop @ x.reshape(-1)).reshape(m.dimB, m.dimB)


def apply_map(m: PositiveMapSpec, x) -> np.ndarray:
    x = as_cmat(x, "map input")
    if x.shape != (m.dimB, m.dimB):
        raise ShapeError(f"map '{m.label}' acts on {m.dimB}x{m.dimB} matrices, got {x.shape[0]}x{x.shape[1]}")
    return _apply(m, x)


def extend_and_apply(m: PositiveMapSpec, s: BipartiteState) -> np.ndarray:
    """(I (x) Lambda)(rho), block by block, symmetrized."""
    if m.dimB != s.dimB:
        raise ShapeError(f"map '{m.label}' has dimB = {m.dimB}, state has dimB = {s.dimB}")
    a, b = s.dimA, s.dimB
    blocks = s.blocks()
    out = np.empty((a, a, b, b), dtype=complex)
    for i in range(a):
        for j in range(a):
            out[i, j] = _apply(m, blocks[i, j])
    full = out.transpose(0, 2, 1, 3).reshape(a * b, a * b)
    return check_hermitian(full, HERMITIAN_TOL, f"(I x {m.label})(rho)")


def superop_matrix(m: PositiveMapSpec) -> np.ndarray:
    """Explicit superoperator of any map, built column by column from matrix units."""
    d = m.dimB
    L = np.zeros((d * d, d * d), dtype=complex)
    for k in range(d * d):
        e = np.zeros(d * d, dtype=complex)
        e[k] = 1.0
        L[:, k] = _apply(m, e.reshape(d, d)).reshape(-1)
    return L


def superop_from_dict(doc: dict, source="<dict>") -> PositiveMapSpec:
    dimB = require_int(doc, "dimB", source)
    if "superop" not in doc:
        raise ValidationError(f"{source}: missing field 'superop'")
    L = parse_complex_matrix(doc["superop"], "superop")
    label = doc.get("label") or f"superop:{source}"
    try:
        return PositiveMapSpec(dimB, MapKind.SUPEROPERATOR, L, label=str(label))
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from exc


def superop_from_file(path) -> PositiveMapSpec:
    return superop_from_dict(read_json(path), path)


def dumps_superop(m: PositiveMapSpec) -> str:
    return "{\n" f'  "dimB": {m.dimB},\n' f'  "superop": {format_matrix_rows(superop_matrix(m))}\n' "}\n"
