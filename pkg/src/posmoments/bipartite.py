"""Bipartite density matrices, reshuffles, generators and the state-file format.

Index convention: the composite basis is |i>|mu> with i over A (slow) and mu
over B (fast), so ``mat`` is a dimA x dimA grid of dimB x dimB blocks.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, ValidationError
from .linalg import HERMITIAN_TOL, as_cmat, check_hermitian, hermitian_eigenvalues

TRACE_TOL = 1e-9
PSD_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class BipartiteState:
    """A validated density matrix on C^dimA (x) C^dimB.

    Construction checks Hermiticity, unit trace and positivity (all at 1e-9)
    and stores the symmetrized matrix.
    """

    dimA: int
    dimB: int
    mat: np.ndarray

    def __post_init__(self):
        for name in ("dimA", "dimB"):
            v = getattr(self, name)
            if not isinstance(v, (int, np.integer)) or v < 1:
                raise ValidationError(f"{name} must be a positive integer, got {v!r}")
        n = self.dimA * self.dimB
        m = as_cmat(self.mat, "state matrix")
        if m.shape != (n, n):
            raise ValidationError(
                f"state matrix is {m.shape[0]}x{m.shape[1]} but dimA*dimB = {n} requires {n}x{n}"
            )
        m = check_hermitian(m, HERMITIAN_TOL, "state matrix")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"state matrix trace is {tr!r}, expected 1 within {TRACE_TOL}")
        lam_min = hermitian_eigenvalues(m)[0]
        if lam_min < -PSD_TOL:
            raise ValidationError(f"state matrix is not positive semi-definite: min eigenvalue {lam_min:.3e}")
        m.setflags(write=False)
        object.__setattr__(self, "mat", m)

    @property
    def dim(self) -> int:
        return self.dimA * self.dimB

    def blocks(self) -> np.ndarray:
        """View as a (dimA, dimA, dimB, dimB) array of blocks."""
        return self.mat.reshape(self.dimA, self.dimB, self.dimA, self.dimB).transpose(0, 2, 1, 3)

    def purity(self) -> float:
        return float(np.sum(np.abs(self.mat) ** 2))


def partial_transpose(s: BipartiteState) -> np.ndarray:
    """Transpose every dimB x dimB block in place of the B index."""
    t = s.mat.reshape(s.dimA, s.dimB, s.dimA, s.dimB).transpose(0, 3, 2, 1)
    return t.reshape(s.dim, s.dim).copy()


def realign(s: BipartiteState) -> np.ndarray:
    """Realigned matrix: row ``i*dimA + j`` is the row-major vec of block (i, j)."""
    r = s.mat.reshape(s.dimA, s.dimB, s.dimA, s.dimB).transpose(0, 2, 1, 3)
    return r.reshape(s.dimA * s.dimA, s.dimB * s.dimB).copy()


def product_state(rho_a, rho_b) -> BipartiteState:
    rho_a = as_cmat(rho_a)
    rho_b = as_cmat(rho_b)
    return BipartiteState(rho_a.shape[0], rho_b.shape[0], np.kron(rho_a, rho_b))


def pure_state(psi, dimA: int, dimB: int) -> BipartiteState:
    psi = np.asarray(psi, dtype=complex).ravel()
    psi = psi / np.linalg.norm(psi)
    return BipartiteState(dimA, dimB, np.outer(psi, psi.conj()))


def paper_ppt_family(a: float) -> BipartiteState:
    """The one-parameter 3x3 PPT family, entangled for a < 1.

    Requires ``a >= 1/2``.
    """
    if not math.isfinite(a) or a < 0.5:
        raise DomainError(f"paper-ppt family requires a >= 1/2, got {a!r}")
    m = np.zeros((9, 9))
    for i in (0, 4, 8):
        for j in (0, 4, 8):
            m[i, j] = 1.0
    for i, v in ((1, a), (2, 2.0), (3, 2.0), (5, a), (6, a), (7, 2.0)):
        m[i, i] = v
    for i, j in ((1, 3), (2, 6), (5, 7)):
        m[i, j] = m[j, i] = 1.0
    return BipartiteState(3, 3, m / (3.0 * (3.0 + a)))


def werner_state(p: float) -> BipartiteState:
    """Two-qubit Werner state ``p |psi-><psi-| + (1 - p) I/4``."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"Werner weight p must lie in [0, 1], got {p!r}")
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / math.sqrt(2.0)
    return BipartiteState(2, 2, p * np.outer(singlet, singlet) + (1.0 - p) * np.eye(4) / 4.0)


def bell_state() -> BipartiteState:
    """(|00> + |11>)/sqrt(2)."""
    return pure_state([1.0, 0.0, 0.0, 1.0], 2, 2)


def maximally_mixed(dimA: int, dimB: int) -> BipartiteState:
    n = dimA * dimB
    return BipartiteState(dimA, dimB, np.eye(n) / n)


def _random_ket(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(dimA: int, dimB: int, terms: int, seed: int) -> BipartiteState:
    """Convex mixture of ``terms`` Haar-random pure product states.

    Randomness comes from ``numpy.random.default_rng(seed)`` (PCG64).  Weights
    are drawn from the flat Dirichlet distribution, then for each term a ket on
    A and a ket on B, each as normalized complex Gaussian vectors.
    """
    if terms < 1:
        raise DomainError(f"terms must be >= 1, got {terms}")
    rng = np.random.default_rng(seed)
    weights = rng.dirichlet(np.ones(terms))
    mat = np.zeros((dimA * dimB, dimA * dimB), dtype=complex)
    for w in weights:
        psi = np.kron(_random_ket(dimA, rng), _random_ket(dimB, rng))
        mat += w * np.outer(psi, psi.conj())
    return BipartiteState(dimA, dimB, mat)


def random_state(dimA: int, dimB: int, rng: np.random.Generator) -> BipartiteState:
    """Hilbert-Schmidt random density matrix (generally entangled)."""
    n = dimA * dimB
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return BipartiteState(dimA, dimB, m / np.trace(m).real)


# --- state files -------------------------------------------------------------


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def format_matrix_rows(mat: np.ndarray, indent: str = "    ") -> str:
    rows = []
    for row in np.asarray(mat, dtype=complex):
        cells = ", ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in row)
        rows.append(f"{indent}[{cells}]")
    return "[\n" + ",\n".join(rows) + "\n  ]"


def dumps_state(s: BipartiteState) -> str:
    return (
        "{\n"
        f'  "dimA": {s.dimA},\n'
        f'  "dimB": {s.dimB},\n'
        f'  "matrix": {format_matrix_rows(s.mat)}\n'
        "}\n"
    )


def save_state(s: BipartiteState, path) -> None:
    Path(path).write_text(dumps_state(s))


def parse_complex_matrix(rows, field: str) -> np.ndarray:
    """Decode an array of rows of ``[re, im]`` pairs."""
    if not isinstance(rows, list) or not rows:
        raise ValidationError(f"'{field}' must be a non-empty array of rows")
    width = None
    out = []
    for i, row in enumerate(rows):
        if not isinstance(row, list):
            raise ValidationError(f"'{field}' row {i} is not an array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ValidationError(f"'{field}' row {i} has {len(row)} entries, expected {width}")
        cells = []
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                raise ValidationError(f"'{field}' entry ({i}, {j}) must be a [re, im] pair of numbers")
            cells.append(complex(cell[0], cell[1]))
        out.append(cells)
    return np.array(out, dtype=complex)


def read_json(path) -> dict:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ValidationError(f"{path}: top level must be an object")
    return doc


def require_int(doc: dict, key: str, path) -> int:
    v = doc.get(key)
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise ValidationError(f"{path}: field '{key}' must be a positive integer, got {v!r}")
    return v


def state_from_dict(doc: dict, source="<dict>") -> BipartiteState:
    dimA = require_int(doc, "dimA", source)
    dimB = require_int(doc, "dimB", source)
    if "matrix" not in doc:
        raise ValidationError(f"{source}: missing field 'matrix'")
    mat = parse_complex_matrix(doc["matrix"], "matrix")
    try:
        return BipartiteState(dimA, dimB, mat)
    except ValidationError as exc:
        raise ValidationError(f"{source}: {exc}") from exc


def load_state(path) -> BipartiteState:
    return state_from_dict(read_json(path), path)
