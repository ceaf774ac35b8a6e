"""Power-sum moments and characteristic-polynomial coefficients.

Moments are power sums of the spectrum: ``T_k = Tr[M^k] = sum_i lambda_i^k``
for a Hermitian M, ``p_k`` for the partial transpose, and ``r_k`` for the
singular values of the realigned matrix.  Coefficients of
``det(lambda I - M) = lambda^d + D_1 lambda^(d-1) + ... + D_d`` follow from
the moments through Newton's identities; the Faddeev-LeVerrier determinant
form is kept alongside as an independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bipartite import BipartiteState, partial_transpose, realign
from .errors import ShapeError, ValidationError
from .linalg import as_cmat, determinant, hermitian_eigenvalues, singular_values

IMAG_TOL = 1e-10
MAX_DET_ORDER = 12


@dataclass(frozen=True)
class MomentVector:
    """Moments ``T_1 .. T_kmax``; ``values[k - 1]`` holds ``T_k``."""

    values: tuple[float, ...]

    @property
    def kmax(self) -> int:
        return len(self.values)

    def __getitem__(self, k: int) -> float:
        """1-based access, ``T[k] == T_k``."""
        if not 1 <= k <= self.kmax:
            raise IndexError(f"moment index {k} outside 1..{self.kmax}")
        return self.values[k - 1]

    @classmethod
    def from_spectrum(cls, values, kmax: int) -> MomentVector:
        lam = np.asarray(values, dtype=float)
        return cls(tuple(float(np.sum(lam**k)) for k in range(1, kmax + 1)))


@dataclass(frozen=True)
class CharPolyCoeffs:
    """Coefficients ``D_1 .. D_d``; ``values[i - 1]`` holds ``D_i``."""

    values: tuple[float, ...]

    @property
    def d(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> float:
        if not 1 <= i <= self.d:
            raise IndexError(f"coefficient index {i} outside 1..{self.d}")
        return self.values[i - 1]

    def monic(self) -> np.ndarray:
        """Full coefficient array ``[1, D_1, ..., D_d]``, highest power first."""
        return np.array((1.0,) + self.values)


def _check_kmax(kmax: int, limit: int) -> None:
    if not 1 <= kmax <= limit:
        raise ValidationError(f"kmax must lie in 1..{limit}, got {kmax}")


def moments(m, kmax: int) -> MomentVector:
    """``T_k = Tr[M^k]`` for k = 1..kmax, summed over the Hermitian spectrum."""
    m = as_cmat(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"moments need a square matrix, got {m.shape}")
    _check_kmax(kmax, m.shape[0])
    return MomentVector.from_spectrum(hermitian_eigenvalues(m), kmax)


def pt_moments(s: BipartiteState, kmax: int) -> MomentVector:
    return moments(partial_transpose(s), kmax)


def realignment_moments(s: BipartiteState, kmax: int) -> MomentVector:
    """``r_k = Tr[((rho^R)^H rho^R)^(k/2)] = sum_i sigma_i^k``."""
    _check_kmax(kmax, s.dim)
    return MomentVector.from_spectrum(singular_values(realign(s)), kmax)


def power_trace(m, k: int) -> float:
    """``Tr[M^k]`` by repeated multiplication; an eigen-free cross-check."""
    m = as_cmat(m)
    p = np.eye(m.shape[0], dtype=complex)
    for _ in range(k):
        p = p @ m
    t = complex(np.trace(p))
    if abs(t.imag) > IMAG_TOL * max(1.0, abs(t.real)):
        raise ValidationError(f"Tr[M^{k}] has imaginary part {t.imag:.3e}; matrix is not Hermitian")
    return t.real


def newton_coefficients(t, d: int) -> list[float]:
    """Newton's identities: ``D_k = -(T_k + sum_{j<k} D_j T_{k-j}) / k``."""
    d_vals: list[float] = []
    for k in range(1, d + 1):
        acc = t[k - 1]
        for j in range(1, k):
            acc += d_vals[j - 1] * t[k - j - 1]
        d_vals.append(-acc / k)
    return d_vals


def charpoly_coeffs(t: MomentVector, d: int) -> CharPolyCoeffs:
    if d < 1:
        raise ValidationError(f"polynomial degree must be >= 1, got {d}")
    if t.kmax < d:
        raise ValidationError(f"need at least {d} moments for degree {d}, got {t.kmax}")
    return CharPolyCoeffs(tuple(newton_coefficients(t.values, d)))


def leverrier_matrix(t: MomentVector, i: int) -> np.ndarray:
    """The i x i banded matrix whose determinant gives ``(-1)^i i! D_i``.

    Row r holds ``T_1, T_2, ...`` from column r onward and the integer r just
    left of the diagonal.
    """
    a = np.zeros((i, i))
    for r in range(i):
        if r > 0:
            a[r, r - 1] = r
        for c in range(r, i):
            a[r, c] = t[c - r + 1]
    return a


def charpoly_coeff_det(t: MomentVector, i: int) -> float:
    if not 1 <= i <= MAX_DET_ORDER:
        raise ValidationError(f"determinant form supports 1 <= i <= {MAX_DET_ORDER}, got {i}")
    if i > t.kmax:
        raise ValidationError(f"D_{i} needs {i} moments, got {t.kmax}")
    det = determinant(leverrier_matrix(t, i)).real
    return (-1) ** i * det / math.factorial(i)


def coefficients_from_eigenvalues(values) -> CharPolyCoeffs:
    """Expand ``prod_i (lambda - lambda_i)`` directly."""
    poly = np.array([1.0])
    for lam in values:
        poly = np.convolve(poly, np.array([1.0, -float(lam)]))
    return CharPolyCoeffs(tuple(float(x) for x in poly[1:]))


def hankel_matrix(p: MomentVector, l: int) -> np.ndarray:
    """``(l+1) x (l+1)`` matrix with entry (i, j) = ``p_{i+j+1}``, indices from 0."""
    if l < 1:
        raise ValidationError(f"Hankel order l must be >= 1, got {l}")
    if 2 * l + 1 > p.kmax:
        raise ValidationError(f"Hankel order {l} needs moments up to p_{2 * l + 1}, got {p.kmax}")
    idx = np.add.outer(np.arange(l + 1), np.arange(l + 1)) + 1
    vals = np.array(p.values)
    return vals[idx - 1]
