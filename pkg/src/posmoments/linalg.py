"""Dense complex matrix kernels.

Matrices are plain 2-D numpy arrays.  Everything here is a pure function; the
eigensolver is a cyclic complex Jacobi scheme so the numerical core does not
depend on LAPACK behaviour, and the determinant is a hand-rolled partially
pivoted LU.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, ShapeError, ValidationError

HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-12
JACOBI_MAX_SWEEPS = 100
GRAM_CLAMP = 1e-12
SVD_ORTH_TOL = 1e-14


def as_cmat(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` to a 2-D complex array, rejecting empty or non-finite input."""
    m = np.array(a, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] < 1 or m.shape[1] < 1:
        raise ShapeError(f"{name} must have at least one row and column, got {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError(f"{name} contains NaN or Inf entries")
    return m


def _require_square(a: np.ndarray, name: str = "matrix") -> None:
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got {a.shape[0]}x{a.shape[1]}")


def matmul(a, b) -> np.ndarray:
    a = as_cmat(a, "A")
    b = as_cmat(b, "B")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def adjoint(a) -> np.ndarray:
    return as_cmat(a).conj().T


def trace(a) -> complex:
    a = as_cmat(a)
    _require_square(a)
    return complex(np.trace(a))


def frobenius(a) -> float:
    return float(np.linalg.norm(np.asarray(a), "fro"))


def check_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "matrix") -> np.ndarray:
    """Validate near-Hermiticity and return the symmetrized matrix ``(A + A^H) / 2``.

    The tolerance is relative: ``||A - A^H||_F <= tol * max(1, ||A||_F)``.
    """
    a = as_cmat(a, name)
    _require_square(a, name)
    skew = frobenius(a - a.conj().T)
    if skew > tol * max(1.0, frobenius(a)):
        i, j = np.unravel_index(np.argmax(np.abs(a - a.conj().T)), a.shape)
        raise ValidationError(
            f"{name} is not Hermitian: ||A - A^H||_F = {skew:.3e}; "
            f"worst entry pair ({i}, {j}) = {a[i, j]} vs ({j}, {i}) = {a[j, i]}"
        )
    return (a + a.conj().T) / 2


def _rotation(alpha: float, beta: float, g: complex) -> tuple[float, float, complex, complex]:
    """Unitary 2x2 ``[[c, s], [j_qp, j_qq]]`` diagonalizing ``[[alpha, g], [conj(g), beta]]``."""
    mag = abs(g)
    phase_c = g.conjugate() / mag
    theta = (beta - alpha) / (2.0 * mag)
    if abs(theta) > 1e150:
        t = 0.5 / theta
    else:
        t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c
    return c, s, -s * phase_c, c * phase_c


def _jacobi_rotate(a: list[list[complex]], n: int, p: int, q: int) -> None:
    """Annihilate ``a[p][q]`` in place with a unitary 2x2 rotation.

    ``a`` is a list of row lists; plain Python complex arithmetic beats numpy
    slicing for the d <= 10 matrices this kernel is used on.
    """
    g = a[p][q]
    mag = abs(g)
    app = a[p][p].real
    aqq = a[q][q].real
    c, s, j_qp, j_qq = _rotation(app, aqq, g)
    t = s / c
    # J = diag(1, conj(phase)) @ [[c, s], [-s, c]];  A <- J^H A J
    for row in a:
        x = row[p]
        y = row[q]
        row[p] = c * x + j_qp * y
        row[q] = s * x + j_qq * y
    row_p = a[p]
    row_q = a[q]
    jc_qp = j_qp.conjugate()
    jc_qq = j_qq.conjugate()
    for k in range(n):
        x = row_p[k]
        y = row_q[k]
        row_p[k] = c * x + jc_qp * y
        row_q[k] = s * x + jc_qq * y
    row_p[p] = complex(app - t * mag)
    row_q[q] = complex(aqq + t * mag)
    row_p[q] = 0j
    row_q[p] = 0j


def _off_norm(a: list[list[complex]], n: int) -> float:
    total = 0.0
    for i in range(n):
        row = a[i]
        for j in range(n):
            if i != j:
                v = row[j]
                total += v.real * v.real + v.imag * v.imag
    return math.sqrt(total)


def hermitian_eigenvalues(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Cyclic Jacobi sweeps over all (p, q) pairs in row order until the
    off-diagonal Frobenius norm drops below ``1e-12 * ||A||_F``.
    """
    h = check_hermitian(a, tol)
    n = h.shape[0]
    scale = frobenius(h)
    target = JACOBI_TOL * scale
    skip = max(1e-18 * scale, 1e-300)
    work = [[complex(v) for v in row] for row in h.tolist()]
    for _ in range(JACOBI_MAX_SWEEPS + 1):
        if _off_norm(work, n) <= target:
            return np.sort(np.array([work[i][i].real for i in range(n)]))
        for p in range(n - 1):
            row_p = work[p]
            for q in range(p + 1, n):
                if abs(row_p[q]) > skip:
                    _jacobi_rotate(work, n, p, q)
    raise ConvergenceError(f"Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def singular_values(a) -> np.ndarray:
    """Singular values, descending, by one-sided (Hestenes) Jacobi.

    Columns are rotated pairwise until mutually orthogonal; the singular
    values are then the column norms.  Working on A itself rather than on
    A^H A keeps small singular values accurate to ~eps * ||A|| instead of
    ~sqrt(eps) * ||A||.
    """
    a = as_cmat(a)
    if a.shape[0] < a.shape[1]:
        a = a.conj().T
    cols = [[complex(v) for v in col] for col in a.T.tolist()]
    n = len(cols)
    for _ in range(JACOBI_MAX_SWEEPS + 1):
        rotated = False
        for p in range(n - 1):
            for q in range(p + 1, n):
                cp = cols[p]
                cq = cols[q]
                alpha = sum(v.real * v.real + v.imag * v.imag for v in cp)
                beta = sum(v.real * v.real + v.imag * v.imag for v in cq)
                g = sum(x.conjugate() * y for x, y in zip(cp, cq))
                if abs(g) <= SVD_ORTH_TOL * math.sqrt(alpha * beta) or abs(g) == 0.0:
                    continue
                rotated = True
                c, s, j_qp, j_qq = _rotation(alpha, beta, g)
                cols[p] = [c * x + j_qp * y for x, y in zip(cp, cq)]
                cols[q] = [s * x + j_qq * y for x, y in zip(cp, cq)]
        if not rotated:
            sv = [math.sqrt(sum(v.real * v.real + v.imag * v.imag for v in col)) for col in cols]
            return np.array(sorted(sv, reverse=True))
    raise ConvergenceError(f"one-sided Jacobi SVD did not converge in {JACOBI_MAX_SWEEPS} sweeps")


def gram_singular_values(a) -> np.ndarray:
    """Singular values as square roots of the eigenvalues of the smaller Gram matrix.

    Loses half the working precision on small singular values; kept as an
    independent cross-check of :func:`singular_values`.
    """
    a = as_cmat(a)
    gram = a.conj().T @ a if a.shape[0] >= a.shape[1] else a @ a.conj().T
    ev = hermitian_eigenvalues(gram)
    floor = -GRAM_CLAMP * max(1.0, frobenius(a) ** 2)
    if ev[0] < floor:
        raise ConvergenceError(f"Gram matrix has eigenvalue {ev[0]:.3e} below clamp floor {floor:.1e}")
    return np.sqrt(np.clip(ev, 0.0, None))[::-1]


def lu_decompose(a) -> tuple[np.ndarray, np.ndarray, int]:
    """Doolittle LU with partial pivoting.

    Returns ``(lu, perm, sign)`` where ``lu`` packs the unit-lower and upper
    factors, ``perm`` is the row permutation and ``sign`` its parity.
    """
    lu = as_cmat(a).copy()
    _require_square(lu)
    n = lu.shape[0]
    perm = np.arange(n)
    sign = 1
    for k in range(n):
        piv = k + int(np.argmax(np.abs(lu[k:, k])))
        if piv != k:
            lu[[k, piv]] = lu[[piv, k]]
            perm[[k, piv]] = perm[[piv, k]]
            sign = -sign
        if lu[k, k] == 0:
            continue
        lu[k + 1 :, k] /= lu[k, k]
        lu[k + 1 :, k + 1 :] -= np.outer(lu[k + 1 :, k], lu[k, k + 1 :])
    return lu, perm, sign


def determinant(a) -> complex:
    lu, _, sign = lu_decompose(a)
    return complex(sign * np.prod(np.diagonal(lu)))


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return (x + x.conj().T) / 2


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    """Unitary from modified Gram-Schmidt on a complex Gaussian matrix."""
    x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q = np.zeros_like(x)
    for k in range(d):
        v = x[:, k].copy()
        for j in range(k):
            v -= np.vdot(q[:, j], v) * q[:, j]
        q[:, k] = v / np.linalg.norm(v)
    return q
