"""Dense complex matrix core for small (n <= 16) operator computations.

Provides validated constructors for general and Hermitian matrices, the
commutator, a cyclic Jacobi eigensolver for complex Hermitian matrices,
numeric rank, seeded random sampling (GUE / Haar unitary / low rank), and
the JSON wire format shared by the whole package.

All functions are pure: inputs are never mutated and every sampler draws
from an explicitly supplied generator, so results are reproducible and
independent of call order.
"""

from __future__ import annotations

import json
from typing import NamedTuple

import numpy as np

MAX_DIM = 16

# Tolerance ladder: construction 1e-12, eigen residual 1e-10, rank 1e-9.
# One decade apart so a pass at one level cannot trip the next.
HERMITIAN_TOL = 1e-12
SKEW_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 60
RANK_TOL = 1e-9


class MatrixError(ValueError):
    """Raised for malformed matrix input (shape, finiteness, symmetry)."""


class ConvergenceError(RuntimeError):
    """Raised when the Jacobi iteration fails to converge.

    Should not occur for valid Hermitian input at the supported sizes;
    seeing it signals a pathological or corrupted matrix.
    """


def max_abs(a) -> float:
    """Entrywise max-modulus norm; 0.0 for empty input."""
    a = np.asarray(a)
    if a.size == 0:
        return 0.0
    return float(np.abs(a).max())


def as_matrix(a) -> np.ndarray:
    """Validate a as a square complex matrix with finite entries."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise MatrixError(f"expected a square matrix, got shape {m.shape}")
    if m.shape[0] < 1:
        raise MatrixError("matrix must have positive dimension")
    if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
        raise MatrixError("matrix entries must be finite")
    return m


def hermitian(a) -> np.ndarray:
    """Validate near-self-adjointness and return the exact symmetrization.

    Accepts matrices with ||A - A*||_max <= 1e-12 * max(1, ||A||_max) and
    stores (A + A*)/2, which is exactly Hermitian and leaves an already
    Hermitian matrix bitwise unchanged.
    """
    m = as_matrix(a)
    gap = max_abs(m - m.conj().T)
    if gap > HERMITIAN_TOL * max(1.0, max_abs(m)):
        raise MatrixError(f"matrix is not self-adjoint (asymmetry {gap:.3e})")
    return (m + m.conj().T) / 2


def commutator(a, b) -> np.ndarray:
    """Lie product AB - BA.

    For Hermitian inputs the result is skew-Hermitian with zero trace.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise MatrixError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return a @ b - b @ a


class EigenDecomposition(NamedTuple):
    """Spectral decomposition A = V diag(w) V* with w ascending."""

    eigenvalues: np.ndarray
    vectors: np.ndarray


def hermitian_eigen(a, max_sweeps: int = JACOBI_MAX_SWEEPS) -> EigenDecomposition:
    """Eigendecomposition of a complex Hermitian matrix by cyclic Jacobi.

    Sweeps the strict upper triangle in row order, annihilating each pivot
    with a complex rotation (a phase times a real Givens rotation), until
    the largest off-diagonal modulus drops below 1e-13 * ||A||_F.  The
    iteration is deterministic for a fixed input.
    """
    m = hermitian(a)
    n = m.shape[0]
    if n > MAX_DIM:
        raise MatrixError(f"dimension {n} exceeds supported maximum {MAX_DIM}")
    w = m.copy()
    vecs = np.eye(n, dtype=complex)
    norm_f = float(np.linalg.norm(m))
    tol = JACOBI_TOL * norm_f
    if n == 1 or norm_f == 0.0:
        order = np.argsort(w.diagonal().real, kind="stable")
        return EigenDecomposition(w.diagonal().real[order].copy(), vecs[:, order])

    converged = False
    for _ in range(max_sweeps):
        off = np.abs(w - np.diag(w.diagonal()))
        if off.max() <= tol:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                beta = w[p, q]
                absb = abs(beta)
                if absb <= tol:
                    continue
                # Phase out the pivot, then apply the real Jacobi rotation.
                phase = beta / absb
                tau = (w[q, q].real - w[p, p].real) / (2.0 * absb)
                t = (1.0 if tau >= 0.0 else -1.0) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot = np.array(
                    [[c, s], [-s * phase.conjugate(), c * phase.conjugate()]],
                    dtype=complex,
                )
                idx = [p, q]
                w[:, idx] = w[:, idx] @ rot
                w[idx, :] = rot.conj().T @ w[idx, :]
                w[p, q] = 0.0
                w[q, p] = 0.0
                w[p, p] = w[p, p].real
                w[q, q] = w[q, q].real
                vecs[:, idx] = vecs[:, idx] @ rot
    if not converged and max_abs(w - np.diag(w.diagonal())) > tol:
        raise ConvergenceError(
            f"Jacobi did not converge in {max_sweeps} sweeps (n={n})"
        )

    eigs = w.diagonal().real.copy()
    order = np.argsort(eigs, kind="stable")
    return EigenDecomposition(eigs[order], vecs[:, order])


def skew_hermitian_eigenvalues(c) -> np.ndarray:
    """Ascending t_k with sigma(C) = {i t_k} for skew-Hermitian C.

    Computed as the spectrum of the Hermitian matrix -iC.
    """
    m = as_matrix(c)
    gap = max_abs(m + m.conj().T)
    if gap > SKEW_TOL * max(1.0, max_abs(m)):
        raise MatrixError(f"matrix is not skew-Hermitian (defect {gap:.3e})")
    return hermitian_eigen(-1j * m).eigenvalues


def rank_numeric(a, tol: float = RANK_TOL) -> int:
    """Numeric rank: singular values above tol * max(1, s_max).

    Singular values come from the Hermitian eigensolver applied to A*A.
    The Gram route cannot resolve singular values below about
    sqrt(n * eps) * s_max; Gram eigenvalues under that floor read as exact
    zeros so that rank-deficient inputs are not inflated by rounding noise.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = as_matrix(a)
    n = m.shape[0]
    gram = m.conj().T @ m
    eigs = hermitian_eigen((gram + gram.conj().T) / 2).eigenvalues
    eigs = np.clip(eigs, 0.0, None)
    floor = 16.0 * n * np.finfo(float).eps * float(eigs[-1])
    svals = np.sqrt(np.where(eigs > floor, eigs, 0.0))
    s_max = float(svals[-1])
    return int(np.count_nonzero(svals > tol * max(1.0, s_max)))


# ---------------------------------------------------------------------------
# Seeded sampling.  Streams are Philox counter-based generators keyed by
# (seed, index), so any (seed, index) pair can be opened independently and
# in any order without affecting other streams.
# ---------------------------------------------------------------------------


def substream(seed: int, index: int = 0) -> np.random.Generator:
    """Independent generator for the (seed, index) stream."""
    key = np.array([seed % (1 << 64), index % (1 << 64)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _ginibre(n: int, rng: np.random.Generator) -> np.ndarray:
    """n x n matrix of iid standard complex Gaussian entries."""
    return (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2)


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    """GUE sample: (G + G*)/2 for a complex Ginibre matrix G."""
    if not 1 <= n <= MAX_DIM:
        raise MatrixError(f"dimension must be in [1, {MAX_DIM}]")
    g = _ginibre(n, rng)
    return (g + g.conj().T) / 2


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a Ginibre matrix with the phases of
    the triangular factor's diagonal absorbed into Q."""
    if not 1 <= n <= MAX_DIM:
        raise MatrixError(f"dimension must be in [1, {MAX_DIM}]")
    q, r = np.linalg.qr(_ginibre(n, rng))
    d = r.diagonal().copy()
    d[d == 0] = 1.0
    return q * (d / np.abs(d))


def random_rank_k_hermitian(n: int, k: int, rng: np.random.Generator) -> np.ndarray:
    """Sum of k rank-1 terms c_j x_j x_j* with orthonormal x_j and nonzero
    real c_j."""
    if not 1 <= k <= n:
        raise MatrixError(f"rank k={k} must satisfy 1 <= k <= n={n}")
    x = random_unitary(n, rng)[:, :k]
    coeffs = rng.standard_normal(k)
    while np.any(np.abs(coeffs) < 1e-3):
        small = np.abs(coeffs) < 1e-3
        coeffs[small] = rng.standard_normal(int(small.sum()))
    m = (x * coeffs) @ x.conj().T
    return (m + m.conj().T) / 2


def random_unit_vector(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-uniform unit vector in C^n."""
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


# ---------------------------------------------------------------------------
# JSON wire format: { "dim": n, "re": [[...]], "im": [[...]] }, row-major.
# ---------------------------------------------------------------------------


def matrix_to_json(a) -> dict:
    """Encode a matrix as the package's JSON object."""
    m = as_matrix(a)
    return {
        "dim": int(m.shape[0]),
        "re": m.real.tolist(),
        "im": m.imag.tolist(),
    }


def matrix_from_json(obj: dict) -> np.ndarray:
    """Decode the JSON object produced by :func:`matrix_to_json`."""
    try:
        n = int(obj["dim"])
        re = np.asarray(obj["re"], dtype=float)
        im = np.asarray(obj["im"], dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixError(f"malformed matrix JSON: {exc}") from None
    if re.shape != (n, n) or im.shape != (n, n):
        raise MatrixError(
            f"matrix JSON shape mismatch: dim={n}, re {re.shape}, im {im.shape}"
        )
    return as_matrix(re + 1j * im)


def load_matrix(path) -> np.ndarray:
    """Read a matrix JSON file."""
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))


def save_matrix(path, a) -> None:
    """Write a matrix JSON file."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(a), fh)
