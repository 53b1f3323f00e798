"""Dense complex-matrix primitives used by every beamformer design.

All routines fix the intrinsic phase ambiguity of eigenvectors / singular
vectors (first nonzero component made real positive) so that identical inputs
always produce bit-identical outputs.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ConditioningError, DegenerateInputError, DimensionError, InvalidInputError

HERMITIAN_TOL = 1e-10
RANK_TOL = 1e-10
RIDGE_REL = 1e-12


@dataclass
class EigenPair:
    value: float
    vector: np.ndarray


@dataclass
class SingularTriple:
    sigma: float
    left: np.ndarray
    right: np.ndarray


def _check_finite(a: np.ndarray) -> None:
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix contains NaN or Inf entries")


def fix_phase(v: np.ndarray) -> np.ndarray:
    """Rotate ``v`` so its first nonzero component is real positive."""
    idx = np.flatnonzero(np.abs(v) > 1e-12 * max(np.abs(v).max(), 1e-300))
    if idx.size == 0:
        return v
    pivot = v[idx[0]]
    return v * (np.conj(pivot) / np.abs(pivot))


def top_eigpair(a: np.ndarray) -> EigenPair:
    """Largest eigenvalue and unit eigenvector of a Hermitian matrix.

    The input is symmetrized defensively as (A + A^H)/2 before decomposition.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    _check_finite(a)
    sym = 0.5 * (a + a.conj().T)
    values, vectors = np.linalg.eigh(sym)
    lam = float(values[-1])
    # canonical representative of the top eigenspace: project the first
    # canonical basis vector with a nonzero projection (for a simple top
    # eigenvalue this reduces to the first-nonzero-real-positive phase fix,
    # and it stays deterministic when the top eigenvalue is degenerate)
    top = vectors[:, np.abs(values - lam) <= 1e-12 * max(1.0, abs(lam))]
    coeffs = top.conj().T  # rows: projections of e_0, e_1, ... onto the space
    norms = np.linalg.norm(coeffs, axis=0)
    pivot = int(np.argmax(norms > 1e-8 * max(norms.max(), 1e-300)))
    v = top @ coeffs[:, pivot]
    return EigenPair(value=lam, vector=fix_phase(v / np.linalg.norm(v)))


def nullspace_basis(m: np.ndarray) -> np.ndarray:
    """Orthonormal basis of the null space of an r x n matrix with r < n.

    Singular values below RANK_TOL * sigma_max count as zero, so the basis has
    n - rank(m) columns. An empty (0 x n) input yields the identity.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {m.shape}")
    r, n = m.shape
    if r >= n:
        raise DimensionError(f"need fewer rows than columns, got {r}x{n}")
    if r == 0:
        return np.eye(n, dtype=complex)
    _check_finite(m)
    _, s, vh = np.linalg.svd(m, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > RANK_TOL * smax)) if smax > 0 else 0
    basis = vh[rank:, :].conj().T
    return np.column_stack([fix_phase(basis[:, k]) for k in range(basis.shape[1])])


def inv_sqrt(c: np.ndarray, ridge_rel: float = RIDGE_REL) -> np.ndarray:
    """Hermitian inverse square root C^(-1/2) of a positive-definite matrix.

    A ridge of ridge_rel * lambda_max is added when lambda_min falls below it;
    anything worse (indefinite beyond the ridge) raises ConditioningError.
    """
    c = np.asarray(c, dtype=complex)
    if c.ndim != 2 or c.shape[0] != c.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {c.shape}")
    _check_finite(c)
    sym = 0.5 * (c + c.conj().T)
    values, vectors = np.linalg.eigh(sym)
    lam_max = float(values[-1])
    if lam_max <= 0:
        raise ConditioningError("matrix is not positive definite")
    if values[0] < ridge_rel * lam_max:
        values = values + ridge_rel * lam_max
    if values[0] <= 0:
        raise ConditioningError(
            f"matrix indefinite beyond ridge repair (lambda_min={values[0]:.3e})"
        )
    return (vectors * (values ** -0.5)) @ vectors.conj().T


def principal_singular_triple(a: np.ndarray) -> SingularTriple:
    """Largest singular value with its left/right singular vectors.

    The common phase of the pair is fixed through the right vector, so
    A @ right == sigma * left holds exactly for the returned vectors.
    """
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {a.shape}")
    _check_finite(a)
    if not np.any(a):
        raise DegenerateInputError("all-zero matrix has no principal direction")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    right = vh[0, :].conj()
    idx = np.flatnonzero(np.abs(right) > 1e-12 * np.abs(right).max())
    phase = np.conj(right[idx[0]]) / np.abs(right[idx[0]])
    return SingularTriple(sigma=float(s[0]), left=u[:, 0] * phase, right=right * phase)
