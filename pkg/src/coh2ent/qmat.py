"""Dense complex linear algebra and entropy primitives.

Matrices are plain ``numpy`` complex arrays. Every function here is pure and
accepts anything ``np.asarray`` understands, including the validated wrappers
in :mod:`coh2ent.measure`. Logarithms are base 2 throughout.

Composite-system index convention: for a Kronecker product ``a ⊗ b`` the
basis index is ``i_a * dim_b + i_b`` (row-major, first factor most
significant), which is exactly what ``np.kron`` produces.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    BadSubsystemIndex,
    DimensionMismatch,
    NoConvergence,
    NonHermitian,
    NotDistribution,
    NotNormalized,
    NotPSD,
    ValidationError,
)

HERMITIAN_TOL = 1e-10
EIG_CLIP_TOL = 1e-10
TRACE_TOL = 1e-9
# eigenvalues of the second argument of S(rho||sigma) at or below this are
# treated as outside its support
SUPPORT_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues sorted descending with matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def as_matrix(m) -> np.ndarray:
    """Coerce to a finite 2-D complex array."""
    arr = np.asarray(m, dtype=complex)
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValidationError("matrix contains NaN or Inf entries")
    return arr


def as_square(m) -> np.ndarray:
    arr = as_matrix(m)
    if arr.shape[0] != arr.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {arr.shape}")
    return arr


def dagger(m) -> np.ndarray:
    return np.asarray(m).conj().T


def hermiticity_error(m) -> float:
    arr = np.asarray(m)
    return float(np.max(np.abs(arr - arr.conj().T))) if arr.size else 0.0


def ket(index: int, dim: int) -> np.ndarray:
    v = np.zeros(dim, dtype=complex)
    v[index] = 1.0
    return v


def projector(vec) -> np.ndarray:
    """``|v><v|`` for a (not necessarily normalized) vector."""
    v = np.asarray(vec, dtype=complex).ravel()
    return np.outer(v, v.conj())


def basis_projector(index: int, dim: int) -> np.ndarray:
    return projector(ket(index, dim))


def hermitian_eig(m) -> Spectrum:
    """Eigendecomposition of a Hermitian matrix with a deterministic gauge.

    Eigenvalues come out descending. Each eigenvector is rotated so that its
    first non-negligible component is real and positive.

    Raises
    ------
    NonHermitian
        If ``max |m - m^dagger|`` exceeds ``1e-10``.
    NoConvergence
        If LAPACK fails to converge.
    """
    arr = as_square(m)
    err = hermiticity_error(arr)
    if err > HERMITIAN_TOL:
        raise NonHermitian(f"matrix is not Hermitian (max |m - m^dagger| = {err:.3e})")
    herm = 0.5 * (arr + arr.conj().T)
    try:
        vals, vecs = np.linalg.eigh(herm)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    order = np.argsort(-vals, kind="stable")
    vals = vals[order]
    vecs = vecs[:, order]
    for k in range(vecs.shape[1]):
        col = vecs[:, k]
        lead = np.flatnonzero(np.abs(col) > 1e-10)
        if lead.size:
            c = col[lead[0]]
            vecs[:, k] = col * (abs(c) / c)
    return Spectrum(vals, vecs)


def psd_eigenvalues(m, tol: float = EIG_CLIP_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian PSD matrix with roundoff negatives clipped to 0."""
    vals = hermitian_eig(m).eigenvalues
    if vals.size and vals[-1] < -tol:
        raise NotPSD(f"matrix has eigenvalue {vals[-1]:.3e} < -{tol:g}")
    return np.clip(vals, 0.0, None)


def matrix_sqrt_psd(m) -> np.ndarray:
    """Principal square root of a PSD matrix."""
    spec = hermitian_eig(m)
    vals = spec.eigenvalues
    if vals.size and vals[-1] < -EIG_CLIP_TOL:
        raise NotPSD(f"matrix has eigenvalue {vals[-1]:.3e} < -{EIG_CLIP_TOL:g}")
    root = np.sqrt(np.clip(vals, 0.0, None))
    v = spec.eigenvectors
    r = (v * root) @ v.conj().T
    return 0.5 * (r + r.conj().T)


def _xlog2x(p: np.ndarray) -> np.ndarray:
    out = np.zeros_like(p, dtype=float)
    pos = p > 0
    out[pos] = p[pos] * np.log2(p[pos])
    return out


def _check_trace(vals: np.ndarray) -> None:
    total = float(np.sum(vals))
    if abs(total - 1.0) > TRACE_TOL:
        raise NotNormalized(f"trace is {total:.12g}, expected 1")


def von_neumann_entropy(rho) -> float:
    """``-tr(rho log2 rho)`` in bits."""
    vals = psd_eigenvalues(rho)
    _check_trace(vals)
    return float(max(-np.sum(_xlog2x(vals)), 0.0)) + 0.0


def shannon_entropy(p: Sequence[float]) -> float:
    """Shannon entropy in bits of a probability vector."""
    arr = np.asarray(p, dtype=float).ravel()
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise NotDistribution("probabilities must be a nonempty finite list")
    if np.any(arr < -1e-12):
        raise NotDistribution(f"negative probability {arr.min():.3e}")
    arr = np.clip(arr, 0.0, None)
    if abs(arr.sum() - 1.0) > 1e-9:
        raise NotDistribution(f"probabilities sum to {arr.sum():.12g}, expected 1")
    return float(max(-np.sum(_xlog2x(arr)), 0.0)) + 0.0


def quantum_relative_entropy(rho, sigma) -> float:
    """``S(rho || sigma)`` in bits; ``math.inf`` when supp(rho) is not inside supp(sigma)."""
    r = as_square(rho)
    s = as_square(sigma)
    if r.shape != s.shape:
        raise DimensionMismatch(f"relative entropy of {r.shape} against {s.shape}")
    rs = hermitian_eig(r)
    ss = hermitian_eig(s)
    for vals in (rs.eigenvalues, ss.eigenvalues):
        if vals.size and vals[-1] < -EIG_CLIP_TOL:
            raise NotPSD(f"eigenvalue {vals[-1]:.3e} < -{EIG_CLIP_TOL:g}")
    lam = np.clip(rs.eigenvalues, 0.0, None)
    mu = np.clip(ss.eigenvalues, 0.0, None)
    _check_trace(lam)
    _check_trace(mu)
    # overlaps[k, l] = |<r_k|s_l>|^2
    overlaps = np.abs(rs.eigenvectors.conj().T @ ss.eigenvectors) ** 2
    weights = lam @ overlaps  # <s_l| rho |s_l>
    inside = mu > SUPPORT_TOL
    if np.sum(weights[~inside]) > SUPPORT_TOL:
        return float("inf")
    cross = float(np.sum(weights[inside] * np.log2(mu[inside])))
    value = float(np.sum(_xlog2x(lam))) - cross
    return max(value, 0.0)


def tensor_product(*factors) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, as_matrix(f))
    return out


def _check_dims(m: np.ndarray, dims: Sequence[int]) -> list[int]:
    dims = [int(d) for d in dims]
    if any(d < 1 for d in dims):
        raise DimensionMismatch(f"subsystem dimensions must be positive: {dims}")
    if int(np.prod(dims)) != m.shape[0]:
        raise DimensionMismatch(
            f"subsystem dimensions {dims} do not multiply to matrix size {m.shape[0]}"
        )
    return dims


def partial_trace(m, dims: Sequence[int], keep: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem whose index is not in ``keep``.

    The kept subsystems stay in their original order.
    """
    arr = as_square(m)
    dims = _check_dims(arr, dims)
    n = len(dims)
    keep = sorted(set(int(k) for k in keep))
    if any(k < 0 or k >= n for k in keep):
        raise BadSubsystemIndex(f"subsystem indices {keep} out of range for {n} factors")
    t = arr.reshape(dims + dims)
    current = n
    for sub in reversed(range(n)):
        if sub in keep:
            continue
        t = np.trace(t, axis1=sub, axis2=sub + current)
        current -= 1
    d_keep = int(np.prod([dims[k] for k in keep])) if keep else 1
    return t.reshape(d_keep, d_keep)


def partial_transpose(m, dims: Sequence[int]) -> np.ndarray:
    """Transpose the second factor of a bipartite operator."""
    arr = as_square(m)
    if len(dims) != 2:
        raise DimensionMismatch(f"partial transpose needs two factors, got {list(dims)}")
    da, db = _check_dims(arr, dims)
    t = arr.reshape(da, db, da, db).transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def trace_norm(m) -> float:
    arr = as_square(m)
    if hermiticity_error(arr) <= HERMITIAN_TOL:
        return float(np.sum(np.abs(hermitian_eig(arr).eigenvalues)))
    return float(np.sum(np.linalg.svd(arr, compute_uv=False)))
