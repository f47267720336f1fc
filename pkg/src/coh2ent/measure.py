"""Validated states and measurements, and the block-dephasing map."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import qmat
from .errors import (
    DimensionMismatch,
    NonHermitian,
    NotComplete,
    NotIdempotent,
    NotNormalized,
    NotOrthogonal,
    NotPSD,
    ValidationError,
)

COMPLETENESS_TOL = 1e-9
PROJECTOR_TOL = 1e-9
RANK_TOL = 1e-10


def _readonly(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, init=False)
class DensityMatrix:
    """A Hermitian, PSD, unit-trace matrix."""

    mat: np.ndarray

    def __init__(self, mat):
        arr = qmat.as_square(mat)
        err = qmat.hermiticity_error(arr)
        if err > qmat.HERMITIAN_TOL:
            raise NonHermitian(f"state deviates from Hermitian by {err:.3e}")
        vals = np.linalg.eigvalsh(0.5 * (arr + arr.conj().T))
        if vals.size and vals[0] < -qmat.EIG_CLIP_TOL:
            raise NotPSD(f"state has eigenvalue {vals[0]:.3e}")
        tr = np.trace(arr).real
        if abs(tr - 1.0) > qmat.TRACE_TOL:
            raise NotNormalized(f"state trace is {tr:.12g}")
        object.__setattr__(self, "mat", _readonly(0.5 * (arr + arr.conj().T)))

    @classmethod
    def from_ket(cls, vec) -> "DensityMatrix":
        v = np.asarray(vec, dtype=complex).ravel()
        return cls(qmat.projector(v / np.linalg.norm(v)))

    @classmethod
    def basis(cls, index: int, dim: int) -> "DensityMatrix":
        return cls(qmat.basis_projector(index, dim))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim) / dim)

    @property
    def dim(self) -> int:
        return self.mat.shape[0]

    def __array__(self, dtype=None, copy=None):
        return np.array(self.mat, dtype=dtype)


def as_state(rho) -> DensityMatrix:
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


@dataclass(frozen=True)
class POVM:
    """Ordered PSD effects summing to the identity. Build via :func:`validate_povm`."""

    effects: tuple

    @property
    def dim(self) -> int:
        return self.effects[0].shape[0]

    @property
    def outcomes(self) -> int:
        return len(self.effects)

    def __len__(self) -> int:
        return len(self.effects)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.effects)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.effects[i]

    def probabilities(self, rho) -> np.ndarray:
        r = np.asarray(rho)
        return np.array([np.trace(e @ r).real for e in self.effects])


@dataclass(frozen=True)
class ProjectiveMeasurement:
    """Mutually orthogonal projectors of arbitrary rank summing to the identity."""

    projectors: tuple

    @property
    def dim(self) -> int:
        return self.projectors[0].shape[0]

    @property
    def outcomes(self) -> int:
        return len(self.projectors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(int(round(np.trace(p).real)) for p in self.projectors)

    def __len__(self) -> int:
        return len(self.projectors)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.projectors)

    def __getitem__(self, i: int) -> np.ndarray:
        return self.projectors[i]

    def as_povm(self) -> POVM:
        return POVM(self.projectors)


def _square_family(mats: Sequence, what: str) -> list[np.ndarray]:
    if len(mats) == 0:
        raise ValidationError(f"a {what} needs at least one element")
    arrs = [qmat.as_square(m) for m in mats]
    d = arrs[0].shape[0]
    for i, a in enumerate(arrs):
        if a.shape != (d, d):
            raise DimensionMismatch(f"{what} element {i} has shape {a.shape}, expected {(d, d)}")
    return arrs


def _completeness_residual(arrs: list[np.ndarray]) -> float:
    d = arrs[0].shape[0]
    return float(np.max(np.abs(sum(arrs) - np.eye(d))))


def validate_povm(effects: Sequence) -> POVM:
    """Check each effect is Hermitian PSD and that they sum to the identity.

    Outcome order is kept exactly as supplied.
    """
    arrs = _square_family(effects, "POVM")
    for i, e in enumerate(arrs):
        if qmat.hermiticity_error(e) > qmat.HERMITIAN_TOL:
            raise NotPSD(f"effect {i} is not Hermitian", index=i)
        vals = np.linalg.eigvalsh(0.5 * (e + e.conj().T))
        if vals[0] < -qmat.EIG_CLIP_TOL:
            raise NotPSD(f"effect {i} has eigenvalue {vals[0]:.3e}", index=i)
    residual = _completeness_residual(arrs)
    if residual > COMPLETENESS_TOL:
        raise NotComplete(f"effects sum to identity only within {residual:.3e}", residual=residual)
    return POVM(tuple(_readonly(0.5 * (e + e.conj().T)) for e in arrs))


def validate_projective(projectors: Sequence) -> ProjectiveMeasurement:
    arrs = _square_family(projectors, "projective measurement")
    for i, p in enumerate(arrs):
        err = float(np.max(np.abs(p @ p - p)))
        if err > PROJECTOR_TOL or qmat.hermiticity_error(p) > PROJECTOR_TOL:
            raise NotIdempotent(f"projector {i} is not an orthogonal projector ({err:.3e})", index=i)
    for i in range(len(arrs)):
        for j in range(i + 1, len(arrs)):
            err = float(np.max(np.abs(arrs[i] @ arrs[j])))
            if err > PROJECTOR_TOL:
                raise NotOrthogonal(
                    f"projectors {i} and {j} overlap ({err:.3e})", pair=(i, j)
                )
    residual = _completeness_residual(arrs)
    if residual > COMPLETENESS_TOL:
        raise NotComplete(
            f"projectors sum to identity only within {residual:.3e}", residual=residual
        )
    return ProjectiveMeasurement(tuple(_readonly(p) for p in arrs))


def computational_measurement(dim: int) -> ProjectiveMeasurement:
    return validate_projective([qmat.basis_projector(i, dim) for i in range(dim)])


def block_measurement(ranks: Sequence[int]) -> ProjectiveMeasurement:
    """Projectors onto consecutive blocks of computational basis states."""
    dim = int(sum(ranks))
    out, start = [], 0
    for r in ranks:
        p = np.zeros((dim, dim), dtype=complex)
        p[start:start + r, start:start + r] = np.eye(r)
        out.append(p)
        start += r
    return validate_projective(out)


def block_dephase(rho, p: ProjectiveMeasurement) -> DensityMatrix:
    """``sum_i P_i rho P_i``."""
    r = np.asarray(rho, dtype=complex)
    if r.shape != (p.dim, p.dim):
        raise DimensionMismatch(f"state of dim {r.shape[0]} vs measurement of dim {p.dim}")
    return DensityMatrix(sum(pi @ r @ pi for pi in p.projectors))


def projective_part(effect) -> np.ndarray:
    """Projector onto the range of a PSD operator (eigenvalues > 1e-10)."""
    spec = qmat.hermitian_eig(effect)
    if spec.eigenvalues.size and spec.eigenvalues[-1] < -qmat.EIG_CLIP_TOL:
        raise NotPSD(f"operator has eigenvalue {spec.eigenvalues[-1]:.3e}")
    cols = spec.eigenvectors[:, spec.eigenvalues > RANK_TOL]
    return cols @ cols.conj().T


def measurement_operators(povm: POVM) -> list[np.ndarray]:
    """Canonical Kraus operators ``A_i = sqrt(E_i)``."""
    return [qmat.matrix_sqrt_psd(e) for e in povm.effects]
