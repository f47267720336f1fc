"""Naimark extensions of POVMs.

Three builders are provided:

* :func:`canonical_extension` works for any POVM and dilates it onto
  ``C^d ⊗ C^n`` (``n`` outcomes) with the ancilla prepared in ``|0>``.
* :func:`minimal_rank_one_extension` handles rank-one POVMs on ``C^n`` by
  zero-padding the input state.
* :func:`fourier_family_extension` emits the qubit POVM family
  ``{(2/d)|phi_k><phi_k|}`` together with its discrete-Fourier extension on
  ``C^d`` for prime ``d``.

The composite index of ``C^d ⊗ C^n`` is ``i_system * n + i_ancilla``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Union

import numpy as np

from . import qmat
from .errors import (
    CompletionFailure,
    DimensionMismatch,
    NotAncillaStructured,
    NotPrime,
    NotRankOne,
    ValidationError,
)
from .measure import (
    POVM,
    DensityMatrix,
    ProjectiveMeasurement,
    measurement_operators,
    validate_povm,
    validate_projective,
)
from .sampling import random_density_matrix, random_pure_state, rng_for

REPRODUCTION_TOL = 1e-9
KRAUS_TOL = 1e-8
GS_REJECT_TOL = 1e-8


@dataclass(frozen=True)
class DirectSum:
    """Embed ``rho`` as ``rho ⊕ 0`` in the top-left corner of a larger space."""

    target_dim: int


@dataclass(frozen=True)
class Ancilla:
    """Embed ``rho`` as ``rho ⊗ |reference><reference|`` on an ancilla of size ``dim``."""

    dim: int
    reference: int = 0


Embedding = Union[DirectSum, Ancilla]


@dataclass(frozen=True)
class NaimarkExtension:
    measurement: ProjectiveMeasurement
    embedding: Embedding
    source_dim: int

    def __post_init__(self):
        d = self.measurement.dim
        if d < self.source_dim:
            raise DimensionMismatch(f"Naimark space dim {d} smaller than source dim {self.source_dim}")
        emb = self.embedding
        if isinstance(emb, DirectSum) and emb.target_dim != d:
            raise DimensionMismatch(f"direct-sum target {emb.target_dim} != measurement dim {d}")
        if isinstance(emb, Ancilla):
            if emb.dim * self.source_dim != d:
                raise DimensionMismatch(
                    f"ancilla dim {emb.dim} x source dim {self.source_dim} != measurement dim {d}"
                )
            if not 0 <= emb.reference < emb.dim:
                raise ValidationError(f"ancilla reference {emb.reference} outside 0..{emb.dim - 1}")

    @property
    def dim(self) -> int:
        return self.measurement.dim

    @property
    def outcomes(self) -> int:
        return self.measurement.outcomes

    def with_reference(self, reference: int) -> "NaimarkExtension":
        if not isinstance(self.embedding, Ancilla):
            raise NotAncillaStructured("only ancilla embeddings carry a reference state")
        return replace(self, embedding=replace(self.embedding, reference=reference))

    def induced_povm(self) -> POVM:
        """The POVM this extension reproduces for its embedding: ``Phi^dagger(P_i)``."""
        d0 = self.source_dim
        emb = self.embedding
        if isinstance(emb, DirectSum):
            blocks = [p[:d0, :d0] for p in self.measurement]
        else:
            m, a = emb.dim, emb.reference
            blocks = [p[a::m, a::m] for p in self.measurement]
        return validate_povm(blocks)


@dataclass(frozen=True)
class KrausBlock:
    """Operators ``A[i, a]`` (outcome ``i``, ancilla label ``a``) of ``V = sum A[i,a] ⊗ |i><a|``."""

    operators: np.ndarray  # shape (n, n, d, d)

    @property
    def outcomes(self) -> int:
        return self.operators.shape[0]

    @property
    def source_dim(self) -> int:
        return self.operators.shape[2]

    def unitary(self) -> np.ndarray:
        n = self.outcomes
        v = np.zeros((self.source_dim * n,) * 2, dtype=complex)
        for i in range(n):
            for a in range(self.operators.shape[1]):
                v += np.kron(self.operators[i, a], np.outer(qmat.ket(i, n), qmat.ket(a, n)))
        return v

    def projectors(self) -> list[np.ndarray]:
        """``P_i = sum_{a,b} A[i,a]^dagger A[i,b] ⊗ |a><b|``."""
        n, m = self.operators.shape[:2]
        out = []
        for i in range(n):
            p = np.zeros((self.source_dim * m,) * 2, dtype=complex)
            for a in range(m):
                for b in range(m):
                    block = self.operators[i, a].conj().T @ self.operators[i, b]
                    p += np.kron(block, np.outer(qmat.ket(a, m), qmat.ket(b, m)))
            out.append(p)
        return out

    def row_orthogonality_error(self) -> float:
        """``max |sum_a A[i,a] A[j,a]^dagger - delta_ij I|`` over all ``i, j``."""
        n = self.outcomes
        eye = np.eye(self.source_dim)
        worst = 0.0
        for i in range(n):
            for j in range(n):
                s = np.einsum("akl,aml->km", self.operators[i], self.operators[j].conj())
                worst = max(worst, float(np.max(np.abs(s - (eye if i == j else 0)))))
        return worst


def complete_isometry(w) -> np.ndarray:
    """Extend orthonormal columns ``w`` (N x k) to an N x N unitary whose first k columns are ``w``.

    Candidates are standard basis vectors in index order, orthogonalised by
    modified Gram-Schmidt (two passes) and dropped when their residual norm
    falls below ``1e-8``.
    """
    w = np.asarray(w, dtype=complex)
    n, k = w.shape
    gram_err = float(np.max(np.abs(w.conj().T @ w - np.eye(k)))) if k else 0.0
    if gram_err > 1e-8:
        raise CompletionFailure(f"columns are not orthonormal (Gram error {gram_err:.3e})")
    cols = [w[:, j] for j in range(k)]
    for idx in range(n):
        if len(cols) == n:
            break
        v = qmat.ket(idx, n)
        for _ in range(2):
            for c in cols:
                v = v - np.vdot(c, v) * c
        norm = np.linalg.norm(v)
        if norm < GS_REJECT_TOL:
            continue
        cols.append(v / norm)
    if len(cols) != n:
        raise CompletionFailure(f"only {len(cols)} of {n} columns could be completed")
    return np.column_stack(cols)


def embed_state(rho, ext: NaimarkExtension) -> DensityMatrix:
    r = np.asarray(rho, dtype=complex)
    if r.shape != (ext.source_dim, ext.source_dim):
        raise DimensionMismatch(f"state of dim {r.shape[0]} vs extension source dim {ext.source_dim}")
    emb = ext.embedding
    if isinstance(emb, DirectSum):
        out = np.zeros((emb.target_dim,) * 2, dtype=complex)
        out[: ext.source_dim, : ext.source_dim] = r
        return DensityMatrix(out)
    return DensityMatrix(np.kron(r, qmat.basis_projector(emb.reference, emb.dim)))


def extension_from_kraus(kraus: KrausBlock, reference: int = 0) -> NaimarkExtension:
    """Naimark extension assembled from explicitly supplied operators ``A[i, a]``."""
    err = kraus.row_orthogonality_error()
    if err > KRAUS_TOL:
        raise ValidationError(f"Kraus block rows are not orthonormal (error {err:.3e})")
    meas = validate_projective(kraus.projectors())
    return NaimarkExtension(
        meas, Ancilla(kraus.operators.shape[1], reference), kraus.source_dim
    )


def canonical_extension(povm: POVM) -> tuple[NaimarkExtension, KrausBlock]:
    """Dilate ``povm`` onto ``C^d ⊗ C^n`` through a unitary ``V`` with ``A[i, 0] = sqrt(E_i)``.

    The block column ``a = 0`` of ``V`` is the isometry stacked from the
    square roots; the remaining columns come from :func:`complete_isometry`
    and are assigned to the slots ``(s, a >= 1)`` in composite-index order.
    """
    d, n = povm.dim, povm.outcomes
    roots = measurement_operators(povm)
    big = d * n
    w = np.zeros((big, d), dtype=complex)
    for i, a_i in enumerate(roots):
        w[i::n, :] = a_i  # rows s*n + i hold A_i[s, :]
    full = complete_isometry(w)
    v = np.zeros((big, big), dtype=complex)
    free_slots = [s * n + a for s in range(d) for a in range(1, n)]
    for s in range(d):
        v[:, s * n] = full[:, s]
    for slot, col in zip(free_slots, range(d, big)):
        v[:, slot] = full[:, col]
    ops = np.zeros((n, n, d, d), dtype=complex)
    for i in range(n):
        for a in range(n):
            ops[i, a] = v[i::n, a::n]
    kraus = KrausBlock(ops)
    ext = extension_from_kraus(kraus)
    return ext, kraus


def _rank_one_factor(effect: np.ndarray, index: int) -> tuple[float, np.ndarray]:
    spec = qmat.hermitian_eig(effect)
    if np.sum(spec.eigenvalues > 1e-10) != 1:
        raise NotRankOne(f"effect {index} is not rank one", index=index)
    return float(spec.eigenvalues[0]), spec.eigenvectors[:, 0]


def minimal_rank_one_extension(povm: POVM) -> NaimarkExtension:
    """Extension of a rank-one POVM on ``C^n`` (``n`` outcomes) with ``rho ⊕ 0`` embedding."""
    d, n = povm.dim, povm.outcomes
    w = np.zeros((n, d), dtype=complex)
    for k, e in enumerate(povm.effects):
        c, phi = _rank_one_factor(e, k)
        w[k, :] = np.sqrt(c) * phi.conj()
    full = complete_isometry(w)
    # P_k = V^dagger |k><k| V
    meas = validate_projective([qmat.projector(full[k, :].conj()) for k in range(n)])
    return NaimarkExtension(meas, DirectSum(n), d)


def is_prime(d: int) -> bool:
    if d < 2:
        return False
    return all(d % f for f in range(2, int(d**0.5) + 1))


def fourier_vectors(d: int) -> np.ndarray:
    """Rows ``k`` are ``(1/sqrt d) sum_i nu^(ik mod d) |i>`` with ``nu = exp(2 pi i / d)``."""
    idx = np.arange(d)
    return np.exp(2j * np.pi * ((np.outer(idx, idx)) % d) / d) / np.sqrt(d)


def fourier_family_povm(d: int) -> POVM:
    nu = np.exp(2j * np.pi / d)
    kets = [np.array([1.0, nu**k]) / np.sqrt(2) for k in range(d)]
    return validate_povm([(2.0 / d) * qmat.projector(v) for v in kets])


def fourier_family_extension(d: int) -> tuple[POVM, NaimarkExtension]:
    if not is_prime(d) or d < 3:
        raise NotPrime(f"d = {d} is not a prime >= 3")
    povm = fourier_family_povm(d)
    meas = validate_projective([qmat.projector(v) for v in fourier_vectors(d)])
    return povm, NaimarkExtension(meas, DirectSum(d), 2)


@dataclass(frozen=True)
class ExtensionReport:
    max_deviation: float
    trials: int
    seed: int
    tolerance: float = REPRODUCTION_TOL

    @property
    def passed(self) -> bool:
        return self.max_deviation < self.tolerance


def verify_extension(povm: POVM, ext: NaimarkExtension, trials: int = 100, seed: int = 0) -> ExtensionReport:
    """Largest ``|tr(E_i rho) - tr(P_i Phi[rho])|`` over seeded random states.

    Trial ``k`` draws from ``rng_for(seed, k)``; even trials are pure, odd
    trials full rank.
    """
    if povm.dim != ext.source_dim:
        raise DimensionMismatch(f"POVM dim {povm.dim} vs extension source dim {ext.source_dim}")
    if povm.outcomes != ext.outcomes:
        raise DimensionMismatch(f"POVM has {povm.outcomes} outcomes, extension {ext.outcomes}")
    worst = 0.0
    for k in range(trials):
        rng = rng_for(seed, k)
        rho = random_pure_state(povm.dim, rng) if k % 2 == 0 else random_density_matrix(povm.dim, rng)
        lifted = embed_state(rho, ext).mat
        direct = povm.probabilities(rho)
        dilated = np.array([np.trace(p @ lifted).real for p in ext.measurement])
        worst = max(worst, float(np.max(np.abs(direct - dilated))))
    return ExtensionReport(worst, trials, seed)


def extract_povm_family(ext: NaimarkExtension) -> list[POVM]:
    """POVMs ``E_a = {(I ⊗ <a|) P_i (I ⊗ |a>)}`` for every ancilla label ``a``."""
    if not isinstance(ext.embedding, Ancilla):
        raise NotAncillaStructured("extension has no ancilla tensor structure")
    m = ext.embedding.dim
    return [validate_povm([p[a::m, a::m] for p in ext.measurement]) for a in range(m)]
