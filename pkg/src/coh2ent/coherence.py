"""Relative-entropy block coherence and POVM-based coherence."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat
from .errors import DimensionMismatch, InconsistentExtension
from .measure import (
    POVM,
    ProjectiveMeasurement,
    as_state,
    block_dephase,
    measurement_operators,
    projective_part,
)
from .naimark import Ancilla, NaimarkExtension, embed_state

ZERO_PROB = 1e-12
INCOHERENCE_TOL = 1e-9
ROUTE_AGREEMENT_TOL = 1e-6


@dataclass(frozen=True)
class CoherenceReport:
    """Terms of ``H(p) + sum_i p_i S(rho_i) - S(rho)``.

    Outcomes with ``p_i < 1e-12`` get ``post_measurement_entropies[i] = 0``;
    their post-measurement state is never formed.
    """

    value: float
    probabilities: np.ndarray
    post_measurement_entropies: np.ndarray
    state_entropy: float

    def __float__(self) -> float:
        return self.value


def _require_dim(rho, dim: int, what: str):
    r = as_state(rho)
    if r.dim != dim:
        raise DimensionMismatch(f"state of dim {r.dim} vs {what} of dim {dim}")
    return r


def block_coherence(rho, p: ProjectiveMeasurement) -> float:
    """``S(Delta[rho]) - S(rho)`` in bits."""
    r = _require_dim(rho, p.dim, "measurement")
    value = qmat.von_neumann_entropy(block_dephase(r, p)) - qmat.von_neumann_entropy(r)
    return max(value, 0.0)


def povm_coherence(rho, povm: POVM) -> CoherenceReport:
    r = _require_dim(rho, povm.dim, "POVM")
    mat = r.mat
    probs = povm.probabilities(mat)
    probs = np.clip(probs, 0.0, None)
    post = np.zeros(povm.outcomes)
    for i, a_i in enumerate(measurement_operators(povm)):
        if probs[i] < ZERO_PROB:
            continue
        rho_i = a_i @ mat @ a_i.conj().T / probs[i]
        post[i] = qmat.von_neumann_entropy(rho_i)
    # renormalise away the sub-1e-12 roundoff so the Shannon term sees a distribution
    kept = np.where(probs < ZERO_PROB, 0.0, probs)
    h = qmat.shannon_entropy(kept / kept.sum())
    s = qmat.von_neumann_entropy(r)
    value = h + float(np.dot(kept / kept.sum(), post)) - s
    return CoherenceReport(max(value, 0.0), probs, post, s)


def povm_coherence_via_naimark(rho, povm: POVM, ext: NaimarkExtension) -> float:
    """Block coherence of the embedded state with respect to the extension.

    ``ext`` must reproduce ``povm`` with its ancilla in ``|0>`` (or with its
    direct-sum embedding). If the extension's ancilla reference is some other
    label ``a``, the result is the coherence with respect to the family member
    ``E_a`` it selects, and the closed-form cross-check is run against that
    member instead.

    Raises
    ------
    InconsistentExtension
        When the extension does not reproduce ``povm`` or the two routes
        disagree by more than ``1e-6``.
    """
    r = _require_dim(rho, povm.dim, "POVM")
    if ext.source_dim != povm.dim or ext.outcomes != povm.outcomes:
        raise DimensionMismatch("extension does not match the POVM's dimension or outcome count")
    base = ext.with_reference(0) if isinstance(ext.embedding, Ancilla) else ext
    mismatch = max(
        float(np.max(np.abs(e - f))) for e, f in zip(base.induced_povm(), povm)
    )
    if mismatch > ROUTE_AGREEMENT_TOL:
        raise InconsistentExtension(f"extension does not dilate the POVM (effect error {mismatch:.3e})")
    selected = povm if base is ext or ext.embedding.reference == 0 else ext.induced_povm()
    value = block_coherence(embed_state(r, ext), ext.measurement)
    oracle = povm_coherence(r, selected).value
    if abs(value - oracle) > ROUTE_AGREEMENT_TOL:
        raise InconsistentExtension(
            f"Naimark route gives {value:.12g} but closed form gives {oracle:.12g}"
        )
    return value


def dephase_with_ranges(rho, povm: POVM) -> np.ndarray:
    """``sum_i Pbar_i rho Pbar_i`` with ``Pbar_i`` the range projector of ``E_i``."""
    r = np.asarray(rho, dtype=complex)
    bars = [projective_part(e) for e in povm.effects]
    return sum(b @ r @ b for b in bars)


def is_povm_incoherent(rho, povm: POVM) -> bool:
    r = _require_dim(rho, povm.dim, "POVM")
    return bool(np.linalg.norm(dephase_with_ranges(r.mat, povm) - r.mat) < INCOHERENCE_TOL)
