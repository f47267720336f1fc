"""Turning block coherence into entanglement with a controlled-shift unitary.

The control system ``S`` carries a block measurement ``{P_i}``; the target
``A`` starts in ``|0>``. The unitary

    U = sum_{i, j < d_P} P_i ⊗ |(i + j) mod d_P><j| + sum_{i, j >= d_P} P_i ⊗ |j><j|

maps ``rho ⊗ |0><0|`` to ``sum_{i,j} P_i rho P_j ⊗ |i><j|``. For that output
the relative entropy of entanglement is pinned exactly between

* the lower bound ``S(tr_A sigma) - S(sigma)``, and
* the upper bound ``S(sigma || tau)`` with the separable
  ``tau = sum_i P_i rho P_i ⊗ |i><i|``,

both of which equal ``S(Delta[rho]) - S(rho)``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import qmat
from .coherence import block_coherence
from .errors import DimensionMismatch, SandwichViolation, TargetTooSmall
from .measure import DensityMatrix, ProjectiveMeasurement, as_state

SANDWICH_TOL = 1e-6
WITNESS_TOL = 1e-9
EQUALITY_TOL = 1e-8


def build_entangling_unitary(p: ProjectiveMeasurement, d_a: int | None = None) -> np.ndarray:
    d_p = p.outcomes
    d_a = d_p if d_a is None else int(d_a)
    if d_a < d_p:
        raise TargetTooSmall(f"target dimension {d_a} is smaller than the {d_p} outcomes")
    u = np.zeros((p.dim * d_a,) * 2, dtype=complex)
    for i, p_i in enumerate(p.projectors):
        shift = np.zeros((d_a, d_a), dtype=complex)
        for j in range(d_p):
            shift[(i + j) % d_p, j] = 1.0
        for j in range(d_p, d_a):
            shift[j, j] = 1.0
        u += np.kron(p_i, shift)
    return u


def negativity(rho, dims) -> float:
    """``(||rho^{T_B}||_1 - 1) / 2``."""
    r = np.asarray(rho, dtype=complex)
    value = (qmat.trace_norm(qmat.partial_transpose(r, dims)) - 1.0) / 2.0
    return max(value, 0.0)


def separable_reference(rho, p: ProjectiveMeasurement, d_a: int) -> np.ndarray:
    """``tau = sum_i P_i rho P_i ⊗ |i><i|``."""
    r = np.asarray(rho, dtype=complex)
    return sum(
        np.kron(p_i @ r @ p_i, qmat.basis_projector(i, d_a)) for i, p_i in enumerate(p.projectors)
    )


@dataclass(frozen=True)
class EntanglementBounds:
    lower: float
    upper: float
    value: float

    @property
    def gap(self) -> float:
        return max(abs(self.lower - self.value), abs(self.upper - self.value))


def _bounds(sigma: np.ndarray, rho: DensityMatrix, p: ProjectiveMeasurement, d_a: int) -> EntanglementBounds:
    s_sigma = qmat.von_neumann_entropy(sigma)
    marginal = qmat.partial_trace(sigma, [p.dim, d_a], keep=[0])
    lower = qmat.von_neumann_entropy(marginal) - s_sigma
    upper = qmat.quantum_relative_entropy(sigma, separable_reference(rho, p, d_a))
    value = block_coherence(rho, p)
    bounds = EntanglementBounds(lower, upper, value)
    if not np.isfinite(upper) or bounds.gap > SANDWICH_TOL:
        raise SandwichViolation(
            f"bounds do not pinch: lower={lower:.12g} upper={upper:.12g} C_r={value:.12g}"
        )
    return bounds


def conversion_output(rho, p: ProjectiveMeasurement, d_a: int) -> np.ndarray:
    r = np.asarray(rho, dtype=complex)
    u = build_entangling_unitary(p, d_a)
    start = np.kron(r, qmat.basis_projector(0, d_a))
    out = u @ start @ u.conj().T
    return 0.5 * (out + out.conj().T)


def entanglement_bounds(rho_s, p: ProjectiveMeasurement, d_a: int | None = None) -> EntanglementBounds:
    rho = as_state(rho_s)
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state of dim {rho.dim} vs measurement of dim {p.dim}")
    d_a = p.outcomes if d_a is None else d_a
    return _bounds(conversion_output(rho, p, d_a), rho, p, d_a)


def rel_ent_entanglement_converted(rho_s, p: ProjectiveMeasurement) -> float:
    """Relative entropy of entanglement (S:A) of the converted state, in bits.

    Raises
    ------
    SandwichViolation
        If the lower and upper bounds fail to meet within ``1e-6``.
    """
    return entanglement_bounds(rho_s, p).value


@dataclass(frozen=True)
class ConversionResult:
    output_state: DensityMatrix
    dims: tuple[int, int]
    unitary: np.ndarray
    negativity: float
    rel_ent_entanglement: float
    coherence_input: float
    bounds: EntanglementBounds


def convert(rho_s, p: ProjectiveMeasurement, d_a: int | None = None) -> ConversionResult:
    rho = as_state(rho_s)
    if rho.dim != p.dim:
        raise DimensionMismatch(f"state of dim {rho.dim} vs measurement of dim {p.dim}")
    d_a = p.outcomes if d_a is None else int(d_a)
    u = build_entangling_unitary(p, d_a)
    out = u @ np.kron(rho.mat, qmat.basis_projector(0, d_a)) @ u.conj().T
    out = DensityMatrix(0.5 * (out + out.conj().T))
    bounds = _bounds(out.mat, rho, p, d_a)
    return ConversionResult(
        output_state=out,
        dims=(p.dim, d_a),
        unitary=u,
        negativity=negativity(out, [p.dim, d_a]),
        rel_ent_entanglement=bounds.value,
        coherence_input=bounds.value,
        bounds=bounds,
    )


@dataclass(frozen=True)
class Theorem1Report:
    coherence: float
    negativity: float
    rel_ent_entanglement: float
    lower: float
    upper: float

    @property
    def coherent(self) -> bool:
        return self.coherence > WITNESS_TOL

    @property
    def entangled(self) -> bool:
        return self.negativity > WITNESS_TOL

    @property
    def deviation(self) -> float:
        return max(abs(self.lower - self.coherence), abs(self.upper - self.coherence))

    @property
    def passed(self) -> bool:
        return self.coherent == self.entangled and self.deviation <= EQUALITY_TOL


def theorem1_check(rho_s, p: ProjectiveMeasurement, d_a: int | None = None) -> Theorem1Report:
    """Coherent iff the converted state is NPT, and E_r equals C_r."""
    result = convert(rho_s, p, d_a)
    b = result.bounds
    return Theorem1Report(b.value, result.negativity, b.value, b.lower, b.upper)


def is_block_incoherent_bipartite(sigma, p: ProjectiveMeasurement, d_a: int, tol: float = 1e-9) -> bool:
    """Fixed point of dephasing by ``{P_i ⊗ |j><j|}``."""
    s = np.asarray(sigma, dtype=complex)
    joint = [np.kron(p_i, qmat.basis_projector(j, d_a)) for p_i in p.projectors for j in range(d_a)]
    dephased = sum(q @ s @ q for q in joint)
    return bool(np.max(np.abs(dephased - s)) < tol)

