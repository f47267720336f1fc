"""Named POVMs and Naimark extensions used by the worked examples."""

from __future__ import annotations

import numpy as np

from . import qmat
from .measure import POVM, DensityMatrix, validate_povm, validate_projective
from .naimark import (
    Ancilla,
    KrausBlock,
    NaimarkExtension,
    fourier_family_extension,
    fourier_family_povm,
)

_E4 = np.exp(1j * np.pi / 4)

# Four-outcome extension vectors on C^4 as tabulated, with the basis ordered
# |a s>: ancilla label most significant. ``four_element_extension`` reorders
# them to the package-wide |s a> convention.
FOUR_ELEMENT_VECTORS_ANCILLA_MAJOR = np.array(
    [
        [1, 1, np.sqrt(2), 0],
        [1, 1j, -_E4, _E4],
        [1, -1, 0, -np.sqrt(2) * 1j],
        [1, -1j, -np.conj(_E4), np.exp(3j * np.pi / 4)],
    ],
    dtype=complex,
) / 2

# Kets |phi_j^(1)> of the second family selected by ancilla label 1.
SELECTED_FAMILY_KETS = np.array(
    [
        [1, 0],
        [-_E4 / np.sqrt(2), _E4 / np.sqrt(2)],
        [0, -1j],
        [-np.conj(_E4) / np.sqrt(2), np.exp(3j * np.pi / 4) / np.sqrt(2)],
    ],
    dtype=complex,
)


def trine_povm() -> POVM:
    """``{(2/3)|phi_k><phi_k|}`` with ``|phi_k> = (|0> + w^k |1>)/sqrt 2``, ``w = exp(2 pi i/3)``."""
    return fourier_family_povm(3)


def trine_extension() -> NaimarkExtension:
    return fourier_family_extension(3)[1]


def example1_povm(a: float) -> POVM:
    """Two full-rank diagonal effects ``diag(a, 1-a)`` and ``diag(1-a, a)``, ``0 < a < 1/2``."""
    return validate_povm([np.diag([a, 1 - a]), np.diag([1 - a, a])])


def example1_kraus(a: float) -> KrausBlock:
    """Diagonal operators ``A[i, a]`` of a hand-built two-outcome extension with ``A[i, 0] = sqrt(E_i)``."""
    ra, rb = np.sqrt(a), np.sqrt(1 - a)
    ops = np.zeros((2, 2, 2, 2), dtype=complex)
    ops[0, 0] = np.diag([ra, rb])
    ops[1, 0] = np.diag([rb, ra])
    ops[0, 1] = np.diag([-rb, ra])
    ops[1, 1] = np.diag([ra, -rb])
    return KrausBlock(ops)


def four_element_povm() -> POVM:
    """``{(1/2)|phi_k><phi_k|}`` with ``|phi_k> = (|0> + i^k |1>)/sqrt 2``."""
    kets = [np.array([1.0, 1j**k]) / np.sqrt(2) for k in range(4)]
    return validate_povm([0.5 * qmat.projector(v) for v in kets])


def selected_family_povm() -> POVM:
    return validate_povm([0.5 * qmat.projector(v) for v in SELECTED_FAMILY_KETS])


def ancilla_major_to_system_major(vec, system_dim: int, ancilla_dim: int) -> np.ndarray:
    """Reindex a vector on ``C^m ⊗ C^d`` (ancilla first) to ``C^d ⊗ C^m``."""
    return np.asarray(vec).reshape(ancilla_dim, system_dim).T.ravel()


def four_element_extension(reference: int = 0) -> NaimarkExtension:
    """Rank-one four-outcome projective measurement on ``C^2 ⊗ C^2`` dilating both families."""
    vecs = [ancilla_major_to_system_major(v, 2, 2) for v in FOUR_ELEMENT_VECTORS_ANCILLA_MAJOR]
    meas = validate_projective([qmat.projector(v) for v in vecs])
    return NaimarkExtension(meas, Ancilla(2, reference), 2)


def phase_state(t: float) -> DensityMatrix:
    """``|psi_t> = cos t |0> + i sin t |1>``."""
    return DensityMatrix.from_ket([np.cos(t), 1j * np.sin(t)])
