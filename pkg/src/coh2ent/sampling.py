"""Seeded random states, unitaries and block measurements for property checks."""

from __future__ import annotations

import numpy as np
from scipy.stats import unitary_group

from .measure import DensityMatrix, ProjectiveMeasurement, block_dephase, validate_projective


def rng_for(seed, *stream) -> np.random.Generator:
    """Independent generator for ``(seed, *stream)``; trial ``k`` of a run is ``rng_for(seed, k)``."""
    return np.random.default_rng([int(seed), *map(int, stream)])


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    if dim == 1:
        return np.exp(2j * np.pi * rng.random()) * np.ones((1, 1), dtype=complex)
    return unitary_group.rvs(dim, random_state=rng)


def random_pure_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return DensityMatrix.from_ket(v)


def random_density_matrix(dim: int, rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Ginibre-distributed state of the given rank (full rank by default)."""
    rank = dim if rank is None else rank
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real)


def random_state(dim: int, rng: np.random.Generator) -> DensityMatrix:
    """Pure, low-rank or full-rank state, each with equal odds."""
    kind = rng.integers(3)
    if kind == 0:
        return random_pure_state(dim, rng)
    if kind == 1 and dim > 2:
        return random_density_matrix(dim, rng, rank=int(rng.integers(2, dim)))
    return random_density_matrix(dim, rng)


def random_ranks(dim: int, rng: np.random.Generator, blocks: int | None = None) -> list[int]:
    """Random composition of ``dim`` into ``blocks`` positive parts (2..dim blocks by default)."""
    if blocks is None:
        blocks = int(rng.integers(2, dim + 1)) if dim > 1 else 1
    cuts = np.sort(rng.choice(np.arange(1, dim), size=blocks - 1, replace=False)) if blocks > 1 else []
    edges = [0, *map(int, cuts), dim]
    return [b - a for a, b in zip(edges[:-1], edges[1:])]


def random_projective(dim: int, rng: np.random.Generator, ranks=None) -> ProjectiveMeasurement:
    """Block projective measurement with the given rank pattern in a Haar-random basis."""
    ranks = random_ranks(dim, rng) if ranks is None else list(ranks)
    u = random_unitary(dim, rng)
    out, start = [], 0
    for r in ranks:
        cols = u[:, start:start + r]
        out.append(cols @ cols.conj().T)
        start += r
    return validate_projective(out)


def random_trial(dim: int, rng: np.random.Generator, incoherent_every: int = 4, index: int = 0):
    """A ``(state, measurement)`` pair; every ``incoherent_every``-th trial is block-dephased first."""
    p = random_projective(dim, rng)
    rho = random_state(dim, rng)
    if incoherent_every and index % incoherent_every == incoherent_every - 1:
        rho = block_dephase(rho, p)
    return rho, p
