import math

import numpy as np
import pytest

from coh2ent import catalog, qmat
from coh2ent.coherence import block_coherence
from coh2ent.convert import (
    build_entangling_unitary,
    conversion_output,
    convert,
    entanglement_bounds,
    is_block_incoherent_bipartite,
    negativity,
    rel_ent_entanglement_converted,
    separable_reference,
    theorem1_check,
)
from coh2ent.errors import DimensionMismatch, TargetTooSmall
from coh2ent.measure import DensityMatrix, block_dephase, block_measurement, computational_measurement
from coh2ent.naimark import embed_state, fourier_vectors
from coh2ent.sampling import random_density_matrix, random_projective, random_state


def shift_unitary_by_loops(p, d_a):
    """Direct assembly: entry <s', t'|U|s, t> summed over blocks."""
    d_p, d_s = p.outcomes, p.dim
    u = np.zeros((d_s * d_a, d_s * d_a), dtype=complex)
    for i, proj in enumerate(p.projectors):
        for j in range(d_a):
            target = (i + j) % d_p if j < d_p else j
            for s1 in range(d_s):
                for s2 in range(d_s):
                    u[s1 * d_a + target, s2 * d_a + j] += proj[s1, s2]
    return u


BELL = np.array([1, 0, 0, 1]) / np.sqrt(2)


class TestUnitary:
    def test_cnot(self):
        u = build_entangling_unitary(computational_measurement(2))
        cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        np.testing.assert_array_equal(u, cnot)

    def test_trine(self):
        ext = catalog.trine_extension()
        u = build_entangling_unitary(ext.measurement, 3)
        phis = fourier_vectors(3)
        expected = sum(
            np.kron(np.outer(phis[i], phis[i].conj()), np.outer(qmat.ket((i + j) % 3, 3), qmat.ket(j, 3)))
            for i in range(3) for j in range(3)
        )
        np.testing.assert_allclose(u, expected, atol=1e-14)

    def test_rank_pattern_with_larger_target(self, rng):
        p = random_projective(3, rng, ranks=[2, 1])
        u = build_entangling_unitary(p, 4)
        np.testing.assert_allclose(u, shift_unitary_by_loops(p, 4), atol=1e-14)
        assert np.max(np.abs(u.conj().T @ u - np.eye(12))) < 1e-10
        # levels j >= 2 of the target are left alone
        for j in (2, 3):
            psi = np.kron(rng.standard_normal(3), qmat.ket(j, 4))
            np.testing.assert_allclose(u @ psi, psi, atol=1e-14)

    def test_rank_one_specialization(self, rng):
        p = random_projective(4, rng, ranks=[1, 1, 1, 1])
        vecs = []
        for proj in p.projectors:
            vals, v = np.linalg.eigh(proj)
            vecs.append(v[:, -1])
        expected = sum(
            np.kron(np.outer(vecs[i], vecs[i].conj()), np.outer(qmat.ket((i + j) % 4, 4), qmat.ket(j, 4)))
            for i in range(4) for j in range(4)
        )
        np.testing.assert_allclose(build_entangling_unitary(p), expected, atol=1e-12)

    def test_unitary_for_many_patterns(self, rng):
        for _ in range(30):
            d = int(rng.integers(2, 9))
            p = random_projective(d, rng)
            d_a = p.outcomes + int(rng.integers(0, 3))
            u = build_entangling_unitary(p, d_a)
            assert np.max(np.abs(u.conj().T @ u - np.eye(d * d_a))) < 1e-10

    def test_target_too_small(self):
        with pytest.raises(TargetTooSmall):
            build_entangling_unitary(computational_measurement(3), 2)

    def test_block_incoherence_preserved(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 5))
            p = random_projective(d, rng)
            d_a = p.outcomes + int(rng.integers(0, 2))
            joint = [np.kron(pi, qmat.basis_projector(j, d_a)) for pi in p.projectors for j in range(d_a)]
            sigma = sum(q @ random_density_matrix(d * d_a, rng).mat @ q for q in joint)
            assert is_block_incoherent_bipartite(sigma, p, d_a)
            u = build_entangling_unitary(p, d_a)
            assert is_block_incoherent_bipartite(u @ sigma @ u.conj().T, p, d_a)


class TestConvert:
    def test_plus_gives_bell(self):
        r = convert(DensityMatrix.from_ket([1, 1]), computational_measurement(2))
        np.testing.assert_allclose(r.output_state.mat, np.outer(BELL, BELL), atol=1e-15)
        assert r.negativity == pytest.approx(0.5, abs=1e-12)
        assert r.rel_ent_entanglement == pytest.approx(1.0, abs=1e-12)
        assert r.dims == (2, 2)

    def test_trine_output(self):
        ext = catalog.trine_extension()
        r = convert(embed_state(DensityMatrix.basis(0, 2), ext), ext.measurement)
        phis = fourier_vectors(3)
        expected = sum(
            np.kron(np.outer(phis[i], phis[j].conj()), np.outer(qmat.ket(i, 3), qmat.ket(j, 3))) / 3
            for i in range(3) for j in range(3)
        )
        np.testing.assert_allclose(r.output_state.mat, expected, atol=1e-14)
        assert r.rel_ent_entanglement == pytest.approx(math.log2(3), abs=1e-8)
        assert r.negativity > 0

    def test_four_element(self):
        ext = catalog.four_element_extension()
        rho = embed_state(DensityMatrix.basis(0, 2), ext)
        assert rel_ent_entanglement_converted(rho, ext.measurement) == pytest.approx(2.0, abs=1e-8)

    def test_incoherent_input(self, rng):
        p = random_projective(3, rng)
        rho = block_dephase(random_density_matrix(3, rng), p)
        r = convert(rho, p)
        np.testing.assert_allclose(r.output_state.mat, separable_reference(rho, p, p.outcomes), atol=1e-12)
        assert r.negativity < 1e-9
        assert r.rel_ent_entanglement < 1e-9

    def test_output_matches_cross_terms(self, rng):
        for _ in range(10):
            p = random_projective(4, rng)
            rho = random_state(4, rng).mat
            n = p.outcomes
            expected = sum(
                np.kron(p[i] @ rho @ p[j], np.outer(qmat.ket(i, n), qmat.ket(j, n)))
                for i in range(n) for j in range(n)
            )
            np.testing.assert_allclose(conversion_output(rho, p, n), expected, atol=1e-9)

    def test_marginal_and_purity(self, rng):
        for _ in range(50):
            d = int(rng.integers(2, 6))
            p = random_projective(d, rng)
            rho = random_state(d, rng)
            r = convert(rho, p)
            marginal = qmat.partial_trace(r.output_state.mat, list(r.dims), keep=[0])
            assert np.max(np.abs(marginal - block_dephase(rho, p).mat)) < 1e-9
            s_out = qmat.von_neumann_entropy(r.output_state)
            assert abs(s_out - qmat.von_neumann_entropy(rho)) < 1e-8

    def test_sandwich(self, rng):
        for _ in range(30):
            p = random_projective(4, rng)
            rho = random_state(4, rng)
            b = entanglement_bounds(rho, p)
            c = block_coherence(rho, p)
            assert abs(b.lower - c) < 1e-8 and abs(b.upper - c) < 1e-8

    def test_larger_target_same_entanglement(self, rng):
        # equality beyond the minimal target size is checked, not assumed
        for _ in range(30):
            p = random_projective(3, rng)
            rho = random_state(3, rng)
            base = convert(rho, p).rel_ent_entanglement
            for extra in (1, 3):
                r = convert(rho, p, p.outcomes + extra)
                assert abs(r.rel_ent_entanglement - base) < 1e-8
                assert abs(r.bounds.lower - base) < 1e-8 and abs(r.bounds.upper - base) < 1e-8

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            convert(DensityMatrix.basis(0, 3), computational_measurement(2))


class TestNegativity:
    def test_examples(self):
        assert negativity(np.kron(np.diag([1, 0]), np.eye(2) / 2), [2, 2]) == 0
        assert negativity(np.outer(BELL, BELL), [2, 2]) == pytest.approx(0.5, abs=1e-14)

    def test_maximally_entangled(self):
        for d in (3, 4):
            psi = np.eye(d).ravel() / np.sqrt(d)
            assert negativity(np.outer(psi, psi), [d, d]) == pytest.approx((d - 1) / 2, abs=1e-12)

    def test_dims(self):
        with pytest.raises(DimensionMismatch):
            negativity(np.eye(6) / 6, [2, 2])


class TestEquivalenceCheck:
    def test_coherent_input(self, rng):
        p = random_projective(4, rng, ranks=[2, 1, 1])
        r = theorem1_check(random_state(4, rng), p)
        assert r.passed and r.coherent and r.entangled

    def test_incoherent_input(self, rng):
        p = random_projective(4, rng, ranks=[2, 1, 1])
        r = theorem1_check(block_dephase(random_state(4, rng), p), p)
        assert r.passed and not r.coherent and not r.entangled

    def test_block_measurement_pure_state(self):
        rho = DensityMatrix.from_ket([1, 1, 1])
        r = theorem1_check(rho, block_measurement([2, 1]))
        assert r.passed
        assert r.rel_ent_entanglement == pytest.approx(-(2 / 3) * math.log2(2 / 3) - (1 / 3) * math.log2(1 / 3), abs=1e-10)
