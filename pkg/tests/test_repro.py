import math

import numpy as np
import pytest

from coh2ent import repro
from coh2ent.errors import ValidationError


def closed_form_e0(t):
    p = [0.25, (1 + math.sin(2 * t)) / 4, 0.25, (1 - math.sin(2 * t)) / 4]
    return -sum(x * math.log2(x) for x in p if x > 0)


def closed_form_e1(t):
    p = [math.cos(t) ** 2 / 2, 0.25, math.sin(t) ** 2 / 2, 0.25]
    return -sum(x * math.log2(x) for x in p if x > 0)


def test_fig2_matches_closed_forms():
    for row in repro.fig2_rows(64):
        assert row.coherence_E0 == pytest.approx(closed_form_e0(row.t), abs=1e-9)
        assert row.coherence_E1 == pytest.approx(closed_form_e1(row.t), abs=1e-9)
        assert abs(row.entanglement_selected - max(row.coherence_E0, row.coherence_E1)) < 1e-10
        assert row.ancilla_choice == (0 if row.coherence_E0 >= row.coherence_E1 else 1)


def test_fig2_grid_and_anchors():
    rows = repro.fig2_rows(8)
    assert [r.t for r in rows] == [k * np.pi / 8 for k in range(8)]
    anchors = {0: (2, 1.5), 2: (1.5, 2), 4: (2, 1.5), 6: (1.5, 2)}
    for k, (e0, e1) in anchors.items():
        assert rows[k].coherence_E0 == pytest.approx(e0, abs=1e-9)
        assert rows[k].coherence_E1 == pytest.approx(e1, abs=1e-9)


def test_fig2_bad_grid():
    with pytest.raises(ValidationError):
        repro.fig2_rows(0)


def test_csv_deterministic():
    a = repro.rows_to_csv(repro.fig2_rows(16))
    b = repro.rows_to_csv(repro.fig2_rows(16))
    assert a == b
    lines = a.splitlines()
    assert lines[0] == "t,coherence_E0,coherence_E1,entanglement_selected,ancilla_choice"
    assert len(lines) == 17
    assert float(lines[1].split(",")[1]) == repro.fig2_rows(1)[0].coherence_E0


def test_example1_rows():
    rows = repro.example1_rows()
    assert len(rows) == 6
    for r in rows:
        h = -(r.a * math.log2(r.a) + (1 - r.a) * math.log2(1 - r.a))
        assert r.coherence == pytest.approx(h, abs=1e-10)
        assert r.rel_ent_entanglement == pytest.approx(h, abs=1e-8)
        assert r.system_purity == pytest.approx(1.0, abs=1e-9)
        assert r.negativity == pytest.approx(math.sqrt(r.a * (1 - r.a)), abs=1e-8)
        assert r.negativity == pytest.approx(r.schmidt_negativity, abs=1e-8)


def test_schmidt_coefficients():
    psi = np.array([np.sqrt(0.3), 0, 0, np.sqrt(0.7)])
    lam = repro.schmidt_coefficients(np.outer(psi, psi), (2, 2))
    np.testing.assert_allclose(sorted(lam), [0.3, 0.7], atol=1e-12)


def test_trine_and_four_element_rows():
    for r in repro.trine_rows():
        assert r.coherence == pytest.approx(math.log2(3), abs=1e-9)
        assert r.rel_ent_entanglement == pytest.approx(math.log2(3), abs=1e-8)
    rows = repro.four_element_rows()
    table = {(round(r.t, 6), r.ancilla): r.coherence for r in rows}
    assert table[(0.0, 0)] == pytest.approx(2, abs=1e-9)
    assert table[(0.0, 1)] == pytest.approx(1.5, abs=1e-9)
    assert table[(round(np.pi / 4, 6), 1)] == pytest.approx(2, abs=1e-9)
    for r in rows:
        assert abs(r.coherence - r.rel_ent_entanglement) < 1e-8


def test_run_sweep_small():
    report = repro.run_sweep(3, 12, seed=5)
    assert report.ok and report.passed == 12 and not report.failures
    assert report == repro.run_sweep(3, 12, seed=5)


def test_run_sweep_dim_range():
    with pytest.raises(ValidationError):
        repro.run_sweep(9, 1, 0)
