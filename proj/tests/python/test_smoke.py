import math

import pytest

import hole_energy as he


def test_flat_minimizer_energy():
    u = he.flat_minimizer(1.0, 0.1)
    rep = he.energy(u, he.ChartMetric.flat(1.0))
    assert rep.total == pytest.approx(math.e**2 * math.pi**2 * 0.1**4, rel=1e-8)


def test_min_energy_fubini_study():
    fs = he.ChartMetric.fubini_study()
    res = he.min_energy(fs, fs, 0.05)
    assert res.report.total > 0.0


def test_free_radius():
    assert he.solve_equa_R(0.0, 1.0) == pytest.approx(math.sqrt(math.e), rel=1e-10)


def test_error_kind():
    with pytest.raises(he.HoleEnergyError) as info:
        he.flat_minimizer(-1.0, 0.1)
    assert info.value.kind == "invalid_input"


def test_hole_probability():
    est = he.hole_probability(1, 1.0, 4000, 42, 1)
    assert est.wilson_lo <= 0.5 <= est.wilson_hi
