import numpy as np
import pytest

import srgo
from srgo import (
    HOMOGENEOUS,
    INCONCLUSIVE,
    NOT_HOMOGENEOUS,
    Momentum,
    check_homogeneous,
    integrate_vertical,
    invariant_polynomials,
    orbit_tangency_check,
    sample_momenta,
    scan_homogeneous,
)


def test_heisenberg_momenta_homogeneous(heisenberg):
    s = heisenberg.structure
    for coords in ([1.0, 0, 1, 0], [0.3, -0.7, 2.0, 0], [1.0, 0, 0, 0]):
        cert = check_homogeneous(Momentum(np.array(coords), s))
        assert cert.verdict == HOMOGENEOUS
        # The witness satisfies p([X, e_j]) = 0 for the whole basis.
        p = np.array(coords)
        residual = s.algebra.coad_apply(cert.witness, p)
        assert np.max(np.abs(residual)) < 1e-8


def test_cartan_split_verdicts(cartan):
    s = cartan.structure
    good = Momentum(np.array([1.0, 0.4, 0.8, 0.0, 0.0, 0.0]), s)
    assert check_homogeneous(good).verdict == HOMOGENEOUS
    bad = Momentum(np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]), s)
    cert = check_homogeneous(bad)
    assert cert.verdict == NOT_HOMOGENEOUS
    assert cert.residual > 1e-4


def test_trivial_isotropy_reduces_to_fixed_point(models):
    s = models["so3_generic"].structure
    fixed = Momentum(np.array([0.0, 0.0, np.sqrt(3.0)]), s)
    assert check_homogeneous(fixed).verdict == HOMOGENEOUS
    moving = Momentum(np.array([1.0, 0.5, 0.5]), s)
    assert check_homogeneous(moving).verdict == NOT_HOMOGENEOUS


def test_scan_heisenberg_all_homogeneous(heisenberg):
    summary = scan_homogeneous(heisenberg.structure, 300, seed=0)
    assert summary.n_homogeneous == 300
    assert summary.n_inconclusive == 0
    assert summary.fraction_homogeneous == 1.0
    assert summary.counterexamples == []


def test_scan_counterexamples_recorded(cartan):
    summary = scan_homogeneous(cartan.structure, 100, seed=0)
    assert summary.n_not > 0
    assert summary.counterexamples
    assert len(summary.counterexamples) <= 10
    d = summary.to_dict()
    assert d["samples"] == 100
    assert d["homogeneous"] + d["not_homogeneous"] + d["inconclusive"] == 100


def test_scan_deterministic(cartan):
    a = scan_homogeneous(cartan.structure, 50, seed=3)
    b = scan_homogeneous(cartan.structure, 50, seed=3)
    assert a.to_dict() == b.to_dict()


def test_scan_rejects_bad_samples(heisenberg):
    with pytest.raises(ValueError):
        scan_homogeneous(heisenberg.structure, 0)


def test_orbit_tangency_axisym(so3_axisym):
    s = so3_axisym.structure
    p0 = Momentum(np.array([1.0, 0.5, 0.6, 0.0]), s)
    traj = integrate_vertical(p0, 10.0, 1e-3)
    from srgo.poly import poly_from_string

    invs = [poly_from_string("p3", 3), poly_from_string("p1^2 + p2^2", 3)]
    report = orbit_tangency_check(traj, invs)
    assert report.passed
    assert report.max_gap < 1e-8


def test_orbit_tangency_detects_variation(cartan):
    s = cartan.structure
    p0 = Momentum(np.array([1.0, 0.0, 0.0, 1.0, 0.0, 0.0]), s)
    traj = integrate_vertical(p0, 10.0, 1e-3)
    invs = invariant_polynomials(s, 2).polynomials
    report = orbit_tangency_check(traj, invs)
    assert not report.passed
    assert report.max_gap > 0.1


def test_certificate_serialization(heisenberg):
    cert = check_homogeneous(
        Momentum(np.array([1.0, 0, 1, 0]), heisenberg.structure)
    )
    d = cert.to_dict()
    assert d["verdict"] == HOMOGENEOUS
    assert len(d["witness"]) == 4
    assert d["threshold"] == 1e-8
