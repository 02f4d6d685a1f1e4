import math

import numpy as np
import pytest

import cocycle_lab as cl


def test_group_tables():
    d4 = cl.dihedral(4)
    assert d4.order == 8
    assert not d4.is_abelian()
    t = d4.table
    assert t.shape == (8, 8)
    for g in range(8):
        assert t[g, d4.inv(g)] == 0
    rebuilt = cl.group_from_table(t, "D4 copy")
    assert rebuilt.order == 8
    assert np.array_equal(rebuilt.table, t)


def test_bad_table_raises():
    with pytest.raises(cl.CocycleLabError):
        cl.group_from_table(np.array([[0, 1], [0, 1]]))


def test_zn_roots_length_and_certificate():
    psi = cl.induced_length(cl.zn_roots(4))
    assert np.allclose(psi.values, [0, 2, 4, 2])
    ok, min_eig = cl.is_conditionally_negative(psi)
    assert ok and min_eig >= -1e-10
    bad = cl.LengthFunction(cl.cyclic(4), [0, 1, 10, 1])
    assert not cl.is_conditionally_negative(bad)[0]
    assert not all(psd for _, _, psd in cl.schoenberg_check(bad, cl.schoenberg_grid()))


def test_cocycle_round_trip():
    psi = cl.random_length(cl.symmetric(3), seed=5)
    c = cl.build_cocycle(psi)
    r = cl.cocycle_residuals(c, psi)
    assert r["length"] <= 1e-10
    assert r["law"] <= 1e-8
    b = c.b
    for g in range(6):
        for h in range(6):
            gh = c.group.mul(c.group.inv(g), h)
            assert abs(np.sum((b[g] - b[h]) ** 2) - psi[gh]) <= 1e-10


def test_plancherel_and_gamma_trace():
    psi = cl.induced_length(cl.dihedral_plane(4))
    rng = np.random.default_rng(3)
    f = rng.normal(size=8) + 1j * rng.normal(size=8)
    assert abs(cl.lp_norm(psi.group, f, 2.0) ** 2 - np.sum(np.abs(f) ** 2)) <= 1e-10
    gamma = cl.gamma(psi, f, f)
    assert abs(gamma[0].real - np.dot(psi.values, np.abs(f) ** 2)) <= 1e-10


def test_riesz_l2_law():
    c = cl.zn_roots(4)
    m = cl.riesz_symbol(c, np.array([1.0, 0.0]))
    assert np.allclose(m, [0, 1j / math.sqrt(2), 1j, 1j / math.sqrt(2)])
    lb, _ = cl.lp_norm_search(c.group, m, 2.0, trials=2, steps=20, seed=1)
    assert lb <= np.max(np.abs(m)) + 1e-9


def test_meyer_p2_band():
    psi = cl.induced_length(cl.zn_roots(8))
    stats = cl.meyer_ratio(psi, 2.0, samples=20, seed=11)
    assert 1 / math.sqrt(2) - 1e-6 <= stats["min"] <= stats["max"] <= math.sqrt(2) + 1e-6


def test_donut_p2_equals_supremum():
    rows = cl.norm_sweep(1.0, math.sqrt(2), 0.25, 2.0, [256, 512], trials=1, steps=10, seed=3)
    for row in rows:
        assert abs(row["lower_bound"] - row["exact_l2"]) <= 1e-10


def test_run_experiment():
    report, passed = cl.run(
        {"command": "check-length", "group": {"kind": "cyclic", "params": [4]}, "psi": {"values": [0, 1, 10, 1]}}
    )
    assert not passed
    assert report["command"] == "check-length"
    assert "check-length" in cl.commands()
    with pytest.raises(cl.CocycleLabError):
        cl.run({"command": "check-length", "group": {"kind": "cyclic", "params": [4]}, "bogus": 1})
