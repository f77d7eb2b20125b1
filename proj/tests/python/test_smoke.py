"""Smoke tests of the python surface: one thin pass over each exported piece."""

import json
import math

import pytest

import aoisched as aoi


def test_params_and_defaults():
    p = aoi.Params(p=0.07, d=10)
    assert p.delta_m == 100
    assert p.n_states() == 91 * 10 * 2
    with pytest.raises(ValueError):
        aoi.Params(p=0.0, d=2)
    with pytest.raises(ValueError):
        aoi.Params(p=0.5, d=1)


def test_epoch_coords():
    p = aoi.Params(p=0.07, d=10, delta_m=200)
    assert aoi.epoch_coords(aoi.State(delta=18, l=3, a=1), p) == (6, 9)
    assert aoi.epoch_coords(aoi.State(delta=18, l=0, a=1), p) is None
    assert aoi.epoch_coords(aoi.State(delta=200, l=3, a=1), p) is None


def test_kernel_and_cost():
    p = aoi.Params(p=0.25, d=10, delta_m=50)
    out = aoi.transitions(aoi.State(delta=20, l=0, a=1), aoi.Action.SWITCH, p)
    assert [(t.delta, t.l, t.a) for t, _ in out] == [(21, 1, 1), (21, 1, 0)]
    assert [pr for _, pr in out] == [0.25, 0.75]
    assert aoi.cost(aoi.State(delta=15, l=9, a=0), aoi.Action.SKIP, 10) == 10.0
    assert aoi.cost(aoi.State(delta=15, l=3, a=1), aoi.Action.SWITCH, 10) == 16.0


def test_solve_and_thresholds():
    params = aoi.Params(p=0.2, d=4)
    pol = aoi.solve_structured(params)
    assert pol.avg_cost > params.d
    tp = aoi.extract_thresholds(pol)
    assert tp.K >= 1
    assert all(a >= b for a, b in zip(tp.tau, tp.tau[1:]))
    assert all(t >= i for i, t in enumerate(tp.tau, start=1))
    # both solvers agree
    plain = aoi.solve_rvi(params)
    assert abs(plain.avg_cost - pol.avg_cost) < 1e-8
    # oracles agree
    assert abs(aoi.evaluate_stationary(pol) - pol.avg_cost) < 1e-6


def test_closed_form_and_renewal():
    st = aoi.myopic_closed_form(0.5, 2)
    assert (st.mean_x, st.mean_x2) == (3.0, 11.0)
    assert math.isclose(st.avg_aoi_per_slot(), 10.0 / 3.0, rel_tol=1e-14)
    myo = aoi.ThresholdPolicy.myopic(aoi.Params(p=0.5, d=2))
    st2 = aoi.eval_threshold_exact(myo, 0.5, 2)
    assert math.isclose(st2.avg_aoi, st.avg_aoi, rel_tol=1e-13)


def test_simulate_deterministic():
    params = aoi.Params(p=0.5, d=2)
    a = aoi.simulate("myopic", params, T=200000, seed=42)
    b = aoi.simulate("myopic", params, T=200000, seed=42)
    assert a.avg_aoi == b.avg_aoi
    assert a.n_epochs == b.n_epochs
    oracle = aoi.myopic_closed_form(0.5, 2).avg_aoi_per_slot()
    assert abs(a.avg_aoi - oracle) / oracle < 0.02
    report = json.loads(a.to_json())
    assert report["rng"] == "splitmix64"


def test_simulate_threshold_policy_object():
    params = aoi.Params(p=0.2, d=4)
    tp = aoi.extract_thresholds(aoi.solve_structured(params))
    rep = aoi.simulate(tp, params, T=100000, seed=1)
    exact = aoi.eval_threshold_exact(tp, 0.2, 4).avg_aoi_per_slot()
    assert abs(rep.avg_aoi - exact) <= 4 * rep.stderr_avg_aoi()


def test_sweep_exact_rows():
    rows = aoi.sweep([0.2, 0.5], d=4, T=0)
    assert [r.policy for r in rows] == ["myopic", "optimal"] * 2
    assert rows[1].gap_vs_myopic > 0.0
    assert rows[3].gap_vs_myopic == 0.0


def test_threshold_json_roundtrip():
    tp = aoi.ThresholdPolicy(aoi.Params(p=0.07, d=10, delta_m=200), 4, [9, 8, 7, 6])
    back = aoi.ThresholdPolicy.from_json(tp.to_json())
    assert back.K == 4 and list(back.tau) == [9, 8, 7, 6]
    with pytest.raises(ValueError):
        aoi.ThresholdPolicy(aoi.Params(p=0.5, d=4), 2, [3, 5])


def test_nonconvergence_raises():
    with pytest.raises(RuntimeError):
        aoi.solve_rvi(aoi.Params(p=0.5, d=2), aoi.SolveConfig(tol=1e-9, max_iters=1))
