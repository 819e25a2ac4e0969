import dataclasses
import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relcert import InvalidSpec, diag_off_split
from relcert.angles import max_angle
from relcert.harness import (
    InstanceSpec,
    evaluate,
    flip_specs,
    gen_instance,
    perturbation_instance,
    random_tilted_specs,
    rng_for,
    run_batch,
    run_instance,
    tilt,
)
from relcert.linalg import OrthonormalBasis, SymmetricOperator, orthonormalize
from relcert.report import Report


def spec42(**kw):
    base = dict(n=6, spectrum=(-3.0, -1.0, 0.5, 1.0, 2.0, 7.0), subspace_mode="tilted", select=(2, 4), epsilon=0.01, seed=42)
    base.update(kw)
    return InstanceSpec(**base)


def test_gen_instance_deterministic():
    h1, u1 = gen_instance(spec42())
    h2, u2 = gen_instance(spec42())
    assert np.array_equal(h1.entries, h2.entries)
    assert np.array_equal(u1.cols, u2.cols)
    h3, _ = gen_instance(spec42(seed=43))
    assert not np.array_equal(h1.entries, h3.entries)


def test_gen_instance_spectrum():
    spec = spec42()
    h, u = gen_instance(spec)
    np.testing.assert_allclose(h.values, sorted(spec.spectrum), atol=1e-13)
    assert u.k == 2


def test_eigvec_mode_is_invariant():
    h, u = gen_instance(spec42(subspace_mode="eigvec", epsilon=0.0))
    assert diag_off_split(h, u).eta <= 1e-13


def test_tilt_angles():
    rng = rng_for(0)
    base = orthonormalize(rng.standard_normal((8, 3))).cols
    moved = tilt(base, 0.1, rng)
    # columns stay orthonormal and every principal angle equals the tilt
    np.testing.assert_allclose(moved.T @ moved, np.eye(3), atol=1e-14)
    cosines = np.linalg.svd(base.T @ moved, compute_uv=False)
    np.testing.assert_allclose(cosines, math.cos(0.1), atol=1e-14)


@pytest.mark.parametrize("eps", [1e-3, 1e-2, 1e-1])
def test_tilted_eta_scales_with_epsilon(eps):
    # ||P_U - P|| <= ||[H, P_U]|| ||H^-1|| <= 2 sin(eps) cond(H)
    for spec in random_tilted_specs(30, seed=3, n_range=(4, 20)):
        h, u = gen_instance(dataclasses.replace(spec, epsilon=eps))
        assert diag_off_split(h, u).eta <= 2 * math.sin(eps) * h.cond * (1 + 1e-9)


@pytest.mark.parametrize(
    "kw",
    [
        dict(n=3),
        dict(spectrum=(0.0, 1.0, 2.0, 3.0, 4.0, 5.0)),
        dict(spectrum=(math.nan, 1.0, 2.0, 3.0, 4.0, 5.0)),
        dict(subspace_mode="sideways"),
        dict(epsilon=-0.1),
        dict(select=(0, 0)),
        dict(select=(9,)),
        dict(seed=-1),
        dict(subspace_mode="flip", select=(0, 1, 2)),
        dict(subspace_mode="random", k=7),
    ],
)
def test_invalid_specs(kw):
    with pytest.raises(InvalidSpec):
        spec42(**kw)


def test_spec_dict_round_trip():
    spec = spec42(ess_threshold=math.inf)
    d = json.loads(json.dumps(spec.to_dict()))
    assert InstanceSpec.from_dict(d) == spec
    with pytest.raises(InvalidSpec):
        InstanceSpec.from_dict({**d, "colour": "red"})


def test_batch_tilted_all_certified():
    specs = [dataclasses.replace(s, epsilon=0.05) for s in random_tilted_specs(100, seed=21, n_range=(12, 12))]
    reports, summary = run_batch(specs)
    assert summary.counts == {"Certified": 100}
    assert summary.ok
    for r in reports:
        assert all(r.invariants.values()), r.invariants


def test_batch_flip_not_certifiable():
    reports, summary = run_batch(flip_specs(10, seed=1))
    assert summary.counts == {"NotCertifiable": 10}
    assert summary.contradictions == 0
    for r in reports:
        assert r.certificate["matches"] == []


def test_batch_empty():
    reports, summary = run_batch([])
    assert reports == [] and summary.total == 0 and summary.ok


def test_batch_workers_preserve_order():
    specs = random_tilted_specs(8, seed=2, n_range=(4, 10))
    serial, _ = run_batch(specs)
    threaded, _ = run_batch(specs, workers=4)
    assert [r.certificate for r in serial] == [r.certificate for r in threaded]


def test_report_json_round_trip():
    report = run_instance(spec42())
    back = Report.from_json(report.to_json())
    assert back.to_json() == report.to_json()
    assert back.certificate["d"] == math.inf


def test_evaluate_records_errors():
    h = SymmetricOperator.diag([0.0, 1.0])
    cert, report = evaluate(h, OrthonormalBasis.standard(2, [1]))
    assert cert is None
    assert report.status == "Error" and "SingularOperator" in report.error


@given(st.integers(0, 2**32))
def test_perturbation_instance_relative_bound(seed):
    rng = rng_for(seed)
    a, v, p, alpha, beta = perturbation_instance(rng, int(rng.integers(2, 10)))
    assert alpha < 0 < beta
    # ||V x|| <= b ||A x|| for all x  <=>  ||V A^-1|| <= b
    assert np.linalg.norm(v @ np.linalg.inv(a.entries), 2) <= p.b * (1 + 1e-10)


def test_tilt_subspace_angle_to_span():
    h, u = gen_instance(spec42(subspace_mode="tilted", epsilon=0.2))
    h0, u0 = gen_instance(spec42(subspace_mode="eigvec", epsilon=0.0))
    assert np.array_equal(h.entries, h0.entries)
    assert max_angle(u0, u)[0] == pytest.approx(math.sin(0.2), abs=1e-13)


def test_eta_over_epsilon_bounded_small_example():
    ratios = []
    for eps in (1e-1, 1e-2, 1e-3):
        spec = InstanceSpec(n=3, spectrum=(-1.0, 1.0, 2.0), subspace_mode="tilted", select=(1, 2), epsilon=eps, seed=0)
        h, u = gen_instance(spec)
        ratios.append(diag_off_split(h, u).eta / eps)
    # first order in eps: the ratio settles to a constant as eps shrinks
    assert max(ratios) <= 2 * 2.0  # 2 cond(H)
    assert ratios[2] == pytest.approx(ratios[1], rel=1e-2)
