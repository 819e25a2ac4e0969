import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import T02, tilted_2x2
from relcert import (
    DimensionMismatch,
    OrthonormalBasis,
    SingularOperator,
    SymmetricOperator,
    compress,
    diag_off_split,
    image_subspaces,
    oblique_projection,
    operator_norm,
    orthonormalize,
    verify_factorization,
)
from relcert.harness import InstanceSpec, gen_instance, random_tilted_specs
from relcert.split import invariance_defect, setup


def same_subspace(a: OrthonormalBasis, b: OrthonormalBasis, tol=1e-12):
    return operator_norm(a.projector - b.projector) <= tol


def test_compress_examples(invariant3, flip2, t02):
    np.testing.assert_allclose(compress(*invariant3).entries, np.diag([1.0, 2.0]))
    assert compress(*flip2).entries.shape == (1, 1)
    assert abs(compress(*flip2).entries[0, 0]) <= 1e-16
    assert compress(*t02).entries[0, 0] == pytest.approx(T02["mu"], abs=1e-15)


def test_compress_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        compress(SymmetricOperator.diag([1, 2, 3]), OrthonormalBasis.standard(2, [0]))


def test_image_subspaces(invariant3, t02):
    v, w = image_subspaces(*invariant3)
    u = invariant3[1]
    assert same_subspace(v, u) and same_subspace(w, u)

    v, w = image_subspaces(*t02)
    oracle = tilted_2x2()
    vr = np.array(oracle["V_raw"])
    wr = np.array(oracle["W_raw"])
    np.testing.assert_allclose(v.cols[:, 0], vr / np.linalg.norm(vr), atol=1e-15)
    np.testing.assert_allclose(w.cols[:, 0], wr / np.linalg.norm(wr), atol=1e-15)


def test_singular_operator():
    h = SymmetricOperator.diag([0.0, 1.0])
    with pytest.raises(SingularOperator):
        image_subspaces(h, OrthonormalBasis.standard(2, [1]))
    with pytest.raises(SingularOperator):
        oblique_projection(h, OrthonormalBasis.standard(2, [1]))


def test_oblique_projection_invariant(invariant3):
    p = oblique_projection(*invariant3)
    np.testing.assert_allclose(p.matrix, invariant3[1].projector, atol=1e-15)


def test_oblique_projection_t02(t02):
    p = oblique_projection(*t02)
    np.testing.assert_allclose(p.matrix, tilted_2x2()["P"], atol=1e-15)
    assert max(p.residuals().values()) <= 1e-14


def test_oblique_projection_involution():
    # a Householder reflection satisfies H = H^{-1}
    r = np.eye(3) - 2 * np.outer([1, 1, 1], [1, 1, 1]) / 3
    h = SymmetricOperator(r)
    u = orthonormalize(np.array([[1.0, 0.0], [0.0, 1.0], [2.0, -1.0]]))
    p = oblique_projection(h, u)
    v, w = image_subspaces(h, u)
    assert same_subspace(v, w)
    assert operator_norm(p.matrix - v.projector) <= 1e-14


def test_split_examples(invariant3, t02, flip2):
    s = diag_off_split(*invariant3)
    assert operator_norm(s.h_off.entries) == 0.0
    assert s.eta <= 1e-15
    assert diag_off_split(*t02).eta == pytest.approx(math.sin(0.4), abs=1e-15)
    s = diag_off_split(*flip2)
    assert s.eta == pytest.approx(1.0, abs=1e-15)
    # P_U - P is antidiagonal(1, 1) here
    p = oblique_projection(*flip2)
    np.testing.assert_allclose(s.p_u - p.matrix, [[0, 1], [1, 0]], atol=1e-15)


def test_split_invariants_random():
    for spec in random_tilted_specs(30, seed=4, n_range=(3, 12)):
        h, u = gen_instance(spec)
        s = diag_off_split(h, u)
        scale = max(1.0, h.norm)
        # H_diag + H_off reproduces H up to one rounding of the subtraction
        assert np.max(np.abs(s.h_diag.entries + s.h_off.entries - h.entries)) <= 4 * np.finfo(float).eps * scale
        pu, pc = s.p_u, np.eye(h.dim) - s.p_u
        assert operator_norm(pu @ s.h_diag.entries @ pc) <= 1e-12 * scale
        assert operator_norm(pc @ s.h_diag.entries @ pu) <= 1e-12 * scale
        q = u.cols
        assert operator_norm(q.T @ s.h_diag.entries @ q - compress(h, u).entries) <= 1e-12 * scale
        hoff_hinv = operator_norm(s.h_off.entries @ h.inverse())
        assert abs(hoff_hinv - s.eta) <= 1e-12 * max(1.0, s.eta)


def test_factorization_examples(invariant3, t02):
    assert max(verify_factorization(*invariant3).values()) <= 1e-15
    assert max(verify_factorization(*t02).values()) <= 1e-12


def test_factorization_batch():
    for spec in random_tilted_specs(50, seed=9, n_range=(10, 10)):
        h, u = gen_instance(spec)
        # ||H|| ||H^{-1}|| = cond(H)
        assert max(verify_factorization(h, u).values()) <= 1e-9 * h.cond


@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
def test_idempotency_property(seed, n):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n))
    spectrum = rng.uniform(0.5, 5, n) * rng.choice([-1, 1], n)
    h, u = gen_instance(InstanceSpec(n=n, spectrum=tuple(spectrum), subspace_mode="random", k=k, seed=seed))
    p = oblique_projection(h, u)
    pn = operator_norm(p.matrix)
    assert operator_norm(p.matrix @ p.matrix - p.matrix) <= 1e-10 * (1 + pn) ** 2
    res = p.residuals()
    assert res["range"] <= 1e-10 * (1 + pn) and res["kernel"] <= 1e-10 * (1 + pn)


@given(st.integers(0, 2**32 - 1), st.integers(2, 10))
def test_invariant_subspace_gives_p_equal_pu(seed, n):
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, n))
    spectrum = rng.uniform(0.5, 5, n) * rng.choice([-1, 1], n)
    select = tuple(sorted(rng.choice(n, k, replace=False).tolist()))
    h, u = gen_instance(InstanceSpec(n=n, spectrum=tuple(spectrum), select=select, seed=seed))
    tol = 1e-10 * max(1.0, h.norm)
    assert invariance_defect(h, u) <= tol
    s = setup(h, u)
    bound = 10 * tol * h.cond
    assert operator_norm(s.V.projector - u.projector) <= bound
    assert operator_norm(s.W.projector - u.projector) <= bound
    assert operator_norm(s.P.matrix - u.projector) <= bound
