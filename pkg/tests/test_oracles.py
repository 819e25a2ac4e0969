"""The frozen oracle tables must agree with their generators."""

import pytest

from oracles import T005_R10, T02, brute_force_match, sym_eig_2x2, tilted_2x2


@pytest.mark.parametrize("frozen,args", [(T02, ("0.2", 3)), (T005_R10, ("0.05", 10))])
def test_frozen_tables(frozen, args):
    live = tilted_2x2(*args)
    for key, val in frozen.items():
        assert live[key] == pytest.approx(val, rel=1e-15), key


def test_bound_dominates_eta():
    o = tilted_2x2()
    assert o["eta"] <= o["bound"]


def test_brute_force_small():
    assert brute_force_match([1.0], [1.05], 0.1)
    assert not brute_force_match([1.0], [2.0], 0.1)
    assert sym_eig_2x2(2, 0, 1) == (1.0, 2.0)
