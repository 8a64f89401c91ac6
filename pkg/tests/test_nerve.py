from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nfold.errors import ValidationError
from nfold.nerve import (
    MultiHorn,
    check_simplicial_identities,
    check_unique_inner_horns,
    composite_candidates,
    delete_simplex,
    inner_horn_shapes,
    mutation_detected,
    nerve,
)
from nfold.strict import corpus, group_squares, horizontal, group_category, monoid_squares, poset_squares, walking_arrow

SMALL = [C for C in corpus() if C.name not in ("Sq(Z2)", "Omega2(Z3)", "squares(chain3)")]


def monotone_grids(leq, elements, p, q) -> int:
    """Order-preserving maps [p] x [q] -> poset, by brute force."""
    pts = list(product(range(p + 1), range(q + 1)))
    n = 0
    for vals in product(elements, repeat=len(pts)):
        f = dict(zip(pts, vals))
        if all(
            (f[(a, b)], f[(a + 1, b)]) in leq if a < p else True for a, b in pts
        ) and all((f[(a, b)], f[(a, b + 1)]) in leq if b < q else True for a, b in pts):
            n += 1
    return n


class TestCounts:
    @pytest.mark.parametrize("p,q", [(1, 1), (2, 1), (2, 2), (3, 1)])
    def test_poset_nerve_is_monotone_grids(self, p, q):
        C = poset_squares("V", "abc", [("a", "b"), ("a", "c")])
        leq = {("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("a", "c")}
        N = nerve(C, (p, q))
        assert len(N.simplices[(p, q)]) == monotone_grids(leq, "abc", p, q)

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (3, 2)])
    def test_square_group(self, p, q):
        # every grid is fixed by its vertical arrows and its bottom row
        N = nerve(group_squares(2), (p, q))
        assert len(N.simplices[(p, q)]) == 2 ** ((p + 1) * q + p)

    @pytest.mark.parametrize("p,q", [(1, 1), (2, 2), (2, 1)])
    def test_loop_monoid(self, p, q):
        assert len(nerve(monoid_squares(3), (p, q)).simplices[(p, q)]) == 3 ** (p * q)

    def test_horizontal_chains(self):
        N = nerve(horizontal("H(arrow)", *walking_arrow()), (3, 1))
        # length-3 chains: all identities at a or at b, or f at one of three spots
        assert len(N.simplices[(3, 0)]) == 2 + 3


class TestIdentities:
    @pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
    def test_simplicial_identities(self, C):
        assert check_simplicial_identities(nerve(C, (2, 2))).ok

    @pytest.mark.parametrize("C", [C for C in corpus() if C.name not in ("Sq(Z2)", "Omega2(Z3)")], ids=lambda C: C.name)
    def test_identities_at_default_cap(self, C):
        assert check_simplicial_identities(nerve(C, (3, 3))).ok


class TestHorns:
    def test_shapes(self):
        labels = {s.label() for s in inner_horn_shapes((2, 2))}
        assert "(L2_1,D0)" in labels and "(D1,L2_1)" in labels and "(L2_1,L2_1)" in labels
        assert all(s.bidegree[0] >= 2 or s.bidegree[1] >= 2 for s in inner_horn_shapes((3, 3)))

    def test_outer_index_rejected(self):
        with pytest.raises(ValidationError):
            MultiHorn((2, 1), (0, None))

    @pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
    def test_unique_fillers(self, C):
        rep = check_unique_inner_horns(nerve(C, (2, 2)))
        assert rep.ok, rep.to_json()

    def test_lambda21_delta1(self):
        N = nerve(poset_squares("chain3", "abc", [("a", "b"), ("b", "c")]), (2, 1))
        res = {r.shape: r for r in check_unique_inner_horns(N).results}
        r = res["(L2_1,D1)"]
        assert r.ok and r.horns == r.filled_uniquely > 0


class TestMutation:
    @pytest.mark.parametrize("C", SMALL, ids=lambda C: C.name)
    def test_deleting_a_composite_is_detected(self, C):
        N = nerve(C, (2, 2))
        pq, x = composite_candidates(N)[0]
        assert mutation_detected(N, pq, x)

    @settings(max_examples=20)
    @given(st.data())
    def test_any_deleted_composite_breaks_filling(self, data):
        N = nerve(poset_squares("V", "abc", [("a", "b"), ("a", "c")]), (2, 2))
        pq, x = data.draw(st.sampled_from(composite_candidates(N)))
        assert mutation_detected(N, pq, x)

    def test_deletion_removes_cofaces(self):
        N = nerve(horizontal("H(Z2)", *group_category(2)), (2, 1))
        x = N.simplices[(1, 0)][1]
        M = delete_simplex(N, (1, 0), x)
        assert x not in M.simplices[(1, 0)]
        assert all(M.faces[(1, k, (2, 0))][y] != x for y in M.simplices[(2, 0)] for k in range(3))
