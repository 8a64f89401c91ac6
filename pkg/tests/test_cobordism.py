import json
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nfold.cobordism import (
    Boundary,
    CobPresentation,
    Edge,
    burnside_count,
    check_associativity_square,
    check_functor_coherence,
    check_interchange_square,
    compose_cobordisms,
    cylinder,
    disjoint_union,
    disk,
    dw_invariant,
    flat_fields,
    gauge_classes,
    holonomy,
    interval,
    parse_token,
    phi_span,
    seam_diff,
    sphere,
    surface,
    torus,
    torus_subdivided,
)
from nfold.errors import CapacityError, ComposabilityError, ValidationError
from nfold.groups import builtin_group, builtin_groups

from oracles import abelianization_order, burnside, class_count, commuting_pairs, homomorphisms_surface, irrep_degrees, mednykh

S3, Z2, Z3 = builtin_group("S3"), builtin_group("Z2"), builtin_group("Z3")


def brute_flat(M, G):
    return sorted(
        f for f in product(range(G.order), repeat=len(M.edges))
        if all(holonomy(M, G, f, r) == G.identity for r in M.relators)
    )


@st.composite
def presentations(draw):
    nv = draw(st.integers(1, 3))
    ne = draw(st.integers(1, 4))
    edges = [Edge(f"e{i}", draw(st.integers(0, nv - 1)), draw(st.integers(0, nv - 1))) for i in range(ne)]
    rels = []
    # relators: closed walks found by a random walk that returns home
    for _ in range(draw(st.integers(0, 2))):
        start = draw(st.integers(0, nv - 1))
        word, v = [], start
        for _ in range(draw(st.integers(1, 5))):
            options = [(e.id, False, e.dst) for e in edges if e.src == v] + [(e.id, True, e.src) for e in edges if e.dst == v]
            if not options:
                break
            eid, inv, v = draw(st.sampled_from(options))
            word.append((eid, inv))
        if word and v == start:
            rels.append(word)
    return CobPresentation(2, nv, edges, rels)


class TestFlatFields:
    def test_torus_s3(self):
        assert len(flat_fields(torus(), S3)) == 18 == commuting_pairs(range(6), S3.mul)

    @pytest.mark.parametrize("G", builtin_groups(8), ids=lambda G: G.name)
    def test_sphere(self, G):
        assert len(flat_fields(sphere(), G)) == 1

    def test_free(self):
        M = CobPresentation(2, 1, [Edge("a", 0, 0), Edge("b", 0, 0)], [])
        assert len(flat_fields(M, Z2)) == 4

    @settings(max_examples=40, deadline=None)
    @given(presentations(), st.sampled_from(["Z2", "Z3", "S3"]))
    def test_matches_brute_force(self, M, name):
        G = builtin_group(name)
        assert flat_fields(M, G) == brute_flat(M, G)

    def test_capacity(self):
        with pytest.raises(CapacityError):
            flat_fields(surface(3), S3, cap=1000)

    def test_genus_two_z2(self):
        assert len(flat_fields(surface(2), Z2)) == 16 == homomorphisms_surface(range(2), Z2.mul, Z2.inv, 2)


class TestGauge:
    def test_torus_s3_burnside(self):
        M = torus()
        fields = flat_fields(M, S3)
        gc = gauge_classes(M, S3, fields)
        conj = lambda h, f: tuple(S3.mul(S3.mul(h, g), S3.inv(h)) for g in f)  # noqa: E731
        assert len(gc) == burnside(fields, range(6), conj) == burnside_count(M, S3, fields)

    def test_sphere(self):
        assert len(gauge_classes(sphere(), Z2)) == 1

    def test_free_loop_is_conjugacy(self):
        M = CobPresentation(2, 1, [Edge("a", 0, 0)], [])
        assert len(gauge_classes(M, S3)) == 3 == class_count(range(6), S3.mul, S3.inv)

    @settings(max_examples=30, deadline=None)
    @given(presentations(), st.sampled_from(["Z2", "S3"]))
    def test_classes_match_burnside(self, M, name):
        G = builtin_group(name)
        fields = flat_fields(M, G)
        assert len(gauge_classes(M, G, fields)) == burnside_count(M, G, fields)

    @settings(max_examples=30, deadline=None)
    @given(presentations())
    def test_representatives_are_orbit_minima(self, M):
        gc = gauge_classes(M, S3)
        assert all(rep <= f for f, rep in gc.rep.items())


class TestInvariant:
    def test_values(self):
        assert dw_invariant(torus(), S3) == 3
        assert dw_invariant(sphere(), Z2) == Fraction(1, 2)
        assert dw_invariant(surface(2), Z2) == 8

    @pytest.mark.parametrize("G", builtin_groups(8), ids=lambda G: G.name)
    def test_mednykh(self, G):
        degrees = irrep_degrees(G.order, class_count(range(G.order), G.mul, G.inv), abelianization_order(range(G.order), G.mul, G.inv))
        for g in range(4):
            assert dw_invariant(surface(g), G) == mednykh(G.order, degrees, g)

    @pytest.mark.parametrize("G", builtin_groups(8), ids=lambda G: G.name)
    def test_subdivision_invariance(self, G):
        assert dw_invariant(torus(), G) == dw_invariant(torus_subdivided(), G)

    def test_cylinder_and_interval(self):
        for G in (Z2, Z3, S3):
            assert dw_invariant(cylinder(), G) == 1
            assert dw_invariant(interval(), G) == Fraction(1, G.order)


class TestGluing:
    def test_cylinders(self):
        K, _, _ = compose_cobordisms(cylinder(), cylinder(), 1)
        assert K.n_vertices == 3 and len(K.edges) == 5
        for G in (Z2, S3):
            assert dw_invariant(K, G) == dw_invariant(cylinder(), G)

    def test_intervals(self):
        K, _, _ = compose_cobordisms(interval(), interval(), 1)
        assert (K.n_vertices, len(K.edges)) == (3, 2)
        assert dw_invariant(K, S3) == dw_invariant(interval(), S3)

    def test_seam_mismatch(self):
        M = cylinder()
        N = CobPresentation.from_json(json.loads(json.dumps(cylinder().to_json())))
        N.boundaries["1-"] = Boundary([0], [])
        assert seam_diff(M, N, 1)
        with pytest.raises(ComposabilityError, match="seam"):
            compose_cobordisms(M, N, 1)

    def test_dimension_mismatch(self):
        with pytest.raises(ComposabilityError):
            compose_cobordisms(cylinder(), interval(), 1)

    def test_capping_a_cylinder_gives_a_disk(self):
        cap = CobPresentation(2, 1, [Edge("a", 0, 0)], [[("a", False)]], {"1-": Boundary([0], ["a"])})
        K, _, _ = compose_cobordisms(cylinder(), cap, 1)
        for G in (Z2, S3):
            assert dw_invariant(K, G) == dw_invariant(disk(), G) == Fraction(1, G.order)


class TestSpan:
    def test_cylinder_restrictions_onto_classes(self):
        span = phi_span(cylinder(), S3)
        assert span.well_defined
        for key in ("1-", "1+"):
            assert len(span.boundary_classes[key]) == 3
            assert set(span.restrictions[key].values()) == set(span.boundary_classes[key])

    def test_closed(self):
        span = phi_span(torus(), S3)
        assert span.boundary_classes == {} and len(span.classes) == 8

    def test_disjoint_union_is_product(self):
        for G in (Z2, S3):
            U, _, _ = disjoint_union(cylinder(), torus())
            assert len(phi_span(U, G).classes) == len(phi_span(cylinder(), G).classes) * len(phi_span(torus(), G).classes)
            assert dw_invariant(U, G) == dw_invariant(cylinder(), G) * dw_invariant(torus(), G)


class TestFunctorCoherence:
    @pytest.mark.parametrize("G", [Z2, Z3, S3], ids=lambda G: G.name)
    @pytest.mark.parametrize("M", [cylinder, interval], ids=["cylinder", "interval"])
    def test_bijection(self, M, G):
        rep = check_functor_coherence(M(), M(), 1, G)
        assert rep.ok, rep.to_json()

    @pytest.mark.parametrize("G", [Z2, S3], ids=lambda G: G.name)
    def test_associativity_square(self, G):
        assert check_associativity_square(cylinder(), cylinder(), cylinder(), 1, G).ok
        assert check_associativity_square(interval(), interval(), interval(), 1, G).ok

    @pytest.mark.parametrize("G", [Z2, S3], ids=lambda G: G.name)
    def test_interchange_square(self, G):
        assert check_interchange_square(cylinder(), cylinder(), cylinder(), cylinder(), 1, G).ok

    def test_non_bijection_is_reported(self):
        # gluing along a seam that forgets the loop: the composite has more classes than matching pairs
        M = CobPresentation(2, 1, [Edge("a", 0, 0)], [], {"1+": Boundary([0], [])})
        N = CobPresentation(2, 1, [Edge("b", 0, 0)], [], {"1-": Boundary([0], [])})
        rep = check_functor_coherence(M, N, 1, S3)
        assert not rep.ok and rep.witness


class TestValidation:
    def test_token_parsing(self):
        assert parse_token("a") == ("a", False)
        assert parse_token("A") == ("a", True)
        assert parse_token("b2^-1") == ("b2", True)
        with pytest.raises(ValidationError):
            parse_token("a-b")

    def test_uppercase_edge_id(self):
        with pytest.raises(ValidationError):
            CobPresentation(2, 1, [Edge("A", 0, 0)], [])

    def test_open_relator(self):
        with pytest.raises(ValidationError, match="closed loop"):
            CobPresentation(2, 2, [Edge("a", 0, 1)], [[("a", False)]])

    def test_boundary_not_subcomplex(self):
        with pytest.raises(ValidationError, match="sub-complex"):
            CobPresentation(2, 2, [Edge("a", 0, 1)], [], {"1+": Boundary([0], ["a"])})

    def test_boundaries_disjoint(self):
        with pytest.raises(ValidationError, match="intersect"):
            CobPresentation(2, 1, [Edge("a", 0, 0)], [], {"1+": Boundary([0], []), "1-": Boundary([0], [])})

    def test_json_roundtrip(self):
        M = cylinder()
        back = CobPresentation.from_json(json.loads(json.dumps(M.to_json())))
        assert back.to_json() == M.to_json()

    def test_malformed_json(self):
        with pytest.raises(ValidationError):
            CobPresentation.from_json({"dim": 2, "edges": []})
