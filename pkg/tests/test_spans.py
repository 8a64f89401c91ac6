import random

import pytest
from hypothesis import given, settings, strategies as st

from nfold.diagrams import GluingDiagram, Leaf, Move, MovePath, Node, enumerate_trees
from nfold.errors import ComposabilityError, ValidationError
from nfold.spans import (
    SHAPES,
    FiniteSpan,
    FormalUnit,
    TensorUnit,
    associator,
    check_braiding,
    check_pseudo_axioms,
    check_tensor_interchange,
    compose_cospans,
    compose_spans,
    evaluate_path,
    evaluate_tree,
    identity_instance,
    instance_from_json,
    instance_to_json,
    interchanger,
    random_instance,
    same_morphism,
    simple_cospan,
    simple_span,
    singleton_faces_instance,
    span_from_json,
    span_to_json,
    tensor,
    unit,
)

from instances import left_leg, random_cospan_pair, random_span_pair, right_leg
from oracles import pullback_size, pushout_size


class TestPullback:
    def test_worked_example(self):
        x = simple_span(["s"], "xy", "01", {"x": "s", "y": "s"}, {"x": "0", "y": "1"})
        y = simple_span("01", "pqr", ["t"], {"p": "0", "q": "0", "r": "1"}, {c: "t" for c in "pqr"})
        xy = compose_spans(x, y, 1)
        assert xy.core == {("x", "p"), ("x", "q"), ("y", "r")}
        xy.validate()

    def test_empty_fibres(self):
        x = simple_span(["s"], "x", "01", {"x": "s"}, {"x": "0"})
        y = simple_span("01", "p", ["t"], {"p": "1"}, {"p": "t"})
        assert compose_spans(x, y, 1).core == frozenset()

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_pair_enumeration(self, seed):
        x, y = random_span_pair(random.Random(seed))
        expected = pullback_size(x.core, right_leg(x), y.core, left_leg(y))
        assert len(compose_spans(x, y, 1).core) == expected

    def test_face_mismatch(self):
        x = simple_span("a", "x", "b", {"x": "a"}, {"x": "b"})
        y = simple_span("c", "y", "d", {"y": "c"}, {"y": "d"})
        with pytest.raises(ComposabilityError):
            compose_spans(x, y, 1)

    def test_singleton_faces_grid(self):
        # 2x2 cells, each core of size 2, every lower face a point: 2**4 pairs
        inst = singleton_faces_instance(GluingDiagram((2, 2)), core_size=2)
        for t in enumerate_trees(inst.grid):
            assert len(evaluate_tree(inst, t).core) == 16


class TestPushout:
    def test_worked_example(self):
        x = simple_cospan([], "xy", ["*"], {}, {"*": "x"})
        y = simple_cospan(["*"], "pq", [], {"*": "p"}, {})
        assert len(compose_cospans(x, y, 1).core) == 3

    def test_empty_seam_is_disjoint_union(self):
        x = simple_cospan([], "xy", [], {}, {})
        y = simple_cospan([], "pqr", [], {}, {})
        assert len(compose_cospans(x, y, 1).core) == 5

    def test_identity_gluing(self):
        A = "uvw"
        x = simple_cospan(A, A, A, {a: a for a in A}, {a: a for a in A})
        assert len(compose_cospans(x, x, 1).core) == 3

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_components(self, seed):
        x, y, shared = random_cospan_pair(random.Random(seed))
        expected = pushout_size(x.core, right_leg(x), y.core, left_leg(y), shared)
        xy = compose_cospans(x, y, 1)
        assert len(xy.core) == expected
        xy.validate()

    def test_kind_mismatch(self):
        x = simple_cospan([], "x", [], {}, {})
        y = simple_span([], [], [], {}, {})
        with pytest.raises(ComposabilityError):
            compose_cospans(x, y, 1)


class TestUnits:
    def test_unit_absorbs(self):
        x = simple_span("a", "xy", "b", {"x": "a", "y": "a"}, {"x": "b", "y": "b"})
        assert compose_spans(unit(x.source(1), {1}), x, 1) is x
        assert compose_spans(x, unit(x.target(1), {1}), 1) is x

    def test_nested_units_flatten(self):
        inst = identity_instance(GluingDiagram((1, 1)))
        face = inst.cells[(0, 0)].source(1).source(2)
        u = FormalUnit(FormalUnit(face, {1}), {2})
        assert u.unit_dirs == {1, 2} and u.base is face

    def test_unit_faces(self):
        x = random_instance(GluingDiagram((1, 1)), 0).cells[(0, 0)]
        u = unit(x.source(1), {1})
        assert same_morphism(u.source(1), x.source(1)) and same_morphism(u.target(1), x.source(1))

    def test_unit_with_concrete_in_other_direction(self):
        x = identity_instance(GluingDiagram((1, 1))).cells[(0, 0)]
        u = unit(x.source(2), {2})
        with pytest.raises(ComposabilityError):
            compose_spans(u, x, 1)

    def test_tensor_unit(self):
        x = simple_span("a", "x", "b", {"x": "a"}, {"x": "b"})
        assert tensor(TensorUnit(), x) is x and tensor(x, TensorUnit()) is x


class TestRebracketing:
    def test_associator_elementwise(self):
        assert associator((("a", "b"), "c")) == ("a", ("b", "c"))
        assert associator(("a", ("b", "c")), inverse=True) == (("a", "b"), "c")

    def test_interchanger_elementwise(self):
        assert interchanger((("a", "b"), ("c", "d"))) == (("a", "c"), ("b", "d"))

    def test_empty_path_is_identity(self):
        inst = random_instance(GluingDiagram((2, 2)), 1)
        t = enumerate_trees(inst.grid)[0]
        f = evaluate_path(inst, MovePath(t))
        assert all(k == v for k, v in f.items())

    def test_single_alpha(self):
        inst = random_instance(GluingDiagram((3,)), 2)
        t = Node(1, Node(1, Leaf((0,)), Leaf((1,))), Leaf((2,)))
        f = evaluate_path(inst, MovePath(t, ((Move("", "alpha", (1,)), False),)))
        assert f and all(v == associator(k) for k, v in f.items())

    def test_single_beta(self):
        inst = random_instance(GluingDiagram((2, 2)), 3)
        a, b, c, d = (Leaf(x) for x in ((0, 0), (1, 0), (0, 1), (1, 1)))
        t = Node(1, Node(2, a, c), Node(2, b, d))
        f = evaluate_path(inst, MovePath(t, ((Move("", "beta", (2, 1)), False),)))
        assert f and all(v == interchanger(k) for k, v in f.items())

    @settings(max_examples=15)
    @given(st.sampled_from([(2, 2), (2, 3), (4,), (2, 2, 2)]), st.integers(0, 10**6), st.data())
    def test_parallel_trees_equinumerous(self, ext, seed, data):
        inst = random_instance(GluingDiagram(ext), seed, core_size=2)
        trees = enumerate_trees(inst.grid)
        t1, t2 = data.draw(st.sampled_from(trees)), data.draw(st.sampled_from(trees))
        assert len(evaluate_tree(inst, t1).core) == len(evaluate_tree(inst, t2).core)


class TestAxioms:
    @pytest.mark.parametrize("shape", sorted(SHAPES))
    @pytest.mark.parametrize("seed", range(5))
    def test_cells_commute_pointwise(self, shape, seed):
        extents, tag = SHAPES[shape]
        rep = check_pseudo_axioms(random_instance(GluingDiagram(extents), seed, core_size=3))
        assert rep.ok, rep.failures
        assert rep.checked[tag] >= 1

    def test_identity_instance(self):
        rep = check_pseudo_axioms(identity_instance(GluingDiagram((2, 3)), size=2))
        assert rep.ok

    def test_detects_a_wrong_rebracketing(self, monkeypatch):
        import nfold.spans as spans

        real = spans._rebracket
        monkeypatch.setattr(spans, "_rebracket", lambda e, p, k, i: e if k == "beta" else real(e, p, k, i))
        inst = random_instance(GluingDiagram((2, 2, 2)), 0, core_size=2)
        with pytest.raises(spans.PathEvaluationError):
            check_pseudo_axioms(inst)


class TestTensor:
    @pytest.mark.parametrize("seed", range(10))
    def test_braiding_squares_to_identity(self, seed):
        rng = random.Random(seed)
        x = random_instance(GluingDiagram((1, 1)), rng.randrange(10**6)).cells[(0, 0)]
        y = random_instance(GluingDiagram((1, 1)), rng.randrange(10**6)).cells[(0, 0)]
        rep = check_braiding(x, y)
        assert rep.ok and rep.core_size == len(x.core) * len(y.core)

    def test_interchange_with_composition(self):
        rng = random.Random(5)
        x, x2 = random_span_pair(rng)
        y, y2 = random_span_pair(rng)
        assert check_tensor_interchange(x, x2, y, y2, 1)


class TestJson:
    def test_span_roundtrip(self):
        x = random_instance(GluingDiagram((1, 1)), 4).cells[(0, 0)]
        assert same_morphism(span_from_json(span_to_json(x)), x)

    def test_instance_roundtrip(self):
        inst = random_instance(GluingDiagram((2, 2)), 4)
        back = instance_from_json(instance_to_json(inst))
        assert all(same_morphism(back.cells[c], inst.cells[c]) for c in inst.grid.cells())

    def test_rejects_non_commuting_square(self):
        data = span_to_json(identity_instance(GluingDiagram((1, 1)), size=2).cells[(0, 0)])
        m = next(m for m in data["maps"] if m["face"] == [None, None] and m["axis"] == 0)
        m["pairs"] = [[k, v] for (k, _), (_, v) in zip(m["pairs"], reversed(m["pairs"]))]
        with pytest.raises(ValidationError):
            span_from_json(data)


def test_random_instance_is_deterministic():
    a = random_instance(GluingDiagram((2, 3)), 11)
    b = random_instance(GluingDiagram((2, 3)), 11)
    assert all(same_morphism(a.cells[c], b.cells[c]) for c in a.grid.cells())
    assert isinstance(a.cells[(0, 0)], FiniteSpan)
