import pytest
from hypothesis import given, strategies as st

from nfold.diagrams import (
    GluingDiagram,
    Leaf,
    Move,
    MovePath,
    Node,
    applicable_moves,
    apply_move,
    count_trees_of_shape,
    enumerate_trees,
    grid_from_json,
    grid_to_json,
    is_normal_form,
    make_grid,
    normal_form,
    parse_grid,
    tree_from_json,
    tree_to_json,
    validate_tree,
)
from nfold.errors import CapacityError, MoveError, ValidationError

from oracles import catalan, grid_cells, guillotine_count

small_grids = st.lists(st.integers(1, 3), min_size=1, max_size=3).filter(
    lambda e: count_trees_of_shape(tuple(e)) <= 300
)


def L(*c):
    return Leaf(c)


class TestGrid:
    def test_cell_counts(self):
        assert make_grid([2, 2]).n_cells == 4
        assert make_grid([3]).n_cells == 3
        assert make_grid([2, 2, 2]).n_cells == 8

    @pytest.mark.parametrize("bad", [[], [0], [2, -1]])
    def test_rejects_bad_extents(self, bad):
        with pytest.raises(ValidationError):
            make_grid(bad)

    def test_parse(self):
        assert parse_grid("2x3").extents == (2, 3)
        with pytest.raises(ValidationError):
            parse_grid("2xa")

    def test_json_roundtrip(self):
        g = make_grid([2, 3])
        assert grid_from_json(grid_to_json(g)) == g


class TestEnumeration:
    @pytest.mark.parametrize("ext,n", [((3,), 2), ((4,), 5), ((2, 2), 2), ((2, 3), 8), ((2, 2, 2), 12)])
    def test_known_counts(self, ext, n):
        assert len(enumerate_trees(GluingDiagram(ext))) == n

    @pytest.mark.parametrize("n", range(1, 9))
    def test_line_is_catalan(self, n):
        assert len(enumerate_trees(GluingDiagram((n,)))) == catalan(n - 1)

    @given(small_grids)
    def test_matches_cell_set_oracle(self, ext):
        trees = enumerate_trees(GluingDiagram(tuple(ext)))
        assert len(trees) == guillotine_count(grid_cells(ext))
        assert len(set(trees)) == len(trees)

    @given(small_grids)
    def test_every_tree_is_valid(self, ext):
        g = GluingDiagram(tuple(ext))
        assert all(validate_tree(t, g).ok for t in enumerate_trees(g))

    def test_capacity(self):
        with pytest.raises(CapacityError):
            enumerate_trees(GluingDiagram((8,)), max_trees=100)


class TestValidation:
    def test_rows_then_columns(self):
        t = Node(2, Node(1, L(0, 0), L(1, 0)), Node(1, L(0, 1), L(1, 1)))
        assert validate_tree(t, make_grid([2, 2])).ok

    def test_non_adjacent_merge(self):
        t = Node(1, Node(1, L(0), L(2)), L(1))
        assert not validate_tree(t, make_grid([3])).ok

    def test_duplicated_leaf(self):
        t = Node(1, Node(1, L(0), L(1)), L(1))
        assert not validate_tree(t, make_grid([3])).ok


class TestMoves:
    def test_alpha_at_root(self):
        t = Node(1, Node(1, L(0), L(1)), L(2))
        assert applicable_moves(t) == [Move("", "alpha", (1,))]
        assert apply_move(t, applicable_moves(t)[0]) == Node(1, L(0), Node(1, L(1), L(2)))

    def test_forward_beta(self):
        # (a o2 c) o1 (b o2 d) -> (a o1 b) o2 (c o1 d)
        a, b, c, d = L(0, 0), L(1, 0), L(0, 1), L(1, 1)
        t = Node(1, Node(2, a, c), Node(2, b, d))
        moves = applicable_moves(t)
        assert moves == [Move("", "beta", (2, 1))]
        assert apply_move(t, moves[0]) == Node(2, Node(1, a, b), Node(1, c, d))

    def test_normal_form_has_no_moves(self):
        nf = Node(1, L(0), Node(1, L(1), Node(1, L(2), L(3))))
        assert applicable_moves(nf) == []
        assert is_normal_form(nf)

    def test_non_matching_pattern(self):
        with pytest.raises(MoveError):
            apply_move(Node(1, L(0), L(1)), Move("", "alpha", (1,)))

    def test_canonical_beta_orientation(self):
        with pytest.raises(ValidationError):
            Move("", "beta", (1, 2))

    @given(small_grids, st.data())
    def test_inverse_undoes(self, ext, data):
        trees = enumerate_trees(GluingDiagram(tuple(ext)))
        t = data.draw(st.sampled_from(trees))
        for m in applicable_moves(t):
            assert apply_move(apply_move(t, m), m, inverse=True) == t

    @given(small_grids)
    def test_normal_form_is_unique_moveless_tree(self, ext):
        g = GluingDiagram(tuple(ext))
        stuck = [t for t in enumerate_trees(g) if not applicable_moves(t)]
        assert stuck == [normal_form(g)]

    def test_path_inversion(self):
        t = Node(1, Node(1, L(0), L(1)), L(2))
        p = MovePath(t, ((Move("", "alpha", (1,)), False),))
        assert p.inverted().end == t
        assert p.then(p.inverted()).end == t
        with pytest.raises(MoveError):
            p.then(p)


@given(small_grids, st.data())
def test_tree_json_roundtrip(ext, data):
    t = data.draw(st.sampled_from(enumerate_trees(GluingDiagram(tuple(ext)))))
    assert tree_from_json(tree_to_json(t)) == t
