import pytest

from realsnum import oracle
from realsnum.partitions import partitions_of
from realsnum.trees import (
    BLACK, WHITE, PlaneTree, RealBWTree, SpineVertex, enumerate_real_trees,
    marked_plane_tree_count, marked_plane_trees, midline_bijection, signed_sum,
    tree_disorders, tree_side, tree_sign, tree_to_dot, tree_weight, weighted_sum,
)


def buckets(e):
    """Every (lam_b, lam_w) pair that admits a tree with e edges."""
    for lb in {p for k in range(1, e + 1) for p in partitions_of(e, k)}:
        for lw in partitions_of(e, e + 1 - len(lb)):
            yield lb, lw


def all_trees(e):
    for lb, lw in buckets(e):
        yield from enumerate_real_trees(lb, lw)


def test_single_edge():
    trees = enumerate_real_trees((1,), (1,))
    assert len(trees) == 2
    for t in trees:
        # borders differ in colour, so the real part is never a palindrome
        assert tree_sign(t) == 1 and tree_weight(t) == 0
        assert tree_side(t) == t.spine[-1].color
    assert signed_sum((1,), (1,), BLACK) == signed_sum((1,), (1,), WHITE) == 1


def test_twelve_trees_with_four_edges():
    assert sum(1 for _ in all_trees(4)) == 12


def test_fixed_sums():
    lb, lw = (4, 2, 2), (2, 2, 1, 1, 1, 1)
    assert signed_sum(lb, lw, BLACK) == signed_sum(lb, lw, WHITE) == 2


@pytest.mark.parametrize("e", range(1, 8))
def test_engine_matches_brute_force(e):
    forms = oracle.brute_force_tree_forms(e)
    for (lb, lw), expected in forms.items():
        got = {t.canonical_form() for t in enumerate_real_trees(lb, lw)}
        assert got == expected, (lb, lw)
    assert sum(len(v) for v in forms.values()) == sum(1 for _ in all_trees(e))


@pytest.mark.parametrize("e", range(1, 8))
def test_sides_agree(e):
    for lb, lw in buckets(e):
        assert signed_sum(lb, lw, WHITE) == signed_sum(lb, lw, BLACK)


@pytest.mark.parametrize("e", range(1, 8))
def test_weights(e):
    for lb, lw in buckets(e):
        dw, db = weighted_sum(lb, lw, WHITE), weighted_sum(lb, lw, BLACK)
        assert dw == db
        assert signed_sum(lb, lw, WHITE) - signed_sum(lb, lw, BLACK) == dw - db
    if e % 2:
        assert all(tree_weight(t) == 0 for t in all_trees(e))


def test_odd_edge_borders_differ():
    for t in all_trees(5):
        assert t.spine[0].color != t.spine[-1].color


@pytest.mark.parametrize("e", (2, 4, 6))
def test_midline_bijection(e):
    seen = 0
    for t in all_trees(e):
        real = t.real_part()
        if len(t.spine) > 1 and real != real[::-1]:
            continue
        m = midline_bijection(t)
        seen += 1
        assert midline_bijection(m).canonical_form() == t.canonical_form()
        assert (len(t.spine) == 1) != (len(m.spine) == 1)
        assert m.degree_partitions() == t.degree_partitions()
        if tree_side(t) == tree_side(m):
            assert tree_weight(t) + tree_weight(m) == 0
        else:
            assert tree_weight(t) == tree_weight(m) == 1
    assert seen


def test_midline_rejects_odd_and_asymmetric():
    t = enumerate_real_trees((1,), (1,))[0]
    with pytest.raises(ValueError):
        midline_bijection(t)
    asym = next(t for t in all_trees(4) if t.real_part() != t.real_part()[::-1]
                and len(t.spine) > 1)
    with pytest.raises(ValueError):
        midline_bijection(asym)


def _palindromic_by_colour(t):
    real = t.real_part()
    return all(seq == seq[::-1] for seq in
               ([d for c, d in real if c == col] for col in (BLACK, WHITE)))


def test_rotation_keeps_sign_when_colour_sequences_are_palindromes():
    checked = 0
    for e in range(1, 8):
        for t in all_trees(e):
            if t.spine[0].color == t.spine[-1].color or not _palindromic_by_colour(t):
                continue
            checked += 1
            assert tree_sign(t.mirror()) == tree_sign(t)
    assert checked


def test_rotation_can_flip_sign():
    # real part B1 W2 B4 W2 B2 W1: the black degrees 1,4,2 are not a palindrome
    spine = (
        SpineVertex(BLACK, ()),
        SpineVertex(WHITE, ()),
        SpineVertex(BLACK, (PlaneTree(WHITE, ()),)),
        SpineVertex(WHITE, ()),
        SpineVertex(BLACK, ()),
        SpineVertex(WHITE, ()),
    )
    t = RealBWTree(spine)
    assert [d for _, d in t.real_part()] == [1, 2, 4, 2, 2, 1]
    assert tree_sign(t) != tree_sign(t.mirror())


def test_marked_counts():
    assert marked_plane_tree_count((1,), (1,)) == 1
    assert marked_plane_tree_count((2, 1), (2, 1)) == 3
    with pytest.raises(ValueError):
        marked_plane_tree_count((2,), (1,))


@pytest.mark.parametrize("e", range(1, 7))
def test_marked_count_matches_listing(e):
    for lb, lw in buckets(e):
        trees = marked_plane_trees(lb, lw)
        assert len({t.code() for t in trees}) == len(trees) == marked_plane_tree_count(lb, lw)


def test_mirror_is_involution():
    for t in all_trees(5):
        assert t.mirror().mirror() == t


def test_disorders_and_dot():
    t = next(t for t in all_trees(4) if tree_disorders(t))
    dot = tree_to_dot(t, disorders=True, name="x")
    assert dot.startswith("graph x {") and dot.rstrip().endswith("}")
    assert tree_sign(t) == (-1) ** tree_disorders(t)
