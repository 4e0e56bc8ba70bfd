"""Real black-and-white trees.

A real tree is stored by the part lying on the real axis (the *spine*, read
left to right) together with the plane forests growing into the upper
half-plane from each spine vertex.  The lower half-plane is the mirror image
and is never stored, so conjugation invariance holds by construction.

Ordering conventions: the children of a :class:`PlaneTree` and the upper forest
of a spine vertex are both listed left to right as seen with the parent below,
i.e. clockwise starting just after the parent edge (resp. the left real ray).
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .partitions import make_partition

BLACK = "black"
WHITE = "white"


def other(color: str) -> str:
    return WHITE if color == BLACK else BLACK


@dataclass(frozen=True)
class PlaneTree:
    root_color: str
    children: tuple = ()

    @property
    def size(self) -> int:
        """Number of edges."""
        return sum(1 + c.size for c in self.children)

    def code(self) -> str:
        return "(" + "".join(c.code() for c in self.children) + ")"

    def mirror(self) -> "PlaneTree":
        return PlaneTree(self.root_color, tuple(c.mirror() for c in reversed(self.children)))

    def vertex_degrees(self, parent_edge: bool = True) -> Iterator[tuple[str, int]]:
        yield self.root_color, len(self.children) + (1 if parent_edge else 0)
        for c in self.children:
            yield from c.vertex_degrees(True)


@dataclass(frozen=True)
class SpineVertex:
    color: str
    forest: tuple = ()


@dataclass(frozen=True)
class RealBWTree:
    spine: tuple

    def __post_init__(self):
        if not self.spine:
            raise ValueError("a real tree has at least one real vertex")
        for a, b in zip(self.spine, self.spine[1:]):
            if a.color == b.color:
                raise ValueError("spine colors must alternate")
        for v in self.spine:
            for t in v.forest:
                if t.root_color == v.color:
                    raise ValueError("forest root has the color of its spine vertex")
        if len(self.spine) == 1 and not self.spine[0].forest:
            raise ValueError("a real tree needs at least one edge")

    @property
    def edges(self) -> int:
        return len(self.spine) - 1 + 2 * sum(t.size + 1 for v in self.spine for t in v.forest)

    def real_part(self) -> tuple[tuple[str, int], ...]:
        """Colors and degrees of the real vertices, left to right."""
        last = len(self.spine) - 1
        out = []
        for i, v in enumerate(self.spine):
            nbrs = (i > 0) + (i < last)
            out.append((v.color, nbrs + 2 * len(v.forest)))
        return tuple(out)

    def degree_partitions(self) -> tuple[tuple, tuple]:
        """Return ``(black degrees, white degrees)`` as partitions."""
        degs = {BLACK: [], WHITE: []}
        for color, d in self.real_part():
            degs[color].append(d)
        for v in self.spine:
            for t in v.forest:
                for color, d in t.vertex_degrees():
                    degs[color] += [d, d]
        return make_partition(degs[BLACK]), make_partition(degs[WHITE])

    def canonical_form(self) -> str:
        head = "B" if self.spine[0].color == BLACK else "W"
        return head + "|".join("".join(t.code() for t in v.forest) for v in self.spine)

    def mirror(self) -> "RealBWTree":
        """Rotation by 180 degrees (equivalently, reflection in the imaginary axis)."""
        return RealBWTree(tuple(
            SpineVertex(v.color, tuple(t.mirror() for t in reversed(v.forest)))
            for v in reversed(self.spine)))

    def __lt__(self, other):
        return self.canonical_form() < other.canonical_form()


def tree_disorders(tree: RealBWTree) -> int:
    real = tree.real_part()
    return sum(1 for i, (c1, d1) in enumerate(real) for c2, d2 in real[i + 1:]
               if c1 == c2 and d1 > d2)


def tree_sign(tree: RealBWTree) -> int:
    return -1 if tree_disorders(tree) % 2 else 1


def tree_side(tree: RealBWTree) -> str:
    return tree.spine[-1].color


def tree_weight(tree: RealBWTree) -> int:
    real = tree.real_part()
    if real != real[::-1]:
        return 0
    if len(real) == 1:
        return 1
    middle = real[len(real) // 2][0]
    return -1 if middle == real[0][0] else 1


# -- enumeration ---------------------------------------------------------------

def _take(avail: tuple, value: int) -> tuple:
    out = list(avail)
    out.remove(value)
    return tuple(out)


def _preorder(slots: tuple, avail: dict) -> Iterator[tuple]:
    """Yield preorder degree sequences of plane forests.

    ``slots`` lists the colors of the pending subtree roots, leftmost first;
    ``avail`` maps a color to the multiset (sorted tuple) of degrees still to
    place.  A degree counts the parent edge.
    """
    if not slots:
        if not avail[BLACK] and not avail[WHITE]:
            yield ()
        return
    if len(slots) > len(avail[BLACK]) + len(avail[WHITE]):
        return
    color = slots[0]
    for d in sorted(set(avail[color])):
        rest = dict(avail)
        rest[color] = _take(avail[color], d)
        for seq in _preorder((other(color),) * (d - 1) + slots[1:], rest):
            yield (d,) + seq


def _build_forest(root_colors: Sequence[str], seq: Sequence[int]) -> tuple:
    it = iter(seq)

    def node(color):
        d = next(it)
        return PlaneTree(color, tuple(node(other(color)) for _ in range(d - 1)))

    return tuple(node(c) for c in root_colors)


def _halves(rest: tuple):
    counts = Counter(rest)
    if any(m % 2 for m in counts.values()):
        return None
    return make_partition(a for a, m in counts.items() for _ in range(m // 2))


def _spine_assignments(colors, degs: dict):
    """Yield spine degree sequences drawn from ``degs`` with the right parities."""
    last = len(colors) - 1

    def rec(i, avail):
        if i > last:
            yield (), avail
            return
        nbrs = (i > 0) + (i < last)
        color = colors[i]
        for d in sorted(set(avail[color])):
            if d < nbrs or (d - nbrs) % 2 or (last == 0 and d == 0):
                continue
            rest = dict(avail)
            rest[color] = _take(avail[color], d)
            for tail, left in rec(i + 1, rest):
                yield (d,) + tail, left

    yield from rec(0, degs)


def enumerate_real_trees(lam_b: Sequence[int], lam_w: Sequence[int]) -> list[RealBWTree]:
    """All real trees with black degrees ``lam_b`` and white degrees ``lam_w``.

    The result is duplicate free and sorted by canonical form.
    """
    return list(_enumerate_real_trees(make_partition(lam_b), make_partition(lam_w)))


@lru_cache(maxsize=None)
def _enumerate_real_trees(lam_b: tuple, lam_w: tuple) -> tuple:
    if sum(lam_b) != sum(lam_w):
        raise ValueError(f"edge counts differ: {lam_b} vs {lam_w}")
    if sum(lam_b) < 1:
        raise ValueError("trees need at least one edge")
    nverts = len(lam_b) + len(lam_w)
    if nverts != sum(lam_b) + 1:
        return ()
    out = []
    for length in range(1, nverts + 1):
        for first in (BLACK, WHITE):
            colors = [first if i % 2 == 0 else other(first) for i in range(length)]
            if colors.count(BLACK) > len(lam_b) or colors.count(WHITE) > len(lam_w):
                continue
            for spine_degs, left in _spine_assignments(colors, {BLACK: lam_b, WHITE: lam_w}):
                upper = {c: _halves(left[c]) for c in (BLACK, WHITE)}
                if upper[BLACK] is None or upper[WHITE] is None:
                    continue
                counts = [(d - (i > 0) - (i < length - 1)) // 2 for i, d in enumerate(spine_degs)]
                roots = [other(c) for c, r in zip(colors, counts) for _ in range(r)]
                for seq in _preorder(tuple(roots), upper):
                    forest = _build_forest(roots, seq)
                    spine, pos = [], 0
                    for c, r in zip(colors, counts):
                        spine.append(SpineVertex(c, forest[pos:pos + r]))
                        pos += r
                    out.append(RealBWTree(tuple(spine)))
    out.sort(key=RealBWTree.canonical_form)
    return tuple(out)


@lru_cache(maxsize=None)
def _signed_sums(lam_b: tuple, lam_w: tuple) -> dict:
    sums = {BLACK: 0, WHITE: 0}
    for t in _enumerate_real_trees(lam_b, lam_w):
        sums[tree_side(t)] += tree_sign(t)
    return sums


def signed_sum(lam_b: Sequence[int], lam_w: Sequence[int], side: str) -> int:
    if side not in (BLACK, WHITE):
        raise ValueError(f"side must be {BLACK!r} or {WHITE!r}")
    return _signed_sums(make_partition(lam_b), make_partition(lam_w))[side]


def weighted_sum(lam_b: Sequence[int], lam_w: Sequence[int], side: str) -> int:
    return sum(tree_weight(t) for t in enumerate_real_trees(lam_b, lam_w) if tree_side(t) == side)


def marked_plane_trees(n_b: Sequence[int], n_w: Sequence[int]) -> list[PlaneTree]:
    """Plane trees with one marked white half-edge.

    Each class is returned as a tree rooted at the white end of the mark, whose
    children are *all* its neighbours listed clockwise starting at the marked
    edge; a mark-preserving isomorphism class has exactly one such form.
    """
    n_b, n_w = make_partition(n_b), make_partition(n_w)
    if sum(n_b) != sum(n_w):
        raise ValueError(f"edge counts differ: {n_b} vs {n_w}")
    out = []
    for d in sorted(set(n_w)):
        avail = {BLACK: n_b, WHITE: _take(n_w, d)}
        for seq in _preorder((BLACK,) * d, avail):
            out.append(PlaneTree(WHITE, _build_forest((BLACK,) * d, seq)))
    return out


@lru_cache(maxsize=None)
def _count_forests(slots: tuple, avail_b: tuple, avail_w: tuple) -> int:
    if not slots:
        return int(not avail_b and not avail_w)
    if len(slots) > len(avail_b) + len(avail_w):
        return 0
    color = slots[0]
    pool = avail_b if color == BLACK else avail_w
    total = 0
    for d in set(pool):
        rest = _take(pool, d)
        nb, nw = (rest, avail_w) if color == BLACK else (avail_b, rest)
        total += _count_forests((other(color),) * (d - 1) + slots[1:], nb, nw)
    return total


def marked_plane_tree_count(n_b: Sequence[int], n_w: Sequence[int]) -> int:
    n_b, n_w = make_partition(n_b), make_partition(n_w)
    if sum(n_b) != sum(n_w):
        raise ValueError(f"edge counts differ: {n_b} vs {n_w}")
    return sum(_count_forests((BLACK,) * d, n_b, _take(n_w, d)) for d in set(n_w))


# -- the midline cut-and-paste ---------------------------------------------------

def _split_along_midline(branch: PlaneTree):
    """Walk the midline of ``branch``; return the path as (color, left, right) triples.

    ``left``/``right`` are the children on each side of the midline at that
    vertex (left to right as seen from the parent).
    """
    path = []
    node = branch
    while True:
        ch = node.children
        if len(ch) % 2:
            mid = len(ch) // 2
            path.append((node.root_color, ch[:mid], ch[mid + 1:]))
            node = ch[mid]
        else:
            mid = len(ch) // 2
            path.append((node.root_color, ch[:mid], ch[mid:]))
            return path


def _glue_midline(left_path, right_path) -> PlaneTree:
    node = None
    for (color, left), (_, right) in zip(reversed(left_path), reversed(right_path)):
        middle = () if node is None else (node,)
        node = PlaneTree(color, tuple(left) + middle + tuple(right))
    return node


def midline_bijection(tree: RealBWTree) -> RealBWTree:
    """Cut-and-paste exchanging one-real-vertex trees and palindromic ones.

    A tree with a single real vertex has its rightmost upper branch (and the
    mirror branch below) cut along the midline; the halves facing the positive
    axis are reassembled along the positive axis and the other halves along the
    negative axis.  Applied to a palindromic tree the inverse recipe is used, so
    the map is an involution.
    """
    if tree.edges % 2:
        raise ValueError("midline bijection needs an even number of edges")
    spine = tree.spine
    if len(spine) == 1:
        v = spine[0]
        branch = v.forest[-1]
        path = _split_along_midline(branch)
        right = [SpineVertex(color, tuple(t.mirror() for t in reversed(r))) for color, _, r in path]
        left = [SpineVertex(color, tuple(t.mirror() for t in reversed(lft))) for color, lft, _ in path]
        centre = SpineVertex(v.color, v.forest[:-1])
        return RealBWTree(tuple(reversed(left)) + (centre,) + tuple(right))
    real = tree.real_part()
    if real != real[::-1]:
        raise ValueError("midline bijection needs a palindromic real part sequence")
    half_len = len(spine) // 2
    centre = spine[half_len]
    right = spine[half_len + 1:]
    left = list(reversed(spine[:half_len]))
    right_path = [(v.color, tuple(t.mirror() for t in reversed(v.forest))) for v in right]
    left_path = [(v.color, tuple(t.mirror() for t in reversed(v.forest))) for v in left]
    branch = _glue_midline(left_path, right_path)
    return RealBWTree((SpineVertex(centre.color, centre.forest + (branch,)),))


# -- DOT export ------------------------------------------------------------------

def tree_to_dot(tree: RealBWTree, disorders: bool = False, name: str = "tree") -> str:
    lines = [f"graph {name} {{", "  node [shape=circle, style=filled, label=\"\"];"]
    fill = {BLACK: "black", WHITE: "white"}
    counter = [0]

    def new(color):
        counter[0] += 1
        ident = f"v{counter[0]}"
        lines.append(f"  {ident} [fillcolor={fill[color]}];")
        return ident

    spine_ids = [new(v.color) for v in tree.spine]
    lines.append("  { rank=same; " + " ".join(spine_ids) + " }")
    for a, b in zip(spine_ids, spine_ids[1:]):
        lines.append(f"  {a} -- {b} [weight=10];")

    def hang(parent, t):
        ident = new(t.root_color)
        lines.append(f"  {ident} -- {parent};")
        for c in t.children:
            hang(ident, c)

    for ident, v in zip(spine_ids, tree.spine):
        for t in v.forest:
            hang(ident, t)
    if disorders:
        real = tree.real_part()
        for i, (c1, d1) in enumerate(real):
            for j in range(i + 1, len(real)):
                c2, d2 = real[j]
                if c1 == c2 and d1 > d2:
                    lines.append(f"  {spine_ids[i]} -- {spine_ids[j]} "
                                 "[color=green, style=dashed, constraint=false];")
    lines.append("}")
    return "\n".join(lines) + "\n"
