"""Brute-force references used to validate the structured engines."""

from __future__ import annotations

import logging
from collections import defaultdict
from itertools import product
from math import comb

from .dessins import Dessin, canonical_code, validate
from .partitions import TypeList, make_partition
from .trees import BLACK, WHITE, PlaneTree, RealBWTree, SpineVertex, other

log = logging.getLogger(__name__)

DESSIN_CAP = 5
TREE_CAP = 8


def euler_numbers(upto: int) -> list[int]:
    """Alternating permutation counts for lengths ``0..upto`` (Seidel triangle)."""
    if upto < 0:
        return []
    out = [1]
    row = [1]
    for i in range(1, upto + 1):
        new = [0]
        src = row[::-1]
        for x in src:
            new.append(new[-1] + x)
        row = new
        out.append(row[-1])
    return out


def alternating_with_maxima(m: int, p: int) -> int:
    if m < 0 or p < 0:
        raise ValueError("m and p must be non-negative")
    maxima = (m - 1) // 2 if m % 2 else m // 2
    return euler_numbers(m)[m] * comb(maxima, p)


def tangent_sequence(upto: int) -> list[int]:
    """Signed egf coefficients of tanh."""
    e = euler_numbers(upto)
    return [0 if m % 2 == 0 else (-1) ** ((m - 1) // 2) * e[m] for m in range(upto + 1)]


def secant_sequence(upto: int) -> list[int]:
    """Signed egf coefficients of sech."""
    e = euler_numbers(upto)
    return [0 if m % 2 else (-1) ** (m // 2) * e[m] for m in range(upto + 1)]


# -- dessins ----------------------------------------------------------------------

def _involutions(n: int):
    def rec(rest):
        if not rest:
            yield {}
            return
        a, tail = rest[0], rest[1:]
        for sub in rec(tail):
            sub = dict(sub)
            sub[a] = a
            yield sub
        for i, b in enumerate(tail):
            for sub in rec(tail[:i] + tail[i + 1:]):
                sub = dict(sub)
                sub[a], sub[b] = b, a
                yield sub
    for inv in rec(list(range(n))):
        yield tuple(inv[i] for i in range(n))


def _cycle_type(perm) -> tuple:
    seen = [False] * len(perm)
    out = []
    for i in range(len(perm)):
        if not seen[i]:
            c = 0
            while not seen[i]:
                seen[i] = True
                i = perm[i]
                c += 1
            out.append(c)
    return make_partition(out)


def _check_cap(value: int, cap: int, default: int, what: str):
    if value > cap:
        raise ValueError(f"{what} {value} exceeds the brute-force cap {cap}")
    if cap > default:
        log.warning("brute-force cap raised to %d; this may take very long", cap)


def brute_force_dessins(types: TypeList, n_cap: int = DESSIN_CAP) -> list[Dessin]:
    """Search every gluing of ``2n`` labelled ``(k+1)``-gons, keep valid increasing ones.

    Each involution tuple and each choice of root edge is turned into an
    explicit rotation system, checked against the full axiom list and
    deduplicated by canonical code.
    """
    n, k = types.degree, types.k
    _check_cap(n, n_cap, DESSIN_CAP, "degree")
    invs = list(_involutions(n))
    found = {}

    def rec(prefix):
        j = len(prefix)
        if j == k + 1:
            for root in range(n):
                if prefix[-1][root] != root:
                    continue
                d = Dessin.from_involutions(prefix, root)
                if validate(d, types):
                    continue
                found.setdefault(canonical_code(d, check=False), d)
            return
        for r in invs:
            if j >= 1 and _cycle_type([r[prefix[-1][s]] for s in range(n)]) != types.entries[j - 1]:
                continue
            rec(prefix + [r])

    rec([])
    return [found[c] for c in sorted(found)]


# -- trees -------------------------------------------------------------------------

def _dyck_words(half: int):
    def rec(word, opened, closed):
        if closed == half:
            yield word
            return
        if opened < half:
            yield from rec(word + "(", opened + 1, closed)
        if closed < opened:
            yield from rec(word + ")", opened, closed + 1)
    yield from rec("", 0, 0)


def _forest_from_word(word: str, parent_color: str) -> tuple:
    """Children of a vertex whose rooted plane tree has the given bracket word."""
    stack = [[]]
    colors = [parent_color]
    for ch in word:
        if ch == "(":
            stack.append([])
            colors.append(other(colors[-1]))
        else:
            kids = stack.pop()
            color = colors.pop()
            stack[-1].append(PlaneTree(color, tuple(kids)))
    return tuple(stack[0])


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def brute_force_tree_forms(e: int, cap: int = TREE_CAP) -> dict:
    """Map ``(lam_b, lam_w)`` to the set of canonical forms of real trees with ``e`` edges."""
    _check_cap(e, cap, TREE_CAP, "edge count")
    buckets = defaultdict(set)
    for length in range(1, e + 2):
        if (e - length + 1) % 2:
            continue
        upper = (e - length + 1) // 2
        for first in (BLACK, WHITE):
            colors = [first if i % 2 == 0 else other(first) for i in range(length)]
            for comp in _compositions(upper, length):
                words = [list(_dyck_words(c)) for c in comp]
                for choice in product(*words):
                    spine = tuple(SpineVertex(c, _forest_from_word(w, c))
                                  for c, w in zip(colors, choice))
                    try:
                        tree = RealBWTree(spine)
                    except ValueError:
                        continue
                    buckets[tree.degree_partitions()].add(tree.canonical_form())
    return dict(buckets)


def brute_force_trees(e: int, cap: int = TREE_CAP) -> dict:
    """Tree counts per ``(lam_b, lam_w)`` bucket."""
    return {key: len(v) for key, v in brute_force_tree_forms(e, cap).items()}
