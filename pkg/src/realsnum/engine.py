"""Enumeration and signed counting of increasing real polynomial dessins.

Internally a dessin of degree ``n`` with ``k`` labels is a tuple of
involutions ``rhos = (rho_0, ..., rho_k)`` on the ``n`` upper faces (see
:meth:`realsnum.dessins.Dessin.from_involutions`), rooted at face ``0``.  The
vertices labelled ``j`` are the cycles of ``sigma_j = rho_j o rho_{j-1}``, and
the vertex at infinity is the ``n``-cycle ``rho_0 o rho_k``.

Dessins are built by insertion: dropping ``rho_{k-1}`` merges the last two
labels and leaves a dessin of the contracted type ``(L_1, ..., L_{k-2}, M)``.
Conversely, a new ``rho_{k-1}`` is determined by a conj-equivariant choice, on
every cycle ``C`` of ``sigma' = rho_k o rho_{k-2}``, of a noncrossing refinement
of ``C`` (the black vertices of the inserted tree); the white vertices are the
cycles of the complement ``sigma' o tau^{-1}``.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations, permutations
from typing import Iterator, Sequence

from . import trees
from .dessins import Dessin, INF, canonical_code, disorders, validate
from .partitions import TypeList, make_partition, partitions_of

log = logging.getLogger(__name__)

ROOT = 0


# -- small permutation helpers -------------------------------------------------

def _cycle_ids(perm: Sequence[int]) -> tuple[list[int], list[list[int]]]:
    cid = [-1] * len(perm)
    cycs = []
    for s in range(len(perm)):
        if cid[s] < 0:
            cyc = []
            t = s
            while cid[t] < 0:
                cid[t] = len(cycs)
                cyc.append(t)
                t = perm[t]
            cycs.append(cyc)
    return cid, cycs


def _sub(counter: Counter, parts: Sequence[int]) -> Counter | None:
    """``counter - parts`` as multisets, or ``None`` if ``parts`` is not contained."""
    out = counter.copy()
    for p in parts:
        if out[p] <= 0:
            return None
        out[p] -= 1
    return out


def _halved(counter: Counter) -> Counter:
    return Counter({p: c // 2 for p, c in counter.items() if c >= 2})


def star_rhos(n: int) -> tuple:
    return (tuple((-s - 1) % n for s in range(n)), tuple((-s) % n for s in range(n)))


# -- the real circle in face coordinates -----------------------------------------

def real_profile(rhos: Sequence[Sequence[int]], root: int = ROOT) -> list[tuple[int, int, int]]:
    """``(label, half-degree, cycle id)`` of the finite real vertices, left to right.

    The cycle id indexes the cycles of ``sigma_label`` as numbered by
    :func:`_cycle_ids`.
    """
    K = len(rhos)
    k = K - 1
    n = len(rhos[0])
    cid = [None] * K
    csize = [None] * K
    for j in range(1, K):
        rj, rp = rhos[j], rhos[j - 1]
        ids, cycs = _cycle_ids([rj[rp[s]] for s in range(n)])
        cid[j] = ids
        csize[j] = [len(c) for c in cycs]

    # real darts per vertex; a dart is (is_tail, j, s), vertices are (label, cycle)
    real_at: dict = {}
    for j in range(K):
        rj = rhos[j]
        for s in range(n):
            if rj[s] == s:
                tail_v = (j, cid[j][s]) if j else INF
                head_v = (j + 1, cid[j + 1][s]) if j < k else INF
                real_at.setdefault(tail_v, []).append((True, j, s))
                real_at.setdefault(head_v, []).append((False, j, s))

    arrive = (False, k, root)
    a, b = real_at[INF]
    d = b if a == arrive else a
    out = []
    while True:
        is_tail, j, s = d
        if is_tail:
            if j == k:
                break
            d_in, v = (False, j, s), (j + 1, cid[j + 1][s])
        else:
            if j == 0:
                break
            d_in, v = (True, j, s), (j, cid[j][s])
        out.append((v[0], csize[v[0]][v[1]], v[1]))
        a, b = real_at[v]
        d = b if a == d_in else a
    return out


def sign_of(rhos: Sequence[Sequence[int]], root: int = ROOT) -> int:
    prof = real_profile(rhos, root)
    return -1 if disorders([(lab, deg) for lab, deg, _ in prof]) % 2 else 1


# -- insertion -----------------------------------------------------------------

def _nc_partitions(positions: list, avail: Counter) -> Iterator[list]:
    """Noncrossing partitions of ``positions`` with block sizes drawn from ``avail``.

    ``avail`` is updated in place while a partition is being yielded.
    """
    if not positions:
        yield []
        return
    first, rest = positions[0], positions[1:]
    for size in sorted(avail):
        if avail[size] <= 0 or size > len(positions):
            continue
        avail[size] -= 1
        for picked in combinations(range(len(rest)), size - 1):
            block = [first] + [rest[i] for i in picked]
            bounds = [-1, *picked, len(rest)]
            gaps = [rest[bounds[i] + 1:bounds[i + 1]] for i in range(len(bounds) - 1)]
            for tail in _nc_product(gaps, avail):
                yield [block] + tail
        avail[size] += 1


def _nc_product(gaps: list, avail: Counter) -> Iterator[list]:
    if not gaps:
        yield []
        return
    for head in _nc_partitions(gaps[0], avail):
        for tail in _nc_product(gaps[1:], avail):
            yield head + tail


@dataclass
class Orbit:
    """A conj-orbit of special vertices of a contracted dessin.

    ``cycle`` is a cycle of ``sigma'``; ``partner`` is its conjugate (equal to
    ``cycle`` for a real special vertex).  ``options`` maps an enhancement
    ``(n_b, n_w)`` (partitions of the cycle length) to the list of insertions
    realizing it, each a list of ``(face, rho_{k-1}(face))`` assignments.
    """

    real: bool
    cycle: int
    partner: int
    size: int
    options: dict = field(default_factory=dict)


def special_orbits(base: Sequence[Sequence[int]]) -> tuple[list[int], list[list[int]], list[Orbit]]:
    """Cycles of ``sigma'`` of a contracted tuple grouped into conj-orbits."""
    a, b = base[-2], base[-1]
    n = len(a)
    cid, cycs = _cycle_ids([b[a[s]] for s in range(n)])
    orbits = []
    seen = set()
    for ci, cyc in enumerate(cycs):
        if ci in seen:
            continue
        cj = cid[a[cyc[0]]]
        seen.update((ci, cj))
        orbits.append(Orbit(ci == cj, ci, cj, len(cyc)))
    return cid, cycs, orbits


@lru_cache(maxsize=None)
def cycle_patterns(m: int, avail_b: tuple, cap_w: tuple) -> tuple:
    """Noncrossing refinements of the cycle ``0 -> 1 -> ... -> m-1 -> 0``.

    Returns ``(tau, black, white)`` triples: ``tau`` is the refining
    permutation (each block rotated forward), ``black`` its cycle type and
    ``white`` the cycle type of the complement ``p -> tau^{-1}(p) + 1``.
    Block sizes are drawn from ``avail_b`` and the complement must fit in
    ``cap_w`` (both given as sorted ``(part, count)`` items).
    """
    cap = Counter(dict(cap_w))
    out = []
    for blocks in _nc_partitions(list(range(m)), Counter(dict(avail_b))):
        tau = [0] * m
        for blk in blocks:
            for i, p in enumerate(blk):
                tau[p] = blk[(i + 1) % len(blk)]
        tinv = [0] * m
        for p, q in enumerate(tau):
            tinv[q] = p
        white = []
        seen = [False] * m
        for z in range(m):
            if seen[z]:
                continue
            length = 0
            t = z
            while not seen[t]:
                seen[t] = True
                length += 1
                t = (tinv[t] + 1) % m
            white.append(length)
        if _sub(cap, white) is None:
            continue
        out.append((tuple(tau), make_partition(len(b) for b in blocks), make_partition(white)))
    return tuple(out)


def _items(counter: Counter) -> tuple:
    return tuple(sorted((p, c) for p, c in counter.items() if c > 0))


def insertion_options(base: Sequence[Sequence[int]], lam_b: Sequence[int],
                      lam_w: Sequence[int]) -> list[Orbit]:
    a = base[-2]
    _, cycs, orbits = special_orbits(base)
    full_b, full_w = Counter(lam_b), Counter(lam_w)
    real_key = (_items(full_b), _items(full_w))
    pair_key = (_items(_halved(full_b)), _items(_halved(full_w)))
    for orb in orbits:
        cyc = cycs[orb.cycle]
        m = len(cyc)
        patterns = cycle_patterns(m, *(real_key if orb.real else pair_key))
        for tau_rel, black, white in patterns:
            tau = {cyc[p]: cyc[q] for p, q in enumerate(tau_rel)}
            if orb.real:
                x = {y: tau[a[y]] for y in cyc}
                if any(x[x[y]] != y for y in cyc):
                    continue
                assign = list(x.items())
            else:
                assign = []
                for y in cycs[orb.partner]:
                    z = tau[a[y]]
                    assign.append((y, z))
                    assign.append((z, y))
                black, white = make_partition(black * 2), make_partition(white * 2)
            orb.options.setdefault((black, white), []).append(assign)
    return orbits


def _combine(orbits: list[Orbit], rem_b: Counter, rem_w: Counter, i: int = 0):
    """Yield one key per orbit so that the parts exhaust ``rem_b`` and ``rem_w``."""
    if i == len(orbits):
        if not +rem_b and not +rem_w:
            yield []
        return
    for key in orbits[i].options:
        nb = _sub(rem_b, key[0])
        if nb is None:
            continue
        nw = _sub(rem_w, key[1])
        if nw is None:
            continue
        for rest in _combine(orbits, nb, nw, i + 1):
            yield [key] + rest


def insert(base: Sequence[Sequence[int]], lam_b: Sequence[int], lam_w: Sequence[int]) -> Iterator[tuple]:
    """All dessins whose contraction is ``base`` and whose last two types are ``lam_b, lam_w``."""
    orbits = insertion_options(base, lam_b, lam_w)
    n = len(base[0])
    head, last = tuple(base[:-1]), base[-1]
    for keys in _combine(orbits, Counter(lam_b), Counter(lam_w)):
        x = [0] * n
        yield from _expand(orbits, keys, 0, x, head, last)


def _expand(orbits, keys, i, x, head, last):
    if i == len(orbits):
        yield head + (tuple(x), last)
        return
    for assign in orbits[i].options[keys[i]]:
        for y, z in assign:
            x[y] = z
        yield from _expand(orbits, keys, i + 1, x, head, last)


def merged_types(n: int, lam_b: Sequence[int], lam_w: Sequence[int]) -> list[tuple]:
    length = len(lam_b) + len(lam_w) - n
    if length <= 0:
        return []
    return list(partitions_of(n, length))


def enumerate_rhos(entries: Sequence[Sequence[int]], n: int) -> Iterator[tuple]:
    """Face data of all increasing dessins of type ``entries`` (rooted at face 0)."""
    entries = tuple(make_partition(e) for e in entries)
    k = len(entries)
    if k == 0:
        if n == 1:
            yield ((0,),)
        return
    if k == 1:
        if entries[0] == (n,):
            yield star_rhos(n)
        return
    lam_b, lam_w = entries[-2], entries[-1]
    for merged in merged_types(n, lam_b, lam_w):
        for base in contracted_rhos(entries[:-2] + (merged,), n):
            yield from insert(base, lam_b, lam_w)


@lru_cache(maxsize=4096)
def contracted_rhos(entries: tuple, n: int) -> tuple:
    """Memoized :func:`enumerate_rhos` for the intermediate levels of the recursion."""
    return tuple(enumerate_rhos(entries, n))


# -- public dessin-level API -------------------------------------------------------

def _as_types(types) -> TypeList:
    if isinstance(types, TypeList):
        return types
    return TypeList(types)


def enumerate_dessins(types, dedupe: bool = True) -> list[Dessin]:
    """All homeomorphism classes of increasing dessins of the given type, sorted by code."""
    types = _as_types(types)
    if types.k < 1:
        raise ValueError("at least one branch value is required")
    seen = {}
    for rhos in enumerate_rhos(types.entries, types.degree):
        d = Dessin.from_involutions(rhos, ROOT)
        code = canonical_code(d, check=False)
        if code in seen:
            if dedupe:
                log.warning("insertion produced a duplicate dessin")
                continue
            raise AssertionError("insertion produced a duplicate dessin")
        seen[code] = d
    return [seen[c] for c in sorted(seen)]


# -- enhanced dessins ------------------------------------------------------------

@dataclass(frozen=True)
class EnhancedDessin:
    """A contracted dessin with a pair of partitions at every special vertex.

    ``enhancement`` and ``markings`` are keyed by vertex index into
    ``base.vertices``.  Real special vertices are marked by their right real
    dart; upper-half ones by their out-dart of least traversal index.
    """

    base: Dessin
    special_label: int
    enhancement: tuple  # ((vertex, n_b, n_w), ...)
    markings: tuple = ()  # ((vertex, dart), ...)

    def parts(self) -> dict:
        return {v: (nb, nw) for v, nb, nw in self.enhancement}

    def violations(self) -> list[str]:
        out = []
        verts = self.base.vertices
        enh = self.parts()
        special = [i for i, c in enumerate(verts) if self.base.labels[c[0]] == self.special_label]
        if sorted(enh) != special:
            out.append("enhancement must cover exactly the special vertices")
            return out
        for v, (nb, nw) in enh.items():
            half_deg = len(verts[v]) // 2
            if sum(nb) != half_deg or sum(nw) != half_deg:
                out.append(f"vertex {v}: partitions must have size {half_deg}")
        vid = self.base.vertex_of
        for v in special:
            w = vid[self.base.conj[verts[v][0]]]
            if enh[w] != enh[v]:
                out.append(f"enhancement is not conj-equivariant at vertex {v}")
        return out


def _special_disorders(left: tuple, right: tuple) -> int:
    return sum(1 for p in left for q in right if p > q)


def enhanced_sign(e: EnhancedDessin) -> int:
    problems = e.violations()
    if problems:
        raise ValueError("invalid enhanced dessin: " + "; ".join(problems))
    enh = e.parts()
    walk = e.base.real_walk()
    verts = e.base.vertices
    ordinary = [(e.base.labels[d], len(verts[v]) // 2) for v, d in walk
                if e.base.labels[d] != e.special_label]
    count = disorders(ordinary)
    special = [enh[v] for v, d in walk if e.base.labels[d] == e.special_label]
    for i, (b1, w1) in enumerate(special):
        for b2, w2 in special[i + 1:]:
            count += _special_disorders(b1, b2) + _special_disorders(w1, w2)
    return -1 if count % 2 else 1


def _lean_enhanced_sign(profile, special_label: int, parts_by_cycle: dict) -> int:
    count = disorders([(lab, deg) for lab, deg, _ in profile if lab != special_label])
    special = [parts_by_cycle[c] for lab, _, c in profile if lab == special_label]
    for i, (b1, w1) in enumerate(special):
        for b2, w2 in special[i + 1:]:
            count += _special_disorders(b1, b2) + _special_disorders(w1, w2)
    return -1 if count % 2 else 1


def _base_dessin_vertex(base_dessin: Dessin, cycle: Sequence[int], label: int, k: int) -> int:
    """Vertex index of ``base_dessin`` for a ``sigma_label`` cycle given in face terms."""
    n = base_dessin.degree
    s = cycle[0]
    return base_dessin.vertex_of[2 * (label * n + s)]


def enhancements(base_rhos: Sequence[Sequence[int]], lam_b: Sequence[int],
                 lam_w: Sequence[int]) -> Iterator[EnhancedDessin]:
    """Every conj-equivariant enhancement of a contracted dessin compatible with the types.

    Only enhancements that admit at least one insertion are produced.
    """
    base = Dessin.from_involutions(base_rhos, ROOT)
    special = len(base_rhos) - 1
    cid, cycs, _ = special_orbits(base_rhos)
    orbits = insertion_options(base_rhos, lam_b, lam_w)
    real_dart = {}
    for v, d in base.real_walk():
        real_dart[v] = d
    for keys in _combine(orbits, Counter(lam_b), Counter(lam_w)):
        enh = []
        marks = []
        for orb, (nb, nw) in zip(orbits, keys):
            if not orb.real:
                nb, nw = half_parts(nb), half_parts(nw)
            for c in {orb.cycle, orb.partner}:
                v = _base_dessin_vertex(base, cycs[c], special, special)
                enh.append((v, nb, nw))
                if orb.real:
                    marks.append((v, _right_real_dart(base, v, real_dart[v])))
                elif c == orb.cycle:
                    marks.append((v, min(d for d in base.vertices[v] if base.outgoing[d])))
        yield EnhancedDessin(base, special, tuple(sorted(enh)), tuple(sorted(marks)))


def _right_real_dart(base: Dessin, v: int, d_in: int) -> int:
    for d in base.vertices[v]:
        if base.conj[d] == d and d != d_in:
            return d
    raise ValueError("real vertex without a second real dart")


def half_parts(parts: Sequence[int]) -> tuple:
    c = Counter(parts)
    return make_partition(p for p, m in c.items() for _ in range(m // 2))


# -- s-numbers --------------------------------------------------------------------

def _special_case(types: TypeList) -> int | None:
    if types.k == 0:
        return 1
    return None


def s_number_explicit(types) -> int:
    types = _as_types(types)
    special = _special_case(types)
    if special is not None:
        return special
    return sum(sign_of(r) for r in enumerate_rhos(types.entries, types.degree))


def _enhancement_keys(size: int, full_b: Counter, full_w: Counter, real: bool):
    """Candidate ``(n_b, n_w)`` for a special vertex of half-degree ``size``."""
    if not real:
        full_b, full_w = _halved(full_b), _halved(full_w)
    out = []
    for nb in _sub_partitions(size, full_b):
        need = size + 1 - len(nb)
        for nw in _sub_partitions(size, full_w):
            if len(nw) == need:
                out.append((nb, nw))
    return out


def _sub_partitions(total: int, avail: Counter) -> list[tuple]:
    return [p for p in partitions_of(total) if _sub(avail, p) is not None]


def s_number_multiplicative(types) -> int:
    """Sum over contracted dessins and enhancements, weighting by tree counts."""
    types = _as_types(types)
    special = _special_case(types)
    if special is not None:
        return special
    if types.k == 1:
        return 1 if types.entries[0] == (types.degree,) else 0
    n = types.degree
    lam_b, lam_w = types.entries[-2], types.entries[-1]
    full_b, full_w = Counter(lam_b), Counter(lam_w)
    label = types.k - 1
    total = 0
    key_cache: dict = {}
    for merged in merged_types(n, lam_b, lam_w):
        for base in contracted_rhos(types.entries[:-2] + (merged,), n):
            _, _, orbits = special_orbits(base)
            profile = real_profile(base)
            position = {c: i for i, (lab, _, c) in enumerate(profile) if lab == label}
            weighted = []
            for orb in orbits:
                ck = (orb.size, orb.real)
                if ck not in key_cache:
                    opts = []
                    for nb, nw in _enhancement_keys(orb.size, full_b, full_w, orb.real):
                        if orb.real:
                            w = trees.signed_sum(nb, nw, trees.BLACK)
                            keyb, keyw = nb, nw
                        else:
                            w = trees.marked_plane_tree_count(nb, nw)
                            keyb, keyw = nb * 2, nw * 2
                        if w:
                            opts.append(((make_partition(keyb), make_partition(keyw)), (nb, nw), w))
                    key_cache[ck] = opts
                weighted.append(key_cache[ck])
            # real special vertices in left-to-right order first, for incremental disorders
            order = sorted(range(len(orbits)),
                           key=lambda i: (not orbits[i].real, position.get(orbits[i].cycle, 0)))
            base_count = disorders([(lab, deg) for lab, deg, _ in profile if lab != label])
            total += _weighted_sum([orbits[i] for i in order], [weighted[i] for i in order],
                                   full_b, full_w, base_count)
    return total


def _weighted_sum(orbits, weighted, rem_b, rem_w, parity, left=(), i=0) -> int:
    if i == len(orbits):
        if +rem_b or +rem_w:
            return 0
        return -1 if parity % 2 else 1
    total = 0
    real = orbits[i].real
    for (kb, kw), (nb, nw), w in weighted[i]:
        nrb = _sub(rem_b, kb)
        if nrb is None:
            continue
        nrw = _sub(rem_w, kw)
        if nrw is None:
            continue
        extra = 0
        if real:
            extra = sum(_special_disorders(b1, nb) + _special_disorders(w1, nw) for b1, w1 in left)
        total += w * _weighted_sum(orbits, weighted, nrb, nrw, parity + extra,
                                   left + ((nb, nw),) if real else left, i + 1)
    return total


def s_number(types, mode: str = "explicit") -> int:
    if mode == "explicit":
        return s_number_explicit(types)
    if mode == "multiplicative":
        return s_number_multiplicative(types)
    raise ValueError(f"unknown mode {mode!r}")


def raw_count(types) -> int:
    types = _as_types(types)
    if types.k == 0:
        return 1
    return sum(1 for _ in enumerate_rhos(types.entries, types.degree))


def orderings(types) -> list[TypeList]:
    types = _as_types(types)
    seen = dict.fromkeys(permutations(types.entries))
    return [TypeList(p, types.degree) for p in seen]


@dataclass
class InvarianceReport:
    invariant: bool
    values: list[int]
    raw_counts: list[int]
    orders: list[TypeList]

    @property
    def s(self) -> int | None:
        return self.values[0] if self.invariant and self.values else None


def invariance_report(types, mode: str = "explicit", with_counts: bool = True) -> InvarianceReport:
    orders = orderings(types)
    values = [s_number(t, mode) for t in orders]
    counts = [raw_count(t) for t in orders] if with_counts else []
    return InvarianceReport(len(set(values)) <= 1, values, counts, orders)


def invariance_check(types, mode: str = "explicit") -> bool:
    return invariance_report(types, mode, with_counts=False).invariant


# -- sign factorization --------------------------------------------------------------

def factorization_failures(types) -> list[tuple]:
    """Dessins violating ``sign = enhanced sign * product of tree signs``.

    The tree signs are the disorder parities inside each block of consecutive
    real vertices coming from one real special vertex.
    """
    types = _as_types(types)
    if types.k < 2:
        return []
    n = types.degree
    lam_b, lam_w = types.entries[-2], types.entries[-1]
    label = types.k - 1
    bad = []
    for merged in merged_types(n, lam_b, lam_w):
        for base in contracted_rhos(types.entries[:-2] + (merged,), n):
            cid, cycs, orbits = special_orbits(base)
            base_profile = real_profile(base)
            for full in insert(base, lam_b, lam_w):
                parts = _parts_by_cycle(full, cid, len(cycs))
                eps_hat = _lean_enhanced_sign(base_profile, label, parts)
                prof = real_profile(full)
                blocks: dict = {}
                order = []
                for lab, deg, c in prof:
                    if lab < label:
                        continue
                    s = _cycle_member(full, lab, c)
                    owner = cid[s]
                    if owner not in blocks:
                        order.append(owner)
                        blocks[owner] = []
                    elif order[-1] != owner:
                        bad.append((full, "tree block is not contiguous"))
                    blocks[owner].append((lab, deg))
                eps_trees = 1
                for blk in blocks.values():
                    eps_trees *= -1 if disorders(blk) % 2 else 1
                if sign_of(full) != eps_hat * eps_trees:
                    bad.append((full, "sign mismatch"))
    return bad


def _cycle_member(rhos, label, c) -> int:
    n = len(rhos[0])
    ids, cycs = _cycle_ids([rhos[label][rhos[label - 1][s]] for s in range(n)])
    return cycs[c][0]


def _parts_by_cycle(full, cid, ncycles) -> dict:
    """Enhancement read off a full dessin: black/white half-degrees inside each special cycle."""
    k = len(full) - 1
    n = len(full[0])
    out = {c: ([], []) for c in range(ncycles)}
    for j, slot in ((k - 1, 0), (k, 1)):
        _, cycs = _cycle_ids([full[j][full[j - 1][s]] for s in range(n)])
        for cyc in cycs:
            out[cid[cyc[0]]][slot].append(len(cyc))
    return {c: (make_partition(b), make_partition(w)) for c, (b, w) in out.items()}


def check_dessins(types) -> list[str]:
    """Validate every enumerated dessin; returns the problems found."""
    types = _as_types(types)
    out = []
    for d in enumerate_dessins(types):
        problems = validate(d, types)
        if problems:
            out.extend(problems)
    return out
