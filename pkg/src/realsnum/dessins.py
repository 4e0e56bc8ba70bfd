"""Real polynomial dessins as rotation systems.

A dessin is a set of darts (half-edges) with

* ``rotation`` -- the counterclockwise successor of a dart around its vertex,
* ``pairing``  -- the other half of the same edge,
* ``conj``     -- the orientation-reversing symmetry,
* ``labels``   -- the label of the vertex a dart is attached to
  (``1..k``, or :data:`INF` for the vertex at infinity),
* ``outgoing`` -- whether the edge is oriented away from the dart's vertex,
* ``root``     -- the outgoing dart of the positively oriented real edge of
  type ``k -> inf``; it fixes the orientation of the real circle.

Most dessins are produced from *face data*: a sequence of involutions
``rho[0..k]`` of the ``n`` upper faces, where ``rho[j]`` sends an upper face to
the upper face obtained by crossing its edge of type ``j`` (the edge over the
``j``-th real segment, segment ``0`` being ``(-inf, w_1)``) and reflecting.
See :meth:`Dessin.from_involutions`.
"""

from __future__ import annotations

import json
from array import array
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .partitions import TypeList, make_partition

INF = 0


def label_name(label: int) -> str:
    return "inf" if label == INF else str(label)


def compose(p: Sequence[int], q: Sequence[int]) -> tuple:
    """``p o q`` (apply ``q`` first)."""
    return tuple(p[x] for x in q)


def inverse(p: Sequence[int]) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def cycles(p: Sequence[int]) -> list[list[int]]:
    seen = [False] * len(p)
    out = []
    for i in range(len(p)):
        if not seen[i]:
            cyc = []
            j = i
            while not seen[j]:
                seen[j] = True
                cyc.append(j)
                j = p[j]
            out.append(cyc)
    return out


def cycle_type(p: Sequence[int]) -> tuple:
    return make_partition(len(c) for c in cycles(p))


@dataclass(frozen=True, eq=False)
class Dessin:
    rotation: tuple
    pairing: tuple
    conj: tuple
    labels: tuple
    outgoing: tuple
    root: int

    # -- construction ---------------------------------------------------------

    @classmethod
    def from_involutions(cls, rhos: Sequence[Sequence[int]], root_face: int) -> "Dessin":
        """Build the rotation system from face data.

        Dart ``2 * (j * n + s) + end`` is the tail (``end = 0``) or head
        (``end = 1``) of the edge of type ``j`` bounding upper face ``s``.
        ``root_face`` must be a fixed point of ``rhos[-1]``.
        """
        K = len(rhos)
        n = len(rhos[0])

        def dart(j, s, end):
            return 2 * (j * n + s) + end

        size = 2 * K * n
        rot = [0] * size
        conj = [0] * size
        labels = [0] * size
        outgoing = [False] * size
        for j in range(K):
            nxt = (j + 1) % K
            rj, rn = rhos[j], rhos[nxt]
            for s in range(n):
                t, h = dart(j, s, 0), dart(j, s, 1)
                rot[t] = dart((j - 1) % K, s, 1)
                rot[h] = dart(nxt, rn[rj[s]], 0)
                conj[t] = dart(j, rj[s], 0)
                conj[h] = dart(j, rj[s], 1)
                labels[t] = j
                labels[h] = nxt
                outgoing[t] = True
        pairing = tuple(d ^ 1 for d in range(size))
        return cls(tuple(rot), pairing, tuple(conj), tuple(labels), tuple(outgoing),
                   dart(K - 1, root_face, 0))

    # -- basic structure --------------------------------------------------------

    @property
    def darts(self) -> range:
        return range(len(self.rotation))

    @cached_property
    def vertex_of(self) -> tuple:
        vid = [0] * len(self.rotation)
        for i, cyc in enumerate(cycles(self.rotation)):
            for d in cyc:
                vid[d] = i
        return tuple(vid)

    @cached_property
    def vertices(self) -> list[list[int]]:
        return cycles(self.rotation)

    @property
    def k(self) -> int:
        return max(self.labels)

    @property
    def degree(self) -> int:
        inf_darts = sum(1 for lab in self.labels if lab == INF)
        return inf_darts // 2

    def edge_type(self, d: int) -> tuple:
        """``(source label, target label)`` of the edge through ``d``."""
        if self.outgoing[d]:
            return self.labels[d], self.labels[self.pairing[d]]
        return self.labels[self.pairing[d]], self.labels[d]

    def faces(self) -> list[list[int]]:
        rinv = inverse(self.rotation)
        return cycles(tuple(rinv[self.pairing[d]] for d in self.darts))

    def vertex_types(self) -> dict:
        """Map label -> partition of half-degrees of the vertices with that label."""
        out = {}
        for cyc in self.vertices:
            out.setdefault(self.labels[cyc[0]], []).append(len(cyc) // 2)
        return {lab: make_partition(v) for lab, v in out.items()}

    def type_list(self) -> TypeList:
        types = self.vertex_types()
        return TypeList([types[i] for i in range(1, self.k + 1)], self.degree)

    # -- the real circle ----------------------------------------------------------

    def real_walk(self) -> list[tuple[int, int]]:
        """Vertices met along the real circle, left to right, as ``(vertex id, dart in)``.

        The walk starts at the vertex at infinity, follows the orientation fixed
        by the root and stops before returning to infinity.  Raises
        ``ValueError`` if the fixed darts of ``conj`` do not form a circle
        through the root.
        """
        conj, pairing, vid = self.conj, self.pairing, self.vertex_of
        real_at = {}
        for d in self.darts:
            if conj[d] == d:
                real_at.setdefault(vid[d], []).append(d)
        if any(len(v) != 2 for v in real_at.values()):
            raise ValueError("a real vertex must carry exactly two real darts")
        arrive = pairing[self.root]
        if conj[self.root] != self.root or self.labels[arrive] != INF:
            raise ValueError("root is not a real dart ending at infinity")
        a, b = real_at[vid[arrive]]
        d = b if a == arrive else a
        walk = []
        steps = 0
        while True:
            d_in = pairing[d]
            v = vid[d_in]
            if self.labels[d_in] == INF:
                if d_in != arrive:
                    raise ValueError("real circle does not close at the root")
                break
            walk.append((v, d_in))
            a, b = real_at[v]
            d = b if a == d_in else a
            steps += 1
            if steps > len(self.rotation):
                raise ValueError("real circle does not close")
        if 2 * len(walk) + 2 != sum(len(v) for v in real_at.values()):
            raise ValueError("real darts do not form a single circle")
        return walk

    def real_profile(self) -> list[tuple[int, int]]:
        """``(label, half-degree)`` of the finite real vertices, left to right."""
        verts = self.vertices
        return [(self.labels[d], len(verts[v]) // 2) for v, d in self.real_walk()]

    # -- serialization -------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "darts": len(self.rotation),
            "rotation": list(self.rotation),
            "pairing": list(self.pairing),
            "conj": list(self.conj),
            "labels": [label_name(lab) for lab in self.labels],
            "outgoing": list(self.outgoing),
            "root": self.root,
        }

    @classmethod
    def from_json(cls, data: dict) -> "Dessin":
        labels = tuple(INF if lab == "inf" else int(lab) for lab in data["labels"])
        return cls(tuple(data["rotation"]), tuple(data["pairing"]), tuple(data["conj"]),
                   labels, tuple(bool(x) for x in data["outgoing"]), int(data["root"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), separators=(",", ":"))

    def relabel(self, perm: Sequence[int]) -> "Dessin":
        """Rename dart ``d`` to ``perm[d]``."""
        inv = inverse(perm)
        def conjugated(p):
            return tuple(perm[p[inv[d]]] for d in range(len(perm)))
        return Dessin(conjugated(self.rotation), conjugated(self.pairing), conjugated(self.conj),
                      tuple(self.labels[inv[d]] for d in range(len(perm))),
                      tuple(self.outgoing[inv[d]] for d in range(len(perm))),
                      perm[self.root])


def validate(dessin: Dessin, types: TypeList | None = None) -> list[str]:
    """Return the list of violated dessin axioms (empty when valid and increasing)."""
    out = []
    size = len(dessin.rotation)
    rot, pair, conj = dessin.rotation, dessin.pairing, dessin.conj
    for name, p in (("rotation", rot), ("pairing", pair), ("conj", conj)):
        if sorted(p) != list(range(size)):
            return [f"{name} is not a permutation of the darts"]
    if any(pair[d] == d or pair[pair[d]] != d for d in range(size)):
        out.append("pairing is not a fixed-point-free involution")
    if any(conj[conj[d]] != d for d in range(size)):
        out.append("conj is not an involution")
    if any(dessin.outgoing[d] == dessin.outgoing[pair[d]] for d in range(size)):
        out.append("edge orientation is inconsistent")
    if out:
        return out

    verts = dessin.vertices
    for cyc in verts:
        if len({dessin.labels[d] for d in cyc}) != 1:
            out.append("labels are not constant on a vertex")
            break
    rinv = inverse(rot)
    if any(conj[rot[conj[d]]] != rinv[d] for d in range(size)):
        out.append("conj not orientation-reversing")
    if any(conj[pair[d]] != pair[conj[d]] for d in range(size)):
        out.append("conj does not commute with the edge pairing")
    if any(dessin.labels[conj[d]] != dessin.labels[d] or
           dessin.outgoing[conj[d]] != dessin.outgoing[d] for d in range(size)):
        out.append("conj does not preserve labels and orientations")

    k = dessin.k
    inf_verts = [c for c in verts if dessin.labels[c[0]] == INF]
    if len(inf_verts) != 1:
        out.append(f"expected exactly one vertex at infinity, found {len(inf_verts)}")
        return out
    n = len(inf_verts[0]) // 2
    if k < 1:
        out.append("no finite labels")
        return out

    allowed = {(INF, 1), (k, INF)} | {(i, i + 1) for i in range(1, k)}
    if any(dessin.edge_type(d) not in allowed for d in range(size)):
        out.append("edge of a forbidden type")
    for cyc in verts:
        flags = [dessin.outgoing[d] for d in cyc]
        if len(cyc) % 2 or any(flags[i] == flags[(i + 1) % len(cyc)] for i in range(len(cyc))):
            out.append("incoming and outgoing edges do not alternate around a vertex")
            break

    faces = dessin.faces()
    for f in faces:
        kinds = Counter(dessin.edge_type(d) for d in f)
        if len(f) != k + 1 or set(kinds.values()) != {1} or len(kinds) != k + 1:
            out.append("face axiom: a face boundary must contain each edge type exactly once")
            break
        if len({dessin.outgoing[d] for d in f}) != 1:
            out.append("face axiom: boundary orientation does not extend to the face")
            break
    if len(faces) != 2 * n:
        out.append(f"expected {2 * n} faces, found {len(faces)}")
    if len(verts) - size // 2 + len(faces) != 2:
        out.append("Euler characteristic is not 2")
    seen = {0}
    stack = [0]
    while stack:
        d = stack.pop()
        for e in (rot[d], pair[d]):
            if e not in seen:
                seen.add(e)
                stack.append(e)
    if len(seen) != size:
        out.append("dessin is not connected")

    if types is not None:
        if types.degree != n:
            out.append(f"degree is {n}, expected {types.degree}")
        if types.k != k:
            out.append(f"number of labels is {k}, expected {types.k}")
        else:
            got = dessin.vertex_types()
            for i, lam in enumerate(types.entries, 1):
                if got.get(i) != lam:
                    out.append(f"vertices labelled {i} have type {got.get(i)}, expected {lam}")

    r = dessin.root
    if not (dessin.outgoing[r] and dessin.labels[r] == k and dessin.labels[pair[r]] == INF):
        out.append("root is not the tail of an edge of type k -> inf")
    elif conj[r] != r:
        out.append("root edge is not real (not increasing)")
    else:
        try:
            dessin.real_walk()
        except ValueError as exc:
            out.append(f"real circle: {exc}")
    return out


def canonical_code(dessin: Dessin, check: bool = True) -> bytes:
    """Root-anchored traversal code; equal codes iff the dessins are homeomorphic."""
    if check:
        problems = validate(dessin)
        if problems:
            raise ValueError("invalid dessin: " + "; ".join(problems))
    rot, pair, conj = dessin.rotation, dessin.pairing, dessin.conj
    order = [dessin.root]
    num = {dessin.root: 0}
    i = 0
    while i < len(order):
        d = order[i]
        i += 1
        for e in (rot[d], pair[d]):
            if e not in num:
                num[e] = len(order)
                order.append(e)
    code = array("H")
    for d in order:
        code.extend((num[rot[d]], num[pair[d]], num[conj[d]],
                     dessin.labels[d], int(dessin.outgoing[d])))
    return code.tobytes()


def disorders(profile: Sequence[tuple[int, int]]) -> int:
    return sum(1 for i, (l1, d1) in enumerate(profile) for l2, d2 in profile[i + 1:]
               if l1 == l2 and d1 > d2)


def dessin_sign(dessin: Dessin, check: bool = True) -> int:
    if check:
        problems = validate(dessin)
        if problems:
            raise ValueError("invalid dessin: " + "; ".join(problems))
    return -1 if disorders(dessin.real_profile()) % 2 else 1


def star(n: int) -> Dessin:
    """The unique increasing dessin with one finite branch value of type ``(n)``."""
    return Dessin.from_involutions(*star_involutions(n))


def star_involutions(n: int) -> tuple[tuple, int]:
    rho1 = tuple((-s) % n for s in range(n))
    rho0 = tuple((-s - 1) % n for s in range(n))
    return (rho0, rho1), 0


def dessin_to_dot(dessin: Dessin, name: str = "dessin") -> str:
    """DOT drawing of the affine dessin (the vertex at infinity is left out)."""
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    verts = dessin.vertices
    vid = dessin.vertex_of
    real = {v for v, _ in dessin.real_walk()}
    for i, cyc in enumerate(verts):
        lab = dessin.labels[cyc[0]]
        if lab == INF:
            continue
        style = ", style=filled, fillcolor=lightgray" if i in real else ""
        lines.append(f"  v{i} [label=\"{lab}\"{style}];")
    for d in dessin.darts:
        if not dessin.outgoing[d]:
            continue
        a, b = vid[d], vid[dessin.pairing[d]]
        if dessin.labels[d] == INF or dessin.labels[dessin.pairing[d]] == INF:
            continue
        attr = " [penwidth=2]" if dessin.conj[d] == d else ""
        lines.append(f"  v{a} -> v{b}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"
