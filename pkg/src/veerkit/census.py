"""Enumeration of small veering triangulations and batch verification.

The enumerator is an exhaustive backtracking search over glued taut
tetrahedra.  Fresh tetrahedra are always attached by the identity
gluing (their labelling is free, so this loses nothing), angle digits
are chosen as tetrahedra appear, and partial assignments are pruned by
orientability and by the taut angle condition around every closed edge
class.  Complete gluings are validated by the ordinary parser and
deduplicated by canonical taut signature, so the output for a given
size is the full list of veering structures up to isomorphism.

The package ships a frozen list produced by this enumerator in
``data/census.txt``; batch commands read it, or any user-supplied file
with one signature per line.
"""

from __future__ import annotations

from importlib import resources

from . import isosig
from .perm4 import ORDERED_S4, sign
from .triangulation import (
    EDGE_VERTICES,
    PI_PAIRS,
    NotTaut,
    NotTransverse,
    TautTriangulation,
    _build_edge_classes,
    _build_face_classes,
    _build_vertex_classes,
    _orient,
    _transverse,
    edge_index,
)
from .veering import NotVeering, derive_veering

_PAIR_DIGIT = {frozenset(p): d for d, p in enumerate(PI_PAIRS)}

# The two faces of the model tetrahedron adjacent to each model edge.
_EDGE_FACES = [
    tuple(f for f in range(4) if f not in EDGE_VERTICES[e])
    for e in range(6)
]


def transport_digit(digit: int, rho) -> int:
    """The angle digit after relabelling vertices by the permutation."""
    e1, e2 = PI_PAIRS[digit]
    u, v = EDGE_VERTICES[e1]
    return _PAIR_DIGIT[
        frozenset(
            (
                edge_index(rho[u], rho[v]),
                5 - edge_index(rho[u], rho[v]),
            )
        )
    ]


def canonical_taut_sig(gluings: isosig.GluingTable, angles: list[int]) -> str:
    """Minimal signature over all relabellings, with the angle digits
    transported along the winning relabelling."""
    best: tuple[str, str] | None = None
    for start in range(len(gluings)):
        for p in ORDERED_S4:
            sig, order, relab = isosig._candidate(
                gluings, start, p, with_labels=True
            )
            if best is not None and sig > best[0]:
                continue
            digits = "".join(
                str(transport_digit(angles[old], relab[old]))
                for old in order
            )
            cand = (sig, digits)
            if best is None or cand < best:
                best = cand
    assert best is not None
    return f"{best[0]}_{best[1]}"


def _model_colours() -> dict[tuple[int, int], tuple]:
    """Per (angle digit, orientation), the veering colour forced on
    each model edge: the anticlockwise face rule pins one red
    equatorial edge per face and the square alternation does the rest.
    Pi edges are unconstrained locally (None)."""
    out = {}
    for digit in range(3):
        for orient in (1, -1):
            tri = TautTriangulation(
                sig="",
                iso_sig="",
                angles=[digit],
                gluings=[[None] * 4],
                orient=[orient],
                top_first=[True],
            )
            col: list[str | None] = [None] * 6
            pi_edges = set(tri.pi_edges(0))
            for face in range(4):
                x, y, z = tri.face_acw_cycle(0, face)
                sides = [(x, y), (y, z), (z, x)]
                for i, (u, v) in enumerate(sides):
                    if edge_index(u, v) in pi_edges:
                        nu, nv = sides[(i + 1) % 3]
                        col[edge_index(nu, nv)] = "R"
                        break
            a, c, b, d = tri.square_cycle(0)
            cycle = [
                edge_index(*p) for p in ((a, c), (c, b), (b, d), (d, a))
            ]
            reds = [i for i, e in enumerate(cycle) if col[e] == "R"]
            parity = reds[0] % 2
            for i, e in enumerate(cycle):
                col[e] = "R" if i % 2 == parity else "B"
            out[(digit, orient)] = tuple(col)
    return out


_MODEL_COL = _model_colours()

# edges lying on each model face
_FACE_EDGES = [
    tuple(e for e in range(6) if f not in EDGE_VERTICES[e])
    for f in range(4)
]
# edge relabelling induced by each vertex permutation
_PERM_EDGE = {
    p: tuple(
        edge_index(p[EDGE_VERTICES[e][0]], p[EDGE_VERTICES[e][1]])
        for e in range(6)
    )
    for p in ORDERED_S4
}


def _partial_taut_ok(gluings, angles, orient) -> bool:
    """Angle sums around edge classes of a partial gluing: closed
    classes need exactly two pi's, open ones at most two.  Also rejects
    veering colour conflicts between the locally forced colours."""
    n = len(gluings)
    parent = list(range(6 * n))

    def find(x):
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    for t in range(n):
        base = 6 * t
        row = gluings[t]
        for f in range(4):
            g = row[f]
            if g is None:
                continue
            d, fd, p = g
            pe = _PERM_EDGE[p]
            dbase = 6 * d
            for e in _FACE_EDGES[f]:
                ra, rb = find(base + e), find(dbase + pe[e])
                if ra != rb:
                    parent[ra] = rb

    pis = [0] * (6 * n)
    closed = [True] * (6 * n)
    colour: list[str | None] = [None] * (6 * n)
    for t in range(n):
        base = 6 * t
        row = gluings[t]
        e1, e2 = PI_PAIRS[angles[t]]
        model = _MODEL_COL[(angles[t], orient[t])]
        for e in range(6):
            r = find(base + e)
            if e == e1 or e == e2:
                pis[r] += 1
                if pis[r] > 2:
                    return False
            c = model[e]
            if c is not None:
                if colour[r] is None:
                    colour[r] = c
                elif colour[r] != c:
                    return False
            f1, f2 = _EDGE_FACES[e]
            if row[f1] is None or row[f2] is None:
                closed[r] = False
    for t in range(n):
        base = 6 * t
        for e in range(6):
            r = base + e
            if parent[r] == r and closed[r] and pis[r] != 2:
                return False
    return True


def enumerate_veering(n: int) -> list[str]:
    """All veering taut signatures with exactly n tetrahedra."""
    found: set[str] = set()
    gluings: list[list] = [[None] * 4]
    orient = [1]

    def leaf():
        # validate on the raw tables first; canonicalize survivors only
        tri = TautTriangulation(
            sig="",
            iso_sig="",
            angles=list(angles),
            gluings=[list(row) for row in gluings],
        )
        try:
            _build_edge_classes(tri)
            if any(c.pi_count != 2 for c in tri.edge_classes):
                return
            _orient(tri)
            _transverse(tri)
            _build_face_classes(tri)
            _build_vertex_classes(tri)
            derive_veering(tri)
        except (NotTaut, NotTransverse, NotVeering):
            return
        found.add(canonical_taut_sig(gluings, angles))

    def next_open():
        for t in range(len(gluings)):
            for f in range(4):
                if gluings[t][f] is None:
                    return t, f
        return None

    def glue(t, f, d, fd, p):
        gluings[t][f] = (d, fd, p)
        gluings[d][fd] = (t, f, isosig.inverse(p))

    def unglue(t, f, d, fd):
        gluings[t][f] = None
        gluings[d][fd] = None

    def search():
        slot = next_open()
        if slot is None:
            if len(gluings) == n:
                leaf()
            return
        t, f = slot
        if len(gluings) < n:
            # a fresh tetrahedron, labelled so the join is the identity
            d = len(gluings)
            gluings.append([None] * 4)
            orient.append(-orient[t])
            glue(t, f, d, f, isosig.IDENTITY)
            for digit in range(3):
                angles.append(digit)
                if _partial_taut_ok(gluings, angles, orient):
                    search()
                angles.pop()
            unglue(t, f, d, f)
            gluings.pop()
            orient.pop()
        for d in range(len(gluings)):
            for fd in range(4):
                if gluings[d][fd] is not None or (d, fd) <= (t, f):
                    continue
                for p in ORDERED_S4:
                    if p[f] != fd or sign(p) * orient[t] != -orient[d]:
                        continue
                    glue(t, f, d, fd, p)
                    if _partial_taut_ok(gluings, angles, orient):
                        search()
                    unglue(t, f, d, fd)

    for digit in range(3):
        angles = [digit]
        search()
    return sorted(found)


def load_census(path: str | None = None) -> list[str]:
    """Signatures from a file (one per line, # comments), or the
    bundled list."""
    if path is None:
        text = (
            resources.files("veerkit").joinpath("data/census.txt")
        ).read_text()
    else:
        with open(path) as f:
            text = f.read()
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out
