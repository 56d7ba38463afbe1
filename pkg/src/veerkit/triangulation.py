"""Taut ideal triangulations from census-style taut signatures.

A taut signature is "<isosig>_<digits>" with one digit in {0,1,2} per
tetrahedron.  The digit selects the pair of opposite edges carrying
dihedral angle pi: 0 -> edges 01|23, 1 -> 02|13, 2 -> 03|12 (edges are
indexed 0..5 in the order 01, 02, 03, 12, 13, 23).

Besides decoding, this module derives the data the rest of the engine
needs: edge and face identification classes, the cyclic sequence of
tetrahedron corners around each edge, a global orientation (we reject
non-orientable total spaces), and the transverse structure, i.e. the
choice of top pi-edge in each tetrahedron, propagated from tetrahedron 0
and rejected if inconsistent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import isosig
from .perm4 import Perm4, sign

# Edge indexing: 0..5 in lexicographic order of the vertex pairs.
EDGE_VERTICES: list[tuple[int, int]] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
EDGE_INDEX: dict[frozenset[int], int] = {
    frozenset(v): i for i, v in enumerate(EDGE_VERTICES)
}
# Opposite-edge pairs, indexed by the angle digit.
PI_PAIRS: list[tuple[int, int]] = [(0, 5), (1, 4), (2, 3)]


class ParseError(ValueError):
    """Malformed taut signature."""


class NotTaut(ValueError):
    """Signature decodes, but the angle assignment is not taut."""


class NotTransverse(ValueError):
    """Taut, but co-orientations cannot be chosen consistently."""


def edge_index(a: int, b: int) -> int:
    return EDGE_INDEX[frozenset((a, b))]


def other_vertices(a: int, b: int) -> tuple[int, int]:
    rest = [v for v in range(4) if v not in (a, b)]
    return rest[0], rest[1]


@dataclass(frozen=True)
class EdgeEmbedding:
    """One appearance of a quotient edge on a tetrahedron.

    The vertices (a, b) give the model edge, oriented compatibly with the
    class orientation.  `behind` is the vertex opposite the face through
    which the walk around the edge leaves this tetrahedron.
    """

    tet: int
    a: int
    b: int
    behind: int

    @property
    def edge(self) -> int:
        return edge_index(self.a, self.b)


@dataclass
class EdgeClass:
    index: int
    embeddings: list[EdgeEmbedding]  # cyclic order around the edge
    pi_count: int = 0

    @property
    def degree(self) -> int:
        return len(self.embeddings)


@dataclass(frozen=True)
class FaceClass:
    """A quotient face, recorded by its two model faces.

    `below` is the (tet, face) pair for which the face is an upper face
    (the tetrahedron lies below the face) and `above` the pair for which
    it is a lower face.  `perm` maps vertex labels of the below
    tetrahedron to those of the above tetrahedron.
    """

    index: int
    below: tuple[int, int]
    above: tuple[int, int]
    perm: Perm4


@dataclass
class TautTriangulation:
    sig: str
    iso_sig: str
    angles: list[int]
    gluings: isosig.GluingTable
    orient: list[int] = field(default_factory=list)
    top_first: list[bool] = field(default_factory=list)
    edge_classes: list[EdgeClass] = field(default_factory=list)
    edge_of: dict[tuple[int, int], int] = field(default_factory=dict)
    face_classes: list[FaceClass] = field(default_factory=list)
    face_of: dict[tuple[int, int], int] = field(default_factory=dict)
    vertex_classes: list[list[tuple[int, int]]] = field(default_factory=list)
    vertex_of: dict[tuple[int, int], int] = field(default_factory=dict)

    @property
    def n_tets(self) -> int:
        return len(self.angles)

    @property
    def n_cusps(self) -> int:
        return len(self.vertex_classes)

    def pi_edges(self, tet: int) -> tuple[int, int]:
        """The two pi-edge indices of the tetrahedron, (first, second)."""
        return PI_PAIRS[self.angles[tet]]

    def top_edge(self, tet: int) -> int:
        first, second = self.pi_edges(tet)
        return first if self.top_first[tet] else second

    def bottom_edge(self, tet: int) -> int:
        first, second = self.pi_edges(tet)
        return second if self.top_first[tet] else first

    def is_pi_edge(self, tet: int, edge: int) -> bool:
        return edge in self.pi_edges(tet)

    def equatorial_edges(self, tet: int) -> list[int]:
        return [e for e in range(6) if not self.is_pi_edge(tet, e)]

    def upper_faces(self, tet: int) -> tuple[int, int]:
        """Faces containing the top pi-edge, i.e. opposite the bottom
        pi-edge's endpoints."""
        return EDGE_VERTICES[self.bottom_edge(tet)]

    def lower_faces(self, tet: int) -> tuple[int, int]:
        return EDGE_VERTICES[self.top_edge(tet)]

    def is_upper_face(self, tet: int, face: int) -> bool:
        return face in self.upper_faces(tet)

    def face_acw_cycle(self, tet: int, face: int) -> tuple[int, int, int]:
        """Vertices of the face in anticlockwise order as viewed from
        outside the tetrahedron."""
        a, b, c = (v for v in range(4) if v != face)
        # (a, b, c, face) even as a permutation of (0,1,2,3) is the
        # anticlockwise order for a positively oriented tetrahedron.  The
        # reference orientation (the sign of tetrahedron 0) is pinned by
        # the red/blue handedness fixtures in the tests.
        perm = (a, b, c, face)
        if sign(perm) == self.orient[tet]:
            return a, b, c
        return a, c, b

    def square_cycle(self, tet: int) -> tuple[int, int, int, int]:
        """Corners of the equatorial square in anticlockwise order viewed
        from above, starting at an endpoint of the top pi-edge."""
        a, b = EDGE_VERTICES[self.top_edge(tet)]
        c, d = EDGE_VERTICES[self.bottom_edge(tet)]
        # Viewed from above, the boundary of either upper face appears
        # anticlockwise.  Pick the order of {c, d} making (a, c, b, d)
        # anticlockwise: vertex c follows a on the upper face opposite d.
        cyc = self.face_acw_cycle(tet, d)  # upper face {a, b, c}
        i = cyc.index(a)
        if cyc[(i + 1) % 3] == c:
            return a, c, b, d
        return a, d, b, c


def _build_edge_classes(tri: TautTriangulation) -> None:
    seen: set[tuple[int, int, int]] = set()  # (tet, a, b) directed
    for tet0 in range(tri.n_tets):
        for e0 in range(6):
            a0, b0 = EDGE_VERTICES[e0]
            if (tet0, a0, b0) in seen or (tet0, b0, a0) in seen:
                continue
            cls = EdgeClass(index=len(tri.edge_classes), embeddings=[])
            tet, a, b = tet0, a0, b0
            c, _ = other_vertices(a, b)
            behind = c
            while True:
                if (tet, a, b) in seen:
                    raise NotTaut(
                        "edge identified with itself reversing orientation"
                    )
                seen.add((tet, a, b))
                cls.embeddings.append(EdgeEmbedding(tet, a, b, behind))
                if tri.is_pi_edge(tet, edge_index(a, b)):
                    cls.pi_count += 1
                g = tri.gluings[tet][behind]
                assert g is not None
                nt, _, p = g
                na, nb, gone = p[a], p[b], p[behind]
                (x, y) = other_vertices(na, nb)
                nbehind = x if y == gone else y
                tet, a, b, behind = nt, na, nb, nbehind
                if (tet, a, b) == (tet0, a0, b0):
                    break
            for emb in cls.embeddings:
                tri.edge_of[(emb.tet, emb.edge)] = cls.index
            tri.edge_classes.append(cls)


def _build_face_classes(tri: TautTriangulation) -> None:
    for tet in range(tri.n_tets):
        for f in range(4):
            if (tet, f) in tri.face_of:
                continue
            g = tri.gluings[tet][f]
            assert g is not None
            nt, nf, p = g
            if tri.is_upper_face(tet, f):
                below, above, perm = (tet, f), (nt, nf), p
            else:
                from .perm4 import inverse

                below, above, perm = (nt, nf), (tet, f), inverse(p)
            fc = FaceClass(len(tri.face_classes), below, above, perm)
            tri.face_of[(tet, f)] = fc.index
            tri.face_of[(nt, nf)] = fc.index
            tri.face_classes.append(fc)


def _build_vertex_classes(tri: TautTriangulation) -> None:
    parent: dict[tuple[int, int], tuple[int, int]] = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for tet in range(tri.n_tets):
        for f in range(4):
            g = tri.gluings[tet][f]
            assert g is not None
            nt, _, p = g
            for v in range(4):
                if v != f:
                    a, b = find((tet, v)), find((nt, p[v]))
                    if a != b:
                        parent[a] = b
    groups: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for tet in range(tri.n_tets):
        for v in range(4):
            groups.setdefault(find((tet, v)), []).append((tet, v))
    for members in sorted(groups.values()):
        idx = len(tri.vertex_classes)
        tri.vertex_classes.append(members)
        for m in members:
            tri.vertex_of[m] = idx


def _orient(tri: TautTriangulation) -> None:
    n = tri.n_tets
    orient = [0] * n
    orient[0] = 1
    stack = [0]
    while stack:
        t = stack.pop()
        for f in range(4):
            g = tri.gluings[t][f]
            assert g is not None
            nt, _, p = g
            want = -orient[t] * sign(p)
            if orient[nt] == 0:
                orient[nt] = want
                stack.append(nt)
            elif orient[nt] != want:
                raise NotTaut("total space is non-orientable")
    tri.orient = orient


def _transverse(tri: TautTriangulation) -> None:
    """Choose, per tetrahedron, which pi-edge is on top.

    Across each face the two adjacent tetrahedra must see the face from
    opposite sides (upper for one, lower for the other).  Propagating
    from tetrahedron 0 either succeeds or proves there is no transverse
    structure; the global flip gives the only other solution.
    """
    n = tri.n_tets
    choice: list[bool | None] = [None] * n
    choice[0] = True
    stack = [0]

    def upper_faces(t: int, top_first: bool) -> tuple[int, int]:
        first, second = tri.pi_edges(t)
        bottom = second if top_first else first
        return EDGE_VERTICES[bottom]

    while stack:
        t = stack.pop()
        tf = choice[t]
        assert tf is not None
        for f in range(4):
            g = tri.gluings[t][f]
            assert g is not None
            nt, nf, _ = g
            f_is_upper = f in upper_faces(t, tf)
            # The matching model face must have the opposite disposition.
            want_upper = not f_is_upper
            fits_true = (nf in upper_faces(nt, True)) == want_upper
            fits_false = (nf in upper_faces(nt, False)) == want_upper
            if fits_true and fits_false:
                raise NotTransverse("face disposition does not pin the gluing")
            if not fits_true and not fits_false:
                raise NotTransverse("no transverse structure")
            want = fits_true
            if choice[nt] is None:
                choice[nt] = want
                stack.append(nt)
            elif choice[nt] != want:
                raise NotTransverse("no transverse structure")
    tri.top_first = [bool(c) for c in choice]


def parse_taut_sig(sig: str) -> TautTriangulation:
    """Parse and validate a census taut signature."""
    if "_" not in sig:
        raise ParseError("taut signature needs '<isosig>_<angle digits>'")
    iso, _, digits = sig.partition("_")
    try:
        gluings = isosig.decode(iso)
    except isosig.SigError as exc:
        raise ParseError(str(exc)) from None
    if any(g is None for tet in gluings for g in tet):
        raise ParseError("triangulation has boundary facets; need an ideal one")
    if len(digits) != len(gluings):
        raise ParseError(
            f"expected {len(gluings)} angle digits, got {len(digits)}"
        )
    if not all(d in "012" for d in digits):
        raise ParseError("angle digit out of range (must be 0, 1, or 2)")
    tri = TautTriangulation(
        sig=sig, iso_sig=iso, angles=[int(d) for d in digits], gluings=gluings
    )
    _build_edge_classes(tri)
    for cls in tri.edge_classes:
        if cls.pi_count != 2:
            raise NotTaut(
                f"edge {cls.index} carries total angle {cls.pi_count}*pi, not 2*pi"
            )
    _orient(tri)
    _transverse(tri)
    _build_face_classes(tri)
    _build_vertex_classes(tri)
    return tri
