"""Shearing decomposition and the mid-surface.

Cutting every tetrahedron along its equatorial square leaves
half-tetrahedra, each with exactly two free triangular faces.  The face
gluings therefore chain the half-tetrahedra into cycles; each cycle,
thickened, is a shearing region (a taut solid torus).  The half-diamond
of each half-tetrahedron survives as a triangular cell; a region's cycle
of half-diamonds is its mid-band, and the mid-bands of one colour glue
up into the mid-surface of that colour.

The gluing combinatorics of the mid-surface:

  * diagonal edges glue in pairs through the triangular faces,
  * bases glue in pairs inside fan tetrahedra (forming full diamonds),
  * the outer quarters of toggle bases glue in pairs through the
    crimped bigons: around each veering edge, each side is a stack of
    squares with toggle squares exactly at the two ends, and crimping
    folds the stack so that the two extreme toggles' quarters meet,
  * the central half of each toggle base is a boundary arc.

Twist data: each half-diamond faces one of the two opposite-coloured
equatorial edges of its half-tetrahedron; transporting this choice
through a gluing either preserves or reverses it, which gives the
parity of the gluing.  Orientability and the minimal twisted-gluing
count over transverse orientations of the mid-bands follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .triangulation import (
    EDGE_VERTICES,
    TautTriangulation,
    edge_index,
    other_vertices,
)
from .veering import Colour, TetClass, VeeringStructure


class ShearingError(ValueError):
    """Structure outside what a veering triangulation can produce."""


# A half-tetrahedron is (tet index, is_upper).
Half = tuple[int, bool]


@dataclass
class ShearingRegion:
    """A cycle of half-tetrahedra glued along their free faces.

    `halves[i]` and `halves[i+1]` are glued across `faces[i]` (a face of
    `halves[i]`'s tetrahedron).  The cycle alternates upper and lower
    halves, so the length is even.
    """

    index: int
    colour: Colour
    halves: list[Half]
    faces: list[int]

    @property
    def length(self) -> int:
        return len(self.halves)


def _free_faces(tri: TautTriangulation, half: Half) -> tuple[int, int]:
    tet, upper = half
    return tri.upper_faces(tet) if upper else tri.lower_faces(tet)


def shearing_decomposition(v: VeeringStructure) -> list[ShearingRegion]:
    """The canonical shearing decomposition: one region per cycle."""
    tri = v.tri
    regions: list[ShearingRegion] = []
    seen: set[Half] = set()
    for tet in range(tri.n_tets):
        for upper in (True, False):
            start: Half = (tet, upper)
            if start in seen:
                continue
            colour = v.top_colour(tet) if upper else v.bottom_colour(tet)
            halves = [start]
            faces = []
            half = start
            face = min(_free_faces(tri, half))
            while True:
                faces.append(face)
                glu = tri.gluings[half[0]][face]
                assert glu is not None
                nt, nf, _ = glu
                nxt: Half = (nt, not half[1])
                if nxt == start:
                    break
                halves.append(nxt)
                f1, f2 = _free_faces(tri, nxt)
                face = f2 if f1 == nf else f1
                half = nxt
            for h in halves:
                seen.add(h)
            if len(halves) % 2 != 0:
                raise ShearingError(
                    f"shearing region of odd length {len(halves)}"
                )
            regions.append(
                ShearingRegion(len(regions), colour, halves, faces)
            )
    return regions


# --- Mid-surface cell complex -------------------------------------------
#
# Each half-diamond is laid out as a congruent Euclidean triangle in the
# coordinates of its mid-band: apex at x = i (its position along the
# band), base from x = i - 1 to x = i + 1 on the opposite boundary.
# Sides of a cell are named "left" (apex to base at i - 1), "right"
# (apex to base at i + 1), and the base.  Toggle bases are subdivided
# into quarter / boundary arc / quarter.

LEFT, RIGHT, BASE = "left", "right", "base"
QUARTER_L, ARC, QUARTER_R = "quarterL", "arc", "quarterR"


@dataclass
class HalfDiamond:
    index: int
    tet: int
    upper: bool
    colour: Colour
    toggle: bool
    region: int
    position: int
    apex_edge: int  # model pi edge of the half
    corner_left: int  # model equatorial edge at the left base corner
    corner_right: int
    side_edges: tuple[int, int]  # opposite-coloured equatorial edges

    @property
    def half(self) -> Half:
        return (self.tet, self.upper)


@dataclass(frozen=True)
class Gluing:
    """An identified pair of cell sides, with orientation parity.

    `kind` is "diagonal", "base", or "quarter".  `twisted` records
    whether the gluing reverses the reference transverse orientations
    of the two cells.
    """

    kind: str
    cell_a: int
    side_a: str
    cell_b: int
    side_b: str
    twisted: bool


@dataclass
class MidSurface:
    colour: Colour
    cells: list[HalfDiamond]
    gluings: list[Gluing]
    regions: list[int]  # region indices of this colour, i.e. the bands
    euler: int = 0
    boundary_components: int = 0
    orientable: bool = False
    min_twisted: int = 0
    band_orientations: dict[int, int] = field(default_factory=dict)
    homeo_type: str = ""

    def cell_of(self, half: Half) -> HalfDiamond:
        return self._by_half[half]

    def finalise_lookup(self) -> None:
        self._by_half = {c.half: c for c in self.cells}


def _run_side_edge(
    tri: TautTriangulation, tet: int, model_edge: int, face: int
) -> int:
    """The equatorial edge of `tet` other than `model_edge` in `face`.

    This is the opposite-coloured equatorial edge lying in the given
    face; a half-diamond's transverse orientation points towards or away
    from it.
    """
    verts = [x for x in range(4) if x != face]
    for a in range(3):
        for b in range(a + 1, 3):
            e = edge_index(verts[a], verts[b])
            if e != model_edge and not tri.is_pi_edge(tet, e):
                return e
    raise AssertionError("face has a single equatorial edge besides the pi one")


def _toggle_hd_half(v: VeeringStructure, tet: int, colour: Colour) -> bool:
    """Whether the `colour`-coloured half-diamond of a toggle is upper."""
    return v.top_colour(tet) is colour


def _quarter_pairs(v: VeeringStructure, colour: Colour):
    """Pairs of toggle corners glued through crimped bigons.

    Around a veering edge of the given colour, each side of the edge is
    a stack of equatorial squares; toggles occur exactly at the two ends
    of every stack (or nowhere, for a stack of fans).  The two end
    toggles' half-diamond quarters are glued by the crimping fold.
    Returns pairs of edge embeddings (carrying the class-consistent
    orientation of the veering edge, used for the twist parity).
    """
    tri = v.tri
    pairs = []
    for cls in tri.edge_classes:
        if v.edge_colour[cls.index] is not colour:
            continue
        embs = cls.embeddings
        n = len(embs)
        pis = [
            i for i, e in enumerate(embs) if tri.is_pi_edge(e.tet, e.edge)
        ]
        if len(pis) != 2:
            raise ShearingError("edge without exactly two pi positions")
        i, j = pis
        for lo, hi in ((i, j), (j, i + n)):
            run = [embs[k % n] for k in range(lo + 1, hi)]
            toggles = [
                k
                for k, e in enumerate(run)
                if v.tet_class[e.tet] is TetClass.TOGGLE
            ]
            if not toggles:
                continue
            if toggles != [0, len(run) - 1] or len(run) < 2:
                raise ShearingError(
                    f"toggles inside a fan stack around edge {cls.index}"
                )
            pairs.append((run[0], run[-1]))
    return pairs


def mid_surface(
    v: VeeringStructure,
    colour: Colour,
    regions: list[ShearingRegion] | None = None,
) -> MidSurface:
    """Build the mid-surface of one colour, with topology and twists."""
    tri = v.tri
    if regions is None:
        regions = shearing_decomposition(v)

    cells: list[HalfDiamond] = []
    by_half: dict[Half, int] = {}
    for reg in regions:
        if reg.colour is not colour:
            continue
        n = reg.length
        for i, (tet, upper) in enumerate(reg.halves):
            apex = tri.top_edge(tet) if upper else tri.bottom_edge(tet)
            eq = tri.equatorial_edges(tet)
            corners = [e for e in eq if v.colour_of(tet, e) is colour]
            sides = tuple(e for e in eq if v.colour_of(tet, e) is not colour)
            # The right corner is shared with the next half-diamond in
            # the band, through the face crossed by the region walk.
            face_next = reg.faces[i]
            in_face = [
                e for e in corners if face_next not in EDGE_VERTICES[e]
            ]
            # An edge lies in a face iff the face's opposite vertex is
            # not an endpoint; EDGE_VERTICES[e] are the endpoints, so e
            # is in face f iff f is not an endpoint of e.
            right = in_face[0]
            left = corners[1] if corners[0] == right else corners[0]
            cell = HalfDiamond(
                index=len(cells),
                tet=tet,
                upper=upper,
                colour=colour,
                toggle=v.tet_class[tet] is TetClass.TOGGLE,
                region=reg.index,
                position=i,
                apex_edge=apex,
                corner_left=left,
                corner_right=right,
                side_edges=sides,
            )
            by_half[(tet, upper)] = len(cells)
            cells.append(cell)

    gluings: list[Gluing] = []

    def ref(cell: HalfDiamond) -> int:
        return min(cell.side_edges)

    # Diagonal gluings: consecutive half-diamonds of each band.
    for reg in regions:
        if reg.colour is not colour:
            continue
        n = reg.length
        for i in range(n):
            a = cells[by_half[reg.halves[i]]]
            b = cells[by_half[reg.halves[(i + 1) % n]]]
            face = reg.faces[i]
            s_a = _run_side_edge(tri, a.tet, a.corner_right, face)
            glu = tri.gluings[a.tet][face]
            assert glu is not None
            _, nf, perm = glu
            s_b = _run_side_edge(tri, b.tet, b.corner_left, nf)
            # Transport preserves facing the shared opposite-coloured
            # equatorial edge of the face.
            twisted = (ref(a) == s_a) != (ref(b) == s_b)
            gluings.append(
                Gluing("diagonal", a.index, RIGHT, b.index, LEFT, twisted)
            )

    # Base gluings inside fan tetrahedra.
    for tet in range(tri.n_tets):
        if v.tet_class[tet] is TetClass.TOGGLE:
            continue
        if v.top_colour(tet) is not colour:
            continue
        a = cells[by_half[(tet, True)]]
        b = cells[by_half[(tet, False)]]
        # Reference side edges coincide (same tetrahedron), so the
        # transported orientations agree.
        gluings.append(Gluing("base", a.index, BASE, b.index, BASE, False))

    # Quarter gluings through crimped bigons.  The fold identifies the
    # two toggle squares preserving the direction along the veering
    # edge, so the gluing is untwisted exactly when the two reference
    # normals point the same way along the (consistently oriented) edge.
    def points_forward(cell: HalfDiamond, emb) -> bool:
        shared = set(EDGE_VERTICES[emb.edge]) & set(EDGE_VERTICES[ref(cell)])
        assert len(shared) == 1
        return shared.pop() == emb.b

    for emb1, emb2 in _quarter_pairs(v, colour):
        t1, t2 = emb1.tet, emb2.tet
        e1, e2 = emb1.edge, emb2.edge
        a = cells[by_half[(t1, _toggle_hd_half(v, t1, colour))]]
        b = cells[by_half[(t2, _toggle_hd_half(v, t2, colour))]]
        if e1 not in (a.corner_left, a.corner_right) or e2 not in (
            b.corner_left,
            b.corner_right,
        ):
            raise ShearingError("toggle corner not found on its half-diamond")
        side_a = QUARTER_L if a.corner_left == e1 else QUARTER_R
        side_b = QUARTER_L if b.corner_left == e2 else QUARTER_R
        twisted = points_forward(a, emb1) != points_forward(b, emb2)
        gluings.append(Gluing("quarter", a.index, side_a, b.index, side_b, twisted))

    surface = MidSurface(
        colour=colour,
        cells=cells,
        gluings=gluings,
        regions=[r.index for r in regions if r.colour is colour],
    )
    surface.finalise_lookup()
    _compute_topology(surface)
    _minimise_twists(surface, regions)
    return surface


# --- Diagonal strips -----------------------------------------------------
#
# Every cell is realised as the Euclidean triangle with base from (0, 0)
# to (2, 0) and apex (1, 1), so all side gluings become rational plane
# isometries.  A diagonal strip is traced by the 45-degree straight-line
# flow launched from the centre of a boundary arc: it crosses half-
# diamonds diagonally and stops on the next boundary arc it hits.  Each
# strip is traced twice, once from each of its ends.

_VC: dict[str, tuple[Fraction, Fraction]] = {
    "apex": (Fraction(1), Fraction(1)),
    "cl": (Fraction(0), Fraction(0)),
    "cr": (Fraction(2), Fraction(0)),
    "al": (Fraction(1, 2), Fraction(0)),
    "ar": (Fraction(3, 2), Fraction(0)),
}

_Pt = tuple[Fraction, Fraction]


def _out_normal(side: str) -> _Pt:
    (a, b) = _side_vertices_keys(side)
    A, B = _VC[a], _VC[b]
    n = (A[1] - B[1], B[0] - A[0])
    mid = ((A[0] + B[0]) / 2, (A[1] + B[1]) / 2)
    to_centroid = (Fraction(1) - mid[0], Fraction(1, 3) - mid[1])
    if n[0] * to_centroid[0] + n[1] * to_centroid[1] > 0:
        return (-n[0], -n[1])
    return n


def _side_vertices_keys(side: str) -> tuple[str, str]:
    return {
        LEFT: ("apex", "cl"),
        RIGHT: ("apex", "cr"),
        BASE: ("cl", "cr"),
        QUARTER_L: ("cl", "al"),
        ARC: ("al", "ar"),
        QUARTER_R: ("cr", "ar"),
    }[side]


_Iso = tuple[tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]], _Pt]


def _apply(iso: _Iso, p: _Pt) -> _Pt:
    (r, t) = iso
    return (
        r[0][0] * p[0] + r[0][1] * p[1] + t[0],
        r[1][0] * p[0] + r[1][1] * p[1] + t[1],
    )


def _apply_linear(iso: _Iso, d: _Pt) -> _Pt:
    r = iso[0]
    return (r[0][0] * d[0] + r[0][1] * d[1], r[1][0] * d[0] + r[1][1] * d[1])


def _side_iso(A: list[_Pt], B: list[_Pt], na: _Pt, nb: _Pt) -> _Iso:
    """The isometry taking matched segment endpoints A to B, with the
    outward normal of the source side mapped to the inward normal of the
    target side."""
    u = (A[1][0] - A[0][0], A[1][1] - A[0][1])
    w = (B[1][0] - B[0][0], B[1][1] - B[0][1])
    n2 = u[0] * u[0] + u[1] * u[1]
    assert w[0] * w[0] + w[1] * w[1] == n2
    c = Fraction(w[0] * u[0] + w[1] * u[1], n2)
    s = Fraction(w[1] * u[0] - w[0] * u[1], n2)
    rot = ((c, -s), (s, c))
    c2 = Fraction(w[0] * u[0] - w[1] * u[1], n2)
    s2 = Fraction(w[0] * u[1] + w[1] * u[0], n2)
    refl = ((c2, s2), (s2, -c2))
    want = (-nb[0], -nb[1])
    for r in (rot, refl):
        if (
            r[0][0] * na[0] + r[0][1] * na[1],
            r[1][0] * na[0] + r[1][1] * na[1],
        ) == want:
            t = (
                B[0][0] - (r[0][0] * A[0][0] + r[0][1] * A[0][1]),
                B[0][1] - (r[1][0] * A[0][0] + r[1][1] * A[0][1]),
            )
            return (r, t)
    raise AssertionError("no isometry matches the side normals")


@dataclass(frozen=True)
class DiagonalStrip:
    """A maximal diagonal chain of half-diamonds between boundary arcs.

    `cells` lists cell indices in traversal order; a cell may repeat when
    the strip passes through it more than once.
    """

    cells: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.cells)


def _strip_portals(surface: MidSurface) -> dict[tuple[int, str], tuple[int, str, _Iso]]:
    portals: dict[tuple[int, str], tuple[int, str, _Iso]] = {}
    for g in surface.gluings:
        vm = _gluing_vertex_map(g, surface.cells)
        A = [_VC[va] for va, vb in vm]
        B = [_VC[vb] for va, vb in vm]
        na, nb = _out_normal(g.side_a), _out_normal(g.side_b)
        portals[(g.cell_a, g.side_a)] = (g.cell_b, g.side_b, _side_iso(A, B, na, nb))
        portals[(g.cell_b, g.side_b)] = (g.cell_a, g.side_a, _side_iso(B, A, nb, na))
    return portals


class _VertexHit(Exception):
    """The flow line ran into a cell vertex; retry from a nudged start."""


def _trace_strip(
    surface: MidSurface,
    portals: dict[tuple[int, str], tuple[int, str, _Iso]],
    cell: int,
    p: _Pt,
    d: _Pt,
) -> list[int]:
    cells = [cell]
    for _ in range(64 * len(surface.cells) + 64):
        best: tuple[Fraction, str, Fraction, _Pt] | None = None
        for side in _cell_sides(surface.cells[cell]):
            ka, kb = _side_vertices_keys(side)
            A, B = _VC[ka], _VC[kb]
            e = (B[0] - A[0], B[1] - A[1])
            den = d[0] * e[1] - d[1] * e[0]
            if den == 0:
                continue
            t = ((A[0] - p[0]) * e[1] - (A[1] - p[1]) * e[0]) / den
            s = ((A[0] - p[0]) * d[1] - (A[1] - p[1]) * d[0]) / den
            if t <= 0 or s < 0 or s > 1:
                continue
            if best is None or t < best[0]:
                best = (t, side, s, (p[0] + t * d[0], p[1] + t * d[1]))
        assert best is not None
        _, side, s, q = best
        if side == ARC and 0 < s < 1:
            return cells
        if s == 0 or s == 1:
            ka, kb = _side_vertices_keys(side)
            if (ka if s == 0 else kb) in ("apex", "cl", "cr"):
                raise _VertexHit
            # Hitting the very end of an arc counts as a quarter hit:
            # the boundary arc is open at the station ends.
            if side == ARC:
                side = QUARTER_L if s == 0 else QUARTER_R
        cell, side, iso = portals[(cell, side)]
        p, d = _apply(iso, q), _apply_linear(iso, d)
        cells.append(cell)
    raise ShearingError("diagonal flow failed to close up")


def diagonal_strips(surface: MidSurface) -> list[DiagonalStrip]:
    """All diagonal strips of the mid-surface, each reported once."""
    portals = _strip_portals(surface)
    traces: list[tuple[int, ...]] = []
    for c in surface.cells:
        if not c.toggle:
            continue
        for dx in (1, -1):
            for nudge in (0, 1, -1, 2, -2, 3, -3):
                start = (Fraction(1) + Fraction(nudge, 64), Fraction(0))
                try:
                    traces.append(
                        tuple(
                            _trace_strip(
                                surface,
                                portals,
                                c.index,
                                start,
                                (Fraction(dx), Fraction(1)),
                            )
                        )
                    )
                    break
                except _VertexHit:
                    continue
            else:
                raise ShearingError("diagonal flow degenerate at every nudge")
    # Each strip is traced from both of its ends; fold the reversals.
    from collections import Counter

    counts = Counter(min(t, t[::-1]) for t in traces)
    strips: list[DiagonalStrip] = []
    for t in sorted(counts):
        n = counts[t]
        if n % 2:
            raise ShearingError("unpaired diagonal strip trace")
        strips.extend(DiagonalStrip(t) for _ in range(n // 2))
    return strips


def _cell_sides(cell: HalfDiamond) -> list[str]:
    if cell.toggle:
        return [LEFT, QUARTER_L, ARC, QUARTER_R, RIGHT]
    return [LEFT, BASE, RIGHT]


def _side_vertices(cell: HalfDiamond, side: str) -> tuple[str, str]:
    """Endpoints of a side, as vertex keys local to the cell.

    Vertex keys: "apex", "cl", "cr" (base corners), "al", "ar" (arc
    endpoints of a toggle base).
    """
    return _side_vertices_keys(side)


def _gluing_vertex_map(g: Gluing, cells: list[HalfDiamond]):
    """Pairs of identified local vertices for a gluing."""
    if g.kind == "diagonal":
        # Apex of the lower cell is a base corner of the upper cell and
        # vice versa: the shared edge swaps apex and corner.
        va = _side_vertices(cells[g.cell_a], g.side_a)
        vb = _side_vertices(cells[g.cell_b], g.side_b)
        return [(va[0], vb[1]), (va[1], vb[0])]
    if g.kind == "base":
        # Corners match by model edge.
        a, b = cells[g.cell_a], cells[g.cell_b]
        if a.corner_left == b.corner_left:
            return [("cl", "cl"), ("cr", "cr")]
        return [("cl", "cr"), ("cr", "cl")]
    # Quarter: corner to corner, arc end to arc end.
    ca = "cl" if g.side_a == QUARTER_L else "cr"
    cb = "cl" if g.side_b == QUARTER_L else "cr"
    aa = "al" if g.side_a == QUARTER_L else "ar"
    ab = "al" if g.side_b == QUARTER_L else "ar"
    return [(ca, cb), (aa, ab)]


class _UnionFind:
    def __init__(self) -> None:
        self.parent: dict = {}

    def find(self, x):
        p = self.parent.setdefault(x, x)
        if p != x:
            p = self.parent[x] = self.find(p)
        return p

    def union(self, x, y) -> None:
        self.parent[self.find(x)] = self.find(y)


def _compute_topology(surface: MidSurface) -> None:
    cells, gluings = surface.cells, surface.gluings
    uf = _UnionFind()
    for c in cells:
        for vtx in ("apex", "cl", "cr") + (("al", "ar") if c.toggle else ()):
            uf.find((c.index, vtx))
    for g in gluings:
        for va, vb in _gluing_vertex_map(g, cells):
            uf.union((g.cell_a, va), (g.cell_b, vb))
    n_vertices = len({uf.find(x) for x in list(uf.parent)})
    n_side_slots = sum(len(_cell_sides(c)) for c in cells)
    n_glued = len(gluings)
    n_edges = n_glued + (n_side_slots - 2 * n_glued)
    surface.euler = n_vertices - n_edges + len(cells)

    # Boundary components: arcs joined end to end through the quarter
    # gluings.  Each boundary circle is a component of the graph whose
    # edges are the arcs themselves plus the endpoint identifications.
    buf = _UnionFind()
    for c in cells:
        if c.toggle:
            buf.union((c.index, "al"), (c.index, "ar"))
    for g in gluings:
        if g.kind != "quarter":
            continue
        ea = "al" if g.side_a == QUARTER_L else "ar"
        eb = "al" if g.side_b == QUARTER_L else "ar"
        buf.union((g.cell_a, ea), (g.cell_b, eb))
    surface.boundary_components = len(
        {buf.find(x) for x in list(buf.parent)}
    )


def _minimise_twists(
    surface: MidSurface, regions: list[ShearingRegion]
) -> None:
    """Orient each band to minimise the number of twisted gluings."""
    import itertools

    cells, gluings = surface.cells, surface.gluings
    bands = surface.regions
    band_pos = {b: k for k, b in enumerate(bands)}

    # Within a band, diagonal gluings force the relative orientations of
    # its cells; accumulate each cell's sign relative to its band.
    sign = [1] * len(cells)
    for g in gluings:
        if g.kind != "diagonal":
            continue
        a, b = cells[g.cell_a], cells[g.cell_b]
        if b.position != 0:
            sign[b.index] = sign[a.index] * (-1 if g.twisted else 1)
    for g in gluings:
        if g.kind != "diagonal":
            continue
        a, b = cells[g.cell_a], cells[g.cell_b]
        if b.position == 0:
            # Closing gluing of the band: check coherence.
            closed = sign[a.index] * (-1 if g.twisted else 1)
            if closed != sign[b.index]:
                raise ShearingError(
                    "mid-band is one-sided; region is not transverse"
                )

    inter = [g for g in gluings if g.kind != "diagonal"]
    best = None
    best_flips = None
    for flips in itertools.product((1, -1), repeat=len(bands)):
        count = 0
        for g in inter:
            a, b = cells[g.cell_a], cells[g.cell_b]
            sa = sign[a.index] * flips[band_pos[a.region]]
            sb = sign[b.index] * flips[band_pos[b.region]]
            if (sa != sb) != g.twisted:
                count += 1
        if best is None or count < best:
            best, best_flips = count, flips
    surface.min_twisted = best or 0
    surface.band_orientations = {
        b: best_flips[k] for k, b in enumerate(bands)
    }
    surface.orientable = surface.min_twisted == 0

    chi, nb = surface.euler, surface.boundary_components
    if surface.orientable:
        genus2 = 2 - chi - nb
        if genus2 < 0 or genus2 % 2:
            raise ShearingError("inconsistent orientable surface data")
        surface.homeo_type = f"S_{{{genus2 // 2},{nb}}}"
    else:
        k = 2 - chi - nb
        if k <= 0:
            raise ShearingError("inconsistent non-orientable surface data")
        surface.homeo_type = f"N_{{{k},{nb}}}"
