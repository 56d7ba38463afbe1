"""Junctions of stations, with their heights, widths, radii and blocks.

A station travels vertically: from a toggle-square cusp it follows the
adjacent crimped edge through the stack of squares to the matching cusp
of the toggle square at the far end.  The segment between two
consecutive toggle squares is a junction; it is in bijection with
(crimped side, station kind).

The height h of a junction counts the shearing regions whose interior
it crosses (the slabs between consecutive squares of its stack).  The
width w is the height of the neighbouring junction reached by walking
along the paring locus of the top (for upper junctions; bottom for
lower) slab, past the nearest cusp of the junction's longitudinal
crimped edge.  The radius divides a universal constant by the larger
of h' + w' and h'' + w'' for the two junctions adjacent across the two
cusps of that crimped edge, and the block data follow: a junction's
siding carries 2h + w blocks of length kappa * r / (2h + w).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .triangulation import EdgeEmbedding, edge_index
from .veering import Colour
from .crimping import (
    KIND_LOWER,
    KIND_UPPER,
    CrimpedDecomposition,
    CrimpingError,
    EdgeSide,
)


@dataclass(frozen=True)
class Constants:
    """Rational surrogates for the geometric constants.

    The combinatorial outputs only use these through strict sign and
    order comparisons, so any positive rational values give the same
    results; the defaults stand in for sqrt(3), 2/sqrt(3) and a small
    separation constant.  For the embedded cross-section geometry eps
    must stay below the slack that separates station centres from the
    quarter points of the crimped edges, so that every siding fits
    inside its station's footprint.
    """

    slope: Fraction = Fraction(2)
    kappa: Fraction = Fraction(1)
    eps: Fraction = Fraction(1, 64)


@dataclass
class Junction:
    side: int  # EdgeSide index of the crimped edge it follows
    kind: str  # upper or lower
    top_tet: int
    bottom_tet: int
    top_corner: int  # ideal vertex, in top tetrahedron labels
    bottom_corner: int
    slabs: tuple[int, ...]  # region indices, bottom to top
    height: int
    width: int = 0
    radius: Fraction = Fraction(0)
    block_length: Fraction = Fraction(0)

    @property
    def block_count(self) -> int:
        return 2 * self.height + self.width


def oriented_run(dec: CrimpedDecomposition, side: EdgeSide):
    """The squares of the side, ordered bottom to top, plus a flag
    telling whether the cyclic order around the edge was reversed."""
    tri = dec.v.tri
    below_first = side.prev_pi.edge == tri.top_edge(side.prev_pi.tet)
    above_last = side.next_pi.edge == tri.bottom_edge(side.next_pi.tet)
    if below_first != above_last:
        raise CrimpingError("edge with both pi tetrahedra on one side")
    if below_first:
        return list(side.run), False
    return list(side.run[::-1]), True


def _stack_face(dec, side: EdgeSide, top: bool) -> int:
    """Face class crossed by the junction in its top (bottom) slab."""
    run, flipped = list(side.run), None
    _, flipped = oriented_run(dec, side)
    if top != flipped:
        emb = run[-2]
    else:
        emb = run[0]
    return dec.v.tri.face_of[(emb.tet, emb.behind)]


def _longitudinal(dec, region):
    """Per position i of the region cycle, the opposite-coloured
    equatorial edge shared through faces[i], as (EdgeSide index, edge in
    halves[i] labels, edge in halves[i+1] labels, face class)."""
    from .triangulation import EDGE_VERTICES

    tri, v = dec.v.tri, dec.v
    out = []
    n = region.length
    for i in range(n):
        tet, _ = region.halves[i]
        f = region.faces[i]
        # edge e lies in face f iff f is not one of its endpoints
        cands = [
            e
            for e in tri.equatorial_edges(tet)
            if f not in EDGE_VERTICES[e]
            and v.colour_of(tet, e) is not region.colour
        ]
        assert len(cands) == 1
        s = cands[0]
        glu = tri.gluings[tet][f]
        assert glu is not None
        nt, _, p = glu
        u, w = EDGE_VERTICES[s]
        s_next = edge_index(p[u], p[w])
        side_id = dec.side_of[(tet, s)]
        assert dec.side_of[(nt, s_next)] == side_id
        out.append((side_id, s, s_next, tri.face_of[(tet, f)]))
    return out


def _cusp_end(dec, region, longit, i: int, forward: bool) -> int:
    """Ideal vertex at the end of longitudinal edge i towards position
    i+2 (forward) or i-2, in the labels of halves[i+1] (forward) or
    halves[i] (backward)."""
    from .triangulation import EDGE_VERTICES

    tri = dec.v.tri
    n = region.length
    _, s_i, s_next, _ = longit[i]
    if forward:
        # the flanking face at position i+1, as a face of halves[i+1]
        f = region.faces[(i + 1) % n]
        u, w = EDGE_VERTICES[s_next]
        if f not in (u, w):
            raise CrimpingError("longitudinal edge misses its flanking face")
        return w if f == u else u
    prev = (i - 1) % n
    t_prev, _ = region.halves[prev]
    glu = tri.gluings[t_prev][region.faces[prev]]
    assert glu is not None
    _, nf, _ = glu  # the flanking face at position i-1, in halves[i] labels
    u, w = EDGE_VERTICES[s_i]
    if nf not in (u, w):
        raise CrimpingError("longitudinal edge misses its flanking face")
    return w if nf == u else u


def junctions(
    dec: CrimpedDecomposition, constants: Constants = Constants()
) -> dict[tuple[int, str], Junction]:
    """All junctions, keyed by (crimped side index, kind)."""
    v = dec.v
    region_of = {}
    for reg in dec.regions:
        for h in reg.halves:
            region_of[h] = reg.index

    out: dict[tuple[int, str], Junction] = {}
    for side in dec.sides:
        if not side.crimped:
            continue
        run, _ = oriented_run(dec, side)
        slabs = []
        for a, b in zip(run, run[1:]):
            slab = region_of[(a.tet, True)]
            if slab != region_of[(b.tet, False)]:
                raise CrimpingError("stack slab is not a single region")
            slabs.append(slab)
        top_emb, bottom_emb = run[-1], run[0]
        sq = dec.toggle_squares[top_emb.tet]
        kind_of = {c.corner: c.kind for c in sq.cusps}
        sq_b = dec.toggle_squares[bottom_emb.tet]
        kind_of_b = {c.corner: c.kind for c in sq_b.cusps}
        for kind in (KIND_UPPER, KIND_LOWER):
            tops = [
                x for x in (top_emb.a, top_emb.b) if kind_of[x] == kind
            ]
            if len(tops) != 1:
                raise CrimpingError("cusp kinds fail to alternate on a side")
            top_corner = tops[0]
            bottom_corner = (
                bottom_emb.a if top_corner == top_emb.a else bottom_emb.b
            )
            if kind_of_b[bottom_corner] != kind:
                raise CrimpingError("station chain changes kind in a stack")
            out[(side.index, kind)] = Junction(
                side=side.index,
                kind=kind,
                top_tet=top_emb.tet,
                bottom_tet=bottom_emb.tet,
                top_corner=top_corner,
                bottom_corner=bottom_corner,
                slabs=tuple(slabs),
                # Region-interior crossings are counted with
                # multiplicity: the downward block projection steps once
                # per crossing.
                height=len(slabs),
            )

    # Widths, then radii (which need widths of neighbouring junctions).
    neighbours: dict[tuple[int, str], tuple[int, int]] = {}
    for (side_id, kind), j in out.items():
        side = dec.sides[side_id]
        upper = kind == KIND_UPPER
        slab = j.slabs[-1] if upper else j.slabs[0]
        region = dec.regions[slab]
        longit = _longitudinal(dec, region)
        fc = _stack_face(dec, side, top=upper)
        pos = [i for i, entry in enumerate(longit) if entry[3] == fc]
        if len(pos) != 1:
            raise CrimpingError("junction face not on the slab paring locus")
        i = pos[0]
        anchor = (j.top_tet, False) if upper else (j.bottom_tet, True)
        x = j.top_corner if upper else j.bottom_corner
        n = region.length
        if region.halves[(i + 1) % n] == anchor:
            forward = _cusp_end(dec, region, longit, i, True) == x
        elif region.halves[i] == anchor:
            forward = _cusp_end(dec, region, longit, i, False) != x
        else:
            raise CrimpingError("junction half missing from its slab")
        near = longit[(i + 2) % n if forward else (i - 2) % n][0]
        far = longit[(i - 2) % n if forward else (i + 2) % n][0]
        j.width = out[(near, kind)].height
        neighbours[(side_id, kind)] = (near, far)

    other = {KIND_UPPER: KIND_LOWER, KIND_LOWER: KIND_UPPER}
    for key, j in out.items():
        near, far = neighbours[key]
        jp = out[(near, other[j.kind])]
        jpp = out[(far, j.kind)]
        denom = max(jp.height + jp.width, jpp.height + jpp.width)
        j.radius = constants.eps / denom
        j.block_length = constants.kappa * j.radius / j.block_count
    return out
