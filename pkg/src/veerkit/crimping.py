"""Crimped decomposition: bigons, toggle and fan squares, stations.

Around each veering edge, the two pi positions split the cyclic list of
adjacent tetrahedra into two runs of equatorial squares, one per side.
A side with at least two squares is crimped: its collar folds into a
single bigon bounded by the veering edge and a new crimped edge.  Each
equatorial square then loses one strip per crimped side; the remainder
is a toggle square (four cusps) or a fan square.

Stations are the chains of short arcs cutting the toggle-square cusps
off; arcs chain across crimped edges, matching cusps at the same end of
the shared crimped edge.  A station is upper or lower according to the
colour order (red then blue, anticlockwise viewed from above) of the
two veering edges its cusps sit between.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .triangulation import (
    EDGE_VERTICES,
    EdgeEmbedding,
    TautTriangulation,
    edge_index,
)
from .veering import Colour, TetClass, VeeringStructure
from .shearing import ShearingRegion, shearing_decomposition


class CrimpingError(ValueError):
    """Structure outside what a veering triangulation can produce."""


@dataclass(frozen=True)
class EdgeSide:
    """One side of a veering edge: the run of squares between the two pi
    positions, in the cyclic order around the edge.

    `prev_pi` and `next_pi` are the pi embeddings flanking the run; the
    edge is the top edge of one flanking tetrahedron and the bottom edge
    of the other, which orients the stack vertically.
    """

    index: int
    edge_class: int
    colour: Colour
    run: tuple[EdgeEmbedding, ...]
    prev_pi: EdgeEmbedding
    next_pi: EdgeEmbedding

    @property
    def crimped(self) -> bool:
        return len(self.run) >= 2

    @property
    def end_tets(self) -> tuple[int, int]:
        return (self.run[0].tet, self.run[-1].tet)


@dataclass(frozen=True)
class CrimpedBigon:
    """The folded collar of a crimped side: bounded by the veering edge
    and the crimped edge with the same index as the side."""

    side: int
    edge_class: int
    colour: Colour
    squares: tuple[int, ...]  # tets of the run, ends are toggles
    end_toggles: tuple[int, int]


KIND_UPPER, KIND_LOWER = "upper", "lower"


@dataclass(frozen=True)
class Cusp:
    """A toggle-square cusp, at a corner of the equatorial square.

    `before` and `after` are the two veering-edge sides adjacent to the
    corner, in anticlockwise order viewed from above; their crimped
    edges carry the station arc of this cusp.
    """

    tet: int
    corner: int
    kind: str
    before: int  # EdgeSide index of the side entering the corner
    after: int  # EdgeSide index of the side leaving the corner


@dataclass(frozen=True)
class ToggleSquare:
    tet: int
    corners: tuple[int, int, int, int]  # anticlockwise viewed from above
    cusps: tuple[Cusp, Cusp, Cusp, Cusp]
    bigons: tuple[int, int, int, int]  # EdgeSide indices, by corner order


@dataclass(frozen=True)
class FanSquare:
    tet: int
    bigons: tuple[int, int]


@dataclass(frozen=True)
class Station:
    index: int
    kind: str
    cusps: tuple[tuple[int, int], ...]  # (tet, corner)


@dataclass
class CrimpedDecomposition:
    v: VeeringStructure
    regions: list[ShearingRegion]
    sides: list[EdgeSide]
    side_of: dict[tuple[int, int], int]  # (tet, model edge) -> EdgeSide
    bigons: list[CrimpedBigon]
    toggle_squares: dict[int, ToggleSquare]
    fan_squares: dict[int, FanSquare]
    stations: list[Station] = field(default_factory=list)

    @property
    def crimped_edges(self) -> list[EdgeSide]:
        """Crimped edges are in bijection with the crimped sides."""
        return [s for s in self.sides if s.crimped]


def _edge_sides(v: VeeringStructure) -> tuple[list[EdgeSide], dict]:
    tri = v.tri
    sides: list[EdgeSide] = []
    side_of: dict[tuple[int, int], int] = {}
    for cls in tri.edge_classes:
        embs = cls.embeddings
        n = len(embs)
        pis = [i for i, e in enumerate(embs) if tri.is_pi_edge(e.tet, e.edge)]
        if len(pis) != 2:
            raise CrimpingError("edge without exactly two pi positions")
        i, j = pis
        for lo, hi in ((i, j), (j, i + n)):
            run = tuple(embs[k % n] for k in range(lo + 1, hi))
            if not run:
                raise CrimpingError(
                    f"empty side of edge {cls.index}: consecutive pi positions"
                )
            toggles = [
                k
                for k, e in enumerate(run)
                if v.tet_class[e.tet] is TetClass.TOGGLE
            ]
            if len(run) == 1:
                if toggles:
                    raise CrimpingError(
                        f"lone toggle square on a side of edge {cls.index}"
                    )
            elif toggles != [0, len(run) - 1]:
                raise CrimpingError(
                    f"stack around edge {cls.index} not bounded by toggles"
                )
            side = EdgeSide(
                len(sides),
                cls.index,
                v.edge_colour[cls.index],
                run,
                embs[lo % n],
                embs[hi % n],
            )
            for emb in run:
                side_of[(emb.tet, emb.edge)] = side.index
            sides.append(side)
    return sides, side_of


def crimp(
    v: VeeringStructure, regions: list[ShearingRegion] | None = None
) -> CrimpedDecomposition:
    """Build the crimped decomposition; raises CrimpingError on
    structure no veering triangulation can have."""
    tri = v.tri
    if regions is None:
        regions = shearing_decomposition(v)
    sides, side_of = _edge_sides(v)

    bigons = [
        CrimpedBigon(
            s.index,
            s.edge_class,
            s.colour,
            tuple(e.tet for e in s.run),
            s.end_tets,
        )
        for s in sides
        if s.crimped
    ]

    toggle_squares: dict[int, ToggleSquare] = {}
    fan_squares: dict[int, FanSquare] = {}
    for tet in range(tri.n_tets):
        cyc = tri.square_cycle(tet)
        side_ids = []
        for k in range(4):
            e = edge_index(cyc[k], cyc[(k + 1) % 4])
            side_ids.append(side_of[(tet, e)])
        crimped_here = [s for s in side_ids if sides[s].crimped]
        if v.tet_class[tet] is TetClass.TOGGLE:
            if len(crimped_here) != 4:
                raise CrimpingError(
                    f"toggle square of tet {tet} with an uncrimped side"
                )
            cusps = []
            for k in range(4):
                before = side_ids[(k + 3) % 4]
                after = side_ids[k]
                kind = (
                    KIND_UPPER
                    if sides[before].colour is Colour.RED
                    else KIND_LOWER
                )
                cusps.append(Cusp(tet, cyc[k], kind, before, after))
            if sum(c.kind == KIND_UPPER for c in cusps) != 2:
                raise CrimpingError(
                    f"cusp kinds of tet {tet} do not alternate"
                )
            toggle_squares[tet] = ToggleSquare(
                tet, cyc, tuple(cusps), tuple(side_ids)
            )
        else:
            if len(crimped_here) != 2:
                raise CrimpingError(
                    f"fan square of tet {tet} with {len(crimped_here)} "
                    "crimped sides"
                )
            fan_squares[tet] = FanSquare(tet, tuple(crimped_here))

    dec = CrimpedDecomposition(
        v, regions, sides, side_of, bigons, toggle_squares, fan_squares
    )
    dec.stations = _stations(dec)
    return dec


def _match_across(dec: CrimpedDecomposition, cusp: Cusp, side_id: int):
    """The cusp of the toggle square at the other end of the crimped
    side, at the same end of the shared crimped edge."""
    side = dec.sides[side_id]
    mine = [
        e
        for e in (side.run[0], side.run[-1])
        if e.tet == cusp.tet and cusp.corner in (e.a, e.b)
    ]
    if not mine:
        raise CrimpingError("toggle square is not at the end of its stack")
    emb = mine[0]
    other = side.run[-1] if emb is side.run[0] else side.run[0]
    corner = other.a if cusp.corner == emb.a else other.b
    return (other.tet, corner)


def _stations(dec: CrimpedDecomposition) -> list[Station]:
    from .shearing import _UnionFind

    uf = _UnionFind()
    kinds: dict[tuple[int, int], str] = {}
    for sq in dec.toggle_squares.values():
        for c in sq.cusps:
            key = (c.tet, c.corner)
            kinds[key] = c.kind
            uf.find(key)
            for side_id in (c.before, c.after):
                uf.union(key, _match_across(dec, c, side_id))
    groups: dict = {}
    for key in kinds:
        groups.setdefault(uf.find(key), []).append(key)
    stations = []
    for members in sorted(groups.values()):
        ks = {kinds[m] for m in members}
        if len(ks) != 1:
            raise CrimpingError("station mixes upper and lower cusps")
        stations.append(Station(len(stations), ks.pop(), tuple(sorted(members))))
    return stations


def monochromatic_components(
    dec: CrimpedDecomposition,
) -> dict[Colour, list[list[int]]]:
    """Components of the union of same-coloured crimped regions.

    Regions of one colour are glued to each other along fan squares
    (between the two halves of a fan tetrahedron) and along crimped
    bigons (between the end toggles of a stack).
    """
    from .shearing import _UnionFind

    v = dec.v
    region_of: dict[tuple[int, bool], int] = {}
    for reg in dec.regions:
        for h in reg.halves:
            region_of[h] = reg.index

    out: dict[Colour, list[list[int]]] = {}
    for colour in (Colour.RED, Colour.BLUE):
        uf = _UnionFind()
        for reg in dec.regions:
            if reg.colour is colour:
                uf.find(reg.index)
        for tet, sq in dec.fan_squares.items():
            if v.top_colour(tet) is colour:
                uf.union(region_of[(tet, True)], region_of[(tet, False)])
        for b in dec.bigons:
            if b.colour is colour:
                t1, t2 = b.end_toggles
                uf.union(
                    region_of[(t1, v.top_colour(t1) is colour)],
                    region_of[(t2, v.top_colour(t2) is colour)],
                )
        groups: dict = {}
        for reg in dec.regions:
            if reg.colour is colour:
                groups.setdefault(uf.find(reg.index), []).append(reg.index)
        out[colour] = sorted(groups.values())
    return out
