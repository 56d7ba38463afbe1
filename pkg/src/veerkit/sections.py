"""Annulus coordinates for the boundary cross-sections of crimped regions.

Each crimped shearing region is a solid torus fibred by annular
cross-sections.  Its lower boundary is the cyclic union of the
equatorial squares of the tetrahedra whose upper halves lie in the
region; the upper boundary uses the lower halves.  We lay both out in a
shared coordinate annulus: x runs around the region (one unit per
square, taken modulo n), y in [0, 1] spans the two cusp circles.

Squares are parallelograms.  On the lower boundary of a blue region the
helical (region-coloured) sides lean by -1/2 as x-displacement per unit
y; one level up the lean is +1/2, so moving through a region shears by
one unit.  Red regions mirror both signs.  The lean is not a
convention: each square's top pi-edge must project to the corresponding
diagonal of its parallelogram, which pins the sign square by square
(and it comes out constant per region).

Ideal points (cusp circles' marked points) sit at integer x on y = 0
and half-integer x on y = 1.  Junction tubes run vertically through the
regions at ideal points; each crimped edge side contributes one tube
per station kind, located by propagating the end corner of the edge
through the squares of its stack.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .triangulation import EDGE_VERTICES, TautTriangulation, edge_index
from .veering import Colour
from .crimping import (
    KIND_LOWER,
    KIND_UPPER,
    CrimpedDecomposition,
    CrimpingError,
)
from .junctions import Junction, oriented_run

Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class Side:
    """One side of a square as placed in the annulus."""

    edge: int  # model edge index within the tetrahedron
    side_id: int  # EdgeSide index of the veering edge
    colour: Colour
    crimped: bool
    role: str  # bottom / right / top / left
    a: Point  # endpoints in anticlockwise order around the square
    b: Point


@dataclass(frozen=True)
class Square:
    tet: int
    pos: int  # slot around the annulus; the square sits near x = pos
    toggle: bool
    corners: dict[int, Point]  # model vertex -> lifted position
    sides: tuple[Side, Side, Side, Side]  # anticlockwise from square_cycle
    cycle: tuple[int, int, int, int]
    kinds: dict[int, str]  # corner vertex -> station kind at that corner

    def side(self, role: str) -> Side:
        for s in self.sides:
            if s.role == role:
                return s
        raise KeyError(role)

    def corner_at(self, p: Point, n: int) -> int | None:
        for v, q in self.corners.items():
            if (q[0] - p[0]) % n == 0 and q[1] == p[1]:
                return v
        return None


@dataclass(frozen=True)
class JunctionDisk:
    """One crossing of a junction tube through an annulus level."""

    side_id: int
    kind: str
    square_pos: int  # index into Annulus.squares
    corner: int  # model vertex of that square
    point: Point  # ideal point, lifted to the square's chart
    role: str  # bottom / interior / top of the tube's vertical extent
    run_pos: int  # position of the crossed square in the oriented run
    run_len: int


@dataclass
class Annulus:
    region: int
    level: str  # "lower" or "upper" boundary of the region
    colour: Colour
    n: int
    lean: Fraction  # helical x-displacement per unit y at this level
    squares: list[Square]
    disks: list[JunctionDisk] = field(default_factory=list)

    def xmod(self, x: Fraction) -> Fraction:
        return x % self.n

    def square_of_tet(self, tet: int) -> Square:
        for sq in self.squares:
            if sq.tet == tet:
                return sq
        raise KeyError(tet)

    def disks_at(self, point: Point) -> list[JunctionDisk]:
        return [
            d
            for d in self.disks
            if (d.point[0] - point[0]) % self.n == 0 and d.point[1] == point[1]
        ]


LEVEL_LOWER, LEVEL_UPPER = "lower", "upper"


def _cycle_geometry(tri, region):
    """Rotate the region cycle to start at an upper half and return the
    lists of lower-boundary and upper-boundary tetrahedra together with
    the gluing permutations along the cycle."""
    halves, faces = list(region.halves), list(region.faces)
    if not halves[0][1]:
        halves = halves[1:] + halves[:1]
        faces = faces[1:] + faces[:1]
    if any(h[1] != (i % 2 == 0) for i, h in enumerate(halves)):
        raise CrimpingError("region halves fail to alternate")
    perms = []
    for (tet, _), f in zip(halves, faces):
        glu = tri.gluings[tet][f]
        assert glu is not None
        perms.append(glu[2])
    return halves, faces, perms


def _station_kinds(dec, tet):
    """Station kind at each corner of the square: upper where the side
    entering the corner (anticlockwise from above) is red."""
    tri = dec.v.tri
    cyc = tri.square_cycle(tet)
    kinds = {}
    for k in range(4):
        before = edge_index(cyc[(k + 3) % 4], cyc[k])
        side = dec.sides[dec.side_of[(tet, before)]]
        kinds[cyc[k]] = KIND_UPPER if side.colour is Colour.RED else KIND_LOWER
    return kinds


def _make_square(dec, tet, pos, corners, lean_hint=None):
    """Assemble a Square from corner positions; classifies sides by the
    geometry and checks the parallelogram shape."""
    tri = dec.v.tri
    cyc = tri.square_cycle(tet)
    sides = []
    for k in range(4):
        u, w = cyc[k], cyc[(k + 1) % 4]
        e = edge_index(u, w)
        es = dec.sides[dec.side_of[(tet, e)]]
        a, b = corners[u], corners[w]
        if a[1] == b[1]:
            role = "bottom" if a[1] == 0 else "top"
        else:
            lo = a if a[1] == 0 else b
            hi = b if a[1] == 0 else a
            mid = sum(c[0] for c in corners.values()) / 4
            role = "right" if (lo[0] + hi[0]) / 2 > mid else "left"
        sides.append(
            Side(e, es.index, es.colour, es.crimped, role, a, b)
        )
    roles = sorted(s.role for s in sides)
    if roles != ["bottom", "left", "right", "top"]:
        raise CrimpingError(f"square of tet {tet} is not a parallelogram")
    from .veering import TetClass

    return Square(
        tet=tet,
        pos=pos,
        toggle=dec.v.tet_class[tet] is TetClass.TOGGLE,
        corners=corners,
        sides=tuple(sides),
        cycle=cyc,
        kinds=_station_kinds(dec, tet),
    )


def _lower_layout(dec, region):
    """Corner positions for the lower-boundary squares, plus the lean."""
    tri = dec.v.tri
    halves, faces, perms = _cycle_geometry(tri, region)
    n = region.length // 2
    lows = [halves[2 * i][0] for i in range(n)]
    ups = [halves[2 * i + 1][0] for i in range(n)]
    corner_maps = []
    leans = []
    for i in range(n):
        t = lows[i]
        p = perms[2 * i]
        inv = {p[k]: k for k in range(4)}
        x0, x1 = EDGE_VERTICES[tri.bottom_edge(ups[i])]
        e_right = edge_index(inv[x0], inv[x1])
        cyc = tri.square_cycle(t)
        cyc_sides = [edge_index(cyc[k], cyc[(k + 1) % 4]) for k in range(4)]
        if e_right not in cyc_sides:
            raise CrimpingError("cycle face edge is not a square side")
        k = cyc_sides.index(e_right)
        c1, c2 = cyc[k], cyc[(k + 1) % 4]
        c3, c0 = cyc[(k + 2) % 4], cyc[(k + 3) % 4]
        a, b = EDGE_VERTICES[tri.top_edge(t)]
        if {a, b} == {c0, c2}:
            lean = Fraction(-1, 2)
        elif {a, b} == {c1, c3}:
            lean = Fraction(1, 2)
        else:
            raise CrimpingError("top pi-edge fails to be a square diagonal")
        leans.append(lean)
        x = Fraction(i)
        corner_maps.append(
            {
                c0: (x, Fraction(0)),
                c1: (x + 1, Fraction(0)),
                c2: (x + 1 + lean, Fraction(1)),
                c3: (x + lean, Fraction(1)),
            }
        )
    if len(set(leans)) != 1:
        raise CrimpingError("helical lean varies within a region")
    # The corner identifications along the cycle must close up.
    for i in range(n):
        p, q = perms[2 * i], perms[2 * i + 1]
        for v, (x, y) in corner_maps[i].items():
            if v == faces[2 * i] or p[v] == faces[2 * i + 1]:
                continue
            w = q[p[v]]
            xx, yy = corner_maps[(i + 1) % n][w]
            if (xx - x) % n != 0 or yy != y:
                raise CrimpingError("region layout fails to close up")
    return lows, ups, corner_maps, leans[0], perms, faces


def _upper_layout(dec, region, lows, ups, corner_maps, perms, faces, n):
    """Corner positions for the upper-boundary squares, inherited from
    the lower layout through the cycle gluings."""
    out = []
    for i in range(n):
        u = ups[i]
        p = perms[2 * i]
        q = perms[2 * i + 1]
        f0 = faces[2 * i]
        fu = faces[2 * i + 1]
        inv = {p[k]: k for k in range(4)}
        pos: dict[int, Point] = {}
        for w in range(4):
            got = []
            if inv[w] != f0:
                got.append(corner_maps[i][inv[w]])
            if w != fu:
                x, y = corner_maps[(i + 1) % n][q[w]]
                if (i + 1) % n != i + 1:
                    x = x + n
                got.append((x, y))
            if not got:
                raise CrimpingError("upper square corner is unplaced")
            if len(got) == 2 and (
                (got[0][0] - got[1][0]) % n != 0 or got[0][1] != got[1][1]
            ):
                raise CrimpingError("upper square corners disagree")
            pos[w] = got[0]
        out.append(pos)
    return out


def _junction_disks(dec, junctions_map, region_of, annuli):
    """Attach each junction tube crossing to the two annuli that share
    the physical level of the crossed square."""
    tri = dec.v.tri
    for (side_id, kind), j in junctions_map.items():
        side = dec.sides[side_id]
        run, _ = oriented_run(dec, side)
        corner = j.bottom_corner
        for pos, emb in enumerate(run):
            role = (
                "bottom"
                if pos == 0
                else "top" if pos == len(run) - 1 else "interior"
            )
            for is_upper_half, level in (
                (True, LEVEL_LOWER),
                (False, LEVEL_UPPER),
            ):
                ann = annuli[(region_of[(emb.tet, is_upper_half)], level)]
                sq = ann.square_of_tet(emb.tet)
                ann.disks.append(
                    JunctionDisk(
                        side_id=side_id,
                        kind=kind,
                        square_pos=ann.squares.index(sq),
                        corner=corner,
                        point=sq.corners[corner],
                        role=role,
                        run_pos=pos,
                        run_len=len(run),
                    )
                )
            if pos + 1 < len(run):
                nxt = run[pos + 1]
                corner = nxt.a if corner == emb.a else nxt.b
        if corner != j.top_corner:
            raise CrimpingError("junction corner chain mismatch")


def build_annuli(
    dec: CrimpedDecomposition,
    junctions_map: dict[tuple[int, str], Junction] | None = None,
) -> dict[tuple[int, str], Annulus]:
    """Both boundary annuli of every region, keyed (region, level)."""
    if junctions_map is None:
        from .junctions import junctions

        junctions_map = junctions(dec)
    region_of = {}
    for reg in dec.regions:
        for h in reg.halves:
            region_of[h] = reg.index

    annuli: dict[tuple[int, str], Annulus] = {}
    for reg in dec.regions:
        n = reg.length // 2
        lows, ups, corner_maps, lean, perms, faces = _lower_layout(dec, reg)
        low_squares = [
            _make_square(dec, t, i, corner_maps[i]) for i, t in enumerate(lows)
        ]
        annuli[(reg.index, LEVEL_LOWER)] = Annulus(
            reg.index, LEVEL_LOWER, reg.colour, n, lean, low_squares
        )
        upper_maps = _upper_layout(
            dec, reg, lows, ups, corner_maps, perms, faces, n
        )
        up_squares = [
            _make_square(dec, u, i, upper_maps[i]) for i, u in enumerate(ups)
        ]
        up_lean = -lean  # shearing by one unit flips the lean's sign
        for sq in up_squares:
            s = sq.side("right")
            got = s.b[0] - s.a[0] if s.a[1] == 0 else s.a[0] - s.b[0]
            if got != up_lean:
                raise CrimpingError("upper boundary lean mismatch")
        annuli[(reg.index, LEVEL_UPPER)] = Annulus(
            reg.index, LEVEL_UPPER, reg.colour, n, up_lean, up_squares
        )
    _junction_disks(dec, junctions_map, region_of, annuli)
    return annuli
