"""Parted-position train tracks in the boundary annuli of the regions.

Each boundary cross-section of a crimped region carries two train
tracks, one from each branched surface.  In parted position a track is
a single core circle winding once around the annulus, decorated with
one cusp for every branch line crossing the level (two per square).

Through a fan square the core runs near the centre line, crossing each
gap between consecutive squares a little above (upper track) or below
(lower track) the midpoint of the shared helical sides.  Through a
toggle square the core dips into the two stations at the corners of
the track's kind: it enters along the siding of the junction ending
there, crosses the helical crimped edge half a block before the
siding's front end, cusps at the front end, and runs diagonally across
the square to the opposite station.  Fan-square cusps sit on the core
just inside their square, next to the helical side at their corner,
and hang a spur that runs back through their own junction's siding to
the stop on the longitudinal edge.

Sidings are placed exactly: the station centre sits SIGMA in from the
ideal point along the longitudinal edge, and the siding is the run of
2h + w blocks ending depth blocks short of the centre, at height one
block above (below) the cusp circle.  The depth counts how many more
levels the junction's dwelling lines still have to climb, so crossing
a fan interface shears the siding by exactly one block and crossing
the toggle interface by none.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .triangulation import EDGE_VERTICES, edge_index
from .veering import branch_step_down, branch_step_up, _shared_equatorial
from .crimping import KIND_LOWER, KIND_UPPER, CrimpedDecomposition
from .junctions import Constants, Junction, junctions as build_junctions
from .sections import (
    LEVEL_LOWER,
    LEVEL_UPPER,
    Annulus,
    JunctionDisk,
    Point,
    Square,
    build_annuli,
)

TRACK_UPPER, TRACK_LOWER = KIND_UPPER, KIND_LOWER

# Station centre distance from the ideal point, along the longitudinal
# edge.  Must exceed 1/4 (half the x-spread of a helical side) plus the
# largest siding length, which the radius cap eps/2 keeps under 1/64.
SIGMA = Fraction(9, 32)
# Core height offset from the centre line, towards the track's side.
# (1/2 + NU) / 2 must stay below SIGMA minus the largest siding length,
# or the core would clip a station when a helical side leans into it.
NU = Fraction(1, 64)
# Cusp inset from the helical-side attachment into a fan square.
MU = Fraction(1, 64)


class PartingError(Exception):
    pass


@dataclass(frozen=True)
class SidingGeom:
    """The blocks of one junction crossing, placed in a chart."""

    side_id: int
    kind: str
    run_pos: int
    square_pos: int
    corner: int
    depth: int  # blocks between the front end and the station centre
    d: int  # +1/-1: x-direction from the ideal point into the square
    y0: Fraction  # cusp circle carrying the station (0 or 1)
    y: Fraction  # height of the siding
    front: Fraction  # x of the front end (towards the station centre)
    back: Fraction  # x of the rear end, 2h + w blocks behind
    block: Fraction
    n_blocks: int

    @property
    def p_cross(self) -> Fraction:
        """x where the core crosses the helical crimped edge: half a
        block behind the front end."""
        return self.front - self.d * self.block / 2

    def x_at(self, blocks_back: Fraction) -> Fraction:
        return self.front - self.d * blocks_back * self.block


@dataclass
class Cusp:
    tet: int
    slot: int  # entry face of the branch line (lower face if ascending)
    square_pos: int
    corner: int
    at_toggle: bool
    siding: SidingGeom  # the cusp's own junction crossing
    point: Point
    node_index: int = -1
    forward: int | None = None  # +1/-1 in chart x, where defined
    drift: Fraction | None = None  # signed x-travel to the next level
    spur: tuple[Point, ...] = ()  # stop, front, back, cusp (fan only)


@dataclass(frozen=True)
class CoreNode:
    x: Fraction
    y: Fraction
    kind: str  # "pt" | "back" | "cross" | "pcross" | "cusp"
    data: object = None


@dataclass
class TrackChart:
    region: int
    level: str
    track: str
    n: int
    nodes: list[CoreNode] = field(default_factory=list)
    cusps: list[Cusp] = field(default_factory=list)

    def cusp_by_slot(self, tet: int, face: int) -> Cusp:
        for c in self.cusps:
            if c.tet == tet and c.slot == face:
                return c
        raise KeyError((tet, face))

    def siding_at(self, square_pos: int, corner: int) -> SidingGeom:
        for c in self.cusps:
            s = c.siding
            if s.square_pos == square_pos and s.corner == corner:
                return s
        raise KeyError((square_pos, corner))


def cusp_slots(v, tet: int, track: str) -> dict[int, int]:
    """Entry face -> corner hosting the track-cusp, for the two branch
    lines crossing the equatorial square of `tet`.

    An ascending line hugs the station chain whose stack it climbed, so
    its cusp sits at the bottom pi-edge end away from the equatorial
    edge shared by its entry and exit faces (mirrored for descending
    lines); the junction-chain check below pins this choice."""
    tri = v.tri
    out = {}
    if track == TRACK_UPPER:
        entries = tri.lower_faces(tet)
        ends = EDGE_VERTICES[tri.bottom_edge(tet)]
    else:
        entries = tri.upper_faces(tet)
        ends = EDGE_VERTICES[tri.top_edge(tet)]
    for f in entries:
        if track == TRACK_UPPER:
            g = branch_step_up(v, tet, f)
        else:
            g = branch_step_down(v, tet, f)
        e = _shared_equatorial(tri, tet, f, g)
        corner = [
            x for x in ends if x not in EDGE_VERTICES[e]
        ]
        if len(corner) != 1:
            raise PartingError(f"exit edge of tet {tet} misses the pi-edge")
        out[f] = corner[0]
    if len(set(out.values())) != 2:
        raise PartingError(f"branch lines of tet {tet} share a corner")
    return out


def siding_depth(kind: str, level: str, run_pos: int, run_len: int):
    """Blocks left between the siding front and the station centre, or
    None when the crossing is inert (the junction only starts here)."""
    h = run_len - 1
    if kind == KIND_UPPER:
        if run_pos == 0:
            return None
        if level == LEVEL_LOWER:
            return 0 if run_pos == h else h - 1 - run_pos
        return h - run_pos
    if run_pos == h:
        return None
    if level == LEVEL_UPPER:
        return 0 if run_pos == 0 else run_pos - 1
    return run_pos


def _corner_on(sq: Square, role: str, kind: str) -> int:
    side = sq.side(role)
    got = [x for x in EDGE_VERTICES[side.edge] if sq.kinds[x] == kind]
    if len(got) != 1:
        raise PartingError(
            f"side {role} of tet {sq.tet} lacks a single {kind} corner"
        )
    return got[0]


def _siding(
    ann: Annulus,
    sq: Square,
    corner: int,
    kind: str,
    junctions_map: dict[tuple[int, str], Junction],
) -> SidingGeom:
    """The active junction crossing at a corner, placed in the chart."""
    found = None
    inert = None
    for disk in ann.disks:
        if (
            disk.square_pos != sq.pos
            or disk.corner != corner
            or disk.kind != kind
        ):
            continue
        depth = siding_depth(kind, ann.level, disk.run_pos, disk.run_len)
        if depth is None:
            inert = disk
            continue
        if found is not None:
            raise PartingError(
                f"two live junction crossings at tet {sq.tet} corner {corner}"
            )
        found = (disk, depth)
    if found is None:
        raise PartingError(
            f"no live junction crossing at tet {sq.tet} corner {corner}"
        )
    disk, depth = found
    j = junctions_map[(disk.side_id, disk.kind)]
    cx, y0 = sq.corners[corner]
    others = [
        p[0] for v, p in sq.corners.items() if v != corner and p[1] == y0
    ]
    assert len(others) == 1
    d = 1 if others[0] > cx else -1
    b = j.block_length
    front = cx + d * (SIGMA - depth * b)
    # At a toggle corner the dip shares its station with the junction
    # starting there, whose blocks are sheared back the full stack
    # height at this level; the dip must run back far enough to carry
    # them too (the real tube fattens here to the larger radius).
    length = j.block_count * b
    if inert is not None:
        j2 = junctions_map[(inert.side_id, inert.kind)]
        length = max(
            length,
            (j2.height + Fraction(1, 2)) * j2.block_length,
        )
    back = front - d * length
    if (back - cx) * d <= 0 or (SIGMA - depth * b - length) <= 0:
        raise PartingError("siding escapes its station footprint")
    y_in = 1 if y0 == 0 else -1
    return SidingGeom(
        side_id=disk.side_id,
        kind=kind,
        run_pos=disk.run_pos,
        square_pos=sq.pos,
        corner=corner,
        depth=depth,
        d=d,
        y0=y0,
        y=y0 + y_in * j.radius / j.block_count,
        front=front,
        back=back,
        block=b,
        n_blocks=j.block_count,
    )


def _fan_attach(sq: Square, role: str, track: str) -> Point:
    side = sq.side(role)
    lo, hi = (side.a, side.b) if side.a[1] == 0 else (side.b, side.a)
    yq = Fraction(1, 2) + (NU if track == TRACK_UPPER else -NU)
    return (lo[0] + (hi[0] - lo[0]) * yq, yq)


def _build_chart(
    dec: CrimpedDecomposition,
    ann: Annulus,
    track: str,
    junctions_map: dict[tuple[int, str], Junction],
) -> TrackChart:
    v = dec.v
    n = ann.n
    chart = TrackChart(region=ann.region, level=ann.level, track=track, n=n)
    nodes = chart.nodes

    # Per square: entry and exit attachments and the cusp slots.
    plans = []
    for sq in ann.squares:
        slots = cusp_slots(v, sq.tet, track)
        c_in = _corner_on(sq, "left", track)
        c_out = _corner_on(sq, "right", track)
        if set(slots.values()) != {c_in, c_out}:
            raise PartingError(
                f"cusp corners of tet {sq.tet} miss the side corners"
            )
        slot_of = {c: f for f, c in slots.items()}
        if sq.toggle:
            s_in = _siding(ann, sq, c_in, track, junctions_map)
            s_out = _siding(ann, sq, c_out, track, junctions_map)
            plans.append((sq, slot_of, s_in, s_out))
        else:
            plans.append((sq, slot_of, None, None))

    def add_cusp(sq, slot_of, corner, siding, point, at_toggle, spur=()):
        cusp = Cusp(
            tet=sq.tet,
            slot=slot_of[corner],
            square_pos=sq.pos,
            corner=corner,
            at_toggle=at_toggle,
            siding=siding,
            point=point,
            node_index=len(nodes),
            spur=spur,
        )
        nodes.append(CoreNode(point[0], point[1], "cusp", len(chart.cusps)))
        chart.cusps.append(cusp)

    entry_pts = [
        (s_in.back, s_in.y) if sq.toggle else _fan_attach(sq, "left", track)
        for sq, _, s_in, _ in plans
    ]
    exit_pts = []  # where each square hands the core to its gap
    for i, (sq, slot_of, s_in, s_out) in enumerate(plans):
        prev_toggle = plans[i - 1][0].toggle
        next_toggle = plans[(i + 1) % n][0].toggle
        if sq.toggle:
            # enter along the ending junction's siding, cusp at its
            # front end, cross the square on the diagonal, leave along
            # the other siding back to front.
            nodes.append(CoreNode(s_in.back, s_in.y, "back", s_in))
            nodes.append(CoreNode(s_in.p_cross, s_in.y, "pcross", s_in))
            add_cusp(sq, slot_of, s_in.corner, s_in,
                     (s_in.front, s_in.y), True)
            add_cusp(sq, slot_of, s_out.corner, s_out,
                     (s_out.front, s_out.y), True)
            nodes.append(CoreNode(s_out.p_cross, s_out.y, "pcross", s_out))
            nodes.append(CoreNode(s_out.back, s_out.y, "back", s_out))
            exit_pts.append((s_out.back, s_out.y))
        else:
            att_l = entry_pts[i]
            att_r = _fan_attach(sq, "right", track)
            exit_pts.append(att_r)
            if prev_toggle:
                nodes.append(CoreNode(att_l[0], att_l[1], "pt"))

            def on_core(x):
                t = (x - att_l[0]) / (att_r[0] - att_l[0])
                return (x, att_l[1] + t * (att_r[1] - att_l[1]))

            for corner, att, s in (
                (_corner_on(sq, "left", track), att_l, 1),
                (_corner_on(sq, "right", track), att_r, -1),
            ):
                point = on_core(att[0] + s * MU)
                sd = _siding(ann, sq, corner, track, junctions_map)
                spur = (
                    (sd.front, sd.y0),
                    (sd.front, sd.y),
                    (sd.back, sd.y),
                    point,
                )
                add_cusp(sq, slot_of, corner, sd, point, False, spur)
            if next_toggle:
                nodes.append(CoreNode(att_r[0], att_r[1], "pt"))
        # the gap crossing, halfway between the two attachments
        a = exit_pts[i]
        bx, by = entry_pts[(i + 1) % n] if i + 1 < n else (None, None)
        if i + 1 == n:
            bx, by = entry_pts[0][0] + n, entry_pts[0][1]
        right = plans[(i + 1) % n][0]
        data = (sq.side("right").side_id, right.side("left").side_id)
        if not sq.toggle and not right.toggle:
            if (a[0] - bx) % n != 0 or a[1] != by:
                raise PartingError("fan squares disagree across their gap")
            nodes.append(CoreNode(a[0], a[1], "cross", data))
        else:
            nodes.append(
                CoreNode((a[0] + bx) / 2, (a[1] + by) / 2, "cross", data)
            )

    # The core must run forwards: increasing x up to one exception per
    # toggle square, whose diagonal may back up by 2 * SIGMA - 1/2 when
    # the track's corners sit on the short diagonal (both stations then
    # reach slightly past the halfway point of their edges).
    slack = 2 * SIGMA - Fraction(1, 2)
    for p, q in zip(nodes, nodes[1:] + [nodes[0]]):
        qx = q.x + (n if q is nodes[0] else 0)
        if qx >= p.x:
            continue
        if not (
            p.kind == "cusp" and q.kind == "cusp" and p.x - qx <= slack
        ):
            raise PartingError(
                f"core fails to advance in region {ann.region} {ann.level}"
            )
    return chart


def _set_forwards(dec, charts):
    """Forward directions for the cusps that drive the region movies:
    ascending cusps at lower boundaries, descending at upper ones.

    Every cusp points into its own square, towards its siding: the line
    it follows drifts one level on to the mate corner of the next
    square around the same junction, less than one square width away.
    The drift across the region is computed and window-checked."""
    tri = dec.v.tri
    for (region, level, track), chart in charts.items():
        if (level, track) not in (
            (LEVEL_LOWER, TRACK_UPPER),
            (LEVEL_UPPER, TRACK_LOWER),
        ):
            continue
        other = charts[
            (region, LEVEL_UPPER if level == LEVEL_LOWER else LEVEL_LOWER,
             track)
        ]
        n = chart.n
        for cusp in chart.cusps:
            if track == TRACK_UPPER:
                g = branch_step_up(dec.v, cusp.tet, cusp.slot)
            else:
                g = branch_step_down(dec.v, cusp.tet, cusp.slot)
            glu = tri.gluings[cusp.tet][g]
            assert glu is not None
            nxt = other.cusp_by_slot(glu[0], glu[1])
            d = cusp.siding.d
            delta = (nxt.point[0] - cusp.point[0]) % n
            drift = delta if d > 0 else delta - n
            if not 0 < d * drift < 1:
                raise PartingError(
                    f"branch line through tet {cusp.tet} drifts {drift} "
                    f"against its cusp in region {region}"
                )
            cusp.forward = d
            cusp.drift = drift


def build_parted(
    dec: CrimpedDecomposition,
    annuli: dict[tuple[int, str], Annulus] | None = None,
    junctions_map: dict[tuple[int, str], Junction] | None = None,
    constants: Constants = Constants(),
) -> dict[tuple[int, str, str], TrackChart]:
    """Both tracks in every boundary annulus, keyed by
    (region, level, track)."""
    if junctions_map is None:
        junctions_map = build_junctions(dec, constants)
    if annuli is None:
        annuli = build_annuli(dec, junctions_map)
    charts = {}
    for (region, level), ann in annuli.items():
        for track in (TRACK_UPPER, TRACK_LOWER):
            charts[(region, level, track)] = _build_chart(
                dec, ann, track, junctions_map
            )
    _set_forwards(dec, charts)
    return charts


def _check_junction_chains(dec, junctions_map):
    """The branch line cusping at the top of each junction must have
    climbed through exactly the junction's stack of squares."""
    from .junctions import oriented_run

    tri = dec.v.tri
    for (side_id, kind), j in junctions_map.items():
        run, _ = oriented_run(dec, dec.sides[side_id])
        if kind == KIND_UPPER:
            tets = [emb.tet for emb in run]
            top, corner = j.top_tet, j.top_corner
        else:
            tets = [emb.tet for emb in run[::-1]]
            top, corner = j.bottom_tet, j.bottom_corner
        track = TRACK_UPPER if kind == KIND_UPPER else TRACK_LOWER
        slots = cusp_slots(dec.v, top, track)
        entry = [f for f, c in slots.items() if c == corner]
        assert len(entry) == 1
        tet, face = top, entry[0]
        for want in tets[-2::-1]:
            # step back down (up) the line: the previous tetrahedron is
            # the one glued through the entry face.
            glu = tri.gluings[tet][face]
            assert glu is not None
            prev, pf = glu[0], glu[1]
            if prev != want:
                raise PartingError(
                    f"junction ({side_id}, {kind}) carries a line through "
                    f"tet {prev}, stack expects {want}"
                )
            if kind == KIND_UPPER:
                face = [
                    f
                    for f in tri.lower_faces(prev)
                    if branch_step_up(dec.v, prev, f) == pf
                ][0]
            else:
                face = [
                    f
                    for f in tri.upper_faces(prev)
                    if branch_step_down(dec.v, prev, f) == pf
                ][0]
            tet = prev


def check_parted(
    dec: CrimpedDecomposition,
    charts: dict[tuple[int, str, str], TrackChart],
    annuli: dict[tuple[int, str], Annulus],
    junctions_map: dict[tuple[int, str], Junction],
) -> None:
    """Structural checks on the parted tracks; raises PartingError."""
    tri = dec.v.tri
    for (region, level, track), chart in charts.items():
        ann = annuli[(region, level)]
        n = chart.n
        if len(chart.cusps) != 2 * n:
            raise PartingError("wrong cusp count")
        for sq in ann.squares:
            mine = [c for c in chart.cusps if c.square_pos == sq.pos]
            if len(mine) != 2:
                raise PartingError("square without two cusps")
            for c in mine:
                if sq.kinds[c.corner] != track:
                    raise PartingError("cusp at a corner of the wrong kind")
                ends = (
                    EDGE_VERTICES[tri.bottom_edge(sq.tet)]
                    if track == TRACK_UPPER
                    else EDGE_VERTICES[tri.top_edge(sq.tet)]
                )
                if c.corner not in ends:
                    raise PartingError("cusp misses its pi-edge end")
        if sum(1 for nd in chart.nodes if nd.kind == "cross") != n:
            raise PartingError("wrong gap crossing count")
        n_toggle = sum(1 for sq in ann.squares if sq.toggle)
        if (
            sum(1 for nd in chart.nodes if nd.kind == "pcross")
            != 2 * n_toggle
        ):
            raise PartingError("wrong crimped-edge crossing count")
        # every cusp carries a distinct live siding
        keys = {
            (c.siding.side_id, c.siding.square_pos, c.siding.corner)
            for c in chart.cusps
        }
        if len(keys) != 2 * n:
            raise PartingError("cusps share a siding")
        if (level, track) in (
            (LEVEL_LOWER, TRACK_UPPER),
            (LEVEL_UPPER, TRACK_LOWER),
        ):
            if any(c.forward not in (1, -1) for c in chart.cusps):
                raise PartingError("cusp without a forward direction")
    _check_junction_chains(dec, junctions_map)
