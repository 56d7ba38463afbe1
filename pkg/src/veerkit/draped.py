"""Draped positions of the two tracks at the canonical cross-sections.

In the finished object every track-cusp rests inside a junction at
every cross-section: a line climbing a junction stack stays inside the
vertical junction tube, and all forward motion happens while a line
hops out of the junction it has finished climbing, across a toggle
square, into the junction starting there.  Per region the upper-track
hops occupy the band s in (1/4, 1/2) and the lower-track hops (run
backwards in s) the band (1/2, 3/4); the five canonical levels
s in {0, 1/4, 1/2, 3/4, 1} all show both tracks with resting cusps.

The curve system carrying each track in a chart is the parted core and
spurs; the resting spot of a cusp is one block behind the front of the
live siding it occupies (the front itself for a freshly arrived line
at a toggle square), and hop paths are the eta routes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .geom import Point, seg_meets_box, in_box
from .junctions import Junction
from .parted import (
    SIGMA,
    TRACK_LOWER,
    TRACK_UPPER,
    Cusp,
    PartingError,
    TrackChart,
)
from .routes import ROUTE_CHARTS, CuspRoutes, _mate
from .sections import LEVEL_LOWER, LEVEL_UPPER, Annulus


class DrapingError(Exception):
    pass


CANONICAL_LEVELS = (
    Fraction(0),
    Fraction(1, 4),
    Fraction(1, 2),
    Fraction(3, 4),
    Fraction(1),
)


@dataclass(frozen=True)
class Element:
    """One straight piece of a track carrier in a chart."""

    tag: tuple
    a: Point
    b: Point


@dataclass(frozen=True)
class Box:
    """The chart footprint of one junction crossing (corner to siding
    front, cusp circle to siding height)."""

    side_id: int
    kind: str
    x0: Fraction
    x1: Fraction
    y0: Fraction
    y1: Fraction

    @property
    def rect(self):
        return (self.x0, self.x1, self.y0, self.y1)


@dataclass(frozen=True)
class RestingCusp:
    tet: int
    slot: int
    at_toggle: bool
    junction: tuple[int, str]  # (side_id, kind) of the occupied siding
    point: Point
    forward: int


@dataclass(frozen=True)
class Hop:
    """The in-region trajectory of a toggle cusp, out of the junction
    it finished climbing and into the one starting at its exit corner."""

    track: str
    tet: int
    slot: int
    path: tuple[Point, ...]
    end_junction: tuple[int, str]


@dataclass
class SectionTrack:
    region: int
    s: Fraction
    track: str
    n: int
    colour: object
    elements: list[Element]
    cusps: list[RestingCusp]
    boxes: list[Box]


@dataclass
class RegionMovie:
    """Everything the sweep needs about one region."""

    region: int
    n: int
    colour: object
    carriers: dict[tuple[str, str], list[Element]] = field(
        default_factory=dict
    )
    rests: dict[tuple[str, str], list[RestingCusp]] = field(
        default_factory=dict
    )
    boxes: dict[tuple[str, str], list[Box]] = field(default_factory=dict)
    hops: dict[str, list[Hop]] = field(default_factory=dict)


def carrier_elements(chart: TrackChart) -> list[Element]:
    nodes, n = chart.nodes, chart.n
    out = []
    for i, p in enumerate(nodes):
        q = nodes[(i + 1) % len(nodes)]
        qx = q.x + (n if i + 1 == len(nodes) else 0)
        if (p.x, p.y) != (qx, q.y):
            out.append(Element(("core", i), (p.x, p.y), (qx, q.y)))
    for c in chart.cusps:
        for i, (a, b) in enumerate(zip(c.spur, c.spur[1:])):
            if a != b:
                out.append(Element(("spur", c.tet, c.slot, i), a, b))
    return out


def rest_of(chart: TrackChart, cusp: Cusp) -> RestingCusp:
    """Where the line whose cusp this is comes to rest at this level."""
    if cusp.at_toggle:
        s = cusp.siding
        point = cusp.point
    else:
        s = _mate(chart, cusp).siding
        point = (s.x_at(Fraction(1)), s.y)
    return RestingCusp(
        tet=cusp.tet,
        slot=cusp.slot,
        at_toggle=cusp.at_toggle,
        junction=(s.side_id, s.kind),
        point=point,
        forward=cusp.siding.d,
    )


def chart_boxes(chart: TrackChart) -> list[Box]:
    out = []
    seen = set()
    for c in chart.cusps:
        s = c.siding
        key = (s.side_id, s.square_pos, s.corner)
        if key in seen:
            continue
        seen.add(key)
        cx = s.front - s.d * (SIGMA - s.depth * s.block)
        x0, x1 = sorted((cx, s.front))
        y0, y1 = sorted((s.y0, s.y))
        out.append(Box(s.side_id, s.kind, x0, x1, y0, y1))
    return out


def build_movies(
    dec,
    annuli: dict[tuple[int, str], Annulus],
    charts: dict[tuple[int, str, str], TrackChart],
    routes: dict[tuple[int, str, str, int, int], CuspRoutes],
) -> dict[int, RegionMovie]:
    movies: dict[int, RegionMovie] = {}
    for (region, level, track), chart in charts.items():
        ann = annuli[(region, level)]
        movie = movies.setdefault(
            region, RegionMovie(region=region, n=chart.n, colour=ann.colour)
        )
        if movie.n != chart.n:
            raise DrapingError(f"charts of region {region} disagree on n")
        movie.carriers[(level, track)] = carrier_elements(chart)
        movie.rests[(level, track)] = [rest_of(chart, c) for c in chart.cusps]
        movie.boxes[(level, track)] = chart_boxes(chart)
        if (level, track) in ROUTE_CHARTS:
            hops = []
            for c in chart.cusps:
                if not c.at_toggle:
                    continue
                r = routes[(region, level, track, c.tet, c.slot)]
                hops.append(
                    Hop(
                        track=track,
                        tet=c.tet,
                        slot=c.slot,
                        path=r.eta.points,
                        end_junction=(r.eta.end.side_id, r.eta.end.kind),
                    )
                )
            movie.hops[track] = hops
    return movies


def _section(movie: RegionMovie, s: Fraction, track: str) -> SectionTrack:
    route_level = LEVEL_LOWER if track == TRACK_UPPER else LEVEL_UPPER
    far_level = LEVEL_UPPER if track == TRACK_UPPER else LEVEL_LOWER
    # which side of its own hop band this level sits on, measured in
    # the track's direction of travel (down through s for the lower
    # track).
    t = s if track == TRACK_UPPER else 1 - s
    if t <= Fraction(1, 4):
        level, with_hops = route_level, False
    elif t < Fraction(3, 4):
        level, with_hops = route_level, True
    else:
        level, with_hops = far_level, False
    elements = list(movie.carriers[(level, track)])
    cusps = list(movie.rests[(level, track)])
    boxes = list(movie.boxes[(level, track)])
    if with_hops:
        done = {}
        for hop in movie.hops[track]:
            for i, (a, b) in enumerate(zip(hop.path, hop.path[1:])):
                elements.append(Element(("hop", hop.tet, hop.slot, i), a, b))
            done[(hop.tet, hop.slot)] = hop
        cusps = [
            c
            if (c.tet, c.slot) not in done
            else RestingCusp(
                tet=c.tet,
                slot=c.slot,
                at_toggle=True,
                junction=done[(c.tet, c.slot)].end_junction,
                point=done[(c.tet, c.slot)].path[-1],
                forward=c.forward,
            )
            for c in cusps
        ]
    return SectionTrack(
        region=movie.region,
        s=s,
        track=track,
        n=movie.n,
        colour=movie.colour,
        elements=elements,
        cusps=cusps,
        boxes=boxes,
    )


def draped_sections(
    movies: dict[int, RegionMovie],
) -> dict[tuple[int, Fraction, str], SectionTrack]:
    out = {}
    for region, movie in movies.items():
        for s in CANONICAL_LEVELS:
            for track in (TRACK_UPPER, TRACK_LOWER):
                out[(region, s, track)] = _section(movie, s, track)
    return out


def _check_heads_down(section: SectionTrack, all_boxes: list[Box]) -> None:
    n = section.n
    for el in section.elements:
        for box in all_boxes:
            if not seg_meets_box(el.a, el.b, box.rect, n):
                continue
            if in_box(el.a, box.rect, n) or in_box(el.b, box.rect, n):
                continue
            raise DrapingError(
                f"branch {el.tag} of region {section.region} "
                f"s={section.s} {section.track} crosses junction "
                f"({box.side_id}, {box.kind}) without ending there"
            )


def _check_one_cusp(
    chart: TrackChart, ann: Annulus, track: str
) -> None:
    """Around each cusp circle the junction crossings of this track and
    the free ideal points alternate, so every complementary region of
    the track (with the junction tubes filled in) holds exactly one
    ideal vertex; the resting bijection then gives exactly one cusp."""
    n = chart.n
    for circle in (Fraction(0), Fraction(1)):
        # each ideal point on the circle has two adjacent square
        # quarters; exactly one of them hosts a station of this track,
        # so its junction tube plugs one side of the vertex and the
        # complementary region on the other side owns it.  One wall
        # per square per circle then cuts the band into regions that
        # each hold exactly one ideal vertex, and the resting
        # bijection puts exactly one track-cusp in each.
        quarters: dict[Fraction, list[str]] = {}
        for sq in ann.squares:
            for v, p in sq.corners.items():
                if p[1] != circle:
                    continue
                quarters.setdefault(p[0] % n, []).append(sq.kinds[v])
        for x, kinds in quarters.items():
            if sorted(kinds) != ["lower", "upper"]:
                raise DrapingError(
                    f"ideal point x={x} circle {circle} of region "
                    f"{ann.region} {ann.level} has quarters {kinds}; "
                    "the one-vertex rule fails"
                )


def _check_toggle_links(chart: TrackChart) -> None:
    """Across each toggle square the carrier runs junction to junction:
    the two sidings are joined by the diagonal with no other structure
    between them."""
    kinds = [
        node.kind for node in chart.nodes
    ]
    for i, k in enumerate(kinds):
        if k != "cusp":
            continue
        c = chart.cusps[chart.nodes[i].data]
        if not c.at_toggle:
            continue
        nxt = kinds[(i + 1) % len(kinds)]
        prev = kinds[i - 1]
        if "cusp" not in (nxt, prev):
            # arrival cusp then departure cusp sit adjacently on the
            # core; one neighbour of each is the other cusp.
            raise DrapingError(
                f"toggle square of tet {c.tet} breaks the junction link"
            )


def check_draped(
    dec,
    annuli: dict[tuple[int, str], Annulus],
    charts: dict[tuple[int, str, str], TrackChart],
    sections: dict[tuple[int, Fraction, str], SectionTrack],
) -> dict[tuple[object, str], set[int]]:
    """Draped-position invariants; returns the observed net hop slope
    signs per (colour, track) for the slope ledger."""
    for (region, level, track), chart in charts.items():
        ann = annuli[(region, level)]
        _check_one_cusp(chart, ann, track)
        _check_toggle_links(chart)

    slopes: dict[tuple[object, str], set[int]] = {}
    for (region, s, track), section in sections.items():
        # every cusp rests inside the junction boxes of its level
        other = sections[
            (region, s, TRACK_LOWER if track == TRACK_UPPER else TRACK_UPPER)
        ]
        all_boxes = section.boxes + other.boxes
        for c in section.cusps:
            # a hop-end rest sits in the exit siding's box, expressed
            # as the virtual crossing of the junction it now climbs,
            # so membership is checked against this track's boxes.
            if not any(
                in_box(c.point, b.rect, section.n) for b in section.boxes
            ):
                raise DrapingError(
                    f"cusp of tet {c.tet} rests outside junction "
                    f"{c.junction} in region {region} s={s}"
                )
        _check_heads_down(section, all_boxes)
        for el in section.elements:
            if el.tag[0] != "hop":
                continue
            dx = el.b[0] - el.a[0]
            dy = el.b[1] - el.a[1]
            if dx != 0 and dy != 0:
                slopes.setdefault((section.colour, track), set()).add(
                    1 if dy * dx > 0 else -1
                )

    # hop slopes are a fixed sign per (colour, track), opposite for
    # the two tracks and swapped between the colours (the chart y-axis
    # runs against the usual picture, so upper hops in blue regions
    # come out negative here).
    for (colour, track), signs in slopes.items():
        if len(signs) != 1:
            raise DrapingError(f"mixed hop slopes for {colour} {track}")
        other = slopes.get(
            (colour, TRACK_LOWER if track == TRACK_UPPER else TRACK_UPPER)
        )
        if other is not None and other == signs:
            raise DrapingError(f"tracks share hop slopes in {colour}")
    return slopes
