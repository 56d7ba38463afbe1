"""Parting and draping routes for the parted tracks.

Routes live in the charts that drive the region movies: the lower
boundary for the upper track and the upper boundary for the lower
track.  Each track-cusp k gets four routes along the parted track:

- beta(k): the draping route, ending where the branch line through k
  comes to rest.  For a cusp in a toggle square this is the length
  zero route at the siding front where the line has just arrived.
  Otherwise the line is mid-climb through a junction stack, and the
  route runs head-on into the mate cusp of the square, through the
  mate's spur, and one block behind the front of the mate's siding
  (the shear puts the resting spot one block back per level left to
  climb, and the chart depth already absorbs all but the last).
- eta(k): equal to beta(k) except for toggle cusps, where it crosses
  the square on the diagonal, enters the mate head-on, and runs
  through the exit station to one block behind the virtual front of
  the junction starting at the mate's corner.
- eta*(k): eta(k) extended forward by a quarter block.
- alpha(k): the parting route, from k to just before the chart shadow
  of the cusp one level on.  When that cusp sits in a toggle square
  the shadow is a siding front and alpha ends exactly three quarters
  of a block behind it, which is the endpoint of eta*(k); otherwise
  alpha stops shy of the shadow x-coordinate along the core.

The suffix route gamma*(k) = eta*(k) - beta(k) is also recorded.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .veering import branch_step_down, branch_step_up
from .crimping import KIND_LOWER, KIND_UPPER, CrimpedDecomposition
from .junctions import Junction
from .parted import (
    TRACK_LOWER,
    TRACK_UPPER,
    Cusp,
    PartingError,
    TrackChart,
)
from .sections import LEVEL_LOWER, LEVEL_UPPER, Point


class RoutingError(Exception):
    pass


ROUTE_CHARTS = ((LEVEL_LOWER, TRACK_UPPER), (LEVEL_UPPER, TRACK_LOWER))


@dataclass(frozen=True)
class RouteEnd:
    """A route endpoint measured inside a junction's siding."""

    side_id: int
    kind: str
    blocks_back: Fraction  # behind the (possibly virtual) front
    point: Point


@dataclass(frozen=True)
class Route:
    name: str  # alpha | beta | eta | eta_star | gamma_star
    points: tuple[Point, ...]
    end: RouteEnd | None  # None for a shy (open) endpoint
    events: tuple[tuple[str, object], ...] = ()
    shy: bool = False

    @property
    def is_zero(self) -> bool:
        return len(self.points) == 1


@dataclass
class CuspRoutes:
    region: int
    level: str
    track: str
    tet: int
    slot: int
    at_toggle: bool
    climb: tuple[int, str]  # junction the line is heading to / starting
    alpha: Route
    beta: Route
    eta: Route
    eta_star: Route
    gamma_star: Route


def _mate(chart: TrackChart, cusp: Cusp) -> Cusp:
    for c in chart.cusps:
        if c.square_pos == cusp.square_pos and c is not cusp:
            return c
    raise RoutingError(f"cusp of tet {cusp.tet} has no mate")


def _step_on(dec, track: str, tet: int, slot: int) -> tuple[int, int]:
    """Follow the branch line one level on (up for the upper track)."""
    if track == TRACK_UPPER:
        g = branch_step_up(dec.v, tet, slot)
    else:
        g = branch_step_down(dec.v, tet, slot)
    glu = dec.v.tri.gluings[tet][g]
    assert glu is not None
    return glu[0], glu[1]


def _arrival_map(junctions_map, track: str) -> dict[tuple[int, int], Junction]:
    """(tet, corner) of each junction's arrival toggle cusp."""
    out = {}
    for (side_id, kind), j in junctions_map.items():
        if kind != track:
            continue
        key = (
            (j.top_tet, j.top_corner)
            if kind == KIND_UPPER
            else (j.bottom_tet, j.bottom_corner)
        )
        out[key] = j
    return out


def _start_map(junctions_map, track: str) -> dict[tuple[int, int], Junction]:
    """(tet, corner) of each junction's starting toggle cusp."""
    out = {}
    for (side_id, kind), j in junctions_map.items():
        if kind != track:
            continue
        key = (
            (j.bottom_tet, j.bottom_corner)
            if kind == KIND_UPPER
            else (j.top_tet, j.top_corner)
        )
        out[key] = j
    return out


def _next_arrival(dec, track, corner_of, arrivals, tet, slot):
    """The junction whose stack the line through (tet, slot) is
    climbing: walk on to the first toggle square strictly ahead."""
    seen = 0
    t, f = tet, slot
    cap = 4 * len(dec.v.tri.gluings) + 4
    while True:
        t, f = _step_on(dec, track, t, f)
        if t in dec.toggle_squares:
            corner = corner_of(t, track)[f]
            try:
                return arrivals[(t, corner)]
            except KeyError:
                raise RoutingError(
                    f"line reaches toggle tet {t} corner {corner} "
                    "with no junction ending there"
                )
        seen += 1
        if seen > cap:
            raise RoutingError("branch line never reaches a toggle square")


def _on_segment(p: Point, a: Point, b: Point) -> bool:
    (x, y), (x0, y0), (x1, y1) = p, a, b
    if (x - x0) * (y1 - y0) != (y - y0) * (x1 - x0):
        return False
    return min(x0, x1) <= x <= max(x0, x1) and min(y0, y1) <= y <= max(y0, y1)


def _siding_route(cusp: Cusp, mate: Cusp, blocks_back: Fraction) -> Route:
    """Head-on into the mate, through its spur, stopping blocks_back
    behind the front of the mate's siding."""
    s = mate.siding
    if blocks_back + 1 > s.n_blocks:
        raise RoutingError(
            f"no free block behind the resting spot in siding {s.side_id}"
        )
    end = RouteEnd(
        side_id=s.side_id,
        kind=s.kind,
        blocks_back=blocks_back,
        point=(s.x_at(blocks_back), s.y),
    )
    points = (cusp.point, mate.point, (s.back, s.y), end.point)
    return points, end


def _toggle_eta(cusp, mate, j_new: Junction, blocks_back: Fraction):
    """From an arrival cusp across the diagonal and out along the exit
    siding, to blocks_back behind the virtual front of the starting
    junction's crossing."""
    s = mate.siding  # the ending junction's siding at the exit corner
    d = s.d
    h, b_new = j_new.height, j_new.block_length
    x_end = s.front - d * (h - 1 + blocks_back) * b_new
    depth_in = (s.front - x_end) * d
    if not 0 < depth_in < (s.front - s.back) * d:
        raise RoutingError(
            f"starting junction ({j_new.side}, {j_new.kind}) overflows "
            f"the exit siding of {s.side_id}"
        )
    points = [cusp.point, mate.point]
    events = [("headon", (mate.tet, mate.slot))]
    if depth_in > s.block / 2:
        points.append((s.p_cross, s.y))
        events.append(("pcross", s.side_id))
    points.append((x_end, s.y))
    end = RouteEnd(
        side_id=j_new.side,
        kind=j_new.kind,
        blocks_back=blocks_back,
        point=(x_end, s.y),
    )
    return tuple(points), end, tuple(events)


def _core_walk(chart: TrackChart, cusp: Cusp, target_x: Fraction) -> Route:
    """Along the core from the cusp, in its forward direction, stopping
    shy at the first crossing of target_x."""
    nodes, n = chart.nodes, chart.n
    d = cusp.forward
    pts = [cusp.point]
    events = []
    i = cusp.node_index
    lift = Fraction(0)
    for _ in range(2 * len(nodes) + 2):
        j = i + d
        if j >= len(nodes):
            j -= len(nodes)
            lift += n
        elif j < 0:
            j += len(nodes)
            lift -= n
        node = nodes[j]
        x = node.x + lift
        if (x - target_x) * d >= 0:
            x0, y0 = pts[-1]
            if x == x0:
                y = node.y
            else:
                y = y0 + (target_x - x0) * (node.y - y0) / (x - x0)
            pts.append((target_x, y))
            return Route(
                name="alpha",
                points=tuple(pts),
                end=None,
                events=tuple(events),
                shy=True,
            )
        pts.append((x, node.y))
        if node.kind == "cusp":
            other = chart.cusps[node.data]
            tag = "headon" if other.forward == -d else "rear"
            events.append((tag, (other.tet, other.slot)))
        elif node.kind in ("pcross", "cross"):
            events.append((node.kind, getattr(node.data, "side_id", node.data)))
        i = j
    raise RoutingError(
        f"parting route from tet {cusp.tet} never reaches its target"
    )


def build_routes(
    dec: CrimpedDecomposition,
    charts: dict[tuple[int, str, str], TrackChart],
    junctions_map: dict[tuple[int, str], Junction],
) -> dict[tuple[int, str, str, int, int], CuspRoutes]:
    """Routes for every cusp of every route chart, keyed by
    (region, level, track, tet, slot)."""
    from .parted import cusp_slots

    corner_cache: dict[tuple[int, str], dict[int, int]] = {}

    def corner_of(tet, track):
        key = (tet, track)
        if key not in corner_cache:
            corner_cache[key] = cusp_slots(dec.v, tet, track)
        return corner_cache[key]

    out = {}
    for track in (TRACK_UPPER, TRACK_LOWER):
        arrivals = _arrival_map(junctions_map, track)
        starts = _start_map(junctions_map, track)
        arrival_memo: dict[tuple[int, int], Junction] = {}
        level = LEVEL_LOWER if track == TRACK_UPPER else LEVEL_UPPER
        for (region, lvl, trk), chart in charts.items():
            if lvl != level or trk != track:
                continue
            for cusp in chart.cusps:
                mate = _mate(chart, cusp)
                key = (cusp.tet, cusp.slot)
                if key not in arrival_memo:
                    arrival_memo[key] = _next_arrival(
                        dec, track, corner_of, arrivals, cusp.tet, cusp.slot
                    )
                j_climb = arrival_memo[key]

                sub_tet, sub_slot = _step_on(dec, track, cusp.tet, cusp.slot)
                sub_toggle = sub_tet in dec.toggle_squares

                if cusp.at_toggle:
                    # the line has just arrived at the front of its own
                    # siding and next climbs the junction starting at
                    # the mate's corner.
                    j_new = starts.get((cusp.tet, mate.corner))
                    if j_new is None or j_new is not j_climb:
                        raise RoutingError(
                            f"toggle cusp of tet {cusp.tet} climbs "
                            f"({j_climb.side}, {j_climb.kind}) but the "
                            "junction starting at its exit corner differs"
                        )
                    beta = Route(
                        name="beta",
                        points=(cusp.point,),
                        end=RouteEnd(
                            side_id=cusp.siding.side_id,
                            kind=cusp.siding.kind,
                            blocks_back=Fraction(0),
                            point=cusp.point,
                        ),
                    )
                    # the route runs in at the front of the siding, so
                    # the quarter-block extension of eta reaches deeper
                    # behind the virtual front, while the parting route
                    # stops a quarter block earlier than eta does.
                    pts, end, ev = _toggle_eta(cusp, mate, j_new, Fraction(1))
                    eta = Route("eta", pts, end, ev)
                    pts2, end2, ev2 = _toggle_eta(
                        cusp, mate, j_new, Fraction(5, 4)
                    )
                    eta_star = Route("eta_star", pts2, end2, ev2)
                    gamma_star = Route("gamma_star", pts2, end2, ev2)
                else:
                    pts, end = _siding_route(cusp, mate, Fraction(1))
                    ev = (("headon", (mate.tet, mate.slot)),)
                    beta = Route("beta", pts, end, ev)
                    eta = Route("eta", pts, end, ev)
                    pts2, end2 = _siding_route(cusp, mate, Fraction(3, 4))
                    eta_star = Route("eta_star", pts2, end2, ev)
                    gamma_star = Route(
                        "gamma_star", (end.point, end2.point), end2
                    )

                if sub_toggle:
                    if cusp.at_toggle:
                        pts3, end3, ev3 = _toggle_eta(
                            cusp, mate, j_new, Fraction(3, 4)
                        )
                        alpha = Route("alpha", pts3, end3, ev3)
                    else:
                        alpha = Route(
                            "alpha",
                            eta_star.points,
                            eta_star.end,
                            eta_star.events,
                        )
                else:
                    if cusp.drift is None:
                        raise RoutingError("route cusp without a drift")
                    alpha = _core_walk(
                        chart, cusp, cusp.point[0] + cusp.drift
                    )

                out[(region, level, track, cusp.tet, cusp.slot)] = CuspRoutes(
                    region=region,
                    level=level,
                    track=track,
                    tet=cusp.tet,
                    slot=cusp.slot,
                    at_toggle=cusp.at_toggle,
                    climb=(j_climb.side, j_climb.kind),
                    alpha=alpha,
                    beta=beta,
                    eta=eta,
                    eta_star=eta_star,
                    gamma_star=gamma_star,
                )
    return out


def _is_prefix(short: Route, long: Route) -> bool:
    a, b = short.points, long.points
    if len(a) > len(b):
        return False
    if a[: len(a) - 1] != b[: len(a) - 1]:
        return False
    if len(a) == 1:
        return a[0] == b[0]
    if a[-1] == b[len(a) - 1]:
        return True
    return _on_segment(a[-1], b[len(a) - 2], b[len(a) - 1])


def check_routes(
    dec: CrimpedDecomposition,
    charts: dict[tuple[int, str, str], TrackChart],
    routes: dict[tuple[int, str, str, int, int], CuspRoutes],
    junctions_map: dict[tuple[int, str], Junction],
) -> None:
    """Structural checks on the routes; raises RoutingError."""
    for (region, level, track), chart in charts.items():
        if (level, track) not in ROUTE_CHARTS:
            continue
        rest_targets = []
        for cusp in chart.cusps:
            key = (region, level, track, cusp.tet, cusp.slot)
            if key not in routes:
                raise RoutingError(f"missing routes for {key}")
            r = routes[key]
            mate = _mate(chart, cusp)

            if mate.forward != -cusp.forward:
                raise RoutingError(
                    f"mate of tet {cusp.tet} fails to face the route"
                )

            if cusp.at_toggle:
                if not r.beta.is_zero or r.beta.end.blocks_back != 0:
                    raise RoutingError("toggle cusp with a moving line")
                if r.beta.end.side_id != cusp.siding.side_id:
                    raise RoutingError("toggle cusp rests off its siding")
                rest_targets.append(
                    (cusp.siding.side_id, cusp.square_pos, cusp.corner)
                )
            else:
                # the mate hangs the siding of the junction this line
                # is climbing
                if (mate.siding.side_id, mate.siding.kind) != r.climb:
                    raise RoutingError(
                        f"mate siding of tet {cusp.tet} is not the "
                        "climbed junction"
                    )
                if r.beta.end.blocks_back != 1:
                    raise RoutingError("resting spot off by a block")
                rest_targets.append(
                    (mate.siding.side_id, mate.square_pos, mate.corner)
                )
                if r.beta.points != r.eta.points:
                    raise RoutingError("fan cusp with beta != eta")

            # eta* extends eta by a quarter block along its direction
            # of travel: forward to the 3/4 spot when the route enters
            # at the back of the siding, deeper behind the front when
            # it enters at the front (toggle cusps).
            want = Fraction(5, 4) if cusp.at_toggle else Fraction(3, 4)
            if r.eta_star.end.blocks_back != want:
                raise RoutingError("eta* fails to extend by a quarter block")
            if not _is_prefix(r.eta, r.eta_star):
                raise RoutingError("eta is not an initial part of eta*")

            # alpha is a subroute of eta*
            if not _is_prefix(r.alpha, r.eta_star):
                raise RoutingError(
                    f"parting route of tet {cusp.tet} leaves its "
                    f"draping route in region {region}"
                )
            if not r.alpha.shy:
                if cusp.at_toggle:
                    if (
                        r.alpha.end.blocks_back != Fraction(3, 4)
                        or r.alpha.end.side_id != r.eta.end.side_id
                    ):
                        raise RoutingError(
                            "junction-bound parting route misses the "
                            "three-quarter spot"
                        )
                elif r.alpha.end != r.eta_star.end:
                    raise RoutingError(
                        "junction-bound parting route differs from eta*"
                    )

            # gamma* = eta* - beta
            if cusp.at_toggle:
                if r.gamma_star.points != r.eta_star.points:
                    raise RoutingError("gamma* of a toggle cusp is cut")
            else:
                if r.gamma_star.points[0] != r.beta.end.point:
                    raise RoutingError("gamma* does not continue beta")
                if r.gamma_star.points[-1] != r.eta_star.end.point:
                    raise RoutingError("gamma* misses the eta* endpoint")

        # every live siding hosts exactly one resting line
        if len(set(rest_targets)) != 2 * chart.n:
            raise RoutingError(
                f"resting lines collide in region {region} {level}"
            )
