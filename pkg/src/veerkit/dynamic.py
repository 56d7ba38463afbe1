"""The dynamic train-track: sweep, events, regions, and the axioms.

The two branched surfaces meet each cross-section in the draped
tracks of draped.py.  All relative motion happens while toggle cusps
hop between junctions, so the vertices of the dynamic train-track are
the transverse crossings of hop paths with the resting carrier of the
other track, and its edges are the vertical trajectories of carrier
crossings between those events.

Within a region the upper hops run against the lower track as it
stands at the region's lower boundary, and the lower hops against the
upper track as it stands at the upper boundary, so each event band
compares charts of a single annulus.  Upper cusps cross forwards,
lower cusps backwards (in the upward direction through the region).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .crimping import CrimpedDecomposition
from .draped import CANONICAL_LEVELS, Box, Element, Hop, RegionMovie
from .geom import (
    in_box,
    path_param,
    poly_cross,
    poly_overlaps,
    seg_cross,
    shifts,
)
from .parted import TRACK_LOWER, TRACK_UPPER
from .routes import _step_on
from .sections import LEVEL_LOWER, LEVEL_UPPER


class DynamicError(Exception):
    pass


def branch_lines(dec: CrimpedDecomposition, track: str) -> dict[tuple, int]:
    """Orbit index of every (tet, entry face) under the branch step."""
    tri = dec.v.tri
    slots = []
    for tet in range(len(tri.gluings)):
        faces = (
            tri.lower_faces(tet) if track == TRACK_UPPER
            else tri.upper_faces(tet)
        )
        slots.extend((tet, f) for f in faces)
    line_of: dict[tuple, int] = {}
    nlines = 0
    for start in slots:
        if start in line_of:
            continue
        cur = start
        while cur not in line_of:
            line_of[cur] = nlines
            cur = _step_on(dec, track, *cur)
        if line_of[cur] != nlines:
            raise DynamicError("branch step fails to close into loops")
        nlines += 1
    return line_of


@dataclass(frozen=True)
class SweepEvent:
    """A hop cusp crossing one strand of the other track."""

    region: int
    track: str  # track of the moving cusp
    line: int  # branch line of the moving cusp
    tet: int
    slot: int
    param: Fraction  # L1 arclength along the hop path
    point: tuple[Fraction, Fraction]
    strand: tuple  # tag of the crossed carrier element
    strand_line: int | None  # owner line of the crossed strand, if any


def _strand_owner(tag: tuple, line_of: dict[tuple, int]) -> int | None:
    if tag[0] == "spur":
        return line_of[(tag[1], tag[2])]
    return None


def sweep_events(
    dec: CrimpedDecomposition,
    movies: dict[int, RegionMovie],
    faults: list[str] | None = None,
) -> list[SweepEvent]:
    """All hop crossings, sorted.  With a faults list, geometric
    violations (tangencies, crossings inside junctions) are recorded
    there instead of raised."""
    lines = {
        TRACK_UPPER: branch_lines(dec, TRACK_UPPER),
        TRACK_LOWER: branch_lines(dec, TRACK_LOWER),
    }
    events: list[SweepEvent] = []
    for region in sorted(movies):
        movie = movies[region]
        n = movie.n
        for track, still_level in (
            (TRACK_UPPER, LEVEL_LOWER),
            (TRACK_LOWER, LEVEL_UPPER),
        ):
            other = TRACK_LOWER if track == TRACK_UPPER else TRACK_UPPER
            carrier = movie.carriers[(still_level, other)]
            boxes = (
                movie.boxes[(still_level, other)]
                + movie.boxes[(still_level, track)]
            )
            for hop in movie.hops[track]:
                events.extend(
                    _hop_events(
                        movie, hop, carrier, boxes, lines, n, faults
                    )
                )
    events.sort(
        key=lambda e: (e.region, e.track == TRACK_LOWER, e.tet, e.slot,
                       e.param)
    )
    return events


def _hop_events(movie, hop: Hop, carrier, boxes, lines, n, faults=None):
    other = TRACK_LOWER if hop.track == TRACK_UPPER else TRACK_UPPER
    line = lines[hop.track][(hop.tet, hop.slot)]

    def fault(msg):
        if faults is None:
            raise DynamicError(msg)
        faults.append(msg)

    found = []
    seen_pts = set()
    for el in carrier:
        if poly_overlaps(hop.path, el.a, el.b, n):
            fault(
                f"hop of tet {hop.tet} runs along {el.tag} in region "
                f"{movie.region}: tangential contact"
            )
            continue
        for i, t, u, point in poly_cross(hop.path, el.a, el.b, n):
            key = (point[0] % n, point[1])
            if key in seen_pts:
                continue
            seen_pts.add(key)
            for box in boxes:
                if in_box(point, box.rect, n):
                    fault(
                        f"hop of tet {hop.tet} crosses a strand inside "
                        f"junction ({box.side_id}, {box.kind})"
                    )
            found.append(
                SweepEvent(
                    region=movie.region,
                    track=hop.track,
                    line=line,
                    tet=hop.tet,
                    slot=hop.slot,
                    param=path_param(hop.path, i, t),
                    point=point,
                    strand=el.tag,
                    strand_line=_strand_owner(el.tag, lines[other]),
                )
            )
    found.sort(key=lambda e: e.param)
    return found

def _hop_sequences(
    dec: CrimpedDecomposition,
    movies: dict[int, RegionMovie],
    track: str,
    line_of: dict[tuple, int],
) -> dict[int, list[tuple[int, int]]]:
    """Per branch line, the cyclic sequence of its toggle hop slots in
    the order the line passes them."""
    hop_keys = {
        (h.tet, h.slot)
        for movie in movies.values()
        for h in movie.hops[track]
    }
    seqs: dict[int, list[tuple[int, int]]] = {}
    seen: set[tuple[int, int]] = set()
    for start in sorted(line_of):
        if start in seen:
            continue
        ln = line_of[start]
        seq = []
        cur = start
        while cur not in seen:
            seen.add(cur)
            if cur in hop_keys:
                seq.append(cur)
            cur = _step_on(dec, track, *cur)
        seqs[ln] = seq
    return seqs


@dataclass(frozen=True)
class PinchedTet:
    """A complementary region swept out between a doubling pair on an
    upper line and the halving pair on its partner lower line.

    The four events happen at two toggle squares: the upper cusp
    crosses the lower track there going forwards (birth, then the
    quadragon), and the partner lower cusp crosses the upper track at
    the same two squares going backwards (purple trigon, then death).
    """

    upper_line: int
    lower_line: int
    squares: tuple[int, int]
    birth: SweepEvent
    quadragon: SweepEvent
    purple: SweepEvent
    death: SweepEvent

    STAGES = ("green trigon", "quadragon", "purple trigon")

    @property
    def events(self) -> tuple[SweepEvent, ...]:
        return (self.birth, self.quadragon, self.purple, self.death)


@dataclass(frozen=True)
class Shell:
    """The complementary region around one manifold cusp.  Its frontier
    alternates between junction-tube walls of the two tracks, one wall
    of each per ideal point."""

    cusp: int
    stable_faces: int  # walls on the upper track
    unstable_faces: int  # walls on the lower track


@dataclass
class RegionInventory:
    tets: list[PinchedTet]
    shells: list[Shell]
    problems: list[str]

    @property
    def ok(self) -> bool:
        return not self.problems


def classify_regions(
    dec: CrimpedDecomposition,
    annuli,
    movies: dict[int, RegionMovie],
    events: list[SweepEvent],
) -> RegionInventory:
    """Assemble the complementary regions from the event sweep.

    Each upper hop crosses the lower track once, so consecutive hops
    of an upper line give the doubling pair of one pinched
    tetrahedron.  Its halving pair is a lower line visiting the same
    two toggle squares consecutively: the matching is a bijection
    between the consecutive-square pairs of the two tracks.  Everything
    left over is the one shell around each manifold cusp.
    """
    problems: list[str] = []
    lines = {
        TRACK_UPPER: branch_lines(dec, TRACK_UPPER),
        TRACK_LOWER: branch_lines(dec, TRACK_LOWER),
    }

    by_hop: dict[tuple[str, int, int], list[SweepEvent]] = {}
    for e in events:
        by_hop.setdefault((e.track, e.tet, e.slot), []).append(e)

    def hop_event(track, tet, slot):
        got = by_hop.get((track, tet, slot), [])
        if len(got) != 1:
            problems.append(
                f"{track} hop at tet {tet} slot {slot} crosses "
                f"{len(got)} strands; expected exactly one"
            )
            return None
        return got[0]

    seqs = {
        t: _hop_sequences(dec, movies, t, lines[t])
        for t in (TRACK_UPPER, TRACK_LOWER)
    }
    for track in (TRACK_UPPER, TRACK_LOWER):
        for ln, seq in sorted(seqs[track].items()):
            if not seq:
                problems.append(f"{track} line {ln} never hops")

    def pairs(track):
        out = {}
        for ln, seq in sorted(seqs[track].items()):
            for i, a in enumerate(seq):
                b = seq[(i + 1) % len(seq)]
                ea = hop_event(track, *a)
                eb = hop_event(track, *b)
                if ea is None or eb is None:
                    continue
                out.setdefault((a[0], b[0]), []).append((ln, ea, eb))
        return out

    upper_pairs = pairs(TRACK_UPPER)
    lower_pairs = pairs(TRACK_LOWER)

    tets: list[PinchedTet] = []
    for key in sorted(set(upper_pairs) | set(lower_pairs)):
        ups = upper_pairs.get(key, [])
        lows = lower_pairs.get(key, [])
        if len(ups) != len(lows):
            problems.append(
                f"square pair {key}: {len(ups)} doubling pairs vs "
                f"{len(lows)} halving pairs"
            )
            continue
        for (uln, ea, eb), (lln, ec, ed) in zip(ups, lows):
            tets.append(
                PinchedTet(
                    upper_line=uln,
                    lower_line=lln,
                    squares=key,
                    birth=ea,
                    quadragon=eb,
                    purple=ed,
                    death=ec,
                )
            )

    shells = _shells(dec, annuli, problems)
    return RegionInventory(tets=tets, shells=shells, problems=problems)


def _shells(dec: CrimpedDecomposition, annuli, problems: list[str]):
    """One shell per manifold cusp; its walls are the junction-tube
    sides, counted from the square-corner stations."""
    tri = dec.v.tri
    counts: dict[int, dict[str, int]] = {
        c: {"upper": 0, "lower": 0} for c in range(tri.n_cusps)
    }
    for (region, level), ann in sorted(annuli.items()):
        if level != LEVEL_LOWER:
            continue  # each physical annulus once
        for sq in ann.squares:
            for v, kind in sq.kinds.items():
                counts[tri.vertex_of[(sq.tet, v)]][kind] += 1
    shells = []
    for c in range(tri.n_cusps):
        up, low = counts[c]["upper"], counts[c]["lower"]
        if up != low:
            problems.append(
                f"cusp {c}: {up} stable walls vs {low} unstable walls"
            )
        if up == 0:
            problems.append(f"cusp {c}: shell has no walls")
        shells.append(Shell(cusp=c, stable_faces=up, unstable_faces=low))
    return shells


def _separation_witnesses(annuli) -> list[str]:
    """Around every cusp circle the two square quarters at each ideal
    point must host one station of each track: a repeated kind would
    glue two shell walls of the same surface to each other."""
    out = []
    for (region, level), ann in sorted(annuli.items()):
        if level != LEVEL_LOWER:
            continue
        for circle in (Fraction(0), Fraction(1)):
            quarters: dict[Fraction, list[str]] = {}
            for sq in ann.squares:
                for v, p in sq.corners.items():
                    if p[1] != circle:
                        continue
                    quarters.setdefault(p[0] % ann.n, []).append(
                        sq.kinds[v]
                    )
            for x, kinds in sorted(quarters.items()):
                if sorted(kinds) != ["lower", "upper"]:
                    out.append(
                        f"region {region} circle {circle} x={x}: "
                        f"quarters {kinds}"
                    )
    return out


def _dynamism_witnesses(movies: dict[int, RegionMovie]) -> list[str]:
    """Every hop must run in its cusp's forward direction: upper cusps
    cross the other track forwards, lower cusps (whose section time
    runs against the sweep) backwards."""
    out = []
    for region, movie in sorted(movies.items()):
        rests = {
            (c.tet, c.slot): c
            for level, track in (
                (LEVEL_LOWER, TRACK_UPPER),
                (LEVEL_UPPER, TRACK_LOWER),
            )
            for c in movie.rests[(level, track)]
        }
        for track in (TRACK_UPPER, TRACK_LOWER):
            for h in movie.hops[track]:
                rest = rests.get((h.tet, h.slot))
                if rest is None:
                    out.append(
                        f"region {region}: hop of tet {h.tet} has no cusp"
                    )
                    continue
                dx = h.path[-1][0] - h.path[0][0]
                if dx * rest.forward <= 0:
                    out.append(
                        f"region {region} {track} hop of tet {h.tet} "
                        f"moves against its cusp"
                    )
    return out


def verify_dynamic_pair(
    dec: CrimpedDecomposition,
    annuli,
    movies: dict[int, RegionMovie],
    events: list[SweepEvent],
    inventory: RegionInventory | None = None,
    geometric_faults: list[str] | None = None,
) -> dict[str, dict]:
    """The four axioms, each as ok plus a witness for failures.

    Transversality is the geometric sweep (no tangencies, no crossings
    inside junction tubes, every hop forwards).  Components is the
    completeness of the region inventory.  Transience asks that every
    branch line keeps hopping, so every climb drains into a shell
    wall.  Separation is the station scan around the cusp circles.
    """
    if inventory is None:
        inventory = classify_regions(dec, annuli, movies, events)

    report: dict[str, dict] = {}

    faults = list(geometric_faults or [])
    faults.extend(_dynamism_witnesses(movies))
    report["transversality"] = _verdict(faults)

    comp = [p for p in inventory.problems if "never hops" not in p]
    expected = sum(
        len(movie.hops[TRACK_UPPER]) for movie in movies.values()
    )
    if len(inventory.tets) != expected and not comp:
        comp.append(
            f"{len(inventory.tets)} pinched tetrahedra from "
            f"{expected} doubling events"
        )
    report["components"] = _verdict(comp)

    trans = [p for p in inventory.problems if "never hops" in p]
    report["transience"] = _verdict(trans)

    report["separation"] = _verdict(_separation_witnesses(annuli))
    return report


def _verdict(witnesses: list[str]) -> dict:
    return {
        "ok": not witnesses,
        "witness": witnesses[0] if witnesses else None,
    }


def _level_crossings(els_u, els_l, n) -> list[tuple[Fraction, Fraction]]:
    """Transverse crossing points of two element lists in one chart."""
    pts = set()
    for eu in els_u:
        if eu.a == eu.b:
            continue
        for el in els_l:
            if el.a == el.b:
                continue
            for dx in shifts(n):
                hit = seg_cross(
                    eu.a,
                    eu.b,
                    (el.a[0] + dx, el.a[1]),
                    (el.b[0] + dx, el.b[1]),
                )
                if hit is not None:
                    pts.add((hit[2][0] % n, hit[2][1]))
    return sorted(pts)


@dataclass
class TrainTrack:
    """The intersection graph of the two branched surfaces.

    Event vertices are the hop crossings; between consecutive canonical
    levels each crossing point continues vertically, and those
    trajectories are the edges, counted per region.
    """

    events: list[SweepEvent]
    event_edges: list[tuple]  # (square, key of lower event, key of upper)
    region_edges: dict[int, int]
    level_counts: dict[tuple[int, Fraction], int]

    @property
    def total_edges(self) -> int:
        return sum(self.region_edges.values()) + len(self.event_edges)


def _event_key(e: SweepEvent) -> tuple:
    return (e.track, e.tet, e.slot, e.param)


def train_track(
    movies: dict[int, RegionMovie],
    events: list[SweepEvent],
    sections,
) -> TrainTrack:
    region_edges: dict[int, int] = {}
    level_counts: dict[tuple[int, Fraction], int] = {}
    for region, movie in sorted(movies.items()):
        for s in CANONICAL_LEVELS:
            su = sections[(region, s, TRACK_UPPER)]
            sl = sections[(region, s, TRACK_LOWER)]
            level_counts[(region, s)] = len(
                _level_crossings(su.elements, sl.elements, movie.n)
            )
        # one vertical edge per crossing per gap between canonical
        # levels, counted at the gap's lower end
        region_edges[region] = sum(
            level_counts[(region, s)] for s in CANONICAL_LEVELS[:-1]
        )

    # at each toggle square the crossing worldline threads all of the
    # square's events; consecutive ones bound the short edges
    by_square: dict[int, list[SweepEvent]] = {}
    for e in events:
        by_square.setdefault(e.tet, []).append(e)
    event_edges = []
    for tet, evs in sorted(by_square.items()):
        evs = sorted(
            evs,
            key=lambda e: (e.track == TRACK_UPPER, e.slot, e.param),
        )
        for a, b in zip(evs, evs[1:] + evs[:1]):
            event_edges.append((tet, _event_key(a), _event_key(b)))
    return TrainTrack(
        events=events,
        event_edges=event_edges,
        region_edges=region_edges,
        level_counts=level_counts,
    )


def complexity_report(
    dec: CrimpedDecomposition,
    movies: dict[int, RegionMovie],
    track: TrainTrack,
) -> dict:
    """Crossing counts per monochromatic stack against 3 * 4n(m + 2n),
    and the global total against 36 |V|^2."""
    from .crimping import monochromatic_components

    stacks = []
    for colour, groups in sorted(
        monochromatic_components(dec).items(), key=lambda kv: str(kv[0])
    ):
        for group in groups:
            m = len(group)
            n = max(movies[r].n for r in group)
            actual = sum(track.region_edges[r] for r in group)
            bound = 3 * 4 * n * (m + 2 * n)
            stacks.append(
                {
                    "colour": str(colour),
                    "regions": group,
                    "m": m,
                    "n": n,
                    "actual": actual,
                    "bound": bound,
                    "ok": actual <= bound,
                }
            )
    nv = len(dec.v.tri.gluings)
    total = track.total_edges
    global_bound = 36 * nv * nv
    return {
        "stacks": stacks,
        "total": total,
        "global_bound": global_bound,
        "ok": all(s["ok"] for s in stacks) and total <= global_bound,
    }
