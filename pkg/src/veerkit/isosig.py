"""Decoding and encoding of isomorphism signatures for 3-manifold
triangulations.

The format is the standard printable signature used by the census files:
a base64-style alphabet (a-z, A-Z, 0-9, +, -), a size prefix, a packed
sequence of facet actions, then destination indices and gluing
permutations for the non-trivial joins.  Gluing permutations are encoded
by their lexicographic index among all permutations of {0,1,2,3}.

`decode` produces raw gluing data; `encode` produces the canonical
signature of the gluing data (minimising over all starting simplices and
labellings), which gives a cheap isomorphism test and a round-trip check
for the decoder.
"""

from __future__ import annotations

import string

from .perm4 import (
    IDENTITY,
    ORDERED_S4,
    ORDERED_S4_INDEX,
    Perm4,
    compose,
    inverse,
)

ALPHABET = string.ascii_lowercase + string.ascii_uppercase + string.digits + "+-"
CHAR_TO_VAL = {c: i for i, c in enumerate(ALPHABET)}

# Gluings: per simplex, a list of four entries (dest simplex, dest facet,
# vertex permutation) or None for a boundary facet.  The permutation maps
# vertex labels of the source simplex to vertex labels of the destination.
Gluing = tuple[int, int, Perm4] | None
GluingTable = list[list[Gluing]]


class SigError(ValueError):
    """Malformed isomorphism signature."""


def _vals(sig: str) -> list[int]:
    try:
        return [CHAR_TO_VAL[c] for c in sig]
    except KeyError as exc:
        raise SigError(f"invalid signature character {exc.args[0]!r}") from None


def decode(sig: str) -> GluingTable:
    """Decode a signature into a gluing table.

    Raises SigError on malformed input.  Boundary facets are permitted by
    the format and reported as None entries; callers that need a closed
    (ideal) triangulation should reject them.
    """
    if not sig:
        raise SigError("empty signature")
    vals = _vals(sig)
    pos = 0
    if vals[0] < 63:
        n = vals[0]
        n_chars = 1
        pos = 1
    else:
        if len(vals) < 2:
            raise SigError("truncated size prefix")
        n_chars = vals[1]
        if n_chars == 0 or len(vals) < 2 + n_chars:
            raise SigError("truncated size prefix")
        n = 0
        for i in range(n_chars):
            n |= vals[2 + i] << (6 * i)
        pos = 2 + n_chars
    if n == 0:
        raise SigError("empty triangulation")

    # Facet actions, packed three per character (low bits first).  Each
    # action accounts for one facet (boundary) or two (a join), and every
    # facet is accounted for exactly once.
    actions: list[int] = []
    accounted = 0
    while accounted < 4 * n:
        if pos >= len(vals):
            raise SigError("truncated facet actions")
        v = vals[pos]
        pos += 1
        for shift in (0, 2, 4):
            if accounted >= 4 * n:
                break
            t = (v >> shift) & 3
            if t == 3:
                raise SigError("invalid facet action")
            actions.append(t)
            accounted += 1 if t == 0 else 2
    if accounted != 4 * n:
        raise SigError("facet actions overrun the facet count")

    n_joins = sum(1 for t in actions if t == 2)
    dests: list[int] = []
    for _ in range(n_joins):
        if pos + n_chars > len(vals):
            raise SigError("truncated join destinations")
        d = 0
        for i in range(n_chars):
            d |= vals[pos + i] << (6 * i)
        pos += n_chars
        dests.append(d)
    perms: list[Perm4] = []
    for _ in range(n_joins):
        if pos >= len(vals):
            raise SigError("truncated join permutations")
        idx = vals[pos]
        pos += 1
        if idx >= 24:
            raise SigError("invalid permutation index")
        perms.append(ORDERED_S4[idx])
    if pos != len(vals):
        raise SigError("trailing characters after signature data")

    gluings: GluingTable = [[None] * 4 for _ in range(n)]
    glued = [[False] * 4 for _ in range(n)]
    next_unused = 1
    ai = di = 0
    for s in range(n):
        for f in range(4):
            if glued[s][f]:
                continue
            t = actions[ai]
            ai += 1
            if t == 0:
                glued[s][f] = True
                continue
            if t == 1:
                if next_unused >= n:
                    raise SigError("join to a new simplex beyond the stated size")
                d, g = next_unused, IDENTITY
                next_unused += 1
            else:
                d, g = dests[di], perms[di]
                di += 1
                if d >= n:
                    raise SigError("join destination out of range")
            fd = g[f]
            if glued[d][fd]:
                raise SigError("facet glued twice")
            gluings[s][f] = (d, fd, g)
            gluings[d][fd] = (s, f, inverse(g))
            glued[s][f] = glued[d][fd] = True
    if ai != len(actions):
        raise SigError("unused facet actions")
    if next_unused != n:
        raise SigError("triangulation is disconnected")
    return gluings


def _encode_size(n: int) -> list[int]:
    if n < 63:
        return [n]
    chunks = []
    m = n
    while m:
        chunks.append(m & 63)
        m >>= 6
    return [63, len(chunks)] + chunks


def _n_chars(n: int) -> int:
    if n < 63:
        return 1
    c = 0
    while n:
        c += 1
        n >>= 6
    return c


def _candidate(
    gluings: GluingTable,
    start: int,
    start_perm: Perm4,
    with_labels: bool = False,
):
    """Encode the triangulation starting at the given simplex with the
    given vertex relabelling, following gluings greedily.  With
    `with_labels`, also return the simplex order (new label -> old) and
    the vertex relabelling per old simplex."""
    n = len(gluings)
    n_chars = _n_chars(n)
    label = [-1] * n  # old simplex -> new label
    relab: list[Perm4 | None] = [None] * n  # old vertex labels -> new
    order: list[int] = [start]  # new label -> old simplex
    label[start] = 0
    relab[start] = start_perm

    actions: list[int] = []
    dests: list[int] = []
    perms: list[int] = []
    done: set[tuple[int, int]] = set()  # (new label, new facet) already glued
    q = 0
    while q < len(order):
        s = order[q]
        rho = relab[s]
        assert rho is not None
        rho_inv = inverse(rho)
        for f_new in range(4):
            if (q, f_new) in done:
                continue
            done.add((q, f_new))
            g = gluings[s][rho_inv[f_new]]
            if g is None:
                actions.append(0)
                continue
            d, fd, p = g
            if label[d] == -1:
                actions.append(1)
                label[d] = len(order)
                # Choose the relabelling of d making this join the identity.
                relab[d] = compose(rho, inverse(p))
                order.append(d)
                done.add((label[d], f_new))
            else:
                actions.append(2)
                rho_d = relab[d]
                assert rho_d is not None
                p_new = compose(rho_d, compose(p, rho_inv))
                dests.append(label[d])
                perms.append(ORDERED_S4_INDEX[p_new])
                done.add((label[d], p_new[f_new]))
        q += 1

    out = _encode_size(n)
    for i in range(0, len(actions), 3):
        chunk = actions[i : i + 3]
        v = 0
        for j, t in enumerate(chunk):
            v |= t << (2 * j)
        out.append(v)
    for d in dests:
        for i in range(n_chars):
            out.append((d >> (6 * i)) & 63)
    out.extend(perms)
    sig = "".join(ALPHABET[v] for v in out)
    if with_labels:
        return sig, order, relab
    return sig


def encode(gluings: GluingTable) -> str:
    """Canonical signature: lexicographically smallest candidate over all
    starting simplices and vertex relabellings."""
    best: str | None = None
    for start in range(len(gluings)):
        for p in ORDERED_S4:
            cand = _candidate(gluings, start, p)
            if best is None or cand < best:
                best = cand
    assert best is not None
    return best
