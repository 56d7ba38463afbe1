"""Permutations of {0, 1, 2, 3}, stored as 4-tuples of images.

The lexicographic index ("ordered S4 index") is the position of the image
tuple among all 24 image tuples sorted lexicographically.  This is the
indexing used by the signature format in `isosig`.
"""

from __future__ import annotations

import itertools

Perm4 = tuple[int, int, int, int]

IDENTITY: Perm4 = (0, 1, 2, 3)

# All 24 permutations in lexicographic order of their image tuples.
ORDERED_S4: list[Perm4] = [p for p in itertools.permutations(range(4))]

ORDERED_S4_INDEX: dict[Perm4, int] = {p: i for i, p in enumerate(ORDERED_S4)}


def compose(p: Perm4, q: Perm4) -> Perm4:
    """Return p after q, i.e. (p * q)(x) = p(q(x))."""
    return (p[q[0]], p[q[1]], p[q[2]], p[q[3]])


def inverse(p: Perm4) -> Perm4:
    inv = [0] * 4
    for i, img in enumerate(p):
        inv[img] = i
    return tuple(inv)  # type: ignore[return-value]


def sign(p: Perm4) -> int:
    """Parity of the permutation: +1 for even, -1 for odd."""
    s = 1
    for i in range(4):
        for j in range(i + 1, 4):
            if p[i] > p[j]:
                s = -s
    return s
