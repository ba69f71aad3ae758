"""Interference-network topologies.

A topology records, for every receiver in a K-user single-hop network,
which transmitters it can hear.  Four families are provided:

* a linear chain where each receiver hears its own transmitter and the
  preceding one (:func:`build_wyner`),
* linear networks with a wider connectivity band
  (:func:`build_locally_connected`),
* a square grid in which interference propagates to the right and
  downward (:func:`build_two_dim`),
* a hexagonal-sectored cellular layout built on a triangular lattice,
  indexed by Eisenstein integers (:func:`build_hexagonal`).

Indices are 1-based throughout: users are ``1..K`` and user ``i`` pairs
transmitter ``i`` with receiver ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
import json
import math

from .errors import InvalidParameterError

# Coset names for lattice points z = a + b*w (w a primitive sixth root of
# unity); the class of (a + b) mod 3 determines which edges leave z.
_COSET_NAMES = ("square", "circle", "diamond")


@dataclass
class NetworkTopology:
    """Who hears whom in a K-user interference network.

    Attributes:
        kind: family tag, e.g. ``"wyner"`` or ``"hexagonal"``.
        K: number of users.
        params: family-specific build parameters.
        hears: map from receiver index to the frozen set of transmitter
            indices it can hear (its own transmitter included in every
            family built here).
    """

    kind: str
    K: int
    params: dict
    hears: dict[int, frozenset[int]]
    _hearers: dict[int, frozenset[int]] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        users = set(range(1, self.K + 1))
        if set(self.hears) != users:
            raise InvalidParameterError("hears must have exactly the keys 1..K")
        for i, heard in self.hears.items():
            if not heard <= users:
                raise InvalidParameterError(f"receiver {i} hears out-of-range transmitters")
        listeners: dict[int, set[int]] = {t: set() for t in users}
        for i, heard in self.hears.items():
            for t in heard:
                listeners[t].add(i)
        self._hearers = {t: frozenset(rxs) for t, rxs in listeners.items()}

    def hearers(self, t: int) -> frozenset[int]:
        """Return the receivers that hear transmitter ``t``."""
        return self._hearers[t]

    def to_json(self) -> str:
        """Serialize to a JSON object with sorted hearing lists."""
        obj = {
            "kind": self.kind,
            "K": self.K,
            "params": self.params,
            "hears": [sorted(self.hears[i]) for i in range(1, self.K + 1)],
        }
        return json.dumps(obj)


def topology_from_json(text: str) -> NetworkTopology:
    """Rebuild a :class:`NetworkTopology` from :meth:`NetworkTopology.to_json`."""
    obj = json.loads(text)
    hears = {i + 1: frozenset(row) for i, row in enumerate(obj["hears"])}
    return NetworkTopology(kind=obj["kind"], K=int(obj["K"]), params=obj["params"], hears=hears)


def build_wyner(K: int) -> NetworkTopology:
    """Linear chain: receiver ``i`` hears transmitters ``{i-1, i}``.

    Args:
        K: number of users, at least 1.
    """
    if K < 1:
        raise InvalidParameterError("K must be >= 1")
    hears = {i: frozenset(j for j in (i - 1, i) if 1 <= j <= K) for i in range(1, K + 1)}
    return NetworkTopology(kind="wyner", K=K, params={}, hears=hears)


def build_locally_connected(K: int, L: int) -> NetworkTopology:
    """Linear network where each transmitter reaches ``L`` neighbors.

    Transmitter ``j`` is heard by receivers ``j - floor(L/2)`` through
    ``j + ceil(L/2)``; equivalently receiver ``i`` hears transmitters
    ``i - ceil(L/2)`` through ``i + floor(L/2)``, clipped to ``1..K``.
    ``L = 1`` coincides with :func:`build_wyner`; ``L = 0`` is the
    interference-free network where each receiver hears only its own
    transmitter.

    Args:
        K: number of users, at least 1.
        L: connectivity parameter, at least 0.
    """
    if K < 1:
        raise InvalidParameterError("K must be >= 1")
    if L < 0:
        raise InvalidParameterError("L must be >= 0")
    lo, hi = -((L + 1) // 2), L // 2
    hears = {
        i: frozenset(j for j in range(i + lo, i + hi + 1) if 1 <= j <= K)
        for i in range(1, K + 1)
    }
    return NetworkTopology(kind="locally_connected", K=K, params={"L": L}, hears=hears)


def build_two_dim(K: int) -> NetworkTopology:
    """Square-grid network on ``sqrt(K) x sqrt(K)`` users.

    Users are numbered row-major: user ``j`` sits at row
    ``(j-1) // N + 1`` and column ``(j-1) % N + 1`` with ``N = sqrt(K)``.
    Transmitter ``j`` is heard at its own receiver, its right neighbor
    ``j+1`` and lower-right neighbor ``j+N+1`` (when not in the last
    column), and its lower neighbor ``j+N`` (when not in the last row).
    Interference never wraps across rows.

    Args:
        K: a perfect square, at least 1.
    """
    if K < 1:
        raise InvalidParameterError("K must be >= 1")
    N = math.isqrt(K)
    if N * N != K:
        raise InvalidParameterError("K must be a perfect square")
    heard_at: dict[int, set[int]] = {i: set() for i in range(1, K + 1)}
    for j in range(1, K + 1):
        row, col = (j - 1) // N + 1, (j - 1) % N + 1
        targets = {j}
        if col < N:
            targets.update(t for t in (j + 1, j + N + 1) if t <= K)
        if row < N:
            targets.add(j + N)
        for rx in targets:
            heard_at[rx].add(j)
    hears = {i: frozenset(ts) for i, ts in heard_at.items()}
    return NetworkTopology(kind="two_dim", K=K, params={"N": N}, hears=hears)


@dataclass
class HexLattice:
    """Triangular-lattice geometry backing a hexagonal-sectored network.

    Each user sits at a lattice point ``z = a + b*w`` recorded as the
    integer pair ``(a, b)``.  Points fall into three cosets by
    ``(a + b) mod 3`` — named square, circle, diamond — and all edges of
    the interference graph join points of different cosets.

    Attributes:
        coords: map from user index to its ``(a, b)`` lattice point.
        index_of: inverse of ``coords``.
        cosets: map from user index to its coset name.
        neighbors: interference-graph adjacency (self excluded).
        n: grid side length when built from an ``n x n`` rhombus, else None.
    """

    coords: dict[int, tuple[int, int]]
    index_of: dict[tuple[int, int], int]
    cosets: dict[int, str]
    neighbors: dict[int, frozenset[int]]
    n: int | None = None

    def real_part(self, i: int) -> Fraction:
        """Horizontal position of user ``i`` in the complex plane."""
        a, b = self.coords[i]
        return Fraction(a) - Fraction(b, 2)


def _coset_of(point: tuple[int, int]) -> str:
    a, b = point
    return _COSET_NAMES[(a + b) % 3]


def _lattice_edges(points: set[tuple[int, int]]) -> list[tuple[tuple[int, int], tuple[int, int]]]:
    """Edges of the sectored-interference graph induced on ``points``.

    From ``z = (a, b)``: the edge to ``z + 1`` exists unless ``z`` is a
    circle, and the edges to ``z + w`` and ``z + w + 1`` exist unless
    ``z`` is a square.  Endpoints outside ``points`` are dropped.
    """
    edges = []
    for a, b in sorted(points):
        coset = _coset_of((a, b))
        if coset != "circle" and (a + 1, b) in points:
            edges.append(((a, b), (a + 1, b)))
        if coset != "square":
            for other in ((a, b + 1), (a + 1, b + 1)):
                if other in points:
                    edges.append(((a, b), other))
    return edges


def hexagonal_from_coords(coords: list[tuple[int, int]]) -> tuple[NetworkTopology, HexLattice]:
    """Build a hexagonal-sectored network on an explicit set of lattice points.

    Args:
        coords: distinct ``(a, b)`` lattice points; user ``i`` is
            ``coords[i-1]``.

    Returns:
        The interference topology (each receiver hears itself plus its
        lattice neighbors) and the geometry object.
    """
    if not coords:
        raise InvalidParameterError("coords must be non-empty")
    points = {tuple(p) for p in coords}
    if len(points) != len(coords):
        raise InvalidParameterError("coords must be distinct")
    coord_map = {i + 1: tuple(p) for i, p in enumerate(coords)}
    index_of = {p: i for i, p in coord_map.items()}
    K = len(coords)
    nbrs: dict[int, set[int]] = {i: set() for i in range(1, K + 1)}
    for u, v in _lattice_edges(points):
        iu, iv = index_of[u], index_of[v]
        nbrs[iu].add(iv)
        nbrs[iv].add(iu)
    cosets = {i: _coset_of(p) for i, p in coord_map.items()}
    lattice = HexLattice(
        coords=coord_map,
        index_of=index_of,
        cosets=cosets,
        neighbors={i: frozenset(s) for i, s in nbrs.items()},
        n=None,
    )
    hears = {i: frozenset({i} | nbrs[i]) for i in range(1, K + 1)}
    params = {
        "coords": [list(coord_map[i]) for i in range(1, K + 1)],
        "cosets": [cosets[i] for i in range(1, K + 1)],
        "n": None,
    }
    topo = NetworkTopology(kind="hexagonal", K=K, params=params, hears=hears)
    return topo, lattice


def build_hexagonal(n: int) -> tuple[NetworkTopology, HexLattice]:
    """Hexagonal-sectored network on an ``n x n`` rhombus of lattice points.

    Point ``(a, b)`` with ``0 <= a, b < n`` becomes user ``b*n + a + 1``.

    Args:
        n: side length, at least 1.
    """
    if n < 1:
        raise InvalidParameterError("n must be >= 1")
    coords = [(a, b) for b in range(n) for a in range(n)]
    topo, lattice = hexagonal_from_coords(coords)
    lattice.n = n
    topo.params["n"] = n
    return topo, lattice


def _triangle_at(lattice: HexLattice, anchor: tuple[int, int]) -> tuple[int, int, int] | None:
    """Indices of the upward triangle anchored at ``anchor``, or None.

    The triple is ``(z, z + w, z + w + 1)`` in that order; None when any
    corner falls outside the lattice.
    """
    a, b = anchor
    corners = ((a, b), (a, b + 1), (a + 1, b + 1))
    if any(c not in lattice.index_of for c in corners):
        return None
    return tuple(lattice.index_of[c] for c in corners)  # type: ignore[return-value]


def main_triangles(lattice: HexLattice) -> list[tuple[int, int, int]]:
    """All complete cooperation triangles anchored at circle points.

    Every user belongs to exactly one such triangle when its triangle is
    complete; the returned triples are ordered (circle, diamond, square)
    and sorted by anchor index.
    """
    out = []
    for i in sorted(lattice.coords):
        if lattice.cosets[i] == "circle":
            tri = _triangle_at(lattice, lattice.coords[i])
            if tri is not None:
                out.append(tri)
    return out


def main_anchor(lattice: HexLattice, i: int) -> tuple[int, int]:
    """Anchor point of the circle-anchored triangle through user ``i``.

    The anchor is the point itself for a circle, one step down-left for
    a diamond (``z - w``), one step further for a square
    (``z - w - 1``); it may fall outside the lattice.
    """
    a, b = lattice.coords[i]
    coset = lattice.cosets[i]
    if coset == "circle":
        return (a, b)
    if coset == "diamond":
        return (a, b - 1)
    return (a - 1, b - 1)


def middle_anchor(lattice: HexLattice, i: int) -> tuple[int, int]:
    """Anchor point of the diamond-anchored triangle through user ``i``."""
    a, b = lattice.coords[i]
    coset = lattice.cosets[i]
    if coset == "diamond":
        return (a, b)
    if coset == "square":
        return (a, b - 1)
    return (a - 1, b - 1)


def main_triangle(lattice: HexLattice, i: int) -> tuple[int, int, int] | None:
    """The circle-anchored triangle containing user ``i``, or None if clipped."""
    return _triangle_at(lattice, main_anchor(lattice, i))


def middle_triangle(lattice: HexLattice, i: int) -> tuple[int, int, int] | None:
    """The diamond-anchored triangle containing user ``i``, or None if clipped.

    These triangles are pairwise disjoint and link adjacent
    circle-anchored triangles; each user lies in at most one.
    """
    return _triangle_at(lattice, middle_anchor(lattice, i))


def interior_nodes(lattice: HexLattice) -> frozenset[int]:
    """Users whose circle-anchored and diamond-anchored triangles are both complete.

    These are the nodes untouched by lattice-boundary clipping; bounds
    stated for the infinite lattice are reported against this set.
    """
    return frozenset(
        i
        for i in lattice.coords
        if main_triangle(lattice, i) is not None and middle_triangle(lattice, i) is not None
    )
