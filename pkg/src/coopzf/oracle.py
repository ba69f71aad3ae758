"""Exact search for optimal interference-avoidance at desk scale.

Three exhaustive-but-pruned searches serve as ground truth on small
instances: the best schedule when every message sits at one flexibly
chosen transmitter, the best activation count when transmit sets may be
designed under a backhaul budget, and the best activation count when
the transmit sets are already fixed.  All values are exact optima;
instances larger than the node limits are refused rather than
approximated.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import itertools
import time

from .assignment import MessageAssignment, metrics
from .errors import ResourceLimitError
from .schemes import ZfScheme, validate_scheme
from .topology import NetworkTopology


@dataclass
class AvoidanceSchedule:
    """A set of simultaneously interference-free (receiver, transmitter) pairs.

    Attributes:
        pairs: scheduled ``(receiver, transmitter)`` pairs; receivers
            are pairwise distinct, transmitters are pairwise distinct,
            and no scheduled receiver hears any other scheduled
            transmitter.
        value: number of pairs.
        nodes_explored: search nodes visited to prove optimality.
    """

    pairs: frozenset[tuple[int, int]]
    value: int
    nodes_explored: int = 0


@dataclass
class CooperativeWitness:
    """Optimal active set plus minimal transmit sets realizing it."""

    active: frozenset[int]
    assignment: MessageAssignment
    nodes_explored: int = 0


@dataclass
class ActivationWitness:
    """Optimal active set for a fixed assignment."""

    active: frozenset[int]
    nodes_explored: int = 0


def validate_schedule(topology: NetworkTopology, schedule: AvoidanceSchedule) -> list[str]:
    """Check one-shot avoidance semantics; returns violations."""
    problems: list[str] = []
    rxs = [r for r, _ in schedule.pairs]
    txs = [t for _, t in schedule.pairs]
    if len(set(rxs)) != len(rxs):
        problems.append("receivers are not pairwise distinct")
    if len(set(txs)) != len(txs):
        problems.append("transmitters are not pairwise distinct")
    for r, t in sorted(schedule.pairs):
        if t not in topology.hears[r]:
            problems.append(f"receiver {r} does not hear its transmitter {t}")
    for r, t in sorted(schedule.pairs):
        for r2, t2 in sorted(schedule.pairs):
            if t2 != t and t2 in topology.hears[r]:
                problems.append(f"receiver {r} hears interfering transmitter {t2}")
    if schedule.value != len(schedule.pairs):
        problems.append("value does not equal the number of pairs")
    return problems


class _Deadline:
    """Periodic wall-clock guard for exponential searches."""

    def __init__(self, seconds: float | None):
        self.expires = None if seconds is None else time.monotonic() + seconds
        self.ticks = 0

    def check(self) -> None:
        self.ticks += 1
        if self.expires is not None and self.ticks % 1024 == 0:
            if time.monotonic() > self.expires:
                raise ResourceLimitError("search time limit exceeded")


def max_avoidance_m1(
    topology: NetworkTopology, node_limit: int = 36, time_limit: float | None = None
) -> tuple[int, AvoidanceSchedule]:
    """Best schedule with each message at one flexibly chosen transmitter.

    Every candidate service is a pair ``(r, t)`` with ``t`` heard at
    ``r``; two services are compatible iff they share no receiver or
    transmitter and neither receiver hears the other's transmitter.  A
    valid schedule is a clique of the compatibility graph, found by
    branch and bound with a greedy-coloring admissible bound.

    Raises:
        ResourceLimitError: ``K`` exceeds ``node_limit``, or the time
            limit is hit.
    """
    if topology.K > node_limit:
        raise ResourceLimitError(f"K={topology.K} exceeds node_limit={node_limit}")
    deadline = _Deadline(time_limit)
    hears = topology.hears
    pairs = [(r, t) for r in range(1, topology.K + 1) for t in sorted(hears[r])]
    n = len(pairs)
    compat = [0] * n
    for x in range(n):
        rx, tx = pairs[x]
        for y in range(x + 1, n):
            ry, ty = pairs[y]
            if rx != ry and tx != ty and ty not in hears[rx] and tx not in hears[ry]:
                compat[x] |= 1 << y
                compat[y] |= 1 << x
    best = 0
    best_set = 0
    visited = 0

    def color_order(cand: int) -> list[tuple[int, int]]:
        # Greedy coloring: a clique inside cand has at most max-color members.
        order = []
        color = 0
        rest = cand
        while rest:
            color += 1
            avail = rest
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= avail - 1
                avail &= ~compat[v]
                rest &= ~(1 << v)
                order.append((v, color))
        return order

    def expand(cand: int, cur: int, cur_set: int) -> None:
        nonlocal best, best_set, visited
        visited += 1
        deadline.check()
        for v, c in reversed(color_order(cand)):
            if cur + c <= best:
                return
            if cur + 1 > best:
                best = cur + 1
                best_set = cur_set | (1 << v)
            newcand = cand & compat[v]
            if newcand:
                expand(newcand, cur + 1, cur_set | (1 << v))
            cand &= ~(1 << v)

    if n:
        expand((1 << n) - 1, 0, 0)
    chosen = frozenset(pairs[i] for i in range(n) if best_set >> i & 1)
    return best, AvoidanceSchedule(pairs=chosen, value=best, nodes_explored=visited)


def _max_matching(rows: list[frozenset[int]]) -> int:
    """Maximum bipartite matching of row index to a member column."""
    match_col: dict[int, int] = {}

    def try_row(r: int, seen: set[int]) -> bool:
        for c in rows[r]:
            if c in seen:
                continue
            seen.add(c)
            if c not in match_col or try_row(match_col[c], seen):
                match_col[c] = r
                return True
        return False

    return sum(1 for r in range(len(rows)) if try_row(r, set()))


def _deliverable(
    i: int, T: frozenset[int], active, hears: dict[int, frozenset[int]]
) -> bool:
    """Generic zero-forcing deliverability of message ``i`` from antennas ``T``.

    With generic channel gains, the interference of ``T`` at the other
    active receivers can be nulled while keeping a nonzero coefficient
    at receiver ``i`` iff appending the desired-signal support row to
    the cancellation support rows raises the maximum matching by one.
    """
    desired = T & hears[i]
    if not desired:
        return False
    crows = [T & hears[k] for k in active if k != i and T & hears[k]]
    return _max_matching(crows + [desired]) == _max_matching(crows) + 1


def max_avoidance_cooperative(
    topology: NetworkTopology,
    B: Fraction | int,
    node_limit: int = 12,
    time_limit: float | None = None,
) -> tuple[int, CooperativeWitness]:
    """Best activation count over all assignments with backhaul at most ``B``.

    Active sets are tried largest-first; for a candidate active set the
    cheapest workable transmit set of each active message is independent
    of the others', so the set is feasible iff the per-message minima
    fit the total budget ``B*K``.

    Raises:
        ResourceLimitError: ``K`` exceeds ``node_limit`` or time is up.
    """
    K = topology.K
    if K > node_limit:
        raise ResourceLimitError(f"K={K} exceeds node_limit={node_limit}")
    deadline = _Deadline(time_limit)
    budget = int(Fraction(B) * K)
    hears = topology.hears
    visited = 0

    def cheapest(i: int, active, cap: int) -> frozenset[int] | None:
        nonlocal visited
        pool = sorted(set().union(*(hears[k] for k in active)))
        for size in range(1, cap + 1):
            for T in itertools.combinations(pool, size):
                visited += 1
                deadline.check()
                if _deliverable(i, frozenset(T), active, hears):
                    return frozenset(T)
        return None

    empty = {i: frozenset() for i in range(1, K + 1)}
    for size in range(K, 0, -1):
        for A in itertools.combinations(range(1, K + 1), size):
            total = 0
            sets: dict[int, frozenset[int]] = {}
            for i in A:
                T = cheapest(i, A, budget - total)
                if T is None:
                    break
                sets[i] = T
                total += len(T)
            else:
                witness = MessageAssignment(K=K, transmit_sets={**empty, **sets})
                return size, CooperativeWitness(
                    active=frozenset(A), assignment=witness, nodes_explored=visited
                )
    witness = MessageAssignment(K=K, transmit_sets=dict(empty))
    return 0, CooperativeWitness(active=frozenset(), assignment=witness, nodes_explored=visited)


def max_activation_for_assignment(
    topology: NetworkTopology,
    assignment: MessageAssignment,
    node_limit: int = 24,
    time_limit: float | None = None,
) -> tuple[int, ActivationWitness]:
    """Best activation count when the transmit sets are already fixed.

    Depth-first include/exclude over messages: including a receiver
    re-checks deliverability of the newcomer and of every chosen
    receiver whose transmit set it hears (adding receivers only ever
    shrinks deliverability, so pruning is sound); branches that cannot
    beat the incumbent are cut by remaining count.

    Raises:
        ResourceLimitError: ``K`` exceeds ``node_limit`` or time is up.
    """
    K = topology.K
    if K > node_limit:
        raise ResourceLimitError(f"K={K} exceeds node_limit={node_limit}")
    deadline = _Deadline(time_limit)
    hears = topology.hears
    tsets = assignment.transmit_sets
    order = [i for i in range(1, K + 1) if tsets[i] & hears[i]]
    best = 0
    best_set: frozenset[int] = frozenset()
    visited = 0

    def down(pos: int, active: frozenset[int]) -> None:
        nonlocal best, best_set, visited
        visited += 1
        deadline.check()
        if len(active) > best:
            best = len(active)
            best_set = active
        if pos == len(order) or len(active) + len(order) - pos <= best:
            return
        i = order[pos]
        grown = active | {i}
        if _deliverable(i, tsets[i], grown, hears) and all(
            _deliverable(k, tsets[k], grown, hears)
            for k in active
            if tsets[k] & hears[i]
        ):
            down(pos + 1, grown)
        down(pos + 1, active)

    down(0, frozenset())
    return best, ActivationWitness(active=best_set, nodes_explored=visited)


def certify_lower_bound(
    topology: NetworkTopology,
    scheme: ZfScheme,
    assignment: MessageAssignment,
    node_limit: int | None = None,
    time_limit: float | None = None,
) -> bool:
    """True iff the scheme is structurally valid and the oracle confirms it.

    The matching exact search (single-transmitter for cooperation order
    at most 1, budgeted cooperative otherwise, at the assignment's own
    backhaul) must find at least as many activations as the scheme
    claims — a scheme beating the exact optimum would be unsound.
    """
    if validate_scheme(topology, assignment, scheme):
        return False
    stats = metrics(assignment)
    if stats.M <= 1:
        value, _ = max_avoidance_m1(
            topology, node_limit=node_limit if node_limit is not None else 36,
            time_limit=time_limit,
        )
    else:
        value, _ = max_avoidance_cooperative(
            topology, stats.B, node_limit=node_limit if node_limit is not None else 12,
            time_limit=time_limit,
        )
    return value >= len(scheme.active_messages)
