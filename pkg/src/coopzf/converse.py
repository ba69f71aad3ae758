"""Certified upper bounds on simultaneously served users.

Everything here bounds how many receivers a one-shot zero-forcing
scheme can serve, from above, given structural facts about a message
assignment.  The primitive fact is pairwise: when message ``i`` is
assigned to the single transmitter ``j``, every other receiver that
hears ``j`` competes with ``i`` — at most one of the two can be served.
Group certificates assemble such facts over node groups of a hexagonal
lattice, solve each group's tiny packing program exactly, and add one
for every node left outside all groups.

Two group builders are provided: :func:`algorithm1_certify` works from
a message assignment with per-message cooperation at most one, and
:func:`triangle_state_bound` works from an explicit served schedule.
:func:`backhaul_converse` is the linear-network counterpart: it scans
candidate cooperation sizes and bounds the served count under an
average-backhaul budget, with :func:`reconstructibility_check`
providing the supporting decodability argument.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .assignment import MessageAssignment, metrics
from .errors import InvalidParameterError, PreconditionViolationError, UnsupportedError
from .oracle import AvoidanceSchedule, validate_schedule
from .topology import (
    HexLattice,
    NetworkTopology,
    hexagonal_from_coords,
    main_anchor,
    main_triangle,
    main_triangles,
    middle_triangle,
)

Constraint = tuple  # ("pair", i, k) or ("zero", i)


# ---------------------------------------------------------------------------
# pairwise facts
# ---------------------------------------------------------------------------


def lemma_pairwise_bounds(
    topology: NetworkTopology, assignment: MessageAssignment
) -> tuple[frozenset[tuple[int, int]], frozenset[int]]:
    """All pairwise conflicts and zero facts implied by a 1-cooperative assignment.

    For every message ``i`` assigned to exactly one transmitter ``j``,
    each other receiver ``k`` that hears ``j`` yields the conflict
    ``(i, k)``: serving both in one shot is impossible, so their served
    indicators sum to at most one.  Messages assigned to no transmitter
    can never be served and appear as zero facts.

    Args:
        topology: who hears whom.
        assignment: transmit sets, each of size at most one.

    Returns:
        ``(pairs, zeros)`` where ``pairs`` holds ordered tuples
        ``(i, k)`` (``i`` the assigned message, ``k`` the competing
        receiver) and ``zeros`` the unassigned message indices.

    Raises:
        PreconditionViolationError: if some transmit set has size > 1.
        InvalidParameterError: if sizes disagree.
    """
    if topology.K != assignment.K:
        raise InvalidParameterError("topology and assignment sizes disagree")
    pairs: set[tuple[int, int]] = set()
    zeros: set[int] = set()
    for i in range(1, assignment.K + 1):
        T = assignment.transmit_sets[i]
        if len(T) > 1:
            raise PreconditionViolationError(
                f"message {i} uses {len(T)} transmitters; at most one allowed"
            )
        if not T:
            zeros.add(i)
            continue
        (j,) = T
        for k in topology.hearers(j):
            if k != i:
                pairs.add((i, k))
    return frozenset(pairs), frozenset(zeros)


# ---------------------------------------------------------------------------
# group certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CertifiedGroup:
    """One node group with its exact packing bound.

    Attributes:
        nodes: sorted member indices.
        bound: exact maximum of the sum of served indicators over the
            members, subject to ``constraints``.
        constraints: tuple of ``("pair", i, k)`` / ``("zero", i)``
            facts, each individually valid for the assignment the
            certificate was built from.
        note: short human-readable tag for how the group was formed.
    """

    nodes: tuple[int, ...]
    bound: Fraction
    constraints: tuple[Constraint, ...] = ()
    note: str = ""

    def to_json(self) -> dict:
        recorded = []
        for c in self.constraints:
            if c[0] == "pair":
                recorded.append({"kind": "pair", "i": c[1], "k": c[2]})
            else:
                recorded.append({"kind": "zero", "i": c[1]})
        return {
            "nodes": list(self.nodes),
            "bound": str(self.bound),
            "constraints": recorded,
            "note": self.note,
        }


@dataclass(frozen=True)
class GroupCertificate:
    """Partition-based upper bound on the number of served users.

    ``groups`` are pairwise disjoint; ``uncovered`` holds every node in
    no group and contributes one unit each (trivial bound).  The
    certified claim is: any one-shot scheme consistent with the facts
    serves at most ``certified_bound`` users in total.
    """

    groups: tuple[CertifiedGroup, ...]
    uncovered: frozenset[int]
    certified_bound: int
    bound_total: Fraction

    def to_json(self) -> dict:
        return {
            "groups": [g.to_json() for g in self.groups],
            "uncovered": sorted(self.uncovered),
            "certified_bound": self.certified_bound,
            "bound_total": str(self.bound_total),
        }


def _lp_bound(nodes: tuple[int, ...], constraints: tuple[Constraint, ...]) -> Fraction:
    """Exact max of sum of d_i over d in {0, 1/2, 1} meeting the constraints.

    Pair constraints cap ``d_i + d_k <= 1`` (only when both endpoints
    are members); zero constraints force ``d_i = 0``.  Group sizes stay
    tiny, so plain enumeration over the half-integer grid is exact:
    every vertex of the pairing polytope is half-integral.
    """
    idx = {x: p for p, x in enumerate(nodes)}
    zero_pos = {idx[c[1]] for c in constraints if c[0] == "zero" and c[1] in idx}
    pair_pos = [
        (idx[c[1]], idx[c[2]])
        for c in constraints
        if c[0] == "pair" and c[1] in idx and c[2] in idx
    ]
    levels = (Fraction(0), Fraction(1, 2), Fraction(1))
    best = Fraction(0)
    for d in itertools.product(levels, repeat=len(nodes)):
        if any(d[p] for p in zero_pos):
            continue
        if any(d[a] + d[b] > 1 for a, b in pair_pos):
            continue
        best = max(best, sum(d, Fraction(0)))
    return best


class _GroupBuilder:
    """Mutable accumulator for groups while a certify pass runs."""

    def __init__(self) -> None:
        self.groups: list[dict] = []
        self.of: dict[int, int] = {}

    def new(self, nodes: list[int], constraints: list[Constraint], note: str) -> int:
        gid = len(self.groups)
        self.groups.append({"nodes": list(nodes), "constraints": list(constraints), "note": note})
        for x in nodes:
            self.of[x] = gid
        return gid

    def merge(self, x: int, gid: int, constraints: list[Constraint]) -> None:
        self.groups[gid]["nodes"].append(x)
        self.groups[gid]["constraints"].extend(constraints)
        self.of[x] = gid

    def lp(self, gid: int) -> Fraction:
        g = self.groups[gid]
        return _lp_bound(tuple(g["nodes"]), tuple(g["constraints"]))

    def finish(self, uncovered: set[int]) -> GroupCertificate:
        done = []
        total = Fraction(0)
        for g in self.groups:
            bound = _lp_bound(tuple(g["nodes"]), tuple(g["constraints"]))
            total += bound
            done.append(
                CertifiedGroup(
                    nodes=tuple(sorted(g["nodes"])),
                    bound=bound,
                    constraints=tuple(g["constraints"]),
                    note=g["note"],
                )
            )
        total += len(uncovered)
        return GroupCertificate(
            groups=tuple(done),
            uncovered=frozenset(uncovered),
            certified_bound=int(total),  # floor: served counts are integers
            bound_total=total,
        )


def algorithm1_certify(
    lattice: HexLattice,
    assignment: MessageAssignment,
    shuffle_seed: int | None = None,
) -> GroupCertificate:
    """Group certificate for a 1-cooperative assignment on a hexagonal lattice.

    Builds disjoint groups of lattice nodes such that each group's
    pairwise facts cap its served count, in three sweeps: (1) each
    self-serving node is paired with a cell partner, preferring the one
    further left; (2) nodes served from outside their own cell are
    grouped inside the linking triangle they are served across;
    (3) leftover cells are closed out, attaching stragglers to the
    existing group that costs the least.  Nodes that cannot be grouped
    count one unit each as uncovered.

    Args:
        lattice: hexagonal layout (any finite node set).
        assignment: transmit sets, each of size at most one.  A
            transmitter outside the message's own hearing range is
            useless and treated as unassigned.
        shuffle_seed: optional seed; permutes the sweep *iteration*
            orders (tie-breaks stay deterministic), for checking that
            the certified bound is order-insensitive.

    Returns:
        A :class:`GroupCertificate`; the bound applies to every
        one-shot scheme using this assignment.
    """
    nodes = sorted(lattice.coords)
    if assignment.K != len(nodes):
        raise InvalidParameterError("assignment size disagrees with lattice size")
    for i in nodes:
        if len(assignment.transmit_sets[i]) > 1:
            raise PreconditionViolationError(
                f"message {i} uses more than one transmitter"
            )

    nbr = lattice.neighbors
    closed = {i: frozenset({i}) | nbr[i] for i in nodes}

    # Reduce: a single transmitter the receiver cannot hear delivers nothing.
    T: dict[int, frozenset[int]] = {}
    for i in nodes:
        s = assignment.transmit_sets[i]
        if len(s) == 1 and next(iter(s)) in closed[i]:
            T[i] = s
        else:
            T[i] = frozenset()

    mains = {i: main_triangle(lattice, i) for i in nodes}
    middles = {i: middle_triangle(lattice, i) for i in nodes}

    def hearers(j: int) -> frozenset[int]:
        return closed[j]

    self_servers = [x for x in nodes if T[x] == frozenset({x})]

    def is_outsider(a: int) -> bool:
        mt = mains[a]
        if mt is None:
            return False
        if any(T[m] == frozenset({a}) for m in mt):
            return False  # some cell member transmits to it
        if T[a] and next(iter(T[a])) in mt:
            return False  # assigned within its own cell
        return True

    outsider_set = {a for a in nodes if is_outsider(a)}

    uncovered: set[int] = set()
    for x in nodes:
        if mains[x] is None:
            uncovered.add(x)
    for a in outsider_set:
        if middles[a] is None:
            uncovered.add(a)

    rng = random.Random(shuffle_seed) if shuffle_seed is not None else None

    def ordered(seq: list) -> list:
        seq = list(seq)
        if rng is not None:
            rng.shuffle(seq)
        return seq

    builder = _GroupBuilder()

    def done(x: int) -> bool:
        return x in builder.of or x in uncovered

    # Sweep 1: self-serving nodes pair up inside their own cell.
    for x in ordered(sorted(self_servers)):
        if done(x):
            continue
        mt = mains[x]
        pool = [y for y in mt if y != x and not done(y)]
        if not pool:
            uncovered.add(x)
            continue
        partner = min(pool, key=lambda y: (lattice.real_part(y), y))
        builder.new([x, partner], [("pair", x, partner)], "self-serving pair")

    # Sweep 2: nodes served from outside their cell, grouped per linking triangle.
    for a in ordered(sorted(outsider_set)):
        if done(a):
            continue
        mid = middles[a]
        avail = [m for m in mid if not done(m)]
        outs = [o for o in avail if o in outsider_set]
        if len(outs) >= 2:
            cons: list[Constraint] = []
            for o in outs:
                if T[o]:
                    (j,) = T[o]
                    cons.extend(("pair", o, k) for k in outs if k != o and k in hearers(j))
                else:
                    cons.append(("zero", o))
            builder.new(outs, cons, "linking-triangle group")
            continue
        # `a` is the only groupable outside-served node of this triangle.
        if not T[a]:
            builder.new([a], [("zero", a)], "unassigned outside-served")
            continue
        (j,) = T[a]
        if j in builder.of:
            gid = builder.of[j]
            extra = [("pair", a, k) for k in builder.groups[gid]["nodes"] if k in hearers(j)]
            builder.merge(a, gid, extra)
        elif j in uncovered:
            uncovered.add(a)
        else:
            builder.new([a, j], [("pair", a, j)], "served-across pair")

    # Sweep 3: close out every complete cell.
    cells = sorted(main_triangles(lattice), key=min)
    for mt in ordered(cells):
        t = [x for x in mt if not done(x)]
        if not t:
            continue
        if len(t) >= 2:
            cons = []
            for x in t:
                if T[x]:
                    (v,) = T[x]
                    cons.extend(("pair", x, y) for y in t if y != x and y in hearers(v))
                else:
                    cons.append(("zero", x))
            builder.new(t, cons, "residual cell" if len(t) == 3 else "residual cell pair")
            continue
        (x,) = t
        if not T[x]:
            builder.new([x], [("zero", x)], "residual unassigned")
            continue
        (v,) = T[x]
        best: tuple[Fraction, int, Fraction] | None = None
        for gid, g in enumerate(builder.groups):
            partners = [k for k in g["nodes"] if k in hearers(v)]
            if not partners:
                continue
            trial_nodes = tuple(g["nodes"]) + (x,)
            trial_cons = tuple(g["constraints"]) + tuple(("pair", x, k) for k in partners)
            new_lp = _lp_bound(trial_nodes, trial_cons)
            key = (new_lp - builder.lp(gid), gid, new_lp)
            if best is None or key[:2] < best[:2]:
                best = key
        if best is None or best[2] > Fraction(len(builder.groups[best[1]]["nodes"]) + 1, 2):
            uncovered.add(x)  # no partner, or attaching would dilute the group
        else:
            gid = best[1]
            partners = [k for k in builder.groups[gid]["nodes"] if k in hearers(v)]
            builder.merge(x, gid, [("pair", x, k) for k in partners])

    return builder.finish(uncovered)


def validate_certificate(
    lattice: HexLattice, assignment: MessageAssignment, certificate: GroupCertificate
) -> list[str]:
    """Audit a group certificate against the assignment it claims to bound.

    Checks disjointness, full coverage, that every recorded constraint
    is a genuine pairwise/zero fact for this assignment on this
    lattice, and that every group's bound equals the exact optimum of
    its recorded constraint system.

    Returns:
        A list of problem descriptions; empty when the certificate is
        sound and self-consistent.
    """
    problems: list[str] = []
    nodes = set(lattice.coords)
    closed = {i: frozenset({i}) | lattice.neighbors[i] for i in nodes}

    seen: set[int] = set()
    for g in certificate.groups:
        for x in g.nodes:
            if x in seen:
                problems.append(f"node {x} appears in more than one group")
            seen.add(x)
    overlap = seen & certificate.uncovered
    if overlap:
        problems.append(f"nodes {sorted(overlap)} are both grouped and uncovered")
    missing = nodes - seen - certificate.uncovered
    if missing:
        problems.append(f"nodes {sorted(missing)} are in no group and not uncovered")

    for g in certificate.groups:
        members = set(g.nodes)
        for c in g.constraints:
            if c[0] == "zero":
                i = c[1]
                if i not in members:
                    problems.append(f"zero fact on non-member {i}")
                    continue
                Ti = assignment.transmit_sets[i]
                deliverable = bool(Ti & closed[i])
                if deliverable:
                    problems.append(f"zero fact on {i} but its transmitter is audible")
            elif c[0] == "pair":
                _, i, k = c
                if i not in members or k not in members:
                    problems.append(f"pair ({i},{k}) reaches outside its group")
                    continue
                Ti = assignment.transmit_sets[i]
                if len(Ti) != 1:
                    problems.append(f"pair ({i},{k}) but message {i} is not singly assigned")
                    continue
                (j,) = Ti
                if k not in closed[j]:
                    problems.append(f"pair ({i},{k}) but {k} does not hear transmitter {j}")
            else:
                problems.append(f"unknown constraint kind {c[0]!r}")
        lp = _lp_bound(g.nodes, g.constraints)
        if lp != g.bound:
            problems.append(
                f"group {list(g.nodes)} records bound {g.bound} but its system solves to {lp}"
            )
    total = sum((g.bound for g in certificate.groups), Fraction(0)) + len(certificate.uncovered)
    if total != certificate.bound_total:
        problems.append("bound_total does not match the sum of group bounds")
    if certificate.certified_bound != int(total):
        problems.append("certified_bound is not the floor of bound_total")
    return problems


def toy_instance() -> tuple[NetworkTopology, HexLattice, MessageAssignment, dict[str, int]]:
    """Nine-node worked example: three cells joined by one linking triangle.

    Returns ``(topology, lattice, assignment, labels)`` where
    ``labels`` maps the conventional names ``a1..a3``, ``b1..b3``,
    ``c1..c3`` to node indices.  The assignment mixes a self-serving
    node, two nodes served across the linking triangle, and two plain
    in-cell services; its certified bound is 4 of 9.
    """
    names = ["a1", "a2", "a3", "b1", "b2", "b3", "c1", "c2", "c3"]
    coords = [(1, 0), (2, 1), (1, 1), (0, 1), (1, 2), (0, 2), (2, 2), (2, 3), (3, 3)]
    topology, lattice = hexagonal_from_coords(coords)
    labels = {name: i + 1 for i, name in enumerate(names)}
    sets: dict[int, frozenset[int]] = {labels[n]: frozenset() for n in names}
    sets[labels["a2"]] = frozenset({labels["a1"]})
    sets[labels["b1"]] = frozenset({labels["b3"]})
    sets[labels["a3"]] = frozenset({labels["b2"]})
    sets[labels["c2"]] = frozenset({labels["c3"]})
    sets[labels["c1"]] = frozenset({labels["c1"]})
    assignment = MessageAssignment(K=9, transmit_sets=sets)
    return topology, lattice, assignment, labels


# ---------------------------------------------------------------------------
# schedule-driven accounting
# ---------------------------------------------------------------------------


def triangle_state_bound(lattice: HexLattice, schedule: AvoidanceSchedule) -> GroupCertificate:
    """Group certificate derived from an explicit interference-free schedule.

    Classifies every complete cell by how the schedule touches it
    (in-cell service; member transmitting outward; member served from
    outward; untouched), turns each cross-cell service into its linking
    triangle's node triple, attaches those triples to the serving-side
    cell when possible, and emits per-group packing bounds whose facts
    are the pairwise/zero facts induced by the schedule.

    Args:
        lattice: hexagonal layout.
        schedule: distinct receivers served by distinct transmitters
            with no unintended audibility; validated first.

    Raises:
        PreconditionViolationError: if the schedule is not a valid
            interference-avoidance schedule for this lattice.
    """
    nodes = sorted(lattice.coords)
    hears = {i: frozenset({i}) | lattice.neighbors[i] for i in nodes}
    topology = NetworkTopology(
        kind="hexagonal", K=len(nodes), params={}, hears=hears
    )
    problems = validate_schedule(topology, schedule)
    if problems:
        raise PreconditionViolationError("; ".join(problems))

    pairs = sorted(schedule.pairs)
    served_rx = {r for r, _ in pairs}

    in_cell = [(r, t) for r, t in pairs if main_anchor(lattice, r) == main_anchor(lattice, t)]
    cross = [(r, t) for r, t in pairs if main_anchor(lattice, r) != main_anchor(lattice, t)]

    cells = sorted(main_triangles(lattice), key=min)
    state: dict[tuple[int, int, int], int] = {}
    for mt in cells:
        ms = set(mt)
        if any(r in ms for r, _ in in_cell):
            state[mt] = 1
        elif any(t in ms for _, t in cross):
            state[mt] = 2
        elif any(r in ms for r, _ in cross):
            state[mt] = 3
        else:
            state[mt] = 0

    # Each cross-cell service lives in one linking triangle; collect its triple.
    forced_uncovered: set[int] = set()
    triples: list[tuple[int, int, int]] = []  # (bystander, transmitter, receiver)
    for r, t in cross:
        mid = middle_triangle(lattice, r)
        if mid is None or t not in mid:
            forced_uncovered.update((r, t))
            continue
        (a,) = (x for x in mid if x not in (r, t))
        triples.append((a, t, r))

    builder = _GroupBuilder()
    consumed: set[int] = set()

    def zero_or_skip(x: int) -> list[Constraint]:
        return [] if x in served_rx else [("zero", x)]

    def service_cons(r: int, t: int, members: set[int]) -> list[Constraint]:
        return [("pair", r, k) for k in sorted(members & hears[t]) if k != r]

    # Absorb triples into the cell of their bystander node when that cell
    # is complete and not itself exporting or importing a service.
    for mt in cells:
        if state[mt] not in (0, 1):
            continue
        attached = [tr for tr in triples if tr[0] in mt and tr not in consumed]
        members = set(mt)
        for a, t, r in attached:
            members.update((t, r))
        cons: list[Constraint] = []
        for r, t in in_cell:
            if r in mt:
                cons.extend(service_cons(r, t, members))
        for a, t, r in attached:
            cons.extend(service_cons(r, t, members))
            consumed.add((a, t, r))
        for x in sorted(members):
            cons.extend(zero_or_skip(x))
        builder.new(
            sorted(members),
            cons,
            f"cell state {state[mt]} with {len(attached)} linked services",
        )

    # Remaining triples stand alone.
    for a, t, r in triples:
        if (a, t, r) in consumed:
            continue
        members = {a, t, r}
        cons = service_cons(r, t, members)
        for x in sorted(members):
            cons.extend(zero_or_skip(x))
        builder.new(sorted(members), cons, "standalone linked service")

    # Leftover members of exporting/importing cells are provably unserved.
    for mt in cells:
        if state[mt] not in (2, 3):
            continue
        left = [x for x in mt if x not in builder.of and x not in forced_uncovered]
        if not left:
            continue
        builder.new(left, [("zero", x) for x in left], f"unserved rest of state-{state[mt]} cell")

    uncovered = set(forced_uncovered)
    for x in nodes:
        if x not in builder.of:
            uncovered.add(x)
    return builder.finish(uncovered)


# ---------------------------------------------------------------------------
# linear networks under a backhaul budget
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BackhaulConverseResult:
    """Outcome of the backhaul-budget scan for a chain network.

    Attributes:
        M: the cooperation-size cutoff achieving the best bound.
        S: messages whose transmit set has size at most ``M``.
        A_bar: the deactivated candidates certified unservable.
        A_bar_size: ``len(A_bar)``.
        bound: certified maximum number of served users, ``K - A_bar_size``.
        K: number of users.
        slack: ``bound - (4B - 1) K / (4B)`` as an exact fraction;
            zero means the scan is tight against the matching scheme.
        scanned: bound obtained at every cutoff tried, for reporting.
    """

    M: int
    S: tuple[int, ...]
    A_bar: tuple[int, ...]
    A_bar_size: int
    bound: int
    K: int
    slack: Fraction
    scanned: dict[int, int] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "M": self.M,
            "S": list(self.S),
            "A_bar": list(self.A_bar),
            "A_bar_size": self.A_bar_size,
            "bound": self.bound,
            "K": self.K,
            "slack": str(self.slack),
            "scanned": {str(m): v for m, v in sorted(self.scanned.items())},
        }


def _low_cooperation_candidates(assignment: MessageAssignment, M: int) -> tuple[list[int], list[int]]:
    """Messages with small transmit sets, and the evenly spaced candidates among them.

    ``S`` lists every message whose transmit set has at most ``M``
    members, ascending.  Candidates sit at positions ``M + 1``,
    ``3M + 2``, ``5M + 3``, ... within ``S`` (1-based), i.e. every
    ``2M + 1`` entries, so any two candidates are separated by at least
    ``2M`` other low-cooperation messages.  Candidates whose forward
    window would leave the chain (index ``> K - M``) are dropped; the
    spacing means at most one candidate is ever dropped.
    """
    K = assignment.K
    S = sorted(i for i in range(1, K + 1) if len(assignment.transmit_sets[i]) <= M)
    candidates: list[int] = []
    j = 1
    while True:
        pos = (2 * M + 1) * (j - 1) + M + 1
        if pos > len(S):
            break
        candidates.append(S[pos - 1])
        j += 1
    kept = [s for s in candidates if s + M <= K]
    return S, kept


def backhaul_converse(assignment: MessageAssignment, B: int | Fraction) -> BackhaulConverseResult:
    """Certified served-count bound for a chain network under backhaul budget ``B``.

    With average transmit-set size at most ``B``, for every cutoff
    ``M < 2B`` at least half the messages use at most ``M``
    transmitters (on average), so the low-cooperation set is dense
    enough to pick well-separated candidates; each candidate can be
    deactivated and its signal reconstructed from its neighbors, so no
    scheme can serve them all.  The scan keeps the best (smallest)
    bound over all cutoffs.

    Args:
        assignment: transmit sets on a chain network with ``K`` users.
        B: integer backhaul budget; the assignment's average load must
            not exceed it.

    Raises:
        InvalidParameterError: if ``B < 1``.
        UnsupportedError: if ``B`` is not an integer.
        PreconditionViolationError: if the assignment's average
            transmit-set size exceeds ``B``.
    """
    B_frac = Fraction(B)
    if B_frac.denominator != 1:
        raise UnsupportedError("only integer backhaul budgets are scanned")
    B_int = int(B_frac)
    if B_int < 1:
        raise InvalidParameterError("backhaul budget must be at least 1")
    m = metrics(assignment)
    if m.B > B_int:
        raise PreconditionViolationError(
            f"assignment has average load {m.B}, above the budget {B_int}"
        )
    K = assignment.K
    best: tuple[int, int, tuple[int, ...], tuple[int, ...]] | None = None
    scanned: dict[int, int] = {}
    for M in range(0, 2 * B_int):
        S, kept = _low_cooperation_candidates(assignment, M)
        bound = K - len(kept)
        scanned[M] = bound
        if best is None or bound < best[0]:
            best = (bound, M, tuple(S), tuple(kept))
    bound, M, S, kept = best
    slack = Fraction(bound) - Fraction((4 * B_int - 1) * K, 4 * B_int)
    return BackhaulConverseResult(
        M=M,
        S=S,
        A_bar=kept,
        A_bar_size=len(kept),
        bound=bound,
        K=K,
        slack=slack,
        scanned=scanned,
    )


def appendix_receiver_set(
    assignment: MessageAssignment, M: int
) -> tuple[frozenset[int], MessageAssignment]:
    """Active receiver set and trimmed assignment used by the reconstruction step.

    Picks the evenly spaced low-cooperation candidates for cutoff
    ``M``, removes them from the full receiver set to get ``A``, and
    reduces each low-cooperation message's transmit set to the window
    ``[i - M, i + M - 1]`` (other messages keep their sets).  The pair
    ``(A, reduced)`` always passes :func:`reconstructibility_check` on
    the matching chain network.

    Args:
        assignment: transmit sets on a chain network.
        M: cooperation-size cutoff, at least 0.
    """
    if M < 0:
        raise InvalidParameterError("cutoff must be at least 0")
    K = assignment.K
    S, kept = _low_cooperation_candidates(assignment, M)
    in_S = set(S)
    reduced_sets = {}
    for i in range(1, K + 1):
        T = assignment.transmit_sets[i]
        if i in in_S:
            T = frozenset(t for t in T if i - M <= t <= i + M - 1)
        reduced_sets[i] = T
    A = frozenset(range(1, K + 1)) - set(kept)
    return A, MessageAssignment(K=K, transmit_sets=reduced_sets)


def reconstructibility_check(
    topology: NetworkTopology, assignment: MessageAssignment, A: frozenset[int] | set[int]
) -> bool:
    """Whether receivers in ``A`` pin down every transmitted signal on a chain.

    Starts from the signals known trivially — transmitters carrying
    only messages of receivers inside ``A`` contribute no unknown — and
    repeatedly uses any receiver in ``A`` whose heard set has a single
    unknown left to resolve it.  Returns True when the walk resolves
    every transmitter, which is the decodability fact behind
    deactivating the complement of ``A``.

    Args:
        topology: must be a chain network (each receiver hears at most
            its own and the previous transmitter).
        assignment: transmit sets (which messages each transmitter carries).
        A: receiver subset doing the reconstruction.

    Raises:
        PreconditionViolationError: for non-chain topologies.
        InvalidParameterError: if ``A`` contains out-of-range indices.
    """
    chain = topology.kind == "wyner" or (
        topology.kind == "locally_connected" and topology.params.get("L") == 1
    )
    if not chain:
        raise PreconditionViolationError("reconstruction walk is defined on chain networks")
    if topology.K != assignment.K:
        raise InvalidParameterError("topology and assignment sizes disagree")
    K = topology.K
    A = frozenset(A)
    if any(not (1 <= i <= K) for i in A):
        raise InvalidParameterError("receiver set contains out-of-range indices")

    carried_for_outside: set[int] = set()
    for i in range(1, K + 1):
        if i not in A:
            carried_for_outside.update(assignment.transmit_sets[i])
    known = set(range(1, K + 1)) - carried_for_outside

    changed = True
    while changed:
        changed = False
        for j in sorted(A):
            unknown = [t for t in topology.hears[j] if t not in known]
            if len(unknown) == 1:
                known.add(unknown[0])
                changed = True
    return len(known) == K
