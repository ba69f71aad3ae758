"""Cooperative zero-forcing scheme generators.

A scheme pairs a message assignment with an activation plan: which
messages get one degree of freedom, which transmitter delivers each,
at which receivers each message's interference must be nulled, and
which transmitters stay silent.  Generators cover linear chains under
an integer backhaul budget, locally connected linear networks, convex
combinations of block schemes, the best known block mixtures for
L = 2..6, square-grid networks, and hexagonal-sectored networks (both
the non-cooperative coset plan and the cooperative plan obtained by
carving the lattice into non-interfering chains).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
import math

from .assignment import MessageAssignment
from .errors import DecompositionFailureError, InvalidParameterError
from .topology import HexLattice, NetworkTopology, topology_from_json


@dataclass
class ZfScheme:
    """Activation plan for one-shot zero-forcing.

    Attributes:
        K: number of users.
        active_messages: messages allocated one degree of freedom.
        serving: active message ``i`` -> transmitter delivering it.
        cancel_at: active message ``i`` -> ordered receivers where its
            interference is nulled (the order drives forward
            substitution during beam design).
        deactivated_transmitters: transmitters that never transmit.
        declared_pudof: the generator's exact per-user DoF claim.
        declared_backhaul: the generator's exact backhaul-load claim.
        name: human-readable generator tag.
        family: compatibility key for concatenating block schemes; two
            schemes may be combined only if their families match.
    """

    K: int
    active_messages: frozenset[int]
    serving: dict[int, int]
    cancel_at: dict[int, tuple[int, ...]]
    deactivated_transmitters: frozenset[int]
    declared_pudof: Fraction
    declared_backhaul: Fraction
    name: str = ""
    family: tuple = ()


@dataclass
class DofReport:
    """Exact degrees-of-freedom accounting for a scheme.

    Attributes:
        achieved_dof: number of active messages.
        per_user_dof: achieved_dof / K, exact.
        backhaul: exact backhaul load of the underlying assignment.
        scheme_name: tag of the generating scheme.
    """

    achieved_dof: int
    per_user_dof: Fraction
    backhaul: Fraction
    scheme_name: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "achieved_dof": self.achieved_dof,
                "per_user_dof": str(self.per_user_dof),
                "backhaul": str(self.backhaul),
                "scheme_name": self.scheme_name,
            }
        )


def validate_scheme(
    topology: NetworkTopology, assignment: MessageAssignment, scheme: ZfScheme
) -> list[str]:
    """Structural checks a zero-forcing plan must satisfy; returns violations.

    Checked: serving transmitters belong to the transmit set and are
    audible at their receiver; cancellation lists stay within receivers
    that hear the transmit set, never include the served receiver, and
    leave one coefficient free for delivery; every active receiver
    hearing any transmitter of ``T_i`` appears in ``C_i`` (complete
    interference coverage); deactivated transmitters carry nothing.
    """
    problems: list[str] = []
    if not (set(scheme.serving) == scheme.active_messages == set(scheme.cancel_at)):
        problems.append("serving/cancel_at keys must equal active_messages")
    for i in sorted(scheme.active_messages):
        T = assignment.transmit_sets.get(i, frozenset())
        if not T:
            problems.append(f"active message {i} has an empty transmit set")
            continue
        t = scheme.serving.get(i)
        if t not in T:
            problems.append(f"serving transmitter of message {i} is outside its transmit set")
        if t is not None and t not in topology.hears[i]:
            problems.append(f"serving transmitter of message {i} is not heard at receiver {i}")
        C = scheme.cancel_at.get(i, ())
        if len(set(C)) != len(C):
            problems.append(f"cancellation list of message {i} has duplicates")
        if i in C:
            problems.append(f"message {i} lists its own receiver for cancellation")
        audible_at = set()
        for tx in T:
            audible_at |= topology.hearers(tx)
        if not set(C) <= audible_at:
            problems.append(f"cancellation list of message {i} includes receivers that hear none of its transmitters")
        if len(C) > len(T) - 1:
            problems.append(f"message {i} has too many cancellation constraints for |T|={len(T)}")
        for k in sorted(scheme.active_messages):
            if k != i and topology.hears[k] & T and k not in C:
                problems.append(f"active receiver {k} hears message {i} but is not in its cancellation list")
    used = set()
    for i in scheme.active_messages:
        used |= assignment.transmit_sets.get(i, frozenset())
    overlap = scheme.deactivated_transmitters & used
    if overlap:
        problems.append(f"deactivated transmitters {sorted(overlap)} appear in active transmit sets")
    return problems


def wyner_backhaul_scheme(K: int, B: int) -> tuple[MessageAssignment, ZfScheme]:
    """Chain-network scheme with integer backhaul budget ``B``.

    The network splits into independent blocks of ``4B`` users.  In each
    block the first ``2B`` messages are sent by ascending transmitter
    spans ``{i,...,2B}``, message ``2B+1`` is dropped, the last ``2B-1``
    messages are sent by descending spans ``{2B+1,...,i-1}``, and the
    block's last transmitter stays silent, isolating the next block.
    Per-user DoF is ``(4B-1)/4B`` with backhaul exactly ``B``.

    Raises:
        InvalidParameterError: ``B < 1`` or ``4B`` does not divide ``K``.
    """
    if B < 1:
        raise InvalidParameterError("B must be a positive integer")
    F = 4 * B
    if K < 1 or K % F != 0:
        raise InvalidParameterError(f"K must be a positive multiple of {F}")
    tsets: dict[int, frozenset[int]] = {}
    serving: dict[int, int] = {}
    cancel: dict[int, tuple[int, ...]] = {}
    for o in range(0, K, F):
        for i in range(1, 2 * B + 1):
            m = o + i
            tsets[m] = frozenset(range(m, o + 2 * B + 1))
            serving[m] = m
            cancel[m] = tuple(range(m + 1, o + 2 * B + 1))
        tsets[o + 2 * B + 1] = frozenset()
        for i in range(2 * B + 2, F + 1):
            m = o + i
            tsets[m] = frozenset(range(o + 2 * B + 1, m))
            serving[m] = m - 1
            cancel[m] = tuple(range(m - 1, o + 2 * B + 1, -1))
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    active = frozenset(serving)
    used = frozenset().union(*(tsets[i] for i in active))
    scheme = ZfScheme(
        K=K,
        active_messages=active,
        serving=serving,
        cancel_at=cancel,
        deactivated_transmitters=frozenset(range(1, K + 1)) - used,
        declared_pudof=Fraction(4 * B - 1, 4 * B),
        declared_backhaul=Fraction(B),
        name=f"wyner_backhaul_B{B}",
        family=("linear", 1),
    )
    return assignment, scheme


def locally_connected_scheme(K: int, L: int, M: int) -> tuple[MessageAssignment, ZfScheme]:
    """Block scheme for locally connected chains with cooperation order ``M``.

    Blocks have ``2M+L`` users.  Within a block (local indices), the
    first ``M`` messages use transmitter spans ``{i+s,...,M+s}`` with
    ``s = floor(L/2)``, the middle ``L`` messages are dropped, and the
    last ``M`` messages use spans ``{M+1+s,...,i-L+s}``; the ``s``
    leading and ``L-s`` trailing transmitters of the block stay silent,
    which isolates consecutive blocks.  Per-user DoF is ``2M/(2M+L)``
    with backhaul exactly ``M(M+1)/(2M+L)``.

    Raises:
        InvalidParameterError: nonpositive parameters or ``(2M+L)`` not
            dividing ``K``.
    """
    if L < 1:
        raise InvalidParameterError("L must be a positive integer")
    if M < 1:
        raise InvalidParameterError("M must be a positive integer")
    F = 2 * M + L
    if K < 1 or K % F != 0:
        raise InvalidParameterError(f"K must be a positive multiple of {F}")
    s = L // 2
    tsets: dict[int, frozenset[int]] = {}
    serving: dict[int, int] = {}
    cancel: dict[int, tuple[int, ...]] = {}
    for o in range(0, K, F):
        for i in range(1, M + 1):
            m = o + i
            tsets[m] = frozenset(range(o + i + s, o + M + s + 1))
            serving[m] = o + i + s
            cancel[m] = tuple(range(m + 1, o + M + 1))
        for i in range(M + 1, M + L + 1):
            tsets[o + i] = frozenset()
        for i in range(L + M + 1, F + 1):
            m = o + i
            tsets[m] = frozenset(range(o + M + 1 + s, o + i - L + s + 1))
            serving[m] = o + i - L + s
            cancel[m] = tuple(range(m - 1, o + L + M, -1))
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    active = frozenset(serving)
    used = frozenset().union(*(tsets[i] for i in active))
    scheme = ZfScheme(
        K=K,
        active_messages=active,
        serving=serving,
        cancel_at=cancel,
        deactivated_transmitters=frozenset(range(1, K + 1)) - used,
        declared_pudof=Fraction(2 * M, F),
        declared_backhaul=Fraction(M * (M + 1), F),
        name=f"locally_connected_L{L}_M{M}",
        family=("linear", L),
    )
    return assignment, scheme


def convex_combination(parts) -> tuple[MessageAssignment, ZfScheme]:
    """Concatenate block schemes end to end.

    Args:
        parts: list of ``(generator, count)`` where ``generator`` is a
            zero-argument callable returning one block's
            ``(assignment, scheme)`` and ``count`` is how many copies of
            that block to lay down.  All blocks must share the same
            scheme family.

    Returns:
        The combined assignment and scheme on ``K = sum(count * block
        size)`` users; per-user DoF and backhaul are the exact
        block-length-weighted averages.

    Raises:
        InvalidParameterError: empty parts, negative counts, or
            mismatched scheme families.
    """
    if not parts:
        raise InvalidParameterError("parts must be non-empty")
    blocks = []
    for gen, count in parts:
        if count < 0:
            raise InvalidParameterError("block counts must be nonnegative")
        if count == 0:
            continue
        asg, sch = gen()
        blocks.append((asg, sch, count))
    if not blocks:
        raise InvalidParameterError("at least one positive block count is required")
    family = blocks[0][1].family
    for _, sch, _ in blocks:
        if sch.family != family:
            raise InvalidParameterError(
                f"cannot combine schemes of families {family} and {sch.family}"
            )
    tsets: dict[int, frozenset[int]] = {}
    serving: dict[int, int] = {}
    cancel: dict[int, tuple[int, ...]] = {}
    active: set[int] = set()
    deact: set[int] = set()
    o = 0
    for asg, sch, count in blocks:
        for _ in range(count):
            for i in range(1, asg.K + 1):
                tsets[o + i] = frozenset(t + o for t in asg.transmit_sets[i])
            for i in sch.active_messages:
                active.add(o + i)
                serving[o + i] = sch.serving[i] + o
                cancel[o + i] = tuple(c + o for c in sch.cancel_at[i])
            deact.update(d + o for d in sch.deactivated_transmitters)
            o += asg.K
    K = o
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    name = "+".join(f"{count}x{sch.name}" for _, sch, count in blocks)
    scheme = ZfScheme(
        K=K,
        active_messages=frozenset(active),
        serving=serving,
        cancel_at=cancel,
        deactivated_transmitters=frozenset(deact),
        declared_pudof=Fraction(len(active), K),
        declared_backhaul=Fraction(sum(len(T) for T in tsets.values()), K),
        name=name,
        family=family,
    )
    return assignment, scheme


def table1_row(L: int) -> dict:
    """Best known block mixture for a locally connected chain, ``L in 2..6``.

    Mixes blocks of ``4+L`` users (cooperation order 2, block load 6)
    and ``6+L`` users (order 3, block load 12) so the overall backhaul
    is exactly 1; the block counts solve ``n2*(L-2) = n3*(6-L)`` in
    smallest whole numbers.

    Returns:
        dict with keys L, blocks_m2, blocks_m3, block_m2, block_m3,
        K_min, users_m2, users_m3, ratio (users ratio in lowest terms),
        pudof, backhaul.
    """
    if L not in (2, 3, 4, 5, 6):
        raise InvalidParameterError("L must be one of 2..6")
    if L == 2:
        n2, n3 = 1, 0
    elif L == 6:
        n2, n3 = 0, 1
    else:
        g = math.gcd(L - 2, 6 - L)
        n2, n3 = (6 - L) // g, (L - 2) // g
    F2, F3 = 4 + L, 6 + L
    users_m2, users_m3 = n2 * F2, n3 * F3
    K_min = users_m2 + users_m3
    g = math.gcd(users_m2, users_m3)
    ratio = (users_m2 // g, users_m3 // g)
    return {
        "L": L,
        "blocks_m2": n2,
        "blocks_m3": n3,
        "block_m2": F2,
        "block_m3": F3,
        "K_min": K_min,
        "users_m2": users_m2,
        "users_m3": users_m3,
        "ratio": ratio,
        "pudof": Fraction(4 * n2 + 6 * n3, K_min),
        "backhaul": Fraction(6 * n2 + 12 * n3, K_min),
    }


def table1_scheme(K: int, L: int) -> tuple[MessageAssignment, ZfScheme]:
    """Instantiate the best known unit-backhaul mixture at size ``K``.

    Raises:
        InvalidParameterError: ``L`` outside 2..6 or ``K`` not a
            multiple of the row's minimal tiling length.
    """
    row = table1_row(L)
    if K < 1 or K % row["K_min"] != 0:
        raise InvalidParameterError(
            f"K must be a positive multiple of {row['K_min']} for L={L}"
        )
    m = K // row["K_min"]
    parts = [
        (lambda F=row["block_m2"], l=L: locally_connected_scheme(F, l, 2), m * row["blocks_m2"]),
        (lambda F=row["block_m3"], l=L: locally_connected_scheme(F, l, 3), m * row["blocks_m3"]),
    ]
    assignment, scheme = convex_combination(parts)
    scheme.name = f"table1_L{L}"
    return assignment, scheme


def two_dim_row_scheme(N: int) -> tuple[MessageAssignment, ZfScheme]:
    """Chain scheme run along one active row of the square grid.

    Equal counts of 5-user (order 2) and 7-user (order 3) chain blocks
    give row per-user DoF exactly 5/6 at row backhaul exactly 3/2.

    Raises:
        InvalidParameterError: ``N`` not a positive multiple of 12.
    """
    if N < 12 or N % 12 != 0:
        raise InvalidParameterError("row length N must be a positive multiple of 12")
    a = N // 12
    parts = [
        (lambda: locally_connected_scheme(5, 1, 2), a),
        (lambda: locally_connected_scheme(7, 1, 3), a),
    ]
    assignment, scheme = convex_combination(parts)
    scheme.name = f"two_dim_row_N{N}"
    return assignment, scheme


def two_dim_scheme(K: int) -> tuple[MessageAssignment, ZfScheme]:
    """Square-grid scheme: silence every third transmitter row.

    With transmitter rows ``0 mod 3`` silent, receiver rows ``1 mod 3``
    hear only their own transmitter row and receiver rows ``0 mod 3``
    hear only the row above, so each served row reduces to an isolated
    chain; receiver rows ``2 mod 3`` are dropped.  Running the 5/6-DoF
    chain mixture on each of the ``2N/3`` served rows yields overall
    per-user DoF exactly 5/9 at backhaul exactly 1.

    Raises:
        InvalidParameterError: ``K`` not a perfect square or ``sqrt(K)``
            not a multiple of 12.
    """
    if K < 1:
        raise InvalidParameterError("K must be >= 1")
    N = math.isqrt(K)
    if N * N != K:
        raise InvalidParameterError("K must be a perfect square")
    if N % 12 != 0:
        raise InvalidParameterError("sqrt(K) must be a multiple of 12")
    row_asg, row_sch = two_dim_row_scheme(N)
    tsets: dict[int, frozenset[int]] = {i: frozenset() for i in range(1, K + 1)}
    serving: dict[int, int] = {}
    cancel: dict[int, tuple[int, ...]] = {}
    active: set[int] = set()
    for rho in range(1, N + 1):
        if rho % 3 == 1:
            t_row = rho
        elif rho % 3 == 0:
            t_row = rho - 1
        else:
            continue
        rx_off = (rho - 1) * N
        tx_off = (t_row - 1) * N
        for p in range(1, N + 1):
            tsets[rx_off + p] = frozenset(tx_off + q for q in row_asg.transmit_sets[p])
        for p in row_sch.active_messages:
            m = rx_off + p
            active.add(m)
            serving[m] = tx_off + row_sch.serving[p]
            cancel[m] = tuple(rx_off + c for c in row_sch.cancel_at[p])
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    used = set()
    for i in active:
        used |= tsets[i]
    scheme = ZfScheme(
        K=K,
        active_messages=frozenset(active),
        serving=serving,
        cancel_at=cancel,
        deactivated_transmitters=frozenset(range(1, K + 1)) - used,
        declared_pudof=Fraction(len(active), K),
        declared_backhaul=Fraction(sum(len(T) for T in tsets.values()), K),
        name=f"two_dim_N{N}",
        family=("two_dim", N),
    )
    return assignment, scheme


def hexagonal_coset_scheme(lattice: HexLattice) -> tuple[MessageAssignment, ZfScheme]:
    """Hexagonal plan with no cooperation: only circle-coset users talk.

    No two circle nodes are adjacent, so every active receiver hears its
    own transmitter and nothing else — no cancellation is needed.
    Per-user DoF and backhaul both equal ``|circles| / K`` (one third of
    the users on a full grid with side divisible by 3).
    """
    K = len(lattice.coords)
    circles = sorted(i for i in lattice.coords if lattice.cosets[i] == "circle")
    tsets = {i: frozenset([i]) if i in set(circles) else frozenset() for i in lattice.coords}
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    share = Fraction(len(circles), K)
    scheme = ZfScheme(
        K=K,
        active_messages=frozenset(circles),
        serving={i: i for i in circles},
        cancel_at={i: () for i in circles},
        deactivated_transmitters=frozenset(lattice.coords) - frozenset(circles),
        declared_pudof=share,
        declared_backhaul=share,
        name="hexagonal_coset",
        family=("hexagonal", lattice.n or 0),
    )
    return assignment, scheme


def _chains_of(lattice: HexLattice, removed: frozenset[int]) -> list[list[int]] | None:
    """Order the kept nodes into simple paths, or None if they are not paths."""
    kept = set(lattice.coords) - set(removed)
    adj = {u: lattice.neighbors[u] & kept for u in kept}
    if any(len(a) > 2 for a in adj.values()):
        return None
    chains: list[list[int]] = []
    seen: set[int] = set()
    for start in sorted(kept):
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for v in adj[u]:
                if v not in comp:
                    comp.add(v)
                    stack.append(v)
        seen |= comp
        if len(comp) == 1:
            chains.append([start])
            continue
        ends = sorted(v for v in comp if len(adj[v]) <= 1)
        if len(ends) != 2:
            return None
        chain = [ends[0]]
        prev: int | None = None
        cur = ends[0]
        while True:
            step = [v for v in adj[cur] if v != prev]
            if not step:
                break
            prev, cur = cur, step[0]
            chain.append(cur)
        if len(chain) != len(comp):
            return None
        chains.append(chain)
    return chains


def _search_removal_all_chains_divisible(
    lattice: HexLattice, target_removed: int, divisor: int, node_budget: int
) -> frozenset[int] | None:
    """Depth-first search for a removal set leaving paths of divisible length.

    Nodes are decided in index order (keep first, then remove).  Kept
    nodes are tracked with union-find; branches creating a degree-3 node
    or a cycle are cut, and a component that can no longer grow must
    already have length divisible by ``divisor``.  Returns None when the
    node budget runs out or no such removal exists.
    """
    n = lattice.n
    if n is None:
        return None
    K = len(lattice.coords)
    nbrs = {i: sorted(lattice.neighbors[i]) for i in lattice.coords}
    lower = {i: [j for j in nbrs[i] if j < i] for i in lattice.coords}
    state = [0] * (K + 1)  # 0 undecided, 1 kept, 2 removed
    parent = list(range(K + 1))
    size = [1] * (K + 1)
    maxi = list(range(K + 1))
    visited = 0
    result: list[frozenset[int]] = []

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    def closed_component_ok(i: int) -> bool:
        # Deciding node i settles the full neighborhood of node i-n-1
        # (the largest-index neighbor on the grid is i-n-1+n+1 = i).
        u = i - n - 1
        if u >= 1 and state[u] == 1:
            r = find(u)
            if maxi[r] <= u and size[r] % divisor != 0:
                return False
        return True

    def dfs(i: int, removed: int) -> bool:
        nonlocal visited
        visited += 1
        if visited > node_budget:
            return False
        if removed > target_removed or (i - 1 - removed) > K - target_removed:
            return False
        if i > K:
            if removed != target_removed:
                return False
            comp_sizes: dict[int, int] = {}
            for j in range(1, K + 1):
                if state[j] == 1:
                    r = find(j)
                    comp_sizes[r] = comp_sizes.get(r, 0) + 1
            if all(s % divisor == 0 for s in comp_sizes.values()):
                result.append(frozenset(j for j in range(1, K + 1) if state[j] == 2))
                return True
            return False
        kept_nbrs = [j for j in lower[i] if state[j] == 1]
        ok = len(kept_nbrs) <= 2
        if ok:
            for j in kept_nbrs:
                if sum(1 for x in nbrs[j] if x != i and state[x] == 1) >= 2:
                    ok = False
                    break
        if ok:
            roots = set()
            for j in kept_nbrs:
                r = find(j)
                if r in roots:
                    ok = False
                    break
                roots.add(r)
        if ok:
            state[i] = 1
            undo = []
            for j in kept_nbrs:
                ri, rj = find(i), find(j)
                if ri != rj:
                    if size[ri] < size[rj]:
                        ri, rj = rj, ri
                    undo.append((rj, parent[rj], ri, size[ri], maxi[ri]))
                    parent[rj] = ri
                    size[ri] += size[rj]
                    maxi[ri] = max(maxi[ri], maxi[rj])
            if closed_component_ok(i) and dfs(i + 1, removed):
                return True
            state[i] = 0
            for rj, pj, ri, si, mi in reversed(undo):
                parent[rj] = pj
                size[ri] = si
                maxi[ri] = mi
        if removed < target_removed:
            state[i] = 2
            if closed_component_ok(i) and dfs(i + 1, removed + 1):
                return True
            state[i] = 0
        return False

    dfs(1, 0)
    return result[0] if result else None


def decompose_hexagonal_to_linear(
    lattice: HexLattice, node_budget: int = 500_000
) -> tuple[frozenset[int], list[list[int]]]:
    """Silence a third of a hexagonal grid so the rest splits into chains.

    After removal, each remaining node's neighbors within its chain are
    exactly the adjacent chain positions, and no edge joins two
    different chains — every chain behaves as an isolated locally
    connected linear network with connectivity 2.  A budgeted exact
    search first looks for a removal whose chain lengths are all
    divisible by 8 (what the cooperative scheme needs); if none is
    found, removing one full coset (which always leaves paths on the
    grids this supports) is used instead.

    Args:
        lattice: grid-built lattice with side ``n`` divisible by 3.
        node_budget: search-node cap for the divisible-chains search.

    Returns:
        ``(deactivated, chains)`` with ``|deactivated| = K/3`` and
        chains listed in path order.

    Raises:
        InvalidParameterError: lattice not grid-built or ``3 ∤ n``.
        DecompositionFailureError: no candidate passed validation.
    """
    n = lattice.n
    if n is None or n % 3 != 0:
        raise InvalidParameterError("lattice must be grid-built with side n divisible by 3")
    K = len(lattice.coords)
    target = K // 3
    removed: frozenset[int] | None = None
    if (K - target) % 8 == 0:
        removed = _search_removal_all_chains_divisible(lattice, target, 8, node_budget)
    if removed is not None:
        chains = _chains_of(lattice, removed)
        if chains is not None:
            return removed, chains
    for coset in ("square", "circle", "diamond"):
        cand = frozenset(i for i in lattice.coords if lattice.cosets[i] == coset)
        if len(cand) != target:
            continue
        chains = _chains_of(lattice, cand)
        if chains is not None:
            return cand, chains
    raise DecompositionFailureError(
        f"no chain decomposition found for n={n} (searched + coset removals)"
    )


def validate_linear_decomposition(
    lattice: HexLattice, deactivated: frozenset[int], chains: list[list[int]]
) -> list[str]:
    """Structural checks for a chain decomposition; returns violations."""
    problems: list[str] = []
    K = len(lattice.coords)
    if K % 3 == 0 and len(deactivated) != K // 3:
        problems.append(f"expected {K // 3} deactivated nodes, got {len(deactivated)}")
    members: list[int] = [u for chain in chains for u in chain]
    if len(members) != len(set(members)):
        problems.append("chains overlap")
    if set(members) | set(deactivated) != set(lattice.coords) or set(members) & set(deactivated):
        problems.append("chains plus deactivated nodes must partition the lattice")
    kept = set(members)
    pos: dict[int, tuple[int, int]] = {}
    for ci, chain in enumerate(chains):
        for p, u in enumerate(chain):
            pos[u] = (ci, p)
    for u in members:
        ci, p = pos[u]
        expected = {chains[ci][q] for q in (p - 1, p + 1) if 0 <= q < len(chains[ci])}
        actual = lattice.neighbors[u] & kept
        if actual != expected:
            problems.append(f"node {u} neighbors {sorted(actual)} instead of {sorted(expected)}")
    return problems


def hexagonal_cooperative_scheme(lattice: HexLattice) -> tuple[MessageAssignment, ZfScheme]:
    """Cooperative hexagonal plan: chains of 8-user blocks at order 3.

    The lattice is decomposed into isolated chains (one third of the
    nodes silenced); each chain runs the connectivity-2, order-3 block
    scheme on blocks of eight, delivering 3/4 of the chain's messages
    at chain backhaul 3/2 — overall per-user DoF exactly 1/2 at
    backhaul exactly 1.

    Raises:
        InvalidParameterError: a chain length is not divisible by 8
            (pick the grid side accordingly), or the lattice is not a
            grid with side divisible by 3.
    """
    removed, chains = decompose_hexagonal_to_linear(lattice)
    for chain in chains:
        if len(chain) % 8 != 0:
            raise InvalidParameterError(
                f"chain of length {len(chain)} is not divisible by 8; "
                "the cooperative block scheme needs full blocks of 8"
            )
    K = len(lattice.coords)
    tsets: dict[int, frozenset[int]] = {i: frozenset() for i in lattice.coords}
    serving: dict[int, int] = {}
    cancel: dict[int, tuple[int, ...]] = {}
    active: set[int] = set()
    for chain in chains:
        casg, csch = locally_connected_scheme(len(chain), 2, 3)
        for p in range(1, len(chain) + 1):
            tsets[chain[p - 1]] = frozenset(chain[q - 1] for q in casg.transmit_sets[p])
        for p in csch.active_messages:
            m = chain[p - 1]
            active.add(m)
            serving[m] = chain[csch.serving[p] - 1]
            cancel[m] = tuple(chain[c - 1] for c in csch.cancel_at[p])
    assignment = MessageAssignment(K=K, transmit_sets=tsets)
    used = set()
    for i in active:
        used |= tsets[i]
    scheme = ZfScheme(
        K=K,
        active_messages=frozenset(active),
        serving=serving,
        cancel_at=cancel,
        deactivated_transmitters=frozenset(lattice.coords) - used,
        declared_pudof=Fraction(len(active), K),
        declared_backhaul=Fraction(sum(len(T) for T in tsets.values()), K),
        name="hexagonal_cooperative",
        family=("hexagonal", lattice.n or 0),
    )
    return assignment, scheme


def scheme_to_json(
    scheme: ZfScheme,
    topology: NetworkTopology | None = None,
    assignment: MessageAssignment | None = None,
) -> str:
    """Serialize a scheme, optionally embedding topology and transmit sets.

    The embedded copies make the output self-contained for piping into
    verification or certification commands.
    """
    obj: dict = {
        "K": scheme.K,
        "active": sorted(scheme.active_messages),
        "serving": {str(i): scheme.serving[i] for i in sorted(scheme.serving)},
        "cancel_at": {str(i): list(scheme.cancel_at[i]) for i in sorted(scheme.cancel_at)},
        "deactivated": sorted(scheme.deactivated_transmitters),
        "declared": {
            "pudof": str(scheme.declared_pudof),
            "backhaul": str(scheme.declared_backhaul),
        },
        "name": scheme.name,
        "family": list(scheme.family),
    }
    if topology is not None:
        obj["topology"] = json.loads(topology.to_json())
    if assignment is not None:
        obj["transmit_sets"] = [
            sorted(assignment.transmit_sets[i]) for i in range(1, assignment.K + 1)
        ]
    return json.dumps(obj)


def scheme_from_json(
    text: str,
) -> tuple[ZfScheme, NetworkTopology | None, MessageAssignment | None]:
    """Inverse of :func:`scheme_to_json`; embedded sections are optional."""
    obj = json.loads(text)
    declared = obj.get("declared", {})
    scheme = ZfScheme(
        K=int(obj["K"]),
        active_messages=frozenset(obj["active"]),
        serving={int(i): t for i, t in obj["serving"].items()},
        cancel_at={int(i): tuple(c) for i, c in obj["cancel_at"].items()},
        deactivated_transmitters=frozenset(obj["deactivated"]),
        declared_pudof=Fraction(declared.get("pudof", "0")),
        declared_backhaul=Fraction(declared.get("backhaul", "0")),
        name=obj.get("name", ""),
        family=tuple(obj.get("family", ())),
    )
    topology = None
    if "topology" in obj:
        topology = topology_from_json(json.dumps(obj["topology"]))
    assignment = None
    if "transmit_sets" in obj:
        assignment = MessageAssignment(
            K=scheme.K,
            transmit_sets={i + 1: frozenset(row) for i, row in enumerate(obj["transmit_sets"])},
        )
    return scheme, topology, assignment
