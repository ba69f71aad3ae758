"""Certified upper bounds: pairwise facts, group certificates, budget scans."""

from __future__ import annotations

import random
from fractions import Fraction

import pytest

from coopzf import (
    AvoidanceSchedule,
    InvalidParameterError,
    MessageAssignment,
    PreconditionViolationError,
    UnsupportedError,
    algorithm1_certify,
    appendix_receiver_set,
    backhaul_converse,
    build_hexagonal,
    build_locally_connected,
    build_two_dim,
    build_wyner,
    hexagonal_coset_scheme,
    lemma_pairwise_bounds,
    max_activation_for_assignment,
    max_avoidance_m1,
    metrics,
    reconstructibility_check,
    toy_instance,
    triangle_state_bound,
    validate_certificate,
    wyner_backhaul_scheme,
)


# ---------------------------------------------------------------------------
# pairwise facts
# ---------------------------------------------------------------------------


def test_pairwise_facts_on_worked_example():
    topology, _, assignment, L = toy_instance()
    pairs, zeros = lemma_pairwise_bounds(topology, assignment)
    assert zeros == frozenset({L["a1"], L["b2"], L["b3"], L["c3"]})
    assert (L["c1"], L["c2"]) in pairs
    assert {(L["a2"], L["a1"]), (L["a2"], L["a3"])} <= pairs
    # every pair names the assigned message first and a hearer of its transmitter
    for i, k in pairs:
        (j,) = assignment.transmit_sets[i]
        assert k in topology.hears[k] and j in topology.hears[k]


def test_pairwise_facts_reject_cooperation():
    topo = build_wyner(2)
    a = MessageAssignment(K=2, transmit_sets={1: frozenset({1, 2}), 2: frozenset()})
    with pytest.raises(PreconditionViolationError):
        lemma_pairwise_bounds(topo, a)


def test_pairwise_facts_isolated_self_server():
    topo = build_locally_connected(1, 0)
    a = MessageAssignment(K=1, transmit_sets={1: frozenset({1})})
    pairs, zeros = lemma_pairwise_bounds(topo, a)
    assert pairs == frozenset() and zeros == frozenset()


# ---------------------------------------------------------------------------
# group certificates for single-transmitter assignments
# ---------------------------------------------------------------------------


def test_certify_worked_example_exactly():
    _, lattice, assignment, L = toy_instance()
    cert = algorithm1_certify(lattice, assignment)
    got = [(g.nodes, g.bound, tuple(g.constraints), g.note) for g in cert.groups]
    a1, a2, a3 = L["a1"], L["a2"], L["a3"]
    b1, b2, b3 = L["b1"], L["b2"], L["b3"]
    c1, c2, c3 = L["c1"], L["c2"], L["c3"]
    assert got == [
        ((c1, c2), Fraction(1), (("pair", c1, c2),), "self-serving pair"),
        (
            (a3, b2),
            Fraction(1),
            (("pair", a3, b2), ("zero", b2)),
            "linking-triangle group",
        ),
        ((a1, a2), Fraction(1), (("zero", a1), ("pair", a2, a1)), "residual cell pair"),
        ((b1, b3), Fraction(1), (("pair", b1, b3), ("zero", b3)), "residual cell pair"),
        ((c3,), Fraction(0), (("zero", c3),), "residual unassigned"),
    ]
    assert cert.uncovered == frozenset()
    assert cert.bound_total == 4
    assert cert.certified_bound == 4
    assert validate_certificate(lattice, assignment, cert) == []


def test_certify_worked_example_shuffle_invariant():
    _, lattice, assignment, _ = toy_instance()
    reference = algorithm1_certify(lattice, assignment)
    ref_shape = {(frozenset(g.nodes), g.bound) for g in reference.groups}
    for seed in range(12):
        cert = algorithm1_certify(lattice, assignment, shuffle_seed=seed)
        assert cert.certified_bound == 4
        assert {(frozenset(g.nodes), g.bound) for g in cert.groups} == ref_shape
        assert validate_certificate(lattice, assignment, cert) == []


def test_certify_rejects_cooperation():
    _, lattice, _, _ = toy_instance()
    sets = {i: frozenset() for i in range(1, 10)}
    sets[1] = frozenset({1, 2})
    with pytest.raises(PreconditionViolationError):
        algorithm1_certify(lattice, MessageAssignment(K=9, transmit_sets=sets))


def test_certify_all_unassigned_groups_are_zero():
    _, lattice, _, _ = toy_instance()
    empty = MessageAssignment(K=9, transmit_sets={i: frozenset() for i in range(1, 10)})
    cert = algorithm1_certify(lattice, empty)
    for g in cert.groups:
        assert g.bound == 0
    assert cert.bound_total == len(cert.uncovered)
    assert validate_certificate(lattice, empty, cert) == []


def _random_single_tx_assignment(lattice, rng):
    sets = {}
    for i in sorted(lattice.coords):
        roll = rng.random()
        if roll < 0.35:
            sets[i] = frozenset()
        elif roll < 0.6:
            sets[i] = frozenset({i})
        else:
            sets[i] = frozenset({rng.choice(sorted(lattice.neighbors[i] | {i}))})
    return MessageAssignment(K=len(lattice.coords), transmit_sets=sets)


def test_certify_random_assignments_validate_and_stay_half():
    _, lattice = build_hexagonal(6)
    rng = random.Random(20260818)
    for _ in range(60):
        assignment = _random_single_tx_assignment(lattice, rng)
        cert = algorithm1_certify(lattice, assignment)
        assert validate_certificate(lattice, assignment, cert) == []
        covered = 0
        grouped_bound = Fraction(0)
        for g in cert.groups:
            assert g.bound <= Fraction(len(g.nodes), 2)
            covered += len(g.nodes)
            grouped_bound += g.bound
        assert grouped_bound <= Fraction(covered, 2)
        assert cert.certified_bound == int(grouped_bound + len(cert.uncovered))


def test_validate_certificate_flags_tampering():
    _, lattice, assignment, _ = toy_instance()
    cert = algorithm1_certify(lattice, assignment)
    g0 = cert.groups[0]
    fake = type(g0)(nodes=g0.nodes, bound=g0.bound + 1, constraints=g0.constraints, note=g0.note)
    tampered = type(cert)(
        groups=(fake,) + cert.groups[1:],
        uncovered=cert.uncovered,
        certified_bound=cert.certified_bound,
        bound_total=cert.bound_total,
    )
    problems = validate_certificate(lattice, assignment, tampered)
    assert any("solves to" in p for p in problems)
    assert any("bound_total" in p for p in problems)


# ---------------------------------------------------------------------------
# schedule-driven accounting on the lattice
# ---------------------------------------------------------------------------


def _schedule_assignment(lattice, schedule):
    sets = {i: frozenset() for i in sorted(lattice.coords)}
    for r, t in schedule.pairs:
        sets[r] = frozenset({t})
    return MessageAssignment(K=len(lattice.coords), transmit_sets=sets)


def test_state_bound_on_coset_schedule():
    _, lattice = build_hexagonal(6)
    _, scheme = hexagonal_coset_scheme(lattice)
    schedule = AvoidanceSchedule(
        pairs=frozenset((i, i) for i in scheme.active_messages),
        value=len(scheme.active_messages),
    )
    cert = triangle_state_bound(lattice, schedule)
    assert len(cert.groups) == 9
    for g in cert.groups:
        assert g.note == "cell state 1 with 0 linked services"
        assert g.bound == 1
    assert len(cert.uncovered) == 9
    assert cert.certified_bound == 18
    assert cert.certified_bound >= schedule.value
    assert validate_certificate(lattice, _schedule_assignment(lattice, schedule), cert) == []


def test_state_bound_on_empty_schedule():
    _, lattice = build_hexagonal(6)
    cert = triangle_state_bound(lattice, AvoidanceSchedule(pairs=frozenset(), value=0))
    assert all(g.bound == 0 for g in cert.groups)
    assert len(cert.groups) == 9 and len(cert.uncovered) == 9
    assert cert.certified_bound == 9


def test_state_bound_covers_optimal_schedule():
    topo, lattice = build_hexagonal(6)
    value, witness = max_avoidance_m1(topo)
    cert = triangle_state_bound(lattice, witness)
    assert cert.certified_bound >= value == 15
    for g in cert.groups:
        assert g.bound <= Fraction(3, 7) * len(g.nodes), (g.nodes, g.bound)
    assert validate_certificate(lattice, _schedule_assignment(lattice, witness), cert) == []


def test_state_bound_rejects_invalid_schedule():
    _, lattice = build_hexagonal(3)
    bad = AvoidanceSchedule(pairs=frozenset({(1, 1), (2, 1)}), value=2)
    with pytest.raises(PreconditionViolationError):
        triangle_state_bound(lattice, bad)


# ---------------------------------------------------------------------------
# chain networks under a backhaul budget
# ---------------------------------------------------------------------------


def test_budget_scan_on_block_scheme():
    a, s = wyner_backhaul_scheme(8, 1)
    res = backhaul_converse(a, 1)
    assert res.M == 0
    assert res.S == (3, 7)
    assert res.A_bar == (3, 7)
    assert res.bound == 6 == res.K - res.A_bar_size
    assert res.scanned == {0: 6, 1: 6}
    assert res.bound - len(s.active_messages) < 2 * metrics(a).M + 1


def test_budget_scan_is_tight_at_forty():
    a, _ = wyner_backhaul_scheme(40, 1)
    res = backhaul_converse(a, 1)
    assert res.bound == 30
    assert res.slack == 0


def test_budget_scan_higher_budget():
    a, _ = wyner_backhaul_scheme(16, 2)
    res = backhaul_converse(a, 2)
    assert res.bound == 14
    assert res.bound - 14 < 2 * metrics(a).M + 1


def test_budget_scan_self_service_walk_soundness():
    # K = 7: all three spaced candidates fit, matching the plain count
    a7 = MessageAssignment(K=7, transmit_sets={i: frozenset({i}) for i in range(1, 8)})
    res7 = backhaul_converse(a7, 1)
    assert res7.bound == 5 and res7.M == 1 and res7.A_bar == (2, 5)
    # K = 8: the last candidate's forward window leaves the chain and is
    # dropped, keeping every certified deactivation reconstructible
    a8 = MessageAssignment(K=8, transmit_sets={i: frozenset({i}) for i in range(1, 9)})
    res8 = backhaul_converse(a8, 1)
    assert res8.bound == 6 and res8.A_bar == (2, 5)
    A, reduced = appendix_receiver_set(a8, res8.M)
    assert reconstructibility_check(build_wyner(8), reduced, A)


def test_budget_scan_parameter_errors():
    a, _ = wyner_backhaul_scheme(8, 1)
    with pytest.raises(UnsupportedError):
        backhaul_converse(a, Fraction(3, 2))
    with pytest.raises(InvalidParameterError):
        backhaul_converse(a, 0)
    a2, _ = wyner_backhaul_scheme(8, 2)
    with pytest.raises(PreconditionViolationError):
        backhaul_converse(a2, 1)


def test_receiver_set_reconstructs_block_schemes():
    for K, B in [(8, 1), (16, 2), (40, 1)]:
        a, _ = wyner_backhaul_scheme(K, B)
        res = backhaul_converse(a, B)
        A, reduced = appendix_receiver_set(a, res.M)
        assert len(A) == res.bound
        assert reconstructibility_check(build_wyner(K), reduced, A)
    with pytest.raises(InvalidParameterError):
        appendix_receiver_set(a, -1)


def test_reconstruction_walk_extremes():
    K = 6
    topo = build_wyner(K)
    all_self = MessageAssignment(K=K, transmit_sets={i: frozenset({i}) for i in range(1, K + 1)})
    assert reconstructibility_check(topo, all_self, frozenset(range(1, K + 1)))
    assert not reconstructibility_check(topo, all_self, frozenset())


def test_reconstruction_walk_monotone_in_receivers():
    topo = build_wyner(8)
    a, _ = wyner_backhaul_scheme(8, 1)
    res = backhaul_converse(a, 1)
    A, reduced = appendix_receiver_set(a, res.M)
    assert reconstructibility_check(topo, reduced, A)
    assert reconstructibility_check(topo, reduced, A | frozenset({3}))


def test_reconstruction_walk_requires_chain():
    a = MessageAssignment(K=9, transmit_sets={i: frozenset() for i in range(1, 10)})
    with pytest.raises(PreconditionViolationError):
        reconstructibility_check(build_two_dim(9), a, frozenset())
    with pytest.raises(PreconditionViolationError):
        reconstructibility_check(build_locally_connected(9, 2), a, frozenset())
    assert reconstructibility_check(build_locally_connected(9, 1), a, frozenset())


def _random_budgeted_assignment(K, rng):
    budget = K
    sets = {}
    for i in range(1, K + 1):
        size = rng.choice([0, 0, 1, 1, 1, 2])
        size = min(size, budget)
        budget -= size
        lo, hi = max(1, i - 2), min(K, i + 1)
        sets[i] = frozenset(rng.sample(range(lo, hi + 1), min(size, hi - lo + 1)))
    return MessageAssignment(K=K, transmit_sets=sets)


def test_budget_scan_dominates_exact_activation():
    K = 12
    topo = build_wyner(K)
    rng = random.Random(7)
    for _ in range(25):
        a = _random_budgeted_assignment(K, rng)
        assert metrics(a).B <= 1
        res = backhaul_converse(a, 1)
        value, _ = max_activation_for_assignment(topo, a)
        assert res.bound >= value, (a.transmit_sets, res.bound, value)
        for M in (0, 1):
            A, reduced = appendix_receiver_set(a, M)
            assert reconstructibility_check(topo, reduced, A)
