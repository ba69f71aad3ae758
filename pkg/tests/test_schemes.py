"""Scheme generators: block constructions, mixtures, grid and lattice schemes."""

from __future__ import annotations

from fractions import Fraction

import pytest

from coopzf import (
    InvalidParameterError,
    MessageAssignment,
    build_hexagonal,
    build_locally_connected,
    build_two_dim,
    build_wyner,
    check_local_cooperation,
    convex_combination,
    decompose_hexagonal_to_linear,
    hexagonal_cooperative_scheme,
    hexagonal_coset_scheme,
    locally_connected_scheme,
    metrics,
    scheme_from_json,
    scheme_to_json,
    table1_row,
    table1_scheme,
    two_dim_row_scheme,
    two_dim_scheme,
    validate_backhaul,
    validate_linear_decomposition,
    validate_scheme,
    wyner_backhaul_scheme,
)


def _generators():
    """(topology, assignment, scheme) for one instance of every generator."""
    out = []
    for K, B in [(4, 1), (8, 1), (8, 2), (16, 2), (12, 3)]:
        a, s = wyner_backhaul_scheme(K, B)
        out.append((build_wyner(K), a, s))
    for K, L, M in [(6, 2, 2), (7, 3, 2), (5, 1, 2), (7, 1, 3), (8, 2, 3), (9, 3, 3)]:
        a, s = locally_connected_scheme(K, L, M)
        out.append((build_locally_connected(K, L), a, s))
    for L in range(2, 7):
        K = table1_row(L)["K_min"]
        a, s = table1_scheme(K, L)
        out.append((build_locally_connected(K, L), a, s))
    a, s = two_dim_scheme(144)
    out.append((build_two_dim(144), a, s))
    topo, lat = build_hexagonal(6)
    a, s = hexagonal_coset_scheme(lat)
    out.append((topo, a, s))
    a, s = hexagonal_cooperative_scheme(lat)
    out.append((topo, a, s))
    return out


def test_chain_block_four_users():
    a, s = wyner_backhaul_scheme(4, 1)
    assert a.transmit_sets == {
        1: frozenset({1, 2}),
        2: frozenset({2}),
        3: frozenset(),
        4: frozenset({3}),
    }
    assert sorted(s.active_messages) == [1, 2, 4]
    assert s.declared_pudof == Fraction(3, 4)
    assert s.deactivated_transmitters == frozenset({4})


def test_chain_block_dof_counts():
    for K, B, dof in [(8, 2, 7), (8, 1, 6), (40, 1, 30)]:
        _, s = wyner_backhaul_scheme(K, B)
        assert len(s.active_messages) == dof
        assert s.declared_pudof == Fraction(4 * B - 1, 4 * B)


def test_chain_block_divisibility_required():
    with pytest.raises(InvalidParameterError):
        wyner_backhaul_scheme(10, 1)
    with pytest.raises(InvalidParameterError):
        wyner_backhaul_scheme(8, 0)


def test_wide_chain_block_examples():
    a, s = locally_connected_scheme(6, 2, 2)
    assert s.declared_pudof == Fraction(2, 3)
    assert s.declared_backhaul == 1
    a, s = locally_connected_scheme(7, 3, 2)
    assert s.declared_pudof == Fraction(4, 7)
    assert s.declared_backhaul == Fraction(6, 7)
    assert sorted(s.active_messages) == [1, 2, 6, 7]
    a, s = locally_connected_scheme(5, 1, 2)
    assert s.declared_pudof == Fraction(4, 5)
    assert s.declared_backhaul == Fraction(6, 5)


def test_wide_chain_block_divisibility_required():
    with pytest.raises(InvalidParameterError):
        locally_connected_scheme(8, 3, 2)  # block is 7
    with pytest.raises(InvalidParameterError):
        locally_connected_scheme(6, 0, 2)


def test_generators_pass_structural_validation():
    for topo, a, s in _generators():
        assert validate_scheme(topo, a, s) == [], s.name


def test_generators_declare_exact_metrics():
    for topo, a, s in _generators():
        m = metrics(a)
        assert m.B == s.declared_backhaul, s.name
        assert Fraction(len(s.active_messages), s.K) == s.declared_pudof, s.name
        assert validate_backhaul(a, s.declared_backhaul), s.name


def test_chain_generators_respect_block_locality():
    for K, B in [(8, 1), (16, 2)]:
        a, _ = wyner_backhaul_scheme(K, B)
        assert check_local_cooperation(a, 4 * B)
    for K, L, M in [(14, 3, 2), (16, 2, 3)]:
        a, _ = locally_connected_scheme(K, L, M)
        assert check_local_cooperation(a, 2 * M + L)


def test_block_isolation_brute_force():
    """No transmitter used in one block is audible at another block's active receiver."""
    cases = [
        (build_wyner(12), *wyner_backhaul_scheme(12, 1), 4),
        (build_locally_connected(14, 3), *locally_connected_scheme(14, 3, 2), 7),
        (build_locally_connected(16, 2), *locally_connected_scheme(16, 2, 3), 8),
    ]
    for topo, a, s, block in cases:
        for i in sorted(s.active_messages):
            for t in a.transmit_sets[i]:
                for k in sorted(s.active_messages):
                    if (k - 1) // block != (i - 1) // block:
                        assert t not in topo.hears[k], (s.name, i, t, k)


def test_mixture_single_part_is_identity():
    base_a, base_s = locally_connected_scheme(7, 3, 2)
    mix_a, mix_s = convex_combination([(lambda: locally_connected_scheme(7, 3, 2), 1)])
    assert mix_a.transmit_sets == base_a.transmit_sets
    assert mix_s.active_messages == base_s.active_messages
    assert mix_s.serving == base_s.serving
    assert mix_s.cancel_at == base_s.cancel_at
    assert mix_s.declared_pudof == base_s.declared_pudof
    assert mix_s.declared_backhaul == base_s.declared_backhaul


def test_mixture_weighted_fractions():
    # seven users of order 2 to three of order 3 on the L=3 chain
    a, s = convex_combination(
        [
            (lambda: locally_connected_scheme(7, 3, 2), 3),
            (lambda: locally_connected_scheme(9, 3, 3), 1),
        ]
    )
    assert s.K == 30
    assert s.declared_pudof == Fraction(3, 5)
    assert s.declared_backhaul == 1


def test_mixture_rejects_family_mismatch():
    with pytest.raises(InvalidParameterError):
        convex_combination(
            [
                (lambda: locally_connected_scheme(7, 3, 2), 1),
                (lambda: locally_connected_scheme(8, 2, 3), 1),
            ]
        )
    with pytest.raises(InvalidParameterError):
        convex_combination([])


def test_table_rows_exact():
    want = {
        2: (Fraction(2, 3), (1, 0), 6),
        3: (Fraction(3, 5), (7, 3), 30),
        4: (Fraction(5, 9), (4, 5), 18),
        5: (Fraction(11, 21), (3, 11), 42),
        6: (Fraction(1, 2), (0, 1), 12),
    }
    for L, (pudof, ratio, kmin) in want.items():
        row = table1_row(L)
        assert row["pudof"] == pudof
        assert row["backhaul"] == 1
        assert row["ratio"] == ratio
        assert row["K_min"] == kmin
        # the block counts balance per-block backhaul surplus/deficit to exactly 1
        n2, n3 = row["blocks_m2"], row["blocks_m3"]
        assert n2 * (6 - (4 + L)) + n3 * (12 - (6 + L)) == 0
        assert n2 * (4 + L) + n3 * (6 + L) == row["K_min"]


def test_table_scheme_scales_to_multiples():
    a, s = table1_scheme(36, 4)
    assert s.declared_pudof == Fraction(5, 9)
    assert s.declared_backhaul == 1
    assert metrics(a).B == 1
    with pytest.raises(InvalidParameterError):
        table1_scheme(20, 4)
    with pytest.raises(InvalidParameterError):
        table1_row(7)


def test_grid_scheme_headline_fractions():
    a, s = two_dim_scheme(144)
    assert s.declared_pudof == Fraction(5, 9)
    assert s.declared_backhaul == 1
    with pytest.raises(InvalidParameterError):
        two_dim_scheme(145)  # not a perfect square
    with pytest.raises(InvalidParameterError):
        two_dim_scheme(81)  # side not a multiple of 12


def test_grid_row_scheme_fractions():
    a, s = two_dim_row_scheme(84)
    assert s.declared_pudof == Fraction(5, 6)
    assert s.declared_backhaul == Fraction(3, 2)
    assert len(s.active_messages) == 70
    with pytest.raises(InvalidParameterError):
        two_dim_row_scheme(10)


def test_grid_scheme_silences_every_third_transmitter_row():
    N = 12
    a, s = two_dim_scheme(N * N)
    silent_rows = {r for r in range(1, N + 1) if r % 3 == 0}
    for tx in range(1, N * N + 1):
        row = (tx - 1) // N + 1
        if row in silent_rows:
            assert tx in s.deactivated_transmitters
    used = set()
    for i in s.active_messages:
        used |= a.transmit_sets[i]
    assert all((tx - 1) // N + 1 not in silent_rows for tx in used)


def test_grid_rows_isolated():
    N = 12
    topo = build_two_dim(N * N)
    a, s = two_dim_scheme(N * N)
    active_tx = set()
    for i in s.active_messages:
        active_tx |= a.transmit_sets[i]
    for i in sorted(s.active_messages):
        serving_row = (s.serving[i] - 1) // N + 1
        for t in topo.hears[i]:
            if t in active_tx:
                assert (t - 1) // N + 1 == serving_row


def test_coset_scheme_counts():
    topo, lat = build_hexagonal(6)
    a, s = hexagonal_coset_scheme(lat)
    assert len(s.active_messages) == 12
    assert s.declared_pudof == Fraction(1, 3)
    assert s.declared_backhaul == Fraction(1, 3)
    # isolation: no active receiver hears another active transmitter
    for i in s.active_messages:
        for k in s.active_messages:
            if k != i:
                assert not (a.transmit_sets[i] & topo.hears[k]), (i, k)


def test_coset_scheme_small_lattice():
    topo, lat = build_hexagonal(2)
    a, s = hexagonal_coset_scheme(lat)
    circles = sum(1 for c in lat.cosets.values() if c == "circle")
    assert s.declared_pudof == Fraction(circles, 4)


def test_linear_decomposition_valid():
    _, lat = build_hexagonal(6)
    deact, chains = decompose_hexagonal_to_linear(lat)
    assert len(deact) == 12
    assert sum(len(c) for c in chains) == 24
    assert validate_linear_decomposition(lat, deact, chains) == []


def test_linear_decomposition_chain_adjacency():
    _, lat = build_hexagonal(6)
    deact, chains = decompose_hexagonal_to_linear(lat)
    keep = set().union(*map(set, chains))
    position = {}
    for c in chains:
        for p, node in enumerate(c):
            position[node] = (id(c), p)
    for c in chains:
        for p, node in enumerate(c):
            for nb in lat.neighbors[node]:
                if nb in keep:
                    cid, q = position[nb]
                    assert cid == id(c), "edge crosses chains"
                    assert abs(q - p) == 1, "chain adjacency must be consecutive"


def test_linear_decomposition_requires_multiple_of_three():
    _, lat = build_hexagonal(4)
    with pytest.raises(InvalidParameterError):
        decompose_hexagonal_to_linear(lat)


def test_cooperative_lattice_scheme_fractions():
    topo, lat = build_hexagonal(6)
    a, s = hexagonal_cooperative_scheme(lat)
    assert s.declared_pudof == Fraction(1, 2)
    assert s.declared_backhaul == 1
    assert metrics(a).B == 1
    assert len(s.active_messages) == 18


def test_cooperative_lattice_chain_dof_share():
    _, lat = build_hexagonal(6)
    deact, chains = decompose_hexagonal_to_linear(lat)
    for c in chains:
        assert len(c) % 8 == 0
    a, s = hexagonal_cooperative_scheme(lat)
    # six active per block of eight chain nodes
    chain_nodes = set().union(*map(set, chains))
    assert len(s.active_messages) == sum(len(c) // 8 * 6 for c in chains)
    assert s.active_messages <= chain_nodes


def test_scheme_json_round_trip():
    topo = build_locally_connected(7, 3)
    a, s = locally_connected_scheme(7, 3, 2)
    doc = scheme_to_json(s, topology=topo, assignment=a)
    s2, topo2, a2 = scheme_from_json(doc)
    assert s2.active_messages == s.active_messages
    assert s2.serving == s.serving
    assert s2.cancel_at == s.cancel_at
    assert s2.deactivated_transmitters == s.deactivated_transmitters
    assert s2.declared_pudof == s.declared_pudof
    assert topo2.hears == topo.hears
    assert a2.transmit_sets == a.transmit_sets


def test_validate_scheme_flags_gaps():
    topo = build_wyner(4)
    a, s = wyner_backhaul_scheme(4, 1)
    # drop a needed cancellation
    broken = type(s)(
        K=s.K,
        active_messages=s.active_messages,
        serving=dict(s.serving),
        cancel_at={i: () for i in s.active_messages},
        deactivated_transmitters=s.deactivated_transmitters,
        declared_pudof=s.declared_pudof,
        declared_backhaul=s.declared_backhaul,
    )
    assert any("cancellation" in p or "hears" in p for p in validate_scheme(topo, a, broken))


def test_validate_scheme_flags_empty_transmit_set():
    topo = build_wyner(2)
    a = MessageAssignment(K=2, transmit_sets={1: frozenset(), 2: frozenset()})
    s_bad = type(wyner_backhaul_scheme(4, 1)[1])(
        K=2,
        active_messages=frozenset({1}),
        serving={1: 1},
        cancel_at={1: ()},
        deactivated_transmitters=frozenset(),
        declared_pudof=Fraction(1, 2),
        declared_backhaul=Fraction(0),
    )
    assert any("empty transmit set" in p for p in validate_scheme(topo, a, s_bad))
