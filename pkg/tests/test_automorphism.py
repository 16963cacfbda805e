import json
import math

import numpy as np
import pytest

from mobs.automorphism import (
    CycleAutomorphism,
    build_prime_cycle_perm,
    first_primes,
    primes_for_k,
)
from mobs.boolmat import BitMatrix, DimensionError, mat_mul, pull

from oracles import apply_perm


def test_prime_prefix_sums():
    assert sum(first_primes(3)) == 10
    assert sum(first_primes(12)) == 197
    assert sum(first_primes(16)) == 381
    assert primes_for_k(381) == first_primes(16)
    assert primes_for_k(2) == [2]
    for bad in (1, 4, 11, 380):
        with pytest.raises(ValueError):
            primes_for_k(bad)


def test_orders():
    h = build_prime_cycle_perm([2, 3, 5])
    assert h.k == 10 and h.order == 30
    big = build_prime_cycle_perm(first_primes(16))
    assert big.k == 381
    expected = math.prod([2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53])
    assert expected == 32589158477190044730
    assert big.order == expected


def test_default_layout_is_consecutive_blocks():
    h = build_prime_cycle_perm([5, 2, 3])
    assert h.cycles == ((0, 1), (2, 3, 4), (5, 6, 7, 8, 9))


def test_shuffled_layout_keeps_cycle_type():
    h = build_prime_cycle_perm([2, 3, 5], rng=np.random.default_rng(3))
    assert sorted(len(c) for c in h.cycles) == [2, 3, 5]
    assert sorted(p for c in h.cycles for p in c) == list(range(10))
    assert h == build_prime_cycle_perm([2, 3, 5], rng=np.random.default_rng(3))


def test_build_rejects_bad_input():
    with pytest.raises(ValueError):
        build_prime_cycle_perm([2, 3, 5], k=11)
    with pytest.raises(ValueError):
        build_prime_cycle_perm([2, 2])
    with pytest.raises(ValueError):
        build_prime_cycle_perm([4])


def test_cycles_must_be_disjoint_and_in_range():
    with pytest.raises(ValueError):
        CycleAutomorphism(4, ((0, 1), (1, 2)))
    with pytest.raises(ValueError):
        CycleAutomorphism(3, ((0, 3),))


def test_identity_and_order_law(rng):
    M = BitMatrix.random(3, 10, rng)
    assert CycleAutomorphism.identity(10).apply(M) == M
    h = build_prime_cycle_perm([2, 3, 5])
    out = M
    for _ in range(h.order):
        out = h.apply(out)
    assert out == M
    assert h.apply(M, h.order) == M


def test_action_convention(rng):
    # bit at position i moves to position sigma(i)
    h = build_prime_cycle_perm([2, 3, 5])
    sigma = h.mapping()
    M = BitMatrix.random(3, 10, rng)
    hM = h.apply(M)
    for i in range(10):
        assert pull(sigma[i], hM) == pull(i, M)
    assert hM.entries() == apply_perm(M.entries(), sigma)


def test_is_automorphism(rng):
    for primes in ([2, 3, 5], [3], [2, 5]):
        h = build_prime_cycle_perm(primes)
        for _ in range(100 if primes == [2, 3, 5] else 20):
            M, N = BitMatrix.random(3, h.k, rng), BitMatrix.random(3, h.k, rng)
            assert h.apply(mat_mul(M, N)) == mat_mul(h.apply(M), h.apply(N))


def test_power_basics():
    h = build_prime_cycle_perm([2, 3, 5])
    assert h.power(0) == CycleAutomorphism.identity(10)
    assert h.power(h.order) == CycleAutomorphism.identity(10)
    assert h.power(1) == h
    with pytest.raises(ValueError):
        h.power(-1)


def test_power_matches_iterated_application(rng):
    h = build_prime_cycle_perm([2, 3, 5])
    M = BitMatrix.random(3, 10, rng)
    iterated = M
    for _ in range(5):
        iterated = h.apply(iterated)
    assert h.power(5).apply(M) == iterated
    assert h.apply(M, 5) == iterated


def test_power_addition_law(rng):
    h = build_prime_cycle_perm([2, 3, 5, 7])
    for _ in range(30):
        a, b = (int(v) for v in rng.integers(0, 10**6, size=2))
        M = BitMatrix.random(3, h.k, rng)
        assert h.power(a).apply(h.power(b).apply(M)) == h.power(a + b).apply(M)


def test_power_is_shift_on_each_cycle():
    h = build_prime_cycle_perm([2, 3, 5, 7])
    e = 123456789
    sigma_e = h.power(e).mapping()
    for cyc in h.cycles:
        p = len(cyc)
        for t, pos in enumerate(cyc):
            assert sigma_e[pos] == cyc[(t + e) % p]


def test_huge_exponent_is_cheap():
    h = build_prime_cycle_perm(first_primes(16))
    assert h.power(10**40 * h.order) == CycleAutomorphism.identity(381)


def test_length_mismatch(rng):
    h = build_prime_cycle_perm([2, 3])
    with pytest.raises(DimensionError):
        h.apply(BitMatrix.random(3, 10, rng))


def test_json_roundtrip():
    h = build_prime_cycle_perm([2, 3, 5], rng=np.random.default_rng(1))
    data = json.loads(json.dumps(h.to_json()))
    assert data["k"] == 10
    assert CycleAutomorphism.from_json(data) == h


def test_from_mapping_roundtrip():
    h = build_prime_cycle_perm([2, 3, 5, 7], rng=np.random.default_rng(9))
    assert CycleAutomorphism.from_mapping(h.mapping()) == h
    with pytest.raises(ValueError):
        CycleAutomorphism.from_mapping([0, 0, 1])
