import numpy as np
import pytest

from mobs.attack import (
    InconsistentTranscript,
    crt_combine,
    cycle_residues,
    monico_attack,
    telescope_attack,
)
from mobs.automorphism import CycleAutomorphism, build_prime_cycle_perm
from mobs.boolmat import BitMatrix, mat_mul
from mobs.protocol import run_exchange, sample_exponent
from mobs.telescoping import count_solutions, telescope_rhs

H10 = build_prime_cycle_perm([2, 3, 5])


def test_crt_examples():
    assert crt_combine([(0, 2), (0, 3), (0, 5)]) == 0
    assert crt_combine([(1, 2)]) == 1
    a = crt_combine([(1, 2), (2, 3), (3, 5)])
    assert a == 23 and (a % 2, a % 3, a % 5) == (1, 2, 3)
    with pytest.raises(ValueError):
        crt_combine([(1, 4), (1, 6)])


def test_crt_brute_force(rng):
    moduli = [2, 3, 5, 7]
    for _ in range(50):
        rs = [int(rng.integers(0, p)) for p in moduli]
        expected = next(a for a in range(210) if all(a % p == r for r, p in zip(rs, moduli)))
        assert crt_combine(list(zip(rs, moduli))) == expected


def _distinct_planes_matrix(h, rng):
    # rejection-sample until planes within each cycle are pairwise distinct
    while True:
        M = BitMatrix.random(3, h.k, rng)
        if all(len({M.planes[j] for j in c}) == len(c) for c in h.cycles):
            return M


def test_residues_identity_case(rng):
    M = _distinct_planes_matrix(H10, rng)
    res = cycle_residues(M, M, None, H10)
    assert [rs for _, rs in res.per_cycle] == [frozenset({0})] * 3


def test_residues_full_ambiguity():
    M = BitMatrix(3, (77,) * 10)
    res = cycle_residues(M, M, None, H10)
    assert res.ambiguity == [2, 3, 5]


def test_residues_recover_shift(rng):
    M = _distinct_planes_matrix(H10, rng)
    for e in range(30):
        res = cycle_residues(M, H10.apply(M, e), None, H10)
        assert [set(rs) for _, rs in res.per_cycle] == [{e % 2}, {e % 3}, {e % 5}]


def test_residues_contain_true_exponent(rng):
    for _ in range(100):
        M = BitMatrix.random(3, 10, rng)
        x, y = sample_exponent(rng, 7, 12), sample_exponent(rng, 7, 12)
        t = run_exchange(M, H10, x, y)
        res = cycle_residues(M, telescope_rhs(M, H10, t.A), t.A, H10)
        for cyc, rs in res.per_cycle:
            assert x % len(cyc) in rs


def test_residues_inconsistent_input_raises(rng):
    M = _distinct_planes_matrix(H10, rng)
    other = BitMatrix(3, tuple((p + 1) % 512 for p in M.planes))
    with pytest.raises(InconsistentTranscript):
        cycle_residues(M, other, None, H10)


def test_residues_fixed_points_checked(rng):
    h = CycleAutomorphism(4, ((0, 1, 2),))
    M = BitMatrix(3, (1, 2, 4, 8))
    assert cycle_residues(M, M, None, h).ambiguity == [1]
    with pytest.raises(InconsistentTranscript):
        cycle_residues(M, BitMatrix(3, (1, 2, 4, 9)), None, h)


def test_monico_single_cycle_small_exponent(rng):
    h = build_prime_cycle_perm([7])
    M = _distinct_planes_matrix(h, rng)
    for x in range(1, 7):
        t = run_exchange(M, h, x, 5)
        out = monico_attack(t.public_view(), t.K)
        assert out.success
        assert out.candidate_key == t.K


def test_monico_recovers_key_k10(rng):
    for _ in range(100):
        M = BitMatrix.random(3, 10, rng)
        t = run_exchange(M, H10, sample_exponent(rng, 7, 12), sample_exponent(rng, 7, 12))
        out = monico_attack(t.public_view(), t.K)
        a = out.candidate_exponent
        assert mat_mul(H10.apply(M, a), t.A) == telescope_rhs(M, H10, t.A)
        assert out.candidate_key == mat_mul(H10.apply(t.B, a), t.A)
        assert out.success


def test_monico_every_residue_combination_gives_the_key(rng):
    for _ in range(30):
        M = BitMatrix.random(3, 10, rng)
        t = run_exchange(M, H10, sample_exponent(rng, 7, 12), sample_exponent(rng, 7, 12))
        out = monico_attack(t.public_view(), t.K, enumerate_all=True, cap=1000)
        assert out.distinct_keys == 1
        assert out.combinations_checked == np.prod(out.residue_ambiguity)


def test_monico_without_true_key_reports_no_success(rng):
    t = run_exchange(BitMatrix.random(3, 10, rng), H10, 200, 300)
    out = monico_attack(t.public_view())
    assert out.success is None
    assert "success" not in out.to_json()


def test_monico_rejects_composite_cycles(rng):
    h = CycleAutomorphism(4, ((0, 1, 2, 3),))
    t = run_exchange(BitMatrix.random(3, 4, rng), h, 5, 6)
    with pytest.raises(ValueError):
        monico_attack(t.public_view())


def test_telescope_attack_forced_when_unique(rng):
    h = build_prime_cycle_perm([2, 3])
    M = BitMatrix.identity(3, 5)
    t = run_exchange(M, h, 9, 4)
    assert count_solutions(telescope_rhs(M, h, t.A), t.A).total == 1
    out = telescope_attack(t.public_view(), budget=1, true_key=t.K)
    assert out.success and out.guesses == 1


def test_telescope_attack_exhaustive_small(rng):
    # k=10 totals sit near 2^40 and above, so use k=4: a 3-cycle plus a fixed point
    h = CycleAutomorphism(4, ((0, 1, 2),))
    done = 0
    while done < 5:
        M = BitMatrix.random(3, 4, rng)
        t = run_exchange(M, h, sample_exponent(rng, 7, 12), sample_exponent(rng, 7, 12))
        total = count_solutions(telescope_rhs(M, h, t.A), t.A).total
        if total > 10_000:
            continue
        out = telescope_attack(t.public_view(), budget=total, true_key=t.K)
        assert out.success and out.candidate_key == t.K and out.guesses <= total
        done += 1


def test_telescope_attack_public_only_returns_first_candidate(rng):
    h = build_prime_cycle_perm([2, 3])
    t = run_exchange(BitMatrix.identity(3, 5), h, 9, 4)
    out = telescope_attack(t.public_view(), budget=10)
    assert out.success is None and out.candidate_key == t.K


def test_telescope_attack_budget_validation(rng):
    t = run_exchange(BitMatrix.random(3, 10, rng), H10, 3, 4)
    with pytest.raises(ValueError):
        telescope_attack(t.public_view(), budget=0)
