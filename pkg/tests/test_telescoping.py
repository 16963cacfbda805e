import math

import pytest

from mobs.automorphism import CycleAutomorphism, build_prime_cycle_perm
from mobs.boolmat import BitMatrix, assemble, mat_mul, plane_identity, plane_mul
from mobs.protocol import generate_A
from mobs.telescoping import (
    SolutionReport,
    count_orbit,
    count_singlebit_orbit,
    count_singlebit_solutions,
    count_solutions,
    is_regular,
    plane_products,
    plane_solution_sets,
    telescope_rhs,
)

from oracles import brute_force_orbit, brute_force_solutions, plane_mul_grid

H10 = build_prime_cycle_perm([2, 3, 5])
I3 = plane_identity(3)


def test_singlebit_examples():
    for b in (0, 1, 77, 511):
        assert count_singlebit_solutions(b, I3, 3) == 1
    assert count_singlebit_solutions(0, 0, 3) == 512
    assert count_singlebit_solutions(5, 0, 3) == 0


def test_singlebit_all_ones_brute_force():
    expected = sum(1 for y in range(512) if plane_mul_grid(y, 511, 3) == 511)
    assert expected == 343 == (2**3 - 1) ** 3
    assert count_singlebit_solutions(511, 511, 3) == expected


def test_singlebit_orbit_examples():
    assert count_singlebit_orbit(I3, 3) == 512
    assert count_singlebit_orbit(0, 3) == 1
    expected = len({plane_mul_grid(y, 511, 3) for y in range(512)})
    assert expected == 8
    assert count_singlebit_orbit(511, 3) == expected


def test_fibres_partition_the_enumeration():
    # sum over the ideal of solution counts covers all 512 matrices once
    for a in (0, 1, 7, 84, 273, 511, 0b110101011):
        ideal = {plane_mul(y, a, 3) for y in range(512)}
        fibres = [count_singlebit_solutions(b, a, 3) for b in ideal]
        assert sum(fibres) == 512
        assert len(ideal) * min(fibres) <= 512
        assert max(fibres) <= 512


def test_report_total_is_product(rng):
    M = BitMatrix.random(3, 10, rng)
    A = generate_A(M, H10, 100)
    rep = count_solutions(telescope_rhs(M, H10, A), A)
    assert rep.total == math.prod(rep.per_plane)
    assert rep.total >= 1
    assert rep.log2_total == pytest.approx(math.log2(rep.total), rel=1e-12)


def test_zero_count_short_circuits():
    rep = SolutionReport.from_counts([3, 0, 5])
    assert rep.total == 0
    assert rep.per_plane == (3, 0, 5)
    assert rep.log2_total == -math.inf
    assert rep.to_json()["log2_total"] == "-inf"
    b = BitMatrix(3, (1, 5))
    a = BitMatrix(3, (I3, 0))
    got = count_solutions(b, a)
    assert got.per_plane == (1, 0) and got.total == 0


def test_identity_planes_give_one_solution(rng):
    a = BitMatrix.identity(3, 6)
    b = BitMatrix.random(3, 6, rng)
    assert count_solutions(b, a).total == 1


def test_orbit_examples():
    assert count_orbit(BitMatrix.identity(3, 4)).total == 512**4
    assert count_orbit(BitMatrix.zeros(3, 4)).total == 1


def _small_instance(rng, k=2):
    h = CycleAutomorphism(k, (tuple(range(k)),)) if k > 1 else CycleAutomorphism.identity(1)
    M = BitMatrix.random(2, k, rng)
    x = int(rng.integers(1, 40))
    return M, h, generate_A(M, h, x)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_decomposition_matches_full_brute_force(rng, k):
    for _ in range(6 if k == 3 else 12):
        M, h, A = _small_instance(rng, k)
        C = telescope_rhs(M, h, A)
        assert count_solutions(C, A).total == brute_force_solutions(C.entries(), A.entries(), k)
        assert count_orbit(A).total == brute_force_orbit(A.entries(), k)


def test_reassembled_solutions_satisfy_equation(rng):
    M = BitMatrix.random(3, 10, rng)
    A = generate_A(M, H10, 100)
    C = telescope_rhs(M, H10, A)
    sets = plane_solution_sets(C, A)
    assert [len(s) for s in sets] == list(count_solutions(C, A).per_plane)
    for _ in range(100):
        Y = assemble([s[int(rng.integers(0, len(s)))] for s in sets], 3)
        assert mat_mul(Y, A) == C
    # h^x(M) is always among the solutions
    true_Y = H10.apply(M, 100)
    assert all(true_Y.planes[i] in sets[i] for i in range(10))


def test_regularity_trivial_cases(rng):
    M = BitMatrix.identity(3, 5)
    h = CycleAutomorphism.identity(5)
    reg = is_regular(M, h, generate_A(M, h, 17))
    assert reg.regular and reg.forward.total == reg.backward.total == 1
    Z = BitMatrix.zeros(3, 5)
    reg = is_regular(Z, h, generate_A(Z, h, 3))
    assert reg.regular and reg.forward.total == 512**5


def test_regularity_against_brute_force(rng):
    for _ in range(8):
        M, h, A = _small_instance(rng, 2)
        reg = is_regular(M, h, A)
        C = telescope_rhs(M, h, A)
        fwd = brute_force_solutions(C.entries(), A.entries(), 2)
        bwd = brute_force_solutions(A.entries(), C.entries(), 2)
        assert (reg.forward.total, reg.backward.total) == (fwd, bwd)
        assert reg.regular == (fwd == bwd)


def test_product_counter_work_bound(rng):
    M = BitMatrix.random(3, 10, rng)
    A = generate_A(M, H10, 100)
    C = telescope_rhs(M, H10, A)
    plane_products.reset()
    count_solutions(C, A)
    assert plane_products.value == 10 * 512
    count_orbit(A)
    assert plane_products.value == 2 * 10 * 512


def test_json_shape(rng):
    rep = count_solutions(BitMatrix.random(3, 4, rng), BitMatrix.identity(3, 4)).to_json()
    assert set(rep) == {"per_plane", "total", "log2_total"}
    assert rep["total"] == "1"
