"""Key recovery from a public MOBS transcript.

Both attacks reduce to the same question asked cycle by cycle: which shifts
``r`` of a prime cycle make ``h^r(source)`` (optionally times a right factor)
agree with a target on that cycle's planes? Independent residues are glued
together with the CRT.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import kernels
from .automorphism import CycleAutomorphism, is_prime
from .boolmat import BitMatrix, DimensionError, mat_mul
from .protocol import PublicView
from .telescoping import count_solutions, plane_solution_sets, telescope_rhs


class InconsistentTranscript(ValueError):
    """No shift of some cycle satisfies the residue equations."""


def crt_combine(residues: Sequence[tuple[int, int]]) -> int:
    """Smallest non-negative ``a`` with ``a = r_i (mod p_i)`` for all pairs."""
    a, modulus = 0, 1
    for r, p in residues:
        if p < 1:
            raise ValueError(f"modulus must be positive, got {p}")
        if math.gcd(modulus, p) != 1:
            raise ValueError(f"moduli not pairwise coprime (gcd with {p} is {math.gcd(modulus, p)})")
        # a + modulus * t = r (mod p)
        t = ((r - a) * pow(modulus, -1, p)) % p
        a += modulus * t
        modulus *= p
    return a


@dataclass(frozen=True)
class CycleResidues:
    per_cycle: tuple[tuple[tuple[int, ...], frozenset[int]], ...]

    @property
    def ambiguity(self) -> list[int]:
        return [len(rs) for _, rs in self.per_cycle]

    def smallest(self) -> list[tuple[int, int]]:
        return [(min(rs), len(cyc)) for cyc, rs in self.per_cycle]


def _cycle_admissible(cyc, src, tgt, right, n) -> frozenset[int]:
    p = len(cyc)
    out = []
    for r in range(p):
        for t in range(p):
            # plane c_t of h^r(source) is plane c_{t-r} of source
            plane = src[cyc[(t - r) % p]]
            j = cyc[t]
            if right is not None:
                plane = kernels.plane_mul(plane, right[j], n)
            if plane != tgt[j]:
                break
        else:
            out.append(r)
    return frozenset(out)


def cycle_residues(
    source: BitMatrix,
    target: BitMatrix,
    right_factor: BitMatrix | None,
    h: CycleAutomorphism,
) -> CycleResidues:
    """Admissible shifts per cycle for ``h^r(source) [* right_factor] = target``."""
    for other in (target, right_factor):
        if other is not None and (other.n != source.n or other.k != source.k):
            raise DimensionError("residue search operands disagree in shape")
    if h.k != source.k:
        raise DimensionError(f"permutation on {h.k} positions, matrices have k={source.k}")
    n = source.n
    src, tgt = source.planes, target.planes
    right = right_factor.planes if right_factor is not None else None
    for j in h.fixed_points:
        plane = src[j] if right is None else kernels.plane_mul(src[j], right[j], n)
        if plane != tgt[j]:
            raise InconsistentTranscript(f"fixed position {j} cannot match")
    per_cycle = []
    for cyc in h.cycles:
        rs = _cycle_admissible(cyc, src, tgt, right, n)
        if not rs:
            raise InconsistentTranscript(f"no admissible shift for cycle starting at {cyc[0]}")
        per_cycle.append((cyc, rs))
    return CycleResidues(tuple(per_cycle))


@dataclass
class AttackOutcome:
    candidate_exponent: int | None
    candidate_key: BitMatrix | None
    success: bool | None
    residue_ambiguity: list[int] = field(default_factory=list)
    guesses: int = 0
    solution_total: int | None = None
    distinct_keys: int | None = None
    combinations_checked: int | None = None

    def to_json(self) -> dict:
        data = {
            "candidate_exponent": None if self.candidate_exponent is None else str(self.candidate_exponent),
            "candidate_key": None if self.candidate_key is None else self.candidate_key.to_json(),
            "residue_ambiguity": list(self.residue_ambiguity),
            "guesses": self.guesses,
        }
        if self.success is not None:
            data["success"] = self.success
        if self.solution_total is not None:
            data["solution_total"] = str(self.solution_total)
        if self.distinct_keys is not None:
            data["distinct_keys"] = self.distinct_keys
            data["combinations_checked"] = self.combinations_checked
        return data


def monico_attack(
    view: PublicView,
    true_key: BitMatrix | None = None,
    enumerate_all: bool = False,
    cap: int = 10_000,
) -> AttackOutcome:
    """Find ``a`` with ``h^a(M) A = h(A) M`` and return ``h^a(B) A``.

    The smallest admissible residue is taken on every cycle. With
    ``enumerate_all`` up to ``cap`` residue combinations are also tried, and
    the number of distinct resulting keys is reported.
    """
    M, h, A, B = view.M, view.h, view.A, view.B
    for p in (len(c) for c in h.cycles):
        if not is_prime(p):
            raise ValueError(f"cycle of length {p} is not prime")
    target = telescope_rhs(M, h, A)
    residues = cycle_residues(M, target, A, h)
    a = crt_combine(residues.smallest())
    if mat_mul(h.apply(M, a), A) != target:
        raise InconsistentTranscript(f"exponent {a} fails h^a(M) A = h(A) M")
    key = mat_mul(h.apply(B, a), A)
    outcome = AttackOutcome(
        candidate_exponent=a,
        candidate_key=key,
        success=None if true_key is None else key == true_key,
        residue_ambiguity=residues.ambiguity,
    )
    if enumerate_all:
        moduli = [len(c) for c, _ in residues.per_cycle]
        keys = set()
        checked = 0
        for combo in itertools.islice(itertools.product(*(sorted(rs) for _, rs in residues.per_cycle)), cap):
            e = crt_combine(list(zip(combo, moduli)))
            keys.add(mat_mul(h.apply(B, e), A).planes)
            checked += 1
        outcome.distinct_keys = len(keys)
        outcome.combinations_checked = checked
    return outcome


def telescope_attack(view: PublicView, budget: int, true_key: BitMatrix | None = None) -> AttackOutcome:
    """Guess solutions ``Y`` of ``h(A) M = Y A`` and read ``h^x`` off each.

    Solutions are enumerated from the per-plane solution lists with plane 0
    varying fastest. A guess is usable when ``Y`` is a shift of ``M`` on
    every cycle; its key ``h^e(B) A`` is then compared with ``true_key``. With
    no true key the first usable guess is returned with ``success=None``.
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    M, h, A, B = view.M, view.h, view.A, view.B
    C = telescope_rhs(M, h, A)
    total = count_solutions(C, A).total
    outcome = AttackOutcome(None, None, False, guesses=0, solution_total=total)
    if total == 0:
        return outcome
    sets = plane_solution_sets(C, A)
    src = M.planes
    n = M.n
    for j in h.fixed_points:
        # Y must equal M on fixed positions; prune there before enumerating.
        sets[j] = [y for y in sets[j] if y == src[j]]
        if not sets[j]:
            outcome.guesses = 0
            return outcome
    cycles = h.cycles
    memo: list[dict] = [{} for _ in cycles]
    guesses = 0
    # itertools.product varies its last argument fastest.
    for rev in itertools.product(*reversed(sets)):
        if guesses >= budget:
            break
        guesses += 1
        Y = rev[::-1]
        chosen = []
        for ci, cyc in enumerate(cycles):
            key = tuple(Y[j] for j in cyc)
            rs = memo[ci].get(key)
            if rs is None:
                rs = _cycle_admissible(cyc, src, Y, None, n)
                memo[ci][key] = rs
            if not rs:
                break
            chosen.append((min(rs), len(cyc)))
        else:
            e = crt_combine(chosen)
            cand = mat_mul(h.apply(B, e), A)
            if true_key is None:
                outcome.candidate_exponent, outcome.candidate_key = e, cand
                outcome.success = None
                outcome.guesses = guesses
                return outcome
            if cand == true_key:
                outcome.candidate_exponent, outcome.candidate_key = e, cand
                outcome.success = True
                outcome.guesses = guesses
                return outcome
    outcome.guesses = guesses
    return outcome
