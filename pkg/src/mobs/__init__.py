"""Workbench for the MOBS semidirect-product key exchange.

Boolean bitstring-matrix algebra, telescoping-equality solution counting,
principal-ideal sizes, key-recovery attacks and the experiment harness.
"""

__version__ = "0.1.0"

from .kernels import BACKEND
from .boolmat import BitMatrix, all_matrices, assemble, mat_mul, plane_mul, pull
from .automorphism import CycleAutomorphism, build_prime_cycle_perm, first_primes, primes_for_k
from .protocol import ExchangeTranscript, PublicView, derive_key, generate_A, holomorph_pow, run_exchange
from .telescoping import (
    OrbitReport,
    SolutionReport,
    count_orbit,
    count_singlebit_orbit,
    count_singlebit_solutions,
    count_solutions,
    is_regular,
)
from .attack import crt_combine, cycle_residues, monico_attack, telescope_attack
