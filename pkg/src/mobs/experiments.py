"""Trial harness for the three counting experiments.

Each trial draws from its own generator, seeded from ``(master_seed, trial)``
through :class:`numpy.random.SeedSequence`, so records do not depend on
execution order or worker count.
"""

from __future__ import annotations

import csv
import json
import math
import os
import time
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import partial
from typing import Sequence

import numpy as np

from .automorphism import CycleAutomorphism
from .boolmat import BitMatrix
from .protocol import generate_A, sample_exponent
from .telescoping import count_orbit, count_solutions, is_regular, telescope_rhs

DEFAULT_EXPONENT = 100

CSV_FIELDS = [
    "trial", "seed", "n", "k", "exponent", "log2_solutions", "log2_orbit",
    "regular", "per_plane_json", "ms", "ln_solutions",
]


class UndefinedCorrelation(ValueError):
    """Spearman's rho is undefined when either coordinate has no spread."""


def trial_seed(master_seed: int, trial: int) -> int:
    state = np.random.SeedSequence(master_seed, spawn_key=(trial,)).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def trial_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


@dataclass
class TrialRecord:
    trial: int
    seed: int
    n: int
    k: int
    primes: list[int]
    exponent: int
    per_plane: list[int]
    solutions_total: int
    log2_solutions: float
    log2_orbit: float | None = None
    regular: bool | None = None
    ms: float = 0.0

    def csv_row(self, timing: bool = False) -> dict:
        def fmt(v):
            if v is None:
                return ""
            if isinstance(v, float):
                return repr(v) if math.isfinite(v) else "-inf"
            return str(v)

        ln = self.log2_solutions * math.log(2) if math.isfinite(self.log2_solutions) else -math.inf
        return {
            "trial": self.trial,
            "seed": self.seed,
            "n": self.n,
            "k": self.k,
            "exponent": self.exponent,
            "log2_solutions": fmt(self.log2_solutions),
            "log2_orbit": fmt(self.log2_orbit),
            "regular": "" if self.regular is None else int(self.regular),
            "per_plane_json": json.dumps(self.per_plane, separators=(",", ":")),
            # Wall time breaks byte-identical reruns, so it is opt-in.
            "ms": f"{self.ms:.3f}" if timing else "",
            "ln_solutions": fmt(ln),
        }


def _primes_of(h: CycleAutomorphism) -> list[int]:
    return [len(c) for c in h.cycles]


# ------------------------------------------------------------ single trials


def _fixed_matrix_trial(trial: int, *, M, h, e_min, e_max, master_seed, exponents) -> TrialRecord:
    start = time.perf_counter()
    seed = trial_seed(master_seed, trial)
    if exponents is not None:
        x = int(exponents[trial])
    else:
        x = sample_exponent(trial_rng(seed), e_min, e_max)
    A = generate_A(M, h, x)
    report = count_solutions(telescope_rhs(M, h, A), A)
    return TrialRecord(
        trial, seed, M.n, M.k, _primes_of(h), x, list(report.per_plane), report.total, report.log2_total,
        ms=(time.perf_counter() - start) * 1e3,
    )


def _random_matrix_trial(trial: int, *, h, x, n, k, master_seed, with_orbit) -> TrialRecord:
    start = time.perf_counter()
    seed = trial_seed(master_seed, trial)
    M = BitMatrix.random(n, k, trial_rng(seed))
    A = generate_A(M, h, x)
    log2_orbit = regular = None
    if with_orbit:
        reg = is_regular(M, h, A)
        report = reg.forward
        regular = reg.regular
        log2_orbit = count_orbit(A).log2_total
    else:
        report = count_solutions(telescope_rhs(M, h, A), A)
    return TrialRecord(
        trial, seed, n, k, _primes_of(h), x, list(report.per_plane), report.total, report.log2_total,
        log2_orbit=log2_orbit, regular=regular, ms=(time.perf_counter() - start) * 1e3,
    )


def default_workers() -> int:
    return int(os.environ.get("MOBS_WORKERS", "1"))


def _run_trials(fn, trials: int, workers: int | None) -> list[TrialRecord]:
    if trials < 1:
        raise ValueError("trials must be >= 1")
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        records = [fn(t) for t in range(trials)]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(fn, range(trials), chunksize=max(1, trials // (4 * workers))))
    records.sort(key=lambda r: r.trial)
    return records


# ------------------------------------------------------------ experiments


def experiment_fixed_matrix(
    M: BitMatrix,
    h: CycleAutomorphism,
    trials: int,
    e_min: int,
    e_max: int,
    seed: int,
    exponents: Sequence[int] | None = None,
    workers: int | None = None,
) -> list[TrialRecord]:
    """Fixed ``(M, h)``, exponent drawn per trial from ``[2**e_min, 2**e_max]``.

    ``exponents`` overrides sampling with an explicit per-trial list.
    """
    if exponents is not None:
        if len(exponents) != trials:
            raise ValueError("need exactly one exponent per trial")
        if min(exponents) < 1:
            raise ValueError("exponents must be >= 1")
    elif e_min > e_max:
        raise ValueError("e_min must not exceed e_max")
    fn = partial(_fixed_matrix_trial, M=M, h=h, e_min=e_min, e_max=e_max, master_seed=seed,
                 exponents=None if exponents is None else list(exponents))
    return _run_trials(fn, trials, workers)


def experiment_random_matrix(h, x, n, k, trials, seed, workers=None) -> list[TrialRecord]:
    fn = partial(_random_matrix_trial, h=h, x=x, n=n, k=k, master_seed=seed, with_orbit=False)
    return _run_trials(fn, trials, workers)


def experiment_orbit_vs_solutions(h, x, n, k, trials, seed, workers=None):
    """Random ``M`` per trial; records ideal size, solution count and regularity."""
    fn = partial(_random_matrix_trial, h=h, x=x, n=n, k=k, master_seed=seed, with_orbit=True)
    records = _run_trials(fn, trials, workers)
    return records, summarize(records)


# ------------------------------------------------------------ statistics


def average_ranks(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the mean of the ranks they span."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        mean_rank = (i + j) / 2 + 1
        for t in range(i, j + 1):
            ranks[order[t]] = mean_rank
        i = j + 1
    return ranks


def spearman_rho(pairs: Sequence[tuple[float, float]]) -> float:
    if len(pairs) < 2:
        raise ValueError("Spearman's rho needs at least two pairs")
    rx = average_ranks([p[0] for p in pairs])
    ry = average_ranks([p[1] for p in pairs])
    mx = math.fsum(rx) / len(rx)
    my = math.fsum(ry) / len(ry)
    dx = [v - mx for v in rx]
    dy = [v - my for v in ry]
    sxx = math.fsum(v * v for v in dx)
    syy = math.fsum(v * v for v in dy)
    if sxx == 0 or syy == 0:
        raise UndefinedCorrelation("zero variance in ranks")
    rho = math.fsum(a * b for a, b in zip(dx, dy)) / math.sqrt(sxx * syy)
    return max(-1.0, min(1.0, rho))


def histogram(values: Sequence[float]) -> dict:
    """Fixed-width bins; Freedman-Diaconis width with a floor of 1.0."""
    vals = np.asarray([v for v in values if math.isfinite(v)], dtype=float)
    if vals.size == 0:
        return {"edges": [], "counts": []}
    q75, q25 = np.percentile(vals, [75, 25])
    width = max(2.0 * (q75 - q25) / vals.size ** (1 / 3), 1.0)
    lo = math.floor(vals.min())
    nbins = max(1, math.ceil((vals.max() - lo) / width + 1e-12))
    if lo + nbins * width <= vals.max():
        nbins += 1
    edges = lo + width * np.arange(nbins + 1)
    counts, _ = np.histogram(vals, bins=edges)
    return {"edges": [float(e) for e in edges], "counts": [int(c) for c in counts]}


@dataclass
class SummaryStats:
    trials: int
    min_log2: float
    max_log2: float
    mean_log2: float
    histogram: dict
    spearman_rho: float | None = None
    regularity_pct: float | None = None
    same_orbit_different_solutions: list[int] | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        data = asdict(self)
        for key in ("min_log2", "max_log2", "mean_log2"):
            if not math.isfinite(data[key]):
                data[key] = "-inf"
        return data


def _orbit_witness(records) -> list[int] | None:
    first: dict[float, TrialRecord] = {}
    for r in records:
        seen = first.setdefault(r.log2_orbit, r)
        if seen.solutions_total != r.solutions_total:
            return [seen.trial, r.trial]
    return None


def summarize(records: Sequence[TrialRecord]) -> SummaryStats:
    logs = [r.log2_solutions for r in records]
    finite = [v for v in logs if math.isfinite(v)]
    stats = SummaryStats(
        trials=len(records),
        min_log2=min(logs),
        max_log2=max(logs),
        mean_log2=math.fsum(finite) / len(finite) if finite else -math.inf,
        histogram=histogram(logs),
    )
    with_orbit = [r for r in records if r.log2_orbit is not None]
    if with_orbit:
        try:
            stats.spearman_rho = spearman_rho([(r.log2_orbit, r.log2_solutions) for r in with_orbit])
        except UndefinedCorrelation:
            stats.spearman_rho = None
        stats.regularity_pct = 100.0 * sum(bool(r.regular) for r in with_orbit) / len(with_orbit)
        stats.same_orbit_different_solutions = _orbit_witness(with_orbit)
    return stats


def exponent_invariance(records: Sequence[TrialRecord]) -> dict:
    """Compare every trial's exact total and per-plane multiset with trial 0."""
    ref = records[0]
    ref_multiset = Counter(ref.per_plane)
    violations = []
    for r in records[1:]:
        problems = []
        if r.solutions_total != ref.solutions_total:
            problems.append("total")
        if Counter(r.per_plane) != ref_multiset:
            problems.append("multiset")
        if problems:
            violations.append({"trial": r.trial, "exponent": r.exponent, "differs_in": problems})
    return {
        "reference_trial": ref.trial,
        "reference_exponent": ref.exponent,
        "constant_total": not any("total" in v["differs_in"] for v in violations),
        "multisets_equal": not any("multiset" in v["differs_in"] for v in violations),
        "violations": violations,
    }


# ------------------------------------------------------------ output


def write_csv(records: Sequence[TrialRecord], path, timing: bool = False) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=CSV_FIELDS, lineterminator="\n")
        writer.writeheader()
        for r in records:
            writer.writerow(r.csv_row(timing))


def write_json(data: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
