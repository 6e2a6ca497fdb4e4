"""Statistical post-processing: Dixon-Mood estimation of the fatigue limit
from a stair-case sequence, Basquin (S-N) curve fitting, and a Monte-Carlo
harness validating the estimator on synthetic threshold-strength specimens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EstimationError
from .protocols import StairCaseSequence, StairCaseTrial

Z_90 = 1.2816  # standard normal 90th percentile
DISPERSION_VALIDITY_RATIO = 0.3
DISPERSION_FALLBACK_FACTOR = 0.53


@dataclass(frozen=True)
class StairCaseEstimate:
    mean_V: float
    std_V: float
    quantile_10_V: float
    quantile_90_V: float
    basis_event: str  # "failure" | "non-failure"
    dispersion_formula_valid: bool


@dataclass(frozen=True)
class WohlerPoint:
    level_V: float
    cycles: int
    censored: bool = False  # survived the reference count (run-out)
    stress_Pa: float | None = None

    def __post_init__(self):
        if self.cycles < 1:
            raise ValueError(f"cycles must be >= 1, got {self.cycles}")


@dataclass(frozen=True)
class BasquinFit:
    coefficient: float  # level at N = 1
    exponent: float
    residual: float     # RMS in log-log space


def dixon_mood(seq: StairCaseSequence) -> StairCaseEstimate:
    """Closed-form mean/std of the fatigue limit from a stair-case sequence.

    The estimate is computed over the less frequent outcome (ties broken
    toward failures). With the basis-event levels indexed i = 0, 1, ...
    from the lowest occupied one, mean = X0 + d*(A/N +/- 1/2) (+ for a
    non-failure basis). The dispersion formula is only valid when
    (N*B - A^2)/N^2 >= 0.3; below that, std falls back to 0.53*d.
    """
    failures = [t for t in seq.trials if t.failure]
    survivals = [t for t in seq.trials if not t.failure]
    if not failures:
        raise EstimationError("estimation impossible: no failure events in the sequence")
    if not survivals:
        raise EstimationError("estimation impossible: no non-failure events in the sequence")

    if len(failures) <= len(survivals):
        basis, basis_event, half = failures, "failure", -0.5
    else:
        basis, basis_event, half = survivals, "non-failure", +0.5

    d = seq.step_V
    x0 = min(t.level_V for t in basis)
    counts: dict[int, int] = {}
    for t in basis:
        i = round((t.level_V - x0) / d)
        if not math.isclose(x0 + i * d, t.level_V, rel_tol=1e-9, abs_tol=1e-9 * d):
            raise EstimationError(
                f"level {t.level_V} V is not on the step grid (step {d} V from {x0} V)")
        counts[i] = counts.get(i, 0) + 1

    n = sum(counts.values())
    a = sum(i * c for i, c in counts.items())
    b = sum(i * i * c for i, c in counts.items())
    mean = x0 + d * (a / n + half)
    ratio = (n * b - a * a) / n**2
    valid = ratio >= DISPERSION_VALIDITY_RATIO
    std = 1.62 * d * (ratio + 0.029) if valid else DISPERSION_FALLBACK_FACTOR * d
    return StairCaseEstimate(
        mean_V=mean, std_V=std,
        quantile_10_V=mean - Z_90 * std,
        quantile_90_V=mean + Z_90 * std,
        basis_event=basis_event,
        dispersion_formula_valid=valid,
    )


def fit_basquin(points: list[WohlerPoint]) -> BasquinFit:
    """Least-squares Basquin line level = C * N^b in log-log space.

    Censored (run-out) points are excluded; at least two uncensored points
    at two distinct levels are required.
    """
    # Sorted so the fit is exactly permutation-invariant in its input list.
    usable = sorted((p for p in points if not p.censored),
                    key=lambda p: (p.cycles, p.level_V))
    if len(usable) < 2:
        raise EstimationError(
            f"need at least 2 uncensored points, got {len(usable)}")
    levels = np.array([p.level_V for p in usable], dtype=float)
    cycles = np.array([p.cycles for p in usable], dtype=float)
    if np.unique(levels).size < 2:
        raise EstimationError("all uncensored points share one level; slope is undefined")
    log_n = np.log(cycles)
    log_s = np.log(levels)
    slope, intercept = np.polyfit(log_n, log_s, 1)
    residual = float(np.sqrt(np.mean((log_s - (intercept + slope * log_n)) ** 2)))
    return BasquinFit(coefficient=float(np.exp(intercept)), exponent=float(slope),
                      residual=residual)


def synthetic_stair_case(strengths_V: list[float], levels_V: list[float],
                         step_V: float, start_level_V: float) -> StairCaseSequence:
    """Stair-case over pure threshold specimens: failure iff level >= strength."""
    levels = sorted(float(v) for v in levels_V)
    level = float(start_level_V)
    trials = []
    for idx, strength in enumerate(strengths_V):
        failure = level >= strength
        trials.append(StairCaseTrial(specimen_id=idx, level_V=level, failure=failure))
        level = level - step_V if failure else level + step_V
        level = min(max(level, levels[0]), levels[-1])
    return StairCaseSequence(trials=tuple(trials), step_V=step_V,
                             levels_V=tuple(levels))


def estimator_recovery_trial(true_mean_V: float, true_std_V: float,
                             n_specimens: int, replications: int, seed: int,
                             levels_V: list[float] | None = None,
                             step_V: float = 1.0) -> dict:
    """Bias/spread summary of the Dixon-Mood estimator on synthetic campaigns.

    Each replication draws threshold strengths from Normal(true_mean,
    true_std), runs a stair-case starting at the level nearest the true
    mean, and records the estimated mean. Replications whose sequence has
    only one outcome are skipped and counted.
    """
    if replications < 1:
        raise ValueError(f"need at least one replication, got {replications}")
    if levels_V is None:
        base = round(true_mean_V)
        levels_V = [base - 1.0 + i * step_V for i in range(4)]
    levels = sorted(float(v) for v in levels_V)
    start = min(levels, key=lambda v: abs(v - true_mean_V))

    estimates = []
    skipped = 0
    for rep in range(replications):
        rng = np.random.default_rng((int(seed), rep))
        strengths = true_mean_V + true_std_V * rng.standard_normal(n_specimens)
        seq = synthetic_stair_case(list(strengths), levels, step_V, start)
        try:
            estimates.append(dixon_mood(seq).mean_V)
        except EstimationError:
            skipped += 1
    if not estimates:
        raise EstimationError("every replication produced a single-outcome sequence")
    biases = np.array(estimates) - true_mean_V
    return {
        "true_mean_V": true_mean_V,
        "true_std_V": true_std_V,
        "n_specimens": n_specimens,
        "replications": replications,
        "valid_replications": len(estimates),
        "skipped_replications": skipped,
        "mean_bias_V": float(np.mean(biases)),
        "std_bias_V": float(np.std(biases)),
        "max_abs_bias_V": float(np.max(np.abs(biases))),
    }
