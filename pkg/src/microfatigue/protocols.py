"""Virtual test drivers: pull-in detection, constant-amplitude fatigue runs
with periodic pull-in monitoring, the stair-case campaign, and calibration
of the damage-model defaults against the published fatigue-limit levels.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .damage import (DamageModelParams, DamageState, SpecimenStrength,
                     accumulate, cycles_to_failure, degraded_pull_in)
from .device import Device
from .electromech import pull_in_voltage_closed_form
from .errors import CalibrationError
from .loading import fatigue_parameters

log = logging.getLogger(__name__)

OUTCOME_FAILED = "failed"
OUTCOME_SURVIVED = "survived"
OUTCOME_INVALID = "invalid"  # test degenerated into displacement-imposed mode

DEFAULT_DETECTION_INTERVAL = 100_000   # load cycles between pull-in detections
DEFAULT_REFERENCE_CYCLES = 2_000_000   # load cycles defining a run-out
DEFAULT_DETECTION_STEP_V = 0.05        # DC supply step during a detection
DEFAULT_DROP_FRACTION = 0.2            # failure: >=20% drop between detections
DEFAULT_MIN_PULLIN_FRACTION = 0.5      # failure: pull-in below half the pristine value


@dataclass(frozen=True)
class FatigueRunRecord:
    drive_amplitude_V: float
    detections: tuple[tuple[int, float], ...]  # (load cycles, measured pull-in V)
    outcome: str
    reference_cycles: int


@dataclass(frozen=True)
class StairCaseTrial:
    specimen_id: int
    level_V: float
    failure: bool


@dataclass(frozen=True)
class StairCaseSequence:
    trials: tuple[StairCaseTrial, ...]
    step_V: float
    levels_V: tuple[float, ...]


@dataclass(frozen=True)
class SpecimenPopulation:
    """Seeded per-specimen strength scatter.

    Each specimen's strength is drawn from an independent RNG stream keyed
    by (master_seed, index), so the population does not depend on the order
    in which specimens are evaluated.
    """

    master_seed: int
    mean_strength_V: float
    std_strength_V: float
    specimens: tuple[SpecimenStrength, ...] = field(default=())


def strength_scale_from_threshold(threshold_V: float, device: Device,
                                  params: DamageModelParams) -> float:
    """Map a threshold drive voltage to a dimensionless strength scale.

    A specimen of scale s has endurance s*sigma_D, so it survives exactly
    the levels whose stress amplitude stays at or below the amplitude at
    its threshold voltage.
    """
    tension, _ = fatigue_parameters(threshold_V, device.mechanics, device.geometry)
    return tension.sigma_alt_Pa / params.endurance_stress_Pa


def build_population(master_seed: int, mean_V: float, std_V: float, n: int,
                     device: Device, params: DamageModelParams,
                     thresholds_V: list[float] | None = None) -> SpecimenPopulation:
    """Draw (or adopt) threshold voltages and convert them to strength scales."""
    pristine = pull_in_voltage_closed_form(device.mechanics, device.geometry).pull_in_voltage_V
    if thresholds_V is None:
        thresholds = []
        for i in range(n):
            rng = np.random.default_rng((int(master_seed), i))
            thresholds.append(mean_V + std_V * float(rng.standard_normal()))
    else:
        thresholds = [float(v) for v in thresholds_V]
    clamped = [min(max(v, 0.1), 0.99 * pristine) for v in thresholds]
    scales = tuple(SpecimenStrength(strength_scale_from_threshold(v, device, params))
                   for v in clamped)
    return SpecimenPopulation(master_seed=int(master_seed), mean_strength_V=mean_V,
                              std_strength_V=std_V, specimens=scales)


def run_pull_in_detection(state: DamageState, device: Device,
                          params: DamageModelParams,
                          step_V: float = DEFAULT_DETECTION_STEP_V) -> float:
    """Measured pull-in of the (possibly damaged) device, adding no damage.

    The DC supply is stepped, so the reading is the degraded pull-in
    rounded up to the next step_V grid point.
    """
    if step_V <= 0:
        raise ValueError(f"detection step must be > 0, got {step_V}")
    v = degraded_pull_in(state, device.mechanics, device.geometry, params)
    # Guard against ceil pushing an exact grid value up one extra step.
    return math.ceil(v / step_V - 1e-9) * step_V


def run_fatigue_test(V_a: float, specimen: SpecimenStrength, device: Device,
                     params: DamageModelParams,
                     detection_interval: int = DEFAULT_DETECTION_INTERVAL,
                     reference_cycles: int = DEFAULT_REFERENCE_CYCLES,
                     detection_step_V: float = DEFAULT_DETECTION_STEP_V,
                     drop_fraction: float = DEFAULT_DROP_FRACTION,
                     min_pullin_fraction: float = DEFAULT_MIN_PULLIN_FRACTION,
                     ) -> FatigueRunRecord:
    """One constant-amplitude fatigue run with periodic pull-in monitoring.

    Load cycles are accumulated in detection-interval batches; after each
    batch the pull-in voltage is measured. The run ends on the failure
    rule (collapse, a >= drop_fraction step-to-step drop, or pull-in below
    min_pullin_fraction of pristine), on the reference cycle count
    (survived), or when the measured pull-in reaches the drive amplitude
    (invalid: the test has become displacement-imposed).
    """
    if detection_interval <= 0:
        raise ValueError(f"detection interval must be > 0, got {detection_interval}")
    tension, _ = fatigue_parameters(V_a, device.mechanics, device.geometry)
    sigma_alt = tension.sigma_alt_Pa

    state = DamageState.pristine()
    pristine_meas = run_pull_in_detection(state, device, params, detection_step_V)
    detections: list[tuple[int, float]] = [(0, pristine_meas)]
    outcome = OUTCOME_SURVIVED
    while state.cycles_applied < reference_cycles:
        batch = min(detection_interval, reference_cycles - state.cycles_applied)
        state = accumulate(state, sigma_alt, batch, params, specimen)
        v = run_pull_in_detection(state, device, params, detection_step_V)
        previous = detections[-1][1]
        detections.append((state.cycles_applied, v))
        if (state.failed or v <= (1.0 - drop_fraction) * previous
                or v < min_pullin_fraction * pristine_meas):
            outcome = OUTCOME_FAILED
            break
        if v <= V_a:
            outcome = OUTCOME_INVALID
            break
    return FatigueRunRecord(
        drive_amplitude_V=V_a,
        detections=tuple(detections),
        outcome=outcome,
        reference_cycles=reference_cycles,
    )


def run_stair_case(levels_V: list[float], step_V: float, start_level_V: float,
                   n_specimens: int, population: SpecimenPopulation,
                   device: Device, params: DamageModelParams,
                   **run_kwargs) -> tuple[StairCaseSequence, list[FatigueRunRecord]]:
    """Sequential stair-case campaign: down one step after a failure, up after
    a survival, clamped (and logged) at the ends of the level window.

    An invalid (displacement-imposed) run is counted as a failure for the
    level transition and logged; it cannot feed a stress-imposed comparison.
    """
    levels = sorted(float(v) for v in levels_V)
    if step_V <= 0:
        raise ValueError(f"step must be > 0, got {step_V}")
    if n_specimens < 1:
        raise ValueError(f"need at least one specimen, got {n_specimens}")
    if n_specimens > len(population.specimens):
        raise ValueError(
            f"population holds {len(population.specimens)} specimens, "
            f"{n_specimens} requested")
    if not any(math.isclose(start_level_V, v) for v in levels):
        raise ValueError(f"start level {start_level_V} V not among levels {levels}")

    level = float(start_level_V)
    trials: list[StairCaseTrial] = []
    records: list[FatigueRunRecord] = []
    for idx in range(n_specimens):
        record = run_fatigue_test(level, population.specimens[idx], device, params,
                                  **run_kwargs)
        records.append(record)
        if record.outcome == OUTCOME_INVALID:
            log.warning("specimen %d at %.3g V: displacement-imposed run counted "
                        "as failure for the level transition", idx, level)
        failure = record.outcome in (OUTCOME_FAILED, OUTCOME_INVALID)
        trials.append(StairCaseTrial(specimen_id=idx, level_V=level, failure=failure))
        nxt = level - step_V if failure else level + step_V
        if nxt < levels[0] - 1e-9:
            log.info("level clamped at the bottom of the window (%.3g V)", levels[0])
            nxt = levels[0]
        elif nxt > levels[-1] + 1e-9:
            log.info("level clamped at the top of the window (%.3g V)", levels[-1])
            nxt = levels[-1]
        level = nxt
    sequence = StairCaseSequence(trials=tuple(trials), step_V=step_V,
                                 levels_V=tuple(levels))
    return sequence, records


def calibrate_defaults(device: Device, target_V_D: float = 13.0,
                       target_immediate_V: float = 21.0,
                       detection_interval: int = DEFAULT_DETECTION_INTERVAL,
                       reference_cycles: int = DEFAULT_REFERENCE_CYCLES,
                       ) -> DamageModelParams:
    """Damage-model parameters pinned to the observed fatigue behaviour.

    The endurance stress is the amplitude at target_V_D, so that level
    sits exactly on the fatigue limit. The Basquin line is drawn through
    two anchors: life of 60% of the reference count one level step above
    the limit, and life of half a detection interval at the amplitude that
    collapses immediately.
    """
    pristine = pull_in_voltage_closed_form(device.mechanics, device.geometry).pull_in_voltage_V
    if not 0 < target_V_D < target_immediate_V:
        raise CalibrationError(
            f"need 0 < target_V_D < target_immediate, got {target_V_D}, {target_immediate_V}")
    if target_immediate_V >= pristine:
        raise CalibrationError(
            f"target_immediate {target_immediate_V} V must stay below pull-in {pristine:.3f} V")
    if target_V_D + 1.0 >= target_immediate_V:
        raise CalibrationError(
            f"target_V_D + 1 V ({target_V_D + 1.0}) must stay below target_immediate "
            f"({target_immediate_V}) for a well-posed Basquin slope")

    def sigma_alt(v):
        return fatigue_parameters(v, device.mechanics, device.geometry)[0].sigma_alt_Pa

    sigma_limit = sigma_alt(target_V_D)
    sigma_step = sigma_alt(target_V_D + 1.0)
    sigma_imm = sigma_alt(target_immediate_V)

    n_step = 0.6 * reference_cycles        # finite life one step above the limit
    n_imm = 0.5 * detection_interval       # collapse within the first interval
    b = math.log(sigma_imm / sigma_step) / math.log(n_imm / n_step)
    coefficient = sigma_step / n_step**b

    params = DamageModelParams(
        basquin_coefficient_Pa=coefficient,
        basquin_exponent=b,
        endurance_stress_Pa=sigma_limit,
    )
    # Sanity of the constructed line against the stated targets.
    if cycles_to_failure(sigma_step, params) is None or \
            cycles_to_failure(sigma_step, params) >= reference_cycles:
        raise CalibrationError(
            f"calibration violated N(sigma({target_V_D + 1.0} V)) < {reference_cycles}")
    if cycles_to_failure(sigma_imm, params) > detection_interval:
        raise CalibrationError(
            f"calibration violated N(sigma({target_immediate_V} V)) <= {detection_interval}")
    return params
