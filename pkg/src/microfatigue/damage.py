"""Cumulative damage model and its mapping to degraded pull-in voltage.

A Basquin power law gives cycles to failure at each stress amplitude;
linear (Miner) accumulation evolves a scalar damage D in [0, 1]. The
degraded pull-in voltage declines slowly with D, shows a work-hardening
bump before the end and collapses at the failure threshold. Below the
endurance stress no damage accrues at all, which is what makes the
pull-in-only control test non-damaging.

Damage is stored as an exact Fraction so that accumulating a batch of
cycles in several calls is bit-identical to accumulating it in one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction

from .device import DeviceGeometry, DerivedMechanics
from .electromech import pull_in_voltage_closed_form


@dataclass(frozen=True)
class DamageModelParams:
    basquin_coefficient_Pa: float   # stress amplitude at N = 1
    basquin_exponent: float         # negative slope in log-log space
    endurance_stress_Pa: float      # no damage at or below this amplitude
    hardening_amplitude: float = 0.3
    hardening_onset: float = 0.7
    collapse_threshold: float = 1.0
    softening_exponent: float = 0.2

    def __post_init__(self):
        if self.basquin_coefficient_Pa <= 0:
            raise ValueError(f"basquin_coefficient_Pa must be > 0, got {self.basquin_coefficient_Pa}")
        if self.basquin_exponent >= 0:
            raise ValueError(f"basquin_exponent must be < 0, got {self.basquin_exponent}")
        if self.endurance_stress_Pa < 0:
            raise ValueError(f"endurance_stress_Pa must be >= 0, got {self.endurance_stress_Pa}")
        if self.hardening_amplitude < 0:
            raise ValueError(f"hardening_amplitude must be >= 0, got {self.hardening_amplitude}")
        if not 0.0 < self.hardening_onset < self.collapse_threshold <= 1.0:
            raise ValueError(
                f"need 0 < hardening_onset < collapse_threshold <= 1, "
                f"got {self.hardening_onset}, {self.collapse_threshold}")
        if self.softening_exponent <= 0:
            raise ValueError(f"softening_exponent must be > 0, got {self.softening_exponent}")


@dataclass(frozen=True)
class SpecimenStrength:
    """Per-specimen scatter: a multiplier on the endurance and Basquin stresses."""

    strength_scale: float = 1.0

    def __post_init__(self):
        if self.strength_scale <= 0:
            raise ValueError(f"strength_scale must be > 0, got {self.strength_scale}")


@dataclass(frozen=True)
class DamageState:
    damage: Fraction
    cycles_applied: int
    hardened: bool
    failed: bool

    @classmethod
    def pristine(cls) -> "DamageState":
        return cls(damage=Fraction(0), cycles_applied=0, hardened=False, failed=False)


UNBOUNDED = None  # marker returned by cycles_to_failure below the endurance


def cycles_to_failure(sigma_alt_Pa: float, params: DamageModelParams,
                      specimen: SpecimenStrength = SpecimenStrength()) -> int | None:
    """Basquin life at stress amplitude sigma_alt, or None below the endurance."""
    if sigma_alt_Pa < 0:
        raise ValueError(f"stress amplitude must be >= 0, got {sigma_alt_Pa}")
    s = specimen.strength_scale
    if sigma_alt_Pa <= s * params.endurance_stress_Pa:
        return UNBOUNDED
    n = (sigma_alt_Pa / (s * params.basquin_coefficient_Pa)) ** (1.0 / params.basquin_exponent)
    return max(1, round(n))


def accumulate(state: DamageState, sigma_alt_Pa: float, delta_cycles: int,
               params: DamageModelParams,
               specimen: SpecimenStrength = SpecimenStrength()) -> DamageState:
    """Apply delta_cycles load cycles at amplitude sigma_alt (Miner's rule)."""
    delta_cycles = int(delta_cycles)
    if delta_cycles < 0:
        raise ValueError(f"cycle increment must be >= 0, got {delta_cycles}")
    life = cycles_to_failure(sigma_alt_Pa, params, specimen)
    cycles = state.cycles_applied + delta_cycles
    if life is UNBOUNDED or delta_cycles == 0:
        return replace(state, cycles_applied=cycles)
    damage = min(state.damage + Fraction(delta_cycles, life), Fraction(1))
    return DamageState(
        damage=damage,
        cycles_applied=cycles,
        hardened=state.hardened or damage >= Fraction(params.hardening_onset),
        failed=state.failed or damage >= Fraction(params.collapse_threshold),
    )


def _hardening_bump(d: float, params: DamageModelParams) -> float:
    # Unit-height smooth peak centred between onset and collapse.
    if d <= params.hardening_onset or d >= params.collapse_threshold:
        return 0.0
    u = (d - params.hardening_onset) / (params.collapse_threshold - params.hardening_onset)
    return math.sin(math.pi * u) ** 2


def effective_stiffness_factor(d: float, params: DamageModelParams) -> float:
    """k_eff/k at damage level d: power-law softening times the hardening bump."""
    d = min(max(d, 0.0), 1.0)
    return (1.0 - d) ** params.softening_exponent * (
        1.0 + params.hardening_amplitude * _hardening_bump(d, params))


def degraded_pull_in(state: DamageState, mech: DerivedMechanics,
                     geom: DeviceGeometry, params: DamageModelParams) -> float:
    """Pull-in voltage of the damaged device, V_PI(0)*sqrt(k_eff/k)."""
    pristine = pull_in_voltage_closed_form(mech, geom).pull_in_voltage_V
    return pristine * math.sqrt(effective_stiffness_factor(float(state.damage), params))
