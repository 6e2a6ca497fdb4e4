"""Reduced-order electrostatic actuator physics.

Parallel-plate force balance, static deflection vs DC voltage, pull-in
instability (closed form and numerical voltage sweep), natural frequency
and the drive-voltage -> bending-stress conversion curve.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .device import DeviceGeometry, DerivedMechanics
from .errors import SolverError

EPSILON_0 = 8.854e-12  # F/m

# One third of the gap: the stability limit of the lumped parallel-plate model.
STABLE_FRACTION = 1.0 / 3.0


@dataclass(frozen=True)
class EquilibriumPoint:
    voltage_V: float
    deflection_m: float
    stress_Pa: float
    stable: bool


@dataclass(frozen=True)
class PullInResult:
    pull_in_voltage_V: float
    deflection_at_instability_m: float
    method: str  # "closed-form" | "sweep"


def electrostatic_force(V: float, x: float, mech: DerivedMechanics,
                        geom: DeviceGeometry) -> float:
    """Attractive parallel-plate force at voltage V and plate deflection x (m)."""
    g = geom.gap_m
    if not 0.0 <= x < g:
        raise ValueError(f"deflection {x} m outside [0, gap) with gap {g} m")
    return EPSILON_0 * mech.effective_area_m2 * V * V / (2.0 * (g - x) ** 2)


def _bending_stress(x: float, mech: DerivedMechanics, geom: DeviceGeometry) -> float:
    # Guided-cantilever surface stress at the clamped ends, 3*E*t*x/L^2,
    # written through the stored stiffness so the calibration factor cancels:
    # k = c_k*12*E*I/L^3  =>  3*E*t*x/L^2 = k*L*t*x / (4*I*c_k).
    k = mech.suspension_stiffness_N_m
    return (k * geom.specimen_length_m * geom.specimen_thickness_m * x
            / (4.0 * mech.area_moment_m4 * mech.stiffness_calibration))


def static_equilibrium(V: float, mech: DerivedMechanics,
                       geom: DeviceGeometry) -> EquilibriumPoint | None:
    """Stable static deflection under DC voltage V, or None at/above pull-in.

    Solves k*x*(g-x)^2 = eps0*A*V^2/2 for the root on the stable branch
    x < g/3 by bracketed root finding.
    """
    if V < 0:
        raise ValueError(f"voltage must be >= 0, got {V}")
    if V == 0.0:
        return EquilibriumPoint(0.0, 0.0, 0.0, stable=True)

    g = geom.gap_m
    k = mech.suspension_stiffness_N_m
    drive = EPSILON_0 * mech.effective_area_m2 * V * V / 2.0
    x_limit = g * STABLE_FRACTION
    capacity = k * x_limit * (g - x_limit) ** 2  # = 4*k*g^3/27
    if drive >= capacity:
        return None  # pull-in: no stable equilibrium exists

    def residual(x: float) -> float:
        return k * x * (g - x) ** 2 - drive

    try:
        x = brentq(residual, 0.0, x_limit, xtol=g * 1e-15, rtol=1e-13, maxiter=200)
    except RuntimeError as exc:  # pragma: no cover - brentq converges for this bracket
        raise SolverError(f"static equilibrium solve failed at V={V}: {exc}") from exc
    return EquilibriumPoint(V, x, _bending_stress(x, mech, geom), stable=True)


def _equilibrium_exists(V: float, mech: DerivedMechanics, geom: DeviceGeometry) -> bool:
    # A stable root exists iff the drive term stays below the restoring-force
    # capacity at the stability bound x = g/3; cheap check used by the sweep.
    g = geom.gap_m
    x_limit = g * STABLE_FRACTION
    capacity = mech.suspension_stiffness_N_m * x_limit * (g - x_limit) ** 2
    return EPSILON_0 * mech.effective_area_m2 * V * V / 2.0 < capacity


def pull_in_voltage_closed_form(mech: DerivedMechanics, geom: DeviceGeometry) -> PullInResult:
    g = geom.gap_m
    v = math.sqrt(8.0 * mech.suspension_stiffness_N_m * g**3
                  / (27.0 * EPSILON_0 * mech.effective_area_m2))
    return PullInResult(v, g * STABLE_FRACTION, method="closed-form")


def pull_in_voltage_sweep(mech: DerivedMechanics, geom: DeviceGeometry,
                          step_V: float = 0.05, tol_V: float = 1e-3,
                          max_steps: int = 2_000_000) -> PullInResult:
    """Pull-in found by stepping the DC voltage until equilibrium is lost.

    The last step bracket [V-step, V] is bisected down to tol_V, mimicking
    a step-by-step DC supply.
    """
    if step_V <= 0:
        raise ValueError(f"sweep step must be > 0, got {step_V}")
    v = step_V
    steps = 0
    while _equilibrium_exists(v, mech, geom):
        v += step_V
        steps += 1
        if steps > max_steps:
            raise SolverError(f"pull-in sweep exceeded {max_steps} steps at {v} V")
    lo, hi = max(v - step_V, 0.0), v
    while hi - lo > tol_V:
        mid = 0.5 * (lo + hi)
        if _equilibrium_exists(mid, mech, geom):
            lo = mid
        else:
            hi = mid
    detected = 0.5 * (lo + hi)
    # The deflection approaches its instability value like sqrt(V_PI - V),
    # so the voltage bracket is refined further before reading it off.
    while hi - lo > 1e-8 * hi:
        mid = 0.5 * (lo + hi)
        if _equilibrium_exists(mid, mech, geom):
            lo = mid
        else:
            hi = mid
    eq = static_equilibrium(lo, mech, geom)
    deflection = eq.deflection_m if eq is not None else geom.gap_m * STABLE_FRACTION
    return PullInResult(detected, deflection, method="sweep")


def pull_in_voltage(mech: DerivedMechanics, geom: DeviceGeometry,
                    method: str = "closed-form", step_V: float = 0.05) -> PullInResult:
    if method == "closed-form":
        return pull_in_voltage_closed_form(mech, geom)
    if method == "sweep":
        return pull_in_voltage_sweep(mech, geom, step_V=step_V)
    raise ValueError(f"unknown pull-in method {method!r}")


def natural_frequency(mech: DerivedMechanics) -> float:
    """Lumped natural frequency (1/2pi)*sqrt(k/m) in Hz."""
    return math.sqrt(mech.suspension_stiffness_N_m / mech.plate_mass_kg) / (2.0 * math.pi)


def stress_conversion_curve(mech: DerivedMechanics, geom: DeviceGeometry,
                            V_max: float, n_points: int = 50) -> list[EquilibriumPoint]:
    """Tabulate the static (voltage, deflection, stress) curve over [0, V_max]."""
    if n_points < 2:
        raise ValueError(f"need at least 2 points, got {n_points}")
    v_pi = pull_in_voltage_closed_form(mech, geom).pull_in_voltage_V
    if V_max >= v_pi:
        raise ValueError(f"V_max {V_max} V must stay below pull-in {v_pi:.3f} V")
    points = []
    for v in np.linspace(0.0, V_max, n_points):
        eq = static_equilibrium(float(v), mech, geom)
        if eq is None:  # pragma: no cover - excluded by the V_max guard
            raise SolverError(f"unexpected pull-in at {v} V below V_max")
        points.append(eq)
    return points
