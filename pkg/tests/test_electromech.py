import dataclasses
import math
import time

import numpy as np
import pytest

from microfatigue.device import Device, DeviceGeometry, Material, derive_mechanics
from microfatigue.electromech import (EPSILON_0, electrostatic_force,
                                      natural_frequency,
                                      pull_in_voltage_closed_form,
                                      pull_in_voltage_sweep, static_equilibrium,
                                      stress_conversion_curve)


def bisect_equilibrium(V, mech, geom, iters=200):
    """Independent oracle: plain bisection of k*x*(g-x)^2 = eps0*A*V^2/2."""
    g = geom.gap_m
    k = mech.suspension_stiffness_N_m
    c = EPSILON_0 * mech.effective_area_m2 * V * V / 2.0
    lo, hi = 0.0, g / 3.0
    if k * hi * (g - hi) ** 2 < c:
        return None
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if k * mid * (g - mid) ** 2 < c:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_force_zero_voltage(nominal_device):
    d = nominal_device
    assert electrostatic_force(0.0, 1e-6, d.mechanics, d.geometry) == 0.0


def test_force_quadratic_in_voltage(nominal_device):
    d = nominal_device
    f1 = electrostatic_force(1.0, 0.5e-6, d.mechanics, d.geometry)
    f2 = electrostatic_force(2.0, 0.5e-6, d.mechanics, d.geometry)
    assert f2 == pytest.approx(4.0 * f1, rel=1e-12)


def test_force_value_at_13V(nominal_device):
    # eps0 * A_eff * 13^2 / (2 g^2), evaluated independently
    d = nominal_device
    expected = 8.854e-12 * 5.96e-8 * 169.0 / (2.0 * (3e-6) ** 2)
    assert electrostatic_force(13.0, 0.0, d.mechanics, d.geometry) == \
        pytest.approx(expected, rel=1e-12)


def test_force_increases_with_deflection(nominal_device):
    d = nominal_device
    xs = np.linspace(0.0, 0.9 * d.geometry.gap_m, 30)
    forces = [electrostatic_force(5.0, x, d.mechanics, d.geometry) for x in xs]
    assert all(b > a for a, b in zip(forces, forces[1:]))


def test_force_rejects_contact(nominal_device):
    d = nominal_device
    with pytest.raises(ValueError):
        electrostatic_force(5.0, d.geometry.gap_m, d.mechanics, d.geometry)


def test_equilibrium_zero_voltage(nominal_device):
    eq = static_equilibrium(0.0, nominal_device.mechanics, nominal_device.geometry)
    assert eq.deflection_m == 0.0 and eq.stress_Pa == 0.0 and eq.stable


def test_equilibrium_13V_matches_oracle(nominal_device):
    d = nominal_device
    eq = static_equilibrium(13.0, d.mechanics, d.geometry)
    oracle_x = bisect_equilibrium(13.0, d.mechanics, d.geometry)
    assert eq.deflection_m == pytest.approx(oracle_x, rel=1e-9)
    # frozen oracle values: x ~ 0.117 um, sigma ~ 25 MPa
    assert eq.deflection_m == pytest.approx(0.1167e-6, rel=2e-3)
    assert eq.stress_Pa == pytest.approx(24.8e6, rel=1e-2)


def test_equilibrium_residual_bound(nominal_device):
    d = nominal_device
    k = d.mechanics.suspension_stiffness_N_m
    g = d.geometry.gap_m
    for v in np.linspace(1.0, 25.0, 25):
        eq = static_equilibrium(float(v), d.mechanics, d.geometry)
        f = electrostatic_force(float(v), eq.deflection_m, d.mechanics, d.geometry)
        assert abs(k * eq.deflection_m - f) / (k * g) < 1e-9


def test_equilibrium_above_pull_in(nominal_device):
    d = nominal_device
    v_pi = pull_in_voltage_closed_form(d.mechanics, d.geometry).pull_in_voltage_V
    assert static_equilibrium(1.01 * v_pi, d.mechanics, d.geometry) is None


def test_stable_branch_monotone_below_third_gap(nominal_device):
    d = nominal_device
    v_pi = pull_in_voltage_closed_form(d.mechanics, d.geometry).pull_in_voltage_V
    xs = [static_equilibrium(float(v), d.mechanics, d.geometry).deflection_m
          for v in np.linspace(0.0, 0.999 * v_pi, 40)]
    assert all(b > a for a, b in zip(xs, xs[1:]))
    assert xs[-1] < d.geometry.gap_m / 3.0


def test_small_rotation_at_13V(nominal_device):
    d = nominal_device
    eq = static_equilibrium(13.0, d.mechanics, d.geometry)
    rotation_deg = math.degrees(math.atan(2 * eq.deflection_m / d.geometry.specimen_length_m))
    assert rotation_deg < 1.0


def test_pull_in_closed_form_nominal(nominal_device):
    d = nominal_device
    res = pull_in_voltage_closed_form(d.mechanics, d.geometry)
    # frozen hand evaluation of sqrt(8 k g^3 / (27 eps0 A_eff))
    assert res.pull_in_voltage_V == pytest.approx(26.395, abs=5e-3)
    assert res.deflection_at_instability_m == pytest.approx(d.geometry.gap_m / 3.0)


def test_pull_in_gap_scaling(nominal_device):
    d = nominal_device
    doubled = dataclasses.replace(d.geometry, gap_um=2 * d.geometry.gap_um)
    base = pull_in_voltage_closed_form(d.mechanics, d.geometry).pull_in_voltage_V
    big = pull_in_voltage_closed_form(d.mechanics, doubled).pull_in_voltage_V
    assert big == pytest.approx(2**1.5 * base, rel=1e-12)


def test_pull_in_stiffness_scaling():
    base_mech = derive_mechanics(DeviceGeometry(), Material(), c_k=1.0)
    stiff_mech = derive_mechanics(DeviceGeometry(), Material(), c_k=2.0)
    geom = DeviceGeometry()
    v1 = pull_in_voltage_closed_form(base_mech, geom).pull_in_voltage_V
    v2 = pull_in_voltage_closed_form(stiff_mech, geom).pull_in_voltage_V
    assert v2 == pytest.approx(math.sqrt(2) * v1, rel=1e-12)


def test_sweep_matches_closed_form_nominal(nominal_device):
    d = nominal_device
    closed = pull_in_voltage_closed_form(d.mechanics, d.geometry)
    sweep = pull_in_voltage_sweep(d.mechanics, d.geometry)
    assert abs(sweep.pull_in_voltage_V - closed.pull_in_voltage_V) < 1e-2
    assert sweep.deflection_at_instability_m == pytest.approx(
        d.geometry.gap_m / 3.0, rel=0.01)


def random_device(rng):
    geom = DeviceGeometry(
        specimen_length_um=float(rng.uniform(25, 100)),
        specimen_width_um=float(rng.uniform(5, 20)),
        specimen_thickness_um=float(rng.uniform(1.0, 3.6)),
        plate_length_um=float(rng.uniform(200, 800)),
        plate_width_um=float(rng.uniform(90, 360)),
        plate_thickness_um=float(rng.uniform(2.4, 9.6)),
        gap_um=float(rng.uniform(1.5, 6.0)),
        hole_side_um=20.0,
        hole_count=int(rng.integers(0, 41)),
    )
    mat = Material.from_paper_units(E_GPa=float(rng.uniform(50, 200)))
    return Device.assemble(geom, mat)


def test_sweep_matches_closed_form_randomized():
    rng = np.random.default_rng(1234)
    start = time.perf_counter()
    for _ in range(100):
        d = random_device(rng)
        closed = pull_in_voltage_closed_form(d.mechanics, d.geometry)
        sweep = pull_in_voltage_sweep(d.mechanics, d.geometry)
        assert abs(sweep.pull_in_voltage_V - closed.pull_in_voltage_V) < 1e-2
        assert sweep.deflection_at_instability_m == pytest.approx(
            d.geometry.gap_m / 3.0, rel=0.01)
    assert time.perf_counter() - start < 10.0


def test_natural_frequency_nominal(nominal_device):
    assert natural_frequency(nominal_device.mechanics) == pytest.approx(14.5e3, rel=0.01)


def test_natural_frequency_resonance_preset():
    mech = Device.nominal(c_k=3.7).mechanics
    assert natural_frequency(mech) == pytest.approx(28e3, rel=0.05)


def test_natural_frequency_stiffness_scaling():
    f1 = natural_frequency(derive_mechanics(DeviceGeometry(), Material(), c_k=1.0))
    f4 = natural_frequency(derive_mechanics(DeviceGeometry(), Material(), c_k=4.0))
    assert f4 == pytest.approx(2 * f1, rel=1e-12)


def test_conversion_curve(nominal_device):
    d = nominal_device
    points = stress_conversion_curve(d.mechanics, d.geometry, V_max=20.0, n_points=41)
    assert points[0].voltage_V == 0.0 and points[0].stress_Pa == 0.0
    stresses = [p.stress_Pa for p in points]
    assert all(b > a for a, b in zip(stresses, stresses[1:]))
    # super-linear: stress grows faster than voltage
    v13 = [p for p in points if p.voltage_V == pytest.approx(13.0)][0]
    assert v13.stress_Pa == pytest.approx(24.8e6, rel=1e-2)
    mid, last = points[len(points) // 2], points[-1]
    assert last.stress_Pa / mid.stress_Pa > last.voltage_V / mid.voltage_V


def test_conversion_curve_rejects_vmax_above_pull_in(nominal_device):
    d = nominal_device
    with pytest.raises(ValueError):
        stress_conversion_curve(d.mechanics, d.geometry, V_max=30.0)
