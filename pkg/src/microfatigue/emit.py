"""Deterministic serialization of results: CSV curve/run artifacts and JSON
summaries. All numeric output uses locale-independent 6-significant-digit
formatting so repeated emission is byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import asdict

from .electromech import EquilibriumPoint
from .protocols import FatigueRunRecord, StairCaseSequence
from .stats import BasquinFit, StairCaseEstimate, WohlerPoint

TOOL_STAMP = "microfatigue 0.1.0"


def _num(x: float) -> str:
    return f"{x:.6g}"


def emit_fatigue_run(record: FatigueRunRecord) -> str:
    lines = [
        f"# drive_amplitude_V={_num(record.drive_amplitude_V)} "
        f"outcome={record.outcome} reference_cycles={record.reference_cycles}",
        "load_cycles,pullin_V",
    ]
    for cycles, v in record.detections:
        lines.append(f"{cycles},{_num(v)}")
    return "\n".join(lines) + "\n"


def parse_fatigue_run(text: str) -> FatigueRunRecord:
    """Inverse of emit_fatigue_run at the emitted precision."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = lines[0]
    if not header.startswith("# "):
        raise ValueError("missing comment header line")
    meta = dict(item.split("=", 1) for item in header[2:].split())
    if lines[1] != "load_cycles,pullin_V":
        raise ValueError(f"unexpected column header {lines[1]!r}")
    detections = []
    for line in lines[2:]:
        cycles, v = line.split(",")
        detections.append((int(cycles), float(v)))
    return FatigueRunRecord(
        drive_amplitude_V=float(meta["drive_amplitude_V"]),
        detections=tuple(detections),
        outcome=meta["outcome"],
        reference_cycles=int(meta["reference_cycles"]),
    )


def emit_conversion_curve(points: list[EquilibriumPoint]) -> str:
    lines = ["voltage_V,deflection_um,stress_MPa"]
    for p in points:
        lines.append(f"{_num(p.voltage_V)},{_num(p.deflection_m * 1e6)},{_num(p.stress_Pa * 1e-6)}")
    return "\n".join(lines) + "\n"


def emit_staircase_sequence(seq: StairCaseSequence) -> str:
    lines = [
        f"# step_V={_num(seq.step_V)} levels_V={';'.join(_num(v) for v in seq.levels_V)}",
        "specimen_id,level_V,outcome",
    ]
    for t in seq.trials:
        lines.append(f"{t.specimen_id},{_num(t.level_V)},{1 if t.failure else 0}")
    return "\n".join(lines) + "\n"


def emit_wohler_points(points: list[WohlerPoint]) -> str:
    lines = ["level_V,cycles,censored"]
    for p in points:
        lines.append(f"{_num(p.level_V)},{p.cycles},{1 if p.censored else 0}")
    return "\n".join(lines) + "\n"


def parse_wohler_points(text: str) -> list[WohlerPoint]:
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if lines and lines[0] == "level_V,cycles,censored":
        lines = lines[1:]
    points = []
    for line in lines:
        level, cycles, censored = line.split(",")
        points.append(WohlerPoint(level_V=float(level), cycles=int(cycles),
                                  censored=bool(int(censored))))
    return points


def estimate_to_dict(est: StairCaseEstimate) -> dict:
    return {
        "mean_V": est.mean_V,
        "std_V": est.std_V,
        "q10_V": est.quantile_10_V,
        "q90_V": est.quantile_90_V,
        "basis_event": est.basis_event,
        "dispersion_valid": est.dispersion_formula_valid,
    }


def fit_to_dict(fit: BasquinFit) -> dict:
    return asdict(fit)


def dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def wohler_points_from_records(records: list[FatigueRunRecord]) -> list[WohlerPoint]:
    """S-N points from fatigue runs: failures carry their failure cycle count,
    survivors the reference count as censored run-outs; invalid runs are dropped.
    """
    points = []
    for r in records:
        if r.outcome == "failed":
            points.append(WohlerPoint(level_V=r.drive_amplitude_V,
                                      cycles=r.detections[-1][0], censored=False))
        elif r.outcome == "survived":
            points.append(WohlerPoint(level_V=r.drive_amplitude_V,
                                      cycles=r.reference_cycles, censored=True))
    return points
