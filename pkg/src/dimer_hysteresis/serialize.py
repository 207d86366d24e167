"""CSV and JSON writers for trajectories, diagrams, and sweep reports.

Floats are written with %.15g so that parse(serialize(x)) returns x
bitwise for doubles, and serialize(parse(text)) == text. Angles are
wrapped into (-pi, pi] at serialization time only; in-memory states
keep whatever winding the integrator produced.
"""

from __future__ import annotations

import io
import json

from .errors import DomainError
from .model import (EtaSchedule, ModelParams, PhaseState, Sample, Trajectory,
                    wrap_angle)

TRAJECTORY_HEADER = "tau,eta,z,theta,H,E"
BRANCH_HEADER = "branch_id,kind,theta_star,eta,z_star,stability"


def _f(v: float) -> str:
    return "%.15g" % v


def trajectory_to_csv(traj: Trajectory) -> str:
    out = io.StringIO()
    out.write(TRAJECTORY_HEADER + "\n")
    for s in traj.samples:
        row = (s.tau, s.eta, s.z, wrap_angle(s.theta), s.H, s.E)
        out.write(",".join(_f(v) for v in row) + "\n")
    return out.getvalue()


def trajectory_from_csv(text: str, params: ModelParams,
                        schedule: EtaSchedule) -> Trajectory:
    """Rebuild a Trajectory from its CSV form.

    params and schedule are not stored in the CSV; the caller supplies
    the ones the run used.
    """
    lines = text.strip().split("\n")
    if not lines or lines[0] != TRAJECTORY_HEADER:
        raise DomainError(f"expected header {TRAJECTORY_HEADER!r}")
    samples = []
    for ln in lines[1:]:
        cols = ln.split(",")
        if len(cols) != 6:
            raise DomainError(f"expected 6 columns, got {len(cols)}: {ln!r}")
        tau, eta, z, theta, H, E = (float(c) for c in cols)
        samples.append(Sample(tau=tau, z=z, theta=theta, eta=eta, H=H, E=E))
    return Trajectory(samples=tuple(samples), params=params,
                      schedule=schedule)


def diagram_to_csv(diagram) -> str:
    out = io.StringIO()
    out.write(BRANCH_HEADER + "\n")
    for branch in diagram.branches:
        for p in branch.points:
            out.write(",".join((
                str(branch.branch_id), branch.kind, _f(branch.theta_star),
                _f(p.eta), _f(p.z_star), p.stability)) + "\n")
    return out.getvalue()


def _schedule_dict(schedule: EtaSchedule) -> dict:
    d = {"kind": schedule.kind, "eta_start": schedule.eta_start,
         "T": schedule.T}
    if schedule.eta_peak is not None:
        d["eta_peak"] = schedule.eta_peak
    if schedule.knots is not None:
        d["knots"] = [list(k) for k in schedule.knots]
    return d


def run_metadata(params: ModelParams, schedule=None, config=None,
                 effective: dict | None = None) -> dict:
    """Run-settings block embedded in every JSON output."""
    meta = {"params": {"r": params.r, "nu": params.nu,
                       "rhs_mode": params.rhs_mode}}
    if schedule is not None:
        meta["schedule"] = _schedule_dict(schedule)
    if config is not None:
        meta["integrator"] = {
            "method": config.method, "dt": config.dt,
            "abs_tol": config.abs_tol, "rel_tol": config.rel_tol,
            "sample_stride": config.sample_stride,
        }
    meta["effective_config"] = dict(effective or {})
    return meta


def diagram_to_json(diagram, effective: dict | None = None) -> str:
    branches = []
    for branch in diagram.branches:
        branches.append({
            "branch_id": branch.branch_id,
            "kind": branch.kind,
            "theta_star": branch.theta_star,
            "points": [{"eta": p.eta, "z_star": p.z_star,
                        "stability": p.stability,
                        "eigenvalues": [[ev.real, ev.imag]
                                        for ev in p.eigenvalues]}
                       for p in branch.points],
        })
    doc = {
        "r": diagram.r,
        "eta_star": diagram.eta_star,
        "eta_plus": diagram.eta_plus,
        "classification": diagram.classification,
        "branches": branches,
        "effective_config": dict(effective or {}),
    }
    return json.dumps(doc, indent=2) + "\n"


def report_to_json(report, effective: dict | None = None) -> str:
    doc = {
        "r": report.r,
        "nu": report.nu,
        "detected": report.detected,
        "loop_area": report.loop_area,
        "bistable_area": report.bistable_area,
        "window": list(report.window) if report.window else None,
        "reference": report.reference,
        "forward_trace": [list(p) for p in report.forward_trace],
        "backward_trace": [list(p) for p in report.backward_trace],
        "effective_config": dict(effective or {}),
    }
    return json.dumps(doc, indent=2) + "\n"


def threshold_to_json(r_threshold: float,
                      effective: dict | None = None) -> str:
    doc = {
        "r_threshold": r_threshold,
        "effective_config": dict(effective or {}),
    }
    return json.dumps(doc, indent=2) + "\n"
