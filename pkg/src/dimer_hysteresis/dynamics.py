"""Time integration of the damped two-mode equations of motion.

    dz/dtau     = -dH/dtheta + nu * dH/dz
    dtheta/dtau =  dH/dz

The nu term models incoherent population exchange. With this sign
convention dH/dtau = nu * (dH/dz)^2 >= 0, so H relaxes monotonically
onto the interior maximum that hosts the stable stationary states and
the physical energy E = Omega - omega H / 2 decreases. (The opposite
sign turns every stable center into a repeller and drives |z| -> 1;
rhs_mode="as_printed" keeps a legacy variant of that form around for
comparison runs.)

Two steppers are provided: an embedded Fehlberg 4(5) pair with
error-per-unit-step control (default; the per-unit control is what keeps
the H drift below 1e-8 over tau spans of 10^3), and a fixed-step
classical RK4 for reproducibility studies.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, SingularityError, StepFailureError
from .model import (
    EPS_CLAMP,
    EtaSchedule,
    ModelParams,
    PhaseState,
    PhysicalContext,
    Sample,
    Trajectory,
    energy_functional,
    eval_schedule,
    hamiltonian,
)

METHODS = ("rk45_adaptive", "rk4_fixed")


@dataclass(frozen=True)
class IntegratorConfig:
    """Stepper selection and control knobs.

    dt is the fixed step for rk4_fixed and the initial step for
    rk45_adaptive. sample_stride is the number of output samples per
    unit tau. clamp_limit bounds how many boundary clamps are tolerated
    before the run is declared singular.
    """

    method: str = "rk45_adaptive"
    dt: float = 1e-3
    abs_tol: float = 1e-9
    rel_tol: float = 1e-9
    sample_stride: int = 1
    clamp_limit: int = 100
    min_step: float = 1e-13

    def __post_init__(self):
        if self.method not in METHODS:
            raise DomainError(f"method must be one of {METHODS}, got {self.method!r}")
        if not self.dt > 0:
            raise DomainError(f"dt must be > 0, got {self.dt}")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise DomainError("tolerances must be > 0")
        if self.sample_stride < 1:
            raise DomainError(f"sample_stride must be >= 1, got {self.sample_stride}")
        if not self.min_step > 0:
            raise DomainError(f"min_step must be > 0, got {self.min_step}")


def make_field(params: ModelParams):
    """Closure (z, theta, eta) -> (dz, dtheta) for the configured rhs_mode.

    Kept free of any state boxing; this is the integrator hot path.
    """
    r, nu = params.r, params.nu
    two_r = 2.0 ** r
    printed = params.rhs_mode == "as_printed"

    def field(z, theta, eta):
        s = math.sqrt(1.0 - z * z)
        a = abs(z)
        if a == 0.0:
            diff = 0.0
        else:
            # stable (1+z)^r - (1-z)^r, see model.power_difference
            diff = math.exp(r * math.log1p(-a)) * math.expm1(2.0 * r * math.atanh(a))
            if z < 0:
                diff = -diff
        gz = -2.0 * z * math.cos(theta) / s - eta / two_r * diff
        if printed:
            return -s * math.sin(theta) - nu * gz, gz
        return 2.0 * s * math.sin(theta) + nu * gz, gz

    return field


def vector_field(state: PhaseState, eta: float, params: ModelParams) -> tuple:
    """(dz/dtau, dtheta/dtau) at one state."""
    if abs(state.z) >= 1.0 - EPS_CLAMP:
        raise SingularityError(f"vector field singular near |z|=1; got z={state.z}")
    return make_field(params)(state.z, state.theta, eta)


# Fehlberg 4(5) tableau. The 5th-order solution is propagated; the
# e-coefficients give the embedded 4th/5th difference directly.
_C2, _C3, _C4, _C6 = 0.25, 0.375, 12.0 / 13.0, 0.5
_A21 = 0.25
_A31, _A32 = 3.0 / 32.0, 9.0 / 32.0
_A41, _A42, _A43 = 1932.0 / 2197.0, -7200.0 / 2197.0, 7296.0 / 2197.0
_A51, _A52, _A53, _A54 = 439.0 / 216.0, -8.0, 3680.0 / 513.0, -845.0 / 4104.0
_A61, _A62, _A63, _A64, _A65 = (-8.0 / 27.0, 2.0, -3544.0 / 2565.0,
                                1859.0 / 4104.0, -11.0 / 40.0)
_B1, _B3, _B4, _B5, _B6 = (16.0 / 135.0, 6656.0 / 12825.0, 28561.0 / 56430.0,
                           -9.0 / 50.0, 2.0 / 55.0)
_E1, _E3, _E4, _E5, _E6 = (1.0 / 360.0, -128.0 / 4275.0, -2197.0 / 75240.0,
                           1.0 / 50.0, 2.0 / 55.0)


def integrate(initial: PhaseState, params: ModelParams, schedule: EtaSchedule,
              config: IntegratorConfig, tau_span: tuple,
              ctx: PhysicalContext = PhysicalContext()) -> Trajectory:
    """Integrate from tau_span[0] to tau_span[1], sampling on a uniform grid.

    Samples are emitted at tau_span[0], every 1/sample_stride thereafter,
    and at the final time. Each sample records eta(tau), H and
    E = energy_functional(H, ctx); ctx defaults to omega=1, Omega=0 so the
    E column is -H/2 unless a physical context is supplied.

    Deterministic: identical inputs give bit-identical trajectories.
    """
    t0, t1 = tau_span
    slack = 1e-9 * max(1.0, schedule.T)
    if not (t0 >= -slack and t1 <= schedule.T + slack and t0 < t1):
        raise DomainError(
            f"tau_span {tau_span} must be increasing and inside [0, {schedule.T}]")

    field = make_field(params)
    zmax = 1.0 - EPS_CLAMP
    if abs(initial.z) > zmax:
        raise SingularityError(f"initial z={initial.z} within EPS_CLAMP of |z|=1")

    # stage times hit eta(t) six times per step; specialize the two
    # closed-form schedule kinds instead of going through eval_schedule
    if schedule.kind == "constant":
        e0 = schedule.eta_start

        def eta_at(t):
            return e0
    elif schedule.kind == "triangular":
        e0, T_s = schedule.eta_start, schedule.T
        half = 0.5 * T_s
        rate = (schedule.eta_peak - e0) / half

        def eta_at(t):
            x = t if t <= half else T_s - t
            return e0 + rate * (x if x > 0.0 else 0.0)
    else:
        def eta_at(t):
            return eval_schedule(schedule, t)

    stride = config.sample_stride
    sample_dt = 1.0 / stride

    def emit(samples, t, z, theta):
        eta = eval_schedule(schedule, t)
        H = hamiltonian(PhaseState(z=min(max(z, -1.0), 1.0), theta=theta), eta, params.r)
        samples.append(Sample(t, z, theta, eta, H, energy_functional(H, ctx)))

    samples = []
    z, theta = initial.z, initial.theta
    emit(samples, t0, z, theta)
    clamp_events = 0

    if config.method == "rk4_fixed":
        t = t0
        t_next = min(t0 + sample_dt, t1)
        while t < t1 - 1e-12:
            h = min(config.dt, t_next - t)
            k1z, k1t = field(z, theta, eta_at(t))
            k2z, k2t = field(z + 0.5 * h * k1z, theta + 0.5 * h * k1t,
                             eta_at(t + 0.5 * h))
            k3z, k3t = field(z + 0.5 * h * k2z, theta + 0.5 * h * k2t,
                             eta_at(t + 0.5 * h))
            k4z, k4t = field(z + h * k3z, theta + h * k3t,
                             eta_at(t + h))
            z += h / 6.0 * (k1z + 2.0 * k2z + 2.0 * k3z + k4z)
            theta += h / 6.0 * (k1t + 2.0 * k2t + 2.0 * k3t + k4t)
            if abs(z) > zmax:
                z = math.copysign(zmax, z)
                clamp_events += 1
                if clamp_events > config.clamp_limit:
                    raise SingularityError(
                        f"clamped at |z|=1 more than {config.clamp_limit} times")
            t += h
            if t >= t_next - 1e-12:
                emit(samples, t, z, theta)
                t_next = min(t_next + sample_dt, t1)
        return Trajectory(tuple(samples), params, schedule, clamp_events)

    # rk45_adaptive with error-per-unit-step acceptance
    t = t0
    h = min(config.dt, sample_dt)
    t_next = min(t0 + sample_dt, t1)
    while t < t1 - 1e-12:
        if h > t_next - t:
            h = t_next - t
        boundary = False
        k1z, k1t = field(z, theta, eta_at(t))
        za = z + h * _A21 * k1z
        ta = theta + h * _A21 * k1t
        if abs(za) > zmax:
            boundary = True
        if not boundary:
            k2z, k2t = field(za, ta, eta_at(t + _C2 * h))
            za = z + h * (_A31 * k1z + _A32 * k2z)
            ta = theta + h * (_A31 * k1t + _A32 * k2t)
            if abs(za) > zmax:
                boundary = True
        if not boundary:
            k3z, k3t = field(za, ta, eta_at(t + _C3 * h))
            za = z + h * (_A41 * k1z + _A42 * k2z + _A43 * k3z)
            ta = theta + h * (_A41 * k1t + _A42 * k2t + _A43 * k3t)
            if abs(za) > zmax:
                boundary = True
        if not boundary:
            k4z, k4t = field(za, ta, eta_at(t + _C4 * h))
            za = z + h * (_A51 * k1z + _A52 * k2z + _A53 * k3z + _A54 * k4z)
            ta = theta + h * (_A51 * k1t + _A52 * k2t + _A53 * k3t + _A54 * k4t)
            if abs(za) > zmax:
                boundary = True
        if not boundary:
            k5z, k5t = field(za, ta, eta_at(t + h))
            za = z + h * (_A61 * k1z + _A62 * k2z + _A63 * k3z + _A64 * k4z
                          + _A65 * k5z)
            ta = theta + h * (_A61 * k1t + _A62 * k2t + _A63 * k3t + _A64 * k4t
                              + _A65 * k5t)
            if abs(za) > zmax:
                boundary = True
        if not boundary:
            k6z, k6t = field(za, ta, eta_at(t + _C6 * h))
            z5 = z + h * (_B1 * k1z + _B3 * k3z + _B4 * k4z + _B5 * k5z
                          + _B6 * k6z)
            t5 = theta + h * (_B1 * k1t + _B3 * k3t + _B4 * k4t + _B5 * k5t
                              + _B6 * k6t)
            if abs(z5) > zmax:
                boundary = True

        if boundary:
            if h > config.min_step:
                h *= 0.5
                continue
            # boundary unavoidable at the smallest step: clamp and count
            z = math.copysign(zmax, z)
            clamp_events += 1
            if clamp_events > config.clamp_limit:
                raise SingularityError(
                    f"clamped at |z|=1 more than {config.clamp_limit} times")
            t += h
            if t >= t_next - 1e-12:
                emit(samples, t, z, theta)
                t_next = min(t_next + sample_dt, t1)
            continue

        ez = h * (_E1 * k1z + _E3 * k3z + _E4 * k4z + _E5 * k5z + _E6 * k6z)
        et = h * (_E1 * k1t + _E3 * k3t + _E4 * k4t + _E5 * k5t + _E6 * k6t)
        # error per unit tau against the mixed tolerance
        budget_z = h * (config.abs_tol + config.rel_tol * abs(z5))
        budget_t = h * (config.abs_tol + config.rel_tol * abs(t5))
        err = max(abs(ez) / budget_z, abs(et) / budget_t)
        if err <= 1.0:
            t += h
            z, theta = z5, t5
            if t >= t_next - 1e-12:
                emit(samples, t, z, theta)
                t_next = min(t_next + sample_dt, t1)
        fac = 0.9 * (err + 1e-300) ** -0.2
        h *= min(5.0, max(0.2, fac))
        if err > 1.0 and h < config.min_step:
            raise StepFailureError(
                f"step size underflowed {config.min_step} at tau={t}")
    return Trajectory(tuple(samples), params, schedule, clamp_events)
