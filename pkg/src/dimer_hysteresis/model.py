"""Core model: domain types, the two-mode Hamiltonian, and coupling schedules.

The system is a bosonic two-mode (double-well) condensate with an
(r+1)-body power-law nonlinearity, reduced to a population imbalance
z in [-1, 1] and a relative phase theta. All dynamics, stationary-state
analysis and sweep protocols elsewhere in the package are built on the
functions here.

H(z, theta) = 2 sqrt(1 - z^2) cos(theta)
              - eta * [(1+z)^(r+1) + (1-z)^(r+1)] / (2^r (r+1))
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .errors import DomainError, SingularityError

# Dynamics never evaluates the phase equation closer to |z| = 1 than this.
EPS_CLAMP = 1e-9

RHS_MODES = ("hamiltonian", "as_printed")
SCHEDULE_KINDS = ("constant", "triangular", "piecewise_linear")


@dataclass(frozen=True)
class ModelParams:
    """Nonlinearity power r, damping nu, and the right-hand-side convention.

    r may be any positive real, integer or not. rhs_mode selects between
    the derivative-consistent equations of motion ("hamiltonian", the
    default, conserves H when nu = 0) and a legacy variant ("as_printed")
    kept for comparison; see dynamics.vector_field.
    """

    r: float
    nu: float = 0.0
    rhs_mode: str = "hamiltonian"

    def __post_init__(self):
        if not self.r > 0:
            raise DomainError(f"nonlinearity power r must be > 0, got {self.r}")
        if self.nu < 0:
            raise DomainError(f"damping nu must be >= 0, got {self.nu}")
        if self.rhs_mode not in RHS_MODES:
            raise DomainError(
                f"rhs_mode must be one of {RHS_MODES}, got {self.rhs_mode!r}")


@dataclass(frozen=True)
class PhaseState:
    """Population imbalance z and relative phase theta.

    theta is stored unwrapped; wrap_angle is applied only at output time
    so trajectories stay free of artificial 2*pi jumps.
    """

    z: float
    theta: float = 0.0

    def __post_init__(self):
        if not abs(self.z) <= 1.0:
            raise DomainError(f"|z| must be <= 1, got z={self.z}")
        if not math.isfinite(self.theta):
            raise DomainError(f"theta must be finite, got {self.theta}")


@dataclass(frozen=True)
class PhysicalContext:
    """Physical scales of the underlying double-well problem.

    omega: half the splitting between the even/odd doublet levels (> 0).
    Omega: mean of the two levels; only shifts the energy scale.
    c, g: overlap constant and bare coupling; eta = c * g / omega.
    """

    omega: float = 1.0
    Omega: float = 0.0
    c: float = 1.0
    g: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError(f"level splitting omega must be > 0, got {self.omega}")


@dataclass(frozen=True)
class EtaSchedule:
    """Time-dependent effective coupling eta(tau) on [0, T].

    kinds:
      constant          eta(tau) = eta_start
      triangular        linear ramp eta_start -> eta_peak -> eta_start
      piecewise_linear  interpolation through (tau, eta) knots
    """

    kind: str
    eta_start: float = 0.0
    eta_peak: Optional[float] = None
    T: float = 1.0
    knots: Optional[tuple] = None

    def __post_init__(self):
        if self.kind not in SCHEDULE_KINDS:
            raise DomainError(
                f"schedule kind must be one of {SCHEDULE_KINDS}, got {self.kind!r}")
        if not self.T > 0:
            raise DomainError(f"schedule duration T must be > 0, got {self.T}")
        if self.kind == "triangular" and self.eta_peak is None:
            raise DomainError("triangular schedule requires eta_peak")
        if self.kind == "piecewise_linear":
            if not self.knots or len(self.knots) < 2:
                raise DomainError("piecewise_linear schedule requires >= 2 knots")
            taus = [k[0] for k in self.knots]
            if any(b <= a for a, b in zip(taus, taus[1:])):
                raise DomainError("piecewise_linear knots must be strictly "
                                  "increasing in tau")
            if taus[0] != 0.0 or taus[-1] != self.T:
                raise DomainError("piecewise_linear knots must span [0, T]")


class Sample(NamedTuple):
    tau: float
    z: float
    theta: float
    eta: float
    H: float
    E: float


@dataclass(frozen=True)
class Trajectory:
    """Ordered samples of one integration, plus the inputs that produced it.

    clamp_events counts the times the integrator had to clamp z at the
    configured boundary margin; zero on a healthy run.
    """

    samples: tuple
    params: ModelParams
    schedule: EtaSchedule
    clamp_events: int = 0

    def __post_init__(self):
        taus = [s.tau for s in self.samples]
        if any(b <= a for a, b in zip(taus, taus[1:])):
            raise DomainError("trajectory tau values must be strictly increasing")
        if any(abs(s.z) > 1.0 for s in self.samples):
            raise DomainError("trajectory contains |z| > 1")

    @property
    def final_state(self) -> PhaseState:
        last = self.samples[-1]
        return PhaseState(z=last.z, theta=last.theta)


def power_difference(z: float, r: float) -> float:
    """(1+z)^r - (1-z)^r, accurate at every magnitude of z.

    The naive two-pow form loses all significance for |z| below machine
    epsilon, which silently decouples the nonlinearity from near-symmetric
    states. Rewriting with the identity
        (1+z)^r - (1-z)^r = (1-z)^r * expm1(2 r atanh(z))
    keeps full relative accuracy down to the smallest normal numbers.
    Exactly odd in z by construction.
    """
    a = abs(z)
    if a == 0.0:
        return 0.0
    if a >= 1.0:
        raise DomainError(f"power_difference requires |z| < 1, got {z}")
    val = math.exp(r * math.log1p(-a)) * math.expm1(2.0 * r * math.atanh(a))
    return val if z > 0 else -val


def hamiltonian(state: PhaseState, eta: float, r: float) -> float:
    """Conserved energy function of the undamped flow.

    Finite on the whole closed strip |z| <= 1. Even in z and in theta.
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    z, theta = state.z, state.theta
    kinetic = 2.0 * math.sqrt(1.0 - z * z) * math.cos(theta)
    # (1+z) and (1-z) are both >= 0 here, so real powers are safe
    bulk = (1.0 + z) ** (r + 1.0) + (1.0 - z) ** (r + 1.0)
    return kinetic - eta * bulk / (2.0 ** r * (r + 1.0))


def grad_hamiltonian(state: PhaseState, eta: float, r: float) -> tuple:
    """(dH/dz, dH/dtheta) in closed form.

    The z-derivative is singular at |z| = 1; evaluation is refused within
    EPS_CLAMP of the boundary.
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    z, theta = state.z, state.theta
    if abs(z) >= 1.0 - EPS_CLAMP:
        raise SingularityError(f"gradient is singular at |z|=1; got z={z}")
    s = math.sqrt(1.0 - z * z)
    dh_dz = -2.0 * z * math.cos(theta) / s \
        - eta / (2.0 ** r) * power_difference(z, r)
    dh_dtheta = -2.0 * s * math.sin(theta)
    return dh_dz, dh_dtheta


def energy_functional(H: float, ctx: PhysicalContext) -> float:
    """Physical energy E = Omega - omega * H / 2 of a two-mode state."""
    return ctx.Omega - 0.5 * ctx.omega * H


def effective_eta(ctx: PhysicalContext) -> float:
    """Dimensionless coupling eta = c * g / omega."""
    return ctx.c * ctx.g / ctx.omega


def eval_schedule(schedule: EtaSchedule, tau: float) -> float:
    """eta(tau) for any schedule kind; tau must lie in [0, T].

    A relative slack of a few ulp is tolerated at the ends so that
    integrator stage times produced by summation never trip the check.
    """
    T = schedule.T
    slack = 1e-9 * max(1.0, T)
    if tau < -slack or tau > T + slack:
        raise DomainError(f"tau={tau} outside schedule domain [0, {T}]")
    tau = min(max(tau, 0.0), T)
    if schedule.kind == "constant":
        return schedule.eta_start
    if schedule.kind == "triangular":
        ramp = 1.0 - abs(2.0 * tau / T - 1.0)
        return schedule.eta_start + (schedule.eta_peak - schedule.eta_start) * ramp
    knots = schedule.knots
    for (t0, e0), (t1, e1) in zip(knots, knots[1:]):
        if tau <= t1:
            w = (tau - t0) / (t1 - t0)
            return e0 + (e1 - e0) * w
    return knots[-1][1]


def amplitudes_from_state(state: PhaseState) -> tuple:
    """Occupation amplitudes (p, q) with p^2 + q^2 = 1 and p^2 - q^2 = z."""
    p = math.sqrt((1.0 + state.z) / 2.0)
    q = math.sqrt((1.0 - state.z) / 2.0)
    return p, q


def wrap_angle(theta: float) -> float:
    """Map an unwrapped phase to (-pi, pi] for display and serialization."""
    w = math.remainder(theta, math.tau)
    if w <= -math.pi:
        w += math.tau
    return w
