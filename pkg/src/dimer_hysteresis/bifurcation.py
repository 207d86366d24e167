"""Stationary states, their stability, and the critical coupling values.

Stationary states of the undamped flow sit at sin(theta) = 0, so theta*
is 0 or pi, and at roots of the reduced residual

    G(z) = -2 z cos(theta*) / sqrt(1 - z^2)
           - (eta / 2^r) [(1+z)^r - (1-z)^r].

G is odd in z; z = 0 is always a root (the symmetric state). Asymmetric
roots appear in +/- pairs. For attractive coupling (eta < 0) on the
theta* = 0 sheet the symmetric state destabilizes at |eta| = eta_star =
2^r / r through a pitchfork that is supercritical for small r and
subcritical above r_threshold = (3 + sqrt(13)) / 2; in the subcritical
regime a saddle-node at eta_plus < eta_star bounds the bistable window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import (
    DomainError,
    NoConvergenceError,
    SingularityError,
    ThresholdProximityError,
)
from .model import EPS_CLAMP, ModelParams, PhaseState, power_difference
from .dynamics import vector_field

EPS_EIG = 1e-8

# Larger root of (r - 1)(r - 2) = 3: where the cubic coefficient of G
# at the pitchfork changes sign.
R_THRESHOLD = (3.0 + math.sqrt(13.0)) / 2.0

_FD_STEP = 1e-6
_GRID_POINTS = 10 ** 4
_RESIDUAL_TOL = 1e-10


@dataclass(frozen=True)
class FixedPoint:
    """One stationary state (z_star, theta_star) at coupling eta."""

    z_star: float
    theta_star: float
    eta: float
    stability: str
    eigenvalues: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in ("symmetric", "asymmetric"):
            raise DomainError(f"bad fixed point kind {self.kind!r}")
        if (self.kind == "symmetric") != (self.z_star == 0.0):
            raise DomainError("kind must be symmetric exactly when z_star == 0")


@dataclass(frozen=True)
class Branch:
    """A stitched run of fixed points across the eta grid."""

    branch_id: int
    kind: str
    theta_star: float
    points: tuple  # FixedPoint entries ordered by |eta|


@dataclass(frozen=True)
class BifurcationDiagram:
    r: float
    branches: tuple
    eta_star: float
    eta_plus: Optional[float]
    classification: str

    def __post_init__(self):
        subcritical = self.classification == "subcritical"
        if subcritical != (self.eta_plus is not None):
            raise DomainError("eta_plus must be present exactly for "
                              "subcritical diagrams")
        if self.eta_plus is not None:
            if not 0.0 < self.eta_plus < self.eta_star:
                raise DomainError("require 0 < eta_plus < eta_star")


def _cos_theta_star(theta_star: float) -> float:
    if theta_star == 0.0:
        return 1.0
    if theta_star == math.pi:
        return -1.0
    raise DomainError(f"theta_star must be 0 or pi, got {theta_star}")


def stationary_residual(z: float, theta_star: float, eta: float, r: float) -> float:
    """G(z); its roots are the stationary imbalances at this eta."""
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    ct = _cos_theta_star(theta_star)
    if abs(z) >= 1.0 - EPS_CLAMP:
        raise SingularityError(f"residual singular near |z|=1; got z={z}")
    s = math.sqrt(1.0 - z * z)
    return -2.0 * z * ct / s - eta / (2.0 ** r) * power_difference(z, r)


def residual_derivative(z: float, theta_star: float, eta: float, r: float) -> float:
    """dG/dz in closed form; used by Newton polish and the fold solver."""
    ct = _cos_theta_star(theta_star)
    if abs(z) >= 1.0 - EPS_CLAMP:
        raise SingularityError(f"residual singular near |z|=1; got z={z}")
    one_minus = 1.0 - z * z
    psum = (1.0 + z) ** (r - 1.0) + (1.0 - z) ** (r - 1.0)
    return -2.0 * ct / one_minus ** 1.5 - eta * r / (2.0 ** r) * psum


def _residual_grid(zs: np.ndarray, ct: float, eta: float, r: float) -> np.ndarray:
    """Vectorized G over a z grid (same stable difference as the scalar)."""
    a = np.abs(zs)
    diff = np.exp(r * np.log1p(-a)) * np.expm1(2.0 * r * np.arctanh(a))
    diff = np.copysign(diff, zs)
    return -2.0 * zs * ct / np.sqrt(1.0 - zs * zs) - eta / (2.0 ** r) * diff


def _bisect_root(lo, hi, ct, eta, r):
    """Bracketed bisection on G to 1e-12 width, then safeguarded Newton."""
    flo = stationary_residual(lo, 0.0 if ct > 0 else math.pi, eta, r)
    theta = 0.0 if ct > 0 else math.pi
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12:
            break
        fm = stationary_residual(mid, theta, eta, r)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    # Newton polish pushes the residual to the floor; keep within bracket
    for _ in range(3):
        g = stationary_residual(root, theta, eta, r)
        dg = residual_derivative(root, theta, eta, r)
        if dg == 0.0:
            break
        step = root - g / dg
        if lo <= step <= hi:
            root = step
    return root


def _positive_roots(eta: float, r: float, theta_star: float,
                    n_grid: int = _GRID_POINTS) -> list:
    """All roots of G with z > 0 on one theta* sheet.

    Sign-change scan on a uniform grid, bisection refinement, plus a
    tangency probe: at a fold the two roots coalesce and G only touches
    zero, so grid minima of |G| are refined through the derivative and
    accepted when the residual is at noise level.
    """
    ct = _cos_theta_star(theta_star)
    zmax = 1.0 - EPS_CLAMP
    zs = np.linspace(zmax / n_grid, zmax, n_grid)
    gs = _residual_grid(zs, ct, eta, r)
    roots = []
    signs = np.sign(gs)
    flips = np.nonzero(signs[:-1] * signs[1:] < 0)[0]
    for i in flips:
        roots.append(_bisect_root(zs[i], zs[i + 1], ct, eta, r))
    exact = np.nonzero(gs == 0.0)[0]
    for i in exact:
        roots.append(float(zs[i]))
    # tangency probe: interior local minima of |G| without a sign change
    ag = np.abs(gs)
    candidates = np.nonzero(
        (ag[1:-1] < ag[:-2]) & (ag[1:-1] < ag[2:])
        & (signs[:-2] == signs[2:]))[0] + 1
    for i in candidates:
        vertex = _refine_tangency(zs[i - 1], zs[i + 1], theta_star, eta, r)
        if vertex is not None:
            roots.append(vertex)
    roots.sort()
    # collapse duplicates from adjacent brackets
    out = []
    for rt in roots:
        if not out or rt - out[-1] > 1e-9:
            out.append(rt)
    return out


def _refine_tangency(lo, hi, theta_star, eta, r):
    """Locate the vertex of |G| via a dG/dz sign change; accept as a
    double root only if G itself vanishes there."""
    dlo = residual_derivative(lo, theta_star, eta, r)
    dhi = residual_derivative(hi, theta_star, eta, r)
    if (dlo > 0) == (dhi > 0):
        return None
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if hi - lo < 1e-12:
            break
        dm = residual_derivative(mid, theta_star, eta, r)
        if (dm > 0) == (dlo > 0):
            lo, dlo = mid, dm
        else:
            hi = mid
    vertex = 0.5 * (lo + hi)
    if abs(stationary_residual(vertex, theta_star, eta, r)) < _RESIDUAL_TOL:
        return vertex
    return None


def jacobian_at(state: PhaseState, eta: float, params: ModelParams) -> tuple:
    """Central finite-difference Jacobian of vector_field, step 1e-6.

    One code path covers both rhs modes and any damping. Returned as
    ((dzdot_dz, dzdot_dtheta), (dthetadot_dz, dthetadot_dtheta)).
    """
    z, theta = state.z, state.theta
    if abs(z) >= 1.0 - EPS_CLAMP - _FD_STEP:
        raise SingularityError(f"no room for finite differences at z={z}")
    h = _FD_STEP

    def f(zz, tt):
        return vector_field(PhaseState(z=zz, theta=tt), eta, params)

    fz_p = f(z + h, theta)
    fz_m = f(z - h, theta)
    ft_p = f(z, theta + h)
    ft_m = f(z, theta - h)
    j11 = (fz_p[0] - fz_m[0]) / (2.0 * h)
    j21 = (fz_p[1] - fz_m[1]) / (2.0 * h)
    j12 = (ft_p[0] - ft_m[0]) / (2.0 * h)
    j22 = (ft_p[1] - ft_m[1]) / (2.0 * h)
    return ((j11, j12), (j21, j22))


def eigenvalues_2x2(jac) -> tuple:
    """Both eigenvalues of a real 2x2 matrix, always as complex numbers."""
    (a, b), (c, d) = jac
    tr = a + d
    det = a * d - b * c
    disc = complex(tr * tr - 4.0 * det, 0.0)
    root = disc ** 0.5
    return ((tr + root) / 2.0, (tr - root) / 2.0)


def classify_stability(jac) -> str:
    """stable / unstable / marginal from the eigenvalues of a 2x2 Jacobian.

    Strictly negative real parts are stable; a pure center (both
    eigenvalues on the imaginary axis, nonzero) also counts as stable,
    matching the nonlinear stability of centers of the undamped flow.
    """
    lam1, lam2 = eigenvalues_2x2(jac)
    res = (lam1.real, lam2.real)
    ims = (lam1.imag, lam2.imag)
    if all(re < -EPS_EIG for re in res):
        return "stable"
    if any(re > EPS_EIG for re in res):
        return "unstable"
    if all(abs(re) <= EPS_EIG for re in res) and all(abs(im) > EPS_EIG for im in ims):
        return "stable"
    return "marginal"


def _make_fixed_point(z_root: float, theta_star: float, eta: float, r: float,
                      spectrum=None, stability=None) -> FixedPoint:
    params = ModelParams(r=r, nu=0.0)
    if spectrum is None:
        jac = jacobian_at(PhaseState(z=z_root, theta=theta_star), eta, params)
        spectrum = eigenvalues_2x2(jac)
        stability = classify_stability(jac)
    return FixedPoint(
        z_star=z_root, theta_star=theta_star, eta=eta,
        stability=stability, eigenvalues=spectrum,
        kind="symmetric" if z_root == 0.0 else "asymmetric")


def find_fixed_points(eta: float, r: float) -> list:
    """Every stationary state at this eta, both theta* sheets.

    The symmetric point z = 0 always appears for theta* in {0, pi}.
    Asymmetric roots are found on a 10^4-point sign-change grid for
    z > 0 and mirrored exactly; the mirror reuses the computed spectrum,
    which symmetry guarantees is identical. Stability refers to the
    undamped flow (nu = 0).
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    points = []
    for theta_star in (0.0, math.pi):
        points.append(_make_fixed_point(0.0, theta_star, eta, r))
        for z_root in _positive_roots(eta, r, theta_star):
            if z_root < 1e-9:
                continue  # numerical shadow of the symmetric root
            fp = _make_fixed_point(z_root, theta_star, eta, r)
            points.append(fp)
            points.append(_make_fixed_point(
                -z_root, theta_star, eta, r,
                spectrum=fp.eigenvalues, stability=fp.stability))
    return points


def find_eta_star(r: float) -> float:
    """Pitchfork coupling magnitude eta_star = 2^r / r."""
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    return 2.0 ** r / r


def eta_star_numeric(r: float) -> float:
    """Independent cross-check of find_eta_star.

    Bisection on the finite-difference slope of G at z = 0 as a function
    of the coupling magnitude: the symmetric state changes character
    where that slope crosses zero. Uses no closed-form derivative.
    """
    delta = 1e-5

    def slope(m):
        g_p = stationary_residual(delta, 0.0, -m, r)
        g_m = stationary_residual(-delta, 0.0, -m, r)
        return (g_p - g_m) / (2.0 * delta)

    lo, hi = 1e-8, max(10.0, 4.0 * 2.0 ** r / r)
    slo = slope(lo)
    if (slope(hi) > 0) == (slo > 0):
        raise NoConvergenceError("no sign change bracketing eta_star")
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if (slope(mid) > 0) == (slo > 0):
            lo, slo = mid, slope(mid)
        else:
            hi = mid
    return 0.5 * (lo + hi)


def pitchfork_cubic_coefficient(r: float) -> float:
    """kappa = 1 - (r - 1)(r - 2) / 3.

    Coefficient of z^3 in the expansion of G at z = 0 with the coupling
    held at the pitchfork (eta = -eta_star, theta* = 0), up to a positive
    prefactor. Negative kappa bends the emerging branch back under
    eta_star, i.e. the pitchfork is subcritical. The third derivative
    d3G/dz3 at the pitchfork equals -6 kappa, which is how tests
    re-derive the expression by finite differences.
    """
    return 1.0 - (r - 1.0) * (r - 2.0) / 3.0


def asymmetric_states_below_star(r: float, delta_frac: float = 1e-3) -> bool:
    """Probe: do asymmetric stationary states exist just below eta_star?

    Evaluated at |eta| = eta_star * (1 - delta_frac) on the theta* = 0
    sheet. True implies a subcritical pitchfork. Caveat: just above
    r_threshold the fold sits within O(sqrt(delta_frac)) of eta_star, so
    the probe reports False although the bifurcation is subcritical;
    use the sign of pitchfork_cubic_coefficient near the threshold.
    """
    m = find_eta_star(r) * (1.0 - delta_frac)
    return len(_positive_roots(-m, r, 0.0)) > 0


def classify_pitchfork(r: float) -> str:
    """supercritical or subcritical, by the sign of the cubic coefficient.

    Refuses to classify within 1e-6 of r_threshold, where the cubic
    term degenerates. The behavioral probe (asymmetric_states_below_star)
    agrees away from the threshold; see its caveat.
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    if abs(r - R_THRESHOLD) < 1e-6:
        raise ThresholdProximityError(
            f"r={r} within 1e-6 of the critical power {R_THRESHOLD}")
    return "subcritical" if pitchfork_cubic_coefficient(r) < 0.0 else "supercritical"


def find_r_threshold(r_min: float = 3.0, r_max: float = 4.0,
                     tol: float = 1e-4) -> float:
    """Bisection on classify_pitchfork for the critical power.

    A midpoint inside the classifier's refusal band is already known to
    sit within 1e-6 of the threshold, which is as sharp as anything
    observable through classify_pitchfork, so it is returned directly;
    tolerances below 1e-6 therefore cannot be honored.
    """
    if not (0 < r_min < r_max):
        raise DomainError("require 0 < r_min < r_max")
    if not tol > 0:
        raise DomainError("tol must be > 0")
    lo_class = classify_pitchfork(r_min)
    hi_class = classify_pitchfork(r_max)
    if lo_class == hi_class:
        raise DomainError(
            f"classification does not change on [{r_min}, {r_max}]")
    lo, hi = r_min, r_max
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        try:
            verdict = classify_pitchfork(mid)
        except ThresholdProximityError:
            return mid
        if verdict == lo_class:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _branch_coupling_graph(z: float, r: float) -> float:
    """|eta| on the asymmetric branch as a function of its z, theta* = 0."""
    return 2.0 * z / (math.sqrt(1.0 - z * z) * power_difference(z, r) / 2.0 ** r)


def find_eta_plus(r: float) -> Optional[float]:
    """Saddle-node coupling magnitude, or None for supercritical powers.

    The asymmetric branch solves |eta| = xi(z) = 2 z / (sqrt(1 - z^2) B(z))
    with B = [(1+z)^r - (1-z)^r] / 2^r; a fold is an interior minimum of
    xi. A grid scan seeds a damped two-variable Newton iteration on
    (G, dG/dz), which sharpens both residuals below 1e-10.
    """
    if not r > 0:
        raise DomainError(f"r must be > 0, got {r}")
    if pitchfork_cubic_coefficient(r) >= 0.0:
        return None
    zs = np.linspace(1e-3, 1.0 - 1e-3, 2000)
    diff = np.exp(r * np.log1p(-zs)) * np.expm1(2.0 * r * np.arctanh(zs))
    xi = 2.0 * zs / (np.sqrt(1.0 - zs * zs) * diff / 2.0 ** r)
    i = int(np.argmin(xi))
    if i == 0 or i == len(zs) - 1:
        return None
    z, m = float(zs[i]), float(xi[i])

    def residuals(z, m):
        g = stationary_residual(z, 0.0, -m, r)
        dg = residual_derivative(z, 0.0, -m, r)
        return g, dg

    g, dg = residuals(z, m)
    for _ in range(60):
        if max(abs(g), abs(dg)) < 1e-13:
            break
        one_minus = 1.0 - z * z
        # closed-form Jacobian of (G, G') in (z, m) at eta = -m
        dG_dm = power_difference(z, r) / 2.0 ** r
        psum = (1.0 + z) ** (r - 1.0) + (1.0 - z) ** (r - 1.0)
        ddg_dm = r / 2.0 ** r * psum
        pdiff2 = (1.0 + z) ** (r - 2.0) - (1.0 - z) ** (r - 2.0)
        d2g_dz = -6.0 * z / one_minus ** 2.5 + m * r * (r - 1.0) / 2.0 ** r * pdiff2
        det = dg * ddg_dm - dG_dm * d2g_dz
        if det == 0.0:
            raise NoConvergenceError("degenerate Newton system for the fold")
        dz = -(g * ddg_dm - dG_dm * dg) / det
        dm = -(dg * dg - d2g_dz * g) / det
        scale = 1.0
        best = max(abs(g), abs(dg))
        for _ in range(30):
            z_try, m_try = z + scale * dz, m + scale * dm
            if 0.0 < z_try < 1.0 - EPS_CLAMP and m_try > 0.0:
                g_try, dg_try = residuals(z_try, m_try)
                if max(abs(g_try), abs(dg_try)) < best:
                    z, m, g, dg = z_try, m_try, g_try, dg_try
                    break
            scale *= 0.5
        else:
            raise NoConvergenceError("fold Newton iteration stalled")
    g, dg = residuals(z, m)
    if max(abs(g), abs(dg)) > _RESIDUAL_TOL:
        raise NoConvergenceError(
            f"fold residuals {g:.2e}, {dg:.2e} above {_RESIDUAL_TOL}")
    eta_star = find_eta_star(r)
    if not 0.0 < m < eta_star:
        raise NoConvergenceError(f"fold magnitude {m} outside (0, {eta_star})")
    return m


def _monotone_align(prev_zs, new_zs, cap):
    """Min-cost order-preserving pairing of two sorted z lists.

    Branches never cross between adjacent grid columns (they can only
    meet at bifurcation points), so the correct pairing preserves sort
    order. An unmatched entry costs cap/2, which makes a pair form
    exactly when its jump is below cap. Returns (i, j) index pairs.
    """
    n, m = len(prev_zs), len(new_zs)
    gap = 0.5 * cap
    dp = [[0.0] * (m + 1) for _ in range(n + 1)]
    back = [[""] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        dp[i][0] = i * gap
        back[i][0] = "up"
    for j in range(1, m + 1):
        dp[0][j] = j * gap
        back[0][j] = "left"
    for i in range(1, n + 1):
        for j in range(1, m + 1):
            best = dp[i - 1][j] + gap
            move = "up"
            if dp[i][j - 1] + gap < best:
                best = dp[i][j - 1] + gap
                move = "left"
            d = abs(prev_zs[i - 1] - new_zs[j - 1])
            if d <= cap and dp[i - 1][j - 1] + d < best:
                best = dp[i - 1][j - 1] + d
                move = "diag"
            dp[i][j] = best
            back[i][j] = move
    pairs = []
    i, j = n, m
    while i > 0 or j > 0:
        move = back[i][j]
        if move == "diag":
            pairs.append((i - 1, j - 1))
            i -= 1
            j -= 1
        elif move == "up":
            i -= 1
        else:
            j -= 1
    pairs.reverse()
    return pairs


def trace_branches(r: float, eta_range: tuple, steps: int,
                   theta_star: float = 0.0) -> BifurcationDiagram:
    """Bifurcation diagram over a grid of coupling magnitudes.

    eta_range is (|eta|_min, |eta|_max); the attractive coupling
    eta = -|eta| is used throughout, and each point stores that signed
    value. One theta* sheet is traced per call (default 0, where the
    attractive-side pitchfork lives). Fixed points at adjacent grid
    values are stitched by order-preserving nearest-z matching; a root
    with no continuation within the jump cap starts a new branch, so
    folds appear as two branches born at the same magnitude.

    The cap is 5 grid spacings with a floor of 0.15: branches born at
    a pitchfork grow like sqrt(distance past the critical coupling), so
    their first in-branch jump can reach sqrt(grid spacing), well above
    5 spacings on fine grids.
    """
    lo, hi = eta_range
    if not (0.0 <= lo < hi):
        raise DomainError(f"require 0 <= min < max in eta_range, got {eta_range}")
    if steps < 2:
        raise DomainError(f"steps must be >= 2, got {steps}")
    _cos_theta_star(theta_star)

    mags = np.linspace(lo, hi, steps)
    cap = max(0.15, 5.0 * (hi - lo) / (steps - 1))
    branches = []
    active_ids = []  # branch index per live end, ascending in z
    active_zs = []

    for m in mags:
        eta = -float(m)
        zs = [0.0]
        for z_root in _positive_roots(eta, r, theta_star):
            if z_root >= 1e-9:
                zs.extend((z_root, -z_root))
        zs.sort()
        fps = {}
        for z in zs:
            if z >= 0.0:
                fps[z] = _make_fixed_point(z, theta_star, eta, r)
        for z in zs:
            if z < 0.0:
                twin = fps[-z]
                fps[z] = _make_fixed_point(z, theta_star, eta, r,
                                           spectrum=twin.eigenvalues,
                                           stability=twin.stability)
        matched_new = set()
        next_ids = []
        next_zs = []
        for i, j in _monotone_align(active_zs, zs, cap):
            bid = active_ids[i]
            branches[bid]["points"].append(fps[zs[j]])
            matched_new.add(j)
            next_ids.append(bid)
            next_zs.append(zs[j])
        for j, z in enumerate(zs):
            if j in matched_new:
                continue
            branches.append({
                "kind": "symmetric" if z == 0.0 else "asymmetric",
                "points": [fps[z]],
            })
            next_ids.append(len(branches) - 1)
            next_zs.append(z)
        order = sorted(range(len(next_zs)), key=lambda k: next_zs[k])
        active_ids = [next_ids[k] for k in order]
        active_zs = [next_zs[k] for k in order]

    built = tuple(
        Branch(branch_id=i, kind=b["kind"], theta_star=theta_star,
               points=tuple(b["points"]))
        for i, b in enumerate(branches))
    classification = classify_pitchfork(r)
    return BifurcationDiagram(
        r=r, branches=built,
        eta_star=find_eta_star(r),
        eta_plus=find_eta_plus(r),
        classification=classification)
