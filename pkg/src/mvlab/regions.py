"""Kernel super-level sets and the quadrature engines over them.

Every kernel in the catalog is radial and strictly decreasing away from the
center, so level sets are radial graphs.  Elliptic regions are balls of
radius ``rho_star(r)`` solving ``kernel = r^(-n)``.  Parabolic regions live in
backward time: the top time ``tau_max`` solves the on-center equation and the
profile ``x(tau)`` is the per-slice root, found by bracketed Brent iteration.

Surface integrals over a parabolic level set use the space-time area element
of g(t) + dt^2.  Along the profile the metric-normal speed of the level
curve equals ``|K_tau| / |grad K|`` (the implicit-function derivative in
disguise), so

    dA~ = sqrt(grad^2 + K_tau^2) / grad * (orbit sphere area) dtau,

which is what `sphere_integrate` integrates, with quadratic substitutions at
both time endpoints where the profile closes.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, NoRegionError
from .geometry import unit_sphere_area
from .quad import integrate_1d, integrate_de

ROOT_XTOL = 1e-14
# relative slivers next to tau = 0 and tau = tau_max excluded from
# double-exponential nodes; their contribution is below double precision
TIME_CLIP_LO = 1e-18
TIME_CLIP_HI = 1e-13


@dataclass(frozen=True)
class SurfaceSample:
    """Kernel data at one point of a parabolic level surface."""
    rho: float
    tau: float
    value: float
    grad: float   # spatial gradient norm |grad K|
    dtau: float   # time derivative at fixed manifold point


def level_radius(kernel, r):
    """Radius of the elliptic level set kernel(rho) = r^(-n)."""
    if r <= 0:
        raise DomainError("level parameter r must be positive")
    level = r ** (-kernel.n)
    lo, hi = 1e-300, 1.0
    rho_cap = kernel.geom.rho_max(0.0)
    while kernel.value(hi) > level:
        hi *= 2.0
        if hi > min(rho_cap, 1e12):
            raise NoRegionError(f"level {level} not attained inside the domain")
    val = brentq(lambda rho: kernel.value(rho) - level, lo, hi,
                 xtol=ROOT_XTOL, rtol=4.0 * np.finfo(float).eps)
    return float(val)


@dataclass(frozen=True)
class GreenBallRegion:
    """Super-level set of an elliptic kernel."""
    kernel: object
    r: float
    rho_star: float
    compact: bool = True

    @property
    def parabolic(self):
        return False

    @property
    def level(self):
        return self.r ** (-self.kernel.n)


def green_ball(kernel, r):
    return GreenBallRegion(kernel=kernel, r=r, rho_star=level_radius(kernel, r))


@dataclass
class HeatBallRegion:
    """Super-level set of a parabolic kernel in backward time.

    The profile is the comoving-coordinate root per time slice; roots are
    cached per slice since several integrals revisit the same region.
    """
    kernel: object
    r: float
    tau_max: float
    compact: bool = True
    _roots: dict = field(default_factory=dict, repr=False)
    _last_root: float = field(default=0.0, repr=False)

    @property
    def parabolic(self):
        return True

    @property
    def level(self):
        return self.r ** (-self.kernel.n)

    def profile_x(self, tau):
        if not (0.0 < tau < self.tau_max):
            raise DomainError(f"tau must lie in (0, {self.tau_max})")
        hit = self._roots.get(tau)
        if hit is not None:
            return hit
        kern, level = self.kernel, self.level

        def f(s):
            return kern.value_cm(s, tau) - level

        geom = kern.geom
        x_cap = geom.x_max(-tau)
        if math.isinf(x_cap):
            x_cap = 1e6

        # warm start: bracket around the most recent root of a nearby slice
        lo, hi = 0.0, None
        if self._last_root > 0.0:
            a, b = 0.7 * self._last_root, 1.4 * self._last_root
            for _ in range(8):
                if b >= x_cap:
                    break
                fa, fb = f(a), f(b)
                if fa > 0.0 >= fb:
                    lo, hi = a, b
                    break
                if fa <= 0.0:
                    a, b = 0.5 * a, a       # root lies below the guess
                else:
                    a, b = b, 2.0 * b       # root lies above the guess
        if hi is None:
            lo = 0.0
            hi = min(4.0 * math.sqrt(2.0 * kern.n * tau *
                                     max(1.0, -math.log(level * tau ** (kern.n / 2.0)))) + 1.0,
                     x_cap * (1.0 - 1e-9))
            while f(hi) > 0.0:
                hi = 0.5 * (hi + x_cap)
                if x_cap - hi < 1e-9:
                    raise NoRegionError("profile does not close inside the domain")
        x = brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=4.0 * np.finfo(float).eps)
        self._roots[tau] = x
        self._last_root = x
        return x

    def profile_rho(self, tau):
        return self.kernel.rho_of_x(self.profile_x(tau), tau)

    def profile_slope(self, tau):
        """d rho / d tau of the profile from the implicit-function formula."""
        x = self.profile_x(tau)
        dx_dtau = -self.kernel.dtau_cm(x, tau) / self.kernel.dx_cm(x, tau)
        geom = self.kernel.geom
        if geom.is_static:
            return dx_dtau
        eps = 1e-6 * tau
        dscale = (math.sqrt(geom.scale(-(tau + eps)))
                  - math.sqrt(geom.scale(-(tau - eps)))) / (2.0 * eps)
        return math.sqrt(geom.scale(-tau)) * dx_dtau + x * dscale

    def surface_sample(self, tau):
        x = self.profile_x(tau)
        kern = self.kernel
        return SurfaceSample(
            rho=kern.rho_of_x(x, tau), tau=tau, value=kern.value_cm(x, tau),
            grad=kern.grad_norm_cm(x, tau), dtau=kern.dtau_cm(x, tau))


def heatball_profile(kernel, r, compactness_grid=9):
    """Build the parabolic level region for level parameter r.

    The top time solves the on-center equation; the region is rejected when
    the profile comes within 10 percent of the domain radius.
    """
    if r <= 0:
        raise DomainError("level parameter r must be positive")
    level = r ** (-kernel.n)

    def center(tau):
        return kernel.value_cm(0.0, tau) - level

    lo, hi = 1e-12, 1.0
    while center(hi) > 0.0:
        hi *= 2.0
        if hi > 1e8:
            raise NoRegionError("on-center level equation has no root")
    while center(lo) < 0.0:
        lo *= 1e-2
        if lo < 1e-280:
            raise NoRegionError("kernel does not exceed the level near tau = 0")
    tau_max = brentq(center, lo, hi, xtol=1e-300,
                     rtol=4.0 * np.finfo(float).eps)
    region = HeatBallRegion(kernel=kernel, r=r, tau_max=float(tau_max))

    geom = kernel.geom
    if math.isfinite(geom.x_max(0.0)):
        for u in np.linspace(0.05, 0.95, compactness_grid):
            tau = u * tau_max
            if region.profile_x(tau) > 0.9 * geom.x_max(-tau):
                raise NoRegionError(
                    f"profile reaches 90% of the domain radius at tau = {tau:.4g}")
    return region


# --------------------------------------------------------------------------- #
# quadrature engines
# --------------------------------------------------------------------------- #
def ball_integrate(region, integrand, epsabs=1e-10, epsrel=1e-8, limit=200,
                   inner_limit=60):
    """Integral of ``integrand`` against the volume measure of the region.

    Elliptic: ``integrand(rho)`` over the ball (weight: sphere area).
    Parabolic: ``integrand(rho, tau)`` over the space-time region (weight:
    sphere area times d mu d tau).  Returns (value, error_estimate).
    """
    if not region.parabolic:
        geom = region.kernel.geom
        area = unit_sphere_area(region.kernel.n)

        def f(rho):
            return integrand(rho) * area * geom.warp(rho) ** (region.kernel.n - 1)

        return integrate_1d(f, 0.0, region.rho_star, epsabs=epsabs,
                            epsrel=epsrel, limit=limit)

    kern = region.kernel
    geom, n = kern.geom, kern.n
    area = unit_sphere_area(n)
    tau_max = region.tau_max

    def slice_integral(tau):
        if tau <= tau_max * TIME_CLIP_LO or tau >= tau_max * (1.0 - TIME_CLIP_HI):
            return 0.0
        t = -tau
        x_hi = region.profile_x(tau)
        if x_hi <= 0.0:
            return 0.0
        sm = math.sqrt(geom.m2(0.0, t))

        def f(x):
            rho = geom.rho_of_x(x, t)
            return (integrand(rho, tau) * area
                    * geom.warp_cm(x, t) ** (n - 1) * sm)

        val, _ = integrate_1d(f, 0.0, x_hi, epsabs=0.1 * epsabs,
                              epsrel=max(0.1 * epsrel, 1e-10),
                              limit=inner_limit)
        return val

    val, err = integrate_de(slice_integral, 0.0, tau_max,
                            atol=epsabs, rtol=epsrel)
    # inner quadratures run at a tenth of the outer tolerance
    return val, err + 0.1 * (epsabs + epsrel * abs(val))


def sphere_integrate(region, integrand, epsabs=1e-10, epsrel=1e-8, limit=200):
    """Integral of ``integrand`` over the level surface of the region.

    Elliptic: ``integrand(rho)`` times the sphere area at rho_star.
    Parabolic: ``integrand(sample)`` against the space-time area element,
    where ``sample`` is a SurfaceSample with kernel data at the profile.
    Returns (value, error_estimate).
    """
    if not region.parabolic:
        geom = region.kernel.geom
        area = unit_sphere_area(region.kernel.n)
        rho = region.rho_star
        return integrand(rho) * area * geom.warp(rho) ** (region.kernel.n - 1), 0.0

    kern = region.kernel
    geom, n = kern.geom, kern.n
    area = unit_sphere_area(n)
    tau_max = region.tau_max

    def f(tau):
        if tau <= tau_max * TIME_CLIP_LO or tau >= tau_max * (1.0 - TIME_CLIP_HI):
            return 0.0
        s = region.surface_sample(tau)
        if s.grad <= 0.0:
            return 0.0  # sub-resolution sliver where the profile closes
        x = region.profile_x(tau)
        w = geom.warp_cm(x, -tau)
        measure = (math.hypot(s.grad, s.dtau) / s.grad) * area * w ** (n - 1)
        return integrand(s) * measure

    return integrate_de(f, 0.0, tau_max, atol=epsabs, rtol=epsrel)


def cap_integral(region, v_mean, s):
    """Truncation-cap integral at time slice tau = s.

    Computes the integral of v * (kernel - level) over the part of the slice
    inside the region; as s -> 0 it converges to the center value of v.
    """
    if not (0.0 < s < region.tau_max):
        raise DomainError("slice must lie strictly inside the region")
    kern = region.kernel
    geom, n = kern.geom, kern.n
    area = unit_sphere_area(n)
    t = -s
    x_hi = region.profile_x(s)
    level = region.level
    sm = math.sqrt(geom.m2(0.0, t))

    def f(x):
        rho = geom.rho_of_x(x, t)
        return (v_mean(rho, t) * (kern.value_cm(x, s) - level)
                * area * geom.warp_cm(x, t) ** (n - 1) * sm)

    val, _ = integrate_1d(f, 0.0, x_hi, epsabs=1e-11, epsrel=1e-9)
    return val
