"""Closed-form kernels and comparison kernels on the model geometries.

Elliptic kinds (functions of the geodesic radius): the exact positive Green's
function of flat and hyperbolic models, the space-form comparison kernel
("sub-Green", a radial function with Delta >= -delta under a Ricci lower
bound) and the Euclidean profile evaluated at manifold distance ("sup-Green",
valid on Cartan-Hadamard models).

Parabolic kinds (functions of radius and backward time tau): the flat
Gaussian, the hyperbolic-3 heat kernel, the reduced-distance kernel
``(4 pi tau)^(-n/2) exp(-ell)`` built on top of geodesic shooting, and the
ambient Gaussian restricted to a mean-curvature-flow track.

All parabolic kernels expose derivatives at fixed *manifold* point: on an
evolving geometry the time derivative is taken at fixed comoving coordinate.
"""

import math

from .errors import DomainError, UnsupportedError
from .geometry import (EUCLIDEAN, GAUSSIAN_SOLITON, HYPERBOLIC,
                       SHRINKING_SPHERE, unit_sphere_area)
from .quad import integrate_1d

EXACT_GREEN = "exact-green"
SUB_GREEN = "sub-green"
SUP_GREEN = "sup-green"
HEAT = "heat"
SUB_HEAT = "sub-heat"
MCF_SUP_HEAT = "sup-heat"

_FLAT = (EUCLIDEAN, GAUSSIAN_SOLITON)


def _spaceform_green_value(n, k, d):
    """Green's function of the simply connected space form of curvature -k^2.

    Normalized so the gradient flux through every level sphere equals one.
    Closed form for k = 0 (n >= 3) and for n = 3; radial quadrature of the
    flux-normalized profile otherwise.
    """
    if d <= 0:
        raise DomainError("distance must be positive")
    area = unit_sphere_area(n)
    if k == 0.0:
        if n < 3:
            raise UnsupportedError("flat Green's function needs n >= 3")
        return d ** (2 - n) / ((n - 2) * area)
    if n == 3:
        return k * math.exp(-k * d) / (4.0 * math.pi * math.sinh(k * d))

    # G(d) = (1/area) * int_d^inf (k / sinh(k s))^(n-1) ds
    def tail(s):
        ks = k * s
        if ks > 20.0:  # sinh overflows long before the integrand matters
            return math.exp((n - 1) * (math.log(2.0 * k) - ks))
        return (k / math.sinh(ks)) ** (n - 1)

    val, _ = integrate_1d(tail, d, math.inf, epsabs=1e-14, epsrel=1e-12)
    return val / area


def _spaceform_green_dvalue(n, k, d):
    """Radial derivative of the space-form Green's function (always <= 0)."""
    if d <= 0:
        raise DomainError("distance must be positive")
    area = unit_sphere_area(n)
    if k == 0.0:
        if n < 3:
            raise UnsupportedError("flat Green's function needs n >= 3")
        return -d ** (1 - n) / area
    return -(k / math.sinh(k * d)) ** (n - 1) / area


class EllipticKernel:
    """Common behavior of radial elliptic kernels."""

    def __init__(self, geom):
        if geom.kind == SHRINKING_SPHERE:
            raise UnsupportedError("elliptic kernels need a static model")
        self.geom = geom
        self.n = geom.n

    parabolic = False

    def value(self, rho):
        raise NotImplementedError

    def dvalue(self, rho):
        raise NotImplementedError

    def grad_norm(self, rho):
        return -self.dvalue(rho)

    def evaluate(self, rho):
        return self.value(rho), self.grad_norm(rho)


class GreenKernel(EllipticKernel):
    """Minimal positive Green's function of a strongly non-parabolic model.

    Flat models need n >= 3; hyperbolic models work for every n >= 2 since
    their Green's function decays exponentially.
    """

    kind = EXACT_GREEN

    def __init__(self, geom):
        super().__init__(geom)
        if geom.is_flat and geom.n < 3:
            raise UnsupportedError("flat space is not strongly non-parabolic for n < 3")
        self._k = geom.k if geom.kind == HYPERBOLIC else 0.0

    def value(self, rho):
        return _spaceform_green_value(self.n, self._k, rho)

    def dvalue(self, rho):
        return _spaceform_green_dvalue(self.n, self._k, rho)

    def grad_norm(self, rho):
        # exact flux normalization: |grad G| * area(rho) = 1
        return 1.0 / (unit_sphere_area(self.n) * self.geom.warp(rho) ** (self.n - 1))


class SubGreenKernel(EllipticKernel):
    """Space-form comparison kernel evaluated at the manifold distance.

    On a model with Ricci curvature >= -(n-1) k^2 the radial space-form
    profile satisfies Delta G >= -delta, turning the mean value identity into
    a lower bound.  When the model *is* the space form the kernel coincides
    with the exact Green's function.
    """

    kind = SUB_GREEN

    def __init__(self, geom, k=1.0):
        super().__init__(geom)
        if k < 0:
            raise DomainError("comparison curvature k must be >= 0")
        geom_k = geom.k if geom.kind == HYPERBOLIC else 0.0
        if k < geom_k:
            raise DomainError(
                f"comparison requires Ric >= -(n-1)k^2: need k >= {geom_k}")
        if k == 0.0 and geom.n < 3:
            raise UnsupportedError("k = 0 comparison needs n >= 3")
        self.k = k

    def value(self, rho):
        return _spaceform_green_value(self.n, self.k, rho)

    def dvalue(self, rho):
        return _spaceform_green_dvalue(self.n, self.k, rho)


class SupGreenKernel(EllipticKernel):
    """Euclidean Green's profile at manifold distance on Cartan-Hadamard models."""

    kind = SUP_GREEN

    def __init__(self, geom):
        super().__init__(geom)
        if geom.n < 3:
            raise UnsupportedError("sup-Green comparison needs n >= 3")
        if not (geom.is_flat or geom.kind == HYPERBOLIC):
            raise UnsupportedError("sup-Green needs a nonpositively curved model")

    def value(self, rho):
        return _spaceform_green_value(self.n, 0.0, rho)

    def dvalue(self, rho):
        return _spaceform_green_dvalue(self.n, 0.0, rho)


class ParabolicKernel:
    """Common behavior of parabolic kernels (backward time tau > 0).

    Subclasses implement the comoving-coordinate trio ``value_cm``,
    ``dx_cm``, ``dtau_cm``; radius-based wrappers convert at the slice time
    t = -tau.
    """

    parabolic = True

    def __init__(self, geom):
        self.geom = geom
        self.n = geom.n

    def _check_tau(self, tau):
        if tau <= 0:
            raise DomainError("backward time tau must be positive")
        self.geom.check_time(-tau)

    def x_of_rho(self, rho, tau):
        return self.geom.x_of_rho(rho, -tau)

    def rho_of_x(self, x, tau):
        return self.geom.rho_of_x(x, -tau)

    def value(self, rho, tau):
        return self.value_cm(self.x_of_rho(rho, tau), tau)

    def grad_norm_cm(self, x, tau):
        return abs(self.dx_cm(x, tau)) / math.sqrt(self.geom.m2(x, -tau))

    def grad_norm(self, rho, tau):
        return self.grad_norm_cm(self.x_of_rho(rho, tau), tau)

    def dtau(self, rho, tau):
        return self.dtau_cm(self.x_of_rho(rho, tau), tau)

    def evaluate(self, rho, tau):
        x = self.x_of_rho(rho, tau)
        return (self.value_cm(x, tau), self.grad_norm_cm(x, tau),
                self.dtau_cm(x, tau))

    def liyau_cm(self, x, tau):
        """|grad log u|^2 - (log u)_tau; subclasses override for stability."""
        v = self.value_cm(x, tau)
        return (self.grad_norm_cm(x, tau) / v) ** 2 - self.dtau_cm(x, tau) / v

    def liyau(self, rho, tau):
        return self.liyau_cm(self.x_of_rho(rho, tau), tau)

    def mass(self, tau, epsabs=1e-10):
        """Spatial integral of the kernel at backward time tau."""
        self._check_tau(tau)
        geom, t = self.geom, -tau
        area = unit_sphere_area(self.n)

        def f(x):
            w = geom.warp_cm(x, t)
            return (self.value_cm(x, tau) * area * w ** (self.n - 1)
                    * math.sqrt(geom.m2(x, t)))

        hi = geom.x_max(t)
        if math.isinf(hi):
            hi = 2.0 * math.sqrt(4.0 * tau * 745.0)  # exp underflow horizon
        val, _ = integrate_1d(f, 0.0, hi, epsabs=epsabs, epsrel=1e-9)
        return val


class HeatKernel(ParabolicKernel):
    """Exact heat kernel: flat models for every n, hyperbolic models for n = 3.

    Conventions: tau is backward time, the kernel solves the backward heat
    equation d/dtau = Delta on the static model and integrates to unit mass.
    """

    kind = HEAT

    def __init__(self, geom):
        super().__init__(geom)
        if geom.kind == HYPERBOLIC:
            if geom.n != 3:
                raise UnsupportedError("hyperbolic heat kernel implemented for n = 3 only")
            self._k = geom.k
        elif geom.is_flat:
            self._k = 0.0
        else:
            raise UnsupportedError("exact heat kernels need a static model")

    def value_cm(self, x, tau):
        self._check_tau(tau)
        n = self.n
        gauss = (4.0 * math.pi * tau) ** (-n / 2.0) * math.exp(-x * x / (4.0 * tau))
        if self._k == 0.0:
            return gauss
        kx = self._k * x
        ratio = kx / math.sinh(kx) if kx > 1e-8 else 1.0 - kx * kx / 6.0
        return gauss * ratio * math.exp(-self._k ** 2 * tau)

    def dx_cm(self, x, tau):
        v = self.value_cm(x, tau)
        if self._k == 0.0:
            return v * (-x / (2.0 * tau))
        kx = self._k * x
        if kx > 1e-4:
            dlog = 1.0 / x - self._k / math.tanh(kx)
        else:
            dlog = -self._k ** 2 * x / 3.0 + self._k ** 4 * x ** 3 / 45.0
        return v * (dlog - x / (2.0 * tau))

    def dtau_cm(self, x, tau):
        v = self.value_cm(x, tau)
        base = -self.n / (2.0 * tau) + x * x / (4.0 * tau * tau)
        return v * (base - self._k ** 2)

    def liyau_cm(self, x, tau):
        # log-domain evaluation, exact for the flat Gaussian: n / (2 tau)
        if self._k == 0.0:
            return self.n / (2.0 * tau)
        kx = self._k * x
        if kx > 1e-4:
            dlog = 1.0 / x - self._k / math.tanh(kx)
        else:
            dlog = -self._k ** 2 * x / 3.0
        dlog -= x / (2.0 * tau)
        dtau_log = -self.n / (2.0 * tau) + x * x / (4.0 * tau * tau) - self._k ** 2
        return dlog * dlog - dtau_log


class SubHeatKernel(ParabolicKernel):
    """Reduced-distance kernel (4 pi tau)^(-n/2) exp(-ell).

    ``field`` is a ReducedDistanceField; its value is obtained by geodesic
    shooting, so the spatial gradient and the time derivative (at fixed
    manifold point) are centered finite differences of ell.  The spatial
    step is 1e-4 * max(1, rho); the tau step is relative (2e-3 * tau) to
    keep the difference quotient accurate against the 1/tau blowup of ell.
    """

    kind = SUB_HEAT

    def __init__(self, field):
        super().__init__(field.flow)
        self.field = field
        self.h_space = 1e-4
        self.h_tau_rel = 1e-3

    def ell_cm(self, x, tau):
        return self.field.ell_cm(abs(x), tau)

    def value_cm(self, x, tau):
        self._check_tau(tau)
        n = self.n
        return (4.0 * math.pi * tau) ** (-n / 2.0) * math.exp(-self.ell_cm(x, tau))

    def dx_cm(self, x, tau):
        if x <= 1e-8:
            return 0.0  # radial symmetry; below FD resolution
        h = self.h_space * max(1.0, x)
        if x < 2.0 * h:
            h = 0.5 * x  # keep the stencil on one side of the center
        dl = (self.ell_cm(x + h, tau) - self.ell_cm(x - h, tau)) / (2.0 * h)
        return -self.value_cm(x, tau) * dl

    def dtau_cm(self, x, tau):
        h = self.h_tau_rel * tau
        dl = (self.ell_cm(x, tau + h) - self.ell_cm(x, tau - h)) / (2.0 * h)
        return self.value_cm(x, tau) * (-self.n / (2.0 * tau) - dl)

    def grad_log_cm(self, x, tau):
        """Signed d(log K)/dx = -d ell/dx by centered differences."""
        if x <= 1e-8:
            return 0.0
        h = self.h_space * max(1.0, x)
        if x < 2.0 * h:
            h = 0.5 * x
        return -(self.ell_cm(x + h, tau) - self.ell_cm(x - h, tau)) / (2.0 * h)

    def liyau_cm(self, x, tau):
        # assembled from ell so it stays finite where the kernel underflows
        h = self.h_tau_rel * tau
        dl_tau = (self.ell_cm(x, tau + h) - self.ell_cm(x, tau - h)) / (2.0 * h)
        grad2 = self.grad_log_cm(x, tau) ** 2 / self.geom.m2(x, -tau)
        return grad2 + dl_tau + self.n / (2.0 * tau)


def mcf_sup_heat_kernel(x0, y, tau, n):
    """Ambient Gaussian with intrinsic normalization n at backward time tau."""
    if tau <= 0:
        raise DomainError("backward time tau must be positive")
    d2 = sum((float(a) - float(b)) ** 2 for a, b in zip(x0, y))
    return (4.0 * math.pi * tau) ** (-n / 2.0) * math.exp(-d2 / (4.0 * tau))


class McfShrinkingSphereTrack:
    """Space-time track of the shrinking round n-sphere in R^(n+1).

    Centered at the space-time singularity, the slice at backward time tau is
    the sphere of radius sqrt(2 n tau); the ambient Gaussian is constant on
    each slice, so its level sets in the track are whole slices.  Time
    derivatives are material (following the flowing immersion).
    """

    kind = MCF_SUP_HEAT
    parabolic = True

    def __init__(self, n):
        if n < 1:
            raise UnsupportedError("track dimension must be >= 1")
        self.n = n

    def slice_radius(self, tau):
        return math.sqrt(2.0 * self.n * tau)

    def slice_area(self, tau):
        return unit_sphere_area(self.n + 1) * self.slice_radius(tau) ** self.n

    def value(self, tau):
        if tau <= 0:
            raise DomainError("backward time tau must be positive")
        return (4.0 * math.pi * tau) ** (-self.n / 2.0) * math.exp(-self.n / 2.0)

    def dtau_material(self, tau):
        # |y(p, tau)|^2 / (4 tau) = n/2 is constant along the track, so only
        # the (4 pi tau)^(-n/2) prefactor varies.
        return self.value(tau) * (-self.n / (2.0 * tau))

    def grad_tangential(self, tau):
        return 0.0

    def mean_curvature_sq(self, tau):
        # |H|^2 = (n / radius)^2 = n / (2 tau)
        return self.n / (2.0 * tau)

    def tau_max(self, r):
        # value(tau) = r^(-n)  <=>  4 pi tau = r^2 / e
        if r <= 0:
            raise DomainError("level parameter r must be positive")
        return r * r / (4.0 * math.pi * math.e)


def liyau_expression(kernel, rho, tau):
    """|grad log u|^2 - (log u)_tau for a parabolic kernel."""
    if not getattr(kernel, "parabolic", False):
        raise UnsupportedError("Li-Yau expression needs a parabolic kernel")
    return kernel.liyau(rho, tau)
