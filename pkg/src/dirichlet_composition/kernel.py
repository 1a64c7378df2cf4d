"""Reproducing-kernel calculus of the classical Dirichlet space.

K_w(z) = 1 + log 1/(1 - conj(w) z) with the principal logarithm.  For
|w|, |z| < 1 the argument 1 - conj(w) z has positive real part, so the
principal branch never meets its cut.

Points near the unit circle can be given in decomposed form w = (1 - delta)
zeta through `KernelPoint.polar`; every quantity involving 1 - |w|^2 is
then computed from delta and stays accurate down to delta ~ 1e-14.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, ImageAtBoundaryError
from .mobius import MobiusMap, apply, disk_gap, disk_gap_polar

EPS_BDY = 1e-14


@dataclass(frozen=True)
class KernelPoint:
    """A point of the open disk, optionally carrying delta = 1 - |w| exactly."""

    w: complex
    delta: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "w", complex(self.w))
        if self.delta is not None:
            if not 0.0 < self.delta <= 1.0 or self.delta < EPS_BDY:
                raise DomainError(f"delta = {self.delta} is outside [{EPS_BDY}, 1]")
        elif abs(self.w) >= 1.0 - EPS_BDY:
            raise DomainError(f"|w| = {abs(self.w)} is not inside the disk")

    @classmethod
    def polar(cls, delta: float, zeta: complex) -> "KernelPoint":
        """The point (1 - delta) zeta; zeta is projected onto the circle."""
        zeta = complex(zeta)
        zeta = zeta / abs(zeta)
        return cls((1.0 - delta) * zeta, float(delta))

    @property
    def one_minus_abs2(self) -> float:
        """1 - |w|^2."""
        if self.delta is not None:
            return self.delta * (2.0 - self.delta)
        r = abs(self.w)
        return (1.0 - r) * (1.0 + r)


def as_point(w) -> KernelPoint:
    return w if isinstance(w, KernelPoint) else KernelPoint(w)


def kernel_eval(w, z):
    """K_w(z) for a kernel point w and z (scalar or array) in the open disk."""
    w = as_point(w).w
    z_arr = np.asarray(z, dtype=complex)
    if np.any(np.abs(z_arr) >= 1.0):
        raise DomainError("kernel evaluated outside the open disk")
    out = 1.0 - np.log(1.0 - w.conjugate() * z_arr)
    return complex(out) if out.ndim == 0 else out


def kernel_norm_sq(w) -> float:
    """||K_w||^2 = 1 + ln 1/(1 - |w|^2)."""
    return 1.0 - math.log(as_point(w).one_minus_abs2)


def kernel_norm_sq_polar(delta) -> np.ndarray | float:
    """||K_w||^2 for |w| = 1 - delta (vectorised over delta)."""
    delta = np.asarray(delta, dtype=float)
    out = 1.0 - np.log(delta * (2.0 - delta))
    return out if out.ndim else float(out)


def kernel_inner(w1, w2) -> complex:
    """<K_{w1}, K_{w2}> = K_{w1}(w2)."""
    return kernel_eval(w1, as_point(w2).w)


def adjoint_on_kernel(phi: MobiusMap, w) -> KernelPoint:
    """The point phi(w), since C*_phi K_w = K_{phi(w)}."""
    image = complex(apply(phi, as_point(w).w))
    if abs(image) >= 1.0 - EPS_BDY:
        raise ImageAtBoundaryError(f"phi(w) = {image} is not inside the disk")
    return KernelPoint(image)


@dataclass(frozen=True)
class RatioSample:
    """||(C*_phi - C*_psi) K_w||^2 / ||K_w||^2 with its three log terms.

    ``log_norm_phi`` = ln 1/(1 - |phi(w)|^2), ``log_norm_psi`` likewise, and
    ``cross`` = ln 1/|1 - conj(phi(w)) psi(w)|; the ratio is
    (log_norm_phi + log_norm_psi - 2 cross) / ||K_w||^2.
    """

    w: KernelPoint
    ratio: float
    log_norm_phi: float
    log_norm_psi: float
    cross: float


def ratio_terms(phi: MobiusMap, psi: MobiusMap, delta, zeta):
    """Vectorised ratio and log terms at w = (1 - delta) zeta.

    The numerator uses |1 - conj(p) q|^2 = (1 - |p|^2)(1 - |q|^2) + |p - q|^2,
    which turns it into log1p(|p - q|^2 / ((1 - |p|^2)(1 - |q|^2))): non-negative
    by construction and exactly zero when phi = psi.

    Returns (ratio, log_norm_phi, log_norm_psi, cross) as arrays broadcast
    over delta and zeta.
    """
    delta = np.asarray(delta, dtype=float)
    zeta = np.asarray(zeta, dtype=complex)
    w = (1.0 - delta) * zeta
    gp = disk_gap_polar(phi, delta, zeta)
    gq = disk_gap_polar(psi, delta, zeta)
    return _combine(apply(phi, w), apply(psi, w), gp, gq, kernel_norm_sq_polar(delta))


def _combine(p, q, gp, gq, norm_sq):
    gp = np.asarray(gp, dtype=float)
    gq = np.asarray(gq, dtype=float)
    if np.any(gp <= 0) or np.any(gq <= 0):
        raise ImageAtBoundaryError("a symbol image reached the unit circle")
    gap2 = np.abs(np.asarray(p) - np.asarray(q)) ** 2
    numer = np.log1p(gap2 / (gp * gq))
    log_p = -np.log(gp)
    log_q = -np.log(gq)
    cross = -0.5 * np.log(gp * gq + gap2)
    return numer / norm_sq, log_p, log_q, cross


def diff_ratio(phi: MobiusMap, psi: MobiusMap, w) -> RatioSample:
    """The normalised-kernel ratio at a kernel point.

    A point built with `KernelPoint.polar` takes the boundary-stable path.
    """
    pt = as_point(w)
    if pt.delta is not None:
        zeta = pt.w / abs(pt.w)
        ratio, lp, lq, cross = ratio_terms(phi, psi, pt.delta, zeta)
    else:
        mu = pt.one_minus_abs2
        ratio, lp, lq, cross = _combine(
            apply(phi, pt.w),
            apply(psi, pt.w),
            disk_gap(phi, pt.w, mu),
            disk_gap(psi, pt.w, mu),
            1.0 - math.log(mu),
        )
    return RatioSample(pt, float(ratio), float(lp), float(lq), float(cross))


def diff_ratio_polar(phi: MobiusMap, psi: MobiusMap, delta: float, zeta: complex) -> RatioSample:
    return diff_ratio(phi, psi, KernelPoint.polar(delta, zeta))
