"""Taylor-series model of the Dirichlet space.

Functions are represented by truncated power series sum c_n z^n, and the
Dirichlet inner product is the coefficient form

    <f, g> = c_0(f) conj(c_0(g)) + sum_{n >= 1} n c_n(f) conj(c_n(g)),

the Parseval identity for |f(0)|^2 + int |f'|^2 dA.  Coefficients of an
arbitrary evaluable function are extracted from uniform samples on the
circle |z| = rho by a discrete Fourier sum.

This module does not use the closed-form kernel formulas; it is the
independent check on them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import SamplingError

DEFAULT_RHO = 0.9
DEFAULT_ORDER = 512
TAIL_TOLERANCE = 1e-6
# DFT outputs below this multiple of max|f| on the circle are rounding noise
NOISE_FLOOR = 1e-13


@dataclass(frozen=True)
class TaylorSeries:
    """Coefficients c_0..c_N.  ``radius`` records the sampling radius, if any."""

    coeffs: np.ndarray
    radius: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=complex))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, z):
        # Horner, highest coefficient first
        return np.polyval(self.coeffs[::-1], z)

    def padded(self, order: int) -> np.ndarray:
        out = np.zeros(order + 1, dtype=complex)
        out[: len(self.coeffs)] = self.coeffs
        return out


def _weights(order: int) -> np.ndarray:
    w = np.arange(order + 1, dtype=float)
    w[0] = 1.0
    return w


def dirichlet_inner(f: TaylorSeries, g: TaylorSeries) -> complex:
    n = max(f.order, g.order)
    cf, cg = f.padded(n), g.padded(n)
    return complex(np.sum(_weights(n) * cf * np.conj(cg)))


def dirichlet_norm_sq(f: TaylorSeries) -> float:
    return float(np.sum(_weights(f.order) * np.abs(f.coeffs) ** 2))


def kernel_series(w, order: int) -> TaylorSeries:
    """c_0 = 1, c_n = conj(w)^n / n, from log 1/(1 - x) = sum x^n / n."""
    w = complex(getattr(w, "w", w))
    n = np.arange(1, order + 1)
    coeffs = np.empty(order + 1, dtype=complex)
    coeffs[0] = 1.0
    coeffs[1:] = np.conj(w) ** n / n
    return TaylorSeries(coeffs)


def _sample(f: Callable, rho: float, m: int) -> np.ndarray:
    nodes = rho * np.exp(2j * np.pi * np.arange(m) / m)
    try:
        with np.errstate(all="ignore"):  # non-finite values are caught below
            values = np.asarray(f(nodes), dtype=complex)
        if values.shape != nodes.shape:
            values = np.broadcast_to(values, nodes.shape).astype(complex)
    except Exception as exc:  # noqa: BLE001 - any fault at a node is a sampling failure
        raise SamplingError(f"evaluation failed on |z| = {rho}: {exc}") from exc
    if not np.all(np.isfinite(values)):
        raise SamplingError(f"non-finite values on |z| = {rho}")
    return values


def series_from_samples(
    f: Callable,
    rho: float,
    order: int,
    samples: int | None = None,
    noise_floor: float | None = None,
) -> TaylorSeries:
    """Coefficients c_0..c_order of f from ``samples`` (default 4*order) nodes on |z| = rho.

    ``f`` must accept a numpy array of nodes.  With ``noise_floor`` set,
    Fourier coefficients smaller than noise_floor * max|f| are zeroed
    before the division by rho^n, which would otherwise amplify rounding
    noise without bound.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho = {rho} must lie in (0, 1)")
    m = samples if samples is not None else max(4 * order, 4)
    if m < 2 * order:
        raise ValueError(f"{m} samples cannot resolve order {order}")
    values = _sample(f, rho, m)
    cut = None if noise_floor is None else noise_floor * float(np.max(np.abs(values)))
    return _from_values(values, rho, order, cut)


def _from_values(values, rho, order, cut):
    hat = np.fft.fft(values)[: order + 1] / len(values)
    if cut is not None:
        hat[np.abs(hat) <= cut] = 0.0
    coeffs = hat / rho ** np.arange(order + 1)
    return TaylorSeries(coeffs, radius=rho)


class NormEstimate(NamedTuple):
    norm_sq: float
    tail_flag: bool


def tail_fraction(series: TaylorSeries, noise_limited: bool = False) -> float:
    """Share of the Dirichlet norm that may lie beyond what the series resolves.

    If coefficients survive into the last decade of the order, this is the
    weight of that decade.  If instead the series stops early because the
    sampled coefficients sank under the noise floor (``noise_limited``),
    the decay rate of the last two surviving coefficients is extrapolated
    geometrically past the cut.
    """
    c = series.coeffs
    n_top = series.order
    weights = _weights(n_top) * np.abs(c) ** 2
    total = float(np.sum(weights))
    if total == 0.0:
        return 0.0
    nz = np.flatnonzero(c)
    last = int(nz[-1])
    if last > 0.9 * n_top:
        start = n_top - max(1, math.ceil(n_top / 10)) + 1
        return float(np.sum(weights[start:])) / total
    if not noise_limited or len(nz) < 2:
        return 0.0
    return truncation_tail(series) / total


def truncation_tail(series: TaylorSeries) -> float:
    """Dirichlet weight past the last nonzero coefficient, extrapolated geometrically.

    Uses the decay rate of the last two nonzero coefficients; infinite if
    they do not decay.
    """
    c = series.coeffs
    nz = np.flatnonzero(c)
    if len(nz) < 2:
        return 0.0
    last, prev = int(nz[-1]), int(nz[-2])
    r = (abs(c[last]) / abs(c[prev])) ** (1.0 / (last - prev))
    if r >= 1.0:
        return math.inf
    r2 = r * r
    # sum_{k >= 1} (last + k) |c_last|^2 r^{2k}
    return float(abs(c[last]) ** 2 * (last * r2 / (1 - r2) + r2 / (1 - r2) ** 2))


def dirichlet_norm_estimate(
    f: Callable,
    rho: float = DEFAULT_RHO,
    order: int = DEFAULT_ORDER,
    samples: int | None = None,
    reference: float = 0.0,
) -> NormEstimate:
    """||f||^2 from circle samples, with a flag when truncation makes it unreliable.

    ``reference`` is the magnitude of the quantities whose difference f is
    (if any); the noise floor is taken relative to it, so a function that
    vanishes up to rounding is seen as zero rather than as noise.
    """
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho = {rho} must lie in (0, 1)")
    m = samples if samples is not None else max(4 * order, 4)
    values = _sample(f, rho, m)
    scale = max(float(np.max(np.abs(values))), float(reference))
    series = _from_values(values, rho, order, NOISE_FLOOR * scale)
    norm_sq = dirichlet_norm_sq(series)
    c = series.coeffs
    nz = np.flatnonzero(c)
    noise_limited = False
    if len(nz) >= 2 and nz[-1] < order:
        # the cut is noise-limited when the next coefficient, predicted from
        # the decay of the last two sampled ones, would fall under the floor
        last, prev = int(nz[-1]), int(nz[-2])
        hat_last = abs(c[last]) * rho**last
        hat_prev = abs(c[prev]) * rho**prev
        step = (hat_last / hat_prev) ** (1.0 / (last - prev))
        noise_limited = hat_last * step <= 10.0 * NOISE_FLOOR * scale
    flag = tail_fraction(series, noise_limited) > TAIL_TOLERANCE
    return NormEstimate(norm_sq, bool(flag))
