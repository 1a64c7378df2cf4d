"""Adjoints and commutators of composition operators with Mobius symbols.

For a linear-fractional self-map psi with determinant-1 coefficients,

    (C*_psi f)(w) = f(0) K_{psi(0)}(w) - s f(psi*(0)) + s f(psi*(w)),   s = 1,

where psi* is the Krein adjoint.  The formula is not invariant under
rescaling the coefficients (psi* is, s = ad - bc is not); with s taken from
the determinant-1 representative it reproduces C*_psi K_w = K_{psi(w)}.

Hence C*_psi = C_{psi*} + (finite rank), and

    [C*_psi, C_phi] = (C_{psi* o phi} - C_{phi o psi*}) + (compact),

so for automorphisms the commutator is compact exactly when phi and psi*
commute.  Two non-identity disk automorphisms commute exactly when they
share their fixed points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .compactness import (
    Clause,
    CompactnessVerdict,
    Decision,
    RadiusLadder,
    ScanConfig,
    boundary_scan,
)
from .errors import KreinImageError, NotAutomorphismError, NotSelfMapError
from .kernel import kernel_eval, kernel_norm_sq_polar
from .mobius import (
    MapClassification,
    MobiusMap,
    apply,
    classify,
    compose,
    fixed_points,
    is_identity,
    is_self_map,
    krein_adjoint,
    maps_equal,
    same_fixed_points,
)
from .oracle import DEFAULT_ORDER, DEFAULT_RHO, dirichlet_norm_estimate


@dataclass(frozen=True)
class AdjointDecomposition:
    """C*_psi = s C_{psi*} + K with K f = f(0) K_{psi(0)} - s f(psi*(0)) K_0."""

    s: complex
    krein: MobiusMap
    psi_at_0: complex
    krein_at_0: complex


def adjoint_decomposition(psi: MobiusMap) -> AdjointDecomposition:
    star = krein_adjoint(psi)
    return AdjointDecomposition(1.0, star, complex(apply(psi, 0j)), complex(apply(star, 0j)))


def _inside(values, what):
    if np.any(np.abs(values) >= 1.0):
        raise KreinImageError(f"the Krein adjoint sends {what} outside the disk")


def adjoint_apply(psi: MobiusMap, f: Callable, w):
    """(C*_psi f)(w); ``f`` must accept scalars and numpy arrays."""
    dec = adjoint_decomposition(psi)
    w_arr = np.asarray(w, dtype=complex)
    star_w = apply(dec.krein, w_arr)
    _inside(star_w, "w")
    _inside(dec.krein_at_0, "0")
    s = dec.s
    out = f(0j) * kernel_eval(dec.psi_at_0, w_arr) - s * f(dec.krein_at_0) + s * f(star_w)
    return complex(out) if np.ndim(out) == 0 else out


def commutator_apply(psi: MobiusMap, phi: MobiusMap, f: Callable, w):
    """([C*_psi, C_phi] f)(w) = C*_psi(f o phi)(w) - (C*_psi f)(phi(w))."""
    w_arr = np.asarray(w, dtype=complex)
    first = adjoint_apply(psi, lambda z: f(apply(phi, z)), w_arr)
    second = adjoint_apply(psi, f, apply(phi, w_arr))
    return first - second


def _pair(psi: MobiusMap, phi: MobiusMap) -> tuple[MobiusMap, MobiusMap]:
    star = krein_adjoint(psi)
    return compose(star, phi), compose(phi, star)


def difference_pair(psi: MobiusMap, phi: MobiusMap) -> tuple[MobiusMap, MobiusMap]:
    """(psi* o phi, phi o psi*), the symbols of the non-compact part."""
    left, right = _pair(psi, phi)
    for m in (left, right):
        if not is_self_map(m):
            raise NotSelfMapError(f"{m!r} does not map the disk into itself")
    return left, right


def commute_check(psi: MobiusMap, phi: MobiusMap, tol: float | None = None) -> bool:
    left, right = _pair(psi, phi)
    return maps_equal(left, right) if tol is None else maps_equal(left, right, tol)


def _require_automorphism(*maps):
    for m in maps:
        if not m.is_automorphism:
            raise NotAutomorphismError(f"{m!r} is not a disk automorphism")


def commutator_compact_decision(
    psi: MobiusMap, phi: MobiusMap, config: ScanConfig | None = None
) -> CompactnessVerdict:
    """Is [C*_psi, C_phi] non-trivially compact?  Automorphism symbols only.

    Compact exactly when phi and psi* have the same fixed points.  Two
    elliptic symbols are compact under the both-elliptic clause only when
    that also holds: elliptic disk automorphisms with different fixed
    points do not commute, and then the difference C_{psi* o phi} -
    C_{phi o psi*} is not compact.
    """
    _require_automorphism(psi, phi)
    if is_identity(psi) or is_identity(phi):
        return CompactnessVerdict(Decision.OUT_OF_SCOPE, Clause.IDENTITY_EXCLUSION)

    star = krein_adjoint(psi)
    fp_phi, fp_star = fixed_points(phi), fixed_points(star)
    kinds = {"phi": classify(phi).value, "psi": classify(psi).value}
    shared = same_fixed_points(fp_phi, fp_star)
    both_elliptic = kinds["phi"] == kinds["psi"] == MapClassification.ELLIPTIC.value

    if shared:
        clause = Clause.BOTH_ELLIPTIC if both_elliptic else Clause.SAME_FIXED_POINTS
        return CompactnessVerdict(
            Decision.COMPACT_NONTRIVIALLY, clause, None, fp_phi, fp_star, kinds
        )
    if commute_check(psi, phi):
        # unreachable for genuine automorphisms; kept so that the decision
        # never contradicts exact commutation when fixed points are ill-conditioned
        return CompactnessVerdict(
            Decision.COMPACT_NONTRIVIALLY, Clause.COMMUTE_EXACTLY, None, fp_phi, fp_star, kinds
        )
    scan = boundary_scan(*_pair(psi, phi), config)
    return CompactnessVerdict(
        Decision.NOT_COMPACT, Clause.COROLLARY_WITNESS, scan, fp_phi, fp_star, kinds
    )


def essentially_normal(phi: MobiusMap) -> CompactnessVerdict:
    """The self-commutator [C*_phi, C_phi] is compact for every automorphism."""
    _require_automorphism(phi)
    if is_identity(phi):
        return CompactnessVerdict(
            Decision.COMPACT_TRIVIALLY_ZERO,
            Clause.COMMUTE_EXACTLY,
            classifications={"phi": MapClassification.IDENTITY.value},
        )
    star = krein_adjoint(phi)
    fp_phi, fp_star = fixed_points(phi), fixed_points(star)
    kind = classify(phi)
    kinds = {"phi": kind.value, "psi": kind.value}
    if kind is MapClassification.ELLIPTIC:
        clause = Clause.BOTH_ELLIPTIC
    elif same_fixed_points(fp_phi, fp_star):
        clause = Clause.SAME_FIXED_POINTS
    else:
        # phi* = phi^{-1} for automorphisms, so this branch means the fixed
        # points were computed inconsistently
        clause = Clause.COMMUTE_EXACTLY
    return CompactnessVerdict(Decision.COMPACT_NONTRIVIALLY, clause, None, fp_phi, fp_star, kinds)


def commutator_norm_trace(
    psi: MobiusMap,
    phi: MobiusMap,
    zeta: complex,
    ladder: RadiusLadder | None = None,
    rho: float = DEFAULT_RHO,
    order: int = DEFAULT_ORDER,
) -> list[float | None]:
    """||[C*_psi, C_phi] k_w|| along w = (1 - delta) zeta, k_w = K_w/||K_w||.

    Norms come from the Taylor-series oracle.  A rung whose estimate is
    truncation-limited (tail flag set) is reported as None.
    """
    _require_automorphism(psi, phi)
    ladder = ladder or RadiusLadder(4, 14)
    zeta = complex(zeta) / abs(zeta)
    trace: list[float | None] = []
    for delta in ladder.deltas:
        w = (1.0 - delta) * zeta
        scale = 1.0 / np.sqrt(kernel_norm_sq_polar(delta))

        def k_w(z, w=w, scale=scale):
            return scale * kernel_eval(w, z)

        # |K_w| <= 1 + pi/2 + ln(1/delta) on the disk bounds every term of the commutator
        reference = scale * (1.0 + np.pi / 2 - np.log(delta))
        est = dirichlet_norm_estimate(
            lambda v: commutator_apply(psi, phi, k_w, v),
            rho=rho,
            order=order,
            reference=reference,
        )
        trace.append(None if est.tail_flag else float(np.sqrt(max(est.norm_sq, 0.0))))
    return trace
