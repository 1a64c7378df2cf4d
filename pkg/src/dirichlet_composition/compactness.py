"""Boundary analysis of C_phi - C_psi.

If C_phi - C_psi is compact on the Dirichlet space, then

    q(w) = {(1-|w|^2)/(1-|phi(w)|^2) + (1-|w|^2)/(1-|psi(w)|^2)} |phi(w) - psi(w)|

tends to 0 as |w| -> 1.  This module evaluates q on radial ladders
w = (1 - delta) zeta, scans the circle for directions where q stays away
from zero, classifies the limiting behaviour of the normalised-kernel
ratio along a direction, and decides the automorphism case, where a
compact difference forces phi = psi.

The scan is only ever evidence *against* compactness: a small q is
consistent with compactness but proves nothing.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Sequence

import numpy as np

from .errors import ImageAtBoundaryError, NotAutomorphismError, PrefixTooShortError
from .kernel import ratio_terms
from .mobius import (
    MobiusMap,
    apply,
    disk_gap,
    disk_gap_polar,
    maps_equal,
    to_automorphism_form,
)

SCHEMA_VERSION = "1"
CSV_COLUMNS = ("zeta_index", "delta", "q", "factor_phi", "factor_psi", "gap", "ratio")


@dataclass(frozen=True)
class RadiusLadder:
    """delta_k = 2^-k for k = k_min..k_max."""

    k_min: int = 4
    k_max: int = 40

    def __post_init__(self):
        if not 1 <= self.k_min <= self.k_max <= 46:
            raise ValueError(f"bad ladder exponents {self.k_min}..{self.k_max}")

    @property
    def exponents(self) -> np.ndarray:
        return np.arange(self.k_min, self.k_max + 1)

    @property
    def deltas(self) -> np.ndarray:
        return np.ldexp(1.0, -self.exponents)

    def __len__(self):
        return self.k_max - self.k_min + 1


@dataclass(frozen=True)
class ScanConfig:
    directions: int = 256
    ladder: RadiusLadder = field(default_factory=RadiusLadder)
    q_threshold: float = 1e-3
    check_bounds: bool = True

    def zetas(self) -> np.ndarray:
        angles = 2.0 * np.pi * np.arange(self.directions) / self.directions
        return np.exp(1j * angles)


# -- pointwise quantities -------------------------------------------------------


@dataclass(frozen=True)
class NecessaryConditionSample:
    delta: float
    zeta: complex
    q_value: float
    factor_phi: float
    factor_psi: float
    gap: float

    @property
    def w(self) -> complex:
        return (1.0 - self.delta) * self.zeta


def _grid_values(phi: MobiusMap, psi: MobiusMap, delta, zeta):
    """factor_phi, factor_psi, gap and q, broadcast over delta and zeta."""
    delta = np.asarray(delta, dtype=float)
    zeta = np.asarray(zeta, dtype=complex)
    mu = delta * (2.0 - delta)
    gp = disk_gap_polar(phi, delta, zeta)
    gq = disk_gap_polar(psi, delta, zeta)
    if np.any(np.asarray(gp) <= 0) or np.any(np.asarray(gq) <= 0):
        raise ImageAtBoundaryError("1 - |phi(w)|^2 underflowed to zero")
    w = (1.0 - delta) * zeta
    fp = mu / gp
    fq = mu / gq
    gap = np.abs(apply(phi, w) - apply(psi, w))
    return fp, fq, gap, (fp + fq) * gap


def necessary_condition_value(
    phi: MobiusMap, psi: MobiusMap, delta: float, zeta: complex
) -> NecessaryConditionSample:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta = {delta} must lie in (0, 1)")
    zeta = complex(zeta) / abs(zeta)
    fp, fq, gap, q = _grid_values(phi, psi, delta, zeta)
    return NecessaryConditionSample(float(delta), zeta, float(q), float(fp), float(fq), float(gap))


def schwarz_pick_bound(phi: MobiusMap, w: complex) -> tuple[float, float]:
    """(1 - |phi(w)|)/(1 - |w|) and its lower bound (1 - |phi(0)|)/(1 + |phi(0)|)."""
    w = complex(w)
    r = abs(w)
    image = abs(apply(phi, w))
    one_minus = disk_gap(phi, w, (1.0 - r) * (1.0 + r)) / (1.0 + image)
    p0 = abs(apply(phi, 0j))
    return one_minus / (1.0 - r), (1.0 - p0) / (1.0 + p0)


def automorphism_factor_bound(phi: MobiusMap, w: complex) -> tuple[float, float]:
    """|1 - conj(a) w|^2/(1 - |a|^2) and its floor (1 - |a|)/(1 + |a|).

    For |w| < 1 the value equals (1 - |w|^2)/(1 - |phi(w)|^2).
    """
    form = to_automorphism_form(phi)
    a = form.a
    if abs(complex(w)) > 1.0 + 1e-12:
        raise ValueError(f"|w| = {abs(w)} exceeds 1")
    value = abs(1.0 - a.conjugate() * w) ** 2 / (1.0 - abs(a) ** 2)
    return value, (1.0 - abs(a)) / (1.0 + abs(a))


def bound_violations(
    maps: Sequence[MobiusMap], delta, zeta, rel_tol: float = 1e-10
) -> int:
    """Count grid points where the Schwarz-Pick floor or the automorphism
    factor identity fails for any of ``maps``.

    Used inline by scans and ladder runs; the expected count is zero.
    """
    delta = np.asarray(delta, dtype=float)
    zeta = np.asarray(zeta, dtype=complex)
    w = (1.0 - delta) * zeta
    mu = delta * (2.0 - delta)
    count = 0
    for m in maps:
        gm = disk_gap_polar(m, delta, zeta)
        image = np.abs(apply(m, w))
        lhs = gm / (1.0 + image) / delta
        p0 = abs(apply(m, 0j))
        rhs = (1.0 - p0) / (1.0 + p0)
        count += int(np.count_nonzero(lhs < rhs - 1e-12 * max(1.0, rhs)))
        if m.is_automorphism:
            a = to_automorphism_form(m).a
            value = np.abs(1.0 - a.conjugate() * w) ** 2 / (1.0 - abs(a) ** 2)
            lower = (1.0 - abs(a)) / (1.0 + abs(a))
            direct = mu / gm
            bad = (np.abs(value - direct) > rel_tol * np.abs(direct)) | (value < lower)
            count += int(np.count_nonzero(bad))
    return count


# -- boundary scan --------------------------------------------------------------


class ScanVerdict(str, Enum):
    HOLDS = "condition_holds_numerically"
    FAILS = "condition_fails"
    INCONCLUSIVE = "inconclusive"


@dataclass
class BoundaryScanReport:
    """q and its ingredients on a (direction x radius) grid.

    Arrays are indexed [direction, rung].  ``witness_index`` is set exactly
    when the verdict is condition_fails.
    """

    zetas: np.ndarray
    ladder: RadiusLadder
    q: np.ndarray
    factor_phi: np.ndarray
    factor_psi: np.ndarray
    gap: np.ndarray
    ratio: np.ndarray
    q_threshold: float
    verdict: ScanVerdict
    witness_index: int | None
    bound_violations: int = 0

    @property
    def deltas(self) -> np.ndarray:
        return self.ladder.deltas

    @property
    def witness(self) -> complex | None:
        return None if self.witness_index is None else complex(self.zetas[self.witness_index])

    @property
    def max_q_deepest(self) -> float:
        return float(np.max(self.q[:, -1]))

    def sample(self, j: int, k: int) -> NecessaryConditionSample:
        return NecessaryConditionSample(
            float(self.deltas[k]),
            complex(self.zetas[j]),
            float(self.q[j, k]),
            float(self.factor_phi[j, k]),
            float(self.factor_psi[j, k]),
            float(self.gap[j, k]),
        )

    def to_dict(self) -> dict[str, Any]:
        witness = None
        if self.witness_index is not None:
            j = self.witness_index
            witness = {
                "index": j,
                "zeta": _pair(self.zetas[j]),
                "q_deepest": float(self.q[j, -1]),
                "q_trace": [float(x) for x in self.q[j]],
            }
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "boundary_scan",
            "verdict": self.verdict.value,
            "q_threshold": self.q_threshold,
            "directions": len(self.zetas),
            "k_min": self.ladder.k_min,
            "k_max": self.ladder.k_max,
            "max_q_deepest": self.max_q_deepest,
            "q_deepest": [float(x) for x in self.q[:, -1]],
            "witness": witness,
            "bound_violations": self.bound_violations,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(CSV_COLUMNS)
        deltas = self.deltas
        for j in range(len(self.zetas)):
            for k in range(len(deltas)):
                writer.writerow(
                    (
                        j,
                        repr(float(deltas[k])),
                        repr(float(self.q[j, k])),
                        repr(float(self.factor_phi[j, k])),
                        repr(float(self.factor_psi[j, k])),
                        repr(float(self.gap[j, k])),
                        repr(float(self.ratio[j, k])),
                    )
                )
        return buf.getvalue()


def _pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def boundary_scan(
    phi: MobiusMap, psi: MobiusMap, config: ScanConfig | None = None
) -> BoundaryScanReport:
    """Evaluate q on every (direction, rung) cell and return a verdict.

    condition_fails: some direction keeps q above the threshold at the three
    deepest rungs.  condition_holds_numerically: max q at the deepest rung
    is below the threshold.  Anything else is inconclusive.
    """
    config = config or ScanConfig()
    zetas = config.zetas()
    deltas = config.ladder.deltas
    dd, zz = deltas[None, :], zetas[:, None]
    fp, fq, gap, q = _grid_values(phi, psi, dd, zz)
    ratio = ratio_terms(phi, psi, dd, zz)[0]

    thr = config.q_threshold
    tail = q[:, -3:] if q.shape[1] >= 3 else q
    persistent = np.all(tail > thr, axis=1)
    if np.any(persistent):
        masked = np.where(persistent, q[:, -1], -np.inf)
        witness = int(np.argmax(masked))
        verdict = ScanVerdict.FAILS
    else:
        witness = None
        verdict = ScanVerdict.HOLDS if np.max(q[:, -1]) < thr else ScanVerdict.INCONCLUSIVE

    violations = bound_violations((phi, psi), dd, zz) if config.check_bounds else 0
    return BoundaryScanReport(
        zetas, config.ladder, q, fp, fq, gap, ratio, thr, verdict, witness, violations
    )


# -- case analysis along one direction -------------------------------------------


class CaseTag(str, Enum):
    I = "I"
    II = "II"
    III_A = "III-a"
    III_B = "III-b"
    III_C = "III-c"
    NOT_APPLICABLE = "not-applicable"


_PREDICTED = {
    CaseTag.I: "1",
    CaseTag.II: "1",
    CaseTag.III_A: ">=1",
    CaseTag.III_B: ">=1",
    CaseTag.III_C: "2",
}
_REMAINDER = {
    CaseTag.I: "kappa",
    CaseTag.II: "kappa",
    CaseTag.III_A: "lambda",
    CaseTag.III_B: "lambda_tilde",
    CaseTag.III_C: "lambda_hat",
}

# a gap sequence that shrinks by at least this factor per rung, over the
# three deepest rungs, is treated as tending to zero (linear decay gives 1/2)
_DECAY_RATIO = 0.75
_RICHARDSON_TOL = 1e-6
STABILITY_WINDOW = 8
STABILITY_TOL = 1e-3


@dataclass
class CaseReport:
    case_tag: CaseTag
    phi0: complex
    psi0: complex
    Phi0: float
    Psi0: float
    predicted_ratio_limit: str | None
    remainder_name: str | None
    remainder_trace: np.ndarray
    consistent: bool
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.case_tag is not CaseTag.NOT_APPLICABLE

    @property
    def remainder_max(self) -> float:
        if self.remainder_trace.size == 0:
            return 0.0
        return float(np.max(np.abs(self.remainder_trace)))

    @property
    def remainder_stable(self) -> bool:
        """Bounded, and spread over the deepest rungs negligible (no growth)."""
        trace = self.remainder_trace
        if trace.size == 0:
            return True
        if not np.all(np.isfinite(trace)):
            return False
        window = trace[-STABILITY_WINDOW:]
        spread = float(np.max(window) - np.min(window))
        return spread <= STABILITY_TOL * max(1.0, self.remainder_max)

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "kind": "case_report",
            "case": self.case_tag.value,
            "phi0": _pair(self.phi0),
            "psi0": _pair(self.psi0),
            "Phi0": self.Phi0,
            "Psi0": self.Psi0,
            "predicted_ratio_limit": self.predicted_ratio_limit,
            "remainder": self.remainder_name,
            "remainder_trace": [float(x) for x in self.remainder_trace],
            "remainder_max": self.remainder_max,
            "remainder_stable": self.remainder_stable,
            "consistent": self.consistent,
            "reason": self.reason,
        }


def _tends_to_zero(seq: np.ndarray) -> bool:
    s = np.asarray(seq[-3:], dtype=float)
    if len(s) < 3:
        return bool(s[-1] == 0.0)
    if s[-1] == 0.0:
        return True
    with np.errstate(divide="ignore", invalid="ignore"):
        r = s[1:] / s[:-1]
    return bool(np.all(r < _DECAY_RATIO))


def _richardson(seq: np.ndarray):
    """Linear-in-delta extrapolation for a halving ladder."""
    if len(seq) < 2:
        return seq[-1]
    return 2.0 * seq[-1] - seq[-2]


def classify_case(
    phi: MobiusMap,
    psi: MobiusMap,
    zeta: complex,
    ladder: RadiusLadder | None = None,
) -> CaseReport:
    """Estimate the radial limits along zeta and name the branch of the argument.

    Returns a not-applicable report (not an exception) when phi0 = psi0, when
    both images stay inside the disk (q tends to 0), or when the limits do not
    settle over the deepest rungs.
    """
    ladder = ladder or RadiusLadder()
    zeta = complex(zeta) / abs(zeta)
    deltas = ladder.deltas
    w = (1.0 - deltas) * zeta
    mu = deltas * (2.0 - deltas)
    gp = np.asarray(disk_gap_polar(phi, deltas, zeta))
    gq = np.asarray(disk_gap_polar(psi, deltas, zeta))
    p, q = apply(phi, w), apply(psi, w)
    fp, fq = mu / gp, mu / gq

    phi0, psi0 = complex(_richardson(p)), complex(_richardson(q))
    on_phi, on_psi = _tends_to_zero(gp), _tends_to_zero(gq)
    if on_phi:
        phi0 /= abs(phi0)
    if on_psi:
        psi0 /= abs(psi0)
    Phi0 = 0.0 if _tends_to_zero(fp) else float(_richardson(fp))
    Psi0 = 0.0 if _tends_to_zero(fq) else float(_richardson(fq))

    consistent = True
    for seq in (p, q, fp, fq):
        if len(seq) >= 3:
            d1, d2 = abs(seq[-1] - seq[-2]), abs(seq[-2] - seq[-3])
            scale = max(1.0, abs(seq[-1]))
            if d1 > _RICHARDSON_TOL * scale and d1 > 0.75 * d2:
                consistent = False

    def na(reason: str) -> CaseReport:
        return CaseReport(
            CaseTag.NOT_APPLICABLE, phi0, psi0, Phi0, Psi0, None, None, np.array([]), consistent, reason
        )

    if not consistent:
        return na("radial limits did not settle over the deepest rungs")
    if abs(phi0 - psi0) <= 1e-9:
        return na("phi0 = psi0: the factor gap tends to 0")
    if not on_phi and not on_psi:
        return na("both images stay inside the disk: q tends to 0")

    if on_phi and not on_psi:
        tag = CaseTag.I
    elif on_psi and not on_phi:
        tag = CaseTag.II
    elif Phi0 == 0.0 and Psi0 != 0.0:
        tag = CaseTag.III_A
    elif Phi0 != 0.0 and Psi0 == 0.0:
        tag = CaseTag.III_B
    elif Phi0 != 0.0 and Psi0 != 0.0:
        tag = CaseTag.III_C
    else:
        return na("Phi0 = Psi0 = 0 contradicts a non-vanishing limit of q")

    trace = _remainder(tag, gp, gq, np.abs(p - q) ** 2, mu)
    return CaseReport(
        tag, phi0, psi0, Phi0, Psi0, _PREDICTED[tag], _REMAINDER[tag], trace, consistent
    )


def _remainder(tag: CaseTag, gp, gq, gap2, mu) -> np.ndarray:
    # -2 ln 1/|1 - conj(phi) psi| = ln(gp*gq + |phi - psi|^2)
    cross2 = np.log(gp * gq + gap2)
    log_fp = np.log(mu / gp)
    log_fq = np.log(mu / gq)
    if tag is CaseTag.I:
        return -np.log(gq) + cross2 + log_fp
    if tag is CaseTag.II:
        return -np.log(gp) + cross2 + log_fq
    if tag is CaseTag.III_A:
        return cross2 + log_fq
    if tag is CaseTag.III_B:
        return cross2 + log_fp
    return cross2 + log_fp + log_fq


def ratio_limit_check(
    phi: MobiusMap,
    psi: MobiusMap,
    zeta: complex,
    ladder: RadiusLadder | None = None,
) -> tuple[np.ndarray, CaseReport]:
    """Normalised-kernel ratios along the ladder, with the case report."""
    ladder = ladder or RadiusLadder()
    zeta = complex(zeta) / abs(zeta)
    ratios = ratio_terms(phi, psi, ladder.deltas, zeta)[0]
    return np.asarray(ratios, dtype=float), classify_case(phi, psi, zeta, ladder)


# -- decisions ----------------------------------------------------------------------


class Decision(str, Enum):
    COMPACT_NONTRIVIALLY = "compact_nontrivially"
    COMPACT_TRIVIALLY_ZERO = "compact_trivially_zero"
    NOT_COMPACT = "not_compact"
    OUT_OF_SCOPE = "out_of_scope"


class Clause(str, Enum):
    SAME_FIXED_POINTS = "same-fixed-points"
    BOTH_ELLIPTIC = "both-elliptic"
    COMMUTE_EXACTLY = "commute-exactly"
    COROLLARY_WITNESS = "corollary-2.3-witness"
    IDENTITY_EXCLUSION = "identity-exclusion"
    EQUAL_SYMBOLS = "equal-symbols"


@dataclass
class CompactnessVerdict:
    decision: Decision
    clause: Clause
    evidence: BoundaryScanReport | None = None
    fixed_points_phi: Any = None
    fixed_points_psi_star: Any = None
    classifications: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        if self.decision is Decision.NOT_COMPACT and self.evidence is None:
            raise ValueError("a not_compact verdict needs evidence")

    @property
    def is_compact(self) -> bool:
        return self.decision in (Decision.COMPACT_NONTRIVIALLY, Decision.COMPACT_TRIVIALLY_ZERO)

    def to_dict(self, evidence_ref: str | None = None) -> dict[str, Any]:
        def fps(s):
            if s is None:
                return None
            return {
                "points": [_pair(p.z) for p in s.points],
                "locations": [p.location for p in s.points],
                "at_infinity": s.at_infinity,
                "double": s.double,
            }

        out = {
            "schema_version": SCHEMA_VERSION,
            "kind": "compactness_verdict",
            "decision": self.decision.value,
            "clause": self.clause.value,
            "fixed_points_phi": fps(self.fixed_points_phi),
            "fixed_points_psi_star": fps(self.fixed_points_psi_star),
            "classifications": dict(self.classifications),
            "evidence_ref": evidence_ref,
        }
        if self.evidence is not None:
            ev = self.evidence
            out["evidence"] = {
                "verdict": ev.verdict.value,
                "witness": None if ev.witness is None else _pair(ev.witness),
                "max_q_deepest": ev.max_q_deepest,
            }
        return out


def automorphism_difference_decision(
    phi: MobiusMap, psi: MobiusMap, config: ScanConfig | None = None
) -> CompactnessVerdict:
    """C_phi - C_psi for automorphisms is compact exactly when phi = psi."""
    for m in (phi, psi):
        if not m.is_automorphism:
            raise NotAutomorphismError(f"{m!r} is not a disk automorphism")
    if maps_equal(phi, psi):
        return CompactnessVerdict(Decision.COMPACT_TRIVIALLY_ZERO, Clause.EQUAL_SYMBOLS)
    scan = boundary_scan(phi, psi, config)
    return CompactnessVerdict(Decision.NOT_COMPACT, Clause.COROLLARY_WITNESS, evidence=scan)


def log_ratio_lemma_check(a_seq: Sequence[float], b_seq: Sequence[float]) -> int:
    """Smallest N >= 0 with 0 < ln a_n / ln b_n < 1 for every supplied n > N.

    Sequences are indexed from n = 1.  Raises PrefixTooShortError when the
    prefix never gets b_n/a_n below 1 or the inequality fails at its end.
    """
    a = np.asarray(a_seq, dtype=float)
    b = np.asarray(b_seq, dtype=float)
    if a.shape != b.shape or a.ndim != 1 or a.size == 0:
        raise ValueError("a_seq and b_seq must be non-empty and of equal length")
    # a leading term equal to 1 (a_1 = 1/1) is admitted; it just fails the inequality
    if np.any((a <= 0) | (a > 1) | (b <= 0) | (b > 1)):
        raise ValueError("terms must lie in (0, 1]")
    if not np.any(b / a < 1.0):
        raise PrefixTooShortError("b_n/a_n never drops below 1 in the supplied prefix")
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.log(a) / np.log(b)
    ok = (r > 0) & (r < 1)
    bad = np.flatnonzero(~ok)
    n = 0 if bad.size == 0 else int(bad[-1]) + 1
    if n >= a.size:
        raise PrefixTooShortError("the inequality fails at the end of the prefix")
    return n
