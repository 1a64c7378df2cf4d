"""Command-line front end: ``dirichlet-composition <command> ...``.

Exit codes: 0 success, 1 selftest failure (or an unexpected error),
2 unparsable input, 3 a map that must be an automorphism is not,
4 a map that must be a self-map of the disk is not.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

from . import __version__
from .commutator import commutator_compact_decision, commutator_norm_trace
from .compactness import (
    SCHEMA_VERSION,
    Decision,
    RadiusLadder,
    ScanConfig,
    boundary_scan,
    bound_violations,
    ratio_limit_check,
)
from .errors import IdentityMapError, MapSpecError, NotAutomorphismError, NotSelfMapError
from .mapspec import parse_map
from .mobius import (
    EPS_EQ,
    MobiusMap,
    classify,
    fixed_points,
    format_map,
    is_self_map,
    krein_adjoint,
    sup_norm,
    to_automorphism_form,
)
from .oracle import DEFAULT_ORDER, DEFAULT_RHO
from .selftest import SelftestConfig, run_selftest, tally

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_NOT_AUTO, EXIT_NOT_SELF = 0, 1, 2, 3, 4


@dataclass(frozen=True)
class RunConfig:
    directions: int = 256
    k_min: int = 4
    k_max: int = 40
    q_threshold: float = 1e-3
    rho: float = DEFAULT_RHO
    order: int = DEFAULT_ORDER
    fmt: str = "json"
    out: Path | None = None
    seed: int = 0
    trace: bool = False
    eps_eq: float = EPS_EQ

    def __post_init__(self):
        if self.directions < 1:
            raise ValueError("--directions must be positive")
        if not 1 <= self.k_min <= self.k_max <= 46:
            raise ValueError("need 1 <= --kmin <= --kmax <= 46")
        if not self.q_threshold > 0:
            raise ValueError("--qthreshold must be positive")
        if not 0 < self.rho < 1:
            raise ValueError("--rho must lie in (0, 1)")
        if self.order < 1:
            raise ValueError("--order must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("--seed must be an unsigned 64-bit integer")
        if not self.eps_eq > 0:
            raise ValueError("--eps-eq must be positive")

    @property
    def ladder(self) -> RadiusLadder:
        return RadiusLadder(self.k_min, self.k_max)

    @property
    def scan(self) -> ScanConfig:
        return ScanConfig(self.directions, self.ladder, self.q_threshold)


class _Exit(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


# -- output helpers -------------------------------------------------------------------


def _dumps(doc: dict[str, Any]) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _write(path: Path, text: str) -> None:
    # newline="" keeps CSV CRLF line ends intact on every platform
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _sibling(out: Path, suffix: str) -> Path:
    return out.with_name(out.stem + suffix)


def _emit(config: RunConfig, text: str) -> None:
    if config.out is None:
        sys.stdout.write(text)
    else:
        _write(config.out, text)


def _cplx(z: complex) -> list[float]:
    z = complex(z)
    # adding 0.0 turns -0.0 into 0.0
    return [z.real + 0.0, z.imag + 0.0]


def _fixed_points_doc(m: MobiusMap) -> dict[str, Any] | None:
    try:
        fps = fixed_points(m)
    except IdentityMapError:
        return None
    return {
        "points": [_cplx(p.z) for p in fps.points],
        "locations": [p.location for p in fps.points],
        "at_infinity": fps.at_infinity,
        "double": fps.double,
    }


# -- map parsing with exit codes ---------------------------------------------------


def _parse(spec: str | None, flag: str) -> MobiusMap:
    if spec is None:
        raise _Exit(EXIT_PARSE, f"{flag} is required")
    try:
        return parse_map(spec)
    except MapSpecError as exc:
        raise _Exit(EXIT_PARSE, f"{flag}: {exc}") from exc


def _automorphism(spec: str | None, flag: str) -> MobiusMap:
    m = _parse(spec, flag)
    if not m.is_automorphism:
        raise _Exit(EXIT_NOT_AUTO, f"{flag}: {spec!r} is not a disk automorphism")
    return m


def _self_map(spec: str | None, flag: str) -> MobiusMap:
    m = _parse(spec, flag)
    if not is_self_map(m):
        raise _Exit(EXIT_NOT_SELF, f"{flag}: {spec!r} does not map the disk into itself")
    return m


# -- commands ---------------------------------------------------------------------------


def cmd_classify(spec: str | None, config: RunConfig) -> int:
    m = _automorphism(spec, "--map")
    form = to_automorphism_form(m)
    doc = {
        "schema_version": SCHEMA_VERSION,
        "kind": "classification",
        "map": format_map(m),
        "automorphism_form": {
            "a": _cplx(form.a),
            "theta": form.theta,
            "is_identity": form.is_identity,
        },
        "classification": classify(m).value,
        "fixed_points": _fixed_points_doc(m),
        "krein_adjoint": format_map(krein_adjoint(m)),
        "sup_norm": sup_norm(m),
    }
    _emit(config, _dumps(doc))
    return EXIT_OK


def _witness_ladder(phi: MobiusMap, psi: MobiusMap, zeta: complex, config: RunConfig):
    ratios, report = ratio_limit_check(phi, psi, zeta, config.ladder)
    deltas = config.ladder.deltas
    return {
        "zeta": _cplx(zeta),
        "k": [int(k) for k in config.ladder.exponents],
        "delta": [float(d) for d in deltas],
        "ratio": [float(r) for r in ratios],
        "bound_violations": bound_violations((phi, psi), deltas, complex(zeta)),
        "case_report": report.to_dict(),
    }


def cmd_diff_scan(phi_spec: str | None, psi_spec: str | None, config: RunConfig) -> int:
    phi = _self_map(phi_spec, "--phi")
    psi = _self_map(psi_spec, "--psi")
    report = boundary_scan(phi, psi, config.scan)
    if config.fmt == "csv":
        _emit(config, report.to_csv())
        return EXIT_OK
    doc = report.to_dict()
    doc["phi"], doc["psi"] = format_map(phi), format_map(psi)
    doc["witness_ladder"] = (
        None if report.witness is None else _witness_ladder(phi, psi, report.witness, config)
    )
    if config.out is not None:
        cells = _sibling(config.out, ".cells.csv")
        _write(cells, report.to_csv())
        doc["cells_ref"] = cells.name
    _emit(config, _dumps(doc))
    return EXIT_OK


def _trace_csv(config: RunConfig, values: Sequence[float | None]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\r\n")
    writer.writerow(("k", "delta", "norm"))
    for k, d, v in zip(config.ladder.exponents, config.ladder.deltas, values):
        writer.writerow((int(k), repr(float(d)), "" if v is None else repr(v)))
    return buf.getvalue()


def cmd_commutator(phi_spec: str | None, psi_spec: str | None, config: RunConfig) -> int:
    phi = _automorphism(phi_spec, "--phi")
    psi = _automorphism(psi_spec, "--psi")
    verdict = commutator_compact_decision(psi, phi, config.scan)

    evidence_ref = None
    if verdict.evidence is not None and config.out is not None:
        path = _sibling(config.out, ".evidence.json")
        _write(path, _dumps(verdict.evidence.to_dict()))
        evidence_ref = path.name
    doc = verdict.to_dict(evidence_ref)
    doc["phi"], doc["psi"] = format_map(phi), format_map(psi)

    if config.trace and verdict.decision is not Decision.OUT_OF_SCOPE:
        zeta = 1.0 + 0j
        if verdict.evidence is not None and verdict.evidence.witness is not None:
            zeta = verdict.evidence.witness
        values = commutator_norm_trace(psi, phi, zeta, config.ladder, config.rho, config.order)
        doc["trace"] = {
            "zeta": _cplx(zeta),
            "rho": config.rho,
            "order": config.order,
            "norm": values,
        }
        if config.out is not None:
            path = _sibling(config.out, ".trace.csv")
            _write(path, _trace_csv(config, values))
            doc["trace"]["csv_ref"] = path.name
    _emit(config, _dumps(doc))
    return EXIT_OK


def cmd_selftest(config: RunConfig) -> int:
    results = run_selftest(
        SelftestConfig(seed=config.seed, rho=config.rho, order=config.order, eps_eq=config.eps_eq)
    )
    lines = [f"{r.status.upper():4s} {r.name}" + (f": {r.detail}" if r.detail else "") for r in results]
    counts = tally(results)
    lines.append(
        f"selftest: {counts['pass']} passed, {counts['fail']} failed, {counts['skip']} skipped"
    )
    _emit(config, "\n".join(lines) + "\n")
    return EXIT_FAIL if counts["fail"] else EXIT_OK


# -- argument parsing ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--directions", type=int, default=256, help="boundary directions per scan")
    common.add_argument("--kmin", type=int, default=4, help="shallowest rung, delta = 2^-kmin")
    common.add_argument("--kmax", type=int, default=40, help="deepest rung, delta = 2^-kmax")
    common.add_argument("--qthreshold", type=float, default=1e-3, help="q level counted as failure")
    common.add_argument("--rho", type=float, default=DEFAULT_RHO, help="oracle sampling radius")
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="oracle truncation order N")
    common.add_argument("--format", choices=("json", "csv"), default="json", dest="fmt")
    common.add_argument("--out", type=Path, default=None, metavar="PATH")
    common.add_argument("--seed", type=int, default=0, metavar="U64")
    common.add_argument("--eps-eq", type=float, default=EPS_EQ, help="map equality tolerance (selftest)")

    parser = argparse.ArgumentParser(
        prog="dirichlet-composition",
        description="Composition operators with Mobius symbols on the Dirichlet space.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="classify a disk automorphism")
    p.add_argument("--map", dest="map_spec")

    for name, text in (
        ("diff-scan", "boundary scan of C_phi - C_psi"),
        ("commutator", "compactness of [C*_psi, C_phi]"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.add_argument("--phi")
        p.add_argument("--psi")
        if name == "commutator":
            p.add_argument("--trace", action="store_true", help="add the commutator norm trace")

    sub.add_parser("selftest", parents=[common], help="run the seeded invariant suite")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    try:
        return RunConfig(
            directions=args.directions,
            k_min=args.kmin,
            k_max=args.kmax,
            q_threshold=args.qthreshold,
            rho=args.rho,
            order=args.order,
            fmt=args.fmt,
            out=args.out,
            seed=args.seed,
            trace=getattr(args, "trace", False),
            eps_eq=args.eps_eq,
        )
    except ValueError as exc:
        raise _Exit(EXIT_PARSE, str(exc)) from exc


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "classify":
            return cmd_classify(args.map_spec, config)
        if args.command == "diff-scan":
            return cmd_diff_scan(args.phi, args.psi, config)
        if args.command == "commutator":
            return cmd_commutator(args.phi, args.psi, config)
        return cmd_selftest(config)
    except _Exit as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except NotAutomorphismError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_AUTO
    except NotSelfMapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_SELF


if __name__ == "__main__":
    sys.exit(main())
