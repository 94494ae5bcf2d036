"""Command-line interface.

Subcommands: spectrum (direct problem), construct (isospectral family member),
certify (theorem certificates), demo (end-to-end showcase).  All file formats
are the documented interchange documents; outputs are byte-deterministic.

Exit codes: 0 success or certificate pass, 2 I/O-schema-config errors,
3 inadmissible coefficients, 4 certificate fail or hypothesis violation,
5 inconclusive certificate, 6 numerical solver failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import certificates, documents, gelfand_levitan, solver
from .errors import (AdmissibilityError, HypothesisError, SchemaViolationError,
                     SturmspecError)
from .types import Grid, OperatorSpec, Potential, RobinAngles

EXIT_OK = 0
EXIT_IO = 2
EXIT_INADMISSIBLE = 3
EXIT_FAIL = 4
EXIT_INCONCLUSIVE = 5
EXIT_SOLVER = 6

_THEOREM_CHOICES = ("thm1_2", "thm1_4", "thm5_2", "levinson",
                    "marchenko_consistency", "kappa_relations")


@dataclass
class RunConfig:
    """Parsed invocation: command, paths, sizes, and tolerance overrides."""

    command: str
    input: Path | None = None
    base: Path | None = None
    candidate: Path | None = None
    coeffs: Path | None = None
    out: Path | None = None
    csv: Path | None = None
    theorem: str | None = None
    alpha: float | None = None
    mirrored: bool = False
    want_b: bool = False
    n_max: int = 12
    solver_m: int = 2000
    gl_m: int = 400
    tolerances: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.n_max < 0:
            raise ValueError("--n-max must be nonnegative")
        if self.solver_m % 2 or self.solver_m < 16:
            raise ValueError("--solver-m must be an even integer >= 16")
        if self.gl_m % 2 or self.gl_m < 16:
            raise ValueError("--gl-m must be an even integer >= 16")


def _tolerance_epilog() -> str:
    lines = ["default tolerances (override with --tol-<name>):"]
    for name, value in certificates.DEFAULT_TOLERANCES.items():
        lines.append(f"  --tol-{name.replace('_', '-'):<16} {value:g}")
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sturmspec",
        description="Spectra, norming constants, and isospectral families for "
                    "Sturm-Liouville problems with Robin boundary conditions.",
        epilog=_tolerance_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--n-max", type=int, default=12,
                       help="highest eigenvalue index (default 12)")
        p.add_argument("--solver-m", type=int, default=2000,
                       help="integration grid intervals (default 2000)")
        p.add_argument("--gl-m", type=int, default=400,
                       help="reconstruction grid intervals (default 400)")
        for name in certificates.DEFAULT_TOLERANCES:
            p.add_argument(f"--tol-{name.replace('_', '-')}", type=float,
                           default=None, dest=f"tol_{name}",
                           help=argparse.SUPPRESS)

    p = sub.add_parser("spectrum", help="compute an operator's spectrum table")
    p.add_argument("--input", required=True, type=Path, help="operator document")
    p.add_argument("--out", required=True, type=Path, help="spectrum document to write")
    p.add_argument("--csv", type=Path, help="optional CSV export (n,mu,a,b,kappa)")
    p.add_argument("--want-b", action="store_true",
                   help="include right-endpoint norming constants")
    common(p)

    p = sub.add_parser("construct", help="build an isospectral family member")
    p.add_argument("--base", required=True, type=Path, help="base operator document")
    p.add_argument("--coeffs", required=True, type=Path,
                   help="coefficient document (array of {n, c})")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    common(p)

    p = sub.add_parser("certify", help="run a theorem certificate")
    p.add_argument("--theorem", required=True, choices=_THEOREM_CHOICES)
    p.add_argument("--input", type=Path, help="operator document (single-operator checks)")
    p.add_argument("--base", type=Path, help="base operator document")
    p.add_argument("--candidate", type=Path, help="candidate operator document")
    p.add_argument("--alpha", type=float, default=None,
                   help="left angle hypothesis (defaults to the candidate's)")
    p.add_argument("--mirrored", action="store_true",
                   help="pin the right angle instead of the left one (thm5_2)")
    p.add_argument("--out", required=True, type=Path, help="certificate document to write")
    common(p)

    p = sub.add_parser("demo", help="run the built-in showcase")
    p.add_argument("--out", required=True, type=Path, help="output directory")
    common(p)

    return parser


def parse_config(argv) -> RunConfig:
    ns = build_parser().parse_args(argv)
    tolerances = {}
    for name in certificates.DEFAULT_TOLERANCES:
        value = getattr(ns, f"tol_{name}", None)
        if value is not None:
            tolerances[name] = value
    return RunConfig(
        command=ns.command,
        input=getattr(ns, "input", None),
        base=getattr(ns, "base", None),
        candidate=getattr(ns, "candidate", None),
        coeffs=getattr(ns, "coeffs", None),
        out=ns.out,
        csv=getattr(ns, "csv", None),
        theorem=getattr(ns, "theorem", None),
        alpha=getattr(ns, "alpha", None),
        mirrored=getattr(ns, "mirrored", False),
        want_b=getattr(ns, "want_b", False),
        n_max=ns.n_max,
        solver_m=ns.solver_m,
        gl_m=ns.gl_m,
        tolerances=tolerances,
    )


def _read(path: Path) -> str:
    try:
        return path.read_text()
    except OSError as exc:
        raise SchemaViolationError("<file>", f"cannot read {path}: {exc}") from None


def _write(path: Path, text: str) -> None:
    path.write_text(text)


def _load_operator(path: Path, solver_m: int) -> OperatorSpec:
    op = documents.operator_from_document(documents.loads(_read(path)))
    if op.grid.node_count == solver_m:
        return op
    grid = Grid.make(solver_m)
    return OperatorSpec(Potential(grid, op.potential(grid.nodes)), op.angles)


def _load_coeffs(path: Path):
    return documents.coeffs_from_document(documents.loads(_read(path)))


def cmd_spectrum(config: RunConfig) -> int:
    op = _load_operator(config.input, config.solver_m)
    table = solver.eigenvalues(op, config.n_max, want_b=config.want_b)
    _write(config.out, documents.dumps(documents.spectrum_to_document(table)))
    if config.csv is not None:
        _write(config.csv, documents.spectrum_to_csv(table))
    return EXIT_OK


def cmd_construct(config: RunConfig) -> int:
    base = _load_operator(config.base, config.solver_m)
    coeffs = _load_coeffs(config.coeffs)
    built = gelfand_levitan.isospectral_construct(base, coeffs, gl_m=config.gl_m)
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    _write(out / "constructed_operator.json",
           documents.dumps(documents.operator_to_document(built)))
    _write(out / "constructed_potential.csv",
           documents.potential_to_csv(built.potential))
    base_spec = solver.eigenvalues(base, config.n_max)
    built_spec = solver.eigenvalues(built, config.n_max)
    rows = [{"n": n, "mu_base": base_spec[n].mu, "mu_constructed": built_spec[n].mu,
             "abs_diff": abs(built_spec[n].mu - base_spec[n].mu)}
            for n in range(config.n_max + 1)]
    verification = {
        "n_max": config.n_max,
        "max_mu_diff": max(r["abs_diff"] for r in rows),
        "rows": rows,
    }
    _write(out / "verification.json", documents.dumps(verification))
    return EXIT_OK


def _certificate_exit(report: certificates.CertificateReport, out: Path) -> int:
    _write(out, documents.dumps(certificates.certificate_to_document(report)))
    return {"pass": EXIT_OK, "fail": EXIT_FAIL,
            "inconclusive": EXIT_INCONCLUSIVE}[report.verdict]


def cmd_certify(config: RunConfig) -> int:
    theorem = config.theorem
    tols = config.tolerances or None
    need_pair = theorem in ("thm1_2", "thm5_2", "marchenko_consistency")
    need_single = theorem in ("levinson", "kappa_relations")
    if need_pair and (config.base is None or config.candidate is None):
        raise SchemaViolationError("<args>", f"{theorem} needs --base and --candidate")
    if need_single and config.input is None:
        raise SchemaViolationError("<args>", f"{theorem} needs --input")
    if theorem == "thm1_4" and config.candidate is None:
        raise SchemaViolationError("<args>", "thm1_4 needs --candidate")
    try:
        if theorem == "thm1_2":
            report = certificates.thm12_certificate(
                _load_operator(config.base, config.solver_m),
                _load_operator(config.candidate, config.solver_m),
                config.n_max, tolerances=tols)
        elif theorem == "thm5_2":
            report = certificates.thm52_certificate(
                _load_operator(config.base, config.solver_m),
                _load_operator(config.candidate, config.solver_m),
                config.n_max, tolerances=tols, mirrored=config.mirrored)
        elif theorem == "marchenko_consistency":
            report = certificates.marchenko_check(
                _load_operator(config.base, config.solver_m),
                _load_operator(config.candidate, config.solver_m),
                config.n_max, tolerances=tols)
        elif theorem == "thm1_4":
            candidate = _load_operator(config.candidate, config.solver_m)
            alpha = config.alpha if config.alpha is not None else candidate.alpha
            report = certificates.ambarzumyan_certificate(
                alpha, candidate, config.n_max, tolerances=tols)
        elif theorem == "levinson":
            report = certificates.levinson_even_check(
                _load_operator(config.input, config.solver_m),
                config.n_max, tolerances=tols)
        else:
            report = certificates.kappa_relations_check(
                _load_operator(config.input, config.solver_m),
                config.n_max, tolerances=tols)
    except HypothesisError as exc:
        report = certificates.CertificateReport(
            theorem if theorem in certificates.THEOREM_IDS else "thm1_2",
            {}, "fail", f"hypothesis violation: {exc}")
        _write(config.out, documents.dumps(certificates.certificate_to_document(report)))
        print(f"hypothesis violation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    return _certificate_exit(report, config.out)


def cmd_demo(config: RunConfig) -> int:
    out = config.out
    out.mkdir(parents=True, exist_ok=True)
    grid = Grid.make(config.solver_m)
    base = OperatorSpec(Potential.zero(grid), RobinAngles(np.pi / 2, np.pi / 2))
    _write(out / "base_operator.json",
           documents.dumps(documents.operator_to_document(base)))

    coeffs = documents.coeffs_from_document([{"n": 0, "c": 1.0}])
    built = gelfand_levitan.isospectral_construct(base, coeffs, gl_m=config.gl_m)
    _write(out / "constructed_operator.json",
           documents.dumps(documents.operator_to_document(built)))
    _write(out / "constructed_potential.csv",
           documents.potential_to_csv(built.potential))

    built_spec = solver.eigenvalues(built, config.n_max)
    base_spec = solver.eigenvalues(base, config.n_max)
    rows = [{"n": n, "mu_base": base_spec[n].mu, "mu_constructed": built_spec[n].mu,
             "abs_diff": abs(built_spec[n].mu - base_spec[n].mu)}
            for n in range(config.n_max + 1)]
    _write(out / "spectrum_check.json", documents.dumps({
        "n_max": config.n_max,
        "max_mu_diff": max(r["abs_diff"] for r in rows),
        "rows": rows,
    }))

    report = certificates.ambarzumyan_certificate(np.pi / 2, base, config.n_max,
                                                  tolerances=config.tolerances or None)
    _write(out / "ambarzumyan_certificate.json",
           documents.dumps(certificates.certificate_to_document(report)))
    return EXIT_OK


def main(argv=None) -> int:
    try:
        config = parse_config(argv if argv is not None else sys.argv[1:])
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        if config.command == "spectrum":
            return cmd_spectrum(config)
        if config.command == "construct":
            return cmd_construct(config)
        if config.command == "certify":
            return cmd_certify(config)
        return cmd_demo(config)
    except AdmissibilityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INADMISSIBLE
    except SchemaViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SturmspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
