"""Command-line interface: ``perron-roots {analyze,roots,verify,power-index}``.

Exit codes: 0 success, 2 parse error, 3 numerical failure, 4 verification
failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

import numpy as np

from . import enumroots, matfun, perron
from .eigen import analyze_spectrum, ascent_sequence, real_pth_root_exists
from .matcore import DEFAULT_TOL, Tolerance, max_entry, mat_power
from .rjcf import ComplexPairBlock, RealJordanDecomposition, from_factorization, real_jordan_decompose
from .textio import ParseError, dump_report, matrix_entry, read_factorization, read_matrix, render_text

log = logging.getLogger("perron_roots")

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4
TOL_ENV = "PERRON_ROOTS_TOL"


def _tolerance(args) -> Tolerance:
    value = args.tol
    if value is None and os.environ.get(TOL_ENV):
        value = float(os.environ[TOL_ENV])
    if value is None:
        return DEFAULT_TOL
    return Tolerance(value, value)


def _complex_str(z: complex) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return f"{z.real!r}{'+' if z.imag >= 0 else '-'}{abs(z.imag)!r}j"


def _block_entry(b) -> dict:
    if isinstance(b, ComplexPairBlock):
        return {"type": "cpair", "lambda": _complex_str(b.lam), "k": b.size}
    return {"type": "real", "lambda": repr(float(b.lam)), "k": b.size}


def _spectrum_entry(summary) -> dict:
    return {
        "s": summary.s,
        "t": summary.t,
        "r1": summary.r1,
        "r2": summary.r2,
        "c": summary.c,
        "eigenvalues": [
            {"value": _complex_str(e.value), "multiplicity": e.multiplicity, "index": e.index,
             "blocks": list(e.blocks)}
            for e in summary.eigenvalues
        ],
    }


def _decompose(a: np.ndarray, args, tol: Tolerance) -> tuple[RealJordanDecomposition, str]:
    if getattr(args, "factorization", None):
        R, blocks = read_factorization(args.factorization)
        return from_factorization(a, R, blocks, tol), "factorization"
    return real_jordan_decompose(a, tol), "numerical"


def _root_entry(r: matfun.RootReport, kind: str, stochastic: bool) -> dict:
    entry = {
        "assignment": str(r.assignment),
        "kind": kind,
        "residual": float(r.residual),
        "is_real": bool(r.is_real),
        "eventually_positive": r.is_eventually_positive,
        "power_index": r.witness_exponent,
    }
    if r.seed is not None:
        entry["seed"] = int(r.seed)
    if stochastic:
        entry["eventually_stochastic"] = r.is_eventually_stochastic
    entry["matrix"] = matrix_entry(r.X)
    return entry


def _perron_entry(a: np.ndarray, tol: Tolerance) -> dict:
    try:
        rep = perron.spectral_radius_data(a, tol)
    except ValueError as exc:
        return {"error": str(exc)}
    return {
        "rho": float(rep.rho),
        "simple": rep.rho_simple,
        "dominant": rep.rho_dominant,
        "right_vector": [float(x) for x in rep.right_vector],
        "left_vector": [float(x) for x in rep.left_vector],
        "right_positive": rep.right_positive,
        "left_positive": rep.left_positive,
        "strong_pf": rep.strong_pf,
    }


def cmd_analyze(args) -> dict:
    tol = _tolerance(args)
    a = read_matrix(args.matrix)
    n = a.shape[0]
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"matrix must be square, got {a.shape}", path=args.matrix)
    if args.factorization:
        decomp, source = _decompose(a, args, tol)
        summary = decomp.summary
    else:
        summary, source = analyze_spectrum(a, tol), "numerical"
    nonnegative = bool(np.all(a >= -tol.abs_eps))
    report = {
        "command": "analyze",
        "n": n,
        "source": source,
        "spectrum": _spectrum_entry(summary),
        "perron": _perron_entry(a, tol),
        "nonnegative": nonnegative,
        "primitive": perron.is_primitive(a, tol) if nonnegative else None,
        "eventually_positive": perron.is_eventually_positive(a, tol),
        "stochastic": perron.is_stochastic(a, tol),
        "eventually_stochastic": perron.is_eventually_stochastic(a, tol, args.cap),
        "derogatory": summary.is_derogatory,
        "singular": summary.is_singular,
        "ascent_sequence": list(ascent_sequence(a, tol).d),
    }
    return report


def cmd_roots(args) -> dict:
    tol = _tolerance(args)
    p = args.p
    a = read_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"matrix must be square, got {a.shape}", path=args.matrix)
    decomp, source = _decompose(a, args, tol)
    summary = decomp.summary
    report = {
        "command": "roots",
        "p": p,
        "n": decomp.n,
        "source": source,
        "decomposition_residual": float(decomp.residual),
        "blocks": [_block_entry(b) for b in decomp.blocks],
        "spectrum": _spectrum_entry(summary),
    }
    if decomp.is_singular:
        sing = matfun.singular_root_report(decomp, p, tol=tol)
        report["mode"] = "singular"
        report["root_exists"] = sing.exists
        report["ascent_sequence"] = list(sing.ascent)
        report["constructed"] = sing.constructed
        report["message"] = sing.message
        if sing.root is not None:
            report["roots"] = [_root_entry(sing.root, "singular", False)]
        return report

    ev_pos = perron.is_eventually_positive(a, tol)
    report["eventually_positive_input"] = ev_pos
    if ev_pos:
        catalog = enumroots.enumerate_ev_positive_primary(decomp, p, tol, stochastic=args.stochastic)
        report["mode"] = "eventually_positive"
    else:
        log.warning("matrix is not eventually positive; listing real roots instead")
        report["mode"] = "real"
        catalog = enumroots.enumerate_real_primary(decomp, p, tol)
    report["counts"] = {
        "primary_total": catalog.primary_total,
        "real_primary": catalog.real_primary_count,
        "ev_positive_primary": catalog.ev_positive_primary_count,
    }
    report["derogatory"] = catalog.derogatory
    report["roots"] = [_root_entry(r, "primary", args.stochastic) for r in catalog.roots]

    if not ev_pos and catalog.real_primary_count == 0:
        exists = real_pth_root_exists(a, p, tol, summary)
        report["real_root_exists"] = exists
        if exists:
            root = enumroots.construct_real_root(decomp, p, tol)
            kind = "primary" if root.assignment.primary else "nonprimary"
            report["real_roots"] = [_root_entry(root, kind, args.stochastic)]

    if args.nonprimary:
        family = []
        if ev_pos and decomp.is_derogatory:
            assignment = enumroots.default_nonprimary_assignment(decomp, p)
            if assignment is not None:
                seeds = range(args.seed, args.seed + args.samples)
                for r in enumroots.enumerate_nonprimary_family(decomp, p, assignment, seeds, tol, args.stochastic):
                    family.append(_root_entry(r, "nonprimary", args.stochastic))
        else:
            log.warning("nonprimary sampling needs an eventually positive derogatory matrix")
        report["nonprimary"] = family
    return report


def cmd_verify(args) -> dict:
    tol = _tolerance(args)
    X = read_matrix(args.root)
    A = read_matrix(args.matrix)
    if X.shape != A.shape or X.shape[0] != X.shape[1]:
        raise ValueError(f"dimension mismatch: X {X.shape}, A {A.shape}")
    residual = max_entry(mat_power(X, args.p) - A)
    bound = args.residual_tol * max(1.0, max_entry(A))
    passed = residual <= bound
    report = {
        "command": "verify",
        "p": args.p,
        "residual": float(residual),
        "residual_bound": float(bound),
        "eventually_positive": perron.is_eventually_positive(X, tol),
        "eventually_stochastic": perron.is_eventually_stochastic(X, tol, args.cap),
        "pass": bool(passed),
    }
    return report


def cmd_power_index(args) -> dict:
    tol = _tolerance(args)
    a = read_matrix(args.matrix)
    if a.shape[0] != a.shape[1]:
        raise ParseError(f"matrix must be square, got {a.shape}", path=args.matrix)
    res = perron.power_index(a, args.cap, tol)
    return {
        "command": "power-index",
        "n": a.shape[0],
        "verdict": "index" if res.found else "exceeded cap",
        "index": res.index,
        "cap": res.cap_used,
        "wielandt_bound": perron.wielandt_bound(a.shape[0]),
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="perron-roots",
                                     description="Real and eventually positive p-th roots of matrices.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=None,
                        help=f"absolute and relative tolerance (default 1e-9, or ${TOL_ENV})")
    common.add_argument("--format", choices=["text", "structured"], default="text")
    common.add_argument("--cap", type=int, default=None, help="power-iteration cap")
    sub = parser.add_subparsers(dest="command", required=True)

    p_an = sub.add_parser("analyze", parents=[common], help="spectrum, Perron data and positivity verdicts")
    p_an.add_argument("matrix")
    p_an.add_argument("--factorization", default=None)
    p_an.set_defaults(func=cmd_analyze)

    p_ro = sub.add_parser("roots", parents=[common], help="count and list p-th roots")
    p_ro.add_argument("matrix")
    p_ro.add_argument("--p", type=int, required=True)
    p_ro.add_argument("--factorization", default=None)
    p_ro.add_argument("--nonprimary", action="store_true", help="sample nonprimary roots")
    p_ro.add_argument("--seed", type=int, default=0)
    p_ro.add_argument("--samples", type=int, default=3, help="nonprimary samples, seeds seed..seed+samples-1")
    p_ro.add_argument("--stochastic", action="store_true", help="add eventual-stochasticity flags")
    p_ro.set_defaults(func=cmd_roots)

    p_ve = sub.add_parser("verify", parents=[common], help="check that X**p reproduces A")
    p_ve.add_argument("root")
    p_ve.add_argument("matrix")
    p_ve.add_argument("--p", type=int, required=True)
    p_ve.add_argument("--residual-tol", type=float, default=1e-3,
                      help="pass if max|X^p - A| <= this * max(1, max|A|)")
    p_ve.set_defaults(func=cmd_verify)

    p_pi = sub.add_parser("power-index", parents=[common], help="smallest k with A^k, A^(k+1), ... positive")
    p_pi.add_argument("matrix")
    p_pi.set_defaults(func=cmd_power_index)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    if getattr(args, "p", None) is not None and args.p < 2:
        parser.error("--p must be an integer >= 2")
    if args.cap is not None and args.cap < 1:
        parser.error("--cap must be >= 1")
    try:
        report = args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (np.linalg.LinAlgError, ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.format == "structured":
        sys.stdout.write(dump_report(report))
    else:
        sys.stdout.write(render_text(report) + "\n")
    if report.get("pass") is False:
        return EXIT_VERIFY
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
