"""Command-line entry point: one branch per analysis, each producing a Report."""

import argparse
import functools
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import exact_linalg as la
from catalog import catalog_source, entries
from cohomology_engine import (
    DGA,
    cartan_model,
    check_dga_morphism,
    cohomology,
    cohomology_algebra,
    even_part_is_h0,
    is_pure,
    lower_grading,
)
from components.export import write_report
from components.load_model import load_model
from components.metrics import format_metrics, model_metrics
from components.report import ReportView
from components.report.helpers import tables_for
from config import configure_logging
from derivation_solver import (
    Derivation,
    chain_derivation_space,
    derivation_space,
    echelon_derivations,
    induced_on_cohomology,
    is_class_h,
    rigidity_report,
)
from errors import ModelMismatch, RhoError
from fd_algebra import FDAlgebra, poincare_check
from gca_kernel import AlgebraMorphism
from model_dsl import ModelFile, format_model, parse_automorphism, parse_polynomial
from report_export import Report, ReportExporter, digest, sparse_vector
from taylor_machine import peel, recompose

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 1, 2


def output_options(subcommand: bool = False) -> argparse.ArgumentParser:
    """--json, --output and --log-level, accepted before or after the subcommand."""
    # a subcommand must not reset values already read by the top-level parser
    unset = argparse.SUPPRESS if subcommand else None
    options = argparse.ArgumentParser(add_help=False)
    options.add_argument("--json", action="store_true", default=unset if subcommand else False,
                         help="print the report as JSON")
    options.add_argument("--output", default=unset, help="also write the report (.json, .csv, .tsv or .xlsx)")
    options.add_argument("--log-level", default=unset, help="override RHO_LOG_LEVEL")
    return options


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rho", description="Exact splitting-rigidity computations",
                                     parents=[output_options()])
    shared = output_options(subcommand=True)
    sub = parser.add_subparsers(dest="command", required=True)
    add = functools.partial(sub.add_parser, parents=[shared])

    p = add("cohomology", help="Betti numbers and class representatives")
    p.add_argument("model")
    p.add_argument("--max-degree", type=int, required=True)

    p = add("ring", help="export the truncated cohomology ring")
    p.add_argument("model")
    p.add_argument("--top", type=int)

    p = add("derivations", help="graded derivations of the cohomology ring")
    p.add_argument("model")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--degree", type=int)
    group.add_argument("--all-negative", action="store_true")
    p.add_argument("--top", type=int)

    p = add("chain-derivations", help="derivations of a model commuting with d")
    p.add_argument("model")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--induced", action="store_true", help="also show the action on cohomology")
    p.add_argument("--top", type=int)

    p = add("rigidity", help="look for derivations moving Char(C, k)")
    p.add_argument("model")
    p.add_argument("--torus-dim", type=int, required=True)
    p.add_argument("--rank", type=int, required=True)
    p.add_argument("--mode", choices=["model", "cohomology"], default="cohomology")
    p.add_argument("--class-H", dest="class_h", action="store_true",
                   help="check every negative degree against all of H^even")
    p.add_argument("--all-negative", action="store_true", help="check every negative degree, not only -dimT..-1")
    p.add_argument("--top", type=int)

    p = add("cartan", help="Cartan model of biquotient data")
    p.add_argument("model")

    p = add("lower-grading", help="split cohomology by odd word length")
    p.add_argument("model")
    p.add_argument("--max-degree", type=int)

    p = add("peel", help="factor a torus-product automorphism into derivation steps")
    p.add_argument("model")
    p.add_argument("--automorphism", required=True, help="automorphism file")
    p.add_argument("--normalize", action="store_true")
    p.add_argument("--top", type=int)

    p = add("morphism-check", help="check that an algebra map commutes with d")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--assign", action="append", default=[], metavar="GEN=POLY",
                   help="image of a generator; unassigned generators go to the same name")

    p = add("catalog", help="list or print built-in models")
    p.add_argument("action", choices=["list", "show"])
    p.add_argument("name", nargs="?")
    return parser


# model helpers


def as_dga(mf: ModelFile) -> DGA:
    if mf.kind == "model":
        return mf.obj
    if mf.kind == "biquotient":
        return cartan_model(mf.obj)
    raise ModelMismatch(f"{mf.name} is a finite algebra, not a model")


def formal_dimension(M: DGA) -> int:
    """Sum of odd degrees minus sum of (even degree - 1); exact for elliptic pure models."""
    gens = M.algebra.generators
    return sum(g.degree for g in gens if g.is_odd) - sum(g.degree - 1 for g in gens if not g.is_odd)


def resolve_top(mf: ModelFile, top: Optional[int]) -> int:
    if top is not None:
        return top
    if mf.top is not None:
        return mf.top
    if mf.kind == "fd":
        return mf.obj.top_degree
    return formal_dimension(as_dga(mf))


def ring_of(mf: ModelFile, top: Optional[int]) -> FDAlgebra:
    if mf.kind == "fd":
        return mf.obj
    M = as_dga(mf)
    n = resolve_top(mf, top)
    return cohomology_algebra(M, cohomology(M, n), n)


def derivation_json(D: Derivation) -> Dict[str, Dict[str, str]]:
    H = D.ambient
    return {H.names[i]: sparse_vector(H.names, v) for i, v in enumerate(D.images) if not la.is_zero(v)}


# commands


def run_cohomology(args, mf: ModelFile) -> Dict[str, Any]:
    M = as_dga(mf)
    res = cohomology(M, args.max_degree)
    return {
        "max_degree": args.max_degree,
        "betti": {str(n): res.betti(n) for n in range(args.max_degree + 1)},
        "representatives": {
            str(n): [str(r) for r in res.representatives(n)] for n in range(args.max_degree + 1)
        },
    }


def run_ring(args, mf: ModelFile) -> Dict[str, Any]:
    H = ring_of(mf, args.top)
    products = []
    for i in range(H.dim):
        for j in range(i, H.dim):
            if H.unit in (i, j):
                continue
            prod = H.multiply(H.basis_vector(i), H.basis_vector(j))
            if not la.is_zero(prod):
                products.append({"left": H.names[i], "right": H.names[j], "value": H.format_vector(prod)})
    return {
        "basis": [{"name": n, "degree": d} for n, d in zip(H.names, H.degrees)],
        "products": products,
        "formal_dimension": H.top_degree,
        "poincare": poincare_check(H, H.top_degree),
        "dsl": format_model(ModelFile(f"{mf.name}_ring", "fd", H, H.top_degree)),
    }


def run_derivations(args, mf: ModelFile) -> Dict[str, Any]:
    H = ring_of(mf, args.top)
    degrees = range(-H.top_degree, 0) if args.all_negative else [args.degree]
    dims, bases = {}, {}
    for n in degrees:
        space = derivation_space(H, n)
        dims[str(n)] = len(space)
        bases[str(n)] = [derivation_json(D) for D in space]
    return {"dims": dims, "bases": bases}


def run_chain_derivations(args, mf: ModelFile) -> Dict[str, Any]:
    M = as_dga(mf)
    space = chain_derivation_space(M, args.degree)
    results: Dict[str, Any] = {
        "degree": args.degree,
        "dim": len(space),
        "basis": [D.describe() for D in space],
    }
    if args.induced:
        top = resolve_top(mf, args.top)
        res = cohomology(M, top)
        ring = cohomology_algebra(M, res, top)
        induced = [induced_on_cohomology(M, D, res, top, ring) for D in space]
        results["induced"] = [derivation_json(D) for D in echelon_derivations(ring, args.degree, induced)]
    return results


def run_rigidity(args, mf: ModelFile) -> Dict[str, Any]:
    H = ring_of(mf, args.top)
    model = as_dga(mf) if args.mode == "model" else None
    report = rigidity_report(
        H, args.torus_dim, args.rank, mode=args.mode, model=model,
        all_negative=args.all_negative, target="even" if args.class_h else "char",
    )
    results: Dict[str, Any] = {
        "verdict": report.verdict,
        "mode": report.mode,
        "k": report.k,
        "dim_t": report.dim_t,
        "target": report.target,
        "target_dim": report.target_dim,
        "formal_dimension": report.formal_dimension,
        "converse_holds": report.converse_holds,
        "dims": {str(n): d for n, d in report.dims},
        "witnesses": [
            {
                "degree": w.derivation.degree,
                "derivation": derivation_json(w.derivation),
                "element": H.format_vector(w.element),
                "image": H.format_vector(w.image),
            }
            for w in report.witnesses
        ],
    }
    if args.class_h:
        results["class_h"] = is_class_h(H)
    return results


def run_cartan(args, mf: ModelFile) -> Dict[str, Any]:
    if mf.kind != "biquotient":
        raise ModelMismatch(f"{mf.name} is not biquotient data")
    M = cartan_model(mf.obj)
    return {"dsl": format_model(ModelFile(f"{mf.name}_cartan", "model", M, formal_dimension(M))),
            "pure": is_pure(M)}


def run_lower_grading(args, mf: ModelFile) -> Dict[str, Any]:
    if mf.kind != "biquotient":
        raise ModelMismatch(f"{mf.name} is not biquotient data")
    M = cartan_model(mf.obj)
    res = cohomology(M, args.max_degree if args.max_degree is not None else formal_dimension(M))
    grading = lower_grading(mf.obj, res)
    return {
        "dims": [{"degree": n, "k": k, "dim": d} for (n, k), d in grading.dims],
        "rank_difference": grading.rank_difference,
        "bound_holds": grading.bound_holds,
        "even_part_is_h0": even_part_is_h0(mf.obj, res),
    }


def run_peel(args, mf: ModelFile) -> Dict[str, Any]:
    H = ring_of(mf, args.top)
    h = parse_automorphism(Path(args.automorphism).read_text(encoding="utf-8"), H)
    result = peel(h, normalize=args.normalize)
    rebuilt = recompose(H, h.torus, result.steps)
    steps = []
    for i, D in result.steps:
        monomial = h.torus.monomials[i]
        steps.append({
            "index": i,
            "torus": "".join(f"x{j}" for j in monomial),
            "derivation": derivation_json(D),
        })
    return {
        "steps": steps,
        "normalized": result.base_map is not None,
        "recomposes": rebuilt.values == result.normalized.values,
    }


def run_morphism_check(args, mf: ModelFile) -> Dict[str, Any]:
    source = as_dga(mf)
    target_mf, _ = load_model(args.target)
    target = as_dga(target_mf)
    assignments = {
        g.name: target.algebra.gen(g.name)
        for g in source.algebra.generators if g.name in target.algebra.names
    }
    for item in args.assign:
        name, _, poly = item.partition("=")
        source.algebra.index(name.strip())
        assignments[name.strip()] = parse_polynomial(poly, target.algebra)
    phi = AlgebraMorphism.make(source.algebra, target.algebra, assignments)
    failures = check_dga_morphism(source, target, phi)
    return {"ok": not failures, "failures": [{"generator": g, "residue": str(r)} for g, r in failures]}


COMMANDS = {
    "cohomology": run_cohomology,
    "ring": run_ring,
    "derivations": run_derivations,
    "chain-derivations": run_chain_derivations,
    "rigidity": run_rigidity,
    "cartan": run_cartan,
    "lower-grading": run_lower_grading,
    "peel": run_peel,
    "morphism-check": run_morphism_check,
}


def run_cli(argv: Sequence[str]) -> Tuple[int, Report]:
    argv = list(argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code if isinstance(exc.code, int) else EXIT_USAGE
        return code, Report(command=argv, results={} if code == 0 else {"error": "usage", "message": " ".join(argv)})

    report = Report(command=[args.command] + argv[argv.index(args.command) + 1:])
    try:
        if args.command == "catalog":
            if args.action == "list":
                report.results = {"entries": list(entries())}
            else:
                if not args.name:
                    return EXIT_USAGE, Report(command=argv, results={"error": "usage", "message": "catalog show NAME"})
                text = catalog_source(args.name)
                report.inputs_digest = digest(text)
                report.results = {"dsl": text}
            return EXIT_OK, report

        source = args.source if args.command == "morphism-check" else args.model
        mf, text = load_model(source)
        report.inputs_digest = digest(text)
        results = COMMANDS[args.command](args, mf)
        results["metrics"] = format_metrics(model_metrics(mf))
        report.results = results
        report.tables = tables_for(args.command, results)
        return EXIT_OK, report
    except RhoError as e:
        logger.info("%s failed: %s", args.command, e)
        report.results = {"error": type(e).__name__, "message": str(e), "details": e.details()}
        return EXIT_DOMAIN, report
    except OSError as e:
        report.results = {"error": "usage", "message": str(e)}
        return EXIT_USAGE, report


def global_flags(argv: Sequence[str]) -> argparse.Namespace:
    """The output flags, read without requiring a valid subcommand."""
    flags, _ = output_options().parse_known_args(list(argv))
    return flags


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    flags = global_flags(argv)
    configure_logging(flags.log_level.upper() if flags.log_level else None)
    code, report = run_cli(argv)
    if report.results:
        if flags.json:
            print(ReportExporter(report).to_json())
        else:
            print(ReportView(report).render(), file=sys.stderr if code else sys.stdout)
    if flags.output and code == EXIT_OK:
        try:
            write_report(report, flags.output)
        except (OSError, ValueError) as e:
            logger.error("could not write %s: %s", flags.output, e)
            return EXIT_USAGE
    return code


if __name__ == "__main__":
    sys.exit(main())
