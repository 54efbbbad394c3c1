"""Command-line front end.

Exit codes: 0 success, 1 invalid input, 2 infinite index, 3 invalid
partition, 4 counterexample found, 5 resource bound hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from itertools import combinations
from pathlib import Path

from . import __version__
from .errors import HSError, InfiniteIndex, InvalidPartition, ParseError
from .jsonio import dumps, load_json, partition_from_json, subgroup_from_json
from .oracle import brute_partition_check
from .partition import (build_C_matrix, build_D_matrix, density_check, genfun_report, period_analysis,
                        period_repetition_checks, theorem1_analyze, verify_partition)
from .schreier import coset_reps
from .search import THREADS_ENV, SearchConfig, search_counterexamples
from .spectral import TransitionMatrix, build_B_matrix, divisibility_check, generating_function, min_exponents, period
from .words import parse_word

EXIT_OK, EXIT_INPUT, EXIT_INFINITE, EXIT_INVALID, EXIT_COUNTEREXAMPLE, EXIT_RESOURCE = range(6)

log = logging.getLogger("hsautomata")


def manifest(args, inputs) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "input", "output", "command")}
    return {"command": args.command, "inputs": [str(p) for p in inputs], "output": args.output,
            "flags": flags, "tool": "hsautomata", "version": __version__}


def emit(args, report: dict, summary: list[str]):
    text = dumps(report) + "\n"
    if args.output:
        Path(args.output).write_text(text)
        print("\n".join(summary))
    else:
        sys.stdout.write(text)


def graph_summary(g) -> dict:
    a = TransitionMatrix.from_graph(g)
    h = period(a)
    return {
        "d": g.d,
        "action": g.to_json()["action"],
        "transition_matrix": a.tolist(),
        "period": h,
        "min_exponents_from_basepoint": list(min_exponents(a).row(0)),
        "coset_reps": [str(w) for w in coset_reps(g).reps],
        "period_divides_index": divisibility_check(g),
        "B_matrix": build_B_matrix(g),
    }


def cmd_build(args) -> int:
    alphabet, g = subgroup_from_json(load_json(args.input))
    info = graph_summary(g)
    report = {"manifest": manifest(args, [args.input]), "alphabet": list(alphabet.names), **info}
    emit(args, report, [f"index d = {g.d}, period h = {info['period']}, h | d: {info['period_divides_index']}"])
    return EXIT_OK


def analysis_block(p) -> dict:
    t1 = theorem1_analyze(p)
    rep = period_repetition_checks(p)
    an = period_analysis(p)
    out = {"theorem1": t1.to_json(), "period_repetition": rep.to_json(),
           "C_matrices": {str(h): build_C_matrix(p, h) for h in an.H_set}, "D_matrices": []}
    for hs, hb in combinations(an.H_set, 2):
        out["D_matrices"].append({"h": hb, "h_prime": hs, "D": build_D_matrix(p, hb, hs)})
    return out


def _parts_json(p) -> list:
    return [{"subgroup": part.name, "rep": str(part.representative()), "index": part.d, "accept": part.accept,
             "period": h, "residue": m} for part, h, m in zip(p.parts, p.periods, p.residues)]


def cmd_verify(args) -> int:
    p = partition_from_json(load_json(args.input))
    pr = verify_partition(p)
    report = {"manifest": manifest(args, [args.input]), "parts": _parts_json(p), **pr.to_json()}
    report["density"] = density_check(p)
    summary = [f"valid: {pr.valid}", f"density: {pr.density}", f"multiplicity: {pr.multiplicity}"]
    if args.max_oracle_len is not None:
        ok, word = brute_partition_check(p, args.max_oracle_len)
        report["oracle"] = {"max_length": args.max_oracle_len, "valid": ok, "witness": word,
                            "agrees": ok == pr.valid}
        summary.append(f"oracle (length <= {args.max_oracle_len}) agrees: {ok == pr.valid}")
    if not pr.valid:
        report["witness_note"] = "shortest positive word covered a number of times other than one"
        summary.append(f"witness: {str(pr.witness)!r} covered {pr.witness_coverage} times")
        emit(args, report, summary)
        return EXIT_INVALID
    report["genfun"] = genfun_report(p, args.genfun_k).to_json()
    summary.append(f"generating-function identity: {report['genfun']['passed']}")
    if all(d > 1 for d in p.indices):
        report.update(analysis_block(p))
        summary.append(f"periods: {p.periods}")
    else:
        report["analysis_skipped"] = "some index d_i = 1"
    emit(args, report, summary)
    return EXIT_OK


def cmd_analyze(args) -> int:
    p = partition_from_json(load_json(args.input))
    pr = verify_partition(p)
    if not pr.valid:
        raise InvalidPartition(f"not a partition: witness {str(pr.witness)!r}")
    report = {"manifest": manifest(args, [args.input]), "parts": _parts_json(p), **analysis_block(p)}
    report["B_matrices"] = {part.name: build_B_matrix(part.graph) for part in p.parts}
    emit(args, report, [f"periods: {p.periods}", f"theorem1 falsifier: {report['theorem1']['falsifier']}"])
    return EXIT_OK


def cmd_genfun(args) -> int:
    obj = load_json(args.input)
    report = {"manifest": manifest(args, [args.input])}
    if "parts" in obj:
        p = partition_from_json(obj)
        gr = genfun_report(p, args.k)
        report.update(gr.to_json())
        summary = [f"{name}: {f}" for name, f in zip(p.describe(), gr.functions)]
        summary.append(f"sum = {gr.total}")
    else:
        alphabet, g = subgroup_from_json(obj)
        reps = [parse_word(args.rep, alphabet)] if args.rep is not None else coset_reps(g).reps
        report["cosets"] = []
        summary = []
        for w in reps:
            f = generating_function(g.automaton(g.walk(0, w)))
            report["cosets"].append({"rep": str(w), "accept": g.walk(0, w), "p": f.to_json()})
            summary.append(f"{w or 'e'}: {f}")
    emit(args, report, summary)
    return EXIT_OK


def cmd_search(args) -> int:
    indices = tuple(int(x) for x in args.indices.split(",")) if args.indices else None
    cfg = SearchConfig(rank=args.rank, indices=indices, max_index=args.max_index, max_parts=args.max_parts,
                       shards=args.shards, max_tuples=args.max_tuples, workers=args.workers,
                       checkpoint=args.resume)
    rep = search_counterexamples(cfg)
    report = {"manifest": manifest(args, []), **rep.to_json(timings=args.timings)}
    summary = [f"tuples examined: {report['tuples_examined']}", f"partitions found: {report['partitions_found']}",
               f"counterexamples: {report['counterexamples_found']}", f"complete: {rep.complete}"]
    log.info("search finished in %.2fs", rep.wall_seconds)
    emit(args, report, summary)
    if rep.counterexamples:
        return EXIT_COUNTEREXAMPLE
    if not rep.complete:
        return EXIT_RESOURCE
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hsautomata", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="Schreier graph of a subgroup given by generators")
    p.add_argument("input")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("verify", help="verify and analyze a claimed coset partition")
    p.add_argument("input")
    p.add_argument("--max-oracle-len", type=int, default=None)
    p.add_argument("--genfun-k", type=int, default=20)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("analyze", help="period analysis of a valid coset partition")
    p.add_argument("input")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("genfun", help="generating functions of cosets or of a partition")
    p.add_argument("input")
    p.add_argument("--rep", default=None, help="coset representative (subgroup files only)")
    p.add_argument("-k", type=int, default=20, help="coefficient check horizon (partition files)")
    p.set_defaults(func=cmd_genfun)

    p = sub.add_parser("search", help="exhaustive search for distinct-index partitions")
    p.add_argument("--rank", type=int, required=True)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--indices", help="comma-separated index multiset, e.g. 2,3,6")
    group.add_argument("--max-index", type=int)
    p.add_argument("--max-parts", type=int, default=None)
    p.add_argument("--shards", type=int, default=1)
    p.add_argument("--workers", type=int, default=None, help=f"worker processes (default: ${THREADS_ENV} or 1)")
    p.add_argument("--max-tuples", type=int, default=None)
    p.add_argument("--resume", default=None, help="checkpoint file, created or resumed")
    p.add_argument("--timings", action="store_true", help="include wall time in the report")
    p.set_defaults(func=cmd_search)

    for p in sub.choices.values():
        p.add_argument("-o", "--output", default=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except InfiniteIndex as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFINITE
    except InvalidPartition as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except (ParseError, HSError, ValueError, KeyError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
