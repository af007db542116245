"""Command-line interface.

Exit codes: 0 on success, 1 on any error or per-file census diagnostic,
2 on usage errors.
"""

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .abelian import abelianization
from .census import (
    SupergroupEmbedding,
    ambient_normalizer,
    render_csv_report,
    render_json_report,
    run_census,
    write_csv_report,
    write_json_report,
)
from .config import get_settings
from .coset import CosetTable, is_normal, normalizer_index, validate_table
from .errors import CensusError
from .lowindex import SearchMode, low_index_subgroups
from .models import CensusOptions
from .numerics import (
    THREEFOLD_DEGREE_NOTE,
    beauville_bound,
    etale_cover_numerics,
    is_maximal_degree_candidate,
    product_threefold,
)
from .presentation import Presentation, format_presentation, parse_presentation, presentation_to_json
from .rewriting import schreier_presentation, subgroup_abelianization
from .table1 import PUBLISHED_N1_TOTAL, check_table1, load_table1, summarize_table1

settings = get_settings()


def _read_presentation(path: str) -> Presentation:
    return parse_presentation(Path(path).read_text(encoding="utf-8"))


def _dump(data) -> str:
    return json.dumps(data, indent=settings.json_indent)


def cmd_parse(args: argparse.Namespace) -> int:
    print(_dump(presentation_to_json(_read_presentation(args.file))))
    return 0


def cmd_abelianize(args: argparse.Namespace) -> int:
    invariants = abelianization(_read_presentation(args.file))
    if args.json:
        print(_dump(invariants.model_dump()))
    else:
        print(invariants)
    return 0


def cmd_low_index(args: argparse.Namespace) -> int:
    presentation = _read_presentation(args.file)
    mode = SearchMode.NORMAL_ONLY if args.normal else SearchMode.ALL
    tables = low_index_subgroups(presentation, args.index, mode=mode, max_nodes=args.max_nodes)
    if args.json:
        print(_dump([t.to_json() for t in tables]))
        return 0
    for table in tables:
        action = " ".join(
            f"{name}={list(perm)}" for name, perm in zip(table.generator_names, table.action)
        )
        flag = " normal" if is_normal(table) else ""
        print(f"index {table.index}{flag}: {action}")
    return 0


def cmd_subgroup(args: argparse.Namespace) -> int:
    presentation = _read_presentation(args.file)
    data = json.loads(Path(args.table).read_text(encoding="utf-8"))
    table = CosetTable.from_json(data, presentation.generator_names)
    validate_table(table, presentation)

    if args.presentation:
        print(format_presentation(schreier_presentation(presentation, table)))
    elif args.abelianization:
        print(subgroup_abelianization(presentation, table))
    elif args.b1:
        print(subgroup_abelianization(presentation, table).free_rank)
    elif args.supergroup:
        embedding = SupergroupEmbedding.parse(_read_presentation(args.supergroup), args.embed)
        print(_dump(ambient_normalizer(embedding, presentation, table).model_dump()))
    else:
        print(normalizer_index(table))
    return 0


def cmd_census(args: argparse.Namespace) -> int:
    options = CensusOptions(
        index=args.index,
        max_cosets=args.max_cosets,
        max_nodes=args.max_nodes,
        workers=args.workers,
        pattern=args.pattern,
        supergroup_path=Path(args.supergroup) if args.supergroup else None,
        embed=args.embed,
    )
    outcome = run_census(args.directory, options)
    if args.out:
        write_json_report(outcome, args.out)
    if args.csv:
        write_csv_report(outcome, args.csv)
    if not args.out and not args.csv:
        sys.stdout.write(render_csv_report(outcome) if args.csv_stdout else render_json_report(outcome))
    for diagnostic in outcome.diagnostics:
        print(f"{diagnostic.source}: {diagnostic.kind}: {diagnostic.message}", file=sys.stderr)
    return 1 if outcome.diagnostics else 0


def cmd_degree_bound(args: argparse.Namespace) -> int:
    print(beauville_bound(args.pg))
    return 0


def cmd_cover(args: argparse.Namespace) -> int:
    numerics = etale_cover_numerics(args.chi, args.degree, args.q, K2_X=args.k2)
    result = numerics.model_dump()
    result["maximal_degree_candidate"] = is_maximal_degree_candidate(numerics)
    print(_dump(result))
    return 0


def cmd_threefold(args: argparse.Namespace) -> int:
    print(_dump(product_threefold(args.genus).model_dump()))
    return 0


def cmd_table1(args: argparse.Namespace) -> int:
    rows = load_table1(args.path)
    checks = check_table1(rows)
    summary = summarize_table1(rows)
    result = {
        "rows": [c.model_dump() for c in checks],
        "summary": summary.model_dump(),
        "reconcile": summary.reconcile(args.claimed),
    }
    if args.json:
        print(_dump(result))
        return 0
    for check in checks:
        n1 = "-" if check.n1 is None else check.n1
        print(f"{check.lattice}\t{check.h1}\tN0={check.n0}\tN1={n1}\t"
              f"quotients={check.order4_quotients}\t{check.status}")
    reconcile = result["reconcile"]
    print(f"N1 total {summary.total} (doubled {summary.doubled}), {summary.missing} missing; "
          f"claimed {reconcile['claimed_total']} (doubled {reconcile['claimed_doubled']}), "
          f"gap {reconcile['gap']}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fpcensus",
        description="Index-four subgroup census of finitely presented groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the canonical JSON form of a presentation")
    p.add_argument("file")
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("abelianize", help="print the abelian invariants G/[G,G]")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_abelianize)

    p = sub.add_parser("low-index", help="list subgroups of index at most N")
    p.add_argument("file")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--normal", action="store_true", help="normal subgroups only")
    p.add_argument("--json", action="store_true")
    p.add_argument("--max-nodes", type=int, default=None)
    p.set_defaults(func=cmd_low_index)

    p = sub.add_parser("subgroup", help="inspect one subgroup given by its coset table")
    p.add_argument("file")
    p.add_argument("--table", required=True, help="coset table JSON file")
    what = p.add_mutually_exclusive_group(required=True)
    what.add_argument("--presentation", action="store_true")
    what.add_argument("--abelianization", action="store_true")
    what.add_argument("--b1", action="store_true")
    what.add_argument("--normalizer", action="store_true")
    p.add_argument("--supergroup", help="supergroup presentation file (with --normalizer)")
    p.add_argument("--embed", help="comma-separated supergroup words, one per generator")
    p.set_defaults(func=cmd_subgroup)

    p = sub.add_parser("census", help="classify the subgroups of every presentation in a directory")
    p.add_argument("directory")
    p.add_argument("--index", type=int, default=settings.census_index)
    p.add_argument("--out", help="write the JSON report here")
    p.add_argument("--csv", help="write the CSV summary here")
    p.add_argument("--csv-stdout", action="store_true", help="print CSV instead of JSON")
    p.add_argument("--supergroup", help="supergroup presentation file")
    p.add_argument("--embed", help="comma-separated supergroup words, one per generator")
    p.add_argument("--pattern", default=None, help="file glob (default from settings)")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--max-nodes", type=int, default=None)
    p.add_argument("--max-cosets", type=int, default=None)
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("degree-bound", help="canonical degree bound for a given p_g")
    p.add_argument("--pg", type=int, required=True)
    p.set_defaults(func=cmd_degree_bound)

    p = sub.add_parser("cover", help="invariants of an étale cover of a surface")
    p.add_argument("--chi", type=int, default=1)
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--q", type=int, default=0)
    p.add_argument("--k2", type=int, default=None, help="K^2 of the base (default 9 chi)")
    p.set_defaults(func=cmd_cover)

    p = sub.add_parser(
        "threefold",
        help="invariants of the product threefold",
        description="Invariants of the product of a degree-36 surface with a curve of genus g. "
        + THREEFOLD_DEGREE_NOTE,
    )
    p.add_argument("--genus", type=int, required=True)
    p.set_defaults(func=cmd_threefold)

    p = sub.add_parser("table1", help="check the published census table")
    p.add_argument("--path", default=None, help="table CSV (default: bundled fixture)")
    p.add_argument("--claimed", type=int, default=PUBLISHED_N1_TOTAL)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_table1)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "supergroup", None) and not getattr(args, "embed", None):
        parser.error("--supergroup requires --embed")
    if getattr(args, "embed", None) and not getattr(args, "supergroup", None):
        parser.error("--embed requires --supergroup")
    if args.command == "subgroup" and args.supergroup and not args.normalizer:
        parser.error("--supergroup only applies to --normalizer")
    try:
        return args.func(args)
    except (CensusError, OSError, ValueError, RecursionError, MemoryError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
