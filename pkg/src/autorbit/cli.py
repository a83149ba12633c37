"""Command-line surface: info, omega, verify, scan."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .catalog import GroupDescriptor, descriptor
from .errors import AutorbitError, CapacityError, GroupFileError, UnknownGroupNameError
from .groupfile import load_group_file
from .perm import resolve_element_cap
from .report import VerdictReport
from .verify import VERIFY_TARGETS, analysis_for, report_for, run_verify


def _resolve_spec(spec: str) -> GroupDescriptor:
    """A <spec> is a catalog grammar string or a path to a .group file."""
    path = Path(spec)
    if path.exists():
        return load_group_file(path)
    try:
        return descriptor(spec)
    except UnknownGroupNameError:
        if spec.endswith(".group"):
            raise GroupFileError(f"no such file: {spec}") from None
        raise


def cmd_info(args) -> int:
    desc = _resolve_spec(args.spec)
    rep = report_for(desc, cap=args.cap, with_timing=args.timing)
    print("\n".join(rep.to_lines(include_timing=args.timing)))
    return 1 if any("-> FAIL" in ln for ln in rep.claim_lines) else 0


def cmd_omega(args) -> int:
    desc = _resolve_spec(args.spec)
    cap = resolve_element_cap(args.cap)
    a = analysis_for(desc, cap)
    if a.table is None:
        print(f"group: {a.name}")
        print(f"order: {a.order}")
        print(f"error: {a.capacity_note}")
        return 2
    print(f"group: {a.name}")
    print(f"order: {a.order}")
    print(f"omega: {a.omega}")
    print("orbit_cells: " + " ".join(f"{o}:{s}" for o, s in a.partition.census()))
    return 0


def cmd_verify(args) -> int:
    text, code = run_verify(
        args.target,
        corpus_dir=args.corpus,
        cap=args.cap,
        max_order=args.max_order,
        timeout_secs=args.timeout_secs,
    )
    sys.stdout.write(text)
    return code


def cmd_scan(args) -> int:
    root = Path(args.dir)
    if not root.is_dir():
        print(f"error: {root} is not a directory", file=sys.stderr)
        return 2
    cap = resolve_element_cap(args.cap)
    if args.max_order is not None:
        cap = min(cap, args.max_order)
    parse_errors = 0
    claim_failures = 0
    blocks = []
    for f in sorted(root.glob("*.group")):
        try:
            desc = load_group_file(f)
        except GroupFileError as exc:
            blocks.append(f"error: {exc}")
            parse_errors += 1
            continue
        rep = report_for(desc, cap=cap, with_timing=args.timing)
        claim_failures += sum(1 for ln in rep.claim_lines if "-> FAIL" in ln)
        if args.emit == "json":
            blocks.append(json.dumps(rep.to_json_dict(), sort_keys=True))
        else:
            blocks.append("\n".join(rep.to_lines(include_timing=args.timing)))
    sep = "\n" if args.emit == "json" else "\n\n"
    if blocks:
        print(sep.join(blocks))
    if claim_failures:
        return 1
    if parse_errors:
        return 2
    return 0


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="autorbit",
        description="Automorphism-orbit invariants and corpus verification for finite permutation groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_cap(p):
        p.add_argument("--cap", type=int, default=None,
                       help="element-table cap (default 250000; AUTORBIT_ELEMENT_CAP overrides)")

    p_info = sub.add_parser("info", help="full invariant report for one group")
    p_info.add_argument("spec", help="catalog name (e.g. A5, PSL2(8), DP(A5,C7)) or path to a .group file")
    add_cap(p_info)
    p_info.add_argument("--timing", action="store_true", help="append a timing_ms line (not byte-stable)")
    p_info.set_defaults(func=cmd_info)

    p_omega = sub.add_parser("omega", help="omega and the orbit census for one group")
    p_omega.add_argument("spec")
    add_cap(p_omega)
    p_omega.set_defaults(func=cmd_omega)

    p_verify = sub.add_parser("verify", help="verify one classification claim over the corpus")
    p_verify.add_argument("target", choices=VERIFY_TARGETS)
    p_verify.add_argument("--corpus", default=None, help="directory of .group files to add to the default corpus")
    p_verify.add_argument("--max-order", type=int, default=None, help="skip groups larger than this")
    p_verify.add_argument("--timeout-secs", type=float, default=None,
                          help="wall-clock budget; remaining groups are SKIPped (output then varies with timing)")
    add_cap(p_verify)
    p_verify.set_defaults(func=cmd_verify)

    p_scan = sub.add_parser("scan", help="batch reports over a directory of .group files")
    p_scan.add_argument("dir")
    p_scan.add_argument("--emit", choices=("text", "json"), default="text")
    p_scan.add_argument("--max-order", type=int, default=None)
    add_cap(p_scan)
    p_scan.add_argument("--timing", action="store_true", help="append timing_ms (not byte-stable)")
    p_scan.set_defaults(func=cmd_scan)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (AutorbitError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
