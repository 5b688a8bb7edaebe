"""Command-line entry point.

Exit codes: 0 = ruled out / verified, 10 = decomposition found,
20 = undetermined (timeouts), 1 = domain error, 2 = usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .canonical import (
    canonicalize,
    check_canonical,
    dump_symmetric,
    load_symmetric,
    symmetric_to_json,
)
from .driver import (
    enumerate_combos,
    parse_solver_output,
    run_campaign,
    run_solver,
    solve_combo,
    ComboSpec,
)
from .encoder import EncoderConfig, decode, encode
from .oracle import BudgetExceeded, SearchBudget, brute_min_rank
from .symmetry import GroupId, is_group_symmetric, orbit_kinds, total_rank
from .tensor import load_decomposition, verify

EXIT_OK = 0
EXIT_FOUND = 10
EXIT_UNDETERMINED = 20
EXIT_ERROR = 1


def _parse_combo(text: str, group: GroupId) -> dict[str, int]:
    tags = {k.tag for k in orbit_kinds(group)}
    combo: dict[str, int] = {}
    for part in text.split(","):
        if not part:
            continue
        tag, _, value = part.partition("=")
        if tag not in tags or not value.isdigit():
            raise ValueError(f"bad combo entry {part!r}; known kinds: {sorted(tags)}")
        combo[tag] = int(value)
    return combo


def _encoder_config(args) -> EncoderConfig:
    return EncoderConfig(
        xor_width=args.xor_width,
        per_matrix_nonzero=args.per_matrix_nonzero,
        s_ne_h=args.s_ne_h,
    )


def _resolve_solver(args) -> str:
    """Precedence: --solver flag, then config file, then MMTSAT_SOLVER."""
    if getattr(args, "solver", None):
        return args.solver
    if getattr(args, "config", None):
        with open(args.config) as fh:
            cfg = json.load(fh)
        if cfg.get("solver"):
            return cfg["solver"]
    env = os.environ.get("MMTSAT_SOLVER")
    if env:
        return env
    raise ValueError("no solver configured: pass --solver, put \"solver\" in the "
                     "config file, or set MMTSAT_SOLVER")


def _emit(args, human: str, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def _add_encoder_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--xor-width", type=int, default=4,
                   help="max inputs per XOR clause block")
    p.add_argument("--per-matrix-nonzero", action="store_true",
                   help="force each of A, B, C nonzero instead of the triplet")
    p.add_argument("--s-ne-h", action="store_true",
                   help="add the optional S != H constraints for cyc-t")


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--config", help="JSON config file (solver, etc.)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmtsat")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="write a DIMACS instance for one combo")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--combo", required=True, help="e.g. id=2,delta=1")
    p.add_argument("--out", required=True)
    p.add_argument("--varmap", help="variable-map sidecar JSON path")
    _add_encoder_flags(p)
    _add_common(p)

    p = sub.add_parser("solve-one", help="encode and solve a single combo")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--combo", required=True)
    p.add_argument("--solver", help="command template with {cnf}")
    p.add_argument("--timeout", type=float)
    p.add_argument("--work-dir", default=".")
    _add_encoder_flags(p)
    _add_common(p)

    p = sub.add_parser("search", help="campaign over all combos up to a rank")
    p.add_argument("--group", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--solver", help="command template with {cnf}")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--timeout", type=float, help="per-combo timeout in seconds")
    p.add_argument("--checkpoint")
    p.add_argument("--work-dir")
    _add_encoder_flags(p)
    _add_common(p)

    p = sub.add_parser("verify", help="check a decomposition JSON file")
    p.add_argument("path")
    p.add_argument("--group", help="also check symmetry under this group")
    _add_common(p)

    p = sub.add_parser("canonicalize", help="normalize a symmetric decomposition")
    p.add_argument("path")
    p.add_argument("--out", help="output path (default: stdout)")
    _add_common(p)

    p = sub.add_parser("brute", help="exhaustive minimum-rank search")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--max-rank", type=int, required=True)
    p.add_argument("--nodes", type=int, help="optional DFS node limit")
    _add_common(p)

    return parser


def _cmd_encode(args) -> int:
    group = GroupId.from_name(args.group)
    combo = _parse_combo(args.combo, group)
    cnf, varmap = encode(group, args.n, combo, _encoder_config(args))
    cnf.write(args.out)
    if args.varmap:
        varmap.write(args.varmap)
    _emit(args, f"wrote {args.out}: {cnf.num_vars} vars, {len(cnf.clauses)} clauses",
          {"out": args.out, "vars": cnf.num_vars, "clauses": len(cnf.clauses)})
    return EXIT_OK


def _cmd_solve_one(args) -> int:
    group = GroupId.from_name(args.group)
    combo = _parse_combo(args.combo, group)
    solver = _resolve_solver(args)
    kinds = orbit_kinds(group)
    spec = ComboSpec(group, tuple((k.tag, combo.get(k.tag, 0)) for k in kinds))
    os.makedirs(args.work_dir, exist_ok=True)
    status = solve_combo(group, args.n, spec, solver, args.timeout,
                         args.work_dir, _encoder_config(args))
    payload = {"state": status.state, "seconds": round(status.seconds, 3),
               "combo": spec.counts_dict(), "detail": status.detail}
    if status.state == "sat":
        _emit(args, f"SAT: decomposition written to {status.detail}", payload)
        return EXIT_FOUND
    if status.state == "unsat":
        _emit(args, "UNSAT", payload)
        return EXIT_OK
    if status.state == "timeout":
        _emit(args, f"timeout: {status.detail}", payload)
        return EXIT_UNDETERMINED
    _emit(args, f"error: {status.detail}", payload)
    return EXIT_ERROR


def _cmd_search(args) -> int:
    group = GroupId.from_name(args.group)
    solver = _resolve_solver(args)
    report = run_campaign(group, args.n, args.max_rank, solver,
                          workers=args.workers, timeout=args.timeout,
                          checkpoint_path=args.checkpoint,
                          work_dir=args.work_dir,
                          config=_encoder_config(args))
    _emit(args, report.render_table(), report.to_json())
    verdict = report.verdict()
    if verdict == "found":
        return EXIT_FOUND
    if verdict == "ruled_out":
        return EXIT_OK
    return EXIT_UNDETERMINED


def _cmd_verify(args) -> int:
    d = load_decomposition(args.path)
    ok = verify(d)
    dims = f"<{d.n},{d.k},{d.m}>"
    payload = {"valid": ok, "rank": d.rank, "n": d.n, "k": d.k, "m": d.m}
    if ok and args.group:
        group = GroupId.from_name(args.group)
        sym = is_group_symmetric(d, group)
        payload["symmetric"] = sym
        if not sym:
            _emit(args, f"valid rank-{d.rank} decomposition of {dims}, "
                        f"but NOT {group.value}-symmetric", payload)
            return EXIT_ERROR
    if ok:
        _emit(args, f"valid rank-{d.rank} decomposition of {dims}", payload)
        return EXIT_OK
    _emit(args, f"INVALID: does not evaluate to {dims}", payload)
    return EXIT_ERROR


def _cmd_canonicalize(args) -> int:
    sd = load_symmetric(args.path)
    out = canonicalize(sd)
    violations = check_canonical(out)
    if violations:
        raise AssertionError(f"canonicalize left violations: {violations}")
    if args.out:
        dump_symmetric(out, args.out)
        _emit(args, f"wrote {args.out} (rank {out.total_rank()})",
              {"out": args.out, "rank": out.total_rank()})
    else:
        print(json.dumps(symmetric_to_json(out), sort_keys=True))
    return EXIT_OK


def _cmd_brute(args) -> int:
    budget = SearchBudget(max_rank=args.max_rank, max_nodes=args.nodes)
    try:
        rank = brute_min_rank(args.n, args.k, args.m, budget)
    except BudgetExceeded as exc:
        _emit(args, f"budget exceeded: {exc}", {"state": "budget_exceeded"})
        return EXIT_UNDETERMINED
    dims = f"<{args.n},{args.k},{args.m}>"
    if rank is None:
        _emit(args, f"no decomposition of {dims} with rank <= {args.max_rank}",
              {"state": "ruled_out", "max_rank": args.max_rank})
        return EXIT_OK
    _emit(args, f"minimum rank of {dims} within budget: {rank}",
          {"state": "found", "rank": rank})
    return EXIT_FOUND


_COMMANDS = {
    "encode": _cmd_encode,
    "solve-one": _cmd_solve_one,
    "search": _cmd_search,
    "verify": _cmd_verify,
    "canonicalize": _cmd_canonicalize,
    "brute": _cmd_brute,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
