"""Command-line front end.

Subcommands: parse, eval, equiv, laws, distribution, group-table,
braid {compose,verify,diagram}, check-derivation, construct.
Exit codes: 0 when every requested check passes, 1 when a check fails,
2 on usage or syntax errors (reported to stderr with the input span).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from .braid import (
    BraidWord,
    braid_diagram,
    braid_to_signed_perm,
    parse_braid_word,
    verify_braid_relations,
    word_to_text,
)
from .constructor import (
    SlotPermutation,
    mark_slot,
    permute_expr,
    verify_construction,
)
from .kernel import Q8Op, QValue, q8_mul
from .rewrite import Derivation, check_derivation
from .semantics import EvalError, evaluate
from .textio import ParseError, parse, parse_assertion, parse_qlf, print_expr, substitute
from .verifier import (
    BudgetExceeded,
    SUITES,
    assignment_budget,
    check_assertions,
    check_equiv,
    distribution_matrix,
    env_patterns,
    report_to_json_text,
    run_law_suite,
    distribution_demos,
)


@dataclass
class CliConfig:
    format: str = "text"
    budget: int | None = None
    jobs: int = 1

    def __post_init__(self) -> None:
        if self.budget is not None and self.budget < 16:
            raise ValueError("budget must be at least 16")
        if self.jobs < 1:
            raise ValueError("jobs must be at least 1")

    @property
    def effective_budget(self) -> int:
        return self.budget if self.budget is not None else assignment_budget()


def _emit_json(payload) -> None:
    print(json.dumps(payload, sort_keys=True, indent=2))


def _parse_env(text: str) -> dict:
    env: dict = {}
    if not text:
        return env
    for item in text.split(","):
        if "=" not in item:
            raise ValueError(f"bad --env item {item!r}; want name=MUUM or name=M")
        name, _, value = item.partition("=")
        name = name.strip()
        value = value.strip()
        if len(value) == 4:
            env[name] = QValue.from_pattern(value)
        elif len(value) == 1 and value in "MU":
            env[name] = value == "M"
        else:
            raise ValueError(
                f"bad value {value!r} for {name}; want 4-char (MUUM) or 1-char (M/U)"
            )
    return env


def _cmd_parse(args, cfg: CliConfig) -> int:
    text = Path(args.file).read_text()
    lines_out = []
    for line in parse_qlf(text):
        if line.rhs is None:
            lines_out.append({"line": line.lineno, "expr": print_expr(line.lhs)})
        else:
            lines_out.append(
                {
                    "line": line.lineno,
                    "lhs": print_expr(line.lhs),
                    "rhs": print_expr(line.rhs),
                }
            )
    if cfg.format == "json":
        _emit_json({"lines": lines_out})
    else:
        for entry in lines_out:
            if "expr" in entry:
                print(entry["expr"])
            else:
                print(f"{entry['lhs']} == {entry['rhs']}")
    return 0


def _cmd_eval(args, cfg: CliConfig) -> int:
    expr = parse(args.expr)
    env = _parse_env(args.env or "")
    value = evaluate(expr, env)
    if cfg.format == "json":
        _emit_json({"expr": print_expr(expr), "value": value.pattern()})
    else:
        print(value.pattern())
    return 0


def _cmd_equiv(args, cfg: CliConfig) -> int:
    if args.file:
        report = check_assertions(
            Path(args.file).read_text(), budget=cfg.effective_budget, jobs=cfg.jobs
        )
        if cfg.format == "json":
            print(report_to_json_text(report))
        else:
            print(report.render())
        return 0 if report.all_hold else 1
    if args.assertion is None:
        raise ValueError("equiv needs an \"LHS == RHS\" argument or --file")
    lhs, rhs = parse_assertion(args.assertion)
    result = check_equiv(lhs, rhs, budget=cfg.effective_budget, jobs=cfg.jobs)
    payload = {
        "lhs": print_expr(lhs),
        "rhs": print_expr(rhs),
        "verdict": result.verdict,
        "assignments_checked": result.assignments_checked,
    }
    ce = env_patterns(result.counterexample)
    if ce is not None:
        payload["counterexample"] = ce
    if cfg.format == "json":
        _emit_json(payload)
    else:
        print(result.verdict)
        if ce:
            print("counterexample: " + ", ".join(f"{k}={v}" for k, v in sorted(ce.items())))
    return 0 if result.equivalent else 1


def _cmd_laws(args, cfg: CliConfig) -> int:
    report = run_law_suite(args.suite)
    if cfg.format == "json":
        print(report_to_json_text(report))
    else:
        print(report.render())
    return 0 if report.all_hold else 1


def _cmd_distribution(args, cfg: CliConfig) -> int:
    report = distribution_matrix()
    demos = distribution_demos()
    ok = report.all_hold and demos.demo1_holds and demos.demo2_resolved == "template"
    if cfg.format == "json":
        payload = report.to_json()
        payload["demonstrations"] = demos.to_json()
        _emit_json(payload)
    else:
        print(report.render())
        print(demos.render())
    return 0 if ok else 1


def _cmd_group_table(args, cfg: CliConfig) -> int:
    ops = list(Q8Op)
    if cfg.format == "json":
        _emit_json(
            {
                "elements": [g.symbol for g in ops],
                "products": {
                    g.symbol: {h.symbol: q8_mul(g, h).symbol for h in ops}
                    for g in ops
                },
            }
        )
    else:
        width = 4
        print(" " * width + "".join(f"{h.symbol:>{width}}" for h in ops))
        for g in ops:
            print(
                f"{g.symbol:>{width}}"
                + "".join(f"{q8_mul(g, h).symbol:>{width}}" for h in ops)
            )
        print("(row applied first, column second)")
    return 0


def _braid_word(args) -> BraidWord:
    return parse_braid_word(args.word, args.n)


def _cmd_braid_compose(args, cfg: CliConfig) -> int:
    word = _braid_word(args)
    perm = braid_to_signed_perm(word)
    if cfg.format == "json":
        _emit_json(
            {
                "word": word_to_text(word),
                "arity": word.arity,
                "target": list(perm.target),
                "marked": list(perm.marked),
            }
        )
    else:
        print(repr(perm))
    return 0


def _cmd_braid_verify(args, cfg: CliConfig) -> int:
    report = verify_braid_relations(args.n)
    if cfg.format == "json":
        _emit_json(report.to_json())
    else:
        print(report.render())
    return 0 if report.all_hold else 1


def _cmd_braid_diagram(args, cfg: CliConfig) -> int:
    word = _braid_word(args)
    print(braid_diagram(word))
    return 0


def _cmd_check_derivation(args, cfg: CliConfig) -> int:
    data = json.loads(Path(args.file).read_text())
    scripts = data if isinstance(data, list) else [data]
    reports = [check_derivation(Derivation.from_json(entry)) for entry in scripts]
    if cfg.format == "json":
        _emit_json([r.to_json() for r in reports])
    else:
        for r in reports:
            print(r.render())
    return 0 if all(r.ok for r in reports) else 1


def _parse_perm(text: str) -> SlotPermutation:
    source = []
    marks = []
    for item in text.split(","):
        item = item.strip()
        flagged = item.endswith("m")
        if flagged:
            item = item[:-1]
        if item not in ("1", "2", "3", "4"):
            raise ValueError(
                f"bad permutation entry {item!r}; want e.g. 1,4m,2,3"
            )
        source.append(int(item))
        marks.append(flagged)
    if len(source) != 4:
        raise ValueError("permutation needs exactly 4 entries")
    return SlotPermutation(tuple(source), tuple(marks))


def _cmd_construct(args, cfg: CliConfig) -> int:
    if args.kind == "mark-slot":
        slot = int(args.arg)
        expr = mark_slot(slot)
        spec = ["a", "b", "c", "d"]
        spec[slot - 1] = f"[{spec[slot - 1]}]"
        target = parse("{" + ", ".join(spec) + "}")
        result = check_equiv(
            substitute(expr, {"X": parse("{a, b, c, d}")}), target
        )
    else:
        p = _parse_perm(args.arg)
        expr = permute_expr(p)
        result = verify_construction(expr, p)
    payload = {
        "expression": print_expr(expr),
        "verified": result.equivalent,
        "assignments_checked": result.assignments_checked,
    }
    if cfg.format == "json":
        _emit_json(payload)
    else:
        print(payload["expression"])
        print(f"verified: {payload['verified']}")
    return 0 if result.equivalent else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="qcalc",
        description="16-valued mark calculus: evaluation, exhaustive"
        " equivalence, law suites, derivation checking, braids.",
    )
    ap.add_argument("--format", choices=("text", "json"), default="text")
    ap.add_argument(
        "--budget",
        type=int,
        default=None,
        help="assignment budget for equivalence checks"
        " (default 16^6, or QCALC_BUDGET)",
    )
    ap.add_argument("--jobs", type=int, default=1, help="parallel workers")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="echo a .qlf file in canonical form")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_parse)

    p = sub.add_parser("eval", help="evaluate an expression")
    p.add_argument("expr")
    p.add_argument("--env", default="", help="bindings, e.g. A=MUUM,b=M")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("equiv", help='check an "LHS == RHS" assertion')
    p.add_argument("assertion", nargs="?")
    p.add_argument("--file", help="check every assertion in a .qlf file")
    p.set_defaults(fn=_cmd_equiv)

    p = sub.add_parser("laws", help="run a named law suite")
    p.add_argument("suite", choices=SUITES)
    p.set_defaults(fn=_cmd_laws)

    p = sub.add_parser(
        "distribution",
        help="verify the 8x8 distribution matrix and the two demonstrations",
    )
    p.set_defaults(fn=_cmd_distribution)

    p = sub.add_parser("group-table", help="print the operator group table")
    p.set_defaults(fn=_cmd_group_table)

    b = sub.add_parser("braid", help="braid-word operations")
    bsub = b.add_subparsers(dest="braid_command", required=True)
    p = bsub.add_parser("compose", help="compose a word to a signed permutation")
    p.add_argument("word")
    p.add_argument("--n", type=int, default=4, help="strand count")
    p.set_defaults(fn=_cmd_braid_compose)
    p = bsub.add_parser("verify", help="verify the braid relations")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(fn=_cmd_braid_verify)
    p = bsub.add_parser("diagram", help="draw a word as ASCII strands")
    p.add_argument("word")
    p.add_argument("--n", type=int, default=4)
    p.set_defaults(fn=_cmd_braid_diagram)

    p = sub.add_parser("check-derivation", help="replay a derivation script")
    p.add_argument("file")
    p.set_defaults(fn=_cmd_check_derivation)

    p = sub.add_parser("construct", help="slot constructions")
    p.add_argument("kind", choices=("mark-slot", "permute"))
    p.add_argument("arg", help="slot number, or permutation like 1,4m,2,3")
    p.set_defaults(fn=_cmd_construct)

    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        cfg = CliConfig(format=args.format, budget=args.budget, jobs=args.jobs)
        if hasattr(args, "n") and args.n < 2:
            raise ValueError("braid arity must be at least 2")
        return args.fn(args, cfg)
    except ParseError as err:
        print(
            f"error: {err.message} (at {err.span.start}..{err.span.end})",
            file=sys.stderr,
        )
        return 2
    except BudgetExceeded as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except (EvalError, ValueError, KeyError, OSError, json.JSONDecodeError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
