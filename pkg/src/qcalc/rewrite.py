"""Named rewrite rules and a step-by-step derivation checker.

A rule is an oriented pair of patterns, possibly parametrized by mark
subscripts (alpha, beta) or power exponents (m, n).  Every variable in a
pattern is a metavariable.  Matching is modulo commutativity,
associativity and flattening of juxtaposition only; marks match exactly.
Steps supply their full substitution, so applying a rule never searches:
the instantiated source side must equal the addressed subterm up to
juxtaposition reordering (or, at a juxtaposition node, a sub-multiset of
its children, the rest passing through unchanged).

Position paths are child indices; children of a juxtaposition are
addressed in the order of their canonical printed forms so that scripts
are deterministic.

Rules are validated semantically (via exhaustive equivalence) the first
time the database is used; an unsound rule aborts.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct
from typing import Callable, Mapping, Sequence

from .kernel import Q8Op, q8_mul, q8_power
from .textio import (
    Expr,
    ExpApply,
    Juxt,
    Mark,
    Power,
    Tuple4,
    Var,
    ac_equal,
    canonical_text,
    children,
    juxt,
    mark,
    parse,
    power,
    print_expr,
    substitute,
)
from .verifier import check_equiv

ALPHAS = ("i", "j", "k")


class RewriteError(Exception):
    pass


class BadPosition(RewriteError):
    pass


class BadSubstitution(RewriteError):
    pass


class SideConditionViolation(RewriteError):
    pass


class NoMatch(RewriteError):
    def __init__(self, expected: Expr, found: Expr) -> None:
        super().__init__(
            f"expected {print_expr(expected) or '(void)'},"
            f" found {print_expr(found) or '(void)'}"
        )
        self.expected = expected
        self.found = found


@dataclass(frozen=True)
class Rule:
    """An oriented rewrite law with optional mark/exponent parameters."""

    id: str
    label: str
    params: tuple[str, ...]
    lhs: Callable[[Mapping[str, object]], Expr]
    rhs: Callable[[Mapping[str, object]], Expr]

    def validate_params(self, params: Mapping[str, object]) -> dict[str, object]:
        out: dict[str, object] = {}
        for name in self.params:
            if name not in params:
                raise SideConditionViolation(
                    f"rule {self.id} needs parameter {name!r}"
                )
            value = params[name]
            if name in ("alpha", "beta"):
                if value not in ALPHAS:
                    raise SideConditionViolation(
                        f"parameter {name}={value!r} must be one of i, j, k"
                    )
            elif name in ("m", "n"):
                if not isinstance(value, int) or not 1 <= value <= 3:
                    raise SideConditionViolation(
                        f"parameter {name}={value!r} must be an integer in 1..3"
                    )
            out[name] = value
        if (
            "alpha" in self.params
            and "beta" in self.params
            and self.id == "Q5-AntiCommutes"
            and out["alpha"] == out["beta"]
        ):
            raise SideConditionViolation("anti-commutation needs alpha != beta")
        extra = set(params) - set(self.params)
        if extra:
            raise SideConditionViolation(
                f"rule {self.id} takes no parameters {sorted(extra)}"
            )
        return out

    def param_space(self) -> list[dict[str, object]]:
        if not self.params:
            return [{}]
        axes = []
        for name in self.params:
            axes.append(ALPHAS if name in ("alpha", "beta") else (1, 2, 3))
        combos = []
        for values in iproduct(*axes):
            combo = dict(zip(self.params, values))
            try:
                self.validate_params(combo)
            except SideConditionViolation:
                continue
            combos.append(combo)
        return combos

    def sides(self, params: Mapping[str, object]) -> tuple[Expr, Expr]:
        p = self.validate_params(params)
        return self.lhs(p), self.rhs(p)


def _static(text: str) -> Callable[[Mapping[str, object]], Expr]:
    expr = parse(text)
    return lambda params: expr


def _templated(template: str) -> Callable[[Mapping[str, object]], Expr]:
    @lru_cache(maxsize=32)
    def build(alpha: str = "", beta: str = "") -> Expr:
        return parse(template.format(a=alpha, b=beta))

    return lambda params: build(params.get("alpha", ""), params.get("beta", ""))


def _op_form(g: Q8Op, body: Expr) -> Expr:
    """Canonical syntax for an operator applied to body."""
    if g is Q8Op.P1:
        return body
    if g is Q8Op.M1:
        return mark(body)
    if not g.negated:
        return Mark(g.axis, body)
    return Power(g.axis, body, 3)


def _qcomp_lhs(params: Mapping[str, object]) -> Expr:
    inner = power(str(params["alpha"]), Var("A"), int(params["m"]))
    return power(str(params["beta"]), inner, int(params["n"]))


def _qcomp_rhs(params: Mapping[str, object]) -> Expr:
    g = q8_mul(
        q8_power(_AXIS_OPS[str(params["alpha"])], int(params["m"])),
        q8_power(_AXIS_OPS[str(params["beta"])], int(params["n"])),
    )
    return _op_form(g, Var("A"))


_AXIS_OPS = {"i": Q8Op.I, "j": Q8Op.J, "k": Q8Op.K}


def _rule(rule_id: str, label: str, lhs: str, rhs: str, params: tuple[str, ...] = ()) -> Rule:
    build = _templated if params else _static
    return Rule(rule_id, label, params, build(lhs), build(rhs))


_RULE_LIST: list[Rule] = [
    # The ten initials and consequences shared with the plain calculus.
    _rule("A1-Position", "Position", "[[A] A]", ""),
    _rule("A2-Transposition", "Transposition", "[[A] [B]] C", "[[A C] [B C]]"),
    _rule("A3-Reflexion", "Reflexion", "[[A]]", "A"),
    _rule("A4-Generation", "Generation", "[A] B", "[A B] B"),
    _rule("A5-Integration", "Integration", "A []", "[]"),
    _rule("A6-Occultation", "Occultation", "[[A] B] A", "A"),
    _rule("A7-Iteration", "Iteration", "A A", "A"),
    _rule("A8-Extension", "Extension", "[[A] [B]] [[A] B]", "A"),
    _rule("A9-Echelon", "Echelon", "[[[A] B] C]", "[A C] [[B] C]"),
    _rule(
        "A10-Crosstransposition",
        "Crosstransposition",
        "[[[A] B] [[A] [B]]]",
        "[A B] [A [B]]",
    ),
    # Laws specific to the 16-valued calculus.
    _rule("Q1-SQR", "SQR", "[[A]{a}]{a}", "[A]", ("alpha",)),
    _rule("Q2-IJK", "IJK", "[[[A]i]j]k", "[A]"),
    _rule("Q3-QuadraReflexion", "Quadra Reflexion", "[A]{a}^4", "A", ("alpha",)),
    _rule("Q4-MarkCommutes", "Mark Commutes", "[[A]{a}]", "[[A]]{a}", ("alpha",)),
    _rule(
        "Q5-AntiCommutes",
        "Anti-commutes",
        "[[A]{a}]{b}",
        "[[[A]{b}]{a}]",
        ("alpha", "beta"),
    ),
    _rule(
        "Q6-SplitGeneration",
        "Split Generation",
        "[[A]{a} B]{a} C",
        "[[A C]{a} B]{a} C",
        ("alpha",),
    ),
    _rule("Q7-Extraction", "Extraction", "[A []{a}]{a}", "[A]{a} []{a}^3", ("alpha",)),
    _rule(
        "Q8-Disintegration",
        "Disintegration",
        "[A B]{a}",
        "[[[A]{a} [B]{a}] [[A]{a} []{a}^3] [[B]{a} []{a}^3]]",
        ("alpha",),
    ),
    _rule(
        "Q9-RightDistribution",
        "Right Distribution",
        "[[A]{a}^3 [B]{a}^3]{a} C",
        "[[A C]{a}^3 [B C]{a}^3]{a}",
        ("alpha",),
    ),
    _rule(
        "Q10-LeftDistribution",
        "Left Distribution",
        "C [[A]{a}^3 [B]{a}^3]{a}",
        "[[C A]{a}^3 [C B]{a}^3]{a}",
        ("alpha",),
    ),
    _rule("Q11-CompileK", "Compile-k", "[[]i []j] [[]i^3 []j^3]", "[]k"),
    _rule("Q12-CompileI", "Compile-i", "[[]j []k] [[]j^3 []k^3]", "[]i"),
    _rule("Q13-CompileJ", "Compile-j", "[[]i []k] [[]i^3 []k^3]", "[]j"),
    # The distribution law for the cube-power conjunction forms.
    _rule(
        "QD-AndDistribution",
        "Conjunction Distribution",
        "[[A]{a} [B]{a}]{a}^3 C",
        "[[A C]{a} [B C]{a}]{a}^3",
        ("alpha",),
    ),
    # Definitional expansions of marks over tuple literals.
    _rule("D1-PlainTuple", "Plain mark on a tuple", "[{s1, s2, s3, s4}]", "{[s1], [s2], [s3], [s4]}"),
    _rule("D1-ITuple", "i-mark on a tuple", "[{s1, s2, s3, s4}]i", "{[s2], s1, s4, [s3]}"),
    _rule("D1-JTuple", "j-mark on a tuple", "[{s1, s2, s3, s4}]j", "{[s3], [s4], s1, s2}"),
    _rule("D1-KTuple", "k-mark on a tuple", "[{s1, s2, s3, s4}]k", "{[s4], s3, [s2], s1}"),
    _rule(
        "D2-JuxtTuple",
        "Tuple-wise juxtaposition",
        "{s1, s2, s3, s4} {t1, t2, t3, t4}",
        "{s1 t1, s2 t2, s3 t3, s4 t4}",
    ),
    # Values of the empty marks and their cubes, as tuple literals.
    _rule("E-EmptyPlain", "Empty plain mark", "[]", "{[], [], [], []}"),
    _rule("E-EmptyI", "Empty i-mark", "[]i", "{[], , , []}"),
    _rule("E-EmptyJ", "Empty j-mark", "[]j", "{[], [], , }"),
    _rule("E-EmptyK", "Empty k-mark", "[]k", "{[], , [], }"),
    _rule("E-EmptyI3", "Empty i-mark cubed", "[]i^3", "{, [], [], }"),
    _rule("E-EmptyJ3", "Empty j-mark cubed", "[]j^3", "{, , [], []}"),
    _rule("E-EmptyK3", "Empty k-mark cubed", "[]k^3", "{, [], , []}"),
    # Composition facts for nested subscripted marks.
    _rule("C-IJ", "ij = k", "[[A]i]j", "[A]k"),
    _rule("C-JK", "jk = i", "[[A]j]k", "[A]i"),
    _rule("C-KI", "ki = j", "[[A]k]i", "[A]j"),
    _rule("C-JI", "ji = -k", "[[A]j]i", "[[A]k]"),
    _rule("C-KJ", "kj = -i", "[[A]k]j", "[[A]i]"),
    _rule("C-IK", "ik = -j", "[[A]i]k", "[[A]j]"),
    _rule("C-JKI", "jki = -1", "[[[A]j]k]i", "[A]"),
    _rule("C-KIJ", "kij = -1", "[[[A]k]i]j", "[A]"),
    # Power notation.
    _rule("P2-PowerSquare", "Square is the mark", "[A]{a}^2", "[A]", ("alpha",)),
    _rule("P3-PowerCube", "Cube is the negated mark", "[A]{a}^3", "[[A]{a}]", ("alpha",)),
    Rule(
        "QCOMP",
        "Operator-power composition",
        ("alpha", "m", "beta", "n"),
        _qcomp_lhs,
        _qcomp_rhs,
    ),
]

RULES: dict[str, Rule] = {r.id: r for r in _RULE_LIST}


@lru_cache(maxsize=1)
def validate_rules() -> int:
    """Check every rule instantiation for semantic validity; returns the
    number of instances checked.  Any unsound rule aborts."""
    checked = 0
    for rule in _RULE_LIST:
        for combo in rule.param_space():
            lhs, rhs = rule.sides(combo)
            res = check_equiv(lhs, rhs)
            if not res.equivalent:
                raise AssertionError(
                    f"rule {rule.id} {combo} is not semantically valid:"
                    f" {print_expr(lhs)} != {print_expr(rhs)}"
                )
            checked += 1
    return checked


def rules() -> dict[str, Rule]:
    """The validated rule database."""
    validate_rules()
    return RULES


# ---------------------------------------------------------------------------
# Positions
# ---------------------------------------------------------------------------

def addressed_children(e: Expr) -> list[tuple[Expr, int]]:
    """Children in address order with their stored indices.  Juxtaposition
    children are ordered by canonical printed form (stable on ties)."""
    kids = children(e)
    if isinstance(e, Juxt):
        order = sorted(range(len(kids)), key=lambda i: (canonical_text(kids[i]), i))
        return [(kids[i], i) for i in order]
    return list(zip(kids, range(len(kids))))


def child_at(e: Expr, pos: Sequence[int]) -> Expr:
    cur = e
    for step in pos:
        addressed = addressed_children(cur)
        if not 0 <= step < len(addressed):
            raise BadPosition(
                f"position {tuple(pos)} does not address a subterm of"
                f" {print_expr(e) or '(void)'}"
            )
        cur = addressed[step][0]
    return cur


def replace_at(e: Expr, pos: Sequence[int], new: Expr) -> Expr:
    if not pos:
        return new
    head, rest = pos[0], pos[1:]
    addressed = addressed_children(e)
    if not 0 <= head < len(addressed):
        raise BadPosition(f"position {tuple(pos)} out of range")
    child, stored = addressed[head]
    replaced = replace_at(child, rest, new)
    if isinstance(e, Mark):
        return Mark(e.sub, replaced)
    if isinstance(e, Power):
        return Power(e.sub, replaced, e.exponent)
    if isinstance(e, Juxt):
        parts = list(e.parts)
        parts[stored] = replaced
        return juxt(*parts)
    if isinstance(e, Tuple4):
        slots = list(e.slots)
        slots[stored] = replaced
        if not _all_lof(slots):
            _purity_error(replaced)
        return Tuple4(tuple(slots))
    if isinstance(e, ExpApply):
        if stored == 0:
            return ExpApply(replaced, e.exponent)
        return ExpApply(e.base, replaced)
    raise BadPosition(f"no children at {print_expr(e)}")


def _all_lof(slots) -> bool:
    from .textio import is_lof_expr

    return all(is_lof_expr(s) for s in slots)


def _purity_error(e: Expr):
    raise BadSubstitution(
        f"rewrite would place a non-LoF expression in a tuple slot: {print_expr(e)}"
    )


def all_positions(e: Expr) -> list[tuple[int, ...]]:
    """Every position of e, preorder, in address order."""
    out: list[tuple[int, ...]] = [()]
    for idx, (child, _) in enumerate(addressed_children(e)):
        out.extend((idx,) + p for p in all_positions(child))
    return out


# ---------------------------------------------------------------------------
# Rule application
# ---------------------------------------------------------------------------

def _metavars(e: Expr) -> set[str]:
    out = set()
    stack = [e]
    while stack:
        cur = stack.pop()
        if isinstance(cur, Var):
            out.add(cur.name)
        stack.extend(children(cur))
    return out


def _normalize_subst(subst: Mapping[str, Expr | str] | None) -> dict[str, Expr]:
    out: dict[str, Expr] = {}
    for name, value in (subst or {}).items():
        out[name] = parse(value) if isinstance(value, str) else value
    return out


def apply_rule(
    e: Expr,
    rule: Rule | str,
    direction: str = "ltr",
    pos: Sequence[int] = (),
    subst: Mapping[str, Expr | str] | None = None,
    params: Mapping[str, object] | None = None,
) -> Expr:
    """Apply one rule instance at a position.

    The rule side selected by `direction`, instantiated with `subst`, must
    match the addressed subterm up to juxtaposition reordering; at a
    juxtaposition it may match a sub-multiset of the children, the rest
    passing through unchanged.
    """
    if isinstance(rule, str):
        db = rules()
        if rule not in db:
            raise RewriteError(f"unknown rule {rule!r}")
        rule = db[rule]
    else:
        validate_rules()
    if direction not in ("ltr", "rtl"):
        raise RewriteError(f"direction must be ltr or rtl, not {direction!r}")
    lhs, rhs = rule.sides(params or {})
    src_pat, dst_pat = (lhs, rhs) if direction == "ltr" else (rhs, lhs)

    bindings = _normalize_subst(subst)
    needed = _metavars(src_pat) | _metavars(dst_pat)
    missing = needed - set(bindings)
    if missing:
        raise BadSubstitution(
            f"substitution for rule {rule.id} is missing {sorted(missing)}"
        )
    try:
        instance_src = substitute(src_pat, bindings)
        instance_dst = substitute(dst_pat, bindings)
    except ValueError as err:
        raise BadSubstitution(str(err)) from err

    target = child_at(e, pos)
    remainder = _match(target, instance_src)
    replacement = juxt(*remainder, instance_dst)
    return replace_at(e, pos, replacement)


def _match(target: Expr, instance_src: Expr) -> list[Expr]:
    """Match the instantiated source against the subterm; returns leftover
    juxtaposition children (empty for an exact match)."""
    if isinstance(target, Juxt) and isinstance(instance_src, Juxt):
        wanted = Counter(canonical_text(p) for p in instance_src.parts)
        remainder: list[Expr] = []
        for part in target.parts:
            key = canonical_text(part)
            if wanted.get(key, 0) > 0:
                wanted[key] -= 1
            else:
                remainder.append(part)
        if any(v > 0 for v in wanted.values()):
            raise NoMatch(instance_src, target)
        return remainder
    if ac_equal(target, instance_src):
        return []
    raise NoMatch(instance_src, target)


def find_applications(
    e: Expr,
    rule: Rule | str,
    direction: str = "ltr",
    subst: Mapping[str, Expr | str] | None = None,
    params: Mapping[str, object] | None = None,
) -> list[tuple[int, ...]]:
    """All positions where the given rule instance applies (preorder)."""
    hits = []
    for pos in all_positions(e):
        try:
            apply_rule(e, rule, direction, pos, subst, params)
        except RewriteError:
            continue
        hits.append(pos)
    return hits


# ---------------------------------------------------------------------------
# Derivations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Step:
    rule: str
    direction: str
    pos: tuple[int, ...]
    subst: Mapping[str, Expr] = field(default_factory=dict)
    params: Mapping[str, object] = field(default_factory=dict)
    result: Expr | None = None  # recorded outcome, for resilient checking


@dataclass(frozen=True)
class Derivation:
    name: str
    start: Expr
    steps: tuple[Step, ...]
    end: Expr

    def to_json(self) -> dict:
        steps = []
        for s in self.steps:
            entry: dict = {
                "rule": s.rule,
                "dir": s.direction,
                "pos": list(s.pos),
                "subst": {k: print_expr(v) for k, v in sorted(s.subst.items())},
            }
            if s.params:
                entry["params"] = dict(sorted(s.params.items()))
            if s.result is not None:
                entry["result"] = print_expr(s.result)
            steps.append(entry)
        return {
            "name": self.name,
            "start": print_expr(self.start),
            "steps": steps,
            "end": print_expr(self.end),
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Derivation":
        steps = []
        for s in data.get("steps", ()):
            steps.append(
                Step(
                    s["rule"],
                    s.get("dir", "ltr"),
                    tuple(s.get("pos", ())),
                    {k: parse(v) for k, v in s.get("subst", {}).items()},
                    dict(s.get("params", {})),
                    parse(s["result"]) if "result" in s else None,
                )
            )
        return cls(
            data.get("name", "derivation"),
            parse(data["start"]),
            tuple(steps),
            parse(data["end"]),
        )

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Derivation":
        return cls.from_json(json.loads(text))


@dataclass(frozen=True)
class StepReport:
    index: int
    rule: str
    applied: bool
    error: str | None
    matches_recorded: bool | None
    semantic_ok: bool | None
    term: str | None

    @property
    def ok(self) -> bool:
        return (
            self.applied
            and self.matches_recorded is not False
            and self.semantic_ok is not False
        )


@dataclass(frozen=True)
class DerivationReport:
    name: str
    steps: tuple[StepReport, ...]
    end_matches: bool | None

    @property
    def ok(self) -> bool:
        return self.end_matches is True and all(s.ok for s in self.steps)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "ok": self.ok,
            "end_matches": self.end_matches,
            "steps": [
                {
                    "index": s.index,
                    "rule": s.rule,
                    "applied": s.applied,
                    "error": s.error,
                    "matches_recorded": s.matches_recorded,
                    "semantic_ok": s.semantic_ok,
                    "term": s.term,
                }
                for s in self.steps
            ],
        }

    def render(self) -> str:
        lines = [f"derivation {self.name}:"]
        for s in self.steps:
            mark_ = "ok" if s.ok else "FAIL"
            err = f"  [{s.error}]" if s.error else ""
            sem = "" if s.semantic_ok else "  semantics differ!"
            lines.append(
                f"  step {s.index:>2} {s.rule:<22} {mark_:<4}"
                f" -> {s.term if s.term is not None else '?'}{err}{sem}"
            )
        lines.append(
            f"  end matches: {self.end_matches}; derivation"
            f" {'PASSES' if self.ok else 'FAILS'}"
        )
        return "\n".join(lines)


def check_derivation(d: Derivation) -> DerivationReport:
    """Replay a derivation: each step is checked syntactically (the rule
    applies and produces the recorded term) and semantically (consecutive
    terms are exhaustively equivalent).  Failures are reported per step."""
    reports: list[StepReport] = []
    current: Expr | None = d.start
    for index, step in enumerate(d.steps):
        produced: Expr | None = None
        error = None
        applied = False
        if current is not None:
            try:
                produced = apply_rule(
                    current, step.rule, step.direction, step.pos, step.subst, step.params
                )
                applied = True
            except RewriteError as err:
                error = str(err)
        else:
            error = "no term to apply to (earlier step failed)"

        matches = None
        if applied and step.result is not None:
            matches = ac_equal(produced, step.result)
        # Prefer the recorded term for continuation so one bad step does
        # not desynchronize the positions of the remaining script.
        next_term = step.result if step.result is not None else produced

        semantic = None
        if current is not None and next_term is not None:
            try:
                semantic = check_equiv(current, next_term).equivalent
            except Exception as err:  # report, never throw
                semantic = None
                error = f"{error + '; ' if error else ''}semantic check failed: {err}"

        reports.append(
            StepReport(
                index,
                step.rule,
                applied,
                error,
                matches,
                semantic,
                print_expr(next_term) if next_term is not None else None,
            )
        )
        current = next_term

    end_matches = ac_equal(current, d.end) if current is not None else None
    return DerivationReport(d.name, tuple(reports), end_matches)
