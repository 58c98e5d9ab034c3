"""Finite-domain evaluation: the four mark operators on 4-tuples,
tuple-wise juxtaposition, operator powers and exponent forms, the nine
logical connectives, and the 2-tuple pair mode.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Mapping, Union

from .kernel import (
    ALL_QVALUES,
    LoFValue,
    Q8Op,
    QValue,
    lof_juxt,
    lof_mark,
    op_value,
    q8_apply,
    q8_power,
    q8_to_signed_perm,
)
from .textio import (
    PLAIN,
    ExpApply,
    Expr,
    Juxt,
    Mark,
    Power,
    Tuple4,
    Var,
    Void,
    juxt as juxt_expr,
    mark as mark_expr,
    power as power_expr,
    print_expr,
)

EnvValue = Union[QValue, bool]
Env = Mapping[str, EnvValue]


class EvalError(Exception):
    pass


class UnboundVariable(EvalError):
    def __init__(self, name: str) -> None:
        super().__init__(f"unbound variable {name!r}")
        self.name = name


class BadBinding(EvalError):
    def __init__(self, name: str, expected: str, value: EnvValue) -> None:
        super().__init__(f"variable {name!r} must be bound to {expected}, got {value!r}")
        self.name = name


class BadExponentValue(EvalError):
    """Exponent application with a value outside the eight operator values."""

    def __init__(self, value: QValue) -> None:
        super().__init__(
            f"exponent value {value.pattern()} is not an operator value"
        )
        self.value = value


_SUB_TO_OP = {PLAIN: Q8Op.M1, "i": Q8Op.I, "j": Q8Op.J, "k": Q8Op.K}

# apply_op as 16-entry lookup tables, one per mark kind.
APPLY_TABLES: dict[str, tuple[int, ...]] = {
    sub: tuple(q8_apply(op, v).bits for v in ALL_QVALUES)
    for sub, op in _SUB_TO_OP.items()
}

# Value of an empty mark, by the operator-group element producing it.
OP_BY_VALUE_BITS: dict[int, Q8Op] = {op_value(g).bits: g for g in Q8Op}


def apply_op(sub: str, v: QValue) -> QValue:
    """One mark application: plain marks every slot, i/j/k route and mark
    slots as ([b],a,d,[c]), ([c],[d],a,b) and ([d],c,[b],a) respectively."""
    return QValue(APPLY_TABLES[sub][v.bits])


def apply_op_power(sub: str, v: QValue, n: int) -> QValue:
    """sub applied n times; reduces mod 4 (plain has order 2, i/j/k order 4)."""
    g = q8_power(_SUB_TO_OP[sub], n)
    return q8_apply(g, v)


def juxtapose(v: QValue, w: QValue) -> QValue:
    """Tuple-wise juxtaposition: a slot is marked if either side's slot is."""
    return QValue(v.bits | w.bits)


def _lof_eval(e: Expr, env: Env) -> LoFValue:
    if isinstance(e, Void):
        return False
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariable(e.name)
        val = env[e.name]
        if not isinstance(val, bool):
            raise BadBinding(e.name, "an LoF value (slot variable)", val)
        return val
    if isinstance(e, Mark):
        return lof_mark(_lof_eval(e.body, env))
    if isinstance(e, Juxt):
        out = False
        for p in e.parts:
            out = lof_juxt(out, _lof_eval(p, env))
        return out
    raise EvalError(f"not a plain-LoF expression: {print_expr(e)}")


def evaluate(e: Expr, env: Env | None = None) -> QValue:
    """Evaluate an expression to one of the 16 values.

    Variables inside tuple slots must be bound to LoF values, all other
    variables to QValues.  Exponent applications are defined only when the
    exponent evaluates to one of the eight empty-mark operator values.
    """
    env = env or {}
    if isinstance(e, Void):
        return QValue(0)
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariable(e.name)
        val = env[e.name]
        if not isinstance(val, QValue):
            raise BadBinding(e.name, "a QValue", val)
        return val
    if isinstance(e, Mark):
        return apply_op(e.sub, evaluate(e.body, env))
    if isinstance(e, Power):
        return apply_op_power(e.sub, evaluate(e.body, env), e.exponent)
    if isinstance(e, Juxt):
        bits = 0
        for p in e.parts:
            bits |= evaluate(p, env).bits
        return QValue(bits)
    if isinstance(e, Tuple4):
        return QValue.from_slots(*(_lof_eval(s, env) for s in e.slots))
    if isinstance(e, ExpApply):
        exp = evaluate(e.exponent, env)
        g = OP_BY_VALUE_BITS.get(exp.bits)
        if g is None:
            raise BadExponentValue(exp)
        return q8_apply(g, evaluate(e.base, env))
    raise TypeError(f"not an expression: {e!r}")


eval_expr = evaluate


# ---------------------------------------------------------------------------
# Logical connectives
# ---------------------------------------------------------------------------

CONNECTIVES = ("or", "and", "or_i", "and_i", "or_j", "and_j", "or_k", "and_k")
ALL_CONNECTIVES = CONNECTIVES + ("xor",)


def connective(kind: str, a: Expr, b: Expr) -> Expr:
    """The defining expression tree of a connective applied to a and b.

    `or` is juxtaposition and `and` is [[A][B]]; the subscripted pairs use
    the cube-power forms, e.g. or_i(A,B) = [[A]i^3 [B]i^3]i.  `xor` is the
    exponent form [[A]B] [[B]A].
    """
    if kind == "or":
        return juxt_expr(a, b)
    if kind == "and":
        return mark_expr(juxt_expr(mark_expr(a), mark_expr(b)))
    if kind == "xor":
        return juxt_expr(
            mark_expr(juxt_expr(mark_expr(a), b)),
            mark_expr(juxt_expr(mark_expr(b), a)),
        )
    if kind.startswith("or_") and kind[3:] in ("i", "j", "k"):
        s = kind[3:]
        return mark_expr(
            juxt_expr(power_expr(s, a, 3), power_expr(s, b, 3)), s
        )
    if kind.startswith("and_") and kind[4:] in ("i", "j", "k"):
        s = kind[4:]
        return power_expr(
            s, juxt_expr(mark_expr(a, s), mark_expr(b, s)), 3
        )
    raise ValueError(f"unknown connective {kind!r}")


# ---------------------------------------------------------------------------
# Pair mode (2-tuples with a single imaginary mark)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BFValue:
    """A pair of LoF values; bit 1 is the first slot, bit 0 the second."""

    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits <= 3:
            raise ValueError(f"BFValue bits out of range: {self.bits}")

    @classmethod
    def from_slots(cls, x: bool, y: bool) -> BFValue:
        return cls((x << 1) | int(y))

    @classmethod
    def from_pattern(cls, text: str) -> BFValue:
        if len(text) != 2 or set(text) - {"M", "U"}:
            raise ValueError(f"bad pair pattern {text!r}")
        return cls.from_slots(text[0] == "M", text[1] == "M")

    @property
    def slots(self) -> tuple[bool, bool]:
        return (bool(self.bits & 2), bool(self.bits & 1))

    def pattern(self) -> str:
        return "".join("M" if s else "U" for s in self.slots)

    def __repr__(self) -> str:
        return f"BFValue({self.pattern()!r})"


ALL_BFVALUES = tuple(BFValue(n) for n in range(4))

BF_TRUE = BFValue.from_pattern("UM")
BF_FALSE = BFValue.from_pattern("MU")


def bf_apply(sub: str, v: BFValue) -> BFValue:
    """Pair-mode marks: plain marks both slots, i sends (x,y) to ([y], x)."""
    x, y = v.slots
    if sub == PLAIN:
        return BFValue.from_slots(not x, not y)
    if sub == "i":
        return BFValue.from_slots(not y, x)
    raise EvalError(f"pair mode has no {sub!r} mark")


def bf_apply_power(sub: str, v: BFValue, n: int) -> BFValue:
    for _ in range(n % 4):
        v = bf_apply(sub, v)
    return v


BFEnv = Mapping[str, BFValue]


def bf_evaluate(e: Expr, env: BFEnv | None = None) -> BFValue:
    """Evaluate in pair mode; only plain and i marks are defined."""
    env = env or {}
    if isinstance(e, Void):
        return BFValue(0)
    if isinstance(e, Var):
        if e.name not in env:
            raise UnboundVariable(e.name)
        val = env[e.name]
        if not isinstance(val, BFValue):
            raise BadBinding(e.name, "a BFValue", val)
        return val
    if isinstance(e, Mark):
        return bf_apply(e.sub, bf_evaluate(e.body, env))
    if isinstance(e, Power):
        return bf_apply_power(e.sub, bf_evaluate(e.body, env), e.exponent)
    if isinstance(e, Juxt):
        bits = 0
        for p in e.parts:
            bits |= bf_evaluate(p, env).bits
        return BFValue(bits)
    raise EvalError(f"expression form not defined in pair mode: {print_expr(e)}")


# ---------------------------------------------------------------------------
# Embedding the four pair values into the i/j/k subspaces
# ---------------------------------------------------------------------------

_EMBEDDING_PATH = Path(__file__).parent / "data" / "bf_embeddings.json"


def solve_bf_embeddings() -> dict[str, dict[str, str]]:
    """Brute-force the injection of the 4 pair values into each subspace.

    The injection is pinned by three constraints: the unmarked pair maps to
    the all-unmarked tuple, the pair i-mark intertwines with the subspace
    mark, and the plain mark intertwines with the plain mark.  The solution
    is unique per subspace.
    """
    out: dict[str, dict[str, str]] = {}
    for alpha in ("i", "j", "k"):
        solutions = []
        values = list(ALL_QVALUES)
        for img in _injections(values):
            phi = dict(zip(ALL_BFVALUES, img))
            if phi[BFValue(0)] != QValue(0):
                continue
            ok = all(
                phi[bf_apply("i", v)] == apply_op(alpha, phi[v])
                and phi[bf_apply(PLAIN, v)] == apply_op(PLAIN, phi[v])
                for v in ALL_BFVALUES
            )
            if ok:
                solutions.append(phi)
        if len(solutions) != 1:
            raise AssertionError(
                f"expected a unique embedding for {alpha}, found {len(solutions)}"
            )
        out[alpha] = {
            v.pattern(): solutions[0][v].pattern() for v in ALL_BFVALUES
        }
    return out


def _injections(values):
    for a in values:
        for b in values:
            for c in values:
                for d in values:
                    if len({a, b, c, d}) == 4:
                        yield (a, b, c, d)


@lru_cache(maxsize=1)
def _embeddings() -> dict[str, dict[int, QValue]]:
    data = json.loads(_EMBEDDING_PATH.read_text())
    return {
        alpha: {
            BFValue.from_pattern(src).bits: QValue.from_pattern(dst)
            for src, dst in table.items()
        }
        for alpha, table in data.items()
    }


def embed_bf(alpha: str, v: BFValue) -> QValue:
    """The recorded injection of a pair value into the alpha subspace."""
    if alpha not in ("i", "j", "k"):
        raise ValueError(f"no {alpha!r} subspace")
    return _embeddings()[alpha][v.bits]


# ---------------------------------------------------------------------------
# Slot routing (which input slots can influence which output slots)
# ---------------------------------------------------------------------------

def slot_routes(e: Expr) -> dict[str, set[tuple[int, int]]]:
    """For a tuple-free expression, the set of (source, target) slot pairs
    per variable through which evaluation can route a slot of that
    variable's value.  Exponent applications must have closed exponents.
    """
    routes: dict[str, set[tuple[int, int]]] = {}

    def merge(sub: dict[str, set[tuple[int, int]]], perm) -> None:
        inv = perm.inverse()
        for name, pairs in sub.items():
            routes.setdefault(name, set()).update(
                (src, inv.target[dst - 1]) for src, dst in pairs
            )

    def walk(x: Expr) -> dict[str, set[tuple[int, int]]]:
        if isinstance(x, Var):
            return {x.name: {(s, s) for s in (1, 2, 3, 4)}}
        if isinstance(x, Void):
            return {}
        if isinstance(x, Mark):
            return _route_through(walk(x.body), _SUB_TO_OP[x.sub])
        if isinstance(x, Power):
            return _route_through(
                walk(x.body), q8_power(_SUB_TO_OP[x.sub], x.exponent)
            )
        if isinstance(x, Juxt):
            acc: dict[str, set[tuple[int, int]]] = {}
            for p in x.parts:
                for name, pairs in walk(p).items():
                    acc.setdefault(name, set()).update(pairs)
            return acc
        if isinstance(x, ExpApply):
            g = OP_BY_VALUE_BITS.get(evaluate(x.exponent, {}).bits)
            if g is None:
                raise EvalError("exponent does not evaluate to an operator value")
            return _route_through(walk(x.base), g)
        raise EvalError("slot routing needs a tuple-free expression")

    routes = walk(e)
    return routes


def _route_through(sub: dict[str, set[tuple[int, int]]], g: Q8Op):
    perm = q8_to_signed_perm(g)
    out: dict[str, set[tuple[int, int]]] = {}
    for name, pairs in sub.items():
        moved = set()
        for src, dst in pairs:
            for p in (1, 2, 3, 4):
                if perm.target[p - 1] == dst:
                    moved.add((src, p))
        out[name] = moved
    return out
