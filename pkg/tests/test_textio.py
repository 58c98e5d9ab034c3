import pytest
from hypothesis import given, settings

from conftest import q_exprs, random_q_expr
from qcalc.textio import (
    ExpApply,
    Juxt,
    Mark,
    ParseError,
    Power,
    Tuple4,
    Var,
    Void,
    ac_canon,
    ac_equal,
    free_vars,
    parse,
    parse_assertion,
    parse_qlf,
    print_expr,
    substitute,
)


class TestParse:
    def test_reflexion_shape(self):
        assert parse("[[x]]") == Mark("", Mark("", Var("x")))

    def test_nested_subscripts(self):
        assert parse("[[X]i]j") == Mark("j", Mark("i", Var("X")))

    def test_tuple_literal(self):
        assert parse("{a, b, c, d}") == Tuple4(
            (Var("a"), Var("b"), Var("c"), Var("d"))
        )

    def test_power(self):
        assert parse("[X]i^3") == Power("i", Var("X"), 3)
        assert parse("[X]^2") == Power("", Var("X"), 2)
        assert parse("[X]i^1") == Mark("i", Var("X"))

    def test_exp_apply(self):
        e = parse("{a, b, c, d}^([]i)")
        assert isinstance(e, ExpApply)
        assert e.exponent == Mark("i", Void())

    def test_empty_is_void(self):
        assert parse("") == Void()
        assert parse("   ") == Void()

    def test_empty_tuple_slots(self):
        e = parse("{[], , , []}")
        assert e.slots[1] == Void()

    def test_subscript_needs_adjacency(self):
        assert parse("[x] i") == Juxt((Mark("", Var("x")), Var("i")))
        assert parse("[x]i") == Mark("i", Var("x"))
        # A longer identifier is never a subscript.
        assert parse("[x]ij") == Juxt((Mark("", Var("x")), Var("ij")))

    def test_juxt_flattens(self):
        e = parse("a b c")
        assert isinstance(e, Juxt) and len(e.parts) == 3

    def test_whitespace_insignificant(self):
        assert parse("a   b") == parse("a b")


class TestParseErrors:
    @pytest.mark.parametrize(
        "text",
        [
            "[x",
            "x]",
            "{a, b, c}",
            "{a, b, c, d, e}",
            "[x]^0",
            "x^3",
            "{[x]i, b, c, d}",
            "x^(y",
            "{a, b, c, d",
        ],
    )
    def test_bad_inputs_raise_with_span(self, text):
        with pytest.raises(ParseError) as exc:
            parse(text)
        span = exc.value.span
        assert 0 <= span.start <= span.end <= len(text)

    def test_assertion_needs_one_separator(self):
        with pytest.raises(ParseError):
            parse_assertion("a == b == c")
        lhs, rhs = parse_assertion("[[A] A] == ")
        assert rhs == Void()


class TestPrint:
    def test_examples(self):
        assert print_expr(Mark("i", Void())) == "[]i"
        assert (
            print_expr(Mark("k", Tuple4((Var("a"), Var("b"), Var("c"), Var("d")))))
            == "[{a, b, c, d}]k"
        )

    @settings(max_examples=300)
    @given(q_exprs)
    def test_roundtrip(self, e):
        assert parse(print_expr(e)) == e

    @given(q_exprs)
    def test_print_parse_idempotent(self, e):
        s = print_expr(e)
        assert print_expr(parse(s)) == s

    def test_thousand_random_asts_roundtrip(self, rng):
        for _ in range(1000):
            e = random_q_expr(rng)
            assert parse(print_expr(e)) == e


class TestHelpers:
    def test_ac_equal_reorders_juxt(self):
        assert ac_equal(parse("a b [c]"), parse("[c] b a"))
        assert not ac_equal(parse("a b"), parse("a b b"))

    def test_ac_canon_nested(self):
        assert print_expr(ac_canon(parse("[b a]i x"))) == "[a b]i x"

    def test_free_vars_split(self):
        q, l = free_vars(parse("[A]i {x, , y, } B"))
        assert q == {"A", "B"} and l == {"x", "y"}

    def test_free_vars_conflict(self):
        with pytest.raises(ValueError):
            free_vars(parse("A {A, , , }"))

    def test_substitute(self):
        e = substitute(parse("[X]i X"), {"X": parse("a b")})
        assert print_expr(e) == "[a b]i a b"

    def test_substitute_into_tuple_stays_lof(self):
        with pytest.raises(ValueError):
            substitute(parse("{x, , , }"), {"x": parse("[y]i")})

    def test_qlf_parsing(self):
        lines = parse_qlf(
            "# comment\n"
            "[[A]]\n"
            "\n"
            "[[A] A] ==   # inline comment\n"
            "[x]i == [x]j\n"
        )
        assert [l.lineno for l in lines] == [2, 4, 5]
        assert lines[1].rhs == Void()
        assert lines[2].rhs == Mark("j", Var("x"))
