import json
import random

import pytest
from hypothesis import given, settings

from conftest import full_envs, q_exprs, random_expr_pair
from qcalc import oracle
from qcalc.kernel import Q8Op, QValue, op_value
from qcalc.semantics import evaluate
from qcalc.textio import parse, print_expr
from qcalc.verifier import (
    ALPHAS,
    BudgetExceeded,
    appendix_b_laws,
    check_assertions,
    check_equiv,
    distribution_matrix,
    env_patterns,
    report_to_json_text,
    run_law_suite,
    distribution_demos,
)


class TestCheckEquiv:
    def test_position_is_void(self):
        res = check_equiv("[[A] A]", "")
        assert res.equivalent and res.assignments_checked == 16

    def test_reflexion(self):
        assert check_equiv("[[A]]", "A").equivalent

    def test_ij_vs_ji_inequivalent_with_counterexample(self):
        res = check_equiv("[[A]i]j", "[[A]j]i")
        assert not res.equivalent
        env = res.counterexample
        assert env is not None
        assert evaluate(parse("[[A]i]j"), env) != evaluate(parse("[[A]j]i"), env)

    def test_counterexample_is_first_in_order(self):
        # A vs the constant all-unmarked: they agree only at A=UUUU, so the
        # first failing assignment is A=UUUM (value 1).
        res = check_equiv("A", "")
        assert not res.equivalent
        assert res.counterexample == {"A": QValue(1)}
        assert res.assignments_checked == 2

    def test_mixed_variable_kinds(self):
        res = check_equiv("[[{a, b, c, d}]i]j X", "[{a, b, c, d}]k X")
        assert res.equivalent
        assert res.assignments_checked == 16 * 16

    def test_symmetry_and_reflexivity(self, rng):
        from conftest import random_q_expr

        for _ in range(20):
            a, b = random_q_expr(rng, 3), random_q_expr(rng, 3)
            assert check_equiv(a, a).equivalent
            assert check_equiv(a, b).equivalent == check_equiv(b, a).equivalent

    def test_transitivity_spot(self, rng):
        from conftest import random_q_expr

        for _ in range(40):
            a, b, c = (random_q_expr(rng, 3) for _ in range(3))
            ab = check_equiv(a, b).equivalent
            bc = check_equiv(b, c).equivalent
            if ab and bc:
                assert check_equiv(a, c).equivalent

    def test_budget_exceeded_reports_requirements(self):
        big = " ".join(f"V{i}" for i in range(7))
        with pytest.raises(BudgetExceeded) as exc:
            check_equiv(parse(big), parse(""))
        assert exc.value.num_variables == 7
        assert exc.value.required == 16 ** 7

    def test_explicit_budget(self):
        with pytest.raises(BudgetExceeded):
            check_equiv("A B", "", budget=16)

    def test_env_var_budget(self, monkeypatch):
        monkeypatch.setenv("QCALC_BUDGET", "16")
        with pytest.raises(BudgetExceeded):
            check_equiv("A B", "")

    def test_parallel_matches_sequential(self):
        lhs, rhs = "[[A] [B]] C D", "[[A C D] [B C D]]"
        seq = check_equiv(lhs, rhs)
        par = check_equiv(lhs, rhs, jobs=2)
        assert (seq.equivalent, seq.counterexample) == (par.equivalent, par.counterexample)
        bad_seq = check_equiv("A B C D", "A B C")
        bad_par = check_equiv("A B C D", "A B C", jobs=3)
        assert bad_seq.counterexample == bad_par.counterexample
        assert bad_seq.assignments_checked == bad_par.assignments_checked

    @given(q_exprs, full_envs)
    @settings(max_examples=150)
    def test_vector_path_agrees_with_evaluate(self, e, env):
        # The vectorized enumerator must implement exactly the same
        # semantics as single-assignment evaluation.
        from qcalc.verifier import _VectorEval, _decode_assignment, _var_spec

        spec = _var_spec((e,))
        count = 1
        for _, dom in spec:
            count *= dom
        if count > 4096:
            return
        ev = _VectorEval(spec, 0, count)
        vec = ev.q_vector(e).to_bytes(count, "little")
        idx = random.Random(17).randrange(count)
        env2 = _decode_assignment(spec, idx)
        assert vec[idx] == evaluate(e, env2).bits

    def test_pattern_range_slicing(self):
        # Chunked enumeration sees exactly the slice of the full pattern.
        from qcalc.verifier import _pattern_range

        full = _pattern_range(16, 3, 0, 16 * 3 * 2)
        for lo, hi in ((0, 5), (7, 31), (31, 96), (40, 41)):
            assert _pattern_range(16, 3, lo, hi) == full[lo:hi]

    @given(q_exprs, full_envs)
    @settings(max_examples=100)
    def test_canonicalization_is_semantic_noop(self, e, env):
        from qcalc.textio import ac_canon

        assert evaluate(ac_canon(e), env) == evaluate(e, env)

    def test_open_exponent_falls_back_to_scalar(self):
        # [Y] Y is all-marked for every Y, an operator value, so the
        # exponent is open but always defined; this exercises the
        # per-assignment fallback path.
        res = check_equiv("X^([Y] Y)", "[X]")
        assert res.equivalent
        assert res.assignments_checked == 256


class TestLawSuites:
    def test_appendix_a_all_hold(self):
        report = run_law_suite("lof_appendix_a")
        assert report.all_hold
        assert len(report.checks) == 10
        assert all(c.assignments_checked <= 4096 for c in report.checks)

    def test_appendix_b_all_hold(self):
        report = run_law_suite("q_appendix_b")
        assert report.all_hold
        by_name = {c.name: c for c in report.checks}
        assert by_name["Q11-CompileK"].note.startswith("value MUMU")
        assert "Q5-AntiCommutes[i,j]" in by_name
        assert len([n for n in by_name if n.startswith("Q5")]) == 6

    def test_compile_laws_values(self):
        assert evaluate(parse("[[]i []j] [[]i^3 []j^3]"), {}) == op_value(Q8Op.K)
        assert evaluate(parse("[[]j []k] [[]j^3 []k^3]"), {}) == op_value(Q8Op.I)
        assert evaluate(parse("[[]i []k] [[]i^3 []k^3]"), {}) == op_value(Q8Op.J)

    def test_appendix_b_left_juxtaposed_variants(self):
        # Laws stated with C juxtaposed on the right also hold with C on
        # the left, juxtaposition being commutative at value level.
        for name, lhs, rhs in appendix_b_laws():
            res = check_equiv(parse(lhs), parse(rhs))
            assert res.equivalent, name
        for a in ALPHAS:
            res = check_equiv(
                parse(f"C [[A]{a} B]{a}"), parse(f"C [[A C]{a} B]{a}")
            )
            assert res.equivalent

    def test_bf_subspaces(self):
        report = run_law_suite("bf_subspaces")
        assert report.all_hold
        names = {c.name for c in report.checks}
        assert "SplitGeneration[i]" in names
        assert "Embedding[k]-imaginary" in names

    def test_q8_relations(self):
        report = run_law_suite("q8_relations")
        assert report.all_hold
        assert len(report.checks) == 64

    def test_unknown_suite(self):
        with pytest.raises(ValueError):
            run_law_suite("nonsense")

    @pytest.mark.parametrize(
        "suite", ["lof_appendix_a", "q_appendix_b", "bf_subspaces", "q8_relations"]
    )
    def test_each_law_appears_exactly_once(self, suite):
        names = [c.name for c in run_law_suite(suite).checks]
        assert len(names) == len(set(names))


class TestDistribution:
    def test_matrix_counts(self):
        report = distribution_matrix()
        assert len(report.cells) == 64
        assert len(report.off_diagonal) == 56
        assert report.holding_count == 56
        assert report.all_hold
        diag = [c for c in report.cells if c.trivial]
        assert len(diag) == 8 and all(c.holds for c in diag)
        assert all(c.assignments_checked == 4096 for c in report.cells)

    def test_named_cells(self):
        report = distribution_matrix()
        by_key = {(c.op1, c.op2): c for c in report.cells}
        assert by_key[("or", "and")].holds
        assert by_key[("or_i", "and_j")].holds
        assert by_key[("or", "or")].trivial and by_key[("or", "or")].holds

    def test_demos(self):
        demos = distribution_demos()
        assert demos.demo1_holds
        assert demos.demo2_template_holds
        assert not demos.demo2_printed_holds
        assert demos.demo2_resolved == "template"


class TestOracleAgreement:
    def test_hundred_random_pairs(self, rng):
        agreements = 0
        inequivalent_seen = 0
        for _ in range(100):
            a, b = random_expr_pair(rng)
            fast = check_equiv(a, b).equivalent
            slow = oracle.equivalent(a, b)
            assert fast == slow, (print_expr(a), print_expr(b))
            agreements += 1
            inequivalent_seen += 0 if fast else 1
        assert agreements == 100
        assert 0 < inequivalent_seen < 100  # both verdicts exercised

    def test_oracle_on_known_laws(self):
        assert oracle.equivalent(parse("[[A] A]"), parse(""))
        assert oracle.equivalent(parse("[[{a, b, c, d}]i]j"), parse("[{a, b, c, d}]k"))
        assert not oracle.equivalent(parse("[[A]i]j"), parse("[[A]j]i"))


class TestReports:
    def test_assertions_and_json_stability(self, tmp_path):
        body = (
            "# laws\n"
            "[[A] A] ==\n"
            "[[A]i]j == [[A]j]i\n"
        )
        rep1 = check_assertions(body)
        rep2 = check_assertions(body)
        assert not rep1.all_hold
        assert [c.holds for c in rep1.checks] == [True, False]
        assert report_to_json_text(rep1) == report_to_json_text(rep2)
        data = json.loads(report_to_json_text(rep1))
        assert data["checks"][1]["counterexample"] == {"A": "UUUU"}

    def test_suite_json_roundtrips(self):
        text = report_to_json_text(run_law_suite("lof_appendix_a"))
        data = json.loads(text)
        assert data["suite"] == "lof_appendix_a"
        assert data["all_hold"] is True

    def test_env_patterns(self):
        assert env_patterns({"A": QValue(9), "b": True}) == {"A": "MUUM", "b": "M"}
