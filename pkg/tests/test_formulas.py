"""Direct formula semantics over runs: clauses, validities, encodings."""

import random
from decimal import Decimal

from lict import (
    BOT,
    Act,
    ActionExpr,
    Always,
    Atom,
    Concat,
    And,
    Issue,
    Next,
    Not,
    Pay,
    Perm,
    Render,
    Until,
    check_spec,
    compute_permissions,
    encode_run,
    evaluate,
    f_implies,
    f_oblig,
    f_or,
    interpret_action_expr,
    license_consequences,
    make_run,
    parse_formula,
    parse_license,
    parse_run,
    pretty_formula,
)

from gen import POOL, random_formula, random_run

PAY = Pay(Decimal("1.00"))
READ = Render("journal", "d")
JOURNAL_TEXT = "((pay[1.00] bot* render[journal,d]) | bot)*"
JOURNAL_RUN = parse_run(
    f"""
    @0 issue n = {JOURNAL_TEXT}
    @0 do n pay[1.00]
    @2 do n render[journal,d]
    """
)


class TestActionExpr:
    def test_positive_matches_exactly(self):
        pred = interpret_action_expr(ActionExpr(True, PAY, "n"))
        assert pred(PAY, "n")
        assert not pred(READ, "n")
        assert not pred(PAY, "m")

    def test_complement_is_per_name(self):
        pred = interpret_action_expr(ActionExpr(False, PAY, "n"))
        assert pred(READ, "n")
        assert pred(BOT, "n")
        assert not pred(PAY, "n")
        assert not pred(READ, "m")

    def test_bot_complement_matches_any_real_action(self):
        pred = interpret_action_expr(ActionExpr(False, BOT, "n"))
        assert pred(PAY, "n")
        assert not pred(BOT, "n")


class TestEvaluate:
    def test_negation_clause(self):
        perms = compute_permissions(JOURNAL_RUN)
        rng = random.Random(83)
        for _ in range(50):
            formula = random_formula(rng, 3, names=("n",))
            t = rng.randint(0, 4)
            assert evaluate(JOURNAL_RUN, perms, t, Not(formula)) == (
                not evaluate(JOURNAL_RUN, perms, t, formula)
            )

    def test_prop1_family_on_samples(self):
        rng = random.Random(89)
        for _ in range(80):
            run = random_run(rng, horizon=rng.randint(0, 5))
            perms = compute_permissions(run)
            for _ in range(10):
                action = rng.choice(POOL)
                name = rng.choice(("n", "m", "k"))
                t = rng.randint(0, run.horizon + 3)
                either = f_or(
                    Perm(ActionExpr(True, action, name)),
                    Perm(ActionExpr(False, action, name)),
                )
                assert evaluate(run, perms, t, either)
                must_implies_may = f_implies(
                    f_oblig(action, name), Perm(ActionExpr(True, action, name))
                )
                assert evaluate(run, perms, t, must_implies_may)

    def test_obligation_iff_sole_permission(self):
        rng = random.Random(97)
        for _ in range(80):
            run = random_run(rng, horizon=rng.randint(0, 4))
            perms = compute_permissions(run)
            for name in run.names:
                for t in range(run.horizon + 3):
                    for action in POOL:
                        obliged = evaluate(run, perms, t, f_oblig(action, name))
                        assert obliged == (perms.permitted(name, t) == {action})

    def test_journal_property_at_zero(self):
        prop = parse_formula("(pay[1.00], n) -> X(!O(render[journal,d], n))")
        perms = compute_permissions(JOURNAL_RUN)
        assert evaluate(JOURNAL_RUN, perms, 0, prop)

    def test_temporal_unfolding(self):
        rng = random.Random(101)
        for _ in range(60):
            run = random_run(rng, horizon=rng.randint(0, 4))
            perms = compute_permissions(run)
            left = random_formula(rng, 2, names=("n", "m"))
            right = random_formula(rng, 2, names=("n", "m"))
            t = rng.randint(0, run.horizon + 2)
            box = evaluate(run, perms, t, Always(left))
            unfolded = evaluate(run, perms, t, And(left, Next(Always(left))))
            assert box == unfolded
            until = evaluate(run, perms, t, Until(left, right))
            unfolded_until = evaluate(
                run, perms, t, f_or(right, And(left, Next(Until(left, right))))
            )
            assert until == unfolded_until

    def test_name_independence(self):
        rng = random.Random(103)
        for _ in range(40):
            run = random_run(rng, horizon=3, max_licenses=1, names=("m",))
            formula = random_formula(rng, 4, names=("n",))
            base = make_run([], run.actions, horizon=run.horizon)
            with_license = make_run(run.issuances, run.actions, horizon=run.horizon)
            t = rng.randint(0, 4)
            assert evaluate(
                base, compute_permissions(base), t, formula
            ) == evaluate(with_license, compute_permissions(with_license), t, formula)


class TestCheckSpec:
    def test_box_true(self):
        assert check_spec(JOURNAL_RUN, parse_formula("G true"))

    def test_journal_non_violation_spec(self):
        spec = parse_formula(
            f"""
            issue(n, {JOURNAL_TEXT}) ->
              G( (((pay[1.00], n) -> P(pay[1.00], n)) & (O(pay[1.00], n) -> (pay[1.00], n)))
               & (((render[journal,d], n) -> P(render[journal,d], n)) & (O(render[journal,d], n) -> (render[journal,d], n)))
               & (((bot, n) -> P(bot, n)) & (O(bot, n) -> (bot, n))) )
            """
        )
        assert check_spec(JOURNAL_RUN, spec)

    def test_render_without_paying_violates(self):
        bad = parse_run(f"@0 issue n = {JOURNAL_TEXT}\n@0 do n render[journal,d]")
        spec = parse_formula(
            f"issue(n, {JOURNAL_TEXT}) -> G((render[journal,d], n) -> P(render[journal,d], n))"
        )
        assert not check_spec(bad, spec)


class TestEncodeRun:
    def test_own_run_satisfies_encoding(self):
        rng = random.Random(107)
        for _ in range(50):
            run = random_run(rng, horizon=rng.randint(0, 3), depth=3)
            psi = encode_run(run)
            assert evaluate(run, compute_permissions(run), 0, psi)

    def test_restricts_only_issued_names(self):
        run = parse_run("@0 issue n = bot*")
        psi = encode_run(run)
        other = make_run(
            list(run.issuances), [(0, "m", PAY)], horizon=run.horizon
        )
        assert evaluate(other, compute_permissions(other), 0, psi)

    def test_empty_run_encodes_to_truth_shape(self):
        run = parse_run("")
        assert check_spec(run, encode_run(run))


class TestLicenseConsequences:
    def test_depth_zero_single_atom(self):
        formula = license_consequences("n", Atom(PAY), 0)
        assert formula == Perm(ActionExpr(True, PAY, "n"))

    def test_depth_one_concat(self):
        lic = Concat(Atom(PAY), Atom(READ))
        formula = license_consequences("n", lic, 1)
        expected = And(
            Perm(ActionExpr(True, PAY, "n")),
            f_implies(
                Act(ActionExpr(True, PAY, "n")),
                Next(Perm(ActionExpr(True, READ, "n"))),
            ),
        )
        assert formula == expected

    def test_no_random_run_falsifies(self):
        rng = random.Random(109)
        licenses = [
            parse_license("pay[1.00]"),
            parse_license("pay[1.00] render[w,d]"),
            parse_license("(pay[1.00] | bot) render[w,d]"),
            parse_license(JOURNAL_TEXT),
        ]
        for _ in range(200):
            lic = rng.choice(licenses)
            depth = rng.randint(0, 2)
            implication = f_implies(Issue("n", lic), license_consequences("n", lic, depth))
            run = random_run(rng, horizon=rng.randint(0, 4))
            run = make_run(
                [(rng.randint(0, run.horizon), "n", lic)],
                [entry for entry in run.actions],
                horizon=run.horizon,
            )
            perms = compute_permissions(run)
            for t in range(run.horizon + 2):
                assert evaluate(run, perms, t, implication)


class TestPretty:
    def test_resugars_obligation_and_eventually(self):
        formula = parse_formula("F O(bot, n)")
        assert pretty_formula(formula) == "F O(bot, n)"
