"""Runs and the permission interpretation against the viability definition."""

import random
from decimal import Decimal

import pytest

from lict import (
    BOT,
    Pay,
    Render,
    action_sequence,
    active,
    compute_permissions,
    make_run,
    parse_license,
    parse_run,
)

from gen import oracle_permitted, random_run

PAY = Pay(Decimal("1.00"))
READ = Render("journal", "d")

JOURNAL_RUN = parse_run(
    """
    @0 issue n = ((pay[1.00] bot* render[journal,d]) | bot)*
    @0 do n pay[1.00]
    @2 do n render[journal,d]
    """
)


class TestRunModel:
    def test_action_sequence_at_issuance_is_empty(self):
        assert action_sequence(JOURNAL_RUN, "n", 0) == ()

    def test_action_sequence_fills_bots(self):
        assert action_sequence(JOURNAL_RUN, "n", 3) == (PAY, BOT, READ)

    def test_action_sequence_unissued_name_fails(self):
        with pytest.raises(ValueError):
            action_sequence(JOURNAL_RUN, "m", 1)

    def test_active(self):
        late = parse_run("@2 issue n = bot*")
        assert not active(late, "n", 1)
        assert active(late, "n", 2)
        assert active(late, "n", 5)
        assert not active(late, "m", 4)

    def test_horizon_validation(self):
        with pytest.raises(ValueError):
            make_run([(4, "n", parse_license("bot"))], [], horizon=2)


class TestComputePermissions:
    def test_nothing_issued_permits_bot_everywhere(self):
        perms = compute_permissions(parse_run(""))
        for t in range(4):
            assert perms.permitted("n", t) == {BOT}
            assert perms.obligated("n", t) == BOT

    def test_journal_timeline(self):
        perms = compute_permissions(JOURNAL_RUN)
        assert perms.permitted("n", 0) == {PAY, BOT}
        assert perms.permitted("n", 1) == {READ, BOT}
        assert perms.permitted("n", 2) == {READ, BOT}
        assert perms.permitted("n", 3) == {PAY, BOT}

    def test_pay_license_obligation_then_violation(self):
        run = parse_run("@0 issue m = pay[1.00]")
        perms = compute_permissions(run)
        assert perms.permitted("m", 0) == {PAY}
        assert perms.obligated("m", 0) == PAY
        assert perms.permitted("m", 1) == {BOT}
        assert perms.obligated("m", 1) == BOT

    def test_violation_is_absorbing(self):
        run = parse_run("@0 issue m = pay[1.00]\n@0 do m bot")
        perms = compute_permissions(run)
        for t in range(1, 6):
            assert perms.permitted("m", t) == {BOT}

    def test_oracle_equivalence_random(self):
        rng = random.Random(67)
        for _ in range(150):
            run = random_run(rng, horizon=rng.randint(0, 6))
            perms = compute_permissions(run)
            for name in set(run.names) | {"zz"}:
                for t in range(run.horizon + 5):
                    assert perms.permitted(name, t) == oracle_permitted(run, name, t)

    def test_nonempty_at_every_time(self):
        rng = random.Random(71)
        for _ in range(100):
            run = random_run(rng, horizon=4)
            perms = compute_permissions(run)
            for name in run.names:
                for t in range(run.horizon + 4):
                    assert perms.permitted(name, t)

    def test_fresh_license_leaves_others_untouched(self):
        rng = random.Random(73)
        for _ in range(60):
            run = random_run(rng, horizon=4, max_licenses=2, names=("n", "m"))
            extended = make_run(
                list(run.issuances) + [(1, "extra", parse_license("pay[9.99]*"))],
                run.actions,
                horizon=run.horizon,
            )
            before = compute_permissions(run)
            after = compute_permissions(extended)
            for name in run.names:
                for t in range(run.horizon + 3):
                    assert before.permitted(name, t) == after.permitted(name, t)

    def test_lasso_matches_longer_horizon_recomputation(self):
        rng = random.Random(79)
        for _ in range(60):
            run = random_run(rng, horizon=3)
            perms = compute_permissions(run)
            stretch = perms.loop_len * 3 + 4
            extended = make_run(run.issuances, run.actions, horizon=run.horizon + stretch)
            flat = compute_permissions(extended)
            for name in run.names:
                for t in range(run.horizon + stretch):
                    assert perms.permitted(name, t) == flat.permitted(name, t)

    def test_subset_state_exposed_for_structure_labeling(self):
        perms = compute_permissions(JOURNAL_RUN)
        assert perms.subset_state("n", 0)
        assert perms.subset_state("zz", 0) is None
