"""The license logic: formulas, their run semantics, and encoding generators.

Formulas speak about issued licenses, the actions a client performs, and the
actions the client is permitted to perform.  Obligation is an abbreviation:
being obligated to do an action means no other action is permitted for that
license name.  Temporal operators are evaluated over the infinite extension
of a finite run, in which nothing further is issued and every name does
``bot`` forever; the permission timeline of that extension is ultimately
periodic, so evaluation works on a prefix plus a loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable

from .licenses import (
    BOT,
    Action,
    License,
    action_key,
    derivative,
    first_actions,
    pretty_action,
    pretty_license,
)
from .runs import PermissionInterpretation, Run, compute_permissions


@dataclass(frozen=True)
class ActionExpr:
    """An action paired with a license name, or its per-name complement.

    The complement of (a, n) covers every action other than a done with
    respect to the same name n; it never says anything about other names.
    """

    positive: bool
    action: Action
    name: str


def complement(expr: ActionExpr) -> ActionExpr:
    return ActionExpr(not expr.positive, expr.action, expr.name)


def interpret_action_expr(expr: ActionExpr) -> Callable[[Action, str], bool]:
    """The predicate over (action, name) pairs an action expression denotes."""

    def predicate(action: Action, name: str) -> bool:
        return expr_matches(expr, action, name)

    return predicate


def expr_matches(expr: ActionExpr, action: Action, name: str) -> bool:
    if name != expr.name:
        return False
    if expr.positive:
        return action == expr.action
    return action != expr.action


@dataclass(frozen=True)
class Formula:
    pass


@dataclass(frozen=True)
class Truth(Formula):
    """The constant true formula (the empty conjunction)."""


@dataclass(frozen=True)
class Issue(Formula):
    """A license is being issued right now under the given name."""

    name: str
    license: License


@dataclass(frozen=True)
class Act(Formula):
    """The client performs an action matching the expression right now."""

    expr: ActionExpr


@dataclass(frozen=True)
class Perm(Formula):
    """Some action matching the expression is permitted right now."""

    expr: ActionExpr


@dataclass(frozen=True)
class Not(Formula):
    operand: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    operand: Formula


@dataclass(frozen=True)
class Always(Formula):
    operand: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


# Derived forms normalize to the core connectives at construction time; the
# pretty printer re-sugars the recognizable patterns.

def f_not(operand: Formula) -> Formula:
    return Not(operand)


def f_and(left: Formula, right: Formula) -> Formula:
    return And(left, right)


def f_next(operand: Formula) -> Formula:
    return Next(operand)


def f_always(operand: Formula) -> Formula:
    return Always(operand)


def f_until(left: Formula, right: Formula) -> Formula:
    return Until(left, right)


def f_or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def f_implies(left: Formula, right: Formula) -> Formula:
    return Not(And(left, Not(right)))


def f_eventually(operand: Formula) -> Formula:
    return Not(Always(Not(operand)))


def f_oblig(action: Action, name: str) -> Formula:
    """O(a, n): the client must do a, i.e. nothing else is permitted on n."""
    return Not(Perm(ActionExpr(False, action, name)))


def f_and_all(parts: Iterable[Formula]) -> Formula:
    """Conjoin as a balanced tree (keeps nesting shallow for long lists)."""
    parts = list(parts)
    if not parts:
        return Truth()
    while len(parts) > 1:
        paired = [
            And(parts[i], parts[i + 1]) if i + 1 < len(parts) else parts[i]
            for i in range(0, len(parts), 2)
        ]
        parts = paired
    return parts[0]


def f_nexts(formula: Formula, count: int) -> Formula:
    for _ in range(count):
        formula = Next(formula)
    return formula


def formula_names(formula: Formula) -> frozenset[str]:
    """Every license name appearing in the formula."""
    if isinstance(formula, Issue):
        return frozenset({formula.name})
    if isinstance(formula, (Act, Perm)):
        return frozenset({formula.expr.name})
    if isinstance(formula, (Not, Next, Always)):
        return formula_names(formula.operand)
    if isinstance(formula, (And, Until)):
        return formula_names(formula.left) | formula_names(formula.right)
    return frozenset()


def formula_actions(formula: Formula) -> frozenset[Action]:
    """Every action literally appearing in the formula's action expressions."""
    if isinstance(formula, (Act, Perm)):
        return frozenset({formula.expr.action})
    if isinstance(formula, (Not, Next, Always)):
        return formula_actions(formula.operand)
    if isinstance(formula, (And, Until)):
        return formula_actions(formula.left) | formula_actions(formula.right)
    return frozenset()


def formula_action_pairs(formula: Formula) -> frozenset[tuple[Action, str]]:
    """Every (action, name) pair appearing in the formula's action expressions."""
    if isinstance(formula, (Act, Perm)):
        return frozenset({(formula.expr.action, formula.expr.name)})
    if isinstance(formula, (Not, Next, Always)):
        return formula_action_pairs(formula.operand)
    if isinstance(formula, (And, Until)):
        return formula_action_pairs(formula.left) | formula_action_pairs(formula.right)
    return frozenset()


def formula_licenses(formula: Formula) -> frozenset[tuple[str, License]]:
    """Every named license appearing in issuance atoms."""
    if isinstance(formula, Issue):
        return frozenset({(formula.name, formula.license)})
    if isinstance(formula, (Not, Next, Always)):
        return formula_licenses(formula.operand)
    if isinstance(formula, (And, Until)):
        return formula_licenses(formula.left) | formula_licenses(formula.right)
    return frozenset()


def formula_size(formula: Formula) -> int:
    if isinstance(formula, (Not, Next, Always)):
        return 1 + formula_size(formula.operand)
    if isinstance(formula, (And, Until)):
        return 1 + formula_size(formula.left) + formula_size(formula.right)
    return 1


def evaluate(run: Run, perms: PermissionInterpretation, t: int, formula: Formula) -> bool:
    """Truth of a formula in a run at time t.

    ``perms`` must be the permission interpretation computed from ``run``.
    Box and until are decided on the run's ultimately periodic extension;
    results are memoized per (canonical time, subformula).
    """
    memo: dict[tuple[int, int], bool] = {}
    prefix_len = perms.prefix_len
    loop_len = perms.loop_len

    def canonical(time: int) -> int:
        if time < prefix_len:
            return time
        return prefix_len + (time - prefix_len) % loop_len

    def recur(time: int, node: Formula) -> bool:
        time = canonical(time)
        key = (time, id(node))
        cached = memo.get(key)
        if cached is not None:
            return cached
        result = _clause(time, node)
        memo[key] = result
        return result

    def _clause(time: int, node: Formula) -> bool:
        if isinstance(node, Truth):
            return True
        if isinstance(node, Issue):
            return (node.name, node.license) in run.licenses_at(time)
        if isinstance(node, Act):
            return expr_matches(node.expr, run.action(node.expr.name, time), node.expr.name)
        if isinstance(node, Perm):
            permitted = perms.permitted(node.expr.name, time)
            if node.expr.positive:
                return node.expr.action in permitted
            return any(action != node.expr.action for action in permitted)
        if isinstance(node, Not):
            return not recur(time, node.operand)
        if isinstance(node, And):
            return recur(time, node.left) and recur(time, node.right)
        if isinstance(node, Next):
            return recur(time + 1, node.operand)
        if isinstance(node, Always):
            start = time if time < prefix_len else prefix_len
            return all(recur(j, node.operand) for j in range(start, prefix_len + loop_len))
        if isinstance(node, Until):
            for j in range(time, prefix_len + 2 * loop_len):
                if recur(j, node.right):
                    return True
                if not recur(j, node.left):
                    return False
            return False
        raise TypeError(f"not a formula: {node!r}")

    return recur(t, formula)


def check_spec(run: Run, formula: Formula) -> bool:
    """Whether the formula holds at every time of the run's extension."""
    perms = compute_permissions(run)
    horizon = perms.prefix_len + perms.loop_len
    return all(evaluate(run, perms, t, formula) for t in range(horizon))


def encode_run(run: Run) -> Formula:
    """The formula that pins down a finite run.

    The conjunction fixes, time by time, the issuances and the actions of
    every name ever issued in the run, and then closes with "from here on
    everything does bot".  Any run satisfying the encoding at time zero
    behaves exactly like this run as far as its names are concerned.
    """
    names = sorted(run.names)

    def state_formula(t: int) -> Formula:
        conjuncts: list[Formula] = [
            Act(ActionExpr(True, run.action(name, t), name)) for name in names
        ]
        conjuncts += [
            Issue(name, lic)
            for name, lic in sorted(run.licenses_at(t), key=lambda pair: pair[0])
        ]
        return f_and_all(conjuncts)

    parts = [f_nexts(state_formula(t), t) for t in range(run.horizon + 1)]
    idle = f_and_all([Act(ActionExpr(True, BOT, name)) for name in names])
    parts.append(f_nexts(Always(idle), run.horizon + 1))
    return f_and_all(parts)


def license_consequences(name: str, lic: License, depth: int) -> Formula:
    """Permissions forced by issuing a license, unfolded ``depth`` steps.

    Depth zero says every possible first action is permitted; each further
    level adds that doing a possible action leads, one step later, to the
    consequences of the license's derivative.
    """
    if depth < 0:
        raise ValueError("depth must be non-negative")
    firsts = sorted(first_actions(lic), key=action_key)
    if depth == 0:
        return f_and_all([Perm(ActionExpr(True, action, name)) for action in firsts])
    parts = []
    for action in firsts:
        rest = license_consequences(name, derivative(lic, action), depth - 1)
        parts.append(
            And(
                Perm(ActionExpr(True, action, name)),
                f_implies(Act(ActionExpr(True, action, name)), Next(rest)),
            )
        )
    return f_and_all(parts)


_IMPLIES, _OR, _AND, _UNTIL, _UNARY, _ATOM = range(6)


def pretty_formula(formula: Formula) -> str:
    """Render a formula in the surface grammar, re-sugaring O, F, |, and ->."""
    return _pf(formula, _IMPLIES)


def _pair(expr: ActionExpr) -> str:
    tilde = "" if expr.positive else "~"
    return f"({tilde}{pretty_action(expr.action)}, {expr.name})"


def _pf(formula: Formula, minimum: int) -> str:
    if isinstance(formula, Truth):
        text, level = "true", _ATOM
    elif isinstance(formula, Issue):
        text, level = f"issue({formula.name}, {pretty_license(formula.license)})", _ATOM
    elif isinstance(formula, Act):
        text, level = _pair(formula.expr), _ATOM
    elif isinstance(formula, Perm):
        text, level = f"P{_pair(formula.expr)}", _ATOM
    elif isinstance(formula, Not):
        inner = formula.operand
        if isinstance(inner, Perm) and not inner.expr.positive:
            text = f"O({pretty_action(inner.expr.action)}, {inner.expr.name})"
            level = _ATOM
        elif isinstance(inner, Always) and isinstance(inner.operand, Not):
            text, level = f"F {_pf(inner.operand.operand, _UNARY)}", _UNARY
        elif isinstance(inner, And) and isinstance(inner.left, Not) and isinstance(inner.right, Not):
            left = _pf(inner.left.operand, _OR)
            right = _pf(inner.right.operand, _AND)
            text, level = f"{left} | {right}", _OR
        elif isinstance(inner, And) and isinstance(inner.right, Not):
            left = _pf(inner.left, _OR)
            right = _pf(inner.right.operand, _IMPLIES)
            text, level = f"{left} -> {right}", _IMPLIES
        else:
            text, level = f"!{_pf(inner, _UNARY)}", _UNARY
    elif isinstance(formula, And):
        text = f"{_pf(formula.left, _AND)} & {_pf(formula.right, _UNTIL)}"
        level = _AND
    elif isinstance(formula, Next):
        text, level = f"X {_pf(formula.operand, _UNARY)}", _UNARY
    elif isinstance(formula, Always):
        text, level = f"G {_pf(formula.operand, _UNARY)}", _UNARY
    elif isinstance(formula, Until):
        text = f"{_pf(formula.left, _UNARY)} U {_pf(formula.right, _UNTIL)}"
        level = _UNTIL
    else:
        raise TypeError(f"not a formula: {formula!r}")
    if level < minimum:
        return f"({text})"
    return text
