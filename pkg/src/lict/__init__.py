"""lict: a verification toolkit for digital-rights licenses.

Licenses are regular expressions over render/pay actions; runs record which
named licenses a client holds and what the client does; the logic layer
evaluates permission/obligation formulas over runs, and the satisfiability
layer decides formulas outright by reduction to a propositional temporal
logic.
"""

from .automata import (
    Nfa,
    SubsetState,
    accepts,
    build_nfa,
    dump_dot,
    lasso_of,
    padded_nfa,
    permitted_from,
    reachable_subsets,
    step_subset,
    with_bot_padding,
)
from .digitalrights import (
    DEFAULT_DR_CAP,
    DrCapExceeded,
    DrLicense,
    Exactly,
    Single,
    Upto,
    compile_dr,
    dr_traces,
    pretty_dr,
)
from .formulas import (
    Act,
    ActionExpr,
    Always,
    And,
    Formula,
    Issue,
    Next,
    Not,
    Perm,
    Truth,
    Until,
    check_spec,
    complement,
    encode_run,
    evaluate,
    expr_matches,
    f_always,
    f_and,
    f_and_all,
    f_eventually,
    f_implies,
    f_next,
    f_nexts,
    f_not,
    f_oblig,
    f_or,
    f_until,
    formula_action_pairs,
    formula_actions,
    formula_licenses,
    formula_names,
    formula_size,
    interpret_action_expr,
    license_consequences,
    pretty_formula,
)
from .licenses import (
    BOT,
    EPSILON,
    ONE,
    ZERO,
    Action,
    Atom,
    Bot,
    Concat,
    License,
    One,
    Pay,
    Render,
    Star,
    Trace,
    Union,
    Zero,
    action_key,
    concat,
    derivative,
    first_actions,
    is_empty,
    license_actions,
    license_size,
    nullable,
    prefix_sets,
    pretty_action,
    pretty_license,
    star,
    traces,
    union,
    viable,
)
from .licsat import (
    OTHER,
    LicSatResult,
    ValidityResult,
    fresh_action,
    lic_sat,
    lic_valid,
)
from .ltl import (
    Done,
    InState,
    Issued,
    LAlways,
    LAnd,
    LNext,
    LNot,
    LProp,
    LTrue,
    LUntil,
    LinearStructure,
    LtlFormula,
    Obligated,
    Over,
    Permitted,
    Prop,
    Vocabulary,
    build_structure,
    build_vocabulary,
    check_run_validity_ltl,
    finiteness_restriction,
    implicit_restrictions,
    l_and_all,
    l_eventually,
    l_iff,
    l_implies,
    l_or,
    ltl_eval,
    ltl_size,
    pretty_ltl,
    pretty_prop,
    translate,
)
from .parsing import (
    ParseError,
    parse_action,
    parse_dr,
    parse_formula,
    parse_license,
    parse_run,
    tokenize,
)
from .runs import (
    PermissionInterpretation,
    Run,
    action_sequence,
    active,
    compute_permissions,
    make_run,
    pretty_run,
)
from .tableau import (
    DEFAULT_BUDGET,
    BudgetExceededError,
    SatResult,
    ltl_sat,
)
