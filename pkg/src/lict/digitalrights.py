"""The DigitalRights surface language: payment-schedule licenses per period.

A DR license covers one or more time periods of fixed length.  Within a
period the client may render any covered work on any covered device once per
time unit (or do nothing), and pays according to the schedule: ``upfront``
pays at the period's first unit, ``flatrate`` pays a fixed amount at its last
unit, ``peruse`` pays at the last unit proportionally to the number of
renders in the period.  Every DR license denotes a finite trace set and is
therefore expressible as a regular license; ``compile_dr`` performs that
translation.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from itertools import combinations, product

from .licenses import (
    BOT,
    ONE,
    Action,
    Atom,
    License,
    Pay,
    Render,
    Trace,
    concat,
    union,
)

UPFRONT = "upfront"
FLATRATE = "flatrate"
PERUSE = "peruse"
SCHEDULES = (UPFRONT, FLATRATE, PERUSE)

DEFAULT_DR_CAP = 64


class DrCapExceeded(ValueError):
    """The license spans more time units than the enumeration cap allows."""


@dataclass(frozen=True)
class Single:
    """One period of the given length."""

    period: int


@dataclass(frozen=True)
class Exactly:
    """Exactly ``count`` consecutive periods."""

    count: int
    period: int


@dataclass(frozen=True)
class Upto:
    """Any number of consecutive periods from zero up to ``count``."""

    count: int
    period: int


Repetition = Single | Exactly | Upto


@dataclass(frozen=True)
class DrLicense:
    repetition: Repetition
    amount: Decimal
    schedule: str
    works: frozenset[str]
    devices: frozenset[str]

    def __post_init__(self):
        amount = self.amount
        if not isinstance(amount, Decimal):
            amount = Decimal(str(amount))
        object.__setattr__(self, "amount", Pay(amount).amount)
        if self.schedule not in SCHEDULES:
            raise ValueError(f"unknown payment schedule {self.schedule!r}")
        if self.period < 1:
            raise ValueError("period length must be at least 1")
        if isinstance(self.repetition, (Exactly, Upto)) and self.repetition.count < 1:
            raise ValueError("period count must be at least 1")
        if not self.works:
            raise ValueError("the set of works must not be empty")
        if not self.devices:
            raise ValueError("the set of devices must not be empty")

    @property
    def period(self) -> int:
        return self.repetition.period

    @property
    def total_units(self) -> int:
        if isinstance(self.repetition, Single):
            return self.repetition.period
        return self.repetition.count * self.repetition.period


def pretty_dr(dr: DrLicense) -> str:
    if isinstance(dr.repetition, Single):
        head = f"for {dr.repetition.period}"
    elif isinstance(dr.repetition, Exactly):
        head = f"for {dr.repetition.count} {dr.repetition.period}"
    else:
        head = f"for upto {dr.repetition.count} {dr.repetition.period}"
    works = ",".join(sorted(dr.works))
    devices = ",".join(sorted(dr.devices))
    return f"{head} pay {dr.amount} {dr.schedule} for {{{works}}} on {{{devices}}}"


def _render_slots(dr: DrLicense) -> list[Action]:
    renders: list[Action] = [
        Render(work, device)
        for work in sorted(dr.works)
        for device in sorted(dr.devices)
    ]
    return renders


def _check_cap(dr: DrLicense, cap: int) -> None:
    if dr.total_units > cap:
        raise DrCapExceeded(
            f"license spans {dr.total_units} time units, above the cap of {cap}"
        )


def _period_traces(dr: DrLicense) -> frozenset[Trace]:
    """The traces of a single period under the license's schedule."""
    slots = [BOT] + _render_slots(dr)
    period = dr.period
    out: set[Trace] = set()
    if dr.schedule == UPFRONT:
        for body in product(slots, repeat=period - 1):
            out.add((Pay(dr.amount),) + body)
    elif dr.schedule == FLATRATE:
        for body in product(slots, repeat=period - 1):
            out.add(body + (Pay(dr.amount),))
    else:
        for body in product(slots, repeat=period - 1):
            uses = sum(1 for action in body if action != BOT)
            out.add(body + (Pay(dr.amount * uses),))
    return frozenset(out)


def _concat_sets(left: frozenset[Trace], right: frozenset[Trace]) -> frozenset[Trace]:
    return frozenset(a + b for a in left for b in right)


def dr_traces(dr: DrLicense, cap: int = DEFAULT_DR_CAP) -> frozenset[Trace]:
    """The complete (finite) trace set of a DR license.

    Raises :class:`DrCapExceeded` when the license covers more time units
    than ``cap``; the trace count grows exponentially with the period length.
    """
    _check_cap(dr, cap)
    period = _period_traces(dr)
    if isinstance(dr.repetition, Single):
        return period
    power: frozenset[Trace] = frozenset({()})
    if isinstance(dr.repetition, Exactly):
        for _ in range(dr.repetition.count):
            power = _concat_sets(power, period)
        return power
    out: set[Trace] = set(power)
    for _ in range(dr.repetition.count):
        power = _concat_sets(power, period)
        out |= power
    return frozenset(out)


def _license_power(lic: License, count: int) -> License:
    result: License = ONE
    for _ in range(count):
        result = concat(result, lic)
    return result


def _union_all(parts: list[License]) -> License:
    result = parts[0]
    for part in parts[1:]:
        result = union(result, part)
    return result


def _period_license(dr: DrLicense) -> License:
    """A regular license with exactly the period's traces."""
    renders = _render_slots(dr)
    slot = _union_all([Atom(BOT)] + [Atom(action) for action in renders])
    body = _license_power(slot, dr.period - 1)
    if dr.schedule == UPFRONT:
        return concat(Atom(Pay(dr.amount)), body)
    if dr.schedule == FLATRATE:
        return concat(body, Atom(Pay(dr.amount)))
    # Per use: group period bodies by how many slots hold a render, because
    # the closing payment depends on that count.
    slots = dr.period - 1
    render_union = _union_all([Atom(action) for action in renders])
    alternatives: list[License] = []
    for uses in range(slots + 1):
        payment = Atom(Pay(dr.amount * uses))
        for positions in combinations(range(slots), uses):
            pattern: License = ONE
            for index in range(slots):
                piece = render_union if index in positions else Atom(BOT)
                pattern = concat(pattern, piece)
            alternatives.append(concat(pattern, payment))
    return _union_all(alternatives)


def compile_dr(dr: DrLicense, cap: int = DEFAULT_DR_CAP) -> License:
    """Translate a DR license into a regular license with the same traces.

    The result is language-equal to ``dr_traces``; its syntactic shape is a
    union of per-period concatenations.  ``upto`` repetitions include the
    empty trace, which is only expressible with the internal empty license,
    so their compiled form is not re-parseable from surface syntax.
    """
    _check_cap(dr, cap)
    period = _period_license(dr)
    if isinstance(dr.repetition, Single):
        return period
    if isinstance(dr.repetition, Exactly):
        return _license_power(period, dr.repetition.count)
    return _union_all(
        [_license_power(period, n) for n in range(dr.repetition.count + 1)]
    )
