"""Welfare functions and the exact preference order over utility vectors.

The order is expressed as a sort key (larger is better) so that picking
the rule's outcome among candidates is just ``max(..., key=...)``:

* ``f(0)`` finite, or every utility positive: ``(1, welfare, u)``;
* ``f(0) = -inf`` and some utility zero: ``(0, |N+|, -N+, welfare on N+, u)``
  where ``-N+`` is the negated ascending index tuple, so the set with the
  lexicographically smaller index sequence wins.

``welfare`` is an exact ``Fraction`` for table-based rules and the big
integer ``prod u_i ** W_i`` for weighted Nash welfare, with ``W_i`` the
weights scaled by the lcm of their denominators (monotone in the log sum).
"""
from __future__ import annotations

import enum
import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .errors import CapacityError, InputError, RuleError

NEG_INF = None  # table entry standing for f(0) = -inf


class Preference(enum.Enum):
    FIRST = "first_preferred"
    SECOND = "second_preferred"
    EQUAL = "equal"


@functools.lru_cache(maxsize=None)
def harmonic(k: int) -> Fraction:
    if k == 0:
        return Fraction(0)
    return harmonic(k - 1) + Fraction(1, k)


def integer_weights(weights) -> tuple:
    """Scale rational weights by the lcm of their denominators."""
    d = 1
    for w in weights:
        d = d * w.denominator // math.gcd(d, w.denominator)
    return tuple(int(w * d) for w in weights)


class WelfareFunction:
    """A strictly increasing ``f`` on ``{0, 1, ...}``.

    ``kind`` is ``"mwnw"`` (f = log, f(0) = -inf), ``"mwhw"`` (harmonic
    numbers) or ``"custom"`` (a finite table, possibly with ``f(0) = -inf``).
    """

    def __init__(self, kind: str, table: Optional[Sequence] = None):
        self.kind = kind
        if kind == "custom":
            if table is None or len(table) == 0:
                raise RuleError("custom rule needs a nonempty table")
            self.table = tuple(table)
            if any(x is NEG_INF for x in self.table[1:]):
                raise RuleError("only f(0) may be -inf")
            finite = [(k, x) for k, x in enumerate(self.table) if x is not NEG_INF]
            for (k, a), (_, b) in zip(finite, finite[1:]):
                if not b > a:
                    raise RuleError(f"f is not strictly increasing: f({k}) = {a} but f({k + 1}) = {b}")
        elif kind in ("mwnw", "mwhw"):
            self.table = None
        else:
            raise RuleError(f"unknown rule {kind!r}")

    @property
    def f0_is_neg_inf(self) -> bool:
        if self.kind == "mwnw":
            return True
        if self.kind == "mwhw":
            return False
        return self.table[0] is NEG_INF

    @property
    def domain(self) -> Optional[int]:
        """Largest utility the rule can score, or ``None`` if unbounded."""
        return None if self.table is None else len(self.table) - 1

    @property
    def is_strictly_increasing(self) -> bool:
        return True  # enforced at construction

    @property
    def is_concave(self) -> bool:
        if self.table is None:
            return True
        finite = [x for x in self.table if x is not NEG_INF]
        return all(b - a >= c - b for a, b, c in zip(finite, finite[1:], finite[2:]))

    def f(self, k: int):
        """Exact ``f(k)`` (``None`` for -inf).  Undefined for weighted Nash welfare."""
        if k == 0 and self.f0_is_neg_inf:
            return NEG_INF
        if self.kind == "mwhw":
            return harmonic(k)
        if self.kind == "mwnw":
            raise RuleError("log is irrational; weighted Nash welfare is compared through products")
        if k > self.domain:
            raise InputError(f"utility {k} exceeds the rule's table (max {self.domain})")
        return self.table[k]

    def check_domain(self, m: int):
        if self.domain is not None and self.domain < m:
            raise CapacityError(f"table defines f(0..{self.domain}) but instance needs f(0..{m})", bound=m)

    # -- ordering -------------------------------------------------------------
    def _score(self, weights, u, agents) -> object:
        if self.kind == "mwnw":
            iw = integer_weights(weights)
            prod = 1
            for i in agents:
                prod *= u[i] ** iw[i]
            return prod
        total = Fraction(0)
        for i in agents:
            total += weights[i] * self.f(u[i])
        return total

    def welfare_key(self, weights, u) -> tuple:
        """Key of the welfare layers only (no lexicographic tie-break)."""
        u = tuple(u)
        if self.domain is not None and u and max(u) > self.domain:
            raise InputError(f"utility {max(u)} exceeds the rule's table (max {self.domain})")
        positive = [i for i, x in enumerate(u) if x > 0]
        if not self.f0_is_neg_inf or len(positive) == len(u):
            return (1, self._score(weights, u, range(len(u))))
        return (0, len(positive), tuple(-i for i in positive), self._score(weights, u, positive))

    def key(self, weights, u) -> tuple:
        return self.welfare_key(weights, u) + (tuple(u),)

    def to_spec(self) -> dict:
        if self.kind != "custom":
            return {"rule": self.kind}
        return {"rule": "custom", "f": ["-inf" if x is NEG_INF else str(x) for x in self.table]}

    def __repr__(self):
        return f"WelfareFunction({self.to_spec()!r})"


def _parse_entry(x):
    if isinstance(x, str) and x.strip().lower() in ("-inf", "-infinity"):
        return NEG_INF
    if x is None:
        return NEG_INF
    if isinstance(x, float):
        if x == -math.inf:
            return NEG_INF
        raise RuleError(f"table entries must be exact, got float {x!r}")
    try:
        return Fraction(x)
    except (ValueError, TypeError):
        raise RuleError(f"cannot parse table entry {x!r}") from None


def make_rule(spec, m: Optional[int] = None) -> WelfareFunction:
    """Build a rule from ``"mwnw"``, ``"mwhw"``, ``{"rule": ...}`` or a raw table.

    >>> make_rule("mwhw").f(3)
    Fraction(11, 6)
    """
    if isinstance(spec, WelfareFunction):
        rule = spec
    elif isinstance(spec, str):
        rule = WelfareFunction(spec.lower())
    elif isinstance(spec, dict):
        name = str(spec.get("rule", "")).lower()
        if name == "custom":
            if "f" not in spec:
                raise RuleError("custom rule needs an 'f' table")
            rule = WelfareFunction("custom", [_parse_entry(x) for x in spec["f"]])
        else:
            rule = WelfareFunction(name)
    else:
        rule = WelfareFunction("custom", [_parse_entry(x) for x in spec])
    if m is not None:
        rule.check_domain(m)
    return rule


# -- welfare values -------------------------------------------------------------

@functools.total_ordering
class WelfareValue:
    family = None

    def _cmp_key(self, other):
        if not isinstance(other, WelfareValue):
            return NotImplemented
        if isinstance(self, NegInfinity) or isinstance(other, NegInfinity):
            return (not isinstance(self, NegInfinity), not isinstance(other, NegInfinity))
        if self.family != other.family:
            raise TypeError("cannot compare a rational welfare with a log-product welfare")
        return self._magnitude(), other._magnitude()

    def __eq__(self, other):
        key = self._cmp_key(other)
        return key if key is NotImplemented else key[0] == key[1]

    def __lt__(self, other):
        key = self._cmp_key(other)
        return key if key is NotImplemented else key[0] < key[1]

    def __hash__(self):
        return hash((type(self).__name__, self._magnitude()))


class NegInfinity(WelfareValue):
    family = "neg_inf"

    def _magnitude(self):
        return None

    def __repr__(self):
        return "NegInfinity()"


@dataclass(frozen=True, eq=False)
class FiniteRational(WelfareValue):
    value: Fraction
    family = "rational"

    def _magnitude(self):
        return self.value


@dataclass(frozen=True, eq=False)
class LogProduct(WelfareValue):
    """``sum W_i log u_i`` kept symbolically as ``(W_i, u_i)`` pairs."""

    pairs: tuple
    family = "log"

    @property
    def product(self) -> int:
        out = 1
        for w, u in self.pairs:
            out *= u**w
        return out

    def _magnitude(self):
        return self.product

    def __float__(self):
        return float(sum(w * math.log(u) for w, u in self.pairs))


def evaluate(inst, u, f: WelfareFunction) -> WelfareValue:
    """Weighted welfare ``sum w_i f(u_i)`` of a utility vector."""
    u = tuple(u)
    if len(u) != inst.n:
        raise InputError(f"utility vector has {len(u)} entries for {inst.n} agents")
    if any(x < 0 or x > inst.m for x in u):
        raise InputError("utility entries must lie in 0..m")
    if f.f0_is_neg_inf and 0 in u:
        return NegInfinity()
    if f.kind == "mwnw":
        return LogProduct(tuple(zip(integer_weights(inst.weights), u)))
    return FiniteRational(sum((w * f.f(x) for w, x in zip(inst.weights, u)), Fraction(0)))


def compare_outcomes(inst, f: WelfareFunction, u, v) -> Preference:
    ku, kv = f.key(inst.weights, u), f.key(inst.weights, v)
    if ku > kv:
        return Preference.FIRST
    if ku < kv:
        return Preference.SECOND
    return Preference.EQUAL
