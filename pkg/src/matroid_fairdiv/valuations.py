"""Valuation oracles over a fixed, ordered ground set of goods.

Goods are plain string labels.  The position of a label in ``ground`` is
its canonical index; bit ``i`` of a bundle mask stands for ``ground[i]``.

Matroid-rank kinds (``binary_additive``, ``partition_matroid``,
``graphic_matroid``) are matroid-rank by construction.  ``explicit``,
``xos`` and ``additive`` are general set functions used by the brute-force
counterexample machinery; an explicit table may of course happen to be a
matroid rank function, which :func:`validate_matroid_rank` decides.
"""
from __future__ import annotations

import functools
import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

import numpy as np

from .errors import CapacityError, InputError

MAX_EXPLICIT_GOODS = 12
MAX_VALIDATION_GOODS = 16

MATROID_KINDS = frozenset({"binary_additive", "partition_matroid", "graphic_matroid"})


def label_key(label: str) -> tuple:
    """Natural sort key, so that g2 sorts before g10."""
    return tuple(int(p) if p.isdigit() else p for p in re.split(r"(\d+)", label))


def in_label_order(goods) -> list:
    return sorted(goods, key=label_key)


class Valuation:
    """Immutable value oracle.

    Subclasses implement ``_value(frozenset) -> int``.  The public
    :meth:`value` checks labels; internal hot paths call ``_value``.
    """

    kind = "abstract"

    def __init__(self, ground: Iterable[str]):
        ground = tuple(ground)
        if len(set(ground)) != len(ground):
            raise InputError("duplicate good labels in ground set")
        self.ground = ground
        self.ground_set = frozenset(ground)
        self._index = {g: i for i, g in enumerate(ground)}
        self._table = None

    # -- oracle -----------------------------------------------------------
    def value(self, bundle: Iterable[str]) -> int:
        return self._value(self._checked(bundle))

    def _value(self, bundle: frozenset) -> int:
        raise NotImplementedError

    def _checked(self, bundle) -> frozenset:
        bundle = frozenset(bundle)
        unknown = bundle - self.ground_set
        if unknown:
            raise InputError(f"unknown good(s) {sorted(unknown)} for this valuation")
        return bundle

    @property
    def is_matroid_kind(self) -> bool:
        return self.kind in MATROID_KINDS

    def f_set(self, bundle: Iterable[str], candidates: Optional[Iterable[str]] = None) -> frozenset:
        """Goods outside ``bundle`` whose marginal value is exactly one."""
        bundle = self._checked(bundle)
        cand = self.ground_set if candidates is None else frozenset(candidates)
        return self._f_set(bundle, cand)

    def _f_set(self, bundle: frozenset, cand: frozenset) -> frozenset:
        base = self._value(bundle)
        return frozenset(g for g in cand - bundle if self._value(bundle | {g}) - base == 1)

    def swap_set(self, bundle: frozenset, out: str, cand: frozenset) -> frozenset:
        """Goods ``x`` in ``cand - bundle`` with v(bundle - out + x) == v(bundle).

        These are the out-neighbours of ``out`` in an exchange graph when
        ``bundle`` is owned by this valuation's agent.
        """
        base = self._value(bundle)
        rest = bundle - {out}
        return frozenset(x for x in cand - bundle if self._value(rest | {x}) == base)

    def restrict(self, kept: Iterable[str]) -> "Valuation":
        """Matroid deletion: the same function seen only on subsets of ``kept``."""
        kept = self._checked(kept)
        order = tuple(g for g in self.ground if g in kept)
        return self._restrict(order)

    def _restrict(self, order: tuple) -> "Valuation":
        raise NotImplementedError

    def to_spec(self) -> dict:
        raise NotImplementedError

    # -- bitmask helpers ----------------------------------------------------
    def mask_of(self, bundle: Iterable[str]) -> int:
        mask = 0
        for g in bundle:
            mask |= 1 << self._index[g]
        return mask

    def bundle_of(self, mask: int) -> frozenset:
        return frozenset(g for i, g in enumerate(self.ground) if mask >> i & 1)

    def table(self) -> np.ndarray:
        """Values of every bundle, indexed by bitmask (cached)."""
        if self._table is None:
            m = len(self.ground)
            if m > 20:
                raise CapacityError(f"value table over {m} goods is too large", bound=2**m)
            bundles = [frozenset()]
            for g in self.ground:
                bundles += [b | {g} for b in bundles]
            self._table = np.fromiter((self._value(b) for b in bundles), dtype=np.int64, count=2**m)
            self._table.setflags(write=False)
        return self._table

    # -- identity -----------------------------------------------------------
    def _payload(self):
        raise NotImplementedError

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return (self.kind, self.ground, self._payload()) == (other.kind, other.ground, other._payload())

    def __hash__(self):
        return hash((self.kind, self.ground, self._payload()))

    def __repr__(self):
        return f"{type(self).__name__}({self.to_spec()!r})"


class BinaryAdditive(Valuation):
    kind = "binary_additive"

    def __init__(self, ground, approved):
        super().__init__(ground)
        self.approved = self._checked(approved)

    def _value(self, bundle):
        return len(bundle & self.approved)

    def _f_set(self, bundle, cand):
        return (self.approved & cand) - bundle

    def swap_set(self, bundle, out, cand):
        if out in self.approved:
            return (self.approved & cand) - bundle
        return cand - self.approved - bundle

    def _restrict(self, order):
        return BinaryAdditive(order, self.approved.intersection(order))

    def to_spec(self):
        return {"kind": self.kind, "approved": [g for g in self.ground if g in self.approved]}

    def _payload(self):
        return self.approved


class PartitionMatroid(Valuation):
    """Sum over parts of min(|bundle ∩ part|, capacity); goods in no part are worth 0."""

    kind = "partition_matroid"

    def __init__(self, ground, parts):
        super().__init__(ground)
        self.parts = tuple((self._checked(goods), int(cap)) for goods, cap in parts)
        self._part_of = {}
        for p, (goods, cap) in enumerate(self.parts):
            if cap < 0:
                raise InputError("partition capacities must be nonnegative")
            for g in goods:
                if g in self._part_of:
                    raise InputError(f"good {g!r} appears in two parts")
                self._part_of[g] = p
        self._open = functools.lru_cache(maxsize=512)(self._open_goods)

    def _counts(self, bundle):
        counts = [0] * len(self.parts)
        for g in bundle:
            p = self._part_of.get(g)
            if p is not None:
                counts[p] += 1
        return counts

    def _value(self, bundle):
        return sum(min(c, cap) for c, (_, cap) in zip(self._counts(bundle), self.parts))

    def _open_goods(self, bundle):
        counts = self._counts(bundle)
        opened = frozenset().union(*(goods for c, (goods, cap) in zip(counts, self.parts) if c < cap))
        return counts, opened

    def _f_set(self, bundle, cand):
        return (self._open(bundle)[1] & cand) - bundle

    def swap_set(self, bundle, out, cand):
        counts, opened = self._open(bundle)
        p = self._part_of.get(out)
        if p is not None and counts[p] <= self.parts[p][1]:
            # removing `out` loses a unit, so `x` must win it back
            return ((opened | self.parts[p][0]) & cand) - bundle
        return cand - opened - bundle

    def _restrict(self, order):
        kept = frozenset(order)
        parts = [(goods & kept, cap) for goods, cap in self.parts if goods & kept]
        return PartitionMatroid(order, parts)

    def to_spec(self):
        return {
            "kind": self.kind,
            "parts": [
                {"goods": [g for g in self.ground if g in goods], "capacity": cap}
                for goods, cap in self.parts
            ],
        }

    def _payload(self):
        return frozenset(self.parts)


class GraphicMatroid(Valuation):
    """Each good is an edge; a bundle is worth the rank of its edge set (size of a spanning forest)."""

    kind = "graphic_matroid"

    def __init__(self, ground, edges):
        super().__init__(ground)
        missing = self.ground_set - set(edges)
        if missing:
            raise InputError(f"graphic matroid lacks edges for {sorted(missing)}")
        self.edges = {g: (str(edges[g][0]), str(edges[g][1])) for g in self.ground}

    def _value(self, bundle):
        parent = {}

        def find(x):
            root = x
            while parent.get(root, root) != root:
                root = parent[root]
            while parent.get(x, x) != root:
                parent[x], x = root, parent[x]
            return root

        rank = 0
        for g in bundle:
            u, v = self.edges[g]
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
                rank += 1
        return rank

    def _restrict(self, order):
        return GraphicMatroid(order, {g: self.edges[g] for g in order})

    def to_spec(self):
        return {"kind": self.kind, "edges": {g: list(self.edges[g]) for g in self.ground}}

    def _payload(self):
        return tuple(self.edges[g] for g in self.ground)


class Explicit(Valuation):
    """Full subset -> value table; the empty bundle may be omitted (it defaults to 0)."""

    kind = "explicit"

    def __init__(self, ground, values):
        super().__init__(ground)
        m = len(self.ground)
        if m > MAX_EXPLICIT_GOODS:
            raise CapacityError(f"explicit valuations support at most {MAX_EXPLICIT_GOODS} goods", bound=2**m)
        table = {}
        for key, val in values.items():
            key = self._checked(key)
            val = int(val)
            if val < 0:
                raise InputError("valuations must be nonnegative")
            table[key] = val
        table.setdefault(frozenset(), 0)
        if len(table) != 2**m:
            raise InputError(f"explicit table defines {len(table)} of {2**m} subsets")
        self.values = table

    @classmethod
    def from_function(cls, ground, fn):
        ground = tuple(ground)
        return cls(ground, {
            frozenset(c): fn(frozenset(c))
            for r in range(len(ground) + 1)
            for c in itertools.combinations(ground, r)
        })

    @classmethod
    def from_table(cls, ground, table):
        """Build from a sequence indexed by bitmask over ``ground``."""
        ground = tuple(ground)
        return cls(ground, {
            frozenset(g for i, g in enumerate(ground) if mask >> i & 1): int(table[mask])
            for mask in range(2 ** len(ground))
        })

    def _value(self, bundle):
        return self.values[bundle]

    def _restrict(self, order):
        kept = frozenset(order)
        return Explicit(order, {b: v for b, v in self.values.items() if b <= kept})

    def to_spec(self):
        key = lambda b: ",".join(g for g in self.ground if g in b)
        ordered = sorted(self.values, key=lambda b: (len(b), self.mask_of(b)))
        return {"kind": self.kind, "values": {key(b): self.values[b] for b in ordered}}

    def _payload(self):
        return frozenset(self.values.items())


class XOS(Valuation):
    """Maximum over additive clauses."""

    kind = "xos"

    def __init__(self, ground, clauses):
        super().__init__(ground)
        self.clauses = tuple(_additive_weights(self, clause) for clause in clauses)

    def _value(self, bundle):
        best = 0
        for clause in self.clauses:
            s = sum(clause.get(g, 0) for g in bundle)
            if s > best:
                best = s
        return best

    def _restrict(self, order):
        kept = frozenset(order)
        return XOS(order, [{g: w for g, w in c.items() if g in kept} for c in self.clauses])

    def to_spec(self):
        return {"kind": self.kind, "clauses": [
            {g: c[g] for g in self.ground if g in c} for c in self.clauses
        ]}

    def _payload(self):
        return frozenset(frozenset(c.items()) for c in self.clauses)


class Additive(Valuation):
    kind = "additive"

    def __init__(self, ground, values):
        super().__init__(ground)
        self.values = _additive_weights(self, values)

    def _value(self, bundle):
        return sum(self.values.get(g, 0) for g in bundle)

    def _restrict(self, order):
        return Additive(order, {g: w for g, w in self.values.items() if g in order})

    def to_spec(self):
        return {"kind": self.kind, "values": {g: self.values[g] for g in self.ground if g in self.values}}

    def _payload(self):
        return frozenset(self.values.items())


def _additive_weights(val, weights):
    out = {}
    for g, w in weights.items():
        if g not in val.ground_set:
            raise InputError(f"unknown good {g!r}")
        w = int(w)
        if w < 0:
            raise InputError("valuations must be nonnegative")
        if w:
            out[g] = w
    return out


# -- JSON fragments ---------------------------------------------------------

def from_spec(spec: dict, ground) -> Valuation:
    """Build a valuation from its JSON fragment (see README for the schema)."""
    kind = spec.get("kind")
    ground = tuple(ground)
    try:
        if kind == "binary_additive":
            return BinaryAdditive(ground, spec["approved"])
        if kind == "partition_matroid":
            return PartitionMatroid(ground, [(p["goods"], p["capacity"]) for p in spec["parts"]])
        if kind == "graphic_matroid":
            return GraphicMatroid(ground, spec["edges"])
        if kind == "explicit":
            values = {}
            for key, val in spec["values"].items():
                values[frozenset(k.strip() for k in key.split(",") if k.strip())] = val
            return Explicit(ground, values)
        if kind == "xos":
            return XOS(ground, spec["clauses"])
        if kind == "additive":
            return Additive(ground, spec["values"])
    except KeyError as exc:
        raise InputError(f"valuation of kind {kind!r} is missing field {exc}") from None
    raise InputError(f"unknown valuation kind {kind!r}")


# -- validation -------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    axiom: str
    smaller: frozenset
    larger: Optional[frozenset] = None
    good: Optional[str] = None

    def to_json(self):
        return {
            "axiom": self.axiom,
            "G_prime": in_label_order(self.smaller),
            "G_double_prime": None if self.larger is None else in_label_order(self.larger),
            "good": self.good,
        }


@dataclass
class MatroidReport:
    violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return not self.violations

    def axioms_violated(self):
        return [v.axiom for v in self.violations]


def validate_matroid_rank(v: Valuation) -> MatroidReport:
    """Exhaustively check binary, monotone, submodular and normalized.

    One witness per violated axiom, the one with the smallest bitmask
    (then smallest good indices).
    """
    m = len(v.ground)
    if m > MAX_VALIDATION_GOODS:
        raise CapacityError(
            f"exhaustive validation supports at most {MAX_VALIDATION_GOODS} goods, got {m}", bound=2**m)
    table = v.table()
    masks = np.arange(2**m)
    report = MatroidReport()

    if table[0] != 0:
        report.violations.append(Violation("normalized", frozenset()))

    binary_hit = monotone_hit = None
    for i in range(m):
        bit = 1 << i
        base = masks[(masks & bit) == 0]
        marg = table[base | bit] - table[base]
        bad = np.flatnonzero((marg != 0) & (marg != 1))
        if bad.size:
            cand = (int(base[bad[0]]), i)
            binary_hit = cand if binary_hit is None else min(binary_hit, cand)
        bad = np.flatnonzero(marg < 0)
        if bad.size:
            cand = (int(base[bad[0]]), i)
            monotone_hit = cand if monotone_hit is None else min(monotone_hit, cand)
    if binary_hit is not None:
        mask, i = binary_hit
        report.violations.append(Violation("binary", v.bundle_of(mask), v.bundle_of(mask | 1 << i), v.ground[i]))
    if monotone_hit is not None:
        mask, i = monotone_hit
        report.violations.append(Violation("monotone", v.bundle_of(mask), v.bundle_of(mask | 1 << i), v.ground[i]))

    sub_hit = None
    for a, b in itertools.permutations(range(m), 2):
        abit, bbit = 1 << a, 1 << b
        base = masks[(masks & (abit | bbit)) == 0]
        lhs = table[base | abit] - table[base]
        rhs = table[base | abit | bbit] - table[base | bbit]
        bad = np.flatnonzero(lhs < rhs)
        if bad.size:
            cand = (int(base[bad[0]]), a, b)
            sub_hit = cand if sub_hit is None else min(sub_hit, cand)
    if sub_hit is not None:
        mask, a, b = sub_hit
        report.violations.append(
            Violation("submodular", v.bundle_of(mask), v.bundle_of(mask | 1 << b), v.ground[a]))
    return report


def validate_restricted_additive(profile) -> tuple:
    """Return ``(True, None)`` or ``(False, good)`` for a good valued at two distinct nonzero amounts."""
    profile = list(profile)
    for val in profile:
        if val.kind != "additive":
            raise InputError(f"restricted-additive check needs additive valuations, got {val.kind!r}")
    if not profile:
        return True, None
    ground = profile[0].ground
    if any(val.ground != ground for val in profile):
        raise InputError("valuations do not share a ground set")
    for g in ground:
        nonzero = {val.values.get(g, 0) for val in profile} - {0}
        if len(nonzero) > 1:
            return False, g
    return True, None


# -- catalogs of small set functions ----------------------------------------

def _lower_masks(mask, m):
    return [mask ^ (1 << i) for i in range(m) if mask >> i & 1]


def binary_monotone_tables(m: int, submodular_prune: bool = False):
    """Yield every binary, monotone, normalized set function on ``m`` goods as a bitmask table.

    Masks are filled in increasing order, so every one-smaller subset is
    already assigned.  With ``submodular_prune`` the local diminishing-returns
    inequality is enforced while filling, which yields exactly the matroid
    rank functions.
    """
    size = 2**m
    table = [0] * size

    def fill(mask):
        if mask == size:
            yield tuple(table)
            return
        lowers = _lower_masks(mask, m)
        lo = max(table[x] for x in lowers)
        hi = min(table[x] for x in lowers) + 1
        for val in range(lo, hi + 1):
            table[mask] = val
            if submodular_prune and not _locally_submodular(table, mask, m):
                continue
            yield from fill(mask + 1)

    yield from fill(1)


def _locally_submodular(table, mask, m):
    bits = [i for i in range(m) if mask >> i & 1]
    for a, b in itertools.combinations(bits, 2):
        ma, mb = mask ^ (1 << a), mask ^ (1 << b)
        if table[ma] + table[mb] < table[mask] + table[ma ^ (1 << b)]:
            return False
    return True


def matroid_rank_catalog(ground) -> list:
    """All matroid rank functions on ``ground`` as explicit valuations."""
    ground = tuple(ground)
    if len(ground) > 5:
        raise CapacityError("matroid catalog is limited to 5 goods", bound=len(ground))
    return [Explicit.from_table(ground, t) for t in binary_monotone_tables(len(ground), submodular_prune=True)]


def binary_additive_catalog(ground) -> list:
    ground = tuple(ground)
    return [
        BinaryAdditive(ground, [g for i, g in enumerate(ground) if mask >> i & 1])
        for mask in range(2 ** len(ground))
    ]
