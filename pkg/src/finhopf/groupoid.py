"""Finite base spaces, rational functions on them, and finite groupoids.

A groupoid here is given completely explicitly: arrow ids with source and
target points, a unit arrow per point, an inverse map, and a composition
table.  ``compose(g, h)`` means "g after h" and is defined exactly when
``source(g) == target(h)``.  Nothing is inferred; ``validate`` checks the
axioms and reports every violation it finds by name.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import SizeGuardExceeded
from .rationals import rat, rat_str

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class BaseSpace:
    """An ordered finite set of point identifiers."""

    points: tuple[str, ...]

    def __post_init__(self):
        if not self.points:
            raise ValueError("base space must have at least one point")
        if len(set(self.points)) != len(self.points):
            raise ValueError("duplicate point identifiers")
        object.__setattr__(
            self, "_index", {p: i for i, p in enumerate(self.points)}
        )

    def index(self, point: str) -> int:
        try:
            return self._index[point]
        except KeyError:
            raise KeyError(f"unknown point {point!r}") from None

    def __contains__(self, point) -> bool:
        return point in self._index

    def __iter__(self):
        return iter(self.points)

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class BaseFun:
    """A rational-valued function on a base space, stored pointwise."""

    base: BaseSpace
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != len(self.base.points):
            raise ValueError("one value per point required")
        object.__setattr__(self, "values", tuple(rat(v) for v in self.values))

    @classmethod
    def from_dict(cls, base: BaseSpace, mapping) -> "BaseFun":
        return cls(base, tuple(rat(mapping.get(p, 0)) for p in base.points))

    @classmethod
    def constant(cls, base: BaseSpace, c) -> "BaseFun":
        return cls(base, tuple(rat(c) for _ in base.points))

    @classmethod
    def one(cls, base: BaseSpace) -> "BaseFun":
        return cls.constant(base, 1)

    @classmethod
    def zero(cls, base: BaseSpace) -> "BaseFun":
        return cls.constant(base, 0)

    @classmethod
    def indicator(cls, base: BaseSpace, point: str) -> "BaseFun":
        i = base.index(point)
        return cls(base, tuple(_ONE if j == i else _ZERO for j in range(len(base))))

    def __call__(self, point: str) -> Fraction:
        return self.values[self.base.index(point)]

    def __add__(self, other: "BaseFun") -> "BaseFun":
        self._same_base(other)
        return BaseFun(self.base, tuple(a + b for a, b in zip(self.values, other.values)))

    def __sub__(self, other: "BaseFun") -> "BaseFun":
        self._same_base(other)
        return BaseFun(self.base, tuple(a - b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "BaseFun":
        return BaseFun(self.base, tuple(-a for a in self.values))

    def __mul__(self, other):
        if isinstance(other, BaseFun):
            self._same_base(other)
            return BaseFun(
                self.base, tuple(a * b for a, b in zip(self.values, other.values))
            )
        return self.scale(other)

    __rmul__ = __mul__

    def scale(self, c) -> "BaseFun":
        c = rat(c)
        return BaseFun(self.base, tuple(c * a for a in self.values))

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def support(self) -> tuple[str, ...]:
        return tuple(p for p, v in zip(self.base.points, self.values) if v)

    def _same_base(self, other):
        if self.base != other.base:
            raise ValueError("functions live on different base spaces")

    def to_json(self) -> dict:
        return {p: rat_str(v) for p, v in zip(self.base.points, self.values) if v}

    def __repr__(self):
        body = ", ".join(f"{p}: {rat_str(v)}" for p, v in zip(self.base.points, self.values))
        return f"BaseFun({body})"


class FiniteGroupoid:
    """A finite groupoid with an explicit composition table.

    Construction only resolves identifiers; the groupoid laws are checked by
    ``validate`` so that deliberately broken structures can still be built
    and inspected.
    """

    def __init__(self, base, arrows, source, target, units, inverse, compose_table):
        self.base = base
        self.arrows = tuple(arrows)
        if len(set(self.arrows)) != len(self.arrows):
            raise ValueError("duplicate arrow identifiers")
        arrow_set = set(self.arrows)
        for mapping, name in ((source, "source"), (target, "target")):
            missing = arrow_set - set(mapping)
            if missing:
                raise ValueError(f"{name} undefined for arrows {sorted(missing)}")
        self.source = {g: source[g] for g in self.arrows}
        self.target = {g: target[g] for g in self.arrows}
        for g in self.arrows:
            if self.source[g] not in base or self.target[g] not in base:
                raise ValueError(f"arrow {g!r} touches a point outside the base")
        if set(units) != set(base.points):
            raise ValueError("exactly one unit per base point required")
        for x, u in units.items():
            if u not in arrow_set:
                raise ValueError(f"unit of {x!r} is not an arrow: {u!r}")
        self.units = dict(units)
        if set(inverse) != arrow_set or any(v not in arrow_set for v in inverse.values()):
            raise ValueError("inverse must be a total map between arrows")
        self.inverse = dict(inverse)
        self.compose_table = {}
        for (g, h), gh in compose_table.items():
            if g not in arrow_set or h not in arrow_set or gh not in arrow_set:
                raise ValueError(f"composition entry ({g!r}, {h!r}) -> {gh!r} uses unknown arrows")
            self.compose_table[(g, h)] = gh

    def compose(self, g, h):
        """The arrow ``g`` after ``h``, or None when not composable."""
        return self.compose_table.get((g, h))

    def unit(self, point):
        return self.units[point]

    def is_unit(self, g) -> bool:
        return self.units.get(self.target[g]) == g and self.source[g] == self.target[g]

    def arrows_into(self, point) -> tuple[str, ...]:
        return tuple(g for g in sorted(self.arrows) if self.target[g] == point)

    def arrows_from(self, point) -> tuple[str, ...]:
        return tuple(g for g in sorted(self.arrows) if self.source[g] == point)

    def hom(self, x, y) -> tuple[str, ...]:
        return tuple(
            g for g in sorted(self.arrows)
            if self.source[g] == x and self.target[g] == y
        )

    @cached_property
    def factorizations(self):
        """For each arrow g, every ordered pair (h, k) with h∘k = g."""
        table = {g: [] for g in self.arrows}
        for (h, k), g in self.compose_table.items():
            table[g].append((h, k))
        for g in table:
            table[g].sort()
        return table

    def validate(self) -> list[str]:
        """All groupoid-law violations, each naming the offending arrows."""
        report = []
        for x, u in self.units.items():
            if self.source[u] != x or self.target[u] != x:
                report.append(f"unit {u!r} of {x!r} is not an endo-arrow at {x!r}")
        for g in self.arrows:
            for h in self.arrows:
                composable = self.source[g] == self.target[h]
                defined = (g, h) in self.compose_table
                if composable and not defined:
                    report.append(f"composition ({g!r}, {h!r}) missing")
                elif defined and not composable:
                    report.append(f"composition ({g!r}, {h!r}) defined but not composable")
                elif defined:
                    gh = self.compose_table[(g, h)]
                    if self.source[gh] != self.source[h] or self.target[gh] != self.target[g]:
                        report.append(f"composite {gh!r} of ({g!r}, {h!r}) has wrong endpoints")
        for g in self.arrows:
            us, ut = self.units[self.source[g]], self.units[self.target[g]]
            if self.compose_table.get((g, us)) != g:
                report.append(f"right unit law fails for {g!r}")
            if self.compose_table.get((ut, g)) != g:
                report.append(f"left unit law fails for {g!r}")
            inv = self.inverse[g]
            if self.source[inv] != self.target[g] or self.target[inv] != self.source[g]:
                report.append(f"inverse {inv!r} of {g!r} has wrong endpoints")
            else:
                if self.compose_table.get((inv, g)) != self.units[self.source[g]]:
                    report.append(f"inverse law fails for {g!r} (left)")
                if self.compose_table.get((g, inv)) != self.units[self.target[g]]:
                    report.append(f"inverse law fails for {g!r} (right)")
            if self.inverse[inv] != g:
                report.append(f"inverse is not involutive at {g!r}")
        for g in self.arrows:
            for h in self.arrows:
                if (g, h) not in self.compose_table:
                    continue
                for k in self.arrows:
                    if (h, k) not in self.compose_table:
                        continue
                    left = self.compose_table.get((self.compose_table[(g, h)], k))
                    right = self.compose_table.get((g, self.compose_table[(h, k)]))
                    if left != right or left is None:
                        report.append(f"associativity fails on ({g!r}, {h!r}, {k!r})")
        return report

    def __repr__(self):
        return (
            f"FiniteGroupoid({len(self.base)} points, {len(self.arrows)} arrows)"
        )


def validate_groupoid(g: FiniteGroupoid) -> list[str]:
    return g.validate()


@dataclass(frozen=True)
class Bisection:
    """A set of arrows whose sources, and whose targets, are all distinct."""

    groupoid: FiniteGroupoid
    arrows: frozenset

    def __post_init__(self):
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        g = self.groupoid
        sources = [g.source[a] for a in self.arrows]
        targets = [g.target[a] for a in self.arrows]
        if len(set(sources)) != len(sources):
            raise ValueError("source map not injective on bisection")
        if len(set(targets)) != len(targets):
            raise ValueError("target map not injective on bisection")

    def mul(self, other: "Bisection") -> "Bisection":
        g = self.groupoid
        product = set()
        for a in self.arrows:
            for b in other.arrows:
                ab = g.compose(a, b)
                if ab is not None:
                    product.add(ab)
        return Bisection(g, frozenset(product))

    def inv(self) -> "Bisection":
        return Bisection(self.groupoid, frozenset(self.groupoid.inverse[a] for a in self.arrows))

    def tau(self) -> dict:
        """The partial point map source -> target induced by the bisection."""
        g = self.groupoid
        return {g.source[a]: g.target[a] for a in self.arrows}


@dataclass(frozen=True)
class GroupoidIsomorphism:
    point_map: dict
    arrow_map: dict


def groupoid_isomorphic(a: FiniteGroupoid, b: FiniteGroupoid, max_arrows: int = 64):
    """An exhaustive search for an isomorphism, or None.

    When the two groupoids share their point set the base map is fixed to the
    identity; otherwise every point bijection is tried.  Refuses inputs with
    more than ``max_arrows`` arrows.
    """
    if len(a.arrows) > max_arrows or len(b.arrows) > max_arrows:
        raise SizeGuardExceeded(
            f"isomorphism search limited to {max_arrows} arrows"
        )
    if len(a.arrows) != len(b.arrows) or len(a.base) != len(b.base):
        return None
    if set(a.base.points) == set(b.base.points):
        point_maps = [{p: p for p in a.base.points}]
    else:
        point_maps = [
            dict(zip(a.base.points, perm))
            for perm in itertools.permutations(b.base.points)
        ]
    for pmap in point_maps:
        amap = _search_arrow_map(a, b, pmap)
        if amap is not None:
            return GroupoidIsomorphism(pmap, amap)
    return None


def _search_arrow_map(a, b, pmap):
    order = sorted(a.arrows)
    b_by_ends = {}
    for g in b.arrows:
        b_by_ends.setdefault((b.source[g], b.target[g]), []).append(g)

    hint = {}
    for (x, y), hom in b_by_ends.items():
        hint[(x, y)] = sorted(hom)

    assignment = {}
    used = set()

    def consistent(g, image):
        if a.is_unit(g) != b.is_unit(image):
            return False
        inv = a.inverse[g]
        if inv in assignment and assignment[inv] != b.inverse[image]:
            return False
        for h, him in assignment.items():
            gh = a.compose(g, h)
            if gh is not None:
                target = b.compose(image, him)
                if target is None:
                    return False
                if gh in assignment and assignment[gh] != target:
                    return False
                if gh == g and target != image:
                    return False
            hg = a.compose(h, g)
            if hg is not None:
                target = b.compose(him, image)
                if target is None:
                    return False
                if hg in assignment and assignment[hg] != target:
                    return False
                if hg == h and target != him:
                    return False
        return True

    def extend(i):
        if i == len(order):
            return _full_check(a, b, pmap, assignment)
        g = order[i]
        ends = (pmap[a.source[g]], pmap[a.target[g]])
        for image in hint.get(ends, ()):
            if image in used:
                continue
            if not consistent(g, image):
                continue
            assignment[g] = image
            used.add(image)
            if extend(i + 1):
                return True
            del assignment[g]
            used.remove(image)
        return False

    if extend(0):
        return dict(assignment)
    return None


def _full_check(a, b, pmap, amap):
    for x in a.base.points:
        if amap[a.units[x]] != b.units[pmap[x]]:
            return False
    for g in a.arrows:
        if amap[a.inverse[g]] != b.inverse[amap[g]]:
            return False
    for (g, h), gh in a.compose_table.items():
        if b.compose(amap[g], amap[h]) != amap[gh]:
            return False
    return len(b.compose_table) == len(a.compose_table)
