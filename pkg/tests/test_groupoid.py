"""Finite groupoids: construction, law validation, bisections, isomorphism."""

import pytest

from finhopf.errors import SizeGuardExceeded
from finhopf.groupoid import (
    BaseFun,
    BaseSpace,
    Bisection,
    FiniteGroupoid,
    groupoid_isomorphic,
)


def z2(base_point="x"):
    base = BaseSpace((base_point,))
    return FiniteGroupoid(
        base,
        ["e", "s"],
        {"e": base_point, "s": base_point},
        {"e": base_point, "s": base_point},
        {base_point: "e"},
        {"e": "e", "s": "s"},
        {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s", ("s", "s"): "e"},
    )


def pair_groupoid(points):
    base = BaseSpace(tuple(points))
    arrows = [f"a{t}{s}" for t in points for s in points]
    source = {f"a{t}{s}": s for t in points for s in points}
    target = {f"a{t}{s}": t for t in points for s in points}
    compose = {}
    for z in points:
        for y in points:
            for x in points:
                compose[(f"a{z}{y}", f"a{y}{x}")] = f"a{z}{x}"
    return FiniteGroupoid(
        base, arrows, source, target,
        {p: f"a{p}{p}" for p in points},
        {f"a{t}{s}": f"a{s}{t}" for t in points for s in points},
        compose,
    )


def test_base_space_and_functions():
    base = BaseSpace(("x", "y"))
    assert "x" in base and "z" not in base
    f = BaseFun.from_dict(base, {"x": 2})
    g = BaseFun.indicator(base, "y")
    assert f("x") == 2 and f("y") == 0
    assert (f + g)("y") == 1
    assert (f * g).is_zero()
    assert f.support() == ("x",)
    with pytest.raises(ValueError):
        BaseSpace(())
    with pytest.raises(ValueError):
        BaseSpace(("x", "x"))


def test_valid_groupoid_passes():
    assert z2().validate() == []
    assert pair_groupoid(["x", "y"]).validate() == []


def test_broken_unit_law_reported():
    base = BaseSpace(("x",))
    g = FiniteGroupoid(
        base, ["e", "s"],
        {"e": "x", "s": "x"}, {"e": "x", "s": "x"},
        {"x": "e"}, {"e": "e", "s": "s"},
        # s after e wrongly gives e
        {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "e", ("s", "s"): "e"},
    )
    violations = g.validate()
    assert violations
    assert any("unit" in v for v in violations)


def test_broken_inverse_reported():
    base = BaseSpace(("x",))
    g = FiniteGroupoid(
        base, ["e", "s", "t"],
        {"e": "x", "s": "x", "t": "x"}, {"e": "x", "s": "x", "t": "x"},
        {"x": "e"}, {"e": "e", "s": "t", "t": "t"},
        {
            ("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s",
            ("e", "t"): "t", ("t", "e"): "t",
            ("s", "s"): "t", ("s", "t"): "e", ("t", "s"): "e", ("t", "t"): "s",
        },
    )
    violations = g.validate()
    assert any("inverse" in v for v in violations)


def test_missing_composition_reported():
    base = BaseSpace(("x",))
    g = FiniteGroupoid(
        base, ["e", "s"],
        {"e": "x", "s": "x"}, {"e": "x", "s": "x"},
        {"x": "e"}, {"e": "e", "s": "s"},
        {("e", "e"): "e", ("e", "s"): "s", ("s", "e"): "s"},  # (s, s) missing
    )
    assert any("missing" in v for v in g.validate())


def test_associativity_violation_reported():
    base = BaseSpace(("x",))
    # Z/3 with one composition entry corrupted
    names = ["e", "g", "h"]
    compose = {}
    table = {("e", "e"): "e", ("e", "g"): "g", ("e", "h"): "h",
             ("g", "e"): "g", ("h", "e"): "h",
             ("g", "g"): "h", ("g", "h"): "e", ("h", "g"): "e", ("h", "h"): "g"}
    compose.update(table)
    compose[("h", "h")] = "h"  # breaks associativity and inverses
    g = FiniteGroupoid(
        base, names,
        {n: "x" for n in names}, {n: "x" for n in names},
        {"x": "e"}, {"e": "e", "g": "h", "h": "g"}, compose,
    )
    assert g.validate()


def test_factorizations_cover_composition():
    g = pair_groupoid(["x", "y"])
    for arrow, pairs in g.factorizations.items():
        for h, k in pairs:
            assert g.compose(h, k) == arrow
    # every composable pair appears exactly once
    total = sum(len(v) for v in g.factorizations.values())
    assert total == len(g.compose_table)


def test_hom_and_arrow_queries():
    g = pair_groupoid(["x", "y"])
    assert g.hom("x", "y") == ("ayx",)
    assert set(g.arrows_into("x")) == {"axx", "axy"}
    assert set(g.arrows_from("x")) == {"axx", "ayx"}
    assert g.is_unit("axx") and not g.is_unit("axy")


def test_bisection_translation():
    g = z2()
    b = Bisection(g, frozenset({"s"}))
    assert b.tau() == {"x": "x"}
    assert b.inv().arrows == frozenset({"s"})
    assert b.mul(b).arrows == frozenset({"e"})
    pg = pair_groupoid(["x", "y"])
    swap = Bisection(pg, frozenset({"axy", "ayx"}))
    assert swap.tau() == {"x": "y", "y": "x"}
    with pytest.raises(ValueError):
        Bisection(pg, frozenset({"axy", "ayy"}))


def test_groupoid_isomorphic_positive():
    iso = groupoid_isomorphic(z2("x"), z2("x"))
    assert iso is not None
    assert iso.arrow_map["e"] == "e"
    # relabeled arrows still match
    base = BaseSpace(("x",))
    other = FiniteGroupoid(
        base, ["u", "v"],
        {"u": "x", "v": "x"}, {"u": "x", "v": "x"},
        {"x": "u"}, {"u": "u", "v": "v"},
        {("u", "u"): "u", ("u", "v"): "v", ("v", "u"): "v", ("v", "v"): "u"},
    )
    iso = groupoid_isomorphic(z2("x"), other)
    assert iso is not None
    assert iso.arrow_map == {"e": "u", "s": "v"}


def test_groupoid_isomorphic_negative():
    base = BaseSpace(("x",))
    z3 = FiniteGroupoid(
        base, ["e", "g", "h"],
        {n: "x" for n in ["e", "g", "h"]}, {n: "x" for n in ["e", "g", "h"]},
        {"x": "e"}, {"e": "e", "g": "h", "h": "g"},
        {("e", "e"): "e", ("e", "g"): "g", ("e", "h"): "h",
         ("g", "e"): "g", ("h", "e"): "h",
         ("g", "g"): "h", ("g", "h"): "e", ("h", "g"): "e", ("h", "h"): "g"},
    )
    assert groupoid_isomorphic(z2(), z3) is None
    # same arrow count, different structure: Z/4 vs Z/2 x Z/2 would need 4 arrows;
    # here compare Z/3 against three-arrow non-group: skip, covered by counts
    assert groupoid_isomorphic(pair_groupoid(["x", "y"]), z3) is None


def test_groupoid_isomorphic_size_guard():
    pts = [f"p{i}" for i in range(9)]
    big = pair_groupoid(pts)  # 81 arrows > 64
    with pytest.raises(SizeGuardExceeded):
        groupoid_isomorphic(big, big)
