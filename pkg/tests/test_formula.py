import itertools

import pytest
from hypothesis import given, strategies as st

from fieldreach import (
    ANY_FIELD,
    FieldUniverse,
    PathFormula,
    Viability,
    class_reach_closure,
)

from conftest import pf


def all_formulas(universe):
    masks = list(universe.all_masks())
    for bits in range(1 << len(masks)):
        yield PathFormula.from_models(
            universe, [m for i, m in enumerate(masks) if bits & (1 << i)]
        )


# --------------------------------------------------------------------------
# construction and basic shapes


def test_only_fields(u3):
    empty = PathFormula.only(u3, ())
    assert empty.model_sets() == ((),)
    fh = PathFormula.only(u3, ["f", "h"])
    assert fh.model_sets() == (("f", "h"),)
    n = PathFormula.only(u3, ["g"])
    assert n.model_sets() == (("g",),)


def test_true_is_lazy_and_canonical(u2):
    t = PathFormula.true(u2)
    assert t.models is None
    materialized = PathFormula.from_models(u2, range(4))
    assert materialized == t
    assert hash(materialized) == hash(t)


def test_false_identity_and_true_identity(u2):
    f = pf(u2, ["f"])
    assert f.join(PathFormula.false(u2)) == f
    assert f.meet(PathFormula.true(u2)) == f


def test_join_example(u2):
    # over the two-field universe {f, g}: x{} joined with x{f,g}
    got = PathFormula.only(u2, ()).join(PathFormula.only(u2, ["f", "g"]))
    assert got == pf(u2, [], ["f", "g"])


def test_meet_disjoint_singletons(u2):
    assert PathFormula.only(u2, ["f"]).meet(PathFormula.only(u2, ["g"])).is_false


def test_leq_basics(u3):
    false = PathFormula.false(u3)
    for g in (pf(u3, ["f"]), PathFormula.true(u3), false):
        assert false.leq(g)
    assert pf(u3, ["f", "h"]).leq(pf(u3, ["h"], ["f", "h"]))
    assert not pf(u3, ["h"], ["f", "h"]).leq(pf(u3, ["f", "h"]))


def test_equiv_reflexive_and_discriminating(u2):
    a = pf(u2, ["f"])
    assert a.equiv(a)
    b = pf(u2, ["f"], ["g"])
    assert not a.equiv(b)  # {g} discriminates


# --------------------------------------------------------------------------
# lattice laws, exhaustive over small universes


def test_lattice_laws_exhaustive_two_fields(u2):
    fs = list(all_formulas(u2))
    for a in fs:
        assert a.join(a) == a and a.meet(a) == a
        for b in fs:
            assert a.join(b) == b.join(a)
            assert a.meet(b) == b.meet(a)
            assert a.join(a.meet(b)) == a
            assert a.meet(a.join(b)) == a
    for a, b, c in itertools.product(fs[:8], fs[:8], fs[:8]):
        assert a.join(b).join(c) == a.join(b.join(c))
        assert a.meet(b).meet(c) == a.meet(b.meet(c))


def test_leq_partial_order(u2):
    fs = list(all_formulas(u2))
    for a in fs:
        assert a.leq(a)
        for b in fs:
            if a.leq(b) and b.leq(a):
                assert a.equiv(b)
            for c in fs:
                if a.leq(b) and b.leq(c):
                    assert a.leq(c)


# --------------------------------------------------------------------------
# path concatenation


def test_concat_examples(u3):
    f = PathFormula.only(u3, ["f"])
    h = PathFormula.only(u3, ["h"])
    assert f.concat(h) == PathFormula.only(u3, ["f", "h"])
    assert PathFormula.false(u3).concat(f).is_false
    assert PathFormula.only(u3, ()).concat(f) == f


def test_concat_laws_exhaustive_two_fields(u2):
    fs = list(all_formulas(u2))
    false = PathFormula.false(u2)
    empty = PathFormula.only(u2, ())
    for a in fs:
        assert a.concat(false).is_false
        assert a.concat(empty) == a and empty.concat(a) == a
        for b in fs:
            assert a.concat(b) == b.concat(a)
    for a, b, c in itertools.product(fs[:8], fs[:8], fs[:8]):
        assert a.concat(b).concat(c) == a.concat(b.concat(c))
    # monotone in both arguments
    for a, b, c in itertools.product(fs[:8], fs[:8], fs[:8]):
        if a.leq(b):
            assert a.concat(c).leq(b.concat(c))


def test_concat_with_lazy_true(u2):
    t = PathFormula.true(u2)
    f = PathFormula.only(u2, ["f"])
    # the tautology contains the empty model, so concatenation with any
    # nonempty formula containing it stays the tautology
    assert t.concat(t).is_true
    assert PathFormula.only(u2, ()).join(f).concat(t).is_true
    # without the empty model the result is the up-closure
    assert t.concat(f) == pf(u2, ["f"], ["f", "g"])
    assert f.concat(t) == pf(u2, ["f"], ["f", "g"])


@given(
    st.sets(st.integers(min_value=0, max_value=7), max_size=8),
    st.sets(st.integers(min_value=0, max_value=7), max_size=8),
)
def test_concat_models_are_pairwise_unions(ma, mb):
    u = FieldUniverse.of(["f", "g", "h"])
    a = PathFormula.from_models(u, ma)
    b = PathFormula.from_models(u, mb)
    assert a.concat(b).model_masks() == frozenset(x | y for x in ma for y in mb)


# --------------------------------------------------------------------------
# path difference


def test_difference_examples(u3):
    fh = PathFormula.only(u3, ["f", "h"])
    f = PathFormula.only(u3, ["f"])
    assert fh.difference(f) == pf(u3, ["h"], ["f", "h"])
    g = pf(u3, ["f"], ["g"])
    assert g.difference(PathFormula.only(u3, ["f", "g"])) == pf(u3, [], ["f"], ["g"])
    assert g.difference(PathFormula.only(u3, ())) == g


def test_difference_keeps_models(u2):
    fs = list(all_formulas(u2))
    for a in fs:
        for b in fs:
            if b.is_false:
                continue  # with no model on the right nothing survives
            d = a.difference(b)
            assert a.leq(d)


def test_difference_with_lazy_true(u2):
    t = PathFormula.true(u2)
    fg = PathFormula.only(u2, ["f", "g"])
    assert t.difference(fg).is_true
    assert fg.difference(t) == pf(u2, [], ["f"], ["g"], ["f", "g"])


# --------------------------------------------------------------------------
# viability


def brute_force_viable(ct, names) -> bool:
    """Independent decision: search class-graph walks covering exactly the
    given fields, tracking (current class, fields traversed so far)."""
    names = frozenset(names)
    if not names:
        return True
    carriers = {
        c: [f for f, _ in ct.fields_of(c) if f in names] for c in ct.class_names
    }
    seen = set()
    work = [(c, frozenset()) for c in ct.class_names]
    while work:
        cls, done = work.pop()
        if (cls, done) in seen:
            continue
        seen.add((cls, done))
        if done == names:
            return True
        for fld in carriers[cls]:
            for nxt in ct.subclasses_of(ct.field_type(fld)):
                work.append((nxt, done | {fld}))
    return any(done == names for _, done in seen)


def test_devices_viability(devices_ct, devices_universe, devices_via):
    assert devices_via.is_viable(["aD", "lnk", "owner"])
    assert not devices_via.is_viable(["mD", "lnk"])
    assert devices_via.is_viable([])


def test_viability_matches_brute_force(devices_ct, devices_universe, devices_via):
    fields = list(devices_universe.fields)
    for k in range(len(fields) + 1):
        for combo in itertools.combinations(fields, k):
            expected = brute_force_viable(devices_ct, combo)
            assert devices_via.is_viable(combo) == expected, combo


def test_nonviable_collapses_to_false(devices_ct, devices_universe, devices_via):
    bad = PathFormula.only(devices_universe, ["mD", "lnk"])
    false = PathFormula.false(devices_universe)
    assert bad.leq(false, devices_via)
    assert bad.equiv(false, devices_via)
    good = PathFormula.only(devices_universe, ["aD", "lnk", "owner"])
    assert not good.equiv(false, devices_via)


def test_class_reach_closure(devices_ct):
    r = class_reach_closure(devices_ct, ["aD", "lnk", "owner"])
    assert r.reaches("L2", "LP")
    identity = class_reach_closure(devices_ct, [])
    assert identity.pairs == frozenset((c, c) for c in devices_ct.class_names)
    lnk_only = class_reach_closure(devices_ct, ["lnk"])
    assert lnk_only.reaches("TB", "LP")
    assert not lnk_only.reaches("LP", "TB")


# --------------------------------------------------------------------------
# field abstraction


def test_project_fields():
    u = FieldUniverse.of(["left", "right", "parent"])
    f = pf(u, [], ["left", "right", "parent"])
    got = f.project(["left"])
    assert got.universe.fields == ("left", ANY_FIELD)
    assert set(got.model_sets()) == {(), ("left", ANY_FIELD)}


def test_project_all_tracked_is_identity(u3):
    f = pf(u3, ["f"], ["g", "h"])
    assert f.project(["f", "g", "h"]) is f


def test_abstract_union_in_concat():
    u = FieldUniverse.tracked(["fld1", "fld2", "other"], ["fld1", "fld2"])
    a = PathFormula.from_models(u, [u.abstract_mask(["other", "fld1"])])
    b = PathFormula.from_models(u, [u.abstract_mask(["other", "fld2"])])
    assert a.concat(b).model_sets() == ((("fld1", "fld2", ANY_FIELD)),)


def test_abstract_difference_keeps_and_drops_any():
    # removing a stand-in occurrence is optional: the untracked fields it
    # covers may or may not be exhausted
    u = FieldUniverse.tracked(["fld1", "fld2"], ["fld1"])
    lhs = PathFormula.from_models(u, [u.abstract_mask(["fld1", "fld2"])])
    rhs = PathFormula.from_models(u, [u.abstract_mask(["fld2"])])
    got = lhs.difference(rhs)
    assert set(got.model_sets()) == {("fld1",), ("fld1", ANY_FIELD)}


def test_any_assignments_always_viable(devices_ct):
    u = FieldUniverse.tracked(devices_ct.reference_fields, ["mD", "lnk"])
    via = Viability(devices_ct, u)
    assert via.is_viable(["mD", "lnk", ANY_FIELD])
    assert not via.is_viable(["mD", "lnk"])


def test_viable_empty_for_every_class_table(devices_ct, devices_via):
    assert devices_via.is_viable([])
    from fieldreach import build_class_table, parse_program

    for src in ("class A { }", "class A { A f; }", "class A { } class B extends A { B g; }"):
        ct = build_class_table(parse_program(src))
        u = FieldUniverse.of(ct.reference_fields)
        assert Viability(ct, u).is_viable([])
