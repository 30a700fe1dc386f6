from gradedkit.core.fincat import category_law_errors, walking_arrow
from gradedkit.core.functors import (
    FunctorTable,
    enumerate_functors,
    enumerate_nat_trans,
    functor_category,
    hcomp,
    identity_functor,
    identity_nat,
    validate_functor,
    validate_nat_trans,
    vcomp,
    whisker_left,
    whisker_right,
)


def test_functors_between_walking_arrows():
    c = walking_arrow()
    fs = enumerate_functors(c, c)
    assert len(fs) == 3
    assert {(f.ob("a"), f.ob("b")) for f in fs} == {("a", "a"), ("a", "b"), ("b", "b")}
    for f in fs:
        assert validate_functor(f).passed


def test_ill_typed_functor_is_reported():
    c = walking_arrow()
    bad = FunctorTable(c, c, {"a": "a", "b": "b"}, {"id_a": "id_a", "id_b": "id_b", "u": "id_a"}, name="bad")
    rep = validate_functor(bad)
    assert not rep.passed
    assert rep.failed_axioms() == ["typing"]


def test_identity_functor_passes():
    assert validate_functor(identity_functor(walking_arrow())).passed


def test_enumerated_transformations_are_natural():
    c = walking_arrow()
    fs = enumerate_functors(c, c)
    for f in fs:
        for g in fs:
            for t in enumerate_nat_trans(f, g):
                assert validate_nat_trans(t).passed


def test_arrow_category_of_walking_arrow_is_a_chain():
    c = walking_arrow()
    fc = functor_category(c, c)
    assert len(fc.objects()) == 3
    assert len(fc.morphisms()) == 6
    assert category_law_errors(fc) == []


def _by_image(fs, a, b):
    return next(f for f in fs if (f.ob("a"), f.ob("b")) == (a, b))


def test_pasting_of_transformations():
    c = walking_arrow()
    fs = enumerate_functors(c, c)
    low, mid, high = _by_image(fs, "a", "a"), _by_image(fs, "a", "b"), _by_image(fs, "b", "b")
    (t,) = enumerate_nat_trans(low, mid)
    (s,) = enumerate_nat_trans(mid, high)

    st = vcomp(s, t)
    assert validate_nat_trans(st).passed
    assert [st.at(x) for x in "ab"] == ["u", "u"]
    assert [vcomp(t, identity_nat(low)).at(x) for x in "ab"] == [t.at(x) for x in "ab"]

    assert validate_nat_trans(whisker_left(high, t)).passed
    assert validate_nat_trans(whisker_right(t, high)).passed

    h = hcomp(s, t)
    assert validate_nat_trans(h).passed
    interchange = vcomp(whisker_right(s, mid), whisker_left(mid, t))
    assert [h.at(x) for x in "ab"] == [interchange.at(x) for x in "ab"]
