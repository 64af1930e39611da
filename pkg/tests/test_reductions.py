from __future__ import annotations


import pytest
from hypothesis import given, strategies as st

from conftest import F2, Z, Z2, ZZ, positive_words
from ordgraph.cones import CT, T, AbelianVec, BS12, BSQCone, ProductCone, enumerate_positive, parse_word
from ordgraph.errors import FamilyMismatch, NotOrderHom
from ordgraph.reductions import (
    CATALOG,
    Hom,
    apply_hom,
    build_hom,
    check_hereditary,
    check_reduction,
    compose,
    f2_to_bs12,
    f2_to_z,
    freeprod,
    identity,
    natural_wreath,
    product,
    submonoid_member,
    z2_sum,
)


def w(text):
    return parse_word(F2, text)


def built_homs():
    homs = {name: make() for name, make in CATALOG.items()}
    homs["identity_free"] = identity(F2)
    homs["freeprod_f2z"] = freeprod(f2_to_z(), f2_to_z())
    homs["product_f2z_id"] = product(f2_to_z(), identity(Z))
    homs["wreath_after_freeprod"] = compose(freeprod(f2_to_z(), f2_to_z()), natural_wreath(Z, Z))
    return homs


def test_apply_examples():
    assert apply_hom(f2_to_z(), w("a b b a")) == AbelianVec((4,))
    assert apply_hom(f2_to_bs12(), w("a b")) == BS12(1, 2)
    assert apply_hom(f2_to_bs12(), w("b a")) == BS12(2, 2)
    assert apply_hom(identity(F2), w("a b^-1")) == w("a b^-1")
    with pytest.raises(FamilyMismatch):
        apply_hom(f2_to_z(), AbelianVec((1,)))


def test_bs12_images_by_hand():
    # (1,1)(0,1) and (0,1)(1,1) by the product formula
    assert CT * T == BS12(1, 2)
    assert T * CT == BS12(2, 2)


def test_reduction_examples():
    phi = f2_to_z()
    assert check_reduction(phi, 4).passed
    below = F2.interval(w("a b b a"))
    assert {phi(x) for x in below} == Z.interval(AbelianVec((4,)))
    strong = check_reduction(phi, 2, "strong")
    assert strong.status == "fail"
    assert strong.witnesses[0] == ("not_injective_on_P", "a", "b")
    assert check_reduction(f2_to_bs12(), 6, "strong").passed


def test_sum_map_fails_at_one_one():
    # |[1,(1,1)]| = 4 while |[0,2]| = 3
    assert len(Z2.interval(AbelianVec((1, 1)))) == 4
    assert len(Z.interval(AbelianVec((2,)))) == 3
    report = check_reduction(z2_sum(), 2)
    assert report.status == "fail"
    assert report.witnesses[0][:2] == ("not_injective_on_interval", "(1,1)")


def test_not_order_hom():
    bad = Hom("bad", F2, BSQCone(), (("a", parse_word(BSQCone(), "c^-1")), ("b", T)))
    with pytest.raises(NotOrderHom):
        check_reduction(bad, 2)


def test_hom_needs_all_images():
    with pytest.raises(ValueError):
        Hom("partial", F2, Z, (("a", AbelianVec((1,))),))


def test_build_hom_examples():
    assert compose(identity(F2), f2_to_z()) == f2_to_z()
    assert build_hom("compose", identity(F2), f2_to_z()) == f2_to_z()
    fp = build_hom("freeprod", f2_to_z(), f2_to_z())
    assert fp.codomain == ZZ
    assert check_reduction(fp, 3).passed
    nw = build_hom("natural_wreath", Z, Z)
    assert nw.decoder is not None
    assert check_reduction(nw, 6, "strong").passed
    assert build_hom("named", "f2_to_z") == f2_to_z()
    with pytest.raises(FamilyMismatch):
        compose(f2_to_z(), f2_to_bs12())


def test_strong_without_decoder_is_inconclusive_when_search_fails():
    # same map as f2_to_bs12 but no decoder: codomain words of length 3
    # need domain words of length 3, so depth-bounded search still succeeds
    plain = Hom("plain", F2, BSQCone(), f2_to_bs12().images)
    assert check_reduction(plain, 3, "strong").passed
    # a hom whose preimages are longer than the codomain words
    squash = Hom("squash", F2, Z, (("a", AbelianVec((2,))), ("b", AbelianVec((3,)))))
    report = check_reduction(squash, 2, "strong")
    assert report.status != "pass"


def test_hereditary_examples():
    axis = lambda p: p.coords[1] == 0
    assert check_hereditary(Z2, axis, 3).passed
    diagonal = lambda p: p.coords[0] == p.coords[1]
    report = check_hereditary(Z2, diagonal, 2)
    assert report.status == "fail"
    assert report.witnesses[0] == ("not_hereditary", "(1,0)", "(0,1)")
    for cone in (F2, Z2, ZZ):
        assert check_hereditary(cone, lambda p: p.is_identity(), 2).passed


def test_submonoid_member():
    member = submonoid_member(Z2, [AbelianVec((1, 1))], 4)
    assert member(AbelianVec((2, 2)))
    assert not member(AbelianVec((1, 0)))


# ------------------------------------------------------------- properties


@pytest.mark.parametrize("name", sorted(built_homs()))
def test_criteria_agree_with_definition(name):
    phi = built_homs()[name]
    depth = 3 if name in ("n2n_to_wreath", "wreath_after_freeprod", "product_f2z_id") else 4
    plain = check_reduction(phi, depth, "reduction")
    crit = check_reduction(phi, depth, "criteria")
    assert plain.status == crit.status
    assert not any(w[0] == "criteria_disagree" for w in crit.witnesses)


@pytest.mark.parametrize("name", sorted(built_homs()))
def test_passing_reduction_preserves_interval_sizes(name):
    phi = built_homs()[name]
    if not check_reduction(phi, 3).passed:
        return
    for p in enumerate_positive(phi.domain, 3):
        assert len(phi.domain.interval(p)) == len(phi.codomain.interval(phi(p)))


@pytest.mark.parametrize("name", sorted(built_homs()))
def test_strong_implies_reduction(name):
    phi = built_homs()[name]
    if check_reduction(phi, 3, "strong").passed:
        assert check_reduction(phi, 3).passed


def test_composition_of_reductions():
    first, second = freeprod(f2_to_z(), f2_to_z()), natural_wreath(Z, Z)
    assert check_reduction(first, 3).passed and check_reduction(second, 3).passed
    assert check_reduction(compose(first, second), 3).passed


@pytest.mark.parametrize("name", sorted(built_homs()))
@given(data=st.data())
def test_monotone(name, data):
    phi = built_homs()[name]
    x = data.draw(positive_words(phi.domain, 3))
    r = data.draw(positive_words(phi.domain, 3))
    y = x * r
    assert phi.codomain.leq(phi(x), phi(y))


@given(positive_words(F2, 8))
def test_bs12_decoder_inverts(p):
    phi = f2_to_bs12()
    assert phi.decoder(phi(p)) == p


def test_bs12_decoder_against_enumeration():
    phi = f2_to_bs12()
    table = {phi(p): p for p in enumerate_positive(F2, 6)}
    for q in enumerate_positive(BSQCone(), 6):
        assert phi.decoder(q) == table[q]


def test_product_hom_uses_qualified_names():
    phi = product(f2_to_z(), f2_to_z())
    assert phi.domain == ProductCone(F2, F2)
    assert [n for n, _ in phi.images] == ["1.a", "1.b", "2.a", "2.b"]
    assert check_reduction(phi, 3).passed
    assert not check_reduction(phi, 2, "strong").passed
