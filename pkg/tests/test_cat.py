"""Categories, nerves and the fundamental category."""

import pytest

from ssetkit.cat import (
    Arrow,
    CategoryPresentation,
    Morphism,
    WordBudgetError,
    category_isomorphism,
    equivalent_categories,
    free_isomorphism_category,
    is_equivalence_edge,
    isomorphic_presentations,
    nerve,
    poset_category,
    tau1,
    terminal_category,
)
from ssetkit.sset import (
    boundary_inclusion,
    horn_inclusion,
    interval_skeleton,
    is_isomorphic,
    standard_simplex,
)


def test_terminal_category_valid():
    T = terminal_category()
    T.validate()


def test_poset_concrete():
    C = poset_category(2).as_concrete()
    C.validate()
    # morphisms of [2]: six order pairs i <= j
    assert len(C.morphs) == 6
    assert len(C.hom("0", "2")) == 1


def test_free_iso_concrete():
    C = free_isomorphism_category().as_concrete()
    C.validate()
    assert len(C.morphs) == 4
    assert len(C.iso_classes()) == 1


def test_word_equality():
    C = free_isomorphism_category()
    vu = Morphism("0", "0", ("u", "v"))
    assert C.equal(vu, C.identity("0")).is_yes
    assert C.equal(C.arrow_morphism("u"), C.arrow_morphism("u")).is_yes
    # in the free category on one arrow, a and aa differ
    F = CategoryPresentation(["x"], [Arrow("a", "x", "x")])
    assert F.equal(Morphism("x", "x", ("a",)), Morphism("x", "x", ("a", "a"))).is_no


def test_free_loop_budget():
    F = CategoryPresentation(["x"], [Arrow("a", "x", "x")], max_morphisms=10)
    with pytest.raises(WordBudgetError):
        F.morphism_table()


def test_nerve_terminal():
    N = nerve(terminal_category(), trunc=3)
    assert is_isomorphic(N.sset, standard_simplex(0)) is not None
    assert N.sset.truncation is None


def test_nerve_poset_is_simplex():
    N = nerve(poset_category(1), trunc=2)
    assert is_isomorphic(N.sset, standard_simplex(1)) is not None
    assert N.sset.truncation is None
    N2 = nerve(poset_category(2), trunc=3)
    assert is_isomorphic(N2.sset, standard_simplex(2)) is not None


def test_nerve_free_iso_is_interval_skeleton():
    from ssetkit.sset import truncate

    N = nerve(free_isomorphism_category(), trunc=2)
    assert is_isomorphic(N.sset, truncate(interval_skeleton(2), 2)) is not None
    assert N.sset.truncation == 2


def test_tau1_interval():
    C = tau1(standard_simplex(1))
    assert isomorphic_presentations(C, poset_category(1)).is_yes


def test_tau1_boundary_is_free():
    C = tau1(boundary_inclusion(2).source)
    assert not C.relations
    table = C.morphism_table()
    # hom(0, 2) contains the edge 02 and the composite 12∘01
    assert len(table[("0", "2")]) == 2


def test_tau1_simplex_has_composition_relation():
    C = tau1(standard_simplex(2))
    table = C.morphism_table()
    assert len(table[("0", "2")]) == 1


def test_tau1_interval_skeleton_invertible():
    J2 = interval_skeleton(2)
    for e in J2.gens[1]:
        assert is_equivalence_edge(J2, J2.gen_ref(e)).is_yes


def test_equivalence_edge_cases():
    D1 = standard_simplex(2)
    edge = D1.gen_ref("0,1")
    assert is_equivalence_edge(D1, edge).is_no
    degenerate = D1.degeneracy(D1.gen_ref("0"), 0)
    assert is_equivalence_edge(D1, degenerate).is_yes


def test_tau1_nerve_roundtrip():
    # τ₁(N(C)) is isomorphic to C for small categories
    for C in (poset_category(1), poset_category(2), free_isomorphism_category()):
        N = nerve(C, trunc=2)
        back = tau1(N.sset)
        assert isomorphic_presentations(back, C).is_yes


def test_equivalent_categories_skeleton():
    point = CategoryPresentation(["*"], [])
    assert equivalent_categories(free_isomorphism_category(), point).is_yes
    assert equivalent_categories(poset_category(1), point).is_no


def test_category_isomorphism_negative():
    a = poset_category(1).as_concrete()
    b = free_isomorphism_category().as_concrete()
    assert category_isomorphism(a, b) is None


def test_tau1_horn_no_composite():
    # Λ¹[2] has no 2-simplex, so hom(0,2) is the free composite only
    C = tau1(horn_inclusion(2, 1).source)
    table = C.morphism_table()
    assert len(table[("0", "2")]) == 1
    assert table[("0", "2")][0].word == ("0,1", "1,2")
