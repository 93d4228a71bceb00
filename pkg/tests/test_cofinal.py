"""Cofinality criteria on the worked instances."""

import pytest

from ssetkit.cofinal import (
    Budget,
    fiberwise_comparison,
    is_covariant_equivalence,
    is_L_cofinal,
    is_left_cofinal,
    is_right_cofinal,
    weak_homotopy_oracle,
)
from ssetkit.cat import nerve, poset_category
from ssetkit.sset import (
    SimplicialMap,
    compose_maps,
    coproduct,
    generalized_horn_inclusion,
    horn_inclusion,
    identity_map,
    initial_vertex_inclusion,
    simplex_map,
    slice_sset,
    spine_inclusion,
    standard_simplex,
)
from ssetkit.lifting import terminal_map
from ssetkit.delta import MonotoneMap, vertex_map


BUDGET = Budget(max_degree=2)


@pytest.mark.parametrize("mode", ["definition", "theorem_a", "joyal"])
def test_identity_right_cofinal(mode):
    u = identity_map(standard_simplex(1))
    assert is_right_cofinal(u, mode=mode, budget=BUDGET).is_yes


@pytest.mark.parametrize("mode", ["definition", "theorem_a", "joyal"])
def test_initial_vertex_right_cofinal(mode):
    # {0} ⊂ Δ[1] is left anodyne, hence right cofinal
    u = initial_vertex_inclusion(1)
    assert is_right_cofinal(u, mode=mode, budget=BUDGET).is_yes


@pytest.mark.parametrize("mode", ["theorem_a", "joyal"])
@pytest.mark.parametrize("n", [2, 3])
def test_initial_vertex_right_cofinal_higher(mode, n):
    # in higher dimension the factorization engine diverges (replacements
    # are infinite in general), but the comma-pullback modes stay definite
    u = initial_vertex_inclusion(n)
    assert is_right_cofinal(u, mode=mode, budget=BUDGET).is_yes


def test_definition_mode_divergence_is_inconclusive():
    u = initial_vertex_inclusion(2)
    v = is_right_cofinal(u, mode="definition", budget=Budget(max_cells=25))
    assert v.is_inconclusive
    assert v.witness["reason"] == "factorization budget exhausted"


@pytest.mark.parametrize("mode", ["definition", "theorem_a", "joyal"])
def test_final_vertex_not_right_cofinal(mode):
    # {1} ⊂ Δ[1]: the comma pullback over b = 0 is empty
    u = simplex_map(vertex_map(1, "final"))
    v = is_right_cofinal(u, mode=mode, budget=BUDGET)
    assert v.is_no


def test_theorem_a_witness_vertex():
    u = simplex_map(vertex_map(1, "final"))
    v = is_right_cofinal(u, mode="theorem_a", budget=BUDGET)
    assert v.witness["at"] == "0"


def test_final_vertex_is_left_cofinal():
    u = simplex_map(vertex_map(1, "final"))
    assert is_left_cofinal(u, budget=BUDGET).is_yes


def test_generalized_horns_right_cofinal_theorem_a():
    for n in (2, 3):
        for S in ({0}, {0, 1}):
            if not S < set(range(n)):
                continue
            u = generalized_horn_inclusion(n, frozenset(S))
            assert is_right_cofinal(u, mode="theorem_a", budget=BUDGET).is_yes


def test_spine_right_cofinal():
    # the spine I_2 ⊂ Δ[2] is inner anodyne, hence right cofinal
    assert is_right_cofinal(spine_inclusion(2), mode="theorem_a", budget=BUDGET).is_yes


def test_covariant_equivalence_identity():
    X = standard_simplex(1)
    p = identity_map(X)
    assert is_covariant_equivalence(p, p, p, BUDGET).is_yes


def test_covariant_equivalence_initial_vertex_over_interval():
    B = standard_simplex(1)
    u = initial_vertex_inclusion(1)
    assert is_covariant_equivalence(u, u, identity_map(B), BUDGET).is_yes


def test_covariant_equivalence_final_vertex_fails():
    B = standard_simplex(1)
    u = simplex_map(vertex_map(1, "final"))
    v = is_covariant_equivalence(u, u, identity_map(B), BUDGET)
    assert v.is_no
    assert v.witness["at"] == "0"


def test_weak_homotopy_oracle_collapse():
    pt = standard_simplex(0)
    m = terminal_map(standard_simplex(2))
    assert weak_homotopy_oracle(m, BUDGET).is_yes
    two = coproduct(pt, pt).sset
    assert weak_homotopy_oracle(terminal_map(two), BUDGET).is_no


def test_fiberwise_comparison_on_slices():
    # {1}-fiber inclusion into the slice (Δ[1])_{0/} over Δ[1] is a
    # fiberwise equivalence nowhere: at b=0 the fiber is empty vs a point
    B = standard_simplex(1)
    S = slice_sset(B, B.gen_ref("0"), "under")
    pt = standard_simplex(0)
    vertex_over_1 = [name for _, name in S.sset.generators()
                     if S.sset.dim_of[name] == 0
                     and S.projection.assignment[name].gen == "1"]
    incl = SimplicialMap(pt, S.sset, {"0": S.sset.gen_ref(vertex_over_1[0])})
    p = compose_maps(S.projection, incl)
    direct = fiberwise_comparison(incl, p, S.projection, BUDGET)
    criterion = is_covariant_equivalence(incl, p, S.projection, BUDGET)
    assert direct.is_no and criterion.is_no


def test_L_cofinal_identity():
    assert is_L_cofinal(identity_map(standard_simplex(1)), BUDGET).is_yes


def test_L_cofinal_nerve_with_terminal_object():
    # NC -> Δ[0] for C = [1] (has a terminal object)
    N = nerve(poset_category(1), trunc=2)
    assert is_L_cofinal(terminal_map(N.sset), BUDGET).is_yes


def test_L_cofinal_two_points_over_interval():
    B = standard_simplex(1)
    two = coproduct(standard_simplex(0), standard_simplex(0))
    pts = two.sset.gens[0]
    u = SimplicialMap(two.sset, B,
                      {pts[0]: B.gen_ref("0"), pts[1]: B.gen_ref("1")})
    v = is_L_cofinal(u, BUDGET)
    assert v.is_no
    assert v.witness["at"] == "1"


def test_L_cofinal_implies_two_sided_cofinal():
    N = nerve(poset_category(1), trunc=2)
    u = terminal_map(N.sset)
    assert is_L_cofinal(u, BUDGET).is_yes
    assert is_right_cofinal(u, mode="joyal", budget=BUDGET).is_yes
    assert is_left_cofinal(u, mode="joyal", budget=BUDGET).is_yes
