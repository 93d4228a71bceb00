"""Lifting checks, fibration classification, factorizations, resolutions."""

import pytest

from ssetkit.lifting import (
    Factorization,
    GeneratingFamily,
    Member,
    bounded_factorization,
    classify_fibration,
    has_rlp,
    is_kan,
    is_quasi_category,
    replay_rlp,
    right_resolution,
    terminal_map,
)
from ssetkit.sset import (
    SimplicialMap,
    TruncationError,
    boundary_inclusion,
    classifying_map,
    compose_maps,
    constant_map,
    coproduct,
    fiber,
    horn_inclusion,
    identity_map,
    interval_skeleton,
    is_isomorphic,
    simplex_map,
    slice_sset,
    spine_inclusion,
    standard_simplex,
    truncate,
)
from ssetkit.delta import MonotoneMap


def test_family_sizes():
    assert len(GeneratingFamily("left_horns", 2).members()) == 3   # (1,0),(2,0),(2,1)
    assert len(GeneratingFamily("right_horns", 2).members()) == 3
    assert len(GeneratingFamily("inner_horns", 2).members()) == 1
    assert len(GeneratingFamily("all_horns", 2).members()) == 5
    assert len(GeneratingFamily("boundaries", 2).members()) == 3


def test_iso_has_rlp_for_everything():
    X = standard_simplex(2)
    for kind in ("left", "right", "inner", "kan", "trivial"):
        assert classify_fibration(identity_map(X), kind, 2).is_yes


def test_point_projection_from_interval():
    # Δ[1] -> Δ[0] has RLP against Λ⁰[1] ⊂ Δ[1] (fill with degenerate edges)
    p = terminal_map(standard_simplex(1))
    fam = GeneratingFamily("custom", 1, custom=[
        Member("horn[1,0]", horn_inclusion(1, 0), 1)
    ])
    assert has_rlp(p, fam).is_yes


def test_horn_to_point_fails_boundary():
    # Λ¹[2] -> Δ[0] vs ∂Δ[1] ⊂ Δ[1]: vertices (0, 2) admit no connecting edge
    X = horn_inclusion(2, 1).source
    p = terminal_map(X)
    fam = GeneratingFamily("custom", 1, custom=[
        Member("boundary[1]", boundary_inclusion(1), 1)
    ])
    v = has_rlp(p, fam)
    assert v.is_no
    assert replay_rlp(p, fam, v)


def test_interval_not_left_fibrant_over_point():
    p = terminal_map(standard_simplex(1))
    v = classify_fibration(p, "left", 2)
    assert v.is_no
    # the witness is a horn problem at Λ⁰[2] or Λ⁰[1]... with no filler
    assert "problem" in v.witness


def test_slice_projection_is_left_fibration():
    # (Δ[2])_{0/} -> Δ[2] is a left fibration (bounded check at 3)
    B = standard_simplex(2)
    S = slice_sset(B, B.gen_ref("0"), "under")
    assert classify_fibration(S.projection, "left", 3).is_yes


def test_slice_projection_over_is_right_fibration():
    B = standard_simplex(2)
    S = slice_sset(B, B.gen_ref("2"), "over")
    assert classify_fibration(S.projection, "right", 3).is_yes


def test_simplices_are_quasi_categories():
    for n in range(4):
        assert is_quasi_category(standard_simplex(n)).is_yes


def test_horn_is_not_quasi_category():
    v = is_quasi_category(horn_inclusion(2, 1).source, bound=2)
    assert v.is_no


def test_interval_skeleton_quasi():
    # sk₂J is not a quasi-category at bound 3 (missing 3-cells over inner horns)
    v = is_quasi_category(interval_skeleton(2), bound=3)
    assert v.is_no


def test_kan_check_on_discrete():
    two = coproduct(standard_simplex(0), standard_simplex(0)).sset
    assert is_kan(two, bound=2).is_yes


def test_monotonicity_of_no():
    p = terminal_map(standard_simplex(1))
    v2 = classify_fibration(p, "left", 2)
    v3 = classify_fibration(p, "left", 3)
    assert v2.is_no and v3.is_no


def test_truncation_guard():
    X = truncate(standard_simplex(2), 1)
    with pytest.raises(TruncationError):
        classify_fibration(terminal_map(X), "left", 2)


def test_factorization_identity():
    u = identity_map(standard_simplex(1))
    fact = bounded_factorization(u, GeneratingFamily("left_horns", 2))
    assert fact.saturated and fact.cells == 0
    assert compose_maps(fact.right_part, fact.left_part) == u


def test_factorization_initial_vertex():
    # {0} ⊂ Δ[1] is itself a left-horn cell; saturation stays small and the
    # right part is a left fibration
    D1 = standard_simplex(1)
    u = SimplicialMap(standard_simplex(0), D1, {"0": D1.gen_ref("0")})
    fact = bounded_factorization(u, GeneratingFamily("left_horns", 2))
    assert fact.saturated
    assert compose_maps(fact.right_part, fact.left_part) == u
    assert classify_fibration(fact.right_part, "left", 2).is_yes


def test_factorization_terminal_vertex_empty_fiber():
    # {1} ⊂ Δ[1]: saturation adds no cell over vertex 0
    D1 = standard_simplex(1)
    u = SimplicialMap(standard_simplex(0), D1, {"0": D1.gen_ref("1")})
    fact = bounded_factorization(u, GeneratingFamily("left_horns", 2))
    assert fact.saturated
    fib = fiber(fact.right_part, D1.gen_ref("0"))
    assert fib.sset.gen_count() == 0


def test_factorization_budget():
    D2 = standard_simplex(2)
    u = SimplicialMap(standard_simplex(0), D2, {"0": D2.gen_ref("0")})
    fact = bounded_factorization(u, GeneratingFamily("left_horns", 2), max_cells=1)
    assert fact.status == "budget_exhausted"
    assert compose_maps(fact.right_part, fact.left_part) == u


def test_right_resolution_point():
    B = standard_simplex(0)
    res = right_resolution(B, B.gen_ref("0"))
    assert is_isomorphic(res.rb, standard_simplex(0)) is not None
    assert res.verdict.is_yes


def test_right_resolution_simplex():
    B = standard_simplex(2)
    res = right_resolution(B, B.gen_ref("2"))
    assert is_isomorphic(res.rb, standard_simplex(2)) is not None
    assert compose_maps(res.projection, res.inclusion).assignment["0"] == B.gen_ref("2")


def test_right_resolution_interval_at_zero():
    B = standard_simplex(1)
    res = right_resolution(B, B.gen_ref("0"))
    assert is_isomorphic(res.rb, standard_simplex(0)) is not None


def test_right_resolution_non_quasi_base():
    # Λ¹[2] is not a quasi-category; the factorization fallback must engage
    B = horn_inclusion(2, 1).source
    res = right_resolution(B, B.gen_ref("0"), dim_bound=2)
    assert res.verdict.is_yes or res.verdict.is_inconclusive
    if res.verdict.is_yes:
        assert classify_fibration(res.projection, "right", 2).is_yes


def test_replay_yes():
    B = standard_simplex(1)
    S = slice_sset(B, B.gen_ref("0"), "under")
    fam = GeneratingFamily("left_horns", 2)
    v = has_rlp(S.projection, fam)
    assert v.is_yes
    assert replay_rlp(S.projection, fam, v)
