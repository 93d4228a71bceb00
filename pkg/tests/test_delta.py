"""Simplex-category arithmetic, checked against brute-force enumeration."""

from itertools import combinations_with_replacement

import pytest

from ssetkit.delta import (
    MonotoneMap,
    all_monotone,
    all_surjections,
    codegeneracy,
    coface,
    compose,
    epi_mono_factor,
    identity,
    mono_coface_indices,
    monotone_section,
    reverse_conjugate,
    vertex_map,
)


def brute_monotone(m, n):
    """Independent enumeration of monotone maps [m] -> [n]."""
    return [MonotoneMap(n, v) for v in combinations_with_replacement(range(n + 1), m + 1)]


def test_monotone_validation():
    with pytest.raises(ValueError):
        MonotoneMap(2, (1, 0))
    with pytest.raises(ValueError):
        MonotoneMap(1, (0, 2))
    with pytest.raises(ValueError):
        MonotoneMap(1, ())


def test_compose_identity():
    f = MonotoneMap(2, (0, 2))
    assert compose(identity(2), f) == f
    assert compose(f, identity(1)) == f


def test_compose_cofaces():
    # δ₁:[1]→[2] after δ₀:[0]→[1] sends 0 to 2
    assert compose(coface(2, 1), coface(1, 0)).values == (2,)
    # σᵢ δᵢ = id
    assert compose(codegeneracy(0, 0), coface(1, 0)) == identity(0)


def test_compose_mismatch():
    with pytest.raises(ValueError):
        compose(coface(1, 0), coface(2, 0))


def test_compose_associative_exhaustive():
    maps1 = brute_monotone(1, 2)
    maps2 = brute_monotone(2, 1)
    maps3 = brute_monotone(1, 2)
    for f in maps1:       # [1] -> [2]
        for g in maps2:   # [2] -> [1]
            for h in maps3:
                assert compose(h, compose(g, f)) == compose(compose(h, g), f)


@pytest.mark.parametrize("m,n", [(0, 0), (1, 1), (2, 2), (3, 2), (2, 4)])
def test_epi_mono_factor_unique(m, n):
    for f in brute_monotone(m, n):
        epi, mono = epi_mono_factor(f)
        assert compose(mono, epi) == f
        assert epi.is_surjective()
        assert mono.is_injective()
        # uniqueness: any other (epi, mono) pair through any middle ordinal
        # composing to f must coincide
        for k in range(n + 1):
            for e in all_surjections(m, k):
                for mn in all_monotone(k, n):
                    if mn.is_injective() and compose(mn, e) == f:
                        assert (e, mn) == (epi, mono)
        # repeating on the epi yields (epi, id)
        e2, m2 = epi_mono_factor(epi)
        assert e2 == epi and m2.is_identity()


def test_epi_mono_examples():
    f = MonotoneMap(2, (0, 0, 2))
    epi, mono = epi_mono_factor(f)
    assert epi.values == (0, 0, 1)
    assert mono.values == (0, 2)
    const = MonotoneMap(1, (1, 1))
    epi, mono = epi_mono_factor(const)
    assert epi.values == (0, 0) and mono.values == (1,)


def test_vertex_map():
    assert vertex_map(3, "initial").values == (0,)
    assert vertex_map(0, "final") == identity(0)
    assert vertex_map(2, "final").values == (2,)
    with pytest.raises(ValueError):
        vertex_map(2, "middle")


def test_simplicial_identities_up_to_dim_6():
    for n in range(1, 7):
        # δⱼδᵢ = δᵢδⱼ₋₁ for i < j, as maps [n-1] -> [n+1]
        for j in range(n + 2):
            for i in range(j):
                assert compose(coface(n + 1, j), coface(n, i)) == compose(
                    coface(n + 1, i), coface(n, j - 1)
                )
        # σⱼσᵢ = σᵢσⱼ₊₁ for i <= j, as maps [n+1] -> [n-1]
        for j in range(n):
            for i in range(j + 1):
                assert compose(codegeneracy(n - 1, j), codegeneracy(n, i)) == compose(
                    codegeneracy(n - 1, i), codegeneracy(n, j + 1)
                )
        # mixed identities
        for i in range(n + 1):
            for j in range(n):
                lhs = compose(codegeneracy(n - 1, j), coface(n, i)) if n >= 1 else None
                if i < j:
                    assert lhs == compose(coface(n - 1, i), codegeneracy(n - 2, j - 1)) if n >= 2 else True
                elif i in (j, j + 1):
                    assert lhs == identity(n - 1)
                else:
                    assert lhs == compose(coface(n - 1, i - 1), codegeneracy(n - 2, j)) if n >= 2 else True


def test_all_surjections_counts():
    # surjections [m] ->> [k] are counted by C(m, k)
    from math import comb

    for m in range(6):
        for k in range(m + 1):
            assert len(all_surjections(m, k)) == comb(m, k)
    assert all_surjections(1, 2) == ()


def test_monotone_section():
    for m in range(5):
        for k in range(m + 1):
            for epi in all_surjections(m, k):
                s = monotone_section(epi)
                assert compose(epi, s) == identity(k)


def test_mono_coface_word():
    for n in range(5):
        for k in range(n + 1):
            for f in all_monotone(k, n):
                if not f.is_injective():
                    continue
                word = mono_coface_indices(f)
                acc = identity(k)
                for i in reversed(word):
                    acc = compose(coface(acc.cod + 1, i), acc)
                assert acc == f


def test_reverse_conjugate_involution():
    for f in brute_monotone(2, 3):
        assert reverse_conjugate(reverse_conjugate(f)) == f
        g = reverse_conjugate(f)
        assert all(g(i) == 3 - f(2 - i) for i in range(3))
