"""Arithmetic in the simplex category: monotone maps between finite ordinals.

Objects are the ordinals [n] = {0, ..., n}; a map is stored as its explicit
value sequence, never as a coface/codegeneracy word.  Words are derived on
demand (see :func:`mono_coface_indices`), which keeps composition and the
epi-mono factorization free of word-normalization issues.
"""

from __future__ import annotations

from itertools import combinations, combinations_with_replacement
from functools import lru_cache


class MonotoneMap:
    """A monotone map [dom] -> [cod], dom = len(values) - 1."""

    __slots__ = ("cod", "values", "_hash")

    def __init__(self, cod: int, values: tuple[int, ...]):
        if cod < 0 or not values:
            raise ValueError("ordinals are nonempty: need cod >= 0 and at least one value")
        if any(values[i] > values[i + 1] for i in range(len(values) - 1)):
            raise ValueError(f"values not nondecreasing: {values}")
        if values[0] < 0 or values[-1] > cod:
            raise ValueError(f"values {values} out of range [0, {cod}]")
        self.cod = cod
        self.values = tuple(values)
        self._hash = hash((cod, self.values))

    @property
    def dom(self) -> int:
        return len(self.values) - 1

    def __call__(self, i: int) -> int:
        return self.values[i]

    def __eq__(self, other):
        return (
            isinstance(other, MonotoneMap)
            and self.cod == other.cod
            and self.values == other.values
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"MonotoneMap([{self.dom}]->[{self.cod}], {self.values})"

    def is_identity(self) -> bool:
        return self.cod == self.dom and self.values == tuple(range(self.dom + 1))

    def is_injective(self) -> bool:
        return all(self.values[i] < self.values[i + 1] for i in range(self.dom))

    def is_surjective(self) -> bool:
        return set(self.values) == set(range(self.cod + 1))


def identity(n: int) -> MonotoneMap:
    return MonotoneMap(n, tuple(range(n + 1)))


def compose(g: MonotoneMap, f: MonotoneMap) -> MonotoneMap:
    """Pointwise composite g∘f for f: [m]->[n], g: [n]->[p]."""
    if f.cod != g.dom:
        raise ValueError(f"cannot compose: f.cod={f.cod} != g.dom={g.dom}")
    return MonotoneMap(g.cod, tuple(g.values[v] for v in f.values))


def coface(n: int, i: int) -> MonotoneMap:
    """The injection [n-1] -> [n] skipping i."""
    if not (0 <= i <= n) or n < 1:
        raise ValueError(f"coface index out of range: n={n}, i={i}")
    return MonotoneMap(n, tuple(j if j < i else j + 1 for j in range(n)))


def codegeneracy(n: int, i: int) -> MonotoneMap:
    """The surjection [n+1] -> [n] repeating i."""
    if not (0 <= i <= n):
        raise ValueError(f"codegeneracy index out of range: n={n}, i={i}")
    return MonotoneMap(n, tuple(j if j <= i else j - 1 for j in range(n + 2)))


def epi_mono_factor(f: MonotoneMap) -> tuple[MonotoneMap, MonotoneMap]:
    """Unique factorization f = mono ∘ epi through the image of f."""
    image = sorted(set(f.values))
    index = {v: k for k, v in enumerate(image)}
    epi = MonotoneMap(len(image) - 1, tuple(index[v] for v in f.values))
    mono = MonotoneMap(f.cod, tuple(image))
    return epi, mono


def vertex_map(n: int, which: str) -> MonotoneMap:
    """The map [0] -> [n] hitting 0 ("initial") or n ("final")."""
    if which == "initial":
        return MonotoneMap(n, (0,))
    if which == "final":
        return MonotoneMap(n, (n,))
    raise ValueError(f"which must be 'initial' or 'final', got {which!r}")


def reverse_conjugate(f: MonotoneMap) -> MonotoneMap:
    """The map i |-> cod - f(dom - i); conjugation by order reversal."""
    return MonotoneMap(f.cod, tuple(f.cod - v for v in reversed(f.values)))


def monotone_section(epi: MonotoneMap) -> MonotoneMap:
    """A monotone section of a surjection (minimum of each fiber)."""
    if not epi.is_surjective():
        raise ValueError("section requires a surjection")
    return MonotoneMap(epi.dom, tuple(epi.values.index(v) for v in range(epi.cod + 1)))


def mono_coface_indices(mono: MonotoneMap) -> list[int]:
    """Indices (top first) with mono = δ_{i_1} ∘ δ_{i_2} ∘ ... as cofaces."""
    if not mono.is_injective():
        raise ValueError("coface word requires an injection")
    out = []
    current = mono
    while not current.is_identity():
        missing = max(set(range(current.cod + 1)) - set(current.values))
        out.append(missing)
        current = MonotoneMap(
            current.cod - 1,
            tuple(v if v < missing else v - 1 for v in current.values),
        )
    return out


@lru_cache(maxsize=None)
def all_monotone(m: int, n: int) -> tuple[MonotoneMap, ...]:
    """All monotone maps [m] -> [n], lexicographic by value sequence."""
    return tuple(
        MonotoneMap(n, values)
        for values in combinations_with_replacement(range(n + 1), m + 1)
    )


@lru_cache(maxsize=None)
def all_surjections(m: int, n: int) -> tuple[MonotoneMap, ...]:
    """All monotone surjections [m] ->> [n], lexicographic.

    A surjection is determined by the m - n positions where the value repeats.
    """
    if n > m or n < 0:
        return ()
    if n == m:
        return (identity(n),)
    out = []
    # choose positions (in 1..m) at which the sequence does NOT increase
    for stays in combinations(range(1, m + 1), m - n):
        values = [0]
        for i in range(1, m + 1):
            values.append(values[-1] if i in stays else values[-1] + 1)
        out.append(MonotoneMap(n, tuple(values)))
    out.sort(key=lambda f: f.values)
    return tuple(out)
