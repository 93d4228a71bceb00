"""Finite simplicial sets presented by nondegenerate generators.

A simplicial set is stored as its nondegenerate generators together with a
face table; an arbitrary simplex is a pair (generator, surjection) -- its
Eilenberg-Zilber normal form, which is the single normal form used
everywhere.  Operators act by composing on the surjection side and pushing
the injective part through the face table.

Truncation is a first-class attribute: a simplicial set carrying
``truncation = t`` has presheaf data valid on dimensions <= t only, and every
operation computes the truncation of its output as the minimum admissible
level.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Optional

from .delta import (
    MonotoneMap,
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


class SsetError(Exception):
    pass


class ValidationError(SsetError):
    pass


class TruncationError(SsetError):
    pass


class SimplexRef(NamedTuple):
    """EZ normal form of a simplex: a generator and a degeneracy operator.

    ``op`` is a surjection [m] ->> [k] where k is the generator's dimension;
    the ref denotes an m-simplex.  (gen, identity) is the generator itself.
    """

    gen: str
    op: MonotoneMap

    @property
    def dim(self) -> int:
        return self.op.dom

    def is_nondegenerate(self) -> bool:
        return self.op.is_identity()

    def key(self):
        return (self.gen, self.op.values)


def _sorted_unique(names: Iterable[str]) -> list[str]:
    out = list(names)
    if len(set(out)) != len(out):
        raise ValidationError("duplicate generator names")
    return out


class SimplicialSet:
    """A finite (possibly truncated) simplicial set."""

    def __init__(
        self,
        gens: dict[int, list[str]],
        faces: dict[str, tuple[SimplexRef, ...]],
        truncation: Optional[int] = None,
        check: bool = True,
    ):
        self.gens: dict[int, tuple[str, ...]] = {
            d: tuple(_sorted_unique(names)) for d, names in sorted(gens.items()) if names
        }
        self.faces = dict(faces)
        self.truncation = truncation
        self.dim_of: dict[str, int] = {}
        for d, names in self.gens.items():
            if d < 0:
                raise ValidationError("negative dimension")
            if truncation is not None and d > truncation:
                raise ValidationError(f"generator above truncation {truncation}")
            for name in names:
                if name in self.dim_of:
                    raise ValidationError(f"generator name {name!r} reused across dimensions")
                self.dim_of[name] = d
        self._gen_index = {
            name: i for names in self.gens.values() for i, name in enumerate(names)
        }
        self._act_cache: dict = {}
        self._mono_cache: dict = {}
        self._simplices_cache: dict[int, tuple[SimplexRef, ...]] = {}
        self._face_index_cache: dict[int, dict] = {}
        self._hash = None
        if check:
            self._validate()

    # -- basic structure ---------------------------------------------------

    @property
    def dim(self) -> int:
        return max(self.gens, default=-1)

    def generators(self) -> Iterable[tuple[int, str]]:
        for d in sorted(self.gens):
            for name in self.gens[d]:
                yield d, name

    def gen_count(self) -> int:
        return sum(len(v) for v in self.gens.values())

    def gen_ref(self, name: str) -> SimplexRef:
        return SimplexRef(name, identity(self.dim_of[name]))

    def has_gen(self, name: str) -> bool:
        return name in self.dim_of

    def effective_truncation(self) -> Optional[int]:
        return self.truncation

    def _require_dim(self, d: int):
        if self.truncation is not None and d > self.truncation:
            raise TruncationError(
                f"dimension {d} above truncation {self.truncation}"
            )

    def _validate(self):
        for name, frefs in self.faces.items():
            d = self.dim_of.get(name)
            if d is None:
                raise ValidationError(f"face table mentions unknown generator {name!r}")
            if d == 0:
                raise ValidationError("vertices have no faces")
            if len(frefs) != d + 1:
                raise ValidationError(f"generator {name!r} needs {d + 1} faces")
            for ref in frefs:
                if ref.gen not in self.dim_of:
                    raise ValidationError(
                        f"face of {name!r} refers to missing generator {ref.gen!r}"
                    )
                if not ref.op.is_surjective():
                    raise ValidationError(f"face ref of {name!r} has non-surjective op")
                if ref.op.cod != self.dim_of[ref.gen] or ref.dim != d - 1:
                    raise ValidationError(f"face ref of {name!r} has wrong dimensions")
        for d, names in self.gens.items():
            for name in names:
                if d >= 1 and name not in self.faces:
                    raise ValidationError(f"generator {name!r} missing from face table")
        # simplicial identity d_i d_j = d_{j-1} d_i for i < j
        for d, names in self.gens.items():
            if d < 2:
                continue
            for name in names:
                for j in range(1, d + 1):
                    for i in range(j):
                        left = self.act(self.faces[name][j], coface(d - 1, i))
                        right = self.act(self.faces[name][i], coface(d - 1, j - 1))
                        if left != right:
                            raise ValidationError(
                                f"face compatibility fails on {name!r} at (i,j)=({i},{j})"
                            )

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialSet)
            and self.truncation == other.truncation
            and self.gens == other.gens
            and self.faces == other.faces
        )

    def __hash__(self):
        if self._hash is None:
            data = (
                self.truncation,
                tuple(sorted(self.gens.items())),
                tuple(sorted((g, tuple(r.key() for r in refs)) for g, refs in self.faces.items())),
            )
            self._hash = hash(data)
        return self._hash

    def __repr__(self):
        counts = {d: len(v) for d, v in self.gens.items()}
        t = "" if self.truncation is None else f", trunc={self.truncation}"
        return f"SimplicialSet({counts}{t})"

    # -- operator action ---------------------------------------------------

    def _mono_eval(self, gen: str, mono: MonotoneMap) -> SimplexRef:
        """Evaluate an injective operator on a generator via the face table."""
        key = (gen, mono)
        hit = self._mono_cache.get(key)
        if hit is not None:
            return hit
        if mono.is_identity():
            out = SimplexRef(gen, mono)
        else:
            missing = max(set(range(mono.cod + 1)) - set(mono.values))
            rest = MonotoneMap(
                mono.cod - 1,
                tuple(v if v < missing else v - 1 for v in mono.values),
            )
            out = self.act(self.faces[gen][missing], rest)
        self._mono_cache[key] = out
        return out

    def act(self, ref: SimplexRef, u: MonotoneMap) -> SimplexRef:
        """The contravariant action: u
        applied to an m-simplex along u: [m'] -> [m]."""
        if u.cod != ref.dim:
            raise ValueError("operator/simplex dimension mismatch")
        key = (ref, u)
        hit = self._act_cache.get(key)
        if hit is not None:
            return hit
        total = compose(ref.op, u)
        epi, mono = epi_mono_factor(total)
        inner = self._mono_eval(ref.gen, mono)
        out = inner if epi.is_identity() else SimplexRef(inner.gen, compose(inner.op, epi))
        self._act_cache[key] = out
        return out

    def face(self, ref: SimplexRef, i: int) -> SimplexRef:
        return self.act(ref, coface(ref.dim, i))

    def degeneracy(self, ref: SimplexRef, i: int) -> SimplexRef:
        return SimplexRef(ref.gen, compose(ref.op, codegeneracy(ref.dim, i)))

    def vertex(self, ref: SimplexRef, i: int) -> SimplexRef:
        return self.act(ref, MonotoneMap(ref.dim, (i,)))

    def simplices(self, d: int) -> tuple[SimplexRef, ...]:
        """All d-simplices (degenerate included), in canonical order."""
        if d < 0:
            return ()
        self._require_dim(d)
        hit = self._simplices_cache.get(d)
        if hit is not None:
            return hit
        out = []
        for k in sorted(self.gens):
            if k > d:
                break
            for name in self.gens[k]:
                for op in all_surjections(d, k):
                    out.append(SimplexRef(name, op))
        result = tuple(out)
        self._simplices_cache[d] = result
        return result

    def face_index(self, d: int) -> dict:
        """Index of d-simplices by their full face tuple (d >= 1)."""
        hit = self._face_index_cache.get(d)
        if hit is not None:
            return hit
        index: dict = {}
        for ref in self.simplices(d):
            key = tuple(self.face(ref, i) for i in range(d + 1))
            index.setdefault(key, []).append(ref)
        self._face_index_cache[d] = index
        return index

    def count_simplices(self, d: int) -> int:
        return len(self.simplices(d))


# -- simplicial maps -------------------------------------------------------


class SimplicialMap:
    """A map of simplicial sets, stored generator-wise."""

    def __init__(
        self,
        source: SimplicialSet,
        target: SimplicialSet,
        assignment: dict[str, SimplexRef],
        check: bool = True,
    ):
        self.source = source
        self.target = target
        self.assignment = dict(assignment)
        self._apply_cache: dict = {}
        if check:
            self._validate()

    def _validate(self):
        for d, name in self.source.generators():
            ref = self.assignment.get(name)
            if ref is None:
                raise ValidationError(f"no assignment for generator {name!r}")
            if ref.dim != d:
                raise ValidationError(f"assignment of {name!r} has wrong dimension")
            if ref.gen not in self.target.dim_of:
                raise ValidationError(f"assignment of {name!r} hits unknown generator")
            if ref.op.cod != self.target.dim_of[ref.gen]:
                raise ValidationError(f"assignment of {name!r} is ill-formed")
        for d, name in self.source.generators():
            if d == 0:
                continue
            img = self.assignment[name]
            for i in range(d + 1):
                if self.apply(self.source.faces[name][i]) != self.target.face(img, i):
                    raise ValidationError(
                        f"map does not commute with face {i} of generator {name!r}"
                    )

    def apply(self, ref: SimplexRef) -> SimplexRef:
        hit = self._apply_cache.get(ref)
        if hit is not None:
            return hit
        out = self.target.act(self.assignment[ref.gen], ref.op)
        self._apply_cache[ref] = out
        return out

    def __eq__(self, other):
        return (
            isinstance(other, SimplicialMap)
            and self.source == other.source
            and self.target == other.target
            and self.assignment == other.assignment
        )

    def __hash__(self):
        return hash((self.source, self.target, tuple(sorted(
            (g, r.key()) for g, r in self.assignment.items()))))

    def __repr__(self):
        return f"SimplicialMap({self.source!r} -> {self.target!r})"

    def is_mono(self) -> bool:
        """Monomorphism test: nondegenerate simplices go injectively to
        nondegenerate simplices (this is equivalent to levelwise injectivity)."""
        seen = set()
        for _, name in self.source.generators():
            ref = self.assignment[name]
            if not ref.is_nondegenerate():
                return False
            if ref.gen in seen:
                return False
            seen.add(ref.gen)
        return True

    def is_isomorphism(self) -> bool:
        if not self.is_mono():
            return False
        for d in set(self.source.gens) | set(self.target.gens):
            if len(self.source.gens.get(d, ())) != len(self.target.gens.get(d, ())):
                return False
        return self.source.truncation == self.target.truncation

    def inverse(self) -> "SimplicialMap":
        if not self.is_isomorphism():
            raise ValidationError("not an isomorphism")
        back = {self.assignment[name].gen: SimplexRef(name, identity(d))
                for d, name in self.source.generators()}
        return SimplicialMap(self.target, self.source, back, check=False)


def identity_map(X: SimplicialSet) -> SimplicialMap:
    return SimplicialMap(X, X, {name: X.gen_ref(name) for _, name in X.generators()},
                         check=False)


def compose_maps(g: SimplicialMap, f: SimplicialMap) -> SimplicialMap:
    if f.target != g.source:
        raise ValidationError("maps not composable")
    return SimplicialMap(
        f.source, g.target,
        {name: g.apply(ref) for name, ref in f.assignment.items()},
        check=False,
    )


def constant_map(X: SimplicialSet, Y: SimplicialSet, vertex: SimplexRef) -> SimplicialMap:
    """The map collapsing X to a vertex of Y."""
    assignment = {}
    for d, name in X.generators():
        op = MonotoneMap(0, tuple(0 for _ in range(d + 1)))
        assignment[name] = Y.act(vertex, op)
    return SimplicialMap(X, Y, assignment, check=False)


# -- the pool constructor --------------------------------------------------


@dataclass
class PoolResult:
    sset: SimplicialSet
    normal: dict            # (dim, key) -> SimplexRef
    key_of_gen: dict        # generator name -> (dim, key)

    def ref_of(self, d: int, key) -> SimplexRef:
        return self.normal[(d, key)]


def build_from_pool(
    max_dim: int,
    elements: Callable[[int], Iterable],
    face: Callable[[int, object, int], object],
    degeneracy: Callable[[int, object, int], object],
    truncation: Optional[int] = None,
    namer: Optional[Callable[[int, int, object], str]] = None,
    check: bool = False,
) -> PoolResult:
    """Classify the nondegenerate elements of an explicit simplex enumeration.

    ``elements(d)`` lists every d-simplex (degenerate included) as a hashable
    key; keys must be closed under ``face``.  A key z is degenerate exactly
    when z == s_i(d_i z) for some i, and its normal form is computed through
    that face.  The result is the presented simplicial set together with the
    normalization map key -> SimplexRef.
    """
    if namer is None:
        namer = lambda d, i, key: f"s{d}_{i}"
    gens: dict[int, list[str]] = {}
    faces_out: dict[str, tuple[SimplexRef, ...]] = {}
    normal: dict = {}
    key_of_gen: dict = {}
    for d in range(max_dim + 1):
        fresh = []
        for key in elements(d):
            if (d, key) in normal:
                continue
            ref = None
            if d > 0:
                for i in range(d):
                    fk = face(d, key, i)
                    if degeneracy(d - 1, fk, i) == key:
                        g, eta = normal[(d - 1, fk)]
                        ref = SimplexRef(g, compose(eta, codegeneracy(d - 1, i)))
                        break
            if ref is None:
                name = namer(d, len(gens.setdefault(d, [])), key)
                gens[d].append(name)
                key_of_gen[name] = (d, key)
                ref = SimplexRef(name, identity(d))
                fresh.append((name, key))
            normal[(d, key)] = ref
        for name, key in fresh:
            if d >= 1:
                faces_out[name] = tuple(
                    normal[(d - 1, face(d, key, i))] for i in range(d + 1)
                )
    sset = SimplicialSet(gens, faces_out, truncation=truncation, check=check)
    return PoolResult(sset, normal, key_of_gen)


# -- standard objects ------------------------------------------------------


def _subset_name(vertices: tuple[int, ...]) -> str:
    return ",".join(str(v) for v in vertices)


def _simplex_gens(n: int, keep: Callable[[tuple[int, ...]], bool]):
    from itertools import combinations

    gens: dict[int, list[str]] = {}
    faces: dict[str, tuple[SimplexRef, ...]] = {}
    for k in range(n + 1):
        names = []
        for verts in combinations(range(n + 1), k + 1):
            if not keep(verts):
                continue
            names.append(_subset_name(verts))
            if k >= 1:
                frefs = []
                for i in range(k + 1):
                    sub = verts[:i] + verts[i + 1:]
                    frefs.append(SimplexRef(_subset_name(sub), identity(k - 1)))
                faces[_subset_name(verts)] = tuple(frefs)
        if names:
            gens[k] = names
    return gens, faces


_SIMPLEX_CACHE: dict = {}


def standard_simplex(n: int) -> SimplicialSet:
    if n < 0:
        raise ValueError("n must be >= 0")
    hit = _SIMPLEX_CACHE.get(n)
    if hit is None:
        gens, faces = _simplex_gens(n, lambda v: True)
        hit = SimplicialSet(gens, faces, check=False)
        _SIMPLEX_CACHE[n] = hit
    return hit


def empty_sset() -> SimplicialSet:
    return SimplicialSet({}, {})


def subcomplex_inclusion(X: SimplicialSet, names: Iterable[str]) -> SimplicialMap:
    """The inclusion of the subcomplex spanned by the given generators."""
    wanted = set(names)
    for name in wanted:
        d = X.dim_of[name]
        if d >= 1:
            for ref in X.faces[name]:
                if ref.gen not in wanted:
                    raise ValidationError(
                        f"generators not face-closed: {name!r} needs {ref.gen!r}"
                    )
    gens = {d: [g for g in gl if g in wanted] for d, gl in X.gens.items()}
    faces = {g: X.faces[g] for g in wanted if X.dim_of[g] >= 1}
    sub = SimplicialSet(gens, faces, truncation=X.truncation, check=False)
    return SimplicialMap(sub, X, {g: X.gen_ref(g) for g in wanted}, check=False)


_HORN_CACHE: dict = {}


def _all_subsets(n: int):
    from itertools import combinations

    for k in range(n + 1):
        yield k, list(combinations(range(n + 1), k + 1))


def boundary_inclusion(n: int) -> SimplicialMap:
    """The inclusion of the boundary of the n-simplex (n >= 0; the boundary
    of a point is empty)."""
    key = ("boundary", n)
    if key not in _HORN_CACHE:
        simplex = standard_simplex(n)
        if n == 0:
            _HORN_CACHE[key] = SimplicialMap(empty_sset(), simplex, {}, check=False)
        else:
            full = tuple(range(n + 1))
            names = [_subset_name(v) for _, vs in _all_subsets(n) for v in vs if v != full]
            _HORN_CACHE[key] = subcomplex_inclusion(simplex, names)
    return _HORN_CACHE[key]


def generalized_horn_inclusion(n: int, S: frozenset) -> SimplicialMap:
    """The union of the faces skipping the vertices outside S, inside Δ[n].

    Requires S a proper nonempty subset of [n]; for the class of inclusions
    used by the lifting theory one further restricts to S ⊆ [n-1].
    """
    S = frozenset(S)
    if not S or not S < set(range(n + 1)):
        raise ValueError("S must be a proper nonempty subset of {0,..,n}")
    key = ("ghorn", n, tuple(sorted(S)))
    if key not in _HORN_CACHE:
        simplex = standard_simplex(n)
        names = []
        for k, subsets in _all_subsets(n):
            for verts in subsets:
                outside = set(range(n + 1)) - set(verts)
                if not outside <= S:
                    names.append(_subset_name(verts))
        _HORN_CACHE[key] = subcomplex_inclusion(simplex, names)
    return _HORN_CACHE[key]


def horn_inclusion(n: int, k: int) -> SimplicialMap:
    if not (0 <= k <= n and n >= 1):
        raise ValueError(f"horn requires 0 <= k <= n, n >= 1; got n={n}, k={k}")
    return generalized_horn_inclusion(n, frozenset([k]))


def spine_inclusion(n: int) -> SimplicialMap:
    """The chain of edges 01, 12, ..., (n-1)n inside Δ[n]."""
    simplex = standard_simplex(n)
    names = [_subset_name((i,)) for i in range(n + 1)]
    names += [_subset_name((i, i + 1)) for i in range(n)]
    return subcomplex_inclusion(simplex, names)


def _collapse_word(word: tuple[str, ...]) -> tuple[tuple[str, ...], MonotoneMap]:
    """Strip adjacent repeats from a vertex word; returns the EZ surjection."""
    values = [0]
    collapsed = [word[0]]
    for ch in word[1:]:
        if ch != collapsed[-1]:
            collapsed.append(ch)
            values.append(values[-1] + 1)
        else:
            values.append(values[-1])
    return tuple(collapsed), MonotoneMap(len(collapsed) - 1, tuple(values))


def interval_skeleton(t: int) -> SimplicialSet:
    """The t-skeleton of the nerve of the free-living isomorphism.

    Nondegenerate k-simplices are the two alternating vertex words of length
    k + 1; this is the localization interval used by quasi-localization.
    """
    if t < 0:
        raise ValueError("t must be >= 0")
    gens: dict[int, list[str]] = {}
    faces: dict[str, tuple[SimplexRef, ...]] = {}

    def name(word):
        return "j" + "".join(word)

    for k in range(t + 1):
        words = []
        for start in ("0", "1"):
            w = tuple((("0", "1")[(int(start) + i) % 2]) for i in range(k + 1))
            words.append(w)
        gens[k] = [name(w) for w in words]
        if k >= 1:
            for w in words:
                frefs = []
                for i in range(k + 1):
                    sub = w[:i] + w[i + 1:]
                    collapsed, op = _collapse_word(sub)
                    frefs.append(SimplexRef(name(collapsed), op))
                faces[name(w)] = tuple(frefs)
    return SimplicialSet(gens, faces, check=False)


def interval_inclusion(t: int) -> SimplicialMap:
    """Δ[1] -> sk_t J as the string 01."""
    J = interval_skeleton(t)
    D1 = standard_simplex(1)
    assignment = {
        "0": SimplexRef("j0", identity(0)),
        "1": SimplexRef("j1", identity(0)),
        "0,1": SimplexRef("j01", identity(1)),
    }
    return SimplicialMap(D1, J, assignment, check=False)


def simplex_map(alpha: MonotoneMap) -> SimplicialMap:
    """The simplicial map Δ[m] -> Δ[n] classified by a monotone map."""
    src = standard_simplex(alpha.dom)
    tgt = standard_simplex(alpha.cod)
    assignment = {}
    for d, name in src.generators():
        verts = tuple(int(v) for v in name.split(","))
        image = tuple(alpha(v) for v in verts)
        collapsed, op = _collapse_word(tuple(str(v) for v in image))
        assignment[name] = SimplexRef(_subset_name(tuple(int(v) for v in collapsed)), op)
    return SimplicialMap(src, tgt, assignment, check=False)


def classifying_map(B: SimplicialSet, ref: SimplexRef) -> SimplicialMap:
    """The map Δ[n] -> B picking out an n-simplex."""
    n = ref.dim
    src = standard_simplex(n)
    assignment = {}
    for d, name in src.generators():
        verts = tuple(int(v) for v in name.split(","))
        assignment[name] = B.act(ref, MonotoneMap(n, verts))
    return SimplicialMap(src, B, assignment, check=False)


def top_ref(f: SimplicialMap) -> SimplexRef:
    """The simplex classified by a map out of a standard simplex."""
    n = f.source.dim
    return f.assignment[_subset_name(tuple(range(n + 1)))]


# -- products, pullbacks, pushouts, joins, slices, opposites ---------------


def _normalize_pair(pool: PoolResult, X: SimplicialSet, Y: SimplicialSet,
                    rx: SimplexRef, ry: SimplexRef) -> SimplexRef:
    """Normal form of a pair simplex; reduces through component faces when the
    dimension exceeds the constructed range (where every pair is degenerate)."""
    d = rx.dim
    hit = pool.normal.get((d, (rx, ry)))
    if hit is not None:
        return hit
    for i in range(d):
        fx, fy = X.face(rx, i), Y.face(ry, i)
        if X.degeneracy(fx, i) == rx and Y.degeneracy(fy, i) == ry:
            inner = _normalize_pair(pool, X, Y, fx, fy)
            return SimplexRef(inner.gen, compose(inner.op, codegeneracy(d - 1, i)))
    raise TruncationError(f"pair simplex of dimension {d} outside constructed range")


@dataclass
class ProductResult:
    sset: SimplicialSet
    pool: PoolResult
    proj1: SimplicialMap
    proj2: SimplicialMap
    left: SimplicialSet = None
    right: SimplicialSet = None

    def pair_ref(self, rx: SimplexRef, ry: SimplexRef) -> SimplexRef:
        return _normalize_pair(self.pool, self.left, self.right, rx, ry)


_PRODUCT_CACHE: dict = {}


def _min_trunc(*ts) -> Optional[int]:
    vals = [t for t in ts if t is not None]
    return min(vals) if vals else None


def product(X: SimplicialSet, Y: SimplicialSet) -> ProductResult:
    key = (X, Y)
    hit = _PRODUCT_CACHE.get(key)
    if hit is not None:
        return hit
    trunc = _min_trunc(X.truncation, Y.truncation)
    top = X.dim + Y.dim
    if trunc is not None:
        top = min(top, trunc)
    top = max(top, 0) if X.dim >= 0 and Y.dim >= 0 else -1

    def elements(d):
        return [(rx, ry) for rx in X.simplices(d) for ry in Y.simplices(d)]

    def face(d, key, i):
        rx, ry = key
        return (X.face(rx, i), Y.face(ry, i))

    def degeneracy(d, key, i):
        rx, ry = key
        return (X.degeneracy(rx, i), Y.degeneracy(ry, i))

    pool = build_from_pool(top, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"p{d}_{i}")
    P = pool.sset
    proj1 = SimplicialMap(P, X, {g: pool.key_of_gen[g][1][0] for _, g in P.generators()},
                          check=False)
    proj2 = SimplicialMap(P, Y, {g: pool.key_of_gen[g][1][1] for _, g in P.generators()},
                          check=False)
    result = ProductResult(P, pool, proj1, proj2, X, Y)
    _PRODUCT_CACHE[key] = result
    return result


def product_map(
    f: SimplicialMap, g: SimplicialMap, src: ProductResult, tgt: ProductResult
) -> SimplicialMap:
    assignment = {}
    for _, name in src.sset.generators():
        _, (rx, ry) = src.pool.key_of_gen[name]
        assignment[name] = tgt.pair_ref(f.apply(rx), g.apply(ry))
    return SimplicialMap(src.sset, tgt.sset, assignment, check=False)


@dataclass
class PullbackResult:
    sset: SimplicialSet
    pool: PoolResult
    proj1: SimplicialMap
    proj2: SimplicialMap
    left: SimplicialSet = None
    right: SimplicialSet = None

    def pair_ref(self, rx: SimplexRef, ry: SimplexRef) -> SimplexRef:
        return _normalize_pair(self.pool, self.left, self.right, rx, ry)

    def mediate(self, u: SimplicialMap, v: SimplicialMap) -> SimplicialMap:
        """The unique map into the pullback from a commuting cone (u, v)."""
        assignment = {}
        for d, name in u.source.generators():
            assignment[name] = self.pair_ref(u.assignment[name], v.assignment[name])
        return SimplicialMap(u.source, self.sset, assignment, check=False)


def fiber_product(
    f: SimplicialMap, g: SimplicialMap, max_dim: Optional[int] = None
) -> PullbackResult:
    """The pullback X ×_B Y of f: X -> B and g: Y -> B.

    ``max_dim`` caps the construction; the result is then marked truncated at
    that level.
    """
    if f.target != g.target:
        raise ValidationError("pullback legs must share a target")
    X, Y = f.source, g.source
    natural = X.dim + Y.dim if X.dim >= 0 and Y.dim >= 0 else -1
    trunc = _min_trunc(X.truncation, Y.truncation)
    top = natural if trunc is None else min(natural, trunc)
    if max_dim is not None and max_dim < top:
        top = max_dim
        trunc = _min_trunc(trunc, max_dim)

    def elements(d):
        by_image: dict = {}
        for ry in Y.simplices(d):
            by_image.setdefault(g.apply(ry), []).append(ry)
        out = []
        for rx in X.simplices(d):
            for ry in by_image.get(f.apply(rx), ()):
                out.append((rx, ry))
        return out

    def face(d, key, i):
        rx, ry = key
        return (X.face(rx, i), Y.face(ry, i))

    def degeneracy(d, key, i):
        rx, ry = key
        return (X.degeneracy(rx, i), Y.degeneracy(ry, i))

    pool = build_from_pool(top, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"pb{d}_{i}")
    P = pool.sset
    proj1 = SimplicialMap(P, X, {g_: pool.key_of_gen[g_][1][0] for _, g_ in P.generators()},
                          check=False)
    proj2 = SimplicialMap(P, Y, {g_: pool.key_of_gen[g_][1][1] for _, g_ in P.generators()},
                          check=False)
    return PullbackResult(P, pool, proj1, proj2, X, Y)


def fiber(p: SimplicialMap, vertex: SimplexRef, max_dim: Optional[int] = None) -> PullbackResult:
    """The fiber of p: X -> B over a vertex, as the pullback along Δ[0] -> B."""
    b = classifying_map(p.target, vertex)
    return fiber_product(p, b, max_dim=max_dim)


@dataclass
class PushoutResult:
    sset: SimplicialSet
    pool: PoolResult
    inj1: SimplicialMap   # from B
    inj2: SimplicialMap   # from C

    def mediate(self, u: SimplicialMap, v: SimplicialMap,
                check: bool = True) -> SimplicialMap:
        """The map out of the pushout induced by a commuting cocone (u, v)."""
        assignment = {}
        for _, name in self.sset.generators():
            _, rep = self.pool.key_of_gen[name]
            tag, ref = rep
            assignment[name] = u.apply(ref) if tag == "b" else v.apply(ref)
        return SimplicialMap(self.sset, u.target, assignment, check=check)


class _UnionFind:
    def __init__(self):
        self.parent: dict = {}

    def find(self, x):
        parent = self.parent
        root = x
        while parent.get(root, root) != root:
            root = parent[root]
        while parent.get(x, x) != x:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic representative: lexicographically smaller key
            lo, hi = sorted((ra, rb), key=_tag_sort_key)
            self.parent[hi] = lo


def _tag_sort_key(tagged):
    tag, ref = tagged
    return (tag, ref.gen, ref.op.values)


def pushout(f: SimplicialMap, g: SimplicialMap) -> PushoutResult:
    """The pushout B ⊔_A C of f: A -> B and g: A -> C.

    Computed degreewise by union-find on simplices; generators are
    re-classified afterwards since a nondegenerate simplex may become
    degenerate in the quotient.
    """
    if f.source != g.source:
        raise ValidationError("pushout legs must share a source")
    A, B, C = f.source, f.target, g.target
    top = max(B.dim, C.dim)
    trunc = _min_trunc(A.truncation, B.truncation, C.truncation)
    if trunc is not None:
        top = min(top, trunc)
    uf = _UnionFind()
    for d in range(top + 1):
        for ra in A.simplices(d):
            uf.union(("b", f.apply(ra)), ("c", g.apply(ra)))

    def elements(d):
        seen = set()
        out = []
        for tag, Z in (("b", B), ("c", C)):
            for rz in Z.simplices(d):
                rep = uf.find((tag, rz))
                if rep not in seen:
                    seen.add(rep)
                    out.append(rep)
        return out

    def face(d, rep, i):
        tag, ref = rep
        Z = B if tag == "b" else C
        return uf.find((tag, Z.face(ref, i)))

    def degeneracy(d, rep, i):
        tag, ref = rep
        Z = B if tag == "b" else C
        return uf.find((tag, Z.degeneracy(ref, i)))

    pool = build_from_pool(top, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"po{d}_{i}")
    P = pool.sset
    inj1 = SimplicialMap(B, P, {name: pool.ref_of(d, uf.find(("b", B.gen_ref(name))))
                                for d, name in B.generators()}, check=False)
    inj2 = SimplicialMap(C, P, {name: pool.ref_of(d, uf.find(("c", C.gen_ref(name))))
                                for d, name in C.generators()}, check=False)
    return PushoutResult(P, pool, inj1, inj2)


def coproduct(X: SimplicialSet, Y: SimplicialSet) -> PushoutResult:
    e = empty_sset()
    return pushout(SimplicialMap(e, X, {}, check=False),
                   SimplicialMap(e, Y, {}, check=False))


@dataclass
class JoinResult:
    sset: SimplicialSet
    pool: PoolResult
    incl1: SimplicialMap
    incl2: SimplicialMap


def join(X: SimplicialSet, Y: SimplicialSet) -> JoinResult:
    """The join, with (X ⋆ Y)_n = X_n ⊔ Y_n ⊔ ⊔_{p+q=n-1} X_p × Y_q."""
    top = X.dim + Y.dim + 1
    trunc = _min_trunc(X.truncation, Y.truncation)
    if trunc is not None:
        top = min(top, trunc)
    top = max(top, X.dim, Y.dim)

    def elements(d):
        out = [("l", rx) for rx in (X.simplices(d) if X.dim >= 0 else ())]
        out += [("r", ry) for ry in (Y.simplices(d) if Y.dim >= 0 else ())]
        for p in range(d):
            q = d - 1 - p
            if X.dim >= 0 and Y.dim >= 0:
                out += [("j", rx, ry) for rx in X.simplices(p) for ry in Y.simplices(q)]
        return out

    def face(d, key, i):
        if key[0] == "l":
            return ("l", X.face(key[1], i))
        if key[0] == "r":
            return ("r", Y.face(key[1], i))
        _, rx, ry = key
        p, q = rx.dim, ry.dim
        if i <= p:
            if p == 0:
                return ("r", ry)
            return ("j", X.face(rx, i), ry)
        if q == 0:
            return ("l", rx)
        return ("j", rx, Y.face(ry, i - p - 1))

    def degeneracy(d, key, i):
        if key[0] == "l":
            return ("l", X.degeneracy(key[1], i))
        if key[0] == "r":
            return ("r", Y.degeneracy(key[1], i))
        _, rx, ry = key
        p = rx.dim
        if i <= p:
            return ("j", X.degeneracy(rx, i), ry)
        return ("j", rx, Y.degeneracy(ry, i - p - 1))

    pool = build_from_pool(top, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"jn{d}_{i}")
    P = pool.sset
    incl1 = SimplicialMap(X, P, {name: pool.ref_of(d, ("l", X.gen_ref(name)))
                                 for d, name in X.generators()}, check=False)
    incl2 = SimplicialMap(Y, P, {name: pool.ref_of(d, ("r", Y.gen_ref(name)))
                                 for d, name in Y.generators()}, check=False)
    return JoinResult(P, pool, incl1, incl2)


@dataclass
class SliceResult:
    sset: SimplicialSet
    pool: PoolResult
    projection: SimplicialMap


def slice_sset(B: SimplicialSet, b: SimplexRef, side: str) -> SliceResult:
    """The upper slice B_{b/} (side="under") or lower slice B_{/b} ("over").

    An n-simplex of B_{b/} is an (n+1)-simplex of B whose initial vertex is
    b; dually for B_{/b} with the final vertex.  The projection forgets the
    cone vertex.
    """
    if b.dim != 0:
        raise ValidationError("slice basepoint must be a vertex")
    if side not in ("under", "over"):
        raise ValueError("side must be 'under' or 'over'")
    top = max(B.dim, 0)
    trunc = None if B.truncation is None else max(B.truncation - 1, 0)
    if trunc is not None:
        top = min(top, trunc)
    under = side == "under"

    def elements(d):
        pos = 0 if under else d + 1
        return [z for z in B.simplices(d + 1)
                if B.act(z, MonotoneMap(d + 1, (pos,))) == b]

    def face(d, z, i):
        return B.face(z, i + 1 if under else i)

    def degeneracy(d, z, i):
        return B.degeneracy(z, i + 1 if under else i)

    pool = build_from_pool(top, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"sl{d}_{i}")
    S = pool.sset
    proj = {}
    for d, name in S.generators():
        _, z = pool.key_of_gen[name]
        op = coface(d + 1, 0) if under else coface(d + 1, d + 1)
        proj[name] = B.act(z, op)
    projection = SimplicialMap(S, B, proj, check=False)
    return SliceResult(S, pool, projection)


def opposite(X: SimplicialSet) -> SimplicialSet:
    """Order reversal; generator names are preserved, so it is an involution."""
    faces = {}
    for d, name in X.generators():
        if d == 0:
            continue
        faces[name] = tuple(
            SimplexRef(r.gen, reverse_conjugate(r.op))
            for r in reversed(X.faces[name])
        )
    return SimplicialSet({d: list(v) for d, v in X.gens.items()}, faces,
                         truncation=X.truncation, check=False)


def opposite_map(f: SimplicialMap) -> SimplicialMap:
    return SimplicialMap(
        opposite(f.source), opposite(f.target),
        {g: SimplexRef(r.gen, reverse_conjugate(r.op)) for g, r in f.assignment.items()},
        check=False,
    )


# -- map enumeration -------------------------------------------------------


@dataclass
class HomEnumeration:
    maps: list[SimplicialMap]
    limit_hit: bool

    def __len__(self):
        return len(self.maps)


def _check_hom_truncations(K: SimplicialSet, X: SimplicialSet):
    if X.truncation is not None and K.dim > X.truncation:
        raise TruncationError(
            f"cannot map a {K.dim}-dimensional source into a set truncated at {X.truncation}"
        )


def hom_enumerate(
    K: SimplicialSet,
    X: SimplicialSet,
    limit: Optional[int] = None,
    over: Optional[tuple[SimplicialMap, SimplicialMap]] = None,
) -> HomEnumeration:
    """All simplicial maps K -> X by backtracking, in a deterministic order.

    Generators are assigned in decreasing dimension; assigning a generator
    forces values on its whole face closure (derived through sections of the
    degeneracy operators), which is where the pruning comes from.  With
    ``over = (q, r)`` only maps f with r∘f = q are produced.
    """
    _check_hom_truncations(K, X)
    q = r = None
    if over is not None:
        q, r = over
    order = [name for d, name in sorted(K.generators(), key=lambda t: (-t[0], t[1]))]
    if not order:
        return HomEnumeration([SimplicialMap(K, X, {}, check=False)], False)

    val: dict[str, SimplexRef] = {}
    out: list[SimplicialMap] = []
    limit_hit = False
    r_cache: dict = {}

    def r_apply(ref):
        hit = r_cache.get(ref)
        if hit is None:
            hit = r.apply(ref)
            r_cache[ref] = hit
        return hit

    def assign(name: str, ref: SimplexRef, trail: list) -> bool:
        val[name] = ref
        trail.append(name)
        d = K.dim_of[name]
        if q is not None and r_apply(ref) != q.assignment[name]:
            return False
        for i in (range(d + 1) if d >= 1 else ()):
            fsub = K.faces[name][i]
            zi = X.face(ref, i)
            h, eta = fsub.gen, fsub.op
            if h in val:
                if X.act(val[h], eta) != zi:
                    return False
            else:
                if eta.is_identity():
                    vh = zi
                else:
                    vh = X.act(zi, monotone_section(eta))
                    if X.act(vh, eta) != zi:
                        return False
                if not assign(h, vh, trail):
                    return False
        return True

    def candidates(name: str):
        d = K.dim_of[name]
        required = None
        if d >= 1:
            required = []
            complete = True
            for i in range(d + 1):
                fsub = K.faces[name][i]
                if fsub.gen in val:
                    required.append(X.act(val[fsub.gen], fsub.op))
                else:
                    required.append(None)
                    complete = False
            if complete:
                for z in X.face_index(d).get(tuple(required), ()):
                    yield z
                return
        for z in X.simplices(d):
            if required is not None:
                ok = True
                for i, req in enumerate(required):
                    if req is not None and X.face(z, i) != req:
                        ok = False
                        break
                if not ok:
                    continue
            yield z

    def search(pos: int):
        nonlocal limit_hit
        while pos < len(order) and order[pos] in val:
            pos += 1
        if pos == len(order):
            out.append(SimplicialMap(K, X, dict(val), check=False))
            if limit is not None and len(out) >= limit:
                limit_hit = True
            return
        name = order[pos]
        for z in candidates(name):
            trail: list = []
            if assign(name, z, trail):
                search(pos + 1)
            for t in trail:
                del val[t]
            if limit_hit:
                return

    search(0)
    return HomEnumeration(out, limit_hit)


def is_isomorphic(X: SimplicialSet, Y: SimplicialSet) -> Optional[SimplicialMap]:
    """Search for an isomorphism; None if there is none."""
    if X.truncation != Y.truncation:
        return None
    for d in set(X.gens) | set(Y.gens):
        if len(X.gens.get(d, ())) != len(Y.gens.get(d, ())):
            return None
    for f in hom_enumerate(X, Y).maps:
        if f.is_isomorphism():
            return f
    return None


# -- mapping spaces --------------------------------------------------------


def _encode_map(f: SimplicialMap) -> tuple:
    return tuple(sorted((g, r.key()) for g, r in f.assignment.items()))


@dataclass
class MappingSpaceResult:
    sset: SimplicialSet
    pool: PoolResult
    maps: dict        # (dim, key) -> SimplicialMap  (the underlying map of each simplex)

    def map_of(self, d: int, key) -> SimplicialMap:
        return self.maps[(d, key)]

    def gen_map(self, name: str) -> SimplicialMap:
        return self.maps[self.pool.key_of_gen[name]]


def _mapping_pool(
    K: SimplicialSet,
    trunc: int,
    enumerate_level: Callable[[int, ProductResult], list[SimplicialMap]],
) -> MappingSpaceResult:
    """Shared machinery: levelwise maps out of K × Δ[n] with operator action
    by precomposition."""
    products = {n: product(K, standard_simplex(n)) for n in range(trunc + 1)}
    id_K = identity_map(K)
    level_maps: dict[int, dict] = {}
    by_key: dict = {}

    def level(n: int) -> dict:
        if n not in level_maps:
            found = {}
            for f in enumerate_level(n, products[n]):
                found[_encode_map(f)] = f
            level_maps[n] = found
        return level_maps[n]

    def act_key(n_from: int, key, alpha: MonotoneMap):
        f = by_key[(n_from, key)]
        smap = simplex_map(alpha)
        induced = product_map(id_K, smap, products[alpha.dom], products[n_from])
        g = compose_maps(f, induced)
        enc = _encode_map(g)
        by_key[(alpha.dom, enc)] = g
        return enc

    def elements(d):
        out = []
        for enc, f in level(d).items():
            by_key[(d, enc)] = f
            out.append(enc)
        return out

    def face(d, key, i):
        return act_key(d, key, coface(d, i))

    def degeneracy(d, key, i):
        return act_key(d, key, codegeneracy(d, i))

    pool = build_from_pool(trunc, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"m{d}_{i}")
    maps = {(d, key): by_key[(d, key)] for (d, key) in pool.normal}
    return MappingSpaceResult(pool.sset, pool, maps)


def mapping_space(K: SimplicialSet, X: SimplicialSet, trunc: int) -> MappingSpaceResult:
    """map(K, X) up to level trunc: n-simplices are maps K × Δ[n] -> X."""
    _check_hom_truncations(K, X)

    def enumerate_level(n, prod):
        return hom_enumerate(prod.sset, X).maps

    return _mapping_pool(K, trunc, enumerate_level)


def relative_mapping_space(
    p: SimplicialMap, q: SimplicialMap, trunc: int
) -> MappingSpaceResult:
    """map_B(X, Y) for X --p--> B <--q-- Y: the fiber of map(X, Y) -> map(X, B)
    at the structure map, computed directly as maps over B."""
    if p.target != q.target:
        raise ValidationError("relative mapping space needs a common base")
    X, Y = p.source, q.source

    def enumerate_level(n, prod):
        over_src = compose_maps(p, prod.proj1)
        return hom_enumerate(prod.sset, Y, over=(over_src, q)).maps

    return _mapping_pool(X, trunc, enumerate_level)


@dataclass
class CotensorResult:
    sset: SimplicialSet
    pool: PoolResult
    structure: SimplicialMap      # to the base B
    maps: dict                    # (dim, key) -> (SimplicialMap, SimplexRef of B)


def cotensor(q: SimplicialMap, K: SimplicialSet, trunc: int) -> CotensorResult:
    """The cotensor Y^K over B for Y --q--> B: an n-simplex is a pair
    (b ∈ B_n, f: K × Δ[n] -> Y) with q∘f the composite K × Δ[n] -> Δ[n] -> B
    classified by b."""
    Y, B = q.source, q.target
    _check_hom_truncations(K, Y)
    products = {n: product(K, standard_simplex(n)) for n in range(trunc + 1)}
    id_K = identity_map(K)
    by_key: dict = {}

    def level(n):
        prod = products[n]
        found = {}
        for b in B.simplices(n):
            over_src = compose_maps(classifying_map(B, b), prod.proj2)
            for f in hom_enumerate(prod.sset, Y, over=(over_src, q)).maps:
                found[(_encode_map(f), b.key())] = (f, b)
        return found

    def act_key(n_from, key, alpha):
        f, b = by_key[(n_from, key)]
        smap = simplex_map(alpha)
        induced = product_map(id_K, smap, products[alpha.dom], products[n_from])
        g = compose_maps(f, induced)
        nb = B.act(b, alpha)
        enc = (_encode_map(g), nb.key())
        by_key[(alpha.dom, enc)] = (g, nb)
        return enc

    def elements(d):
        out = []
        for enc, pair in level(d).items():
            by_key[(d, enc)] = pair
            out.append(enc)
        return out

    def face(d, key, i):
        return act_key(d, key, coface(d, i))

    def degeneracy(d, key, i):
        return act_key(d, key, codegeneracy(d, i))

    pool = build_from_pool(trunc, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"c{d}_{i}")
    maps = {(d, key): by_key[(d, key)] for (d, key) in pool.normal}
    structure = SimplicialMap(
        pool.sset, B,
        {name: maps[pool.key_of_gen[name]][1] for _, name in pool.sset.generators()},
        check=False,
    )
    return CotensorResult(pool.sset, pool, structure, maps)


def truncate(X: SimplicialSet, t: int) -> SimplicialSet:
    """Forget all generators above level t and mark the result truncated."""
    gens = {d: list(v) for d, v in X.gens.items() if d <= t}
    faces = {g: X.faces[g] for d, names in gens.items() if d >= 1 for g in names}
    return SimplicialSet(gens, faces, truncation=t, check=False)


def initial_vertex_inclusion(n: int) -> SimplicialMap:
    """Δ[0] -> Δ[n] at the vertex 0."""
    return simplex_map(vertex_map(n, "initial"))


def final_vertex_inclusion(n: int) -> SimplicialMap:
    return simplex_map(vertex_map(n, "final"))
