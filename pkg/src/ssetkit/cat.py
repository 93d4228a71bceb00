"""Finite categories: concrete composition tables, presentations by
generators and relations, nerves, and the fundamental category.

Words are stored in application order (first arrow first).  Equality of words
in a presentation is decided by breadth-first rewriting closure bounded by
``word_budget``; a definite No is only reported when the closure was
exhausted without hitting the length cap, otherwise the answer is
Inconclusive (word problems are undecidable in general).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional

from .verdict import Verdict, inconclusive, no, yes
from .sset import SimplicialSet, SimplexRef, build_from_pool, PoolResult


class WordBudgetError(Exception):
    """Raised when a word-equality query needed by an exact construction
    comes back Inconclusive."""


class Morphism(NamedTuple):
    src: str
    tgt: str
    word: tuple[str, ...]   # generator names, first applied first


class Arrow(NamedTuple):
    name: str
    src: str
    tgt: str


@dataclass
class ConcreteCategory:
    """A finite category with a tabulated composition law."""

    objects: list[str]
    morphs: list[str]
    src: dict[str, str]
    tgt: dict[str, str]
    identities: dict[str, str]              # object -> identity morphism
    compose_table: dict[tuple[str, str], str]  # (g, f) -> g∘f

    def compose(self, g: str, f: str) -> str:
        if self.tgt[f] != self.src[g]:
            raise ValueError("morphisms not composable")
        return self.compose_table[(g, f)]

    def is_identity(self, m: str) -> bool:
        return self.identities.get(self.src[m]) == m

    def nonidentity(self) -> list[str]:
        return [m for m in self.morphs if not self.is_identity(m)]

    def hom(self, a: str, b: str) -> list[str]:
        return [m for m in self.morphs if self.src[m] == a and self.tgt[m] == b]

    def validate(self):
        for obj, i in self.identities.items():
            if self.src[i] != obj or self.tgt[i] != obj:
                raise ValueError("bad identity assignment")
        for m in self.morphs:
            if self.compose(m, self.identities[self.src[m]]) != m:
                raise ValueError(f"right unit law fails at {m}")
            if self.compose(self.identities[self.tgt[m]], m) != m:
                raise ValueError(f"left unit law fails at {m}")
        for h in self.morphs:
            for g in self.morphs:
                if self.tgt[g] != self.src[h]:
                    continue
                for f in self.morphs:
                    if self.tgt[f] != self.src[g]:
                        continue
                    if self.compose(self.compose(h, g), f) != self.compose(
                        h, self.compose(g, f)
                    ):
                        raise ValueError("associativity fails")

    def iso_classes(self) -> list[list[str]]:
        """Partition of objects by isomorphism."""
        classes: list[list[str]] = []
        placed: dict[str, int] = {}
        for a in self.objects:
            found = None
            for idx, cls in enumerate(classes):
                b = cls[0]
                if self._isomorphic_objects(a, b):
                    found = idx
                    break
            if found is None:
                classes.append([a])
            else:
                classes[found].append(a)
        return classes

    def _isomorphic_objects(self, a: str, b: str) -> bool:
        for f in self.hom(a, b):
            for g in self.hom(b, a):
                if (
                    self.compose(g, f) == self.identities[a]
                    and self.compose(f, g) == self.identities[b]
                ):
                    return True
        return a == b

    def skeleton(self) -> "ConcreteCategory":
        reps = [cls[0] for cls in self.iso_classes()]
        keep = set(reps)
        morphs = [m for m in self.morphs if self.src[m] in keep and self.tgt[m] in keep]
        return ConcreteCategory(
            reps,
            morphs,
            {m: self.src[m] for m in morphs},
            {m: self.tgt[m] for m in morphs},
            {o: self.identities[o] for o in reps},
            {
                (g, f): self.compose_table[(g, f)]
                for (g, f) in self.compose_table
                if g in morphs and f in morphs and self.compose_table[(g, f)] in morphs
            },
        )


def category_isomorphism(C: ConcreteCategory, D: ConcreteCategory) -> Optional[dict]:
    """Search for an isomorphism of categories; returns the object/morphism
    dictionary or None."""
    from itertools import permutations

    if len(C.objects) != len(D.objects) or len(C.morphs) != len(D.morphs):
        return None
    for objperm in permutations(D.objects):
        obj_map = dict(zip(C.objects, objperm))
        homs_ok = True
        hom_candidates = {}
        for a in C.objects:
            for b in C.objects:
                hc = C.hom(a, b)
                hd = D.hom(obj_map[a], obj_map[b])
                if len(hc) != len(hd):
                    homs_ok = False
                    break
                hom_candidates[(a, b)] = (hc, hd)
            if not homs_ok:
                break
        if not homs_ok:
            continue
        morph_map = {}
        pairs = sorted(hom_candidates)

        def extend(idx: int) -> bool:
            if idx == len(pairs):
                for g in C.morphs:
                    for f in C.morphs:
                        if C.tgt[f] == C.src[g]:
                            if morph_map[C.compose(g, f)] != D.compose(
                                morph_map[g], morph_map[f]
                            ):
                                return False
                return True
            a, b = pairs[idx]
            hc, hd = hom_candidates[(a, b)]
            from itertools import permutations as perms

            for assign in perms(hd):
                ok = True
                for m, im in zip(hc, assign):
                    if C.is_identity(m) != D.is_identity(im):
                        ok = False
                        break
                if not ok:
                    continue
                for m, im in zip(hc, assign):
                    morph_map[m] = im
                if extend(idx + 1):
                    return True
                for m in hc:
                    del morph_map[m]
            return False

        if extend(0):
            return {"objects": obj_map, "morphisms": dict(morph_map)}
    return None


# -- presentations -----------------------------------------------------------


@dataclass
class CategoryPresentation:
    objects: list[str]
    arrows: list[Arrow]
    relations: list[tuple[Morphism, Morphism]] = field(default_factory=list)
    word_budget: int = 20000
    max_morphisms: int = 600

    def __post_init__(self):
        self._arrow = {a.name: a for a in self.arrows}
        if len(self._arrow) != len(self.arrows):
            raise ValueError("duplicate arrow names")
        for lhs, rhs in self.relations:
            for side in (lhs, rhs):
                self._check_word(side)
            if (lhs.src, lhs.tgt) != (rhs.src, rhs.tgt):
                raise ValueError("relation sides have different endpoints")
        self._table_cache = None

    def _check_word(self, m: Morphism):
        at = m.src
        for name in m.word:
            a = self._arrow.get(name)
            if a is None:
                raise ValueError(f"unknown arrow {name!r}")
            if a.src != at:
                raise ValueError(f"word {m.word} not composable at {name!r}")
            at = a.tgt
        if at != m.tgt:
            raise ValueError(f"word {m.word} does not end at {m.tgt!r}")

    def identity(self, obj: str) -> Morphism:
        return Morphism(obj, obj, ())

    def arrow_morphism(self, name: str) -> Morphism:
        a = self._arrow[name]
        return Morphism(a.src, a.tgt, (name,))

    def compose_morphisms(self, g: Morphism, f: Morphism) -> Morphism:
        if f.tgt != g.src:
            raise ValueError("not composable")
        return Morphism(f.src, g.tgt, f.word + g.word)

    def _object_at(self, m: Morphism, pos: int) -> str:
        if pos == 0:
            return m.src
        return self._arrow[m.word[pos - 1]].tgt

    def _rewrites(self, m: Morphism):
        """All single-step rewrites of a word, in both directions."""
        for lhs, rhs in self.relations:
            for a_side, b_side in ((lhs, rhs), (rhs, lhs)):
                la = len(a_side.word)
                for i in range(len(m.word) - la + 1):
                    if m.word[i : i + la] != a_side.word:
                        continue
                    if la == 0 and self._object_at(m, i) != a_side.src:
                        continue
                    yield Morphism(
                        m.src, m.tgt, m.word[:i] + b_side.word + m.word[i + la :]
                    )

    def equal(self, m1: Morphism, m2: Morphism) -> Verdict:
        """Bounded rewriting closure from m1, searching for m2."""
        if (m1.src, m1.tgt) != (m2.src, m2.tgt):
            return no({"reason": "different endpoints"})
        if m1.word == m2.word:
            return yes({"steps": 0})
        max_rel = max((len(s.word) for r in self.relations for s in r), default=0)
        cap = max(len(m1.word), len(m2.word)) + max_rel + 2
        seen = {m1.word}
        frontier = [m1]
        pruned = False
        visited = 0
        while frontier:
            nxt = []
            for m in frontier:
                for nm in self._rewrites(m):
                    if nm.word in seen:
                        continue
                    if len(nm.word) > cap:
                        pruned = True
                        continue
                    if nm.word == m2.word:
                        return yes({"visited": visited}, word_budget=self.word_budget)
                    seen.add(nm.word)
                    visited += 1
                    if visited > self.word_budget:
                        return inconclusive(
                            {"reason": "word budget exhausted", "visited": visited},
                            word_budget=self.word_budget,
                        )
                    nxt.append(nm)
            frontier = nxt
        if pruned:
            return inconclusive(
                {"reason": "length cap reached", "cap": cap},
                word_budget=self.word_budget,
            )
        return no({"closure_size": len(seen)}, word_budget=self.word_budget)

    def morphism_table(self) -> dict[tuple[str, str], list[Morphism]]:
        """Representatives of all morphisms, by saturation over word length.

        Raises WordBudgetError if an equality query is inconclusive or the
        category exceeds ``max_morphisms`` classes.
        """
        if self._table_cache is not None:
            return self._table_cache
        table: dict[tuple[str, str], list[Morphism]] = {}
        for obj in self.objects:
            table.setdefault((obj, obj), []).append(self.identity(obj))
        fresh = [self.identity(obj) for obj in self.objects]
        total = len(self.objects)
        while fresh:
            new_fresh = []
            for rep in fresh:
                for arrow in self.arrows:
                    if arrow.src != rep.tgt:
                        continue
                    cand = self.compose_morphisms(self.arrow_morphism(arrow.name), rep)
                    known = False
                    for existing in table.get((cand.src, cand.tgt), []):
                        v = self.equal(cand, existing)
                        if v.is_yes:
                            known = True
                            break
                        if v.is_inconclusive:
                            raise WordBudgetError(
                                f"equality of {cand} and {existing} inconclusive"
                            )
                    if not known:
                        table.setdefault((cand.src, cand.tgt), []).append(cand)
                        new_fresh.append(cand)
                        total += 1
                        if total > self.max_morphisms:
                            raise WordBudgetError(
                                f"more than {self.max_morphisms} morphism classes"
                            )
            fresh = new_fresh
        self._table_cache = table
        return table

    def find_representative(self, m: Morphism) -> Morphism:
        for existing in self.morphism_table().get((m.src, m.tgt), []):
            v = self.equal(m, existing)
            if v.is_yes:
                return existing
            if v.is_inconclusive:
                raise WordBudgetError("representative lookup inconclusive")
        raise WordBudgetError(f"no representative found for {m}")

    def as_concrete(self) -> ConcreteCategory:
        """Tabulate the presented category (raises WordBudgetError if the
        word problem resists the budget)."""
        table = self.morphism_table()
        names: dict[Morphism, str] = {}
        morphs = []
        src: dict[str, str] = {}
        tgt: dict[str, str] = {}
        identities = {}
        for (a, b), reps in sorted(table.items()):
            for rep in reps:
                name = f"{a}>{b}:" + ".".join(rep.word)
                names[rep] = name
                morphs.append(name)
                src[name] = a
                tgt[name] = b
                if not rep.word:
                    identities[a] = name
        compose_table = {}
        for g_rep, g_name in names.items():
            for f_rep, f_name in names.items():
                if f_rep.tgt != g_rep.src:
                    continue
                comp = self.find_representative(self.compose_morphisms(g_rep, f_rep))
                compose_table[(g_name, f_name)] = names[comp]
        return ConcreteCategory(list(self.objects), morphs, src, tgt, identities,
                                compose_table)


def terminal_category() -> ConcreteCategory:
    return ConcreteCategory(["*"], ["id"], {"id": "*"}, {"id": "*"},
                            {"*": "id"}, {("id", "id"): "id"})


def poset_category(n: int) -> CategoryPresentation:
    """The poset [n] as a presentation (generating arrows i -> i+1)."""
    objects = [str(i) for i in range(n + 1)]
    arrows = [Arrow(f"a{i}", str(i), str(i + 1)) for i in range(n)]
    return CategoryPresentation(objects, arrows)


def free_isomorphism_category() -> CategoryPresentation:
    """The free-living isomorphism: two objects, mutually inverse arrows."""
    arrows = [Arrow("u", "0", "1"), Arrow("v", "1", "0")]
    relations = [
        (Morphism("0", "0", ("u", "v")), Morphism("0", "0", ())),
        (Morphism("1", "1", ("v", "u")), Morphism("1", "1", ())),
    ]
    return CategoryPresentation(["0", "1"], arrows, relations)


# -- nerve --------------------------------------------------------------------


@dataclass
class NerveResult:
    sset: SimplicialSet
    pool: PoolResult
    category: ConcreteCategory

    def chain_of_gen(self, name: str):
        d, key = self.pool.key_of_gen[name]
        return key if d > 0 else key[1]


def nerve(C, trunc: int) -> NerveResult:
    """The truncated nerve: k-simplices are composable k-chains of morphisms.

    Accepts a ConcreteCategory or a CategoryPresentation (the latter is
    tabulated first, which may raise WordBudgetError).  If some level below
    the truncation has no nondegenerate chains at all, the nerve is complete
    and the result is untruncated.
    """
    if isinstance(C, CategoryPresentation):
        C = C.as_concrete()
    by_source: dict[str, list[str]] = {}
    for m in C.morphs:
        by_source.setdefault(C.src[m], []).append(m)

    chains: dict[int, list] = {0: [("o", obj) for obj in C.objects]}

    def elements(d):
        if d in chains:
            return chains[d]
        out = []
        for prev in elements(d - 1):
            tail = C.tgt[prev[-1]] if d > 1 else prev[1]
            for m in by_source.get(tail, ()):
                out.append((prev + (m,)) if d > 1 else (m,))
        chains[d] = out
        return out

    def face(d, key, i):
        if d == 1:
            return ("o", C.tgt[key[0]]) if i == 0 else ("o", C.src[key[0]])
        if i == 0:
            return key[1:]
        if i == d:
            return key[:-1]
        comp = C.compose(key[i], key[i - 1])
        return key[: i - 1] + (comp,) + key[i + 1 :]

    def degeneracy(d, key, i):
        if d == 0:
            return (C.identities[key[1]],)
        obj = C.src[key[i]] if i < d else C.tgt[key[-1]]
        return key[:i] + (C.identities[obj],) + key[i:]

    pool = build_from_pool(trunc, elements, face, degeneracy, truncation=trunc,
                           namer=lambda d, i, key: f"n{d}_{i}")
    complete = any(
        not pool.sset.gens.get(L) for L in range(trunc + 1)
    )
    if complete:
        sset = SimplicialSet(
            {d: list(v) for d, v in pool.sset.gens.items()},
            pool.sset.faces, truncation=None, check=False)
        pool = PoolResult(sset, pool.normal, pool.key_of_gen)
    return NerveResult(pool.sset, pool, C)


# -- the fundamental category --------------------------------------------------


def edge_word(X: SimplicialSet, ref: SimplexRef) -> tuple[str, ...]:
    """The word of an edge in the fundamental category (degenerate = identity)."""
    return (ref.gen,) if ref.is_nondegenerate() else ()


def tau1(X: SimplicialSet, word_budget: int = 20000) -> CategoryPresentation:
    """The fundamental category: vertices, nondegenerate edges, and one
    relation (d₀σ)∘(d₂σ) = d₁σ per nondegenerate 2-simplex."""
    if X.truncation is not None and X.truncation < 2:
        raise ValueError("tau1 needs simplices up to dimension 2")
    objects = list(X.gens.get(0, ()))
    arrows = []
    for e in X.gens.get(1, ()):
        d0, d1 = X.faces[e]
        arrows.append(Arrow(e, d1.gen, d0.gen))
    relations = []
    for t in X.gens.get(2, ()):
        d0, d1, d2 = X.faces[t]
        v0 = X.vertex(X.gen_ref(t), 0).gen
        v2 = X.vertex(X.gen_ref(t), 2).gen
        lhs = Morphism(v0, v2, edge_word(X, d2) + edge_word(X, d0))
        rhs = Morphism(v0, v2, edge_word(X, d1))
        relations.append((lhs, rhs))
    return CategoryPresentation(objects, arrows, relations, word_budget=word_budget)


def is_equivalence_edge(X: SimplicialSet, edge: SimplexRef, word_budget: int = 20000) -> Verdict:
    """Whether an edge becomes invertible in the fundamental category."""
    if edge.dim != 1:
        raise ValueError("not an edge")
    if not edge.is_nondegenerate():
        return yes({"reason": "degenerate edge is an identity"})
    C = tau1(X, word_budget=word_budget)
    a = C._arrow[edge.gen].src
    b = C._arrow[edge.gen].tgt
    e = C.arrow_morphism(edge.gen)
    try:
        candidates = C.morphism_table().get((b, a), [])
    except WordBudgetError as err:
        return inconclusive({"reason": str(err)}, word_budget=word_budget)
    saw_inconclusive = False
    for g in candidates:
        left = C.equal(C.compose_morphisms(g, e), C.identity(a))
        right = C.equal(C.compose_morphisms(e, g), C.identity(b))
        if left.is_yes and right.is_yes:
            return yes({"inverse": list(g.word)}, word_budget=word_budget)
        if left.is_inconclusive or right.is_inconclusive:
            saw_inconclusive = True
    if saw_inconclusive:
        return inconclusive({"reason": "inverse search hit the word budget"},
                            word_budget=word_budget)
    return no({"reason": "no two-sided inverse among morphism classes"},
              word_budget=word_budget)


def equivalent_categories(C: CategoryPresentation, D: CategoryPresentation) -> Verdict:
    """Bounded equivalence search: compare skeletons up to isomorphism."""
    try:
        cc = C.as_concrete().skeleton()
        dd = D.as_concrete().skeleton()
    except WordBudgetError as err:
        return inconclusive({"reason": str(err)})
    iso = category_isomorphism(cc, dd)
    if iso is None:
        return no({"skeleton_sizes": [len(cc.objects), len(dd.objects)]})
    return yes({"objects": iso["objects"]})


def isomorphic_presentations(C: CategoryPresentation, D: CategoryPresentation) -> Verdict:
    try:
        cc = C.as_concrete()
        dd = D.as_concrete()
    except WordBudgetError as err:
        return inconclusive({"reason": str(err)})
    iso = category_isomorphism(cc, dd)
    return yes({"objects": iso["objects"]}) if iso else no()
