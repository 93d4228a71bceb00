"""Homological oracles: normalized chains, integral Smith normal form
homology, mapping cones, and bounded fundamental-group checks.

All arithmetic is exact over the integers (Python's arbitrary-precision
ints); there is no floating point anywhere.  Homology of a t-truncated
object is trusted only in degrees <= t - 1, tracked by ``valid_range``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .sset import SimplicialMap, SimplicialSet
from .verdict import Verdict, inconclusive, no, yes

Matrix = list[list[int]]


def _zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def _identity(n: int) -> Matrix:
    m = _zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def mat_mul(A: Matrix, B: Matrix) -> Matrix:
    rows, inner, cols = len(A), len(B), len(B[0]) if B else 0
    out = _zeros(rows, cols)
    for i in range(rows):
        Ai = A[i]
        Oi = out[i]
        for k in range(inner):
            a = Ai[k]
            if a:
                Bk = B[k]
                for j in range(cols):
                    if Bk[j]:
                        Oi[j] += a * Bk[j]
    return out


@dataclass
class SmithForm:
    U: Matrix
    D: Matrix
    V: Matrix
    det_u: int
    det_v: int

    @property
    def divisors(self) -> list[int]:
        return [self.D[i][i] for i in range(min(len(self.D), len(self.D[0]) if self.D else 0))
                if self.D[i][i] != 0]

    @property
    def rank(self) -> int:
        return len(self.divisors)


def smith_normal_form(A: Matrix, verify: bool = True) -> SmithForm:
    """U·A·V = D with U, V unimodular and D diagonal with divisibility.

    The determinants of U and V are tracked through the elementary
    operations (always ±1) and the decomposition identity is re-multiplied
    as a consistency check.
    """
    rows = len(A)
    cols = len(A[0]) if rows else 0
    D = [list(r) for r in A]
    U = _identity(rows)
    V = _identity(cols)
    det_u = 1
    det_v = 1

    def row_swap(i, j):
        nonlocal det_u
        if i != j:
            D[i], D[j] = D[j], D[i]
            U[i], U[j] = U[j], U[i]
            det_u = -det_u

    def col_swap(i, j):
        nonlocal det_v
        if i != j:
            for r in D:
                r[i], r[j] = r[j], r[i]
            for r in V:
                r[i], r[j] = r[j], r[i]
            det_v = -det_v

    def row_add(dst, src, c):
        Dd, Ds = D[dst], D[src]
        for k in range(cols):
            Dd[k] += c * Ds[k]
        Ud, Us = U[dst], U[src]
        for k in range(rows):
            Ud[k] += c * Us[k]

    def col_add(dst, src, c):
        for r in D:
            r[dst] += c * r[src]
        for r in V:
            r[dst] += c * r[src]

    def row_negate(i):
        nonlocal det_u
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]
        det_u = -det_u

    t = 0
    limit = min(rows, cols)
    while t < limit:
        # find the smallest nonzero entry in the remaining block
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                v = D[i][j]
                if v and (best is None or abs(v) < abs(D[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])
        if D[t][t] < 0:
            row_negate(t)
        clean = True
        for i in range(t + 1, rows):
            if D[i][t]:
                row_add(i, t, -(D[i][t] // D[t][t]))
                if D[i][t]:
                    clean = False
        for j in range(t + 1, cols):
            if D[t][j]:
                col_add(j, t, -(D[t][j] // D[t][t]))
                if D[t][j]:
                    clean = False
        if not clean:
            continue
        # enforce divisibility: fold any non-multiple into the pivot block
        offender = None
        for i in range(t + 1, rows):
            for j in range(t + 1, cols):
                if D[i][j] % D[t][t] != 0:
                    offender = i
                    break
            if offender is not None:
                break
        if offender is not None:
            row_add(t, offender, 1)
            continue
        t += 1
    if verify:
        if abs(det_u) != 1 or abs(det_v) != 1:
            raise ArithmeticError("unimodularity lost")
        if mat_mul(mat_mul(U, A), V) != D:
            raise ArithmeticError("Smith decomposition does not multiply back")
    return SmithForm(U, D, V, det_u, det_v)


def rank_of(A: Matrix) -> int:
    if not A or not A[0]:
        return 0
    return smith_normal_form(A, verify=False).rank


# -- chain complexes ---------------------------------------------------------


@dataclass
class ChainComplex:
    ranks: list[int]                 # rank in degrees 0..D
    boundaries: dict[int, Matrix]    # n -> matrix of ∂_n: C_n -> C_{n-1}, n >= 1
    basis: list[list[str]] = field(default_factory=list)

    def __post_init__(self):
        for n in sorted(self.boundaries):
            if n + 1 in self.boundaries:
                prod = mat_mul(self.boundaries[n], self.boundaries[n + 1])
                if any(any(row) for row in prod):
                    raise ArithmeticError(f"∂∂ != 0 between degrees {n + 1} and {n - 1}")

    def top_degree(self) -> int:
        return len(self.ranks) - 1

    def boundary(self, n: int) -> Matrix:
        if 1 <= n <= self.top_degree():
            return self.boundaries[n]
        rows = self.ranks[n - 1] if 0 <= n - 1 <= self.top_degree() else 0
        cols = self.ranks[n] if 0 <= n <= self.top_degree() else 0
        return _zeros(rows, cols)


def normalized_chains(X: SimplicialSet, max_dim: Optional[int] = None) -> ChainComplex:
    """Basis = nondegenerate generators; boundary = alternating face sum with
    degenerate terms dropped."""
    top = X.dim if max_dim is None else min(max_dim, X.dim)
    if X.truncation is not None:
        top = min(top, X.truncation)
    top = max(top, -1)
    basis = [list(X.gens.get(d, ())) for d in range(top + 1)]
    index = [{g: i for i, g in enumerate(level)} for level in basis]
    ranks = [len(level) for level in basis]
    boundaries: dict[int, Matrix] = {}
    for n in range(1, top + 1):
        M = _zeros(ranks[n - 1], ranks[n])
        for j, g in enumerate(basis[n]):
            for i in range(n + 1):
                ref = X.faces[g][i]
                if ref.is_nondegenerate():
                    M[index[n - 1][ref.gen]][j] += (-1) ** i
        boundaries[n] = M
    return ChainComplex(ranks, boundaries, basis)


@dataclass
class HomologyReport:
    betti: dict[int, int]
    torsion: dict[int, list[int]]
    valid_range: tuple[int, int]     # inclusive degree range that is trusted

    def group(self, n: int) -> tuple[int, list[int]]:
        return self.betti.get(n, 0), self.torsion.get(n, [])

    def is_trivial_in(self, n: int) -> bool:
        b, t = self.group(n)
        return b == 0 and not t

    def trusted(self, n: int) -> bool:
        return self.valid_range[0] <= n <= self.valid_range[1]

    def describe(self):
        return {
            "betti": dict(sorted(self.betti.items())),
            "torsion": {k: v for k, v in sorted(self.torsion.items())},
            "valid_range": list(self.valid_range),
        }


def homology_of_complex(C: ChainComplex, max_degree: int) -> tuple[dict, dict]:
    betti = {}
    torsion = {}
    for n in range(max_degree + 1):
        if n > C.top_degree():
            betti[n] = 0
            torsion[n] = []
            continue
        d_n = C.boundary(n)
        d_next = C.boundary(n + 1)
        snf_next = smith_normal_form(d_next) if d_next and d_next[0] else None
        rank_next = snf_next.rank if snf_next else 0
        rank_n = rank_of(d_n) if n >= 1 else 0
        betti[n] = C.ranks[n] - rank_n - rank_next
        torsion[n] = sorted(
            d for d in (snf_next.divisors if snf_next else []) if abs(d) > 1
        )
    return betti, torsion


def homology(X: SimplicialSet, max_degree: int) -> HomologyReport:
    """Integral homology via Smith normal form, with truncation bookkeeping."""
    if X.truncation is not None and max_degree > X.truncation - 1:
        valid_top = X.truncation - 1
    else:
        valid_top = max_degree
    C = normalized_chains(X, max_dim=max_degree + 1)
    betti, torsion = homology_of_complex(C, max_degree)
    return HomologyReport(betti, torsion, (0, valid_top))


def chain_map_matrices(f: SimplicialMap, top: int) -> dict[int, Matrix]:
    """The induced map on normalized chains (degenerate images contribute 0)."""
    X, Y = f.source, f.target
    out = {}
    for n in range(top + 1):
        xs = list(X.gens.get(n, ()))
        ys = {g: i for i, g in enumerate(Y.gens.get(n, ()))}
        M = _zeros(len(ys), len(xs))
        for j, g in enumerate(xs):
            img = f.assignment[g]
            if img.is_nondegenerate():
                M[ys[img.gen]][j] = 1
        out[n] = M
    return out


def mapping_cone(f: SimplicialMap, top: int) -> ChainComplex:
    """cone(f)_n = C_{n-1}(X) ⊕ C_n(Y), ∂(x, y) = (-∂x, ∂y - f(x))."""
    CX = normalized_chains(f.source, max_dim=top)
    CY = normalized_chains(f.target, max_dim=top)
    fmat = chain_map_matrices(f, top)

    def rank_x(n):
        return CX.ranks[n] if 0 <= n <= CX.top_degree() else 0

    def rank_y(n):
        return CY.ranks[n] if 0 <= n <= CY.top_degree() else 0

    ranks = [rank_x(n - 1) + rank_y(n) for n in range(top + 1)]
    boundaries: dict[int, Matrix] = {}
    for n in range(1, top + 1):
        M = _zeros(ranks[n - 1], ranks[n])
        x_rows = rank_x(n - 2)
        dX = CX.boundary(n - 1) if n - 1 >= 1 else None
        fm = fmat.get(n - 1)
        for j in range(rank_x(n - 1)):
            if dX is not None:
                for i in range(x_rows):
                    M[i][j] = -dX[i][j]
            for i in range(rank_y(n - 1)):
                M[x_rows + i][j] = -fm[i][j]
        dY = CY.boundary(n)
        for j in range(rank_y(n)):
            for i in range(rank_y(n - 1)):
                M[x_rows + i][rank_x(n - 1) + j] = dY[i][j]
        boundaries[n] = M
    return ChainComplex(ranks, boundaries)


def induces_homology_iso(f: SimplicialMap, max_degree: int) -> Verdict:
    """Mapping-cone vanishing in degrees <= max_degree + 1 certifies that f
    is a homology isomorphism through max_degree (a necessary condition for
    a weak homotopy equivalence)."""
    tX = f.source.truncation
    tY = f.target.truncation
    verified_through = max_degree
    if tX is not None:
        verified_through = min(verified_through, tX - 1)
    if tY is not None:
        verified_through = min(verified_through, tY - 2)
    top = verified_through + 2
    cone = mapping_cone(f, top)
    betti, torsion = homology_of_complex(cone, verified_through + 1)
    for n in range(verified_through + 2):
        if betti.get(n, 0) != 0 or torsion.get(n):
            return no({"degree": n, "betti": betti.get(n, 0),
                       "torsion": torsion.get(n, [])},
                      verified_through=verified_through)
    return yes({"cone_trivial_through": verified_through + 1},
               verified_through=verified_through)


# -- pi0 and the edge-path group ----------------------------------------------


def pi0(X: SimplicialSet) -> dict[str, str]:
    """Vertex -> component representative, via nondegenerate edges."""
    parent = {v: v for v in X.gens.get(0, ())}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in X.gens.get(1, ()):
        d0, d1 = X.faces[e][0].gen, X.faces[e][1].gen
        ra, rb = find(d0), find(d1)
        if ra != rb:
            lo, hi = sorted((ra, rb))
            parent[hi] = lo
    return {v: find(v) for v in parent}


def pi0_count(X: SimplicialSet) -> int:
    return len(set(pi0(X).values()))


def pi0_comparison(f: SimplicialMap) -> Verdict:
    """Bijectivity of the induced map on path components (exact)."""
    cx = pi0(f.source)
    cy = pi0(f.target)
    image = {}
    for v, comp in cx.items():
        target_comp = cy[f.assignment[v].gen]
        if comp in image and image[comp] != target_comp:
            # cannot happen: components map consistently
            return no({"reason": "inconsistent component image"})
        image[comp] = target_comp
    xs = set(cx.values())
    ys = set(cy.values())
    if len(set(image.values())) != len(xs):
        return no({"reason": "pi0 not injective"})
    if set(image.values()) != ys:
        return no({"reason": "pi0 not surjective",
                   "missed": sorted(ys - set(image.values()))})
    return yes({"components": len(ys)})


def fundamental_group_presentation(X: SimplicialSet):
    """Generators and relators of the edge-path group of a connected X.

    Generators: nondegenerate edges not in a spanning tree.  Relators: one
    word (d₀σ)(d₂σ)(d₁σ)⁻¹ per nondegenerate 2-simplex, with tree and
    degenerate edges deleted.
    """
    vertices = list(X.gens.get(0, ()))
    edges = list(X.gens.get(1, ()))
    adjacency: dict[str, list[tuple[str, str]]] = {v: [] for v in vertices}
    for e in edges:
        tgt, src = X.faces[e][0].gen, X.faces[e][1].gen
        adjacency[src].append((tgt, e))
        adjacency[tgt].append((src, e))
    tree: set[str] = set()
    seen = {vertices[0]} if vertices else set()
    queue = list(seen)
    while queue:
        v = queue.pop(0)
        for (w, e) in adjacency[v]:
            if w not in seen:
                seen.add(w)
                tree.add(e)
                queue.append(w)
    if len(seen) != len(vertices):
        raise ValueError("fundamental group needs a connected complex")
    gens = [e for e in edges if e not in tree]
    relators = []
    for t in X.gens.get(2, ()):
        d0, d1, d2 = X.faces[t]
        word = []
        for ref, sign in ((d2, 1), (d0, 1), (d1, -1)):
            if ref.is_nondegenerate() and ref.gen not in tree:
                word.append((ref.gen, sign))
        if word:
            relators.append(word)
    return gens, relators


def coset_enumeration(generators: list[str], relators: list[list[tuple[str, int]]],
                      max_cosets: int = 10000) -> Optional[int]:
    """Todd-Coxeter enumeration of the trivial subgroup; returns the group
    order if the table closes within the budget, else None."""
    if not generators:
        return 1
    syms = []
    for g in generators:
        syms.append((g, 1))
        syms.append((g, -1))
    table: list[dict] = [{}]
    parent = [0]
    merged: list[int] = []

    def find(c):
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def define(c, s):
        table.append({})
        parent.append(len(table) - 1)
        nc = len(table) - 1
        table[c][s] = nc
        table[nc][(s[0], -s[1])] = c
        return nc

    def coincide(a, b):
        queue = [(a, b)]
        while queue:
            x, y = queue.pop()
            x, y = find(x), find(y)
            if x == y:
                continue
            if y < x:
                x, y = y, x
            parent[y] = x
            for s, dst in list(table[y].items()):
                dst = find(dst)
                cur = table[x].get(s)
                if cur is None:
                    table[x][s] = dst
                    table[dst][(s[0], -s[1])] = x
                else:
                    queue.append((find(cur), dst))
            table[y] = {}

    def live():
        return [c for c in range(len(table)) if find(c) == c]

    def scan(c, relator) -> bool:
        """Trace a relator at a coset; returns True if progress was made."""
        word = [(g, s) for (g, s) in relator]
        f, fi = find(c), 0
        while fi < len(word):
            nxt = table[f].get(word[fi])
            if nxt is None:
                break
            f, fi = find(nxt), fi + 1
        b, bi = find(c), len(word)
        while bi > fi:
            g, s = word[bi - 1]
            nxt = table[b].get((g, -s))
            if nxt is None:
                break
            b, bi = find(nxt), bi - 1
        if fi == bi:
            if f != b:
                coincide(f, b)
                return True
            return False
        if fi == bi - 1:
            g, s = word[fi]
            table[f][(g, s)] = b
            table[b][(g, -s)] = f
            return True
        return False

    while True:
        progress = True
        while progress:
            progress = False
            for c in live():
                if find(c) != c:
                    continue
                for rel in relators:
                    if scan(c, rel):
                        progress = True
        hole = None
        for c in live():
            for s in syms:
                if s not in table[c]:
                    hole = (c, s)
                    break
            if hole:
                break
        if hole is None:
            return len(live())
        if len(table) >= max_cosets:
            return None
        define(*hole)


def pi1_trivial(X: SimplicialSet, max_cosets: int = 10000) -> Verdict:
    """Bounded triviality check for the edge-path group of a connected X."""
    if X.gens.get(0) is None:
        return no({"reason": "empty"})
    if pi0_count(X) != 1:
        return no({"reason": "not connected"})
    if X.truncation is not None and X.truncation < 2:
        return inconclusive({"reason": "needs 2-truncated data"})
    gens, relators = fundamental_group_presentation(X)
    if not gens:
        return yes({"reason": "free rank 0"})
    # cheap abelian obstruction first
    h1 = homology(X, 1)
    if not h1.is_trivial_in(1):
        return no({"reason": "nontrivial H1", "H1": [h1.betti[1], h1.torsion[1]]})
    order = coset_enumeration(gens, relators, max_cosets=max_cosets)
    if order is None:
        return inconclusive({"reason": "coset budget exhausted"},
                            max_cosets=max_cosets)
    if order == 1:
        return yes({"cosets": 1}, max_cosets=max_cosets)
    return no({"group_order": order}, max_cosets=max_cosets)


def is_weakly_contractible(X: SimplicialSet, max_degree: Optional[int] = None,
                           max_cosets: int = 10000) -> Verdict:
    """Necessary-condition contractibility oracle: nonempty, connected,
    trivial bounded π₁, and vanishing reduced homology in the valid range."""
    if X.gen_count() == 0:
        return no({"reason": "empty"})
    if pi0_count(X) != 1:
        return no({"reason": "disconnected", "pi0": pi0_count(X)})
    if max_degree is None:
        max_degree = max(X.dim, 1)
    report = homology(X, max_degree)
    top = min(max_degree, report.valid_range[1])
    for n in range(1, top + 1):
        if not report.is_trivial_in(n):
            return no({"degree": n, "group": list(report.group(n))},
                      homology_through=top)
    p1 = pi1_trivial(X, max_cosets=max_cosets)
    if p1.is_no:
        return no({"pi1": p1.witness}, homology_through=top)
    if p1.is_inconclusive:
        return inconclusive({"pi1": p1.witness}, homology_through=top)
    return yes({"homology_through": top}, homology_through=top,
               max_cosets=max_cosets)
