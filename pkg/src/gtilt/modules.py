"""Finite-dimensional modules as quiver representations.

See :mod:`gtilt.quiver` for the path/module conventions.  Spaces are
coordinate spaces ``k^{d_v}``; an arrow ``a: s -> t`` carries a
``d_t x d_s`` matrix.
"""
from __future__ import annotations

import itertools
import random
from typing import Sequence

from .exact import Matrix, column_space_basis, nullspace, rank, rref, solve
from .quiver import Automorphism, PathAlgebra


class Inconclusive(RuntimeError):
    """Randomised isomorphism search could neither find nor rule out an isomorphism."""


class Representation:
    def __init__(self, A: PathAlgebra, dims: Sequence[int], maps: Sequence[Matrix] | None = None,
                 name: str = "", check: bool = True):
        self.A = A
        self.dims = list(dims)
        Q = A.quiver
        if len(self.dims) != Q.n_vertices:
            raise ValueError("one dimension per vertex")
        if maps is None:
            maps = [Matrix.zeros(A.field, self.dims[t], self.dims[s]) for s, t in Q.arrows]
        self.maps = list(maps)
        self.name = name
        for a, (s, t) in enumerate(Q.arrows):
            m = self.maps[a]
            if (m.rows, m.cols) != (self.dims[t], self.dims[s]):
                raise ValueError(f"map for {Q.names[a]} has shape {m.rows}x{m.cols}, "
                                 f"expected {self.dims[t]}x{self.dims[s]}")
        self._path_cache: dict = {}
        if check:
            self.check_relations()

    @property
    def field(self):
        return self.A.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def __repr__(self):
        return f"Representation({self.name or '?'}, dims={self.dims})"

    def _arrow_chain(self, s: int, arrows: Sequence[int]) -> Matrix:
        m = Matrix.identity(self.field, self.dims[s])
        for a in arrows:
            m = self.maps[a] @ m
        return m

    def path_matrix(self, k: int) -> Matrix:
        """Action of basis path ``k``: ``M_source -> M_target``."""
        if k not in self._path_cache:
            s, arr = self.A.basis_paths[k]
            self._path_cache[k] = self._arrow_chain(s, arr)
        return self._path_cache[k]

    def act(self, x: Sequence, i: int, j: int) -> Matrix:
        """Right action ``v -> v x`` of ``x`` in ``e_i A e_j`` as a map ``M_i -> M_j``."""
        out = Matrix.zeros(self.field, self.dims[j], self.dims[i])
        for k in self.A.paths_between(i, j):
            c = x[k]
            if c:
                out = out + self.path_matrix(k).scale(c)
        return out

    def check_relations(self):
        for rel in self.A.relations:
            p0 = next(iter(rel))
            s = self.A.quiver.source(p0[0])
            t = self.A.quiver.target(p0[-1])
            acc = Matrix.zeros(self.field, self.dims[t], self.dims[s])
            for p, c in rel.items():
                acc = acc + self._arrow_chain(s, p).scale(c)
            if not acc.is_zero():
                raise ValueError(f"relation not satisfied by representation {self.name!r}")

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def flat(self) -> list:
        """All arrow-matrix entries, for exact equality checks."""
        return [x for m in self.maps for r in m.data for x in r]


class ModuleMap:
    def __init__(self, source: Representation, target: Representation, mats: Sequence[Matrix]):
        self.source = source
        self.target = target
        self.mats = list(mats)

    def is_homomorphism(self) -> bool:
        for a, (s, t) in enumerate(self.source.A.quiver.arrows):
            if self.target.maps[a] @ self.mats[s] != self.mats[t] @ self.source.maps[a]:
                return False
        return True

    def compose(self, other: "ModuleMap") -> "ModuleMap":
        """``self o other``."""
        return ModuleMap(other.source, self.target, [a @ b for a, b in zip(self.mats, other.mats)])

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and rank(m) == m.rows for m in self.mats)

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.mats)

    def flat(self) -> list:
        return [x for m in self.mats for r in m.data for x in r]

    def __add__(self, other):
        return ModuleMap(self.source, self.target, [a + b for a, b in zip(self.mats, other.mats)])

    def scale(self, c):
        return ModuleMap(self.source, self.target, [m.scale(c) for m in self.mats])

    @classmethod
    def zero(cls, X: Representation, Y: Representation) -> "ModuleMap":
        return cls(X, Y, [Matrix.zeros(X.field, Y.dims[v], X.dims[v]) for v in range(len(X.dims))])

    @classmethod
    def identity(cls, X: Representation) -> "ModuleMap":
        return cls(X, X, [Matrix.identity(X.field, d) for d in X.dims])


# -- standard modules -------------------------------------------------------------

def simple(A: PathAlgebra, i: int) -> Representation:
    dims = [1 if v == i else 0 for v in range(A.quiver.n_vertices)]
    return Representation(A, dims, name=f"S{i + 1}")


def projective(A: PathAlgebra, i: int) -> Representation:
    """``e_i A``: at vertex u the basis is the paths i -> u."""
    n = A.quiver.n_vertices
    dims = [len(A.paths_between(i, u)) for u in range(n)]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        alpha = A.arrow(a)
        cols = []
        for k in A.paths_between(i, s):
            prod = A.mul(A.basis_vector(k), alpha)
            cols.append(A.corner_coords(prod, i, t))
        maps.append(Matrix.from_columns(A.field, cols, dims[t]))
    return Representation(A, dims, maps, name=f"P{i + 1}", check=False)


def injective(A: PathAlgebra, i: int) -> Representation:
    """``D(A e_i)``: at vertex u the basis is dual to the paths u -> i."""
    n = A.quiver.n_vertices
    dims = [len(A.paths_between(u, i)) for u in range(n)]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        alpha = A.arrow(a)
        rows = []
        for k in A.paths_between(t, i):
            prod = A.mul(alpha, A.basis_vector(k))
            rows.append(A.corner_coords(prod, s, i))
        maps.append(Matrix(A.field, dims[t], dims[s], rows) if rows else
                    Matrix.zeros(A.field, dims[t], dims[s]))
    return Representation(A, dims, maps, name=f"I{i + 1}", check=False)


def element_map(A: PathAlgebra, x: Sequence, i: int, j: int, P_i=None, P_j=None) -> ModuleMap:
    """Left multiplication by ``x`` in ``e_j A e_i`` as a map ``P_i -> P_j``."""
    P_i = P_i or projective(A, i)
    P_j = P_j or projective(A, j)
    mats = []
    for u in range(A.quiver.n_vertices):
        cols = [A.corner_coords(A.mul(x, A.basis_vector(k)), j, u) for k in A.paths_between(i, u)]
        mats.append(Matrix.from_columns(A.field, cols, P_j.dims[u]))
    return ModuleMap(P_i, P_j, mats)


def map_element(f: ModuleMap, i: int, j: int) -> list:
    """Inverse of :func:`element_map`: image of the generator ``e_i`` of ``P_i``."""
    A = f.source.A
    col = A.paths_between(i, i).index(A.index[(i, ())])
    image = f.mats[i].column(col)
    x = A.zero_vector()
    for k, c in zip(A.paths_between(j, i), image):
        x[k] = c
    return x


def direct_sum(mods: Sequence[Representation], A: PathAlgebra | None = None) -> Representation:
    if not mods:
        if A is None:
            raise ValueError("empty direct sum needs the algebra")
        return Representation(A, [0] * A.quiver.n_vertices)
    A = mods[0].A
    n = A.quiver.n_vertices
    dims = [sum(M.dims[v] for M in mods) for v in range(n)]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        m = Matrix.zeros(A.field, dims[t], dims[s])
        ro = co = 0
        for M in mods:
            blk = M.maps[a]
            for r in range(blk.rows):
                for c in range(blk.cols):
                    m.data[ro + r][co + c] = blk.data[r][c]
            ro += M.dims[t]
            co += M.dims[s]
        maps.append(m)
    return Representation(A, dims, maps, name="+".join(M.name for M in mods), check=False)


# -- Hom spaces ---------------------------------------------------------------------

def hom_space(X: Representation, Y: Representation) -> list[ModuleMap]:
    A = X.A
    n = A.quiver.n_vertices
    offs = [0]
    for v in range(n):
        offs.append(offs[-1] + Y.dims[v] * X.dims[v])
    nvar = offs[-1]
    rows = []
    z = A.field.zero
    for a, (s, t) in enumerate(A.quiver.arrows):
        Ya, Xa = Y.maps[a], X.maps[a]
        for r in range(Y.dims[t]):
            for c in range(X.dims[s]):
                row = [z] * nvar
                # (Y_a phi_s)[r][c] = sum_k Y_a[r][k] phi_s[k][c]
                for k in range(Y.dims[s]):
                    if Ya.data[r][k]:
                        idx = offs[s] + k * X.dims[s] + c
                        row[idx] = row[idx] + Ya.data[r][k]
                # (phi_t X_a)[r][c] = sum_k phi_t[r][k] X_a[k][c]
                for k in range(X.dims[t]):
                    if Xa.data[k][c]:
                        idx = offs[t] + r * X.dims[t] + k
                        row[idx] = row[idx] - Xa.data[k][c]
                if any(row):
                    rows.append(row)
    if nvar == 0:
        return []
    N = nullspace(Matrix(A.field, len(rows), nvar, rows)) if rows else Matrix.identity(A.field, nvar)
    basis = []
    for v in N.columns():
        mats = []
        for u in range(n):
            blk = v[offs[u]:offs[u + 1]]
            mats.append(Matrix(A.field, Y.dims[u], X.dims[u],
                               [blk[r * X.dims[u]:(r + 1) * X.dims[u]] for r in range(Y.dims[u])]))
        basis.append(ModuleMap(X, Y, mats))
    return basis


def hom_dim(X: Representation, Y: Representation) -> int:
    return len(hom_space(X, Y))


def coordinates(f: ModuleMap, basis: Sequence[ModuleMap]) -> list | None:
    return coordinate_solver(basis)(f)


def coordinate_solver(basis: Sequence[ModuleMap]):
    """Reusable ``f -> coordinates of f in basis`` (``None`` outside the span).

    The basis is assumed linearly independent: one invertible k x k block of
    rows is inverted once, and every answer is checked by multiplying back."""
    if not basis:
        return lambda f: [] if f.is_zero() else None
    F = basis[0].source.field
    cols = [b.flat() for b in basis]
    n = len(cols[0])
    M = Matrix.from_columns(F, cols, n)
    rows = column_space_basis(M.transpose())
    inv = M.submatrix(rows, range(M.cols)).inverse()

    def solve_one(f: ModuleMap):
        v = f.flat()
        x = inv.apply([v[r] for r in rows])
        return x if M.apply(x) == list(v) else None
    return solve_one


# -- sub and quotient representations --------------------------------------------

def subrepresentation(X: Representation, bases: Sequence[list[list]]) -> tuple[Representation, ModuleMap]:
    """Submodule spanned per vertex by the given column vectors (assumed closed)."""
    A = X.A
    F = A.field
    dims = [len(b) for b in bases]
    Bm = [Matrix.from_columns(F, b, X.dims[v]) for v, b in enumerate(bases)]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        if dims[s] == 0 or dims[t] == 0:
            if dims[s] and not (X.maps[a] @ Bm[s]).is_zero():
                raise ValueError("subspace is not a submodule")
            maps.append(Matrix.zeros(F, dims[t], dims[s]))
            continue
        C = solve(Bm[t], X.maps[a] @ Bm[s])
        if C is None:
            raise ValueError("subspace is not a submodule")
        maps.append(C)
    S = Representation(A, dims, maps, check=False)
    return S, ModuleMap(S, X, Bm)


def quotient(X: Representation, bases: Sequence[list[list]]) -> tuple[Representation, ModuleMap]:
    A = X.A
    F = A.field
    comps, coord = [], []
    for v, b in enumerate(bases):
        d = X.dims[v]
        ident = [[F.one if r == c else F.zero for r in range(d)] for c in range(d)]
        M = Matrix.from_columns(F, list(b) + ident, d)
        piv = rref(M)[1]
        chosen = [ident[c - len(b)] for c in piv if c >= len(b)]
        comps.append(chosen)
        full = Matrix.from_columns(F, list(b) + chosen, d)
        coord.append((full.inverse() if d else full, len(b)))
    dims = [len(c) for c in comps]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        inv, nb = coord[t]
        cols = []
        for c in comps[s]:
            img = X.maps[a].apply(c)
            y = inv.apply(img) if X.dims[t] else []
            cols.append(y[nb:])
        maps.append(Matrix.from_columns(F, cols, dims[t]))
    Qm = Representation(A, dims, maps, check=False)
    proj = []
    for v in range(len(dims)):
        inv, nb = coord[v]
        proj.append(Matrix(F, dims[v], X.dims[v], [inv.data[nb + r] for r in range(dims[v])])
                    if X.dims[v] else Matrix.zeros(F, dims[v], 0))
    return Qm, ModuleMap(X, Qm, proj)


def _span_basis(F, cols: list[list], d: int) -> list[list]:
    if not cols or d == 0:
        return []
    M = Matrix.from_columns(F, cols, d)
    return [cols[c] for c in rref(M)[1]]


def radical_spaces(X: Representation) -> list[list[list]]:
    A = X.A
    out = []
    for v in range(A.quiver.n_vertices):
        cols = []
        for a, (s, t) in enumerate(A.quiver.arrows):
            if t == v:
                cols.extend(X.maps[a].columns())
        out.append(_span_basis(A.field, cols, X.dims[v]))
    return out


def radical(X: Representation) -> tuple[Representation, ModuleMap]:
    return subrepresentation(X, radical_spaces(X))


def top(X: Representation) -> tuple[Representation, ModuleMap]:
    return quotient(X, radical_spaces(X))


def socle(X: Representation) -> tuple[Representation, ModuleMap]:
    """Elements killed by every arrow: the annihilator of the radical of A."""
    A = X.A
    F = A.field
    bases = []
    for v in range(A.quiver.n_vertices):
        outs = [X.maps[a] for a, (s, t) in enumerate(A.quiver.arrows) if s == v]
        if not outs or X.dims[v] == 0:
            bases.append([[F.one if r == c else F.zero for r in range(X.dims[v])]
                          for c in range(X.dims[v])])
            continue
        stacked = outs[0]
        for m in outs[1:]:
            stacked = stacked.vstack(m)
        bases.append(nullspace(stacked).columns())
    return subrepresentation(X, bases)


def kernel(f: ModuleMap) -> tuple[Representation, ModuleMap]:
    bases = []
    for v, m in enumerate(f.mats):
        if f.source.dims[v] == 0:
            bases.append([])
        elif f.target.dims[v] == 0:
            d = f.source.dims[v]
            F = f.source.field
            bases.append([[F.one if r == c else F.zero for r in range(d)] for c in range(d)])
        else:
            bases.append(nullspace(m).columns())
    return subrepresentation(f.source, bases)


def top_generators(X: Representation) -> list[tuple[int, list]]:
    """Vectors whose images form a basis of ``top X``: (vertex, vector) pairs."""
    F = X.field
    rad = radical_spaces(X)
    gens = []
    for v, b in enumerate(rad):
        d = X.dims[v]
        ident = [[F.one if r == c else F.zero for r in range(d)] for c in range(d)]
        if d == 0:
            continue
        piv = rref(Matrix.from_columns(F, list(b) + ident, d))[1]
        gens.extend((v, ident[c - len(b)]) for c in piv if c >= len(b))
    return gens


def projective_cover(X: Representation) -> tuple[Representation, ModuleMap, list]:
    A = X.A
    gens = top_generators(X)
    summands = [projective(A, w) for w, _ in gens]
    P = direct_sum(summands, A)
    mats = []
    for u in range(A.quiver.n_vertices):
        cols = []
        for (w, g) in gens:
            for k in A.paths_between(w, u):
                cols.append(X.path_matrix(k).apply(g))
        mats.append(Matrix.from_columns(A.field, cols, X.dims[u]) if cols else
                    Matrix.zeros(A.field, X.dims[u], 0))
    P.name = "P(" + (X.name or "?") + ")"
    return P, ModuleMap(P, X, mats), gens


def syzygy(X: Representation, n: int = 1) -> Representation:
    M = X
    for _ in range(n):
        _, pi, _ = projective_cover(M)
        M, _ = kernel(pi)
    M.name = f"Omega^{n}({X.name})" if X.name else ""
    return M


# -- twisting and the Nakayama functor ------------------------------------------------

def twist(g: Automorphism, X: Representation) -> Representation:
    """``X^g`` with ``x * a = x . g^{-1}(a)``; sends S_i to S_{g(i)} and P_i to P_{g(i)}."""
    A = X.A
    ginv = g.inverse()
    n = A.quiver.n_vertices
    dims = [X.dims[ginv.perm[v]] for v in range(n)]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        img = ginv.arrow_images[a]
        maps.append(X.act(img, ginv.perm[s], ginv.perm[t]))
    return Representation(A, dims, maps, name=f"{g.name}.{X.name}", check=False)


def nakayama_module(X: Representation) -> Representation:
    """``nu X = D Hom_A(X, A)``; at vertex i the space is ``D Hom(X, P_i)``."""
    A = X.A
    n = A.quiver.n_vertices
    Ps = [projective(A, i) for i in range(n)]
    homs = [hom_space(X, Ps[i]) for i in range(n)]
    dims = [len(h) for h in homs]
    maps = []
    for a, (s, t) in enumerate(A.quiver.arrows):
        lam = element_map(A, A.arrow(a), t, s, Ps[t], Ps[s])   # P_t -> P_s
        cols = []
        for phi in homs[t]:
            c = coordinates(lam.compose(phi), homs[s])
            cols.append(c)
        L = Matrix.from_columns(A.field, cols, dims[s])   # Hom(X,P_t) -> Hom(X,P_s)
        maps.append(L.transpose())
    return Representation(A, dims, maps, name=f"nu({X.name})", check=True)


def iso_test(X: Representation, Y: Representation, rng: random.Random | None = None,
             tries: int = 32) -> ModuleMap | None:
    """An isomorphism ``X -> Y`` or None.  Raises :class:`Inconclusive` only over
    small fields where random search cannot certify absence."""
    if X.dims != Y.dims:
        return None
    if X.total_dim == 0:
        return ModuleMap.zero(X, Y)
    H = hom_space(X, Y)
    if not H or len(H) != len(hom_space(X, X)) or len(H) != len(hom_space(Y, Y)):
        return None
    rng = rng or random.Random(0)
    F = X.field
    for b in H:
        if b.is_iso():
            return b
    for _ in range(tries):
        f = H[0].scale(F.random(rng))
        for b in H[1:]:
            f = f + b.scale(F.random(rng))
        if f.is_iso():
            return f
    q = F.characteristic
    if q == 0 or q > 1000:
        return None
    if q ** len(H) <= 20000:
        for coeffs in itertools.product(range(q), repeat=len(H)):
            f = H[0].scale(coeffs[0])
            for c, b in zip(coeffs[1:], H[1:]):
                f = f + b.scale(c)
            if f.is_iso():
                return f
        return None
    raise Inconclusive(f"iso search over GF({q}) with Hom dimension {len(H)} exhausted")


def is_isomorphic(X: Representation, Y: Representation, rng=None) -> bool:
    return iso_test(X, Y, rng) is not None


def nakayama_permutation(A: PathAlgebra) -> list[int] | None:
    """``sigma`` with ``nu P_i = I_i`` isomorphic to ``P_sigma(i)``; None if A is not self-injective."""
    n = A.quiver.n_vertices
    Ps = [projective(A, j) for j in range(n)]
    sigma = []
    for i in range(n):
        I = injective(A, i)
        match = next((j for j in range(n) if is_isomorphic(I, Ps[j])), None)
        if match is None:
            return None
        sigma.append(match)
    return sigma


def is_self_injective(A: PathAlgebra) -> bool:
    return nakayama_permutation(A) is not None
