"""Bounded complexes of projectives and their homotopy category.

A :class:`ProjComplex` stores, per cohomological degree, the vertices of
its indecomposable projective summands ``P_v = e_v A``.  Differentials
raise degree.  A map ``P_i -> P_j`` is left multiplication by an element
of ``e_j A e_i``, so a differential ``d^k`` is a matrix of algebra elements
with one row per summand of degree k+1 and one column per summand of
degree k; composition is ordinary matrix product with the algebra
multiplication.

Sign conventions: ``X[1]^k = X^{k+1}`` with differential ``-d``; the Hom
complex has ``d(f) = d_Y f - (-1)^{|f|} f d_X``; the cone of a degree-0
chain map ``f: X -> Y`` has terms ``X^{k+1} + Y^k`` and differential
``[[-d_X, 0], [f, d_Y]]``.

Hom spaces into a complex are computed through Yoneda: a component
``P_i -> Z^k`` is a vector of ``(Z^k)_i``.  :func:`hom_total_complex` is a
second implementation that works with full module homomorphism spaces
and is used as an oracle.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Sequence

from .exact import Matrix, nullspace, rank, rref, solve
from .modules import (ModuleMap, Representation, coordinate_solver, coordinates, direct_sum as module_sum,
                      element_map, hom_space, kernel, projective, projective_cover)
from .quiver import PathAlgebra


def _projectives(A: PathAlgebra) -> list[Representation]:
    cache = getattr(A, "_gtilt_projectives", None)
    if cache is None:
        cache = [projective(A, v) for v in range(A.quiver.n_vertices)]
        A._gtilt_projectives = cache
    return cache


def _sign(m: int) -> int:
    return -1 if m % 2 else 1


# -- matrices of algebra elements ----------------------------------------------------

def ematrix_zero(A, rows: int, cols: int) -> list[list]:
    return [[A.zero_vector() for _ in range(cols)] for _ in range(rows)]


def ematrix_mul(A, X: list[list], Y: list[list], inner: int | None = None) -> list[list]:
    rows = len(X)
    cols = len(Y[0]) if Y else 0
    inner = len(Y) if inner is None else inner
    out = ematrix_zero(A, rows, cols)
    for r in range(rows):
        for c in range(cols):
            acc = out[r][c]
            for k in range(inner):
                x, y = X[r][k], Y[k][c]
                if any(x) and any(y):
                    acc = A.add(acc, A.mul(x, y))
            out[r][c] = acc
    return out


def ematrix_is_zero(X) -> bool:
    return all(not any(x) for row in X for x in row)


def local_inverse(A: PathAlgebra, x: Sequence, v: int) -> list | None:
    """Inverse of a unit ``x`` of ``e_v A e_v``; None when x lies in the radical."""
    lam = A.residue(x, v)
    if not lam:
        return None
    inv = 1 / A.field(lam)
    n = A.sub(A.scale(inv, x), A.vertex_idempotent(v))   # x/lam = e_v + n, n nilpotent
    acc = A.vertex_idempotent(v)
    term = A.vertex_idempotent(v)
    minus_n = A.scale(A.field(-1), n)
    while True:
        term = A.mul(term, minus_n)
        if not any(term):
            break
        acc = A.add(acc, term)
    return A.scale(inv, acc)


def top_blocks(A: PathAlgebra, M: list[list], rows: Sequence[int], cols: Sequence[int]) -> dict:
    """Reduction modulo the radical: per vertex v, the field matrix of ``e_v``
    coefficients between the v-summands."""
    out = {}
    for v in sorted(set(rows) | set(cols)):
        rs = [r for r, u in enumerate(rows) if u == v]
        cs = [c for c, u in enumerate(cols) if u == v]
        out[v] = Matrix(A.field, len(rs), len(cs), [[A.residue(M[r][c], v) for c in cs] for r in rs])
    return out


def ematrix_inverse(A: PathAlgebra, M: list[list], verts: Sequence[int]) -> list[list] | None:
    """Inverse of a square matrix of elements between sums of projectives
    (summand vertices ``verts`` on both sides), or None if not invertible."""
    n = len(verts)
    if n == 0:
        return []
    tops = top_blocks(A, M, verts, verts)
    inv_top = ematrix_zero(A, n, n)
    for v, T in tops.items():
        if T.rows != T.cols or rank(T) < T.rows:
            return None
        Ti = T.inverse()
        idx = [r for r, u in enumerate(verts) if u == v]
        for a, r in enumerate(idx):
            for b, c in enumerate(idx):
                if Ti.data[a][b]:
                    inv_top[r][c] = A.scale(Ti.data[a][b], A.vertex_idempotent(v))
    # M = M0 + N with M0^{-1} = inv_top; M^{-1} = sum_k (-M0^{-1} N)^k M0^{-1}
    ident = ematrix_zero(A, n, n)
    for r, v in enumerate(verts):
        ident[r][r] = A.vertex_idempotent(v)
    prod = ematrix_mul(A, inv_top, M)
    U = [[A.sub(prod[r][c], ident[r][c]) for c in range(n)] for r in range(n)]
    negU = [[A.scale(A.field(-1), x) for x in row] for row in U]
    acc = ident
    term = ident
    while True:
        term = ematrix_mul(A, negU, term)
        if ematrix_is_zero(term):
            break
        acc = [[A.add(acc[r][c], term[r][c]) for c in range(n)] for r in range(n)]
    return ematrix_mul(A, acc, inv_top)


# -- complexes -----------------------------------------------------------------------

class ProjComplex:
    def __init__(self, A: PathAlgebra, terms: dict, diffs: dict | None = None, name: str = "",
                 check: bool = True):
        self.A = A
        self.terms = {int(k): tuple(v) for k, v in terms.items() if len(v)}
        self.name = name
        self.diffs = {}
        diffs = diffs or {}
        for k in self.terms:
            if k + 1 in self.terms:
                D = diffs.get(k)
                if D is None:
                    D = ematrix_zero(A, len(self.terms[k + 1]), len(self.terms[k]))
                self.diffs[k] = [list(map(list, row)) for row in D]
        self._realized = None
        self._cache = {}
        if check:
            self.validate()

    # -- shape --------------------------------------------------------------
    @property
    def degrees(self) -> list[int]:
        return sorted(self.terms)

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    @property
    def width(self) -> int:
        return self.hi - self.lo if self.terms else 0

    def is_zero(self) -> bool:
        return not self.terms

    def term(self, k: int) -> tuple:
        return self.terms.get(k, ())

    def d(self, k: int) -> list[list]:
        if k in self.diffs:
            return self.diffs[k]
        return ematrix_zero(self.A, len(self.term(k + 1)), len(self.term(k)))

    def multiplicity(self, k: int) -> list[int]:
        m = [0] * self.A.n_idempotents
        for v in self.term(k):
            m[v] += 1
        return m

    def k0_class(self) -> list[int]:
        acc = [0] * self.A.n_idempotents
        for k in self.terms:
            for v in self.terms[k]:
                acc[v] += _sign(k)
        return acc

    def total_dim(self) -> int:
        A = self.A
        n = A.n_idempotents
        return sum(A.corner_dim(v, u) for vs in self.terms.values() for v in vs for u in range(n))

    # -- Yoneda coordinates: (X^k) e_v is the sum over summands r of e_{v_r} A e_v
    def dims_at(self, k: int, v: int) -> int:
        return sum(self.A.corner_dim(r, v) for r in self.term(k))

    def d_at(self, k: int, v: int) -> Matrix:
        key = ("d", k, v)
        if key not in self._cache:
            A = self.A
            D = self.d(k)
            cols = []
            for r, vr in enumerate(self.term(k)):
                for b in A.corner_basis(vr, v):
                    col = []
                    for r2, vr2 in enumerate(self.term(k + 1)):
                        x = D[r2][r]
                        if any(x):
                            col.extend(A.corner_coords(A.mul(x, b), vr2, v))
                        else:
                            col.extend([A.field.zero] * A.corner_dim(vr2, v))
                    cols.append(col)
            rows = self.dims_at(k + 1, v)
            self._cache[key] = (Matrix.from_columns(A.field, cols, rows) if cols
                                else Matrix.zeros(A.field, rows, 0))
        return self._cache[key]

    def act_at(self, k: int, x, v: int, v2: int) -> Matrix:
        """Right multiplication by x in ``e_v A e_v2``: ``X^k e_v -> X^k e_v2``."""
        A = self.A
        cols = []
        rows = self.dims_at(k, v2)
        off = 0
        for vr in self.term(k):
            n2 = A.corner_dim(vr, v2)
            for b in A.corner_basis(vr, v):
                col = [A.field.zero] * rows
                col[off:off + n2] = A.corner_coords(A.mul(b, x), vr, v2)
                cols.append(col)
            off += n2
        return Matrix.from_columns(A.field, cols, rows) if cols else Matrix.zeros(A.field, rows, 0)

    def validate(self):
        A = self.A
        for k, D in self.diffs.items():
            src, tgt = self.terms[k], self.terms[k + 1]
            if len(D) != len(tgt) or any(len(row) != len(src) for row in D):
                raise ValueError(f"differential d^{k} has the wrong shape")
            for r, row in enumerate(D):
                for c, x in enumerate(row):
                    if A.mul(A.mul(A.vertex_idempotent(tgt[r]), x), A.vertex_idempotent(src[c])) != list(x):
                        raise ValueError(f"entry ({r},{c}) of d^{k} is not in e_{tgt[r] + 1} A e_{src[c] + 1}")
        for k in self.diffs:
            if k + 1 in self.diffs:
                if not ematrix_is_zero(ematrix_mul(A, self.diffs[k + 1], self.diffs[k])):
                    raise ValueError(f"d^{k + 1} d^{k} is not zero")

    def __repr__(self):
        parts = []
        for k in self.degrees:
            parts.append(f"{k}:" + "+".join(f"P{v + 1}" for v in self.terms[k]))
        return f"ProjComplex({self.name or '?'}; " + ", ".join(parts) + ")"

    def describe(self) -> dict:
        A = self.A
        return {
            "terms": {str(k): [v + 1 for v in self.terms[k]] for k in self.degrees},
            "differentials": {str(k): [[A.format_element(x) for x in row] for row in D]
                              for k, D in sorted(self.diffs.items())},
        }

    # -- realization as modules -------------------------------------------------
    def realize(self) -> "ModuleComplex":
        if self._realized is None:
            A = self.A
            P = _projectives(A)
            mods = {k: module_sum([P[v] for v in vs], A) for k, vs in self.terms.items()}
            maps = {k: realize_block(A, D, self.terms[k], self.terms[k + 1], mods[k], mods[k + 1])
                    for k, D in self.diffs.items()}
            self._realized = ModuleComplex(A, mods, maps)
        return self._realized

    # -- constructors -------------------------------------------------------------
    @classmethod
    def zero(cls, A) -> "ProjComplex":
        return cls(A, {})

    @classmethod
    def stalk(cls, A, vertices: Sequence[int], degree: int = 0, name: str = "") -> "ProjComplex":
        return cls(A, {degree: tuple(vertices)}, name=name)

    @classmethod
    def regular(cls, A) -> "ProjComplex":
        return cls.stalk(A, range(A.n_idempotents), 0, "A")


def realize_block(A, D, src: Sequence[int], tgt: Sequence[int], X: Representation,
                  Y: Representation) -> ModuleMap:
    """The module map ``X -> Y`` between sums of projectives given by element matrix D."""
    P = _projectives(A)
    mats = []
    for u in range(A.quiver.n_vertices):
        cols = []
        for c, vc in enumerate(src):
            for q in A.paths_between(vc, u):
                col = []
                qv = A.basis_vector(q)
                for r, vr in enumerate(tgt):
                    x = D[r][c]
                    if any(x):
                        col.extend(A.corner_coords(A.mul(x, qv), vr, u))
                    else:
                        col.extend([A.field.zero] * P[vr].dims[u])
                cols.append(col)
        mats.append(Matrix.from_columns(A.field, cols, Y.dims[u]) if cols else
                    Matrix.zeros(A.field, Y.dims[u], 0))
    return ModuleMap(X, Y, mats)


class ModuleComplex:
    """Bounded complex of arbitrary modules (targets of Yoneda Hom computations)."""

    def __init__(self, A, terms: dict, diffs: dict | None = None):
        self.A = A
        self.terms = {k: M for k, M in terms.items() if M.total_dim}
        diffs = diffs or {}
        self.diffs = {}
        for k in self.terms:
            if k + 1 in self.terms:
                self.diffs[k] = diffs.get(k) or ModuleMap.zero(self.terms[k], self.terms[k + 1])

    @property
    def lo(self):
        return min(self.terms) if self.terms else 0

    @property
    def hi(self):
        return max(self.terms) if self.terms else -1

    def dims_at(self, k: int, v: int) -> int:
        M = self.terms.get(k)
        return M.dims[v] if M is not None else 0

    def d_at(self, k: int, v: int) -> Matrix:
        if k in self.diffs:
            return self.diffs[k].mats[v]
        return Matrix.zeros(self.A.field, self.dims_at(k + 1, v), self.dims_at(k, v))

    def act_at(self, k: int, x, v: int, v2: int) -> Matrix:
        return self.terms[k].act(x, v, v2)

    @classmethod
    def stalk(cls, M: Representation, degree: int = 0) -> "ModuleComplex":
        return cls(M.A, {degree: M})


def as_target(Z, via: str = "corners"):
    if isinstance(Z, ModuleComplex):
        return Z
    if isinstance(Z, ProjComplex):
        return Z if via == "corners" else Z.realize()
    if isinstance(Z, Representation):
        return ModuleComplex.stalk(Z)
    raise TypeError(f"cannot use {type(Z).__name__} as a complex")


# -- Hom complexes via Yoneda ----------------------------------------------------------

def _slots(T: ProjComplex, Z: ModuleComplex, m: int) -> list[tuple[int, int, int, int]]:
    """(degree k, summand c, vertex, size) for the components ``T^k_c -> Z^{k+m}``."""
    out = []
    for k in T.degrees:
        for c, v in enumerate(T.terms[k]):
            d = Z.dims_at(k + m, v)
            if d:
                out.append((k, c, v, d))
    return out


def _offsets(slots) -> tuple[dict, int]:
    off, pos = {}, 0
    for k, c, v, d in slots:
        off[(k, c)] = pos
        pos += d
    return off, pos


def hom_differential(T: ProjComplex, Z: ModuleComplex, m: int) -> tuple[Matrix, list, list]:
    """Matrix of ``d: Hom^m(T, Z) -> Hom^{m+1}(T, Z)`` with its column and row slots."""
    A = T.A
    F = A.field
    cs, rs = _slots(T, Z, m), _slots(T, Z, m + 1)
    coff, ncol = _offsets(cs)
    roff, nrow = _offsets(rs)
    data = [[F.zero] * ncol for _ in range(nrow)]
    sgn = F(-_sign(m))

    def put(r0, c0, B: Matrix, s):
        for i in range(B.rows):
            row = data[r0 + i]
            for j in range(B.cols):
                x = B.data[i][j]
                if x:
                    row[c0 + j] = row[c0 + j] + s * x

    for k, c, v, d in cs:
        c0 = coff[(k, c)]
        if (k, c) in roff:
            put(roff[(k, c)], c0, Z.d_at(k + m, v), F.one)
        if k - 1 in T.terms:
            D = T.d(k - 1)
            for c2, v2 in enumerate(T.terms[k - 1]):
                x = D[c][c2]
                if (k - 1, c2) in roff and any(x):
                    put(roff[(k - 1, c2)], c0, Z.act_at(k + m, x, v, v2), sgn)
    return Matrix(F, nrow, ncol, data), cs, rs


@dataclass
class HomResult:
    dim: int
    reps: list            # cocycle vectors representing a basis of the cohomology
    slots: list
    cycles: Matrix        # columns: basis of cocycles
    boundaries: list      # column vectors spanning coboundaries


def hom_homotopy(T: ProjComplex, Z, m: int = 0, via: str = "corners") -> HomResult:
    """``Hom_K(T, Z[m])``: chain maps of degree m modulo null-homotopic ones.

    Components ``T^k_c -> Z^{k+m}`` are stored through Yoneda as vectors of
    ``Z^{k+m} e_v``; for Z a complex of projectives these are corner
    coordinates (``via="corners"``) or coordinates in the realized modules
    (``via="modules"``), which agree for path algebras."""
    Zc = as_target(Z, via)
    F = T.A.field
    D, cs, _ = hom_differential(T, Zc, m)
    n = D.cols
    if n == 0:
        return HomResult(0, [], cs, Matrix.zeros(F, 0, 0), [])
    cyc = nullspace(D) if D.rows else Matrix.identity(F, n)
    Dprev, _, _ = hom_differential(T, Zc, m - 1)
    bnd = [c for c in Dprev.columns() if any(c)] if Dprev.cols else []
    zc = cyc.columns()
    if not zc:
        return HomResult(0, [], cs, cyc, bnd)
    M = Matrix.from_columns(F, bnd + zc, n)
    piv = rref(M)[1]
    nb = rank(Matrix.from_columns(F, bnd, n)) if bnd else 0
    reps = [zc[p - len(bnd)] for p in piv if p >= len(bnd)]
    assert len(reps) == len(zc) - nb
    return HomResult(len(reps), reps, cs, cyc, bnd)


def hom_dim(T: ProjComplex, Z, m: int = 0, via: str = "corners") -> int:
    return hom_homotopy(T, Z, m, via).dim


def hom_total_complex(T: ProjComplex, U, m: int = 0) -> int:
    """Degree-m cohomology of the total Hom complex, built from module Hom spaces
    ``Hom_A(T^k, U^l)`` (no Yoneda shortcut).  Oracle for :func:`hom_homotopy`."""
    Tm = T.realize()
    Um = as_target(U, "modules")
    F = T.A.field

    spaces = {}

    def space(deg):
        if deg not in spaces:
            spaces[deg] = [(k, hom_space(Tm.terms[k], Um.terms[k + deg]))
                           for k in sorted(Tm.terms) if k + deg in Um.terms]
        return spaces[deg]

    def flat_len(blocks):
        return sum(len(b) for _, b in blocks)

    def dmat(deg):
        src, tgt = space(deg), space(deg + 1)
        ns, nt = flat_len(src), flat_len(tgt)
        tindex = {k: coordinate_solver(b) for k, b in tgt}
        toff, pos = {}, 0
        for k, b in tgt:
            toff[k] = pos
            pos += len(b)
        cols = []
        s = F(_sign(deg))
        for k, basis in src:
            for f in basis:
                col = [F.zero] * nt
                # (d f) restricted to T^k lands in Hom(T^k, U^{k+deg+1})
                parts = {}
                if k + deg in Um.diffs:
                    parts.setdefault(k, []).append(Um.diffs[k + deg].compose(f))
                if k - 1 in Tm.diffs:
                    g = f.compose(Tm.diffs[k - 1]).scale(-s)
                    parts.setdefault(k - 1, []).append(g)
                for kk, gs in parts.items():
                    if kk not in tindex:
                        continue
                    tot = gs[0]
                    for g in gs[1:]:
                        tot = tot + g
                    y = tindex[kk](tot)
                    if y is None:
                        raise AssertionError("Hom differential left the Hom space")
                    for i, c in enumerate(y):
                        col[toff[kk] + i] = c
                cols.append(col)
        return Matrix.from_columns(F, cols, nt) if cols else Matrix.zeros(F, nt, 0), ns

    Dm, n = dmat(m)
    Dp, _ = dmat(m - 1)
    r1 = rank(Dm) if Dm.rows and Dm.cols else 0
    r0 = rank(Dp) if Dp.rows and Dp.cols else 0
    return n - r1 - r0


# -- chain maps -------------------------------------------------------------------------

class ChainMap:
    """Degree-m map ``T -> U``: ``blocks[k]`` is an element matrix ``T^k -> U^{k+m}``."""

    def __init__(self, source: ProjComplex, target: ProjComplex, m: int, blocks: dict):
        self.source = source
        self.target = target
        self.m = m
        A = source.A
        self.blocks = {}
        for k in source.degrees:
            if k + m in target.terms:
                B = blocks.get(k)
                self.blocks[k] = B if B is not None else ematrix_zero(A, len(target.terms[k + m]),
                                                                      len(source.terms[k]))

    def block(self, k):
        if k in self.blocks:
            return self.blocks[k]
        return ematrix_zero(self.source.A, len(self.target.term(k + self.m)), len(self.source.term(k)))

    def compose(self, other: "ChainMap") -> "ChainMap":
        """``self o other``."""
        A = self.source.A
        blocks = {}
        for k in other.source.degrees:
            j = k + other.m
            if j in self.blocks and k in other.blocks:
                blocks[k] = ematrix_mul(A, self.blocks[j], other.blocks[k])
        return ChainMap(other.source, self.target, self.m + other.m, blocks)

    def __add__(self, other):
        A = self.source.A
        blocks = {k: [[A.add(x, y) for x, y in zip(r1, r2)] for r1, r2 in zip(B, other.block(k))]
                  for k, B in self.blocks.items()}
        return ChainMap(self.source, self.target, self.m, blocks)

    def scale(self, c):
        A = self.source.A
        c = A.field(c)
        return ChainMap(self.source, self.target, self.m,
                        {k: [[A.scale(c, x) for x in r] for r in B] for k, B in self.blocks.items()})

    def vector(self) -> list:
        return chainmap_to_vector(self)

    def is_chain_map(self) -> bool:
        A = self.source.A
        s = _sign(self.m)
        for k in set(self.source.degrees) | {k - 1 for k in self.source.degrees}:
            lhs = ematrix_mul(A, self.target.d(k + self.m), self.block(k))
            rhs = ematrix_mul(A, self.block(k + 1), self.source.d(k))
            for r1, r2 in zip(lhs, rhs):
                for x, y in zip(r1, r2):
                    if A.sub(x, A.scale(A.field(s), y)) != A.zero_vector():
                        return False
        return True

    @classmethod
    def identity(cls, T: ProjComplex) -> "ChainMap":
        A = T.A
        blocks = {}
        for k, vs in T.terms.items():
            B = ematrix_zero(A, len(vs), len(vs))
            for r, v in enumerate(vs):
                B[r][r] = A.vertex_idempotent(v)
            blocks[k] = B
        return cls(T, T, 0, blocks)

    @classmethod
    def zero(cls, T, U, m=0):
        return cls(T, U, m, {})


def vector_to_chainmap(T: ProjComplex, U: ProjComplex, m: int, vec: Sequence, slots=None) -> ChainMap:
    A = T.A
    slots = slots if slots is not None else _slots(T, U, m)
    pos = 0
    blocks = {}
    for k, c, v, d in slots:
        seg = vec[pos:pos + d]
        pos += d
        B = blocks.setdefault(k, ematrix_zero(A, len(U.terms[k + m]), len(T.terms[k])))
        q = 0
        for r, vr in enumerate(U.terms[k + m]):
            n = A.corner_dim(vr, v)
            B[r][c] = A.corner_element(seg[q:q + n], vr, v)
            q += n
    return ChainMap(T, U, m, blocks)


def chainmap_to_vector(f: ChainMap) -> list:
    A = f.source.A
    out = []
    for k, c, v, d in _slots(f.source, f.target, f.m):
        B = f.blocks[k]
        for r, vr in enumerate(f.target.terms[k + f.m]):
            out.extend(A.corner_coords(B[r][c], vr, v))
    return out


def hom_basis(T: ProjComplex, U: ProjComplex, m: int = 0) -> list[ChainMap]:
    H = hom_homotopy(T, U, m)
    return [vector_to_chainmap(T, U, m, v, H.slots) for v in H.reps]


def is_null_homotopic(f: ChainMap) -> bool:
    H = hom_homotopy(f.source, f.target, f.m)
    v = chainmap_to_vector(f)
    if not H.boundaries:
        return not any(v)
    F = f.source.A.field
    return solve(Matrix.from_columns(F, H.boundaries, len(v)),
                 Matrix.from_columns(F, [v], len(v))) is not None


def is_contractible(T: ProjComplex) -> bool:
    """True iff the identity of T is null-homotopic."""
    if T.is_zero():
        return True
    return is_null_homotopic(ChainMap.identity(T))


# -- constructions ----------------------------------------------------------------------

def shift(T: ProjComplex, s: int) -> ProjComplex:
    A = T.A
    sg = A.field(_sign(s))
    terms = {k - s: vs for k, vs in T.terms.items()}
    diffs = {k - s: [[A.scale(sg, x) for x in row] for row in D] for k, D in T.diffs.items()}
    return ProjComplex(A, terms, diffs, name=f"{T.name}[{s}]" if T.name else "", check=False)


def direct_sum(parts: Sequence[ProjComplex], A: PathAlgebra | None = None) -> ProjComplex:
    if not parts:
        return ProjComplex.zero(A)
    A = parts[0].A
    degs = sorted(set().union(*[set(P.terms) for P in parts]))
    terms = {k: tuple(v for P in parts for v in P.term(k)) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        D = ematrix_zero(A, len(terms[k + 1]), len(terms[k]))
        ro = co = 0
        for P in parts:
            B = P.d(k)
            for r, row in enumerate(B):
                for c, x in enumerate(row):
                    D[ro + r][co + c] = x
            ro += len(P.term(k + 1))
            co += len(P.term(k))
        diffs[k] = D
    return ProjComplex(A, terms, diffs, name="+".join(P.name or "?" for P in parts), check=False)


def cone(f: ChainMap) -> ProjComplex:
    """Cone of a degree-0 chain map (for degree m, view f as ``T -> U[m]``)."""
    if f.m != 0:
        U = shift(f.target, f.m)
        f = ChainMap(f.source, U, 0, f.blocks)
    T, U, A = f.source, f.target, f.source.A
    neg = A.field(-1)
    degs = sorted({k - 1 for k in T.terms} | set(U.terms))
    terms = {k: T.term(k + 1) + U.term(k) for k in degs}
    diffs = {}
    for k in degs:
        if k + 1 not in terms:
            continue
        nt1, nu1 = len(T.term(k + 2)), len(U.term(k + 1))
        nt0, nu0 = len(T.term(k + 1)), len(U.term(k))
        D = ematrix_zero(A, nt1 + nu1, nt0 + nu0)
        dT, dU, fb = T.d(k + 1), U.d(k), f.block(k + 1)
        for r in range(nt1):
            for c in range(nt0):
                D[r][c] = A.scale(neg, dT[r][c])
        for r in range(nu1):
            for c in range(nt0):
                D[nt1 + r][c] = fb[r][c]
            for c in range(nu0):
                D[nt1 + r][nt0 + c] = dU[r][c]
        diffs[k] = D
    return ProjComplex(A, terms, diffs, name=f"cone({T.name}->{U.name})", check=False)


def minimize(T: ProjComplex) -> ProjComplex:
    """Homotopy-equivalent minimal complex (radical differentials) by Gaussian elimination."""
    A = T.A
    terms = {k: list(v) for k, v in T.terms.items()}
    diffs = {k: [list(row) for row in D] for k, D in T.diffs.items()}
    changed = True
    while changed:
        changed = False
        for k in sorted(diffs):
            D = diffs[k]
            src, tgt = terms[k], terms[k + 1]
            hit = None
            for r, vr in enumerate(tgt):
                for c, vc in enumerate(src):
                    if vr == vc and A.residue(D[r][c], vr):
                        hit = (r, c)
                        break
                if hit:
                    break
            if hit is None:
                continue
            r0, c0 = hit
            phi_inv = local_inverse(A, D[r0][c0], tgt[r0])
            new = []
            for r in range(len(tgt)):
                if r == r0:
                    continue
                row = []
                g = A.mul(D[r][c0], phi_inv) if any(D[r][c0]) else None
                for c in range(len(src)):
                    if c == c0:
                        continue
                    x = D[r][c]
                    if g is not None and any(D[r0][c]):
                        x = A.sub(x, A.mul(g, D[r0][c]))
                    row.append(x)
                new.append(row)
            diffs[k] = new
            if k - 1 in diffs:
                diffs[k - 1] = [row for r, row in enumerate(diffs[k - 1]) if r != c0]
            if k + 1 in diffs:
                diffs[k + 1] = [[x for c, x in enumerate(row) if c != r0] for row in diffs[k + 1]]
            del src[c0]
            del tgt[r0]
            changed = True
            break
    return ProjComplex(A, {k: tuple(v) for k, v in terms.items()},
                       {k: D for k, D in diffs.items() if terms[k] and terms[k + 1]},
                       name=T.name, check=False)


def is_minimal(T: ProjComplex) -> bool:
    A = T.A
    for k, D in T.diffs.items():
        for r, vr in enumerate(T.terms[k + 1]):
            for c, vc in enumerate(T.terms[k]):
                if vr == vc and A.residue(D[r][c], vr):
                    return False
    return True


# -- resolutions and derived Hom ---------------------------------------------------

def projective_resolution(X: Representation, length: int) -> ProjComplex:
    """Minimal projective resolution ``P_length -> ... -> P_0`` in degrees -length..0."""
    A = X.A
    P0, pi, gens = projective_cover(X)
    terms = {0: tuple(w for w, _ in gens)}
    diffs = {}
    cover = pi
    for n in range(1, length + 1):
        K, inc = kernel(cover)
        if K.total_dim == 0:
            break
        Pn, pin, gn = projective_cover(K)
        below = terms[-(n - 1)]
        D = ematrix_zero(A, len(below), len(gn))
        for c, (w, g) in enumerate(gn):
            vec = inc.mats[w].apply(g)
            pos = 0
            for r, v in enumerate(below):
                paths = A.paths_between(v, w)
                x = A.zero_vector()
                for idx, coef in zip(paths, vec[pos:pos + len(paths)]):
                    x[idx] = coef
                pos += len(paths)
                D[r][c] = x
        terms[-n] = tuple(w for w, _ in gn)
        diffs[-n] = D
        cover = inc.compose(pin)
    return ProjComplex(A, terms, diffs, name=f"res({X.name})", check=False)


def _lo(Y) -> int:
    Yc = as_target(Y)
    return Yc.lo


def derived_hom(X, Y, m: int) -> int:
    """``dim Hom_D(X, Y[m])`` for X a module or a complex of projectives and Y a
    module, a complex of modules or a complex of projectives."""
    if isinstance(X, ProjComplex):
        return hom_dim(X, Y, m)
    Yc = as_target(Y)
    if not Yc.terms:
        return 0
    n = max(0, m - Yc.lo + 1)
    return hom_dim(projective_resolution(X, n), Yc, m)


# -- isomorphism, twisting ------------------------------------------------------------

class ComplexInconclusive(RuntimeError):
    pass


def _is_iso_map(f: ChainMap) -> bool:
    A = f.source.A
    for k in set(f.source.terms) | set(f.target.terms):
        src, tgt = f.source.term(k), f.target.term(k)
        if sorted(src) != sorted(tgt):
            return False
        if not src:
            continue
        for v, T in top_blocks(A, f.block(k), tgt, src).items():
            if T.rows != T.cols or rank(T) < T.rows:
                return False
    return True


def iso_complex(T: ProjComplex, U: ProjComplex, rng: random.Random | None = None,
                tries: int = 32) -> ChainMap | None:
    """A homotopy equivalence between the minimal models of T and U, or None."""
    Tm, Um = minimize(T), minimize(U)
    for k in set(Tm.terms) | set(Um.terms):
        if sorted(Tm.term(k)) != sorted(Um.term(k)):
            return None
    if Tm.is_zero():
        return ChainMap.zero(Tm, Um)
    basis = hom_basis(Tm, Um, 0)
    if not basis:
        return None
    for b in basis:
        if _is_iso_map(b):
            return b
    rng = rng or random.Random(0)
    F = T.A.field
    for _ in range(tries):
        f = basis[0].scale(F.random(rng))
        for b in basis[1:]:
            f = f + b.scale(F.random(rng))
        if _is_iso_map(f):
            return f
    q = F.characteristic
    if q == 0 or q > 1000:
        return None
    if q ** len(basis) <= 20000:
        for coeffs in itertools.product(range(q), repeat=len(basis)):
            f = basis[0].scale(coeffs[0])
            for c, b in zip(coeffs[1:], basis[1:]):
                f = f + b.scale(c)
            if _is_iso_map(f):
                return f
        return None
    raise ComplexInconclusive(f"iso search over GF({q}) exhausted")


def is_homotopy_equivalent(T: ProjComplex, U: ProjComplex, rng=None) -> bool:
    return iso_complex(T, U, rng) is not None


def twist_complex(g, T: ProjComplex) -> ProjComplex:
    """Conjugate of T by the automorphism g: ``P_v`` becomes ``P_g(v)``, entries x become g(x)."""
    A = T.A
    terms = {k: tuple(g.perm[v] for v in vs) for k, vs in T.terms.items()}
    diffs = {k: [[g(x) for x in row] for row in D] for k, D in T.diffs.items()}
    return ProjComplex(A, terms, diffs, name=f"{g.name}.{T.name}" if T.name else "", check=False)


# -- decomposition ----------------------------------------------------------------------

def _principal_set(M: Matrix) -> list[int]:
    r = rank(M) if M.rows else 0
    if r == 0:
        return []
    for S in itertools.combinations(range(M.rows), r):
        if rank(M.submatrix(S, S)) == r:
            return list(S)
    raise AssertionError("idempotent without an invertible principal minor")


def split_idempotent(T: ProjComplex, e: ChainMap) -> ProjComplex:
    """The summand ``e(T)`` for a strict idempotent chain endomorphism e."""
    A = T.A
    iota, pi, terms = {}, {}, {}
    for k, vs in T.terms.items():
        E = e.block(k)
        tops = top_blocks(A, E, vs, vs)
        S = []
        for v, Tv in tops.items():
            idx = [r for r, u in enumerate(vs) if u == v]
            S.extend(idx[s] for s in _principal_set(Tv))
        S.sort()
        if not S:
            continue
        G = [[E[r][c] for c in S] for r in S]
        Ginv = ematrix_inverse(A, G, [vs[s] for s in S])
        iota[k] = [[E[r][c] for c in S] for r in range(len(vs))]
        pi[k] = ematrix_mul(A, Ginv, [E[r] for r in S])
        terms[k] = tuple(vs[s] for s in S)
    diffs = {}
    for k in terms:
        if k + 1 in terms:
            diffs[k] = ematrix_mul(A, ematrix_mul(A, pi[k + 1], T.d(k)), iota[k])
    return ProjComplex(A, terms, diffs, check=False)


def decompose(T: ProjComplex, rng: random.Random | None = None) -> list[ProjComplex]:
    """Indecomposable summands (minimal complexes) via primitive idempotents of
    the algebra of strict chain endomorphisms of the minimal model."""
    from .algebra import algebra_from_basis

    Tm = minimize(T)
    if Tm.is_zero():
        return []
    A = T.A
    F = A.field
    H = hom_homotopy(Tm, Tm, 0)
    basis = H.cycles.columns()
    n = len(H.slots and chainmap_to_vector(ChainMap.identity(Tm)))

    def to_map(v):
        return vector_to_chainmap(Tm, Tm, 0, v, H.slots)

    def mul(a, b):
        return chainmap_to_vector(to_map(a).compose(to_map(b)))

    ident = chainmap_to_vector(ChainMap.identity(Tm))
    one = solve(Matrix.from_columns(F, basis, n), Matrix.from_columns(F, [ident], n)).column(0)
    E = algebra_from_basis(F, basis, mul, n, one)
    out = []
    for idem in E.primitive_idempotents(rng=rng):
        vec = [F.zero] * n
        for c, b in zip(idem, basis):
            if c:
                vec = [x + c * y for x, y in zip(vec, b)]
        out.append(minimize(split_idempotent(Tm, to_map(vec))))
    return out


def summand_inventory(T: ProjComplex, rng=None) -> list[tuple[ProjComplex, int]]:
    """Indecomposable summands grouped into isomorphism classes with multiplicities."""
    classes: list[list] = []
    for S in decompose(T, rng):
        for entry in classes:
            if is_homotopy_equivalent(entry[0], S, rng):
                entry[1] += 1
                break
        else:
            classes.append([S, 1])
    return [(S, m) for S, m in classes]


# -- Nakayama functor on complexes ------------------------------------------------------

def _nakayama_data(A: PathAlgebra):
    """For self-injective A: sigma and isomorphisms ``psi_v: I_v -> P_sigma(v)``."""
    cache = getattr(A, "_gtilt_nakayama", None)
    if cache is not None:
        return cache
    from .modules import injective, iso_test
    n = A.quiver.n_vertices
    P = _projectives(A)
    sigma, psis = [], []
    for v in range(n):
        I = injective(A, v)
        for u in range(n):
            f = iso_test(I, P[u])
            if f is not None:
                sigma.append(u)
                psis.append(f)
                break
        else:
            raise ValueError("the Nakayama functor on complexes needs a self-injective algebra")
    A._gtilt_nakayama = (sigma, psis)
    return sigma, psis


def _nakayama_on_element(A, x, i: int, j: int, Ii, Ij) -> ModuleMap:
    """``nu(x.): I_i -> I_j`` for x in e_j A e_i; ``xi |-> xi(- x)``."""
    mats = []
    for u in range(A.quiver.n_vertices):
        rows = []
        for y in A.paths_between(u, j):
            prod = A.mul(A.basis_vector(y), x)
            rows.append([prod[q] for q in A.paths_between(u, i)])
        mats.append(Matrix(A.field, Ij.dims[u], Ii.dims[u], rows) if rows else
                    Matrix.zeros(A.field, Ij.dims[u], Ii.dims[u]))
    return ModuleMap(Ii, Ij, mats)


def nakayama_complex(T: ProjComplex) -> ProjComplex:
    """``nu T`` for a complex of projectives over a self-injective algebra,
    rewritten in projectives through fixed isomorphisms ``I_v = P_sigma(v)``."""
    from .modules import injective, map_element
    A = T.A
    sigma, psis = _nakayama_data(A)
    inv = []
    for psi in psis:
        inv.append(ModuleMap(psi.target, psi.source, [m.inverse() if m.rows else m for m in psi.mats]))
    Is = [psi.source for psi in psis]
    terms = {k: tuple(sigma[v] for v in vs) for k, vs in T.terms.items()}
    diffs = {}
    for k, D in T.diffs.items():
        src, tgt = T.terms[k], T.terms[k + 1]
        E = ematrix_zero(A, len(tgt), len(src))
        for r, j in enumerate(tgt):
            for c, i in enumerate(src):
                x = D[r][c]
                if not any(x):
                    continue
                f = psis[j].compose(_nakayama_on_element(A, x, i, j, Is[i], Is[j])).compose(inv[i])
                E[r][c] = map_element(f, sigma[i], sigma[j])
        diffs[k] = E
    return ProjComplex(A, terms, diffs, name=f"nu({T.name})" if T.name else "", check=True)


# -- approximations ---------------------------------------------------------------------

def radical_maps(summands: Sequence[ProjComplex]) -> dict:
    """Basis of the radical of ``Hom_K(S_j, S_l)`` for pairwise non-isomorphic
    indecomposable complexes: all maps when j != l, the radical of the local
    endomorphism ring when j = l."""
    from .algebra import FiniteAlgebra
    out = {}
    for j, Sj in enumerate(summands):
        for l, Sl in enumerate(summands):
            basis = hom_basis(Sj, Sl, 0)
            if j != l:
                out[(j, l)] = basis
                continue
            H = hom_homotopy(Sj, Sj, 0)
            F = Sj.A.field
            n = len(H.reps)
            vec_len = len(H.reps[0]) if H.reps else 0
            cols = H.reps + H.boundaries
            M = Matrix.from_columns(F, cols, vec_len) if cols else None

            def coords(v):
                x = solve(M, Matrix.from_columns(F, [v], vec_len))
                return x.column(0)[:n]

            table = []
            for a in range(n):
                row = []
                for b in range(n):
                    prod = chainmap_to_vector(basis[a].compose(basis[b]))
                    row.append([(k, c) for k, c in enumerate(coords(prod)) if c])
                table.append(row)
            one = coords(chainmap_to_vector(ChainMap.identity(Sj)))
            E = FiniteAlgebra(F, table, one)
            rad = []
            for v in E.radical_basis():
                f = basis[0].scale(v[0])
                for c, b in zip(v[1:], basis[1:]):
                    f = f + b.scale(c)
                rad.append(f)
            out[(j, l)] = rad
    return out


def minimal_approximation(summands: Sequence[ProjComplex], X: ProjComplex, m: int,
                          radmaps: dict | None = None) -> tuple[ProjComplex, ChainMap, list]:
    """Minimal right ``add(S[-m])``-approximation ``f: S' -> X`` (degree 0),
    where the S are pairwise non-isomorphic indecomposables.  Returns
    (S', f, [(summand index, map)])."""
    radmaps = radmaps if radmaps is not None else radical_maps(summands)
    F = X.A.field
    homs = [hom_homotopy(S, X, m) for S in summands]
    bases = [[vector_to_chainmap(S, X, m, v, H.slots) for v in H.reps] for S, H in zip(summands, homs)]
    chosen = []
    for j, S in enumerate(summands):
        H = homs[j]
        if not H.reps:
            continue
        n = len(H.reps[0])
        span = []
        for l in range(len(summands)):
            for rho in radmaps[(j, l)]:
                for psi in bases[l]:
                    span.append(chainmap_to_vector(psi.compose(rho)))
        known = [v for v in span + H.boundaries if any(v)]
        for rep, fmap in zip(H.reps, bases[j]):
            cols = known + [rep]
            if known and rank(Matrix.from_columns(F, cols, n)) == rank(Matrix.from_columns(F, known, n)):
                continue
            chosen.append((j, fmap))
            known = known + [rep]
    parts = [shift(summands[j], -m) for j, _ in chosen]
    source = direct_sum(parts, X.A)
    blocks = {}
    for k in source.degrees:
        blocks[k] = ematrix_zero(X.A, len(X.term(k)), len(source.terms[k]))
    col_off = {k: 0 for k in source.degrees}
    for (j, fmap), part in zip(chosen, parts):
        for k in part.degrees:
            B = fmap.block(k - m)
            if k in X.terms:
                for r in range(len(X.terms[k])):
                    for c in range(len(part.terms[k])):
                        blocks[k][r][col_off[k] + c] = B[r][c]
            col_off[k] += len(part.terms[k])
    f = ChainMap(source, X, 0, {k: B for k, B in blocks.items() if k in X.terms})
    return source, f, chosen
