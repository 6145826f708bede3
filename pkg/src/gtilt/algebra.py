"""Finite-dimensional associative algebras given by structure constants.

A :class:`FiniteAlgebra` optionally carries a complete set of orthogonal
idempotents; projective right modules ``e R`` and maps between them are
what the complexes module works with.  Path algebras, skew group algebras
and endomorphism algebras of complexes all end up here.
"""
from __future__ import annotations

import itertools
import random
from typing import Sequence

import sympy

from .exact import Field, Matrix, QQ, nullspace, rank, row_basis, rref, solve

Vector = list


class IdempotentLiftFailure(RuntimeError):
    """Primitive idempotent search ran out of budget."""


class NonSplitQuotient(RuntimeError):
    """The semisimple quotient has a simple factor that is not split over k."""


class FiniteAlgebra:
    """Algebra with basis ``b_0..b_{d-1}``; ``table[a][b]`` is the sparse product ``b_a b_b``."""

    def __init__(self, field: Field, table: list[list[list[tuple[int, object]]]], one: Vector,
                 idempotents: Sequence[Vector] | None = None, name: str = ""):
        self.field = field
        self.dim = len(table)
        self.table = table
        self.one = list(one)
        self.name = name
        self.idempotents = [list(e) for e in idempotents] if idempotents is not None else None
        self._corner_cache: dict = {}
        self._radical = None
        self._trace = None

    # -- element arithmetic -------------------------------------------------
    def zero_vector(self) -> Vector:
        return [self.field.zero] * self.dim

    def basis_vector(self, i: int) -> Vector:
        v = self.zero_vector()
        v[i] = self.field.one
        return v

    def mul(self, x: Sequence, y: Sequence) -> Vector:
        out = self.zero_vector()
        ys = [(b, c) for b, c in enumerate(y) if c]
        if not ys:
            return out
        for a, ca in enumerate(x):
            if not ca:
                continue
            row = self.table[a]
            for b, cb in ys:
                cab = ca * cb
                for k, c in row[b]:
                    out[k] = out[k] + cab * c
        return out

    def add(self, x, y) -> Vector:
        return [a + b for a, b in zip(x, y)]

    def sub(self, x, y) -> Vector:
        return [a - b for a, b in zip(x, y)]

    def scale(self, c, x) -> Vector:
        return [c * a for a in x]

    def left_matrix(self, x) -> Matrix:
        """Matrix of ``y -> x y`` on the basis."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def right_matrix(self, x) -> Matrix:
        cols = [self.mul(self.basis_vector(j), x) for j in range(self.dim)]
        return Matrix.from_columns(self.field, cols, self.dim)

    def is_associative(self) -> bool:
        b = [self.basis_vector(i) for i in range(self.dim)]
        for x, y, z in itertools.product(b, repeat=3):
            if self.mul(self.mul(x, y), z) != self.mul(x, self.mul(y, z)):
                return False
        return True

    def opposite(self) -> "FiniteAlgebra":
        table = [[self.table[b][a] for b in range(self.dim)] for a in range(self.dim)]
        return FiniteAlgebra(self.field, table, self.one, self.idempotents, name=self.name + "^op")

    # -- corners e_j R e_i ----------------------------------------------------
    @property
    def n_idempotents(self) -> int:
        return len(self.idempotents)

    def corner_basis(self, j: int, i: int) -> list[Vector]:
        """RREF basis of ``e_j R e_i``; coordinates are read off at the pivots."""
        key = (j, i)
        if key not in self._corner_cache:
            ej, ei = self.idempotents[j], self.idempotents[i]
            span = [self.mul(self.mul(ej, self.basis_vector(b)), ei) for b in range(self.dim)]
            basis = row_basis(self.field, span, self.dim)
            pivots = [next(k for k, c in enumerate(v) if c) for v in basis]
            self._corner_cache[key] = (basis, pivots)
        return self._corner_cache[key][0]

    def corner_coords(self, x: Sequence, j: int, i: int) -> list:
        self.corner_basis(j, i)
        return [x[p] for p in self._corner_cache[(j, i)][1]]

    def corner_dim(self, j: int, i: int) -> int:
        return len(self.corner_basis(j, i))

    def unit_inverse(self, phi: Sequence, t: int, s: int) -> Vector | None:
        """For ``phi`` in e_t R e_s, return ``psi`` in e_s R e_t with psi*phi = e_s and
        phi*psi = e_t, or None when left multiplication by phi is not an isomorphism
        e_s R -> e_t R."""
        if not any(phi):
            return None
        src = self.corner_basis(s, s)
        tgt = self.corner_basis(t, s)
        if len(src) != len(tgt):
            return None
        basis = self.corner_basis(s, t)
        if not basis:
            return None
        # Solve psi * phi = e_s inside e_s R e_s.
        cols = [self.corner_coords(self.mul(b, phi), s, s) for b in basis]
        M = Matrix.from_columns(self.field, cols, len(src))
        rhs = Matrix.from_columns(self.field, [self.corner_coords(self.idempotents[s], s, s)], len(src))
        x = solve(M, rhs)
        if x is None:
            return None
        psi = self.zero_vector()
        for c, b in zip(x.column(0), basis):
            if c:
                psi = self.add(psi, self.scale(c, b))
        if self.mul(phi, psi) != self.idempotents[t]:
            return None
        return psi

    def corner_element(self, coords: Sequence, j: int, i: int) -> Vector:
        """Element of ``e_j R e_i`` with the given corner coordinates."""
        out = self.zero_vector()
        for c, b in zip(coords, self.corner_basis(j, i)):
            if c:
                out = self.add(out, self.scale(c, b))
        return out

    def vertex_idempotent(self, v: int) -> Vector:
        return list(self.idempotents[v])

    def residue(self, x: Sequence, v: int):
        """The scalar ``lam`` with ``x - lam e_v`` in the radical, for x in a
        local corner ``e_v R e_v``."""
        key = ("residue", v)
        if key not in self._corner_cache:
            ev = self.idempotents[v]
            rad = [self.mul(self.mul(ev, r), ev) for r in self.radical_basis()]
            cols = [self.corner_coords(ev, v, v)] + [self.corner_coords(r, v, v) for r in rad]
            self._corner_cache[key] = Matrix.from_columns(self.field, cols, self.corner_dim(v, v))
        M = self._corner_cache[key]
        sol = solve(M, Matrix.from_columns(self.field, [self.corner_coords(x, v, v)], M.rows))
        if sol is None:
            raise ValueError("element is outside the corner")
        return sol.data[0][0]

    def format_element(self, x: Sequence) -> str:
        terms = [(f"b{k}" if c == 1 else f"{c}*b{k}") for k, c in enumerate(x) if c]
        return " + ".join(terms) if terms else "0"

    # -- radical ------------------------------------------------------------
    def _traces(self) -> list:
        if self._trace is None:
            z = self.field.zero
            tr = []
            for a in range(self.dim):
                acc = z
                for c in range(self.dim):
                    for k, v in self.table[a][c]:
                        if k == c:
                            acc = acc + v
                tr.append(acc)
            self._trace = tr
        return self._trace

    def radical_basis(self) -> list[Vector]:
        """Jacobson radical as the kernel of the trace form Tr(L_{xy}).

        Valid in characteristic 0 and in characteristic p > dim; other
        characteristics are rejected."""
        if self._radical is None:
            p = self.field.characteristic
            if p and p <= self.dim:
                raise NotImplementedError(
                    f"trace-form radical needs characteristic 0 or > dim (= {self.dim}); got {p}")
            tr = self._traces()
            z = self.field.zero
            gram = []
            for a in range(self.dim):
                row = []
                for b in range(self.dim):
                    acc = z
                    for k, v in self.table[a][b]:
                        acc = acc + v * tr[k]
                    row.append(acc)
                gram.append(row)
            N = nullspace(Matrix(self.field, self.dim, self.dim, gram))
            self._radical = row_basis(self.field, N.columns(), self.dim)
        return self._radical

    def is_local(self) -> bool:
        return self.dim - len(self.radical_basis()) == 1

    def radical_power_basis(self, n: int) -> list[Vector]:
        J = self.radical_basis()
        cur = J
        for _ in range(n - 1):
            prods = [self.mul(x, y) for x in cur for y in J]
            cur = row_basis(self.field, prods, self.dim)
        return cur

    # -- subalgebras --------------------------------------------------------
    def corner_algebra(self, f: Sequence) -> tuple["FiniteAlgebra", list[Vector]]:
        """``f R f`` as a FiniteAlgebra, plus its basis in R-coordinates."""
        span = [self.mul(self.mul(f, self.basis_vector(b)), f) for b in range(self.dim)]
        basis = row_basis(self.field, span, self.dim)
        pivots = [next(k for k, c in enumerate(v) if c) for v in basis]
        n = len(basis)
        table = []
        for a in range(n):
            row = []
            for b in range(n):
                prod = self.mul(basis[a], basis[b])
                row.append([(k, prod[p]) for k, p in enumerate(pivots) if prod[p]])
            table.append(row)
        one = [f[p] for p in pivots]
        return FiniteAlgebra(self.field, table, one), basis

    def embed(self, basis: list[Vector], coords: Sequence) -> Vector:
        out = self.zero_vector()
        for c, b in zip(coords, basis):
            if c:
                out = self.add(out, self.scale(c, b))
        return out

    # -- primitive idempotents ---------------------------------------------
    def power(self, x, n: int) -> Vector:
        out = list(self.one)
        for _ in range(n):
            out = self.mul(out, x)
        return out

    def minimal_polynomial(self, x: Sequence) -> list:
        """Monic coefficients, highest degree first."""
        powers = [list(self.one)]
        while True:
            nxt = self.mul(powers[-1], x)
            M = Matrix.from_columns(self.field, powers, self.dim)
            sol = solve(M, Matrix.from_columns(self.field, [nxt], self.dim))
            if sol is not None:
                c = sol.column(0)
                return [self.field.one] + [-a for a in reversed(c)]
            powers.append(nxt)

    def _to_sympy(self, coeffs):
        x = sympy.Symbol("x")
        if self.field.characteristic == 0:
            return sympy.Poly([sympy.Rational(*self.field.to_int_pair(c)) for c in coeffs], x,
                              domain=sympy.QQ)
        return sympy.Poly([int(c) for c in coeffs], x, modulus=self.field.characteristic)

    def _from_sympy(self, poly) -> list:
        out = []
        for c in poly.all_coeffs():
            if self.field.characteristic == 0:
                c = sympy.Rational(c)
                out.append(self.field(QQ(int(c.p)) / int(c.q)))
            else:
                out.append(self.field(int(c)))
        return out

    def eval_poly(self, coeffs: Sequence, x) -> Vector:
        acc = self.zero_vector()
        for c in coeffs:
            acc = self.add(self.mul(acc, x), self.scale(c, self.one))
        return acc

    def fitting_idempotent(self, x) -> tuple[Vector | None, bool]:
        """Nontrivial idempotent in k[x] if the minimal polynomial of x has two
        coprime factors.  Second value: minimal polynomial was a power of an
        irreducible of degree > 1 (a non-split symptom)."""
        m = self._to_sympy(self.minimal_polynomial(x))
        _, factors = m.factor_list()
        if len(factors) < 2:
            return None, bool(factors) and factors[0][0].degree() > 1
        g = factors[0][0] ** factors[0][1]
        h = m.quo(g)
        s, _, d = h.gcdex(g)
        sh = (s * h).rem(m)
        e = self.eval_poly(self._from_sympy(sh), x)
        return e, False

    def primitive_idempotents(self, f: Sequence | None = None, rng: random.Random | None = None,
                              budget: int = 200) -> list[Vector]:
        """Complete set of primitive orthogonal idempotents summing to ``f`` (default 1)."""
        rng = rng or random.Random(0)
        f = list(self.one) if f is None else list(f)
        if not any(f):
            return []
        C, basis = self.corner_algebra(f)
        if C.dim == 1 or C.is_local():
            return [f]
        nonsplit = False
        for a in _candidate_elements(C, rng, budget):
            e, ns = C.fitting_idempotent(a)
            nonsplit = nonsplit or ns
            if e is None:
                continue
            e_full = self.embed(basis, e)
            rest = self.sub(f, e_full)
            return (self.primitive_idempotents(e_full, rng, budget)
                    + self.primitive_idempotents(rest, rng, budget))
        quot = C.dim - len(C.radical_basis())
        if nonsplit:
            raise NonSplitQuotient(f"corner with semisimple quotient of dimension {quot} does not split")
        raise IdempotentLiftFailure(f"no splitting element found for a corner of dimension {C.dim}")

    # -- invariants with respect to idempotents ------------------------------
    def sandwich_dim(self, span: list[Vector], i: int, j: int) -> int:
        ei, ej = self.idempotents[i], self.idempotents[j]
        return rank(Matrix.from_columns(self.field, [self.mul(self.mul(ei, v), ej) for v in span],
                                        self.dim)) if span else 0

    def cartan_matrix(self) -> list[list[int]]:
        """``C[i][j] = dim e_i R e_j``."""
        n = self.n_idempotents
        return [[self.corner_dim(i, j) for j in range(n)] for i in range(n)]

    def arrow_matrix(self) -> list[list[int]]:
        """``Q[i][j] = dim e_i (J/J^2) e_j``: arrows i -> j of the Gabriel quiver
        under left-to-right composition."""
        J = self.radical_basis()
        J2 = self.radical_power_basis(2)
        n = self.n_idempotents
        return [[self.sandwich_dim(J, i, j) - self.sandwich_dim(J2, i, j) for j in range(n)]
                for i in range(n)]

    def with_idempotents(self, idempotents: Sequence[Vector]) -> "FiniteAlgebra":
        return FiniteAlgebra(self.field, self.table, self.one, idempotents, self.name)

    def projective_classes(self) -> list[int]:
        """Class label per idempotent: ``e_a R ~ e_b R`` iff e_a R e_b R e_a
        is not inside the radical of the local ring e_a R e_a."""
        n = self.n_idempotents
        labels = [-1] * n
        nxt = 0
        for a in range(n):
            if labels[a] >= 0:
                continue
            labels[a] = nxt
            for b in range(a + 1, n):
                if labels[b] < 0 and self._projectives_isomorphic(a, b):
                    labels[b] = nxt
            nxt += 1
        return labels

    def _projectives_isomorphic(self, a: int, b: int) -> bool:
        if self.corner_dim(a, a) != self.corner_dim(b, b):
            return False
        # a map e_b R -> e_a R is left multiplication by some x in e_a R e_b
        for x in self.corner_basis(a, b):
            if self.unit_inverse(x, a, b) is not None:
                return True
        # generic combination catches isomorphisms not hit by a single basis vector
        rng = random.Random(a * 7919 + b)
        basis = self.corner_basis(a, b)
        for _ in range(8):
            if not basis:
                break
            x = self.zero_vector()
            for v in basis:
                x = self.add(x, self.scale(self.field.random(rng), v))
            if self.unit_inverse(x, a, b) is not None:
                return True
        return False


def _candidate_elements(C: FiniteAlgebra, rng: random.Random, budget: int):
    one = C.one
    tried = 0
    for i in range(C.dim):
        b = C.basis_vector(i)
        if b != one:
            yield b
            tried += 1
    for i, j in itertools.combinations(range(C.dim), 2):
        if tried >= budget // 2:
            break
        yield C.add(C.basis_vector(i), C.basis_vector(j))
        tried += 1
    while tried < budget:
        yield [C.field(rng.randint(-3, 3)) for _ in range(C.dim)]
        tried += 1


def algebra_from_basis(field: Field, basis: list[Vector], mul, ambient_dim: int,
                       one_coords: Sequence | None = None) -> FiniteAlgebra:
    """Structure constants of the algebra spanned by ``basis`` under ``mul``
    (a bilinear closure over flattened vectors).  Coordinates by linear solve."""
    n = len(basis)
    M = Matrix.from_columns(field, basis, ambient_dim)
    R, piv = rref(M.transpose())
    table = []
    prods = []
    for a in range(n):
        for b in range(n):
            prods.append(mul(basis[a], basis[b]))
    if n:
        sol = solve(M, Matrix.from_columns(field, prods, ambient_dim))
        if sol is None:
            raise ValueError("basis is not closed under multiplication")
    for a in range(n):
        row = []
        for b in range(n):
            col = sol.column(a * n + b)
            row.append([(k, c) for k, c in enumerate(col) if c])
        table.append(row)
    if one_coords is None:
        one_coords = [field.zero] * n
    return FiniteAlgebra(field, table, list(one_coords))
