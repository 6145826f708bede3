"""Quivers, path algebras with relations, automorphisms and skew group algebras.

Convention used throughout the package: paths are written left to right,
so ``a*b`` means "a, then b".  A basis path from vertex i to vertex j lies
in the corner ``e_i A e_j``.  Modules are representations (one space per
vertex, arrow i -> j acting as a map V_i -> V_j), which under this
composition rule are right A-modules; the projective at i is ``e_i A``
(paths starting at i) and the injective at i is ``D(A e_i)``.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from .algebra import FiniteAlgebra
from .exact import Field, Matrix, QQ, rank, rref

Path = tuple  # (source, (arrow indices...))


class InfiniteDimensional(ValueError):
    pass


class MalformedRelation(ValueError):
    pass


class InfiniteGroup(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    n_vertices: int
    arrows: tuple  # ((source, target), ...) 0-based
    names: tuple

    def __post_init__(self):
        if self.n_vertices < 1:
            raise ValueError("a quiver needs at least one vertex")
        if len(self.arrows) != len(self.names):
            raise ValueError("one name per arrow")
        if len(set(self.names)) != len(self.names):
            raise ValueError("arrow names must be unique")
        for s, t in self.arrows:
            if not (0 <= s < self.n_vertices and 0 <= t < self.n_vertices):
                raise ValueError(f"arrow endpoint out of range: {(s, t)}")

    @classmethod
    def from_arrows(cls, n: int, arrows: dict[str, tuple[int, int]]) -> "Quiver":
        names = tuple(arrows)
        return cls(n, tuple(tuple(arrows[a]) for a in names), names)

    def source(self, a: int) -> int:
        return self.arrows[a][0]

    def target(self, a: int) -> int:
        return self.arrows[a][1]

    def arrow_index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown arrow {name!r}") from None

    def paths_of_length(self, length: int) -> list[Path]:
        paths = [(v, ()) for v in range(self.n_vertices)]
        for _ in range(length):
            paths = [(s, arr + (a,)) for s, arr in paths for a in range(len(self.arrows))
                     if self.source(a) == self.path_target((s, arr))]
        return paths

    def path_target(self, p: Path) -> int:
        s, arr = p
        return self.target(arr[-1]) if arr else s


def _path_key(p: Path):
    return (len(p[1]), p[1], p[0])


class PathAlgebra(FiniteAlgebra):
    """``kQ / I`` for an admissible ideal I given by parallel relations.

    The quotient is computed by linear algebra on truncated path spaces:
    the smallest N with every length-N path in ``I + J^{N+1}`` certifies
    ``J^N`` inside I, and the normal-form basis consists of the paths of
    length < N that are not leading paths of the reduced relation span,
    ordering paths by (length, lexicographic).
    """

    def __init__(self, quiver: Quiver, relations: Sequence[dict], field: Field = QQ,
                 length_cap: int = 64, name: str = ""):
        self.quiver = quiver
        self.relations = [self._check_relation({tuple(k) if not isinstance(k, tuple) else k: field(v)
                                                for k, v in r.items()}) for r in relations]
        self._rel_field = field
        nf, reduce_rows, N = self._normal_forms(field, length_cap)
        self.nilpotency = N
        self.basis_paths: list[Path] = nf
        self.index = {p: i for i, p in enumerate(nf)}
        self._reduction = reduce_rows
        table = self._build_table(field)
        n = quiver.n_vertices
        idem = []
        for v in range(n):
            e = [field.zero] * len(nf)
            e[self.index[(v, ())]] = field.one
            idem.append(e)
        one = [sum((e[i] for e in idem), field.zero) for i in range(len(nf))]
        super().__init__(field, table, one, idem, name=name)
        self._corner_paths = {}
        for i, p in enumerate(nf):
            key = (p[0], quiver.path_target(p))
            self._corner_paths.setdefault(key, []).append(i)

    # -- construction -------------------------------------------------------
    def _check_relation(self, rel: dict) -> dict:
        rel = {p: c for p, c in rel.items() if c}
        if not rel:
            raise MalformedRelation("empty relation")
        ends = set()
        for p in rel:
            if len(p) < 2:
                raise MalformedRelation(f"relation term {self._word(p)} has length < 2 (not admissible)")
            for a, b in zip(p, p[1:]):
                if self.quiver.target(a) != self.quiver.source(b):
                    raise MalformedRelation(f"{self._word(p)} is not a path")
            ends.add((self.quiver.source(p[0]), self.quiver.target(p[-1])))
        if len(ends) != 1:
            raise MalformedRelation("relation mixes non-parallel paths")
        return rel

    def _word(self, arrows) -> str:
        return "*".join(self.quiver.names[a] for a in arrows)

    def _paths_up_to(self, N: int) -> list[Path]:
        out = []
        for length in range(N + 1):
            out.extend(self.quiver.paths_of_length(length))
        return out

    def _ideal_span(self, field: Field, N: int, col: dict) -> list[list]:
        Q = self.quiver
        rows = []
        by_end: dict[int, list] = {}
        by_start: dict[int, list] = {}
        for p in col:
            by_end.setdefault(Q.path_target(p), []).append(p)
            by_start.setdefault(p[0], []).append(p)
        for rel in self.relations:
            lmin = min(len(p) for p in rel)
            s = Q.source(next(iter(rel))[0])
            t = Q.target(next(iter(rel))[-1])
            for u in by_end.get(s, []):
                for v in by_start.get(t, []):
                    if len(u[1]) + len(v[1]) + lmin > N:
                        continue
                    row = [field.zero] * len(col)
                    for p, c in rel.items():
                        w = u[1] + p + v[1]
                        if len(w) <= N:
                            k = col[(Q.source(w[0]), w)]
                            row[k] = row[k] + c
                    if any(row):
                        rows.append(row)
        return rows

    def _normal_forms(self, field: Field, cap: int):
        for N in range(1, cap + 1):
            paths = sorted(self._paths_up_to(N), key=_path_key, reverse=True)
            col = {p: i for i, p in enumerate(paths)}
            rows = self._ideal_span(field, N, col)
            if rows:
                R, piv = rref(Matrix(field, len(rows), len(paths), rows))
                lead = {paths[c] for c in piv}
            else:
                lead = set()
            if all(p in lead for p in paths if len(p[1]) == N):
                break
        else:
            raise InfiniteDimensional(f"no nilpotency index found up to length {cap}")
        # A = kQ_{<N} / truncated ideal
        M = N - 1
        paths = sorted(self._paths_up_to(M), key=_path_key, reverse=True)
        col = {p: i for i, p in enumerate(paths)}
        rows = self._ideal_span(field, M, col)
        if rows:
            R, piv = rref(Matrix(field, len(rows), len(paths), rows))
        else:
            R, piv = None, []
        lead = {paths[c]: i for i, c in enumerate(piv)}
        nf = sorted((p for p in paths if p not in lead), key=_path_key)
        reduce_rows = {}
        for p, i in lead.items():
            reduce_rows[p] = {q: -R.data[i][col[q]] for q in nf if R.data[i][col[q]]}
        return nf, reduce_rows, N

    def reduce_path(self, p: Path) -> dict:
        """Normal form of an arbitrary path as {basis path: coefficient}."""
        if len(p[1]) >= self.nilpotency:
            return {}
        if p in self.index:
            return {p: self._rel_field.one}
        return dict(self._reduction.get(p, {}))

    def _build_table(self, field: Field):
        Q = self.quiver
        table = []
        for p in self.basis_paths:
            row = []
            for q in self.basis_paths:
                if Q.path_target(p) != q[0]:
                    row.append([])
                    continue
                w = (p[0], p[1] + q[1])
                red = self.reduce_path(w)
                row.append(sorted((self.index[r], c) for r, c in red.items() if c))
            table.append(row)
        return table

    # -- corners are spanned by paths -----------------------------------------
    def corner_basis(self, j: int, i: int):
        return [self.basis_vector(k) for k in self._corner_paths.get((j, i), [])]

    def corner_coords(self, x, j, i):
        return [x[k] for k in self._corner_paths.get((j, i), [])]

    def corner_dim(self, j, i):
        return len(self._corner_paths.get((j, i), []))

    def corner_element(self, coords, j, i):
        out = self.zero_vector()
        for c, k in zip(coords, self._corner_paths.get((j, i), [])):
            out[k] = c
        return out

    def residue(self, x, v):
        return x[self.index[(v, ())]]

    def paths_between(self, i: int, j: int) -> list[int]:
        return list(self._corner_paths.get((i, j), []))

    def unit_inverse(self, phi, t, s):
        # local corners e_v A e_v = k e_v + rad; no isomorphisms between distinct vertices
        if t != s:
            return None
        c = phi[self.index[(s, ())]]
        if not c:
            return None
        e = self.idempotents[s]
        n = [a / c for a in phi]
        n[self.index[(s, ())]] = self.field.zero
        # (e + n)^{-1} = e - n + n^2 - ...
        inv, term = list(e), list(e)
        for _ in range(self.nilpotency):
            term = self.scale(-self.field.one, self.mul(term, n))
            if not any(term):
                break
            inv = self.add(inv, term)
        return self.scale(1 / c, inv)

    def radical_basis(self):
        if self._radical is None:
            self._radical = [self.basis_vector(i) for i, p in enumerate(self.basis_paths) if p[1]]
        return self._radical

    # -- elements -----------------------------------------------------------
    def source_of(self, k: int) -> int:
        return self.basis_paths[k][0]

    def target_of(self, k: int) -> int:
        return self.quiver.path_target(self.basis_paths[k])

    def vertex_idempotent(self, v: int):
        return list(self.idempotents[v])

    def arrow(self, name_or_index) -> list:
        a = name_or_index if isinstance(name_or_index, int) else self.quiver.arrow_index(name_or_index)
        return self.path((self.quiver.source(a), (a,)))

    def path(self, p: Path) -> list:
        v = self.zero_vector()
        for q, c in self.reduce_path(p).items():
            v[self.index[q]] = v[self.index[q]] + c
        return v

    def word(self, names: Sequence[str]) -> list:
        """Product of arrows/trivial paths given by name ('e1' is the trivial path at vertex 1)."""
        acc = None
        for nm in names:
            x = self._named(nm)
            acc = x if acc is None else self.mul(acc, x)
        return acc if acc is not None else list(self.one)

    def _named(self, nm: str):
        if nm in self.quiver.names:
            return self.arrow(nm)
        m = re.fullmatch(r"e_?(\d+)", nm)
        if m:
            v = int(m.group(1)) - 1
            if not 0 <= v < self.quiver.n_vertices:
                raise KeyError(f"vertex out of range in {nm!r}")
            return list(self.idempotents[v])
        raise KeyError(f"unknown arrow {nm!r}")

    def element(self, expr) -> list:
        """Parse ``"a2 + a2*a3*a1*a2"``-style expressions (or pass a dict of words)."""
        if isinstance(expr, dict):
            acc = self.zero_vector()
            for w, c in expr.items():
                acc = self.add(acc, self.scale(self.field(c), self.word(w.split("*") if w else [])))
            return acc
        acc = self.zero_vector()
        for coef, words in parse_combination(expr):
            acc = self.add(acc, self.scale(self.field(coef), self.word(words)))
        return acc

    def format_element(self, x) -> str:
        terms = []
        for k, c in enumerate(x):
            if not c:
                continue
            p = self.basis_paths[k]
            w = self._word(p[1]) if p[1] else f"e{p[0] + 1}"
            terms.append(w if c == 1 else f"{c}*{w}")
        return " + ".join(terms) if terms else "0"

    def relation_value(self, rel: dict, arrow_images: Sequence) -> list:
        """Evaluate a relation after substituting arrow ``a`` by ``arrow_images[a]``."""
        acc = self.zero_vector()
        for p, c in rel.items():
            term = arrow_images[p[0]]
            for a in p[1:]:
                term = self.mul(term, arrow_images[a])
            acc = self.add(acc, self.scale(c, term))
        return acc


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*]))")


def parse_combination(text: str) -> list[tuple[Fraction, list[str]]]:
    """``"2*a*b - c + 1/2"`` -> [(2, ['a','b']), (-1, ['c']), (1/2, [])]."""
    toks = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"unexpected character at column {pos + 1}: {text[pos:]!r}")
        pos = m.end()
        kind = m.lastgroup
        toks.append((kind, m.group(kind)))
    terms = []
    i = 0
    sign = 1
    expect_term = True
    coef: Fraction | None = None
    words: list[str] = []

    def flush():
        nonlocal coef, words
        terms.append((sign * (coef if coef is not None else Fraction(1)), words))
        coef, words = None, []

    while i < len(toks):
        kind, val = toks[i]
        if expect_term:
            if kind == "op" and val in "+-":
                sign = sign * (-1 if val == "-" else 1)
            elif kind == "num":
                coef = (coef or Fraction(1)) * Fraction(val)
                expect_term = False
            elif kind == "name":
                words.append(val)
                expect_term = False
            else:
                raise ValueError(f"unexpected {val!r}")
        else:
            if kind == "op" and val == "*":
                expect_term = True
                # after '*', a name or number continues the same term
                i += 1
                if i >= len(toks) or toks[i][0] == "op":
                    raise ValueError("dangling '*'")
                kind, val = toks[i]
                if kind == "num":
                    coef = (coef or Fraction(1)) * Fraction(val)
                else:
                    words.append(val)
                expect_term = False
            elif kind == "op":
                flush()
                sign = -1 if val == "-" else 1
                expect_term = True
            elif kind == "name":
                # juxtaposition "2 a1" is allowed after a coefficient
                words.append(val)
            else:
                raise ValueError(f"unexpected {val!r}")
        i += 1
    if expect_term:
        if coef is None and not words:
            if terms or sign != 1:
                raise ValueError("expression ends with an operator")
            return []
    flush()
    return terms


# -- automorphisms ---------------------------------------------------------------

class Automorphism:
    """Algebra automorphism: vertex permutation plus arrow images."""

    def __init__(self, A: PathAlgebra, perm: Sequence[int], arrow_images: Sequence, name: str = "",
                 check: bool = True):
        self.A = A
        self.perm = list(perm)
        self.arrow_images = [list(x) for x in arrow_images]
        self.name = name
        Q = A.quiver
        if sorted(self.perm) != list(range(Q.n_vertices)):
            raise ValueError("vertex map is not a permutation")
        if len(self.arrow_images) != len(Q.arrows):
            raise ValueError("one image per arrow required")
        for a, img in enumerate(self.arrow_images):
            s, t = self.perm[Q.source(a)], self.perm[Q.target(a)]
            if A.mul(A.mul(A.idempotents[s], img), A.idempotents[t]) != img:
                raise ValueError(f"image of {Q.names[a]} is not in e_{s + 1} A e_{t + 1}")
        self.matrix = self._basis_matrix()
        if check:
            self.validate()

    def _basis_matrix(self) -> Matrix:
        A = self.A
        cols = []
        for p in A.basis_paths:
            s, arr = p
            img = list(A.idempotents[self.perm[s]])
            for a in arr:
                img = A.mul(img, self.arrow_images[a])
            cols.append(img)
        return Matrix.from_columns(A.field, cols, A.dim)

    def validate(self):
        A = self.A
        for rel in A.relations:
            if any(A.relation_value(rel, self.arrow_images)):
                raise ValueError(f"automorphism {self.name!r} does not preserve the relations")
        if rank(self.matrix) != A.dim:
            raise ValueError(f"automorphism {self.name!r} is not invertible")

    def __call__(self, x) -> list:
        return self.matrix.apply(x)

    def compose(self, other: "Automorphism", name: str = "") -> "Automorphism":
        """``self o other``."""
        perm = [self.perm[other.perm[v]] for v in range(len(self.perm))]
        imgs = [self(x) for x in other.arrow_images]
        return Automorphism(self.A, perm, imgs, name or f"{self.name}{other.name}", check=False)

    def inverse(self) -> "Automorphism":
        inv = self.matrix.inverse()
        perm = [0] * len(self.perm)
        for v, w in enumerate(self.perm):
            perm[w] = v
        imgs = [inv.apply(self.A.arrow(a)) for a in range(len(self.A.quiver.arrows))]
        return Automorphism(self.A, perm, imgs, name=f"{self.name}^-1", check=False)

    def __eq__(self, other):
        return isinstance(other, Automorphism) and self.matrix == other.matrix

    def __hash__(self):
        return hash(tuple(tuple(str(c) for c in r) for r in self.matrix.data))

    def is_identity(self) -> bool:
        return self.matrix == Matrix.identity(self.A.field, self.A.dim)

    @classmethod
    def identity(cls, A: PathAlgebra, name: str = "1") -> "Automorphism":
        return cls(A, range(A.quiver.n_vertices), [A.arrow(a) for a in range(len(A.quiver.arrows))],
                   name=name, check=False)

    @classmethod
    def from_strings(cls, A: PathAlgebra, perm: Sequence[int], images: dict[str, str],
                     name: str = "") -> "Automorphism":
        imgs = [A.element(images.get(nm, nm)) for nm in A.quiver.names]
        return cls(A, perm, imgs, name=name)


@dataclass
class GroupAction:
    """A group acting on A through generator automorphisms.

    ``kind`` is ``"trivial"``, ``"finite"`` (element words given) or
    ``"free-cyclic"`` (one generator, infinite order).
    """

    A: PathAlgebra
    generators: dict
    kind: str = "trivial"
    element_words: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self._elements = None
        if self.kind == "finite":
            self._build_finite()
        elif self.kind == "free-cyclic" and len(self.generators) != 1:
            raise ValueError("free-cyclic action needs exactly one generator")

    @classmethod
    def trivial(cls, A: PathAlgebra) -> "GroupAction":
        return cls(A, {}, "trivial")

    @property
    def is_finite(self) -> bool:
        return self.kind in ("trivial", "finite")

    def word_automorphism(self, word: Sequence[str]) -> Automorphism:
        g = Automorphism.identity(self.A)
        for w in word:
            inv = w.endswith("^-1")
            h = self.generators[w[:-3] if inv else w]
            g = g.compose(h.inverse() if inv else h)
        return g

    def _build_finite(self):
        names = list(self.element_words)
        autos = [self.word_automorphism(self.element_words[n]) for n in names]
        if len(set(autos)) != len(autos):
            raise ValueError("finite group elements must act by distinct automorphisms")
        if not any(a.is_identity() for a in autos):
            raise ValueError("finite group data must contain the identity")
        for gname, g in self.generators.items():
            if g not in autos:
                raise ValueError(f"generator {gname} is not among the listed elements")
        lookup = {a: i for i, a in enumerate(autos)}
        table = []
        for a in autos:
            row = []
            for b in autos:
                c = a.compose(b)
                if c not in lookup:
                    raise ValueError("listed elements are not closed under composition")
                row.append(lookup[c])
            table.append(row)
        for i, a in enumerate(autos):
            a.name = names[i]
        self._elements = autos
        self.element_names = names
        self.mult_table = table
        self.identity_index = next(i for i, a in enumerate(autos) if a.is_identity())

    def elements(self) -> list[Automorphism]:
        if self.kind == "trivial":
            return [Automorphism.identity(self.A)]
        if self.kind == "finite":
            return list(self._elements)
        raise InfiniteGroup("the free cyclic group has no finite element list")

    def order(self) -> int:
        return len(self.elements())

    def generator_list(self) -> list[tuple[str, Automorphism]]:
        return sorted(self.generators.items())


class SkewGroupAlgebra(FiniteAlgebra):
    """``A * G`` with product ``(a (x) g)(b (x) h) = a g(b) (x) gh``.

    Basis index ``gi * dim A + k`` stands for ``b_k (x) g_gi``.  The
    starting idempotents are ``e_v (x) 1``; they need not be primitive.
    """

    def __init__(self, A: PathAlgebra, action: GroupAction):
        if not action.is_finite:
            raise InfiniteGroup("skew group algebra needs a finite group")
        self.base = A
        self.action = action
        elems = action.elements()
        if action.kind == "trivial":
            table_g = [[0]]
            ident = 0
        else:
            table_g = action.mult_table
            ident = action.identity_index
        self.group_size = n = len(elems)
        self.group_table = table_g
        self.identity_index = ident
        d = A.dim
        images = [[g.matrix.column(b) for b in range(d)] for g in elems]
        table = []
        for gi in range(n):
            for a in range(d):
                ea = A.basis_vector(a)
                row = []
                for hi in range(n):
                    off = table_g[gi][hi] * d
                    for b in range(d):
                        prod = A.mul(ea, images[gi][b])
                        row.append([(off + k, c) for k, c in enumerate(prod) if c])
                table.append(row)
        # rows are indexed (gi, a), columns (hi, b) -> both flatten to gi*d + a
        one = [A.field.zero] * (n * d)
        for k, c in enumerate(A.one):
            one[ident * d + k] = c
        idem = []
        for e in A.idempotents:
            v = [A.field.zero] * (n * d)
            for k, c in enumerate(e):
                v[ident * d + k] = c
            idem.append(v)
        super().__init__(A.field, table, one, idem, name=f"{A.name}*G")

    def embed_base(self, x) -> list:
        v = [self.field.zero] * self.dim
        off = self.identity_index * self.base.dim
        for k, c in enumerate(x):
            v[off + k] = c
        return v

    def component(self, gi: int) -> list[int]:
        d = self.base.dim
        return list(range(gi * d, (gi + 1) * d))

    def is_strongly_graded(self) -> bool:
        """Check ``R_g R_{g^-1} = R_1`` for every g."""
        d = self.base.dim
        inv = {gi: next(hi for hi in range(self.group_size)
                        if self.group_table[gi][hi] == self.identity_index)
               for gi in range(self.group_size)}
        for gi in range(self.group_size):
            prods = [self.mul(self.basis_vector(a), self.basis_vector(b))
                     for a in self.component(gi) for b in self.component(inv[gi])]
            M = Matrix.from_columns(self.field, prods, self.dim)
            if rank(M) != d:
                return False
        return True

    def grading_respected(self) -> bool:
        d = self.base.dim
        for x in range(self.dim):
            for y in range(self.dim):
                gx, gy = x // d, y // d
                target = self.group_table[gx][gy]
                if any(k // d != target for k, _ in self.table[x][y]):
                    return False
        return True
