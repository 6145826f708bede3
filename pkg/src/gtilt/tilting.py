"""Tilting verification, endomorphism algebras, simple-minded conditions,
orthogonal constructions and the Abe-Hoshino completion."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import FiniteAlgebra
from .complexes import (ChainMap, ModuleComplex, ProjComplex, chainmap_to_vector, cone, derived_hom,
                        direct_sum, hom_basis, hom_dim, hom_homotopy, is_homotopy_equivalent,
                        minimal_approximation, minimize, nakayama_complex, radical_maps, shift,
                        summand_inventory, twist_complex)
from .exact import Matrix, solve
from .modules import Representation, is_isomorphic, nakayama_module, projective, twist
from .quiver import GroupAction, PathAlgebra


class GenerationUndecided(RuntimeError):
    def __init__(self, message, residue=None):
        super().__init__(message)
        self.residue = residue


class OrthogonalityFails(RuntimeError):
    pass


class ConditionFails(RuntimeError):
    def __init__(self, label: str, witness):
        super().__init__(f"condition ({label}) fails: {witness}")
        self.label = label
        self.witness = witness


class BudgetExhausted(RuntimeError):
    def __init__(self, message, table=None):
        super().__init__(message)
        self.table = table


class HypothesisFails(RuntimeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class SearchExhausted(RuntimeError):
    pass


def _det_int(rows: list[list[int]]) -> int:
    from fractions import Fraction
    from .exact import QQ
    if not rows or len(rows) != len(rows[0]):
        return 0
    return int(Matrix(QQ, len(rows), len(rows), [[Fraction(x) for x in r] for r in rows]).determinant())


# -- generation -----------------------------------------------------------------------

@dataclass
class GenerationResult:
    certified: bool
    length: int                      # number of triangles beyond add(T); -1 if not certified
    stages: list = field(default_factory=list)   # per stage: (degree b, [summand index per map])
    residue: ProjComplex | None = None


def generation_tower(summands: Sequence[ProjComplex], X: ProjComplex, depth: int) -> GenerationResult:
    """Peel X by minimal right approximations from the top Hom degree downward.

    With T self-orthogonal, each stage lowers the top degree of Hom(T, X[*])
    without extending it below, so X lies in thick(T) exactly when this ends
    in a contractible complex.  A residue with vanishing Hom from T that is
    not contractible witnesses non-generation."""
    radmaps = radical_maps(summands)
    stages = []
    X = minimize(X)
    for stage in range(depth + 2):
        if X.is_zero():
            return GenerationResult(True, max(len(stages) - 1, 0), stages)
        best = None
        for S in summands:
            for m in range(X.lo - S.hi, X.hi - S.lo + 1):
                if hom_dim(S, X, m):
                    best = m if best is None else max(best, m)
        if best is None:
            return GenerationResult(False, -1, stages, X)
        if stage > depth:
            break
        src, f, chosen = minimal_approximation(summands, X, best, radmaps)
        stages.append((best, [j for j, _ in chosen]))
        X = minimize(cone(f))
    return GenerationResult(False, -1, stages, X)


# -- tilting verification -------------------------------------------------------------

@dataclass
class TiltingReport:
    hom_table: dict                  # m -> dim Hom(T, T[m])
    orthogonal: bool
    summands: list                   # [(complex, multiplicity)]
    k0_matrix: list
    k0_det: int
    generation: GenerationResult
    window: tuple

    @property
    def unimodular(self) -> bool:
        return abs(self.k0_det) == 1

    @property
    def is_tilting(self) -> bool:
        return self.orthogonal and self.unimodular and self.generation.certified

    def failed_conditions(self) -> list[str]:
        out = []
        if not self.orthogonal:
            out.append("ii")
        if not (self.unimodular and self.generation.certified):
            out.append("iii")
        return out

    def as_dict(self) -> dict:
        return {
            "verdict": "tilting" if self.is_tilting else "not tilting",
            "window": list(self.window),
            "self_orthogonality": {str(m): d for m, d in sorted(self.hom_table.items())},
            "orthogonal": self.orthogonal,
            "summands": [{"complex": S.describe(), "multiplicity": k} for S, k in self.summands],
            "k0_matrix": self.k0_matrix,
            "k0_determinant": self.k0_det,
            "generation": {
                "certified": self.generation.certified,
                "length": self.generation.length,
                "stages": [{"degree": b, "summands": [j + 1 for j in js]}
                           for b, js in self.generation.stages],
                "residue": self.generation.residue.describe() if self.generation.residue else None,
            },
            "failed": self.failed_conditions(),
        }


def default_window(*complexes) -> tuple[int, int]:
    w = sum(T.width for T in complexes) + 2
    return (-w, w)


def verify_tilting(T: ProjComplex, window: tuple[int, int] | None = None, depth: int = 4,
                   rng: random.Random | None = None) -> TiltingReport:
    window = window or default_window(T, T)
    lo, hi = min(window[0], -T.width), max(window[1], T.width)
    table = {m: hom_dim(T, T, m) for m in range(lo, hi + 1)}
    orth = all(d == 0 for m, d in table.items() if m != 0)
    inv = summand_inventory(T, rng)
    summands = [S for S, _ in inv]
    k0 = [S.k0_class() for S in summands]
    det = _det_int(k0)
    A = T.A
    if orth:
        gen = generation_tower(summands, ProjComplex.regular(A), depth)
    else:
        gen = GenerationResult(False, -1, [], None)
    return TiltingReport(table, orth, inv, k0, det, gen, (lo, hi))


def require_tilting(T: ProjComplex, **kw) -> TiltingReport:
    rep = verify_tilting(T, **kw)
    if not rep.orthogonal:
        bad = {m: d for m, d in rep.hom_table.items() if m and d}
        raise OrthogonalityFails(f"Hom(T, T[m]) nonzero for {bad}")
    if not rep.generation.certified:
        raise GenerationUndecided("generation not certified", rep.generation.residue)
    return rep


# -- endomorphism algebras --------------------------------------------------------------

@dataclass
class EndoAlgebra:
    algebra: FiniteAlgebra
    reps: list                       # ChainMap representatives of the basis
    idempotents: list
    cartan: list
    arrows: list
    radical_dim: int

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def as_dict(self) -> dict:
        return {"dimension": self.dim, "radical_dimension": self.radical_dim,
                "primitive_idempotents": len(self.idempotents),
                "cartan_matrix": self.cartan, "arrow_matrix": self.arrows}


def _projection(T: ProjComplex, sizes: list[dict], which: int) -> ChainMap:
    """Projection onto the ``which``-th block of a direct sum; ``sizes`` are the
    per-degree summand counts of the parts."""
    A = T.A
    blocks = {}
    for k, vs in T.terms.items():
        off = sum(s.get(k, 0) for s in sizes[:which])
        n = sizes[which].get(k, 0)
        B = [[A.zero_vector() for _ in vs] for _ in vs]
        for r in range(off, off + n):
            B[r][r] = A.vertex_idempotent(vs[r])
        blocks[k] = B
    return ChainMap(T, T, 0, blocks)


def endomorphism_algebra(T: ProjComplex, parts: Sequence[ProjComplex] | None = None,
                         rng: random.Random | None = None) -> EndoAlgebra:
    """``End_K(T)`` with product ``f * g = g o f`` (maps compose left to right,
    like paths); for T = A this is A^op.  If ``parts`` is given, T is taken to be
    their direct sum and the part projections are used as the idempotents;
    otherwise primitive idempotents are computed."""
    if parts is not None:
        T = direct_sum(list(parts), T.A if T is not None else parts[0].A)
    H = hom_homotopy(T, T, 0)
    F = T.A.field
    n = H.dim
    from .complexes import vector_to_chainmap
    reps = [vector_to_chainmap(T, T, 0, v, H.slots) for v in H.reps]
    vl = len(H.reps[0]) if H.reps else 0
    M = Matrix.from_columns(F, H.reps + H.boundaries, vl) if n else None

    def coords(v):
        x = solve(M, Matrix.from_columns(F, [v], vl))
        if x is None:
            raise AssertionError("composition left the Hom space")
        return x.column(0)[:n]

    table = []
    for a in range(n):
        row = []
        for b in range(n):
            prod = chainmap_to_vector(reps[b].compose(reps[a]))
            row.append([(k, c) for k, c in enumerate(coords(prod)) if c])
        table.append(row)
    one = coords(chainmap_to_vector(ChainMap.identity(T))) if n else []
    E = FiniteAlgebra(F, table, one, name="End(T)")
    if parts is not None:
        sizes = [{k: len(vs) for k, vs in P.terms.items()} for P in parts]
        idem = [coords(chainmap_to_vector(_projection(T, sizes, i))) for i in range(len(parts))]
    else:
        idem = E.primitive_idempotents(rng=rng)
    E = E.with_idempotents(idem)
    return EndoAlgebra(E, reps, idem, E.cartan_matrix(), E.arrow_matrix(), len(E.radical_basis()))


def matrices_match_up_to_relabeling(M: list[list[int]], N: list[list[int]]) -> list[int] | None:
    """A permutation p with ``M[p[i]][p[j]] = N[i][j]``, or None."""
    n = len(M)
    if n != len(N):
        return None
    for p in itertools.permutations(range(n)):
        if all(M[p[i]][p[j]] == N[i][j] for i in range(n) for j in range(n)):
            return list(p)
    return None


# -- objects for the condition checker ------------------------------------------------

@dataclass
class DObject:
    """A module placed in a degree (``module[shift]``) or a complex of projectives."""
    module: Representation | None = None
    shift: int = 0
    complex: ProjComplex | None = None
    name: str = ""

    @property
    def A(self):
        return self.module.A if self.module is not None else self.complex.A

    def target(self):
        if self.complex is not None:
            return self.complex
        return ModuleComplex(self.module.A, {-self.shift: self.module})

    def dimension_class(self) -> list[int]:
        """``sum_m (-1)^m dim Hom(P_j, X[m])`` for each vertex j."""
        if self.complex is not None:
            n = self.A.quiver.n_vertices
            out = [0] * n
            for j in range(n):
                P = ProjComplex.stalk(self.A, (j,))
                for m in range(self.complex.lo - 0, self.complex.hi + 1):
                    out[j] += (-1) ** (m % 2) * hom_dim(P, self.complex, m)
            return out
        s = -1 if self.shift % 2 else 1
        return [s * d for d in self.module.dims]

    def twisted(self, g) -> "DObject":
        if self.complex is not None:
            return DObject(complex=twist_complex(g, self.complex), name=f"{g.name}.{self.name}")
        return DObject(module=twist(g, self.module), shift=self.shift, name=f"{g.name}.{self.name}")

    def nakayama(self) -> "DObject":
        if self.complex is not None:
            return DObject(complex=nakayama_complex(self.complex), name=f"nu({self.name})")
        return DObject(module=nakayama_module(self.module), shift=self.shift, name=f"nu({self.name})")


def as_object(x, name: str = "") -> DObject:
    if isinstance(x, DObject):
        return x
    if isinstance(x, Representation):
        return DObject(module=x, name=name or x.name)
    if isinstance(x, ProjComplex):
        return DObject(complex=x, name=name or x.name)
    if isinstance(x, tuple):
        return DObject(module=x[0], shift=x[1], name=name or f"{x[0].name}[{x[1]}]")
    raise TypeError(f"unsupported object {x!r}")


def object_hom(X: DObject, Y: DObject, m: int) -> int:
    """``dim Hom_D(X, Y[m])``."""
    if X.complex is not None:
        return hom_dim(X.complex, Y.target(), m)
    return derived_hom(X.module, Y.target(), m - X.shift)


def objects_isomorphic(X: DObject, Y: DObject, rng=None) -> bool:
    if X.complex is None and Y.complex is None:
        return X.shift == Y.shift and is_isomorphic(X.module, Y.module, rng)
    if X.complex is not None and Y.complex is not None:
        return is_homotopy_equivalent(X.complex, Y.complex, rng)
    return False


# -- simple-minded conditions -----------------------------------------------------------

@dataclass
class ConditionReport:
    hom_tables: dict                 # (i, j) -> {m: dim}
    results: dict                    # label -> bool
    failures: list                   # (label, witness)
    sigma: list | None
    g_set: dict
    k0_matrix: list
    k0_det: int
    sigma_equivariant: bool | None

    @property
    def passed(self) -> bool:
        return not self.failures

    def as_dict(self) -> dict:
        return {
            "verdict": "pass" if self.passed else "fail",
            "conditions": {k: v for k, v in sorted(self.results.items())},
            "failures": [{"condition": lab, "witness": w} for lab, w in self.failures],
            "nakayama_permutation": [s + 1 for s in self.sigma] if self.sigma is not None else None,
            "sigma_equivariant": self.sigma_equivariant,
            "k0_matrix": self.k0_matrix,
            "k0_determinant": self.k0_det,
            "hom_tables": {f"{i + 1},{j + 1}": {str(m): d for m, d in sorted(t.items())}
                           for (i, j), t in sorted(self.hom_tables.items())},
        }


def check_conditions(objects: Sequence, action: GroupAction | None = None,
                     g_set: dict | None = None, window: tuple[int, int] = (-3, 3),
                     rng: random.Random | None = None, raise_on_fail: bool = False) -> ConditionReport:
    """Conditions (a)-(e) on a candidate system of objects X_1..X_n.

    ``g_set`` maps each generator name to the permutation of object indices it
    induces (default: identity).  Condition (c) is checked through the
    necessary integral criterion on dimension classes."""
    X = [as_object(x) for x in objects]
    n = len(X)
    lo, hi = window
    tables = {}
    for i in range(n):
        for j in range(n):
            tables[(i, j)] = {m: object_hom(X[i], X[j], m) for m in range(lo, min(hi, 0) + 1)}
    results, failures = {}, []

    def fail(label, witness):
        failures.append((label, witness))

    # (a) no negative extensions
    ok = True
    for (i, j), t in sorted(tables.items()):
        for m, d in sorted(t.items()):
            if m < 0 and d:
                ok = False
                fail("a", f"Hom({X[i].name}, {X[j].name}[{m}]) has dimension {d}")
    results["a"] = ok
    # (b) Schur orthogonality in degree 0
    ok = True
    for (i, j), t in sorted(tables.items()):
        want = 1 if i == j else 0
        if t.get(0, 0) != want:
            ok = False
            fail("b", f"dim Hom({X[i].name}, {X[j].name}) = {t.get(0, 0)}, expected {want}")
    results["b"] = ok
    # (c) integral necessary condition
    k0 = [x.dimension_class() for x in X]
    det = _det_int(k0)
    results["c"] = abs(det) == 1
    if not results["c"]:
        fail("c", f"dimension classes have determinant {det}")
    # (d) Nakayama permutation
    sigma = []
    for i in range(n):
        try:
            nu = X[i].nakayama()
        except ValueError as exc:
            sigma = None
            fail("d", f"nu({X[i].name}) unavailable: {exc}")
            break
        match = next((j for j in range(n) if objects_isomorphic(nu, X[j], rng)), None)
        if match is None:
            sigma = None
            fail("d", f"nu({X[i].name}) is not isomorphic to any object")
            break
        sigma.append(match)
    results["d"] = sigma is not None and sorted(sigma) == list(range(n))
    if sigma is not None and not results["d"]:
        fail("d", f"nu induces the non-bijective map {sigma}")
    # (e) conjugation
    gens = action.generator_list() if action is not None else []
    g_set = {name: list(g_set[name]) if g_set and name in g_set else list(range(n)) for name, _ in gens}
    ok = True
    for name, g in gens:
        perm = g_set[name]
        for i in range(n):
            if not objects_isomorphic(X[i].twisted(g), X[perm[i]], rng):
                ok = False
                fail("e", f"{name}.{X[i].name} is not isomorphic to {X[perm[i]].name}")
    results["e"] = ok
    equiv = None
    if sigma is not None and results["d"]:
        equiv = all(sigma[g_set[name][i]] == g_set[name][sigma[i]] for name, _ in gens for i in range(n))
    rep = ConditionReport(tables, results, failures, sigma, g_set, k0, det, equiv)
    if raise_on_fail and failures:
        raise ConditionFails(*failures[0])
    return rep


# -- orthogonal constructions -------------------------------------------------------------

def orthogonality_table(T: Sequence[ProjComplex], X: Sequence, side: str, window) -> dict:
    """``(i, j) -> {m: dim}`` with Hom(T_i, X_j[m]) (projective side) or
    Hom(X_j, T_i[m]) (injective side)."""
    objs = [as_object(x) for x in X]
    out = {}
    for i, Ti in enumerate(T):
        To = DObject(complex=Ti)
        for j, Xj in enumerate(objs):
            if side == "projective":
                out[(i, j)] = {m: object_hom(To, Xj, m) for m in range(window[0], window[1] + 1)}
            else:
                out[(i, j)] = {m: object_hom(Xj, To, m) for m in range(window[0], window[1] + 1)}
    return out


def _row_ok(row: dict, i: int) -> bool:
    return all(d == (1 if (j == i and m == 0) else 0) for j, t in row.items() for m, d in t.items())


def _candidates(A: PathAlgebra, degrees: Sequence[int], rounds: int):
    """Stalk projectives, then minimal cones of Hom-basis maps between earlier candidates."""
    n = A.quiver.n_vertices
    pool = [ProjComplex.stalk(A, (v,), k) for k in degrees for v in range(n)]
    seen = list(pool)
    yield from pool
    for _ in range(rounds):
        new = []
        for U, V in itertools.product(pool, seen):
            for m in range(V.lo - U.hi, V.hi - U.lo + 1):
                for f in hom_basis(U, V, m):
                    C = minimize(shift(cone(f), -1)) if m == 0 else minimize(cone(f))
                    if C.is_zero() or any(C.terms == S.terms and C.diffs == S.diffs for S in seen):
                        continue
                    new.append(C)
                    seen.append(C)
                    yield C
        pool = new


def construct_orthogonal(X: Sequence, side: str = "projective", window: tuple[int, int] = (-3, 3),
                         budget: int = 400) -> list[ProjComplex]:
    """Complexes T_i with the delta-orthogonality pattern against the system X.

    Best-effort search over stalk projectives and iterated cones of Hom-basis
    maps; every returned family is re-verified on the full window."""
    if side not in ("projective", "injective"):
        raise ValueError("side must be 'projective' or 'injective'")
    objs = [as_object(x) for x in X]
    n = len(objs)
    A = objs[0].A
    if side == "injective":
        from .modules import is_self_injective
        if not is_self_injective(A):
            raise ValueError("injective side needs a self-injective algebra "
                             "(complexes of injectives are then complexes of projectives)")
    found: list = [None] * n
    examined = 0
    degrees = sorted({-o.shift for o in objs if o.complex is None} | {0}, key=abs)
    for C in _candidates(A, degrees, rounds=3):
        examined += 1
        if examined > budget:
            break
        for i in range(n):
            if found[i] is not None:
                continue
            row = orthogonality_table([C], objs, side, window)
            row = {j: t for (_, j), t in row.items()}
            if _row_ok(row, i):
                found[i] = C
                break
        if all(f is not None for f in found):
            break
    if any(f is None for f in found):
        table = {i: f.describe() if f is not None else None for i, f in enumerate(found)}
        raise BudgetExhausted(f"no orthogonal complex found for objects "
                              f"{[objs[i].name for i in range(n) if found[i] is None]}", table)
    final = orthogonality_table(found, objs, side, window)
    for i in range(n):
        if not _row_ok({j: final[(i, j)] for j in range(n)}, i):
            raise AssertionError("constructed family failed re-verification")
    return found


def dg_endo_cohomology(X: Sequence, window: tuple[int, int] = (-3, 3),
                       action: GroupAction | None = None, orthogonal=None) -> dict:
    """``dim H^m`` of the DG endomorphism algebra of the sum of the projective-side
    orthogonal complexes; with a finite action, the sum over all group elements
    of ``Hom(T, g.T[m])``."""
    T = orthogonal if orthogonal is not None else construct_orthogonal(X, "projective", window)
    S = direct_sum(list(T))
    twists = [None]
    if action is not None and action.kind == "finite":
        twists = action.elements()
    out = {}
    for m in range(window[0], window[1] + 1):
        tot = 0
        for g in twists:
            tot += hom_dim(S, S if g is None else twist_complex(g, S), m)
        out[m] = tot
    return out


# -- Abe-Hoshino completion --------------------------------------------------------------

def _g_closure(P: ProjComplex, action: GroupAction | None) -> list[ProjComplex]:
    summands = [S for S, _ in summand_inventory(P)]
    if action is None:
        return summands
    changed = True
    gens = [g for _, g in action.generator_list()]
    gens = gens + [g.inverse() for g in gens]
    while changed:
        changed = False
        for S in list(summands):
            for g in gens:
                S2 = minimize(twist_complex(g, S))
                if not any(is_homotopy_equivalent(S2, U) for U in summands):
                    summands.append(S2)
                    changed = True
    return summands


def abe_hoshino_complete(P: ProjComplex, action: GroupAction | None = None, depth: int = 4,
                         window: tuple[int, int] | None = None) -> ProjComplex:
    """A complex Q such that P + Q is a G-invariant tilting complex, built from
    minimal right add(P)-approximations of the projectives missing from P."""
    A = P.A
    gens = action.generator_list() if action is not None else []
    for name, g in gens:
        gP = twist_complex(g, P)
        for m in range(-(P.width + gP.width + 1), P.width + gP.width + 2):
            if m and hom_dim(P, gP, m):
                raise HypothesisFails(f"Hom(P, {name}.P[{m}]) is nonzero", (name, m))
    summands = _g_closure(P, action)
    for S in summands:
        nS = minimize(nakayama_complex(S))
        if not any(is_homotopy_equivalent(nS, U) for U in summands):
            raise HypothesisFails(f"nu of summand {S!r} is not in add P", S.describe())
    base = direct_sum(summands)
    present = set()
    for S in summands:
        if len(S.terms) == 1 and len(next(iter(S.terms.values()))) == 1:
            present.add(next(iter(S.terms.values()))[0])
    missing = [v for v in range(A.quiver.n_vertices) if v not in present]
    if not missing:
        return ProjComplex.zero(A)
    radmaps = radical_maps(summands)
    parts = []
    for v in missing:
        target = ProjComplex.stalk(A, (v,), 0)
        _, f, _ = minimal_approximation(summands, target, 0, radmaps)
        parts.append(minimize(shift(cone(f), -1)))
    Q = direct_sum(parts, A)
    Q.name = "Q"
    rep = verify_tilting(direct_sum([base, Q]), window=window, depth=depth)
    if not rep.is_tilting:
        raise SearchExhausted(f"approximation candidate is not tilting (failed {rep.failed_conditions()})")
    for name, g in gens:
        if not is_homotopy_equivalent(twist_complex(g, Q), Q):
            raise SearchExhausted(f"candidate Q is not invariant under {name}")
    return Q
