"""Random bounded complexes of projectives for property tests."""
from gtilt.complexes import ProjComplex, ematrix_mul, ematrix_zero
from gtilt.exact import Matrix, nullspace


def _random_corner(A, rng, tgt, src, density):
    x = A.zero_vector()
    if rng.random() > density:
        return x
    for b in A.corner_basis(tgt, src):
        c = rng.randint(-2, 2)
        if c:
            x = A.add(x, A.scale(A.field(c), b))
    return x


def random_complex(A, rng, max_width=3, max_mult=2, density=0.8, lo_range=(-2, 1)):
    n = A.n_idempotents
    width = rng.randint(0, max_width)
    lo = rng.randint(*lo_range)
    terms = {}
    for k in range(lo, lo + width + 1):
        vs = []
        for v in range(n):
            vs += [v] * rng.randint(0, max_mult)
        rng.shuffle(vs)
        terms[k] = tuple(vs[:4])
    terms = {k: vs for k, vs in terms.items() if vs} or {lo: (rng.randrange(n),)}
    diffs = {}
    prev = None
    for k in range(lo, lo + width + 1):
        src, tgt = terms.get(k, ()), terms.get(k + 1, ())
        if not src or not tgt:
            prev = None
            continue
        if prev is None:
            D = [[_random_corner(A, rng, t, s, density) for s in src] for t in tgt]
        else:
            D = _annihilating(A, rng, tgt, src, prev, density)
        diffs[k] = D
        prev = D
    return ProjComplex(A, terms, diffs, check=True)


def _annihilating(A, rng, tgt, src, prev, density):
    """Random D with D * prev = 0, entries in the right corners."""
    variables = []
    columns = []
    for r, t in enumerate(tgt):
        for c, s in enumerate(src):
            for b in A.corner_basis(t, s):
                E = ematrix_zero(A, len(tgt), len(src))
                E[r][c] = b
                prod = ematrix_mul(A, E, prev)
                columns.append([x for row in prod for entry in row for x in entry])
                variables.append((r, c, b))
    D = ematrix_zero(A, len(tgt), len(src))
    if not variables:
        return D
    N = nullspace(Matrix.from_columns(A.field, columns, len(columns[0])))
    for j in range(N.cols):
        if rng.random() > density:
            continue
        coef = A.field(rng.randint(-2, 2))
        for i, (r, c, b) in enumerate(variables):
            a = N.data[i][j]
            if a:
                D[r][c] = A.add(D[r][c], A.scale(coef * a, b))
    return D


def random_chain_map(T, U, m, rng):
    from gtilt.complexes import hom_basis
    basis = hom_basis(T, U, m)
    f = None
    for g in basis:
        c = rng.randint(-2, 2)
        if c:
            f = g.scale(c) if f is None else f + g.scale(c)
    return f
