"""Exact linear algebra on the dual lattices M = Z^n and N = Hom(M, Z).

Everything is integers or ``fractions.Fraction``; there is no floating point
anywhere in the package.  Points of N and of M share the tuple representation;
``NPoint`` and ``MPoint`` are thin tags so that ``pairing`` can refuse
arguments given in the wrong order.
"""
from fractions import Fraction
from functools import reduce
from math import gcd

from .errors import DimensionMismatch, LinearAlgebraError


class NPoint(tuple):
    """A point of N (or N_Q): ray generators, support-function arguments."""

    __slots__ = ()

    def __new__(cls, coords):
        return super().__new__(cls, coords)

    def __repr__(self):
        return "N(" + ", ".join(str(x) for x in self) + ")"


class MPoint(tuple):
    """A point of M (or M_Q): vertices, linear parts h_sigma."""

    __slots__ = ()

    def __new__(cls, coords):
        return super().__new__(cls, coords)

    def __repr__(self):
        return "M(" + ", ".join(str(x) for x in self) + ")"


def as_rational(x):
    if isinstance(x, (int, Fraction)):
        return x
    if isinstance(x, float):
        raise TypeError("floating point values are not accepted; use Fraction")
    return Fraction(x)


def pairing(p, m):
    """The canonical pairing (p, m) for p in N and m in M."""
    if isinstance(p, MPoint) or isinstance(m, NPoint):
        raise TypeError("pairing expects (N-side point, M-side point)")
    if len(p) != len(m):
        raise DimensionMismatch(f"cannot pair vectors of length {len(p)} and {len(m)}")
    return sum(a * b for a, b in zip(p, m))


def dot(u, v):
    """Untagged dot product, for internal use on homogenised coordinates."""
    return sum(a * b for a, b in zip(u, v))


def primitivize(v):
    """Divide an integer vector by the gcd of its entries."""
    v = tuple(v)
    if not any(v):
        raise LinearAlgebraError("zero vector has no primitive generator")
    if any(isinstance(x, Fraction) and x.denominator != 1 for x in v):
        raise LinearAlgebraError("primitivize expects an integer vector")
    v = tuple(int(x) for x in v)
    g = reduce(gcd, v, 0)
    return tuple(x // g for x in v)


def integral_direction(v):
    """Primitive integer vector on the ray through a nonzero rational vector."""
    v = tuple(Fraction(x) for x in v)
    if not any(v):
        raise LinearAlgebraError("zero vector has no direction")
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in v), 1)
    return primitivize(int(x * den) for x in v)


def rref(rows, ncols=None):
    """Reduced row echelon form over Q.  Returns (rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows):
    rows = list(rows)
    if not rows:
        return 0
    return len(rref(rows)[1])


def nullspace(rows, ncols):
    """Basis of {x : rows . x = 0} as a list of rational vectors."""
    red, pivots = rref(rows, ncols) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, pc in zip(red, pivots):
            x[pc] = -row[f]
        basis.append(x)
    return basis


def determinant(rows):
    """Exact determinant of a square integer or rational matrix."""
    m = [[Fraction(x) for x in r] for r in rows]
    n = len(m)
    if any(len(r) != n for r in m):
        raise DimensionMismatch("determinant of a non-square matrix")
    det = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def solve(A, b):
    """Unique solution x of A x = b; raises if singular or inconsistent."""
    n = len(A[0])
    aug = [list(r) + [bi] for r, bi in zip(A, b)]
    red, pivots = rref(aug, n + 1)
    if n in pivots:
        raise LinearAlgebraError("inconsistent linear system")
    if len(pivots) < n:
        raise LinearAlgebraError("linear system has no unique solution")
    return [red[i][n] for i in range(n)]


def simplicial_coordinates(u, generators):
    """Coefficients alpha with u = sum(alpha_i * generators[i])."""
    gens = [tuple(g) for g in generators]
    if not gens:
        raise LinearAlgebraError("no generators")
    n = len(u)
    if any(len(g) != n for g in gens):
        raise DimensionMismatch("generators and point differ in dimension")
    if rank(gens) < len(gens):
        raise LinearAlgebraError("generators are linearly dependent")
    # columns are the generators
    A = [[g[i] for g in gens] for i in range(n)]
    aug = [A[i] + [u[i]] for i in range(n)]
    k = len(gens)
    red, pivots = rref(aug, k + 1)
    if k in pivots:
        raise LinearAlgebraError("point lies outside the span of the generators")
    return [red[i][k] for i in range(k)]


def cone_multiplicity(generators):
    """Index of the sublattice spanned by n independent generators."""
    gens = [tuple(g) for g in generators]
    n = len(gens[0]) if gens else 0
    if len(gens) != n:
        raise LinearAlgebraError("cone_multiplicity needs exactly n generators")
    d = determinant(gens)
    if d == 0:
        raise LinearAlgebraError("generators are linearly dependent")
    return abs(int(d))


def lattice_index(generators):
    """Multiplicity of k independent integer vectors in their saturated span.

    Equal to the gcd of the maximal minors; agrees with ``cone_multiplicity``
    when k = n.
    """
    from itertools import combinations

    gens = [tuple(g) for g in generators]
    k = len(gens)
    n = len(gens[0])
    g = 0
    for cols in combinations(range(n), k):
        g = gcd(g, abs(int(determinant([[v[c] for c in cols] for v in gens]))))
    if g == 0:
        raise LinearAlgebraError("generators are linearly dependent")
    return g


def _egcd(a, b):
    if b == 0:
        return (abs(a), (1 if a >= 0 else -1), 0)
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


def integer_kernel(rows, ncols):
    """Lattice basis of {x in Z^ncols : rows . x = 0}, saturated by construction.

    Column-style Hermite reduction: unimodular column operations bring the
    matrix to echelon form and the trailing columns of the transform span the
    kernel.
    """
    A = [[int(x) for x in r] for r in rows]
    if any(Fraction(x).denominator != 1 for r in rows for x in r):
        raise LinearAlgebraError("integer_kernel expects an integer matrix")
    U = [[int(i == j) for j in range(ncols)] for i in range(ncols)]  # U[col] = column vector

    def combine(i, j, x, y, s, t):
        # col_i <- x col_i + y col_j ; col_j <- s col_i + t col_j
        for row in A:
            a, b = row[i], row[j]
            row[i], row[j] = x * a + y * b, s * a + t * b
        ci, cj = U[i], U[j]
        U[i] = [x * a + y * b for a, b in zip(ci, cj)]
        U[j] = [s * a + t * b for a, b in zip(ci, cj)]

    col = 0
    for row in A:
        if col == ncols:
            break
        for j in range(col + 1, ncols):
            b = row[j]
            if b == 0:
                continue
            a = row[col]
            g, x, y = _egcd(a, b)
            combine(col, j, x, y, -b // g, a // g)
        if row[col] != 0:
            col += 1
    return [tuple(U[j]) for j in range(col, ncols)]
