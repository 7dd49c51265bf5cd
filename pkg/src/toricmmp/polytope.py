"""Exact polytopes in M_R given as intersections of half-spaces.

Vertex enumeration is a double-description pass over the homogenised cone
{(t, m) : t >= 0, (p, m) - a t >= 0}.  Rays with t > 0 are vertices; any ray
with t = 0 or any surviving line means the intersection is unbounded.
"""
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import product
from math import ceil, floor, gcd

from .errors import DimensionMismatch, LinearAlgebraError, UnboundedPolytopeError
from .lattice import MPoint, NPoint, as_rational, dot, integral_direction, pairing, rank


def _lcm(a, b):
    return a * b // gcd(a, b)


def _integral_row(a):
    """Positive rescaling of a rational vector to an integer vector."""
    a = [Fraction(x) for x in a]
    den = reduce(_lcm, (x.denominator for x in a), 1)
    row = [int(x * den) for x in a]
    g = reduce(gcd, row, 0)
    return tuple(x // g for x in row) if g > 1 else tuple(row)


def cone_generators(constraints, d):
    """Generators of the cone {x in Q^d : a . x >= 0 for every a}.

    Returns ``(rays, lines)``: primitive integer vectors such that the cone is
    cone(rays) + span(lines).  The rays are the extreme rays of the pointed
    part; lines are orthogonal to every constraint.
    """
    lines = [tuple(1 if i == j else 0 for j in range(d)) for i in range(d)]
    rays = []
    processed = []
    for a in (_integral_row(c) for c in constraints):
        if len(a) != d:
            raise DimensionMismatch("constraint of wrong length")
        if not any(a):
            continue
        k = next((i for i, l in enumerate(lines) if dot(a, l) != 0), None)
        if k is not None:
            line = lines.pop(k)
            v = dot(a, line)
            if v < 0:
                line = tuple(-x for x in line)
                v = -v
            lines = [_project(l2, a, line, v) for l2 in lines]
            rays = [_project(r, a, line, v) for r in rays]
            rays.append(line)
            rays = list(dict.fromkeys(r for r in rays if any(r)))
            processed.append(a)
            continue

        vals = [dot(a, r) for r in rays]
        pos = [r for r, s in zip(rays, vals) if s > 0]
        neg = [(r, s) for r, s in zip(rays, vals) if s < 0]
        new = [r for r, s in zip(rays, vals) if s >= 0]
        if neg and pos:
            target = d - len(lines) - 2
            tight = {r: frozenset(i for i, c in enumerate(processed) if dot(c, r) == 0)
                     for r in rays}
            pos_vals = [(r, dot(a, r)) for r in pos]
            for rn, sn in neg:
                zn = tight[rn]
                for rp, sp in pos_vals:
                    common = tight[rp] & zn
                    if len(common) < target:
                        continue
                    if target > 0 and rank([processed[i] for i in common]) < target:
                        continue
                    combo = tuple(sp * x - sn * y for x, y in zip(rn, rp))
                    new.append(integral_direction(combo))
        rays = list(dict.fromkeys(new))
        processed.append(a)
    return [tuple(r) for r in rays], [tuple(l) for l in lines]


def _project(vec, a, line, v):
    s = dot(a, vec)
    if s == 0:
        return tuple(vec)
    out = tuple(Fraction(x) - Fraction(s, v) * y for x, y in zip(vec, line))
    if not any(out):
        return tuple(0 for _ in out)
    return integral_direction(out)


@dataclass(frozen=True)
class Halfspace:
    """{m in M_R : (normal, m) >= level}; the normal is stored primitive."""

    normal: NPoint
    level: Fraction

    def __post_init__(self):
        normal = tuple(self.normal)
        if not any(normal):
            raise LinearAlgebraError("half-space normal must be nonzero")
        level = Fraction(as_rational(self.level))
        g = reduce(gcd, (int(x) for x in normal), 0)
        if any(Fraction(x).denominator != 1 for x in normal):
            raise LinearAlgebraError("half-space normal must be integral")
        object.__setattr__(self, "normal", NPoint(int(x) // g for x in normal))
        object.__setattr__(self, "level", level / g)

    def value(self, m):
        return pairing(self.normal, m)

    def contains(self, m):
        return pairing(self.normal, m) >= self.level

    def relaxed(self, eps):
        return Halfspace(self.normal, self.level - eps)

    def scaled(self, k):
        return Halfspace(self.normal, self.level * k)


class Polytope:
    """A bounded (possibly empty or lower dimensional) intersection of half-spaces.

    Build with :func:`intersect`; the vertex list is exact and sorted
    lexicographically.  ``dim`` is -1 for the empty polytope.
    """

    def __init__(self, halfspaces, vertices, ambient_dim):
        self.halfspaces = tuple(halfspaces)
        self.vertices = tuple(sorted(MPoint(v) for v in vertices))
        self.ambient_dim = ambient_dim
        if not self.vertices:
            self.dim = -1
        else:
            v0 = self.vertices[0]
            self.dim = rank([[a - b for a, b in zip(v, v0)] for v in self.vertices[1:]])

    @property
    def is_empty(self):
        return not self.vertices

    @property
    def is_full_dimensional(self):
        return self.dim == self.ambient_dim

    def tight(self, v):
        """Indices of the defining half-spaces whose boundary passes through v."""
        return frozenset(i for i, H in enumerate(self.halfspaces) if H.value(v) == H.level)

    def contains(self, m):
        return all(H.contains(m) for H in self.halfspaces)

    def same_set(self, other):
        return self.vertices == other.vertices

    def facet_indices(self):
        """Indices of defining half-spaces that cut out facets (one per facet)."""
        if not self.is_full_dimensional:
            raise ValueError("facets are only defined here for full-dimensional polytopes")
        seen = {}
        for i, H in enumerate(self.halfspaces):
            on = [v for v in self.vertices if H.value(v) == H.level]
            if len(on) < self.dim:
                continue
            key = frozenset(on)
            if key in seen:
                continue
            v0 = on[0]
            if rank([[a - b for a, b in zip(v, v0)] for v in on[1:]]) == self.dim - 1:
                seen[key] = i
        return sorted(seen.values())

    def vertex_facets(self, v):
        """Facet hyperplanes through v as distinct (normal, level) pairs."""
        return {(H.normal, H.level) for i, H in enumerate(self.halfspaces)
                if H.value(v) == H.level}

    def combinatorial_type(self):
        return frozenset(self.tight(v) for v in self.vertices)

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"Polytope(dim={self.dim}, vertices={len(self.vertices)}, halfspaces={len(self.halfspaces)})"


def intersect(halfspaces, ambient_dim=None):
    """Intersect half-spaces exactly; raises UnboundedPolytopeError if unbounded."""
    halfspaces = [H if isinstance(H, Halfspace) else Halfspace(*H) for H in halfspaces]
    if not halfspaces:
        raise UnboundedPolytopeError("intersection of no half-spaces is all of M_R")
    n = ambient_dim or len(halfspaces[0].normal)
    if any(len(H.normal) != n for H in halfspaces):
        raise DimensionMismatch("half-spaces of mixed dimension")
    constraints = [(1,) + (0,) * n]
    constraints += [(-H.level,) + tuple(H.normal) for H in halfspaces]
    rays, lines = cone_generators(constraints, n + 1)
    verts = [tuple(Fraction(x, r[0]) for x in r[1:]) for r in rays if r[0] > 0]
    if verts and (lines or any(r[0] == 0 for r in rays)):
        raise UnboundedPolytopeError("intersection of half-spaces is unbounded")
    return Polytope(halfspaces, verts, n)


def vertices(P):
    return list(P.vertices)


def support_value(p, P):
    """p(P) = min over P of (p, m), attained at a vertex since P is compact."""
    if P.is_empty:
        raise ValueError("support value of an empty polytope")
    return min(pairing(p, v) for v in P.vertices)


def face_in_direction(p, P):
    """Vertices of the face of P on which (p, .) is minimal."""
    val = support_value(p, P)
    return [v for v in P.vertices if pairing(p, v) == val]


def contributes(H, P):
    """True iff P meets the boundary hyperplane of H."""
    return (not P.is_empty) and support_value(H.normal, P) == H.level


def contributes_properly(H, others):
    """True iff dropping H from the list changes the intersection."""
    others = list(others)
    P = intersect(others + [H])
    if not others:
        return True
    try:
        Q = intersect(others, P.ambient_dim)
    except UnboundedPolytopeError:
        return True
    return not Q.same_set(P)


def is_simple(P):
    """Every vertex lies on exactly n facet hyperplanes with independent normals."""
    if not P.is_full_dimensional:
        raise ValueError("simplicity is only defined for full-dimensional polytopes")
    n = P.ambient_dim
    for v in P.vertices:
        hyps = P.vertex_facets(v)
        if len(hyps) != n or rank([h[0] for h in hyps]) != n:
            return False
    return True


def scale(P, m):
    if m <= 0:
        raise ValueError("scale factor must be positive")
    return Polytope([H.scaled(m) for H in P.halfspaces],
                    [tuple(x * m for x in v) for v in P.vertices], P.ambient_dim)


def count_lattice_points(P):
    """Number of integer points in P, by scanning the bounding box."""
    if P.is_empty:
        return 0
    n = P.ambient_dim
    lo = [ceil(min(v[i] for v in P.vertices)) for i in range(n)]
    hi = [floor(max(v[i] for v in P.vertices)) for i in range(n)]
    if any(a > b for a, b in zip(lo, hi)):
        return 0
    return sum(1 for m in product(*(range(a, b + 1) for a, b in zip(lo, hi)))
               if P.contains(m))
