"""Rational polyhedral cones and fans in N_R.

A :class:`Fan` stores a ray list and its maximal cones as sorted tuples of ray
indices.  All constructions (subdivision, refinement, dual fans) return new
fans; nothing is mutated after construction.
"""
from fractions import Fraction
from functools import cached_property
from itertools import combinations

from .errors import FanValidationError, LinearAlgebraError, NotRefinementError
from .lattice import (NPoint, determinant, dot, integral_direction, lattice_index, primitivize,
                      rank, simplicial_coordinates)
from .polytope import cone_generators


class Cone:
    """cone(rays) for primitive integer generators."""

    def __init__(self, rays):
        self.rays = tuple(NPoint(primitivize(r)) for r in rays)
        if not self.rays:
            raise LinearAlgebraError("a cone needs at least one generator")
        self.ambient_dim = len(self.rays[0])

    @cached_property
    def dim(self):
        return rank(self.rays)

    @cached_property
    def _dual(self):
        # dual cone {m : (r, m) >= 0}; its rays are inward facet normals,
        # its lines span the orthogonal complement of the cone's span
        return cone_generators(self.rays, self.ambient_dim)

    @property
    def normals(self):
        return self._dual[0]

    @property
    def equations(self):
        return self._dual[1]

    def inequalities(self):
        """Constraint rows describing the cone as {x : row . x >= 0}."""
        rows = list(self.normals)
        for e in self.equations:
            rows.append(e)
            rows.append(tuple(-x for x in e))
        return rows

    def contains(self, u):
        return (all(dot(e, u) == 0 for e in self.equations)
                and all(dot(v, u) >= 0 for v in self.normals))

    def in_relative_interior(self, u):
        return (all(dot(e, u) == 0 for e in self.equations)
                and all(dot(v, u) > 0 for v in self.normals))

    @cached_property
    def is_strongly_convex(self):
        rows = list(self.normals) + list(self.equations)
        return rank(rows) == self.ambient_dim

    @cached_property
    def is_simplicial(self):
        return len(self.rays) == self.dim

    def facets(self):
        """Facets as frozensets of positions into ``self.rays``."""
        out = []
        for v in self.normals:
            tight = frozenset(i for i, r in enumerate(self.rays) if dot(v, r) == 0)
            if tight in out:
                continue
            if (tight and rank([self.rays[i] for i in tight]) == self.dim - 1) or \
                    (not tight and self.dim == 1):
                out.append(tight)
        return out

    def face_closure(self, subset):
        """Smallest face containing the given ray positions, as ray positions."""
        subset = set(subset)
        active = [v for v in self.normals if all(dot(v, self.rays[i]) == 0 for i in subset)]
        return frozenset(i for i, r in enumerate(self.rays)
                         if all(dot(v, r) == 0 for v in active))

    def is_face(self, subset):
        return self.face_closure(subset) == frozenset(subset)

    def multiplicity(self):
        if not self.is_simplicial:
            raise LinearAlgebraError("multiplicity of a non-simplicial cone")
        return lattice_index(self.rays)

    def __repr__(self):
        return f"Cone({[tuple(r) for r in self.rays]})"


def cone_intersection_rays(c1, c2):
    """Extreme rays of c1 ∩ c2 (both strongly convex)."""
    rays, lines = cone_generators(c1.inequalities() + c2.inequalities(), c1.ambient_dim)
    if lines:
        raise FanValidationError("intersection of strongly convex cones contains a line")
    return rays


class Fan:
    """A fan given by primitive rays and maximal cones (tuples of ray indices)."""

    def __init__(self, rays, cones, name=None):
        self.rays = tuple(NPoint(primitivize(r)) for r in rays)
        if not self.rays:
            raise FanValidationError("a fan needs at least one ray")
        self.dim = len(self.rays[0])
        if len(set(self.rays)) != len(self.rays):
            raise FanValidationError("duplicate rays")
        cleaned = []
        for c in cones:
            c = tuple(sorted(set(c)))
            if not c or any(i < 0 or i >= len(self.rays) for i in c):
                raise FanValidationError(f"cone {c} has ray indices out of range")
            cleaned.append(c)
        self.cones = tuple(sorted(set(cleaned)))
        self.name = name
        self._ray_index = {r: i for i, r in enumerate(self.rays)}

    @classmethod
    def from_cones(cls, cones, name=None):
        """Build from cones given by generator vectors (need not be primitive)."""
        rays, index, idx_cones = [], {}, []
        for cone in cones:
            c = []
            for v in cone:
                v = NPoint(primitivize(v))
                if v not in index:
                    index[v] = len(rays)
                    rays.append(v)
                c.append(index[v])
            idx_cones.append(c)
        return cls(rays, idx_cones, name=name)

    def ray_index(self, v):
        return self._ray_index.get(tuple(v))

    @cached_property
    def maximal_cones(self):
        return [Cone([self.rays[i] for i in c]) for c in self.cones]

    def cone(self, k):
        return self.maximal_cones[k]

    def cone_rays(self, k):
        return [self.rays[i] for i in self.cones[k]]

    @cached_property
    def used_rays(self):
        return sorted({i for c in self.cones for i in c})

    def find_cone(self, u):
        """Index of the first maximal cone containing u (None if none does)."""
        for k, cone in enumerate(self.maximal_cones):
            if cone.contains(u):
                return k
        return None

    def cones_containing(self, u):
        return [k for k, cone in enumerate(self.maximal_cones) if cone.contains(u)]

    @cached_property
    def wall_map(self):
        """(n-1)-ray subsets shared between maximal cones (simplicial fans)."""
        walls = {}
        for k, c in enumerate(self.cones):
            for w in combinations(c, len(c) - 1):
                walls.setdefault(frozenset(w), []).append(k)
        return walls

    def canonical(self):
        """Same fan with unused rays dropped and rays in lexicographic order."""
        used = self.used_rays
        order = sorted(used, key=lambda i: self.rays[i])
        new_index = {old: new for new, old in enumerate(order)}
        return Fan([self.rays[i] for i in order],
                   [[new_index[i] for i in c] for c in self.cones], name=self.name)

    def cone_set(self):
        return frozenset(frozenset(self.rays[i] for i in c) for c in self.cones)

    def ray_set(self):
        return frozenset(self.rays[i] for i in self.used_rays)

    def __eq__(self, other):
        return isinstance(other, Fan) and self.cone_set() == other.cone_set()

    def __hash__(self):
        return hash(self.cone_set())

    def __repr__(self):
        nm = f"{self.name!r}, " if self.name else ""
        return f"Fan({nm}n={self.dim}, rays={len(self.used_rays)}, cones={len(self.cones)})"


def _check_pair(fan, a, b):
    ca, cb = fan.cone(a), fan.cone(b)
    common = set(fan.cones[a]) & set(fan.cones[b])
    common_vecs = {fan.rays[i] for i in common}
    for r in cone_intersection_rays(ca, cb):
        if tuple(r) not in common_vecs:
            return False
    pos_a = [fan.cones[a].index(i) for i in common]
    pos_b = [fan.cones[b].index(i) for i in common]
    return ca.is_face(pos_a) and cb.is_face(pos_b)


def validate_fan(cones, name=None):
    """Build a Fan from cones and check the fan axioms.

    ``cones`` is either a Fan or a list of generator lists.  Each cone must be
    strongly convex with extreme, pairwise non-proportional generators, and
    every pairwise intersection must be a face of both cones.
    """
    fan = cones if isinstance(cones, Fan) else Fan.from_cones(cones, name=name)
    for k, cone in enumerate(fan.maximal_cones):
        if not cone.is_strongly_convex:
            raise FanValidationError(f"cone {k} is not strongly convex", pair=(k, k))
        if len(set(cone.rays)) != len(cone.rays):
            raise FanValidationError(f"cone {k} repeats a generator", pair=(k, k))
        for i, r in enumerate(cone.rays):
            others = [s for j, s in enumerate(cone.rays) if j != i]
            if others and Cone(others).contains(r):
                raise FanValidationError(f"generator {tuple(r)} of cone {k} is not extreme",
                                         pair=(k, k))
    for a, b in combinations(range(len(fan.cones)), 2):
        if not _check_pair(fan, a, b):
            raise FanValidationError(
                f"cones {a} and {b} do not meet in a common face", pair=(a, b))
    return fan


def _generic_vector(n):
    # far from every rational hyperplane with small coefficients
    primes = [1000003, -999983, 1000033, -1000037, 999979, -1000039, 1000081, -999961]
    return tuple(primes[i % len(primes)] * (i + 1) + 7 * i for i in range(n))


def is_complete(fan):
    """Pseudo-manifold test on facets plus coverage of one generic vector."""
    n = fan.dim
    if any(c.dim != n for c in fan.maximal_cones):
        return False
    count = {}
    for k, cone in enumerate(fan.maximal_cones):
        for f in cone.facets():
            key = frozenset(fan.cones[k][i] for i in f)
            count[key] = count.get(key, 0) + 1
    if any(v != 2 for v in count.values()):
        return False
    return fan.find_cone(_generic_vector(n)) is not None


def is_simplicial(fan):
    return all(c.is_simplicial for c in fan.maximal_cones)


def is_smooth(fan):
    return is_simplicial(fan) and all(c.multiplicity() == 1 for c in fan.maximal_cones)


def check_complete_simplicial(fan):
    """Cheap validity check for complete simplicial fans (raises on failure).

    Every wall must be shared by exactly two cones lying on opposite sides, and
    a generic vector must lie in exactly one cone.  Together these force a
    valid complete fan.
    """
    n = fan.dim
    for k, c in enumerate(fan.cones):
        if len(c) != n or rank(fan.cone_rays(k)) != n:
            raise FanValidationError(f"cone {k} is not full-dimensional simplicial", pair=(k, k))
    for wall, ks in fan.wall_map.items():
        if len(ks) != 2:
            raise FanValidationError(f"wall {sorted(wall)} lies in {len(ks)} cones",
                                     pair=tuple(ks))
        a, b = ks
        ua = [i for i in fan.cones[a] if i not in wall][0]
        ub = [i for i in fan.cones[b] if i not in wall][0]
        wrays = [fan.rays[i] for i in sorted(wall)]
        da = determinant(wrays + [fan.rays[ua]])
        db = determinant(wrays + [fan.rays[ub]])
        if da * db >= 0:
            raise FanValidationError(f"cones {a} and {b} overlap across wall {sorted(wall)}",
                                     pair=(a, b))
    g = _generic_vector(n)
    hits = sum(1 for c in fan.maximal_cones if c.contains(g))
    if hits != 1:
        raise FanValidationError(f"generic vector covered {hits} times")
    return fan


def dual_fan(P):
    """Normal fan of a full-dimensional polytope: one maximal cone per vertex."""
    if not P.is_full_dimensional:
        raise ValueError("dual fan needs a full-dimensional polytope")
    facets = P.facet_indices()
    rays, index = [], {}
    for i in facets:
        nrm = P.halfspaces[i].normal
        if nrm not in index:
            index[nrm] = len(rays)
            rays.append(nrm)
    cones = []
    for v in P.vertices:
        tight = P.tight(v)
        cones.append([index[P.halfspaces[i].normal] for i in facets if i in tight])
    return Fan(rays, cones)


def star_subdivide(fan, u):
    """Stellar subdivision of the fan at the primitive lattice vector u."""
    u = NPoint(primitivize(u))
    hosts = set(fan.cones_containing(u))
    if not hosts:
        raise ValueError(f"{tuple(u)} is outside the support of the fan")
    rays = list(fan.rays)
    ui = fan.ray_index(u)
    if ui is None:
        ui = len(rays)
        rays.append(u)
    cones = []
    for k, c in enumerate(fan.cones):
        if k not in hosts:
            cones.append(c)
            continue
        cone = fan.cone(k)
        for f in cone.facets():
            facet_rays = [c[i] for i in f]
            normal = next(v for v in cone.normals
                          if all(dot(v, fan.rays[j]) == 0 for j in facet_rays))
            if dot(normal, u) > 0:
                cones.append(tuple(facet_rays) + (ui,))
    return Fan(rays, cones)


def _pulling_triangulation(fan, ray_ids, cache):
    key = tuple(sorted(ray_ids))
    if key in cache:
        return cache[key]
    vecs = [fan.rays[i] for i in key]
    if len(key) == rank(vecs):
        cache[key] = [key]
        return cache[key]
    apex = key[0]
    cone = Cone(vecs)
    out = []
    for f in cone.facets():
        face = tuple(key[i] for i in f)
        if apex in face:
            continue
        for t in _pulling_triangulation(fan, face, cache):
            out.append(tuple(sorted(t + (apex,))))
    cache[key] = out
    return out


def make_simplicial(fan):
    """Triangulate non-simplicial cones without new rays (pulling, by ray index)."""
    if is_simplicial(fan):
        return fan
    cache = {}
    cones = []
    for c in fan.cones:
        cones.extend(_pulling_triangulation(fan, c, cache))
    return Fan(fan.rays, cones, name=fan.name)


def parallelepiped_points(generators):
    """Nonzero lattice points sum(l_i g_i) with 0 <= l_i < 1, with their l."""
    gens = [tuple(g) for g in generators]
    n = len(gens)
    # l = x A^{-1} for x in Z^n, so the unit vectors generate the group
    inv_rows = []
    for j in range(n):
        e = [1 if i == j else 0 for i in range(n)]
        inv_rows.append(tuple(c % 1 for c in simplicial_coordinates(e, gens)))
    zero = tuple(Fraction(0) for _ in range(n))
    seen = {zero}
    frontier = [zero]
    while frontier:
        nxt = []
        for lam in frontier:
            for g in inv_rows:
                cand = tuple((a + b) % 1 for a, b in zip(lam, g))
                if cand not in seen:
                    seen.add(cand)
                    nxt.append(cand)
        frontier = nxt
    pts = []
    for lam in seen:
        if not any(lam):
            continue
        pt = tuple(int(sum(l * g[i] for l, g in zip(lam, gens))) for i in range(n))
        pts.append((pt, lam))
    return pts


def desingularize(fan):
    """Smooth complete refinement of a complete fan.

    Non-simplicial cones are triangulated first; then the cone of largest
    multiplicity is star-subdivided at the parallelepiped point with the
    smallest coefficient sum until every cone is unimodular.
    """
    fan = make_simplicial(fan)
    while True:
        worst, worst_key = None, None
        for k, cone in enumerate(fan.maximal_cones):
            m = cone.multiplicity()
            if m > 1:
                key = (-m, sorted(tuple(r) for r in cone.rays))
                if worst_key is None or key < worst_key:
                    worst, worst_key = k, key
        if worst is None:
            return fan
        pts = parallelepiped_points(fan.cone_rays(worst))
        pt, _ = min(pts, key=lambda t: (sum(t[1]), t[0]))
        fan = star_subdivide(fan, primitivize(pt))


def common_refinement(f1, f2):
    """Fan of full-dimensional pairwise intersections of maximal cones."""
    n = f1.dim
    rays, index, cones = [], {}, []
    for c1 in f1.maximal_cones:
        for c2 in f2.maximal_cones:
            inter = cone_intersection_rays(c1, c2)
            if len(inter) < n or rank(inter) < n:
                continue
            idx = []
            for r in inter:
                r = NPoint(r)
                if r not in index:
                    index[r] = len(rays)
                    rays.append(r)
                idx.append(index[r])
            cones.append(idx)
    return Fan(rays, cones)


def refines(fine, coarse):
    """Every maximal cone of ``fine`` lies inside some cone of ``coarse``."""
    for k in range(len(fine.cones)):
        rays = fine.cone_rays(k)
        if not any(all(c.contains(r) for r in rays) for c in coarse.maximal_cones):
            return False
    return True


def host_cone(fan, fine_cone_rays):
    """Index of a maximal cone of ``fan`` containing all the given rays."""
    for k, c in enumerate(fan.maximal_cones):
        if all(c.contains(r) for r in fine_cone_rays):
            return k
    raise NotRefinementError("cone is not contained in any cone of the coarser fan")


def primitive_sum(vectors):
    return primitivize(tuple(sum(v[i] for v in vectors) for i in range(len(vectors[0]))))


def integral_ray(v):
    return NPoint(integral_direction(v))
