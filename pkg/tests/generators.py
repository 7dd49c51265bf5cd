"""Seeded random instances shared by the property tests and the acceptance gate."""
from fractions import Fraction
from itertools import combinations
from math import lcm

from toricmmp.corpus import octant_fan, projective_space_fan
from toricmmp.divisors import DivisorClassOfX, SupportFunction, evaluate_simplicial, is_ample
from toricmmp.fan import Fan, star_subdivide
from toricmmp.lattice import integer_kernel, primitivize
from toricmmp.polytope import Halfspace, intersect, support_value

# quadrilateral circuit e1 + e2 = e3 + (e1 + e2 - e3), closed with apex (-1, -1, 0)
FLIP_RAYS = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1), (-1, -1, 0)]
FLIP_CONES = [(4, 0, 2), (4, 2, 1), (4, 1, 3), (4, 3, 0), (0, 1, 2), (0, 1, 3)]


def flip_fixture():
    return Fan(FLIP_RAYS, FLIP_CONES, name="circuit")


def segment(m):
    """Lattice segment [0, m] as a Polytope."""
    n = len(m)
    hs = []
    # the line through 0 and m: equalities from a basis of m-perp
    for a in integer_kernel([m], n):
        hs += [Halfspace(a, 0), Halfspace(tuple(-x for x in a), 0)]
    hs += [Halfspace(m, 0), Halfspace(tuple(-x for x in m), -sum(x * x for x in m))]
    return intersect(hs, n)


def class_from_polytope(fan, P):
    return DivisorClassOfX(fan, [support_value(p, P) for p in fan.rays], polytope=P, check=False)


def flip_fixture_pair():
    F = flip_fixture()
    return F, class_from_polytope(F, segment((1, -1, 0)))


def random_blowup(fan, rng, values=None, delta=None):
    """Smooth star subdivision at the sum of the rays of a random face of a cone."""
    k = rng.randrange(len(fan.cones))
    cone = fan.cones[k]
    size = rng.choice([2, 3]) if fan.dim == 3 else rng.randint(2, fan.dim)
    face = rng.sample(cone, size)
    u = tuple(sum(fan.rays[i][c] for i in face) for c in range(fan.dim))
    new = star_subdivide(fan, u)
    if values is None:
        return new, None
    h = SupportFunction(fan, values)
    lin, _, _ = evaluate_simplicial(h, u)
    vals = {r: v for r, v in zip(fan.rays, values)}
    vals[tuple(u)] = lin + delta
    return new, [vals[tuple(r)] for r in new.rays]


def random_smooth_fan(rng, max_rays=12, base=None):
    fan = base if base is not None else octant_fan()
    target = rng.randint(len(fan.rays), max_rays)
    while len(fan.rays) < target:
        fan, _ = random_blowup(fan, rng)
    return fan


def random_ample_pair(rng, max_rays=12):
    """Smooth blow-ups of the octant fan with an ample class built alongside.

    Start from the box with half-widths a_i and cut a small corner at every
    blow-up; retry the cut with a smaller depth until the class stays ample.
    """
    fan = octant_fan()
    a = [rng.randint(1, 2) for _ in range(3)]
    values = []
    for r in fan.rays:
        i = next(j for j, x in enumerate(r) if x)
        values.append(Fraction(-a[i]))
    target = rng.randint(6, max_rays)
    while len(fan.rays) < target:
        delta = Fraction(rng.choice([1, 2, 3]), 4)
        for _ in range(12):
            state = rng.getstate()
            new, vals = random_blowup(fan, rng, values, delta)
            if is_ample(SupportFunction(new, vals)):
                fan, values = new, vals
                break
            rng.setstate(state)
            delta /= 2
        else:
            break
    den = lcm(*(v.denominator for v in values))
    values = [v * den for v in values]
    return fan, DivisorClassOfX(fan, values)


def random_mmp_instance(rng, max_rays=12):
    """Alternate between ample classes on octant blow-ups and segment classes.

    Segment classes on blow-ups of the circuit fixture are where flips show up.
    """
    kind = rng.random()
    if kind < 0.4:
        return random_ample_pair(rng, max_rays)
    base = flip_fixture() if kind < 0.8 else None
    fan = random_smooth_fan(rng, max_rays, base)
    m = (0, 0, 0)
    while not any(m):
        m = tuple(rng.randint(-1, 1) for _ in range(3))
    return fan, class_from_polytope(fan, segment(m))


def random_polytope(rng, dim, max_facets=20, box=3):
    """Bounded box plus random rational half-spaces; may come out empty."""
    hs = []
    for i in range(dim):
        e = [0] * dim
        e[i] = 1
        hs.append(Halfspace(tuple(e), -rng.randint(1, box)))
        e[i] = -1
        hs.append(Halfspace(tuple(e), -rng.randint(1, box)))
    extra = rng.randint(0, max_facets - 2 * dim)
    for _ in range(extra):
        a = [0] * dim
        while not any(a):
            a = [rng.randint(-3, 3) for _ in range(dim)]
        hs.append(Halfspace(tuple(a), Fraction(-rng.randint(0, 6 * box), rng.randint(1, 3))))
    return hs


def random_simplicial_fan(rng, max_rays=12):
    """Complete simplicial fans: star subdivisions at random lattice points of cones.

    The new ray is a random positive combination of the cone's rays, so most
    results are singular.
    """
    fan = octant_fan() if rng.random() < 0.5 else projective_space_fan(3)
    target = rng.randint(len(fan.rays), max_rays)
    while len(fan.rays) < target:
        rays = [fan.rays[i] for i in rng.choice(fan.cones)]
        coeffs = [rng.randint(0, 3) for _ in rays]
        if sum(1 for c in coeffs if c) < 2:
            continue
        u = primitivize(tuple(sum(c * r[j] for c, r in zip(coeffs, rays)) for j in range(fan.dim)))
        if u not in fan.ray_set():
            fan = star_subdivide(fan, u)
    return fan


def random_support_function(rng, fan):
    """h = p(Q) for a random lattice polytope Q, and half the time one value nudged."""
    Q = None
    while Q is None or Q.is_empty:
        Q = intersect(random_polytope(rng, fan.dim, max_facets=10, box=2), fan.dim)
    values = [support_value(p, Q) for p in fan.rays]
    if rng.random() < 0.5:
        i = rng.randrange(len(values))
        values[i] += rng.choice([-1, 1])
    return SupportFunction(fan, values)


def random_discrepancy_instance(rng):
    """Smooth pair plus a primitive vector u in a random cone (maybe already a ray)."""
    fan, X = random_ample_pair(rng, max_rays=10)
    rays = [fan.rays[i] for i in rng.choice(fan.cones)]
    while True:
        coeffs = [rng.randint(0, 3) for _ in rays]
        if sum(1 for c in coeffs if c) >= 2:
            break
    u = tuple(sum(c * r[j] for c, r in zip(coeffs, rays)) for j in range(3))
    return fan, X, primitivize(u)


def _solve_square(A, b):
    """Gauss-Jordan over Fractions; None when A is singular."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(A, b)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c] / M[c][c]
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    return tuple(M[i][n] / M[i][i] for i in range(n))


def brute_force_vertices(halfspaces, dim):
    """Vertices by solving every n-subset of tight constraints (independent oracle)."""
    pts = set()
    for sub in combinations(halfspaces, dim):
        pt = _solve_square([H.normal for H in sub], [H.level for H in sub])
        if pt is None or pt in pts:
            continue
        if all(sum(a * c for a, c in zip(H.normal, pt)) >= H.level for H in halfspaces):
            pts.add(pt)
    return pts
