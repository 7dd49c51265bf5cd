"""Toric Mori theory: wall curves, extremal rays, contractions, flips and the MMP loop.

Curve classes are vectors of intersection numbers (D_p . C) indexed by the rays
of the current fan; for a wall curve this vector is a positive multiple of the
wall relation.  Extremality is decided exactly by a rational simplex.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from math import gcd

from .divisors import (NEG_INF, adjoint_support, box_of, discrepancies, is_nef, is_terminal_pair,
                       proper_transform_class)
from .errors import ClaimFailure, FanValidationError, MaxStepsExceeded, ToricError
from .fan import Fan, check_complete_simplicial, common_refinement, is_simplicial
from .lattice import (NPoint, cone_multiplicity, integer_kernel, lattice_index, nullspace,
                      pairing, primitivize)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Wall:
    """Codimension-one cone between two maximal cones, with its relation.

    ``coefficients`` maps ray index -> integer a_i over the n+1 rays of the
    two adjacent cones, with sum a_i u_i = 0, gcd 1 and a_n, a_{n+1} > 0.
    """
    fan: Fan
    rays: tuple          # u_1 .. u_{n-1}, ray indices
    opposite: tuple      # (u_n, u_{n+1})
    cones: tuple         # (cone containing u_n, cone containing u_{n+1})
    coefficients: tuple  # ((index, a_i), ...) sorted by index

    @property
    def relation(self):
        return dict(self.coefficients)

    def vectors(self):
        return [self.fan.rays[i] for i in self.rays]

    def sign_pattern(self):
        rel = self.relation
        neg = tuple(sorted(i for i, a in rel.items() if a < 0))
        pos = tuple(sorted(i for i, a in rel.items() if a > 0))
        zero = tuple(sorted(i for i, a in rel.items() if a == 0))
        return neg, pos, zero


@dataclass(frozen=True)
class CurveClass:
    fan: Fan
    vector: tuple   # D_p . C for p = fan.rays[i]

    @property
    def degrees(self):
        return {self.fan.rays[i]: x for i, x in enumerate(self.vector) if x}

    def normalized(self):
        """Primitive integer vector on the ray of this class."""
        den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(x).denominator for x in self.vector), 1)
        return tuple(primitivize([int(x * den) for x in self.vector]))

    def degree(self, h):
        """D_h . C for D_h = -sum h(p) D_p."""
        return -sum(h.values[i] * x for i, x in enumerate(self.vector))


@dataclass
class MMPStep:
    kind: str                      # divisorial | flip | fibration-stop | nef-stop
    extremal_ray: tuple = None     # normalized class
    fan_before: Fan = None
    fan_after: Fan = None
    wall_degrees: list = field(default_factory=list)
    removed_ray: NPoint = None
    exceptional_ray: NPoint = None
    discrepancy_pair: tuple = None  # (alpha, alpha') at the flipped circuit
    discrepancy_changes: list = field(default_factory=list)  # (ray, before, after)
    flipped_degree_after: list = field(default_factory=list)
    fibration: dict = None


@dataclass
class MMPOutcome:
    kind: str    # minimal_model | mori_fibration | birational_to_projective_space
    fan: Fan
    adjoint: object
    x_class: object
    trace: list
    kappa: object
    fibration: dict = None

    @property
    def divisorial_steps(self):
        return sum(1 for s in self.trace if s.kind == "divisorial")

    @property
    def flip_steps(self):
        return sum(1 for s in self.trace if s.kind == "flip")


# ---------------------------------------------------------------- walls

def _relation(vectors):
    """Primitive integer relation among n+1 vectors spanning N_Q."""
    n = len(vectors[0])
    rows = [[v[i] for v in vectors] for i in range(n)]
    ker = nullspace(rows, len(vectors))
    if len(ker) != 1:
        raise ToricError("wall rays are not in general position")
    vec = ker[0]
    den = reduce(lambda a, b: a * b // gcd(a, b), (x.denominator for x in vec), 1)
    return primitivize([int(x * den) for x in vec])


def walls(fan):
    """One Wall per codimension-one cone shared by two maximal cones."""
    if not is_simplicial(fan):
        raise ToricError("walls need a simplicial fan")
    out = []
    for wall, ks in sorted(fan.wall_map.items(), key=lambda kv: sorted(kv[0])):
        if len(ks) != 2:
            continue
        a, b = ks
        un = [i for i in fan.cones[a] if i not in wall][0]
        un1 = [i for i in fan.cones[b] if i not in wall][0]
        idx = sorted(wall) + [un, un1]
        rel = _relation([fan.rays[i] for i in idx])
        if rel[-2] < 0:
            rel = [-x for x in rel]
        if rel[-2] <= 0 or rel[-1] <= 0:
            raise FanValidationError(f"cones {a} and {b} lie on the same side of their wall", pair=(a, b))
        out.append(Wall(fan, tuple(sorted(wall)), (un, un1), (a, b),
                        tuple(sorted(zip(idx, rel)))))
    return out


def wall_degree(h, w):
    """-sum a_i h(u_i); positive iff h is strictly convex across the wall."""
    return -sum(a * h.values[i] for i, a in w.coefficients)


def curve_class(w):
    """Intersection numbers D_p . C_w: a_i mult(W) / (a_n mult(sigma))."""
    fan = w.fan
    rel = w.relation
    un = w.opposite[0]
    scale = Fraction(lattice_index(w.vectors()),
                     rel[un] * cone_multiplicity(fan.cone_rays(w.cones[0])))
    vec = [Fraction(0)] * len(fan.rays)
    for i, a in rel.items():
        vec[i] = a * scale
    return CurveClass(fan, tuple(vec))


def curve_degree(h, w):
    """D_h . C_w as an exact rational."""
    return curve_class(w).degree(h)


# ---------------------------------------------------------------- extremality

def nonnegative_combination(generators, target):
    """Exact Phase-I simplex: is target = sum lambda_j generators[j], lambda >= 0?

    Returns the coefficient list or None.  Bland's rule guarantees termination.
    """
    m = len(target)
    N = len(generators)
    T = []
    for i in range(m):
        row = [Fraction(g[i]) for g in generators]
        rhs = Fraction(target[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        T.append(row + [Fraction(int(k == i)) for k in range(m)] + [rhs])
    basis = [N + i for i in range(m)]
    width = N + m
    # reduced costs for min sum(artificials)
    z = [-sum(T[i][j] for i in range(m)) for j in range(N)] + [Fraction(0)] * m
    zval = -sum(T[i][-1] for i in range(m))
    while True:
        enter = next((j for j in range(width) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][-1] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:   # unbounded direction; cannot happen in phase I
            break
        r = best[1]
        piv = T[r][enter]
        T[r] = [x / piv for x in T[r]]
        for i in range(m):
            if i != r and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [a - f * b for a, b in zip(T[i], T[r])]
        f = z[enter]
        z = [a - f * b for a, b in zip(z, T[r][:width])]
        zval -= f * T[r][-1]
        basis[r] = enter
    if zval != 0:
        return None
    lam = [Fraction(0)] * N
    for i, b in enumerate(basis):
        if b < N:
            lam[b] = T[i][-1]
    return lam


def extremal_rays(fan, classes=None):
    """Wall classes spanning extreme rays of the cone they generate.

    Returns a list of (normalized class, [CurveClass, ...]) sorted
    lexicographically by the normalized class.
    """
    if classes is None:
        classes = [curve_class(w) for w in walls(fan)]
    groups = {}
    for c in classes:
        groups.setdefault(c.normalized(), []).append(c)
    keys = sorted(groups)
    out = []
    for key in keys:
        others = [k for k in keys if k != key]
        if nonnegative_combination(others, key) is None:
            out.append((key, groups[key]))
    return out


# ---------------------------------------------------------------- contractions

def _walls_in_ray(all_walls, key):
    return [w for w in all_walls if curve_class(w).normalized() == key]


def _regions(fan, ray_walls):
    """Common (alpha, beta) and the distinct gamma groups of an extremal ray."""
    alpha, beta, _ = ray_walls[0].sign_pattern()
    gammas = set()
    for w in ray_walls:
        a, b, g = w.sign_pattern()
        if (a, b) != (alpha, beta):
            raise FanValidationError("walls of one extremal ray disagree on their circuit")
        gammas.add(g)
    cone_set = set(fan.cones)
    for g in gammas:
        for j in beta:
            c = tuple(sorted((set(alpha) | set(beta) | set(g)) - {j}))
            if c not in cone_set:
                raise FanValidationError(
                    f"merged region misses cone {c}; the ray is not extremal")
    return alpha, beta, sorted(gammas)


def _quotient_data(fan, beta, gammas):
    """Base fan of a fibration: project along the span of the beta rays."""
    n = fan.dim
    basis = integer_kernel([fan.rays[i] for i in beta], n)   # rows: lattice basis of L-perp in M
    def proj(v):
        return tuple(pairing(v, m) for m in basis)
    cones = []
    for g in gammas:
        cones.append([proj(fan.rays[i]) for i in g])
    base = Fan.from_cones(cones, name="base") if basis and all(cones) else None
    return {
        "fiber_rays": [fan.rays[i] for i in beta],
        "fiber_dimension": len(beta) - 1,
        "base_dimension": n - len(beta) + 1,
        "projection": basis,
        "base_fan": base,
    }


def _reindexed(fan, cones, drop=None):
    keep = [i for i in range(len(fan.rays)) if i != drop]
    pos = {old: new for new, old in enumerate(keep)}
    return Fan([fan.rays[i] for i in keep], [[pos[i] for i in c] for c in cones], name=fan.name)


def _replace_regions(fan, alpha, beta, gammas, new_side):
    """Swap the triangulation {ab g - j : j in beta} for {ab g - i : i in new_side}."""
    old, new = set(), set()
    for g in gammas:
        full = set(alpha) | set(beta) | set(g)
        old |= {tuple(sorted(full - {j})) for j in beta}
        new |= {tuple(sorted(full - {i})) for i in new_side}
    return [c for c in fan.cones if c not in old] + sorted(new)


def flip(fan, key, all_walls=None):
    """Flip along the extremal ray with normalized class ``key``; same ray set."""
    if all_walls is None:
        all_walls = walls(fan)
    ray_walls = _walls_in_ray(all_walls, key)
    if not ray_walls:
        raise ToricError("no wall carries this class")
    alpha, beta, gammas = _regions(fan, ray_walls)
    if len(alpha) < 2:
        raise ToricError("classification mismatch: not a flipping ray")
    new = Fan(fan.rays, _replace_regions(fan, alpha, beta, gammas, alpha), name=fan.name)
    check_complete_simplicial(new)
    return new


def _flip_discrepancies(x_before, fan_before, fan_after, alpha, rel):
    x_after = proper_transform_class(x_before, fan_after)
    refinement = common_refinement(fan_before, fan_after)
    before = discrepancies(x_before, refinement).by_ray()
    after = discrepancies(x_after, refinement).by_ray()
    changes = [(NPoint(r), before[r], after[r]) for r in sorted(before)]
    w = tuple(primitivize([sum(-rel[i] * fan_before.rays[i][c] for i in alpha)
                           for c in range(fan_before.dim)]))
    pair = (before.get(w), after.get(w))
    return changes, NPoint(w), pair


def classify_and_contract(fan, key, h, x_class, all_walls=None):
    """Execute the contraction of one adjoint-negative extremal ray.

    Returns (MMPStep, successor fan or None for a fibration).
    """
    if all_walls is None:
        all_walls = walls(fan)
    ray_walls = _walls_in_ray(all_walls, key)
    degrees = [wall_degree(h, w) for w in ray_walls]
    alpha, beta, gammas = _regions(fan, ray_walls)
    if len(alpha) == 0:
        return MMPStep("fibration-stop", key, fan, None, degrees,
                       fibration=_quotient_data(fan, beta, gammas)), None
    if len(alpha) == 1:
        k = alpha[0]
        cones = _replace_regions(fan, alpha, beta, gammas, alpha)
        if any(k in c for c in cones):
            raise FanValidationError(f"ray {fan.rays[k]} survives its own contraction")
        new = _reindexed(fan, cones, drop=k)
        check_complete_simplicial(new)
        return MMPStep("divisorial", key, fan, new, degrees, removed_ray=fan.rays[k]), new
    new = Fan(fan.rays, _replace_regions(fan, alpha, beta, gammas, alpha), name=fan.name)
    check_complete_simplicial(new)
    rel = ray_walls[0].relation
    changes, w, pair = _flip_discrepancies(x_class, fan, new, alpha, rel)
    h_new = adjoint_support(proper_transform_class(x_class, new))
    after_walls = [wd for wd in walls(new)
                   if set(wd.rays) | set(wd.opposite) == set(ray_walls[0].rays) | set(ray_walls[0].opposite)]
    step = MMPStep("flip", key, fan, new, degrees, exceptional_ray=w, discrepancy_pair=pair,
                   discrepancy_changes=changes,
                   flipped_degree_after=[wall_degree(h_new, wd) for wd in after_walls])
    return step, new


def _fibration_outcome(step, x_class, fan, h):
    """Split the fibration case by the degree of X on the general fibre."""
    data = step.fibration
    if data["fiber_dimension"] == 1:
        key = step.extremal_ray
        w = _walls_in_ray(walls(fan), key)[0]
        C = curve_class(w)
        x_deg = C.degree(x_class.support)
        k_deg = -sum(C.vector)
        if Fraction(x_deg).denominator != 1:
            raise ClaimFailure("x_fiber_degree_integral", f"X.l = {x_deg}")
        data["k_fiber_degree"] = k_deg
        data["x_fiber_degree"] = x_deg
        if k_deg == -2 and x_deg >= 2:
            raise ClaimFailure("x_fiber_degree_at_most_one", f"X.l = {x_deg}")
        if x_deg == 1:
            return "birational_to_projective_space"
    return "mori_fibration"


def mmp_run(fan, x_class, max_steps=None, check_terminal=False):
    """Run the MMP for K + X from a complete simplicial terminal pair."""
    check_complete_simplicial(fan)
    if x_class.fan != fan:
        x_class = proper_transform_class(x_class, fan)
    if max_steps is None:
        max_steps = 10 * len(fan.used_rays) ** 2
    trace = []
    for _ in range(max_steps):
        h = adjoint_support(x_class)
        if is_nef(h):
            trace.append(MMPStep("nef-stop", fan_before=fan, fan_after=fan))
            box = box_of(h)
            return MMPOutcome("minimal_model", fan, h, x_class, trace, box.dim)
        all_walls = walls(fan)
        ext = extremal_rays(fan, [curve_class(w) for w in all_walls])
        negative = [(key, cs) for key, cs in ext if cs[0].degree(h) < 0]
        if not negative:
            raise ClaimFailure("extremal_ray_exists", "adjoint is not nef but no extremal ray is negative")
        key = negative[0][0]
        step, new = classify_and_contract(fan, key, h, x_class, all_walls)
        trace.append(step)
        log.debug("step %d: %s along %s", len(trace), step.kind, key)
        if new is None:
            kind = _fibration_outcome(step, x_class, fan, h)
            return MMPOutcome(kind, fan, h, x_class, trace, NEG_INF, fibration=step.fibration)
        if step.kind == "divisorial" and len(new.used_rays) != len(fan.used_rays) - 1:
            raise ClaimFailure("divisorial_drops_one_ray")
        if step.kind == "flip":
            if new.ray_set() != fan.ray_set():
                raise ClaimFailure("flip_preserves_rays")
            a, a2 = step.discrepancy_pair
            if a is None or not a < a2:
                raise ClaimFailure("flip_discrepancy_increases", f"{a} -> {a2}")
        fan = new
        x_class = proper_transform_class(x_class, fan)
        if check_terminal and not is_terminal_pair(fan, x_class):
            raise ClaimFailure("terminal_after_step")
    raise MaxStepsExceeded(f"MMP did not stop within {max_steps} steps")
