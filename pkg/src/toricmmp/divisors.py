"""Support functions and invariant divisors, centred on the adjoint divisor K + X.

Conventions used throughout:

* a support function h is stored by its values on the rays of its fan and
  corresponds to the invariant divisor D_h = -sum h(p) D_p;
* the canonical divisor is K = -sum D_p, so K + D_g has support function
  1 + g on every ray;
* X is modelled by its class only: the general member of a base-point-free
  system with Newton polytope ``polytope``.  On any other fan its proper
  transform has support function p -> p(polytope).
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import gcd, inf

from .errors import NotQCartierError, NotRefinementError, ToricError
from .fan import common_refinement, desingularize, is_simplicial, refines, star_subdivide
from .lattice import MPoint, NPoint, as_rational, pairing, primitivize, rank, simplicial_coordinates, solve
from .polytope import Halfspace, face_in_direction, intersect, support_value

NEG_INF = -inf


class SupportFunction:
    """A fan-support function given by rational values on the rays of ``fan``."""

    def __init__(self, fan, values):
        self.fan = fan
        if isinstance(values, dict):
            values = [values[tuple(r)] for r in fan.rays]
        values = tuple(Fraction(as_rational(v)) for v in values)
        if len(values) != len(fan.rays):
            raise ValueError("need one value per ray")
        self.values = values
        for k, cone in enumerate(fan.maximal_cones):
            if not cone.is_simplicial:
                self.linear_part(k)

    def value(self, i):
        return self.values[i]

    def at_ray(self, p):
        i = self.fan.ray_index(p)
        if i is None:
            raise KeyError(f"{tuple(p)} is not a ray of the fan")
        return self.values[i]

    @cached_property
    def _linear_parts(self):
        return {}

    def linear_part(self, k):
        """h_sigma for the k-th maximal cone: (p, h_sigma) = h(p) on its rays."""
        if k in self._linear_parts:
            return self._linear_parts[k]
        idx = self.fan.cones[k]
        rays = [self.fan.rays[i] for i in idx]
        vals = [self.values[i] for i in idx]
        if rank(rays) < self.fan.dim:
            raise ToricError("linear part needs a full-dimensional cone")
        basis, bvals = [], []
        for r, v in zip(rays, vals):
            if rank(basis + [r]) > len(basis):
                basis.append(r)
                bvals.append(v)
        m = MPoint(solve(basis, bvals))
        for r, v in zip(rays, vals):
            if pairing(r, m) != v:
                raise NotQCartierError(
                    f"values on cone {k} do not come from a linear function", cone=k)
        self._linear_parts[k] = m
        return m

    def linear_parts(self):
        return [self.linear_part(k) for k in range(len(self.fan.cones))]

    def __call__(self, u):
        return evaluate(self, u)

    def scaled(self, m):
        return SupportFunction(self.fan, [v * m for v in self.values])

    def __eq__(self, other):
        return (isinstance(other, SupportFunction) and self.fan == other.fan
                and self.as_dict() == other.as_dict())

    def as_dict(self):
        return {self.fan.rays[i]: self.values[i] for i in self.fan.used_rays}

    def __repr__(self):
        return f"SupportFunction({self.as_dict()})"


@dataclass(frozen=True)
class ToricDivisor:
    """D = sum coefficients[i] * D_{rays[i]}."""

    fan: object
    coefficients: tuple

    def __post_init__(self):
        object.__setattr__(self, "coefficients",
                           tuple(Fraction(as_rational(c)) for c in self.coefficients))
        if len(self.coefficients) != len(self.fan.rays):
            raise ValueError("need one coefficient per ray")


def support_from_divisor(D):
    return SupportFunction(D.fan, [-c for c in D.coefficients])


def divisor_from_support(h):
    return ToricDivisor(h.fan, tuple(-v for v in h.values))


def box_of(h):
    """Box_h = {m : (p, m) >= h(p) for every ray p}; may be empty."""
    fan = h.fan
    return intersect([Halfspace(fan.rays[i], h.values[i]) for i in fan.used_rays], fan.dim)


def linear_extension(h, k):
    return h.linear_part(k)


def evaluate(h, u):
    """h(u) via the linear part of any maximal cone containing u."""
    k = h.fan.find_cone(u)
    if k is None:
        raise ValueError(f"{tuple(u)} is outside the support of the fan")
    return pairing(u, h.linear_part(k))


def evaluate_simplicial(h, u):
    """h(u) = sum alpha_i h(p_i) for u = sum alpha_i p_i in a simplicial host cone."""
    fan = h.fan
    k = fan.find_cone(u)
    if k is None:
        raise ValueError(f"{tuple(u)} is outside the support of the fan")
    idx = fan.cones[k]
    alpha = simplicial_coordinates(u, [fan.rays[i] for i in idx])
    return sum(a * h.values[i] for a, i in zip(alpha, idx)), k, alpha


def nef_status(h):
    """'nef', 'not_nef', or 'empty' (Box_h empty, the kappa = -inf branch)."""
    box = box_of(h)
    if box.is_empty:
        return "empty"
    for m in h.linear_parts():
        if not box.contains(m):
            return "not_nef"
    return "nef"


def is_nef(h):
    return nef_status(h) == "nef"


def is_ample(h):
    """Nef, full-dimensional box, and sigma -> h_sigma a bijection onto vertices."""
    if not is_nef(h):
        return False
    box = box_of(h)
    if not box.is_full_dimensional:
        return False
    parts = h.linear_parts()
    return len(set(parts)) == len(parts) and set(parts) == set(box.vertices)


def wall_convexity_nef(h):
    """Nef test by local convexity across every wall (simplicial fans)."""
    fan = h.fan
    for wall, ks in fan.wall_map.items():
        if len(ks) != 2:
            continue
        a, b = ks
        ub = [i for i in fan.cones[b] if i not in wall][0]
        if pairing(fan.rays[ub], h.linear_part(a)) < h.values[ub]:
            return False
    return True


class DivisorClassOfX:
    """Class of a Delta-regular divisor X, modelled as a general member.

    ``values`` are the support-function values g(p) (so X ~ -sum g(p) D_p),
    ``polytope`` the Newton polytope of the general member, and
    ``regular_fan`` a fan on which X is regular (where the class was nef).
    """

    def __init__(self, fan, values, polytope=None, regular_fan=None, check=True):
        self.fan = fan
        self.support = SupportFunction(fan, values)
        self.values = self.support.values
        if polytope is None:
            polytope = box_of(self.support)
        if polytope.is_empty:
            raise ToricError("the linear system of X is empty")
        self.polytope = polytope
        self.regular_fan = regular_fan if regular_fan is not None else fan
        if check and not is_nef(self.support):
            raise ToricError("class of X is not base-point free (g is not upper convex)")

    @classmethod
    def from_divisor(cls, D):
        return cls(D.fan, [-c for c in D.coefficients])

    @property
    def class_polytope(self):
        return self.polytope

    def divisor(self):
        return divisor_from_support(self.support)

    def __repr__(self):
        return f"DivisorClassOfX({self.support.as_dict()})"


def adjoint_support(Xc):
    """Support function of K + X: h(p) = 1 + g(p)."""
    return SupportFunction(Xc.fan, [1 + g for g in Xc.values])


def proper_transform_class(Xc, fan):
    """Class of the proper transform of X on another complete fan of the same N."""
    P = Xc.polytope
    if P.is_empty:
        raise ToricError("empty class polytope")
    vals = [support_value(p, P) for p in fan.rays]
    return DivisorClassOfX(fan, vals, polytope=P, regular_fan=Xc.regular_fan, check=False)


@dataclass
class DiscrepancyRecord:
    ray: NPoint
    host_cone: tuple
    discrepancy: Fraction
    canonical: Fraction
    class_correction: Fraction
    meets_x: bool


@dataclass
class DiscrepancyReport:
    resolution: object
    records: list = field(default_factory=list)

    @property
    def terminal(self):
        return all(r.discrepancy > 0 for r in self.records if r.meets_x)

    def by_ray(self):
        return {tuple(r.ray): r.discrepancy for r in self.records}


def discrepancies(Xc, refined, relaxed=False):
    """Discrepancies of K + X at the new rays of a refinement of ``Xc.fan``.

    For a new ray u inside the cone sigma of the coarse fan with
    u = sum alpha_i p_i, the discrepancy is

        a_u = sum alpha_i h(p_i) - 1 - u(P)

    with h the adjoint support function and P the Newton polytope of X.  It
    splits as (sum alpha_i - 1) - v_u, the discrepancy of K alone minus the
    correction v_u = u(P) - sum alpha_i g(p_i) >= 0.
    """
    fan = Xc.fan
    if not is_simplicial(fan):
        raise ToricError("discrepancies need a simplicial coarse fan")
    if not refines(refined, fan):
        raise NotRefinementError("second fan does not refine the first")
    h = adjoint_support(Xc)
    P = Xc.polytope
    old = fan.ray_set()
    report = DiscrepancyReport(resolution=refined)
    for i in refined.used_rays:
        u = refined.rays[i]
        if u in old:
            continue
        h_lin, k, alpha = evaluate_simplicial(h, u)
        g_lin = sum(a * Xc.values[j] for a, j in zip(alpha, fan.cones[k]))
        u_p = support_value(u, P)
        a_u = h_lin - 1 - u_p
        meets = True
        if relaxed:
            face = face_in_direction(u, P)
            meets = rank([[a - b for a, b in zip(v, face[0])] for v in face[1:]]) >= 1
        report.records.append(DiscrepancyRecord(
            ray=u, host_cone=tuple(fan.rays[j] for j in fan.cones[k]),
            discrepancy=a_u, canonical=sum(alpha) - 1, class_correction=u_p - g_lin,
            meets_x=meets))
    return report


def default_witness(fan, Xc):
    """A smooth proper refinement of ``fan`` that also refines X's regular fan."""
    base = Xc.regular_fan
    if base is not None and base != fan:
        witness = desingularize(common_refinement(fan, base))
    else:
        witness = desingularize(fan)
    if witness.ray_set() == fan.ray_set():
        cone = witness.cone_rays(0)
        witness = star_subdivide(witness, primitivize(
            tuple(sum(r[i] for r in cone) for i in range(fan.dim))))
    return witness


def terminality_report(fan, Xc, witness=None, relaxed=False):
    if Xc.fan != fan:
        Xc = proper_transform_class(Xc, fan)
    if witness is None:
        witness = default_witness(fan, Xc)
    return discrepancies(Xc, witness, relaxed=relaxed)


def is_terminal_pair(fan, Xc, witness=None, relaxed=False):
    """Is K + X terminal?  One smooth witness refinement suffices."""
    return terminality_report(fan, Xc, witness, relaxed).terminal


def kappa_adjoint(fan, Xc):
    """Growth order of sections of m(K + X): dim Box_h, or -inf if empty."""
    if Xc.fan != fan:
        Xc = proper_transform_class(Xc, fan)
    box = box_of(adjoint_support(Xc))
    return NEG_INF if box.is_empty else box.dim


def clearing_multiple(points):
    """Smallest positive m with m * point integral for every given point."""
    dens = [Fraction(x).denominator for p in points for x in p]
    return reduce(lambda a, b: a * b // gcd(a, b), dens, 1)


def nef_certificate(h):
    """Evidence that h is nef and its multiple m h is base-point free.

    Checks h(p) = p(Box_h) at every ray and h_sigma in Box_h for every cone;
    m is the least multiple making every h_sigma a lattice point.
    """
    box = box_of(h)
    if box.is_empty:
        return {"nef": False, "rays_tight": False, "parts_in_box": False, "clearing_multiple": None}
    fan = h.fan
    tight = all(support_value(fan.rays[i], box) == h.values[i] for i in fan.used_rays)
    parts = h.linear_parts()
    inside = all(box.contains(m) for m in parts)
    mult = clearing_multiple(parts)
    lattice = all(x.denominator == 1 for m in parts for x in (v * mult for v in m))
    return {"nef": tight and inside, "rays_tight": tight, "parts_in_box": inside,
            "clearing_multiple": mult, "lattice_parts": lattice}
