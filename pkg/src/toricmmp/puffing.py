"""Minimal models by puffing up the adjoint polytope.

Relax every half-space that touches Box_h by a small generic amount, take the
normal fan Sigma of the resulting full-dimensional simple polytope, and carry
X over to Sigma.  The construction re-checks its own output: ray set, equality
of k and h on the rays, k_sigma in Box_k, nefness, terminality and Box_k = Box_h.
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .divisors import (adjoint_support, box_of, clearing_multiple, discrepancies, evaluate, is_nef,
                       proper_transform_class, terminality_report)
from .errors import ChamberSearchError, ClaimFailure, EmptyAdjointPolytope
from .fan import common_refinement, desingularize, dual_fan, is_simplicial, is_smooth
from .polytope import Halfspace, contributes, contributes_properly, intersect, is_simple, support_value

log = logging.getLogger(__name__)

MAX_HALVINGS = 40
MAX_DRAWS = 8


@dataclass
class EpsilonAssignment:
    weights: tuple          # w_i in (1, 2), one per contributing half-space
    scale: Fraction         # global t; eps_i = t * w_i

    @property
    def values(self):
        return tuple(self.scale * w for w in self.weights)

    def with_scale(self, t):
        return EpsilonAssignment(self.weights, Fraction(t))


@dataclass
class ChamberCertificate:
    epsilon: EpsilonAssignment
    simple: bool
    proper: tuple
    stable: bool
    stability_scale: Fraction
    signature: frozenset = None
    halvings: int = 0
    draws: int = 1

    @property
    def valid(self):
        return self.simple and all(self.proper) and self.stable


@dataclass
class MinimalModelReport:
    sigma: object
    k: object
    checks: dict
    kappa: object
    box: object
    contributing: list
    certificate: ChamberCertificate
    puffed: object
    input_fan: object
    x_class: object
    terminality: object = None
    positivity: dict = field(default_factory=dict)
    clearing_multiple: int = 1

    @property
    def ok(self):
        return all(self.checks.values())


def contributing_halfspaces(h):
    """Half-spaces {(p, m) >= h(p)} whose boundary meets Box_h, in ray order."""
    box = box_of(h)
    if box.is_empty:
        raise EmptyAdjointPolytope("Box_h is empty (kappa = -inf); use the MMP route")
    fan = h.fan
    out = []
    for i in fan.used_rays:
        H = Halfspace(fan.rays[i], h.values[i])
        if contributes(H, box):
            out.append(H)
    return out


def puffed_polytope(h, eps, contributing=None):
    if contributing is None:
        contributing = contributing_halfspaces(h)
    values = eps.values if isinstance(eps, EpsilonAssignment) else tuple(eps)
    if len(values) != len(contributing) or any(e <= 0 for e in values):
        raise ValueError("need one positive epsilon per contributing half-space")
    return intersect([H.relaxed(e) for H, e in zip(contributing, values)])


def _draw_weights(rng, r):
    seen = set()
    while len(seen) < r:
        seen.add(Fraction(rng.randint(1001, 1999), 1000))
    ws = list(seen)
    rng.shuffle(ws)
    return tuple(ws)


def _chamber_checks(contributing, eps):
    relaxed = [H.relaxed(e) for H, e in zip(contributing, eps.values)]
    P = intersect(relaxed)
    if not P.is_full_dimensional:
        return P, False, tuple(False for _ in relaxed)
    simple = is_simple(P)
    proper = tuple(contributes_properly(H, relaxed[:i] + relaxed[i + 1:])
                   for i, H in enumerate(relaxed))
    return P, simple, proper


def sample_epsilon_in_chamber(h, seed=0, contributing=None):
    """Generic small epsilon in a chamber adjacent to 0, with a certificate.

    Draw distinct weights in (1, 2) from a seeded generator and halve the
    global scale t until Box(t w) is simple, every relaxed half-space
    contributes properly, and the combinatorial type is the same at t, t/2
    and t/4.
    """
    if contributing is None:
        contributing = contributing_halfspaces(h)
    rng = random.Random(seed)
    r = len(contributing)
    for draw in range(1, MAX_DRAWS + 1):
        weights = _draw_weights(rng, r)
        t = Fraction(1)
        for halving in range(MAX_HALVINGS):
            eps = EpsilonAssignment(weights, t)
            P, simple, proper = _chamber_checks(contributing, eps)
            if simple and all(proper):
                types = [P.combinatorial_type()]
                stable = True
                for s in (t / 2, t / 4):
                    Q, s_simple, s_proper = _chamber_checks(contributing, eps.with_scale(s))
                    if not (s_simple and all(s_proper)) or Q.combinatorial_type() != types[0]:
                        stable = False
                        break
                if stable:
                    cert = ChamberCertificate(eps, simple, proper, True, t,
                                              signature=types[0], halvings=halving, draws=draw)
                    return eps, cert
            t /= 2
        log.debug("weights %s never stabilised; redrawing", weights)
    raise ChamberSearchError(
        f"no stable chamber after {MAX_DRAWS} draws of {MAX_HALVINGS} halvings "
        f"({r} contributing half-spaces)")


def construct_minimal_model(fan, x_class, seed=0, verify_terminal=True):
    """Puff up Box_h and verify that the dual fan carries a minimal model."""
    if x_class.fan != fan:
        x_class = proper_transform_class(x_class, fan)
    if not is_smooth(fan):
        fan = desingularize(fan)
        x_class = proper_transform_class(x_class, fan)
    h = adjoint_support(x_class)
    box_h = box_of(h)
    if box_h.is_empty:
        raise EmptyAdjointPolytope("Box_h is empty (kappa = -inf); use the MMP route")
    contributing = contributing_halfspaces(h)
    eps, cert = sample_epsilon_in_chamber(h, seed, contributing)
    puffed = puffed_polytope(h, eps, contributing)
    sigma = dual_fan(puffed)
    x_sigma = proper_transform_class(x_class, sigma)
    k = adjoint_support(x_sigma)
    box_k = box_of(k)

    checks = {}
    checks["ray_set_equals_contributing"] = sigma.ray_set() == {H.normal for H in contributing}
    checks["simplicial"] = is_simplicial(sigma)
    checks["k_matches_h"] = all(k.at_ray(p) == h.at_ray(p) for p in sigma.rays)
    checks["k_sigma_in_box"] = all(box_k.contains(m) for m in k.linear_parts())
    checks["nef"] = is_nef(k)
    checks["box_preserved"] = box_k.same_set(box_h)

    positivity = {}
    terminal = None
    if verify_terminal:
        witness = desingularize(common_refinement(sigma, fan))
        terminal = terminality_report(sigma, x_sigma, witness=witness)
        checks["terminal"] = terminal.terminal
        # m_p = p(Box_h) - h(p) + alpha_p, alpha_p the discrepancy over the input
        # fan (zero on its own rays); must agree with the direct computation
        alpha = discrepancies(x_class, witness).by_ray()
        by_ray = terminal.by_ray()
        for p in by_ray:
            positivity[p] = support_value(p, box_h) - evaluate(h, p) + alpha.get(p, 0)
        checks["positive"] = all(v > 0 for v in positivity.values()) and positivity == by_ray

    parts = k.linear_parts()
    report = MinimalModelReport(
        sigma=sigma, k=k, checks=checks, kappa=box_h.dim, box=box_h,
        contributing=contributing, certificate=cert, puffed=puffed, input_fan=fan,
        x_class=x_sigma, terminality=terminal, positivity=positivity,
        clearing_multiple=clearing_multiple(parts))
    for name, ok in checks.items():
        if not ok:
            raise ClaimFailure(name)
    return report
