"""Built-in worked examples in dimension 3.

The input fans are rebuilt from their class polytopes: take the normal fan of
Box_g and split each four-ray cone along the diagonal joining its two
coordinate rays.  Box_h, the contributing half-spaces, the puffed fan and
kappa depend only on the ray set, so any smooth fan on these rays gives the
same downstream answers.
"""
from .divisors import DivisorClassOfX, ToricDivisor
from .fan import Fan, dual_fan, is_smooth
from .polytope import Halfspace, intersect

P_RAYS = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
Q_RAYS = [(1, 1, 1), (-1, -1, -1), (1, 1, -1), (-1, -1, 1),
          (1, -1, 1), (-1, 1, -1), (-1, 1, 1), (1, -1, -1)]

# coefficients of X on (p_1..p_6, q_1..q_8)
EXAMPLE_CLASSES = {
    "example-1": [1, 1, 1, 1, 1, 1] + [2] * 8,
    "example-2": [2, 2, 1, 1, 1, 1] + [3] * 8,
}


def _is_axis(v):
    return sum(1 for x in v if x != 0) == 1


def split_square_cones(fan):
    """Split every 4-ray cone along the diagonal through its two axis rays."""
    cones = []
    for k, c in enumerate(fan.cones):
        if len(c) == fan.dim:
            cones.append(c)
            continue
        if len(c) != 4:
            raise ValueError(f"cone {k} has {len(c)} rays; only squares are split")
        axis = [i for i in c if _is_axis(fan.rays[i])]
        other = [i for i in c if i not in axis]
        if len(axis) != 2:
            raise ValueError(f"cone {k} does not have exactly two axis rays")
        for j in other:
            cones.append(tuple(axis) + (j,))
    return Fan(fan.rays, cones, name=fan.name)


def _try_other_diagonal(fan):
    cones = []
    for c in fan.cones:
        if len(c) == fan.dim:
            cones.append(c)
            continue
        axis = [i for i in c if _is_axis(fan.rays[i])]
        other = [i for i in c if i not in axis]
        for j in axis:
            cones.append(tuple(other) + (j,))
    return Fan(fan.rays, cones, name=fan.name)


def class_polytope(coefficients):
    rays = P_RAYS + Q_RAYS
    return intersect([Halfspace(r, -c) for r, c in zip(rays, coefficients)], 3)


def example_fan(name):
    coeffs = EXAMPLE_CLASSES[name]
    box = class_polytope(coeffs)
    normal = dual_fan(box)
    fan = split_square_cones(normal)
    if not is_smooth(fan):
        fan = _try_other_diagonal(normal)
    if not is_smooth(fan):
        raise ValueError(f"could not build a smooth fan for {name}")
    # fix ray order to p_1..p_6, q_1..q_8
    order = [fan.ray_index(r) for r in P_RAYS + Q_RAYS]
    pos = {old: new for new, old in enumerate(order)}
    return Fan(P_RAYS + Q_RAYS, [[pos[i] for i in c] for c in fan.cones], name=name)


def example_pair(name):
    """(fan, class of X) for 'example-1' or 'example-2'."""
    fan = example_fan(name)
    D = ToricDivisor(fan, tuple(EXAMPLE_CLASSES[name]))
    return fan, DivisorClassOfX.from_divisor(D)


def octant_fan():
    cones = [[(a, 0, 0), (0, b, 0), (0, 0, c)] for a in (1, -1) for b in (1, -1) for c in (1, -1)]
    return Fan.from_cones(cones, name="octants")


def projective_space_fan(n):
    rays = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [[j for j in range(n + 1) if j != i] for i in range(n + 1)]
    return Fan(rays, cones, name=f"P^{n}")
