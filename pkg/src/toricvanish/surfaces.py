"""Vanishing classification on complete toric surfaces.

Opposite ray pairs carry the one-dimensional strata of the class plane
along which cohomology-free divisors persist. This module packages the
pair data, partitions a window of divisor classes by which arithmetic
core explains their vanishing, and evaluates the self-intersection
interval conditions that membership in a pair core forces on a smooth
surface. The interval conditions are necessary, never sufficient.
"""

from dataclasses import dataclass

from .classgroup import class_group
from .cohomology import multiplicity_table, signature_occupied
from .errors import PreconditionError
from .fan import (
    circular_order,
    is_complete,
    opposite_pairs as opposite_ray_indices,
    surface_selfintersections,
)
from .frobenius import nef_core, pair_core
from .lattice import integer_kernel


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@dataclass(frozen=True)
class OppositePair:
    """An opposite ray pair with its separation data.

    `functional` is a primitive lattice form vanishing on both rays of the
    pair; `negative_side` and `positive_side` split the remaining rays by
    its sign. `direction` is the class of the divisor cut out on the
    negative side, the generator of the pair's stratum.
    """

    p: int
    q: int
    negative_side: tuple
    positive_side: tuple
    functional: tuple
    direction: object

    @property
    def separated(self):
        return self.negative_side + self.positive_side


def opposite_pairs(fan, group=None):
    """All opposite ray pairs of a complete surface fan, with separation
    sets and stratum direction class."""
    if fan.dim != 2:
        raise PreconditionError("opposite-pair analysis needs a surface fan")
    if not is_complete(fan):
        raise PreconditionError("opposite-pair analysis needs a complete fan")
    group = group or class_group(fan)
    out = []
    for p, q in opposite_ray_indices(fan):
        m = list(integer_kernel([list(fan.ray(p))])[0])
        vals = [_dot(fan.ray(i), m) for i in range(fan.n_rays)]
        if not any(v < 0 for v in vals):
            m = [-x for x in m]
            vals = [-v for v in vals]
        negative = tuple(i for i, v in enumerate(vals) if v < 0)
        positive = tuple(i for i, v in enumerate(vals) if v > 0)
        if set(negative) | set(positive) != set(range(fan.n_rays)) - {p, q}:
            raise PreconditionError(
                "a ray other than the pair lies on the pair's line"
            )
        coeffs = [v if v < 0 else 0 for v in vals]
        out.append(
            OppositePair(p, q, negative, positive, tuple(m), group.project(coeffs))
        )
    return out


def surface_classify_window(fan, window):
    """Partition the classes of a window by what explains their vanishing.

    Every class in the free-coordinate window of the given radius lands in
    exactly one bucket:

    - ``"has_cohomology"``: some degree above zero is nonzero;
    - ``"in_A_nef"``: higher cohomology vanishes and the class lies in the
      arithmetic core of the nef cone;
    - ``"in_A_pq(p,q)"``: higher cohomology vanishes and the first opposite
      pair whose core contains the class is (p, q);
    - ``"residual_with_vanishing"``: higher cohomology vanishes but no core
      accounts for it.

    Vanishing is decided from the cohomology module directly, not from the
    core memberships.
    """
    if fan.dim != 2:
        raise PreconditionError("window classification needs a surface fan")
    if not is_complete(fan):
        raise PreconditionError("window classification needs a complete fan")
    group = class_group(fan)
    pairs = opposite_pairs(fan, group)
    nef = nef_core(fan, group)
    cores = [
        (f"in_A_pq({pair.p},{pair.q})", pair_core(fan, pair.p, pair.q, group))
        for pair in pairs
    ]
    higher = [
        iset
        for iset, dims in multiplicity_table(fan).items()
        if any(degree > 0 for degree in dims)
    ]
    buckets = {"in_A_nef": []}
    for label, _ in cores:
        buckets[label] = []
    buckets["residual_with_vanishing"] = []
    buckets["has_cohomology"] = []
    for cls in group.iter_window(window):
        coeffs = group.lift(cls)
        occupied = None
        for k, iset in enumerate(higher):
            if signature_occupied(fan, coeffs, iset):
                occupied = k
                break
        if occupied is not None:
            # Move-to-front: nearby classes tend to realize the same
            # signature, so the next scan usually stops immediately.
            higher.insert(0, higher.pop(occupied))
            buckets["has_cohomology"].append(cls)
        elif nef.test(cls):
            buckets["in_A_nef"].append(cls)
        else:
            for label, core in cores:
                if core.test(cls):
                    buckets[label].append(cls)
                    break
            else:
                buckets["residual_with_vanishing"].append(cls)
    return buckets


def _surface_frame(fan):
    """Circular neighbours and negated self-intersections, validated."""
    if not is_complete(fan):
        raise PreconditionError("the interval conditions need a complete fan")
    selfint = surface_selfintersections(fan)
    order = circular_order(fan)
    n = len(order)
    neighbours = {}
    for k, i in enumerate(order):
        neighbours[i] = (order[(k - 1) % n], order[(k + 1) % n])
    return neighbours, [-a for a in selfint]


def _interval_holds(coeffs, neighbours, steep, i, symmetric):
    b = steep[i]
    if b < 0:
        return True
    prev, nxt = neighbours[i]
    t = coeffs[prev] + coeffs[nxt] - b * coeffs[i]
    if symmetric:
        upper = 1 if b == 0 else min(1, b - 1)
    else:
        upper = b - 1
    return -1 <= t <= upper


def smooth_necessary_conditions(fan, value, group=None):
    """Interval conditions forced by membership in some opposite-pair core.

    For a pair (p, q) the conditions are c_p + c_q = -1 together with
    c_{i-1} + c_{i+1} - b_i c_i in [-1, b_i - 1] for every separated ray i,
    where b_i is the negated self-intersection number and the neighbours
    follow the circular ray order. Rays whose consecutive triple carries a
    one-signed relation (b_i < 0) impose nothing. The divisor passes when
    some pair accepts it; with no opposite pairs nothing can.

    Both the pair sum and the intervals are invariant under linear
    equivalence, so the value may be a class or a coefficient vector.
    """
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    neighbours, steep = _surface_frame(fan)
    for pair in opposite_pairs(fan, group):
        if coeffs[pair.p] + coeffs[pair.q] != -1:
            continue
        if all(
            _interval_holds(coeffs, neighbours, steep, i, False)
            for i in pair.separated
        ):
            return True
    return False


def symmetric_conditions(fan, value, group=None):
    """Two-sided interval conditions for vanishing of O(D) and O(-D).

    Tightens the one-sided intervals to [-1, min(1, b_i - 1)] for b_i >= 1
    and to [-1, 1] for b_i = 0, without any condition on the pair sum. The
    divisor passes when the intervals of some opposite pair hold; with no
    opposite pairs the condition set is empty and the check passes.
    """
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    neighbours, steep = _surface_frame(fan)
    pairs = opposite_pairs(fan, group)
    if not pairs:
        return True
    for pair in pairs:
        if all(
            _interval_holds(coeffs, neighbours, steep, i, True)
            for i in pair.separated
        ):
            return True
    return False
