"""Semigroup membership in circuit quotients and arithmetic vanishing cores.

Every oriented circuit cuts out a rank-one quotient of the class group; a
divisor class avoids cohomology contributed by that circuit exactly when its
image misses an explicit numerical semigroup there. Intersecting these
complement sets over a flat of oriented circuits gives an arithmetic core:
a set of classes whose vanishing is certified by arithmetic alone. This
module decides all of these memberships exactly, plus the window scans
built on them (vector partition zero sets, residual classes).
"""

from __future__ import annotations

from fractions import Fraction

from .circuits import circuit_form, enumerate_circuits
from .classgroup import DivisorClass, class_group
from .errors import PreconditionError
from .fan import is_complete, opposite_pairs
from .lattice import cokernel_presentation, integer_kernel
from .polyhedra import in_cone


def denumerant(weights, target, strict=()):
    """Number of ways to write target as a nonnegative integer combination
    of the weights, requiring a positive coefficient at each index in
    strict."""
    weights = [int(w) for w in weights]
    if any(w < 1 for w in weights):
        raise PreconditionError("weights must be positive")
    strict = set(strict)
    target = int(target) - sum(weights[i] for i in strict)
    if target < 0:
        return 0
    dp = [0] * (target + 1)
    dp[0] = 1
    for w in weights:
        for v in range(w, target + 1):
            dp[v] += dp[v - w]
    return dp[target]


class CircuitQuotient:
    """The class group modulo the classes of all divisors outside a circuit.

    The quotient has free rank one; its free coordinate is normalized so
    that the i-th circuit divisor maps to alpha_i (plus torsion).
    """

    def __init__(self, group, oc):
        self.group = group
        self.oc = oc
        fan = group.fan
        n = fan.n_rays
        if any(i < 0 or i >= n for i in oc.indices):
            raise PreconditionError("circuit indices out of range")
        outside = [i for i in range(n) if i not in oc.indices]
        mat = []
        for r in range(n):
            row = list(fan.ray(r))
            row.extend(1 if r == j else 0 for j in outside)
            mat.append(row)
        self.quotient = cokernel_presentation(mat)
        if self.quotient.free_rank != 1:
            raise PreconditionError("index set is not a circuit of the fan")
        etas = {}
        for i in oc.indices:
            e = [0] * n
            e[i] = 1
            free, tors = self.quotient.project(e)
            etas[i] = (free[0], tuple(tors))
        if all(etas[i][0] == oc.alpha_of(i) for i in oc.indices):
            self.sign = 1
        elif all(etas[i][0] == -oc.alpha_of(i) for i in oc.indices):
            self.sign = -1
        else:
            raise PreconditionError("relation does not match the fan's rays")
        self._etas = {i: (self.sign * f, t) for i, (f, t) in etas.items()}

    @property
    def invariants(self):
        return self.quotient.invariants

    def eta_ray(self, i):
        """Image of the i-th prime divisor: (free part, torsion part)."""
        return self._etas[i]

    def eta(self, coeffs):
        """Image of a divisor given by ray coefficients."""
        free, tors = self.quotient.project(list(coeffs))
        return self.sign * free[0], tuple(tors)


def semigroup_count(cq, oc, target):
    """Number of representations target = sum_{minus} c_i eta(D_i) -
    sum_{plus} c_i eta(D_i) with integer c_i >= 0 on the negative part and
    c_i >= 1 on the positive part. The orientation may be the quotient's
    own or its reverse."""
    if tuple(oc.indices) != tuple(cq.oc.indices):
        raise PreconditionError("orientation does not belong to this quotient")
    invs = cq.invariants
    tfree, ttors = int(target[0]), list(target[1])
    if len(ttors) != len(invs):
        raise PreconditionError("torsion part has the wrong length")
    gens = []
    for i in oc.minus:
        f, t = cq.eta_ray(i)
        gens.append((f, t))
    for i in oc.plus:
        f, t = cq.eta_ray(i)
        gens.append((-f, tuple(-x for x in t)))
        tfree += f
        ttors = [(a + b) % d for a, b, d in zip(ttors, t, invs)]
    signs = {1 if f > 0 else -1 for f, _ in gens}
    assert len(signs) == 1, "circuit generators must be uniformly signed"
    sigma = signs.pop()
    total = sigma * tfree
    if total < 0:
        return 0
    zero = tuple(0 for _ in invs)
    dp = [dict() for _ in range(total + 1)]
    dp[0][zero] = 1
    for f, t in gens:
        step = sigma * f
        for v in range(step, total + 1):
            for coset, cnt in dp[v - step].items():
                nxt = tuple((a + b) % d for a, b, d in zip(coset, t, invs))
                dp[v][nxt] = dp[v].get(nxt, 0) + cnt
    goal = tuple(a % d for a, d in zip(ttors, invs))
    return dp[total].get(goal, 0)


def in_F(group, oc, divisor):
    """Whether the divisor class lies in the Frobenius set of the oriented
    circuit: its image in the circuit quotient is not a semigroup element."""
    _, coeffs = group.coerce(divisor)
    cq = CircuitQuotient(group, oc)
    return semigroup_count(cq, oc, cq.eta(coeffs)) == 0


def in_F_pair(group, circuit, divisor):
    """Membership in the two-sided Frobenius set (both orientations)."""
    oc, rev = circuit.orientations()
    return in_F(group, oc, divisor) and in_F(group, rev, divisor)


class ArithmeticCore:
    """Intersection of the Frobenius sets over a flat of oriented circuits,
    with the circuit quotients built once."""

    def __init__(self, group, flat):
        self.group = group
        self.flat = list(flat)
        self.members = [(oc, CircuitQuotient(group, oc)) for oc in self.flat]

    def test(self, divisor):
        _, coeffs = self.group.coerce(divisor)
        for oc, cq in self.members:
            if semigroup_count(cq, oc, cq.eta(coeffs)) != 0:
                return False
        return True


def in_arithmetic_core(group, flat, divisor):
    """Membership in the arithmetic core of an explicit flat."""
    return ArithmeticCore(group, flat).test(divisor)


# ---------------------------------------------------------------------------
# Flats attached to strata of the class group.


def flat_for_generators(group, generators):
    """All oriented circuits whose linear form is nonnegative on every given
    generator (free-coordinate vectors of the stratum)."""
    out = []
    for circuit in enumerate_circuits(group.fan.rays):
        oc = circuit.oriented()
        form = circuit_form(group, oc)
        vals = [sum(f * Fraction(x) for f, x in zip(form, g)) for g in generators]
        if all(v >= 0 for v in vals):
            out.append(oc)
        if all(v <= 0 for v in vals):
            out.append(oc.reverse())
    return out


def zero_flat(group):
    """Both orientations of every circuit (the flat of the 0 stratum)."""
    out = []
    for circuit in enumerate_circuits(group.fan.rays):
        out.extend(circuit.orientations())
    return out


def pair_stratum_generator(fan, group, p, q):
    """The primitive class generating the stratum of an opposite ray pair:
    the divisor cut out on the side of the pair's line where the dual
    direction is negative."""
    if fan.dim != 2:
        raise PreconditionError("opposite-pair strata are a surface notion")
    if tuple(fan.ray(p)) != tuple(-x for x in fan.ray(q)):
        raise PreconditionError("rays are not opposite")
    m = integer_kernel([list(fan.ray(p))])[0]
    vals = [sum(a * b for a, b in zip(fan.ray(i), m)) for i in range(fan.n_rays)]
    if not any(v < 0 for v in vals):
        m = [-x for x in m]
        vals = [-v for v in vals]
    coeffs = [v if v < 0 else 0 for v in vals]
    return group.project(coeffs)


def nef_core(fan, group=None):
    """The arithmetic core of the nef cone."""
    from .discriminantal import nef_generators

    group = group or class_group(fan)
    gens = [cls.free for cls in nef_generators(fan, group)]
    return ArithmeticCore(group, flat_for_generators(group, gens))


def pair_core(fan, p, q, group=None):
    """The arithmetic core of the stratum of an opposite ray pair."""
    group = group or class_group(fan)
    gen = pair_stratum_generator(fan, group, p, q)
    return ArithmeticCore(group, flat_for_generators(group, [gen.free]))


def in_A_nef(fan, divisor):
    return nef_core(fan).test(divisor)


def in_A_pq(fan, p, q, divisor):
    return pair_core(fan, p, q).test(divisor)


def in_A_minus_face(fan, generators, divisor):
    """Membership in the arithmetic core of a face stratum given by explicit
    generators (free-coordinate vectors)."""
    group = class_group(fan)
    return in_arithmetic_core(group, flat_for_generators(group, generators), divisor)


def vanishing_by_core(fan, divisor):
    """Vanishing verdicts by arithmetic cores alone. The nef core certifies
    vanishing in all positive degrees; an opposite-pair core certifies
    vanishing in all degrees. "unknown" asserts nothing."""
    if not is_complete(fan):
        raise PreconditionError("core verdicts need a complete fan")
    group = class_group(fan)
    nef = nef_core(fan, group).test(divisor)
    pairs = []
    if fan.dim == 2:
        for p, q in opposite_pairs(fan):
            if pair_core(fan, p, q, group).test(divisor):
                pairs.append((p, q))
    return {
        "vanishes_by_nef_core": nef,
        "vanishes_by_minus_face_core": bool(pairs),
        "pairs": tuple(pairs),
        "unknown": not (nef or bool(pairs)),
    }


# ---------------------------------------------------------------------------
# Window scans.


def _class_key(cls):
    return (cls.free, cls.torsion)


def orthant_offset(group, I):
    """Class of minus the sum of the distinguished divisors over I."""
    coeffs = [-1 if i in I else 0 for i in range(group.fan.n_rays)]
    return group.project(coeffs)


def in_orthant(group, I, divisor):
    """Membership in the shifted saturated orthant cone of the index set I:
    the free part of D minus the offset lies in the cone spanned by the
    negated gale vectors over I and the plain ones elsewhere."""
    cls, _ = group.coerce(divisor)
    diff = group.sub(cls, orthant_offset(group, I))
    gale = group.gale_transform()
    gens = []
    for i in range(group.fan.n_rays):
        vec = gale[i].free
        gens.append(tuple(-x for x in vec) if i in I else tuple(vec))
    return in_cone(gens, list(diff.free))


def vpf_zero_window(fan, I, window):
    """Classes in the window lying in the shifted orthant of I whose
    signature region contains no lattice point (vector partition zero set).
    """
    from .cohomology import signature_count

    group = class_group(fan)
    I = frozenset(I)
    out = []
    for cls in group.iter_window(window):
        if not in_orthant(group, I, cls):
            continue
        if signature_count(fan, group.lift(cls), I) == 0:
            out.append(cls)
    return sorted(out, key=_class_key)


def _cohomology_free(fan, group, cls):
    from .cohomology import cohomology_dims

    return not cohomology_dims(fan, group.lift(cls))


def residual_window(fan, stratum, window):
    """Residual classes of a stratum within a window of free coordinates.

    For the 0 stratum: classes with no cohomology in any degree that are
    not explained by the nef core or any opposite-pair core. For the nef
    or an opposite-pair stratum: classes outside the core whose membership
    persists along every stratum generator over the outer half of the
    window (the half-line test truncated at the window edge).
    """
    group = class_group(fan)
    if stratum in ("0", 0):
        cores = [nef_core(fan, group)]
        if fan.dim == 2:
            for p, q in opposite_pairs(fan):
                cores.append(pair_core(fan, p, q, group))
        out = []
        for cls in group.iter_window(window):
            if not _cohomology_free(fan, group, cls):
                continue
            if any(core.test(cls) for core in cores):
                continue
            out.append(cls)
        return sorted(out, key=_class_key)
    if stratum == "nef":
        from .discriminantal import nef_generators

        gens = [cls for cls in nef_generators(fan, group)]
        core = nef_core(fan, group)
    else:
        p, q = stratum
        gens = [pair_stratum_generator(fan, group, p, q)]
        core = pair_core(fan, p, q, group)
    out = []
    for cls in group.iter_window(window):
        if core.test(cls):
            continue
        ok = True
        for g in gens:
            for r in range(window // 2 + 1, window + 1):
                shifted = group.add(cls, group.scale(r, g))
                if not core.test(shifted):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(cls)
    return sorted(out, key=_class_key)
