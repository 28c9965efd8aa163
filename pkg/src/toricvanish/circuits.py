"""Circuits of ray configurations and invariants of 1-circuit varieties.

A circuit is a minimal linearly dependent set of rays; its primitive
relation is unique up to sign. An orientation fixes the sign, splitting the
circuit into positive and negative parts. The fan of an oriented circuit,
its Picard generator, wall forms, smoothness and ampleness thresholds, and
its global and local cohomology are computed here in exact arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from .errors import PreconditionError
from .fan import Fan, make_fan
from .lattice import (
    cokernel_presentation,
    determinant,
    integer_kernel,
    saturation_index,
    solve_rational,
    transpose,
)


@dataclass(frozen=True)
class OrientedCircuit:
    """A circuit with a chosen sign of its relation."""

    indices: tuple
    alpha: tuple

    def __post_init__(self):
        if len(self.indices) != len(self.alpha):
            raise PreconditionError("relation length must match the index set")
        if tuple(sorted(self.indices)) != tuple(self.indices):
            raise PreconditionError("circuit indices must be sorted")

    @property
    def plus(self):
        return tuple(i for i, a in zip(self.indices, self.alpha) if a > 0)

    @property
    def minus(self):
        return tuple(i for i, a in zip(self.indices, self.alpha) if a < 0)

    def reverse(self):
        return OrientedCircuit(self.indices, tuple(-a for a in self.alpha))

    def alpha_of(self, i):
        return self.alpha[self.indices.index(i)]


@dataclass(frozen=True)
class Circuit:
    """Unoriented circuit; the stored relation has a positive leading entry."""

    indices: tuple
    alpha: tuple

    def oriented(self):
        return OrientedCircuit(self.indices, self.alpha)

    def orientations(self):
        oc = self.oriented()
        return oc, oc.reverse()


def circuit_relation(rays, indices):
    """Primitive relation of a minimal dependent subset, or None if the
    subset is not a circuit. Leading entry positive."""
    idx = sorted(indices)
    cols = [[rays[i][j] for i in idx] for j in range(len(rays[idx[0]]))]
    ker = integer_kernel(cols)
    if len(ker) != 1:
        return None
    v = ker[0]
    if any(a == 0 for a in v):
        return None
    return tuple(v)


def enumerate_circuits(rays):
    """All circuits of the configuration, by increasing cardinality then
    lexicographic index order."""
    n = len(rays)
    found = []
    for size in range(2, n + 1):
        for combo in combinations(range(n), size):
            if any(set(c.indices) <= set(combo) for c in found):
                continue
            alpha = circuit_relation(rays, combo)
            if alpha is not None:
                found.append(Circuit(tuple(combo), alpha))
    return found


def is_fibrational(circuit):
    alpha = circuit.alpha
    return all(a > 0 for a in alpha) or all(a < 0 for a in alpha)


def model_configuration(alpha):
    """Canonical rays of the abstract 1-circuit configuration with the
    given primitive relation: images of the unit vectors in Z^k modulo
    the relation."""
    k = len(alpha)
    if k < 2 or gcd(*(abs(a) for a in alpha)) != 1 or any(a == 0 for a in alpha):
        raise PreconditionError("not a primitive circuit relation")
    group = cokernel_presentation([[a] for a in alpha])
    if group.invariants:
        raise PreconditionError("relation is not primitive")
    rays = []
    for i in range(k):
        e = [0] * k
        e[i] = 1
        free, _ = group.project(e)
        rays.append(tuple(free))
    return rays


def saturated_span_coords(rays, indices):
    """Coordinates of the chosen rays in a basis of the saturation of their
    span; returns (coordinate vectors, basis rows)."""
    idx = sorted(indices)
    M = [list(rays[i]) for i in idx]
    d = len(M[0])
    functionals = integer_kernel(M)
    if not functionals:
        basis = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
        return [tuple(rays[i]) for i in idx], basis
    basis = integer_kernel([list(f) for f in functionals])
    Bt = transpose([list(b) for b in basis])
    coords = []
    for i in idx:
        sol = solve_rational(Bt, list(rays[i]))
        assert sol is not None and all(x.denominator == 1 for x in sol)
        coords.append(tuple(int(x) for x in sol))
    return coords, basis


def circuit_fan(rays, oc):
    """The fan of an oriented circuit inside the saturation of its span,
    with maximal cones dropping one positive index each. Returns the fan
    and the list mapping local ray positions to ambient indices."""
    if not oc.plus:
        raise PreconditionError("orientation with empty positive part has no fan")
    coords, _ = saturated_span_coords(rays, oc.indices)
    order = sorted(oc.indices)
    cones = []
    for i in sorted(oc.plus):
        cones.append([p for p, j in enumerate(order) if j != i])
    return make_fan(coords, cones), order


# ---------------------------------------------------------------------------
# Lattice indices s, s_I and wall forms.


def _require_circuit(oc, rays=None):
    if any(a == 0 for a in oc.alpha):
        raise PreconditionError("relation has a zero entry; not a circuit")
    if rays is not None:
        reference = circuit_relation(rays, oc.indices)
        flipped = tuple(-a for a in oc.alpha) if reference else None
        if reference is None or (
            tuple(reference) != tuple(oc.alpha) and tuple(reference) != flipped
        ):
            raise PreconditionError("index set is not a circuit of the rays")


def global_index(oc, rays=None, xi=None):
    """The index s: |det xi| when an endomorphism is given, else the index
    of the lattice spanned by the circuit rays in its saturation."""
    if xi is not None:
        s = abs(determinant([list(r) for r in xi]))
        if s == 0:
            raise PreconditionError("xi is not injective")
        return s
    if rays is not None:
        return saturation_index([list(rays[i]) for i in sorted(oc.indices)])
    return 1


def subset_gcd(oc, subset):
    """r_I: gcd of |alpha_k| over circuit members outside the subset."""
    vals = [abs(a) for i, a in zip(oc.indices, oc.alpha) if i not in subset]
    return gcd(*vals) if vals else 1


def subset_index(oc, subset, rays):
    """s_I = |saturation of the subset's ray lattice| / r_I, as a Fraction."""
    idx = sorted(set(subset))
    sat = saturation_index([list(rays[i]) for i in idx]) if idx else 1
    return Fraction(sat, subset_gcd(oc, subset))


def circuit_walls(oc):
    """Inner walls of the circuit fan: the circuit minus a pair of positive
    indices."""
    return [
        frozenset(oc.indices) - {i, j} for i, j in combinations(sorted(oc.plus), 2)
    ]


def wall_form(oc, tau, rays=None, xi=None):
    """The rational wall form t for an inner wall tau of the circuit fan."""
    rest = sorted(set(oc.indices) - set(tau))
    if len(rest) != 2 or not set(rest) <= set(oc.plus):
        raise PreconditionError(f"{sorted(tau)} is not an inner wall of the circuit fan")
    i, j = rest
    s = global_index(oc, rays=rays, xi=xi)
    if rays is None and xi is not None:
        if tuple(oc.indices) != tuple(range(len(oc.alpha))):
            raise PreconditionError("an embedding needs model indices 0..k-1")
        from .lattice import matvec

        model = model_configuration(oc.alpha)
        rays = [tuple(matvec([list(r) for r in xi], list(m))) for m in model]
    if rays is not None:
        s_tau = subset_index(oc, tau, rays)
    else:
        s_tau = Fraction(1)
    ai, aj = abs(oc.alpha_of(i)), abs(oc.alpha_of(j))
    return s_tau / s / lcm(ai, aj)


def circuit_form(group, oc):
    """The linear form on the class group's free coordinates taking the
    value alpha_i on each circuit divisor and zero on all others."""
    n = group.fan.n_rays
    rows = []
    rhs = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        rows.append(list(group.project(e).free))
        rhs.append(oc.alpha_of(i) if i in oc.indices else 0)
    f = solve_rational(rows, rhs)
    if f is None:
        raise PreconditionError("circuit form does not exist; not a circuit of the fan")
    for row, b in zip(rows, rhs):
        assert sum(fr * x for fr, x in zip(f, row)) == b
    return tuple(f)


def circuit_hyperplane(group, oc):
    """Primitive integer version of the circuit form and a basis of its
    kernel (the hyperplane spanned by the non-circuit divisor classes)."""
    f = circuit_form(group, oc)
    denom = 1
    for x in f:
        denom = denom * x.denominator // gcd(denom, x.denominator)
    ints = [int(x * denom) for x in f]
    g = gcd(*(abs(v) for v in ints if v)) if any(ints) else 1
    ints = [v // g for v in ints]
    kernel = integer_kernel([ints])
    return tuple(ints), [tuple(b) for b in kernel]


# ---------------------------------------------------------------------------
# One-circuit invariants.


def one_circuit_pic_generator(oc, rays=None, xi=None):
    """Positive generator of the Picard group inside the (torsion-free part
    of the) class group of the circuit variety: s * lcm of the positive
    weights."""
    _require_circuit(oc, rays)
    if not oc.plus:
        raise PreconditionError("empty positive part")
    s = global_index(oc, rays=rays, xi=xi)
    return s * lcm(*(oc.alpha_of(i) for i in oc.plus))


def one_circuit_smooth(oc, rays=None, xi=None):
    """Smoothness of the circuit variety: index one, and weight one at each
    positive index other than a chosen one, for every choice."""
    _require_circuit(oc, rays)
    if global_index(oc, rays=rays, xi=xi) != 1:
        return False
    plus = oc.plus
    if len(plus) <= 1:
        return True
    return all(oc.alpha_of(i) == 1 for i in plus)


def one_circuit_ampleness(oc, d_class, e=None, rays=None, xi=None):
    """Ampleness flags for a rational class D (a number in the class group
    tensored with Q, oriented by alpha) plus a fractional part E.

    The nef flag is exact (class nonnegativity of D + E); the ample and
    very-ample flags report whether the wall-form threshold criteria fire
    (minimum of D.V(tau) against the positive-part size, or dimension plus
    one in the singular very-ample case).
    """
    _require_circuit(oc, rays)
    d_class = Fraction(d_class)
    if e is None:
        e = [0] * len(oc.indices)
    if len(e) != len(oc.indices):
        raise PreconditionError("fractional part must match the circuit length")
    e = [Fraction(x) for x in e]
    if any(x < -1 or x > 0 for x in e):
        raise PreconditionError("fractional parts must lie in [-1, 0]")
    de_class = d_class + sum(x * a for x, a in zip(e, oc.alpha))
    walls = circuit_walls(oc)
    tvals = [wall_form(oc, tau, rays=rays, xi=xi) * d_class for tau in walls]
    minv = min(tvals) if tvals else None
    k = len(oc.plus)
    dim = len(oc.indices) - 1
    smooth = one_circuit_smooth(oc, rays=rays, xi=xi)
    ample = minv is None or minv >= k
    if smooth:
        very = minv is None or minv >= k + 1
    else:
        very = minv is None or minv >= dim + 1
    return {"nef": de_class >= 0, "ample": ample, "very_ample": very}


def _local_quotient(oc, rays):
    from .classgroup import ClassGroup
    from .frobenius import CircuitQuotient

    coords, _ = saturated_span_coords(rays, oc.indices)
    k = len(coords)
    shell = make_fan(coords, [list(range(k))])
    group = ClassGroup(shell)
    local = OrientedCircuit(tuple(range(k)), oc.alpha)
    return CircuitQuotient(group, local), local


def one_circuit_cohomology(oc, rays, coeffs):
    """Per-degree dimensions of the global cohomology of O(D) on the circuit
    variety, D given by coefficients on the circuit rays. Nonzero only in
    degrees 0 and |plus| - 1; infinite-dimensional degrees report INFINITE.
    """
    from .frobenius import semigroup_count
    from .polyhedra import INFINITE

    if not oc.plus:
        raise PreconditionError("orientation with empty positive part has no fan")
    if len(coeffs) != len(oc.indices):
        raise PreconditionError("coefficients must match the circuit length")
    cq, local = _local_quotient(oc, rays)
    target = cq.eta(list(coeffs))
    out = {}
    top = len(oc.plus) - 1
    count = semigroup_count(cq, local, target)
    if count:
        out[top] = count
    if len(oc.plus) < len(oc.indices):
        out[0] = INFINITE
    else:
        sections = semigroup_count(cq, local.reverse(), target)
        if sections:
            out[0] = sections
    return out


def one_circuit_local_cohomology(oc, rays, coeffs):
    """Per-degree dimensions of the cohomology of O(D) supported on the
    maximal complete invariant subvariety (the orbit closure of the cone
    spanned by the negative-part rays)."""
    from .frobenius import semigroup_count
    from .polyhedra import INFINITE

    if not oc.minus or not oc.plus:
        raise PreconditionError("a mixed orientation is required")
    if len(coeffs) != len(oc.indices):
        raise PreconditionError("coefficients must match the circuit length")
    cq, local = _local_quotient(oc, rays)
    target = cq.eta(list(coeffs))
    dim = len(oc.indices) - 1
    out = {dim: INFINITE}
    low = len(oc.minus)
    if low != dim:
        count = semigroup_count(cq, local.reverse(), target)
        if count:
            out[low] = count
    return out
