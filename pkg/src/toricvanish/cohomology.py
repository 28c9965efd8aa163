"""Exact cohomology of divisorial sheaves by signature chambers.

Fix a divisor D = sum c_i D_i on the toric variety of a fan. For a lattice
point m of the character lattice, the signature of m is the set of rays
whose linear form violates the coefficient bound, l_i(m) < -c_i. The graded
piece of sheaf cohomology at m depends only on the signature I: it is the
reduced relative cohomology, shifted up by one degree, of the pair cut out
of the fan's simplicial model and the subvariety subcomplex by restricting
both to the vertex set I. Cohomology dimensions are therefore sums, over
the signature sets with nonacyclic pairs, of exact lattice-point counts of
the signature regions times fixed multiplicities. Both factors are computed
here without floating point; unbounded regions report INFINITE.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd

from .circuits import circuit_form, enumerate_circuits, is_fibrational
from .classgroup import class_group
from .errors import PreconditionError
from .fan import is_complete, simplicial_model, subvariety_complex
from .homology import relative_cohomology_dims
from .lattice import rank
from .polyhedra import (
    DEFAULT_COUNT_CAP,
    INFINITE,
    count_lattice_points,
    dd_cone,
    has_lattice_point,
    max_epsilon,
    recession_span,
)

WHOLE_VARIETY = (frozenset(),)


def _check_coeffs(fan, coeffs):
    coeffs = [int(c) for c in coeffs]
    if len(coeffs) != fan.n_rays:
        raise PreconditionError("one coefficient per ray is required")
    return coeffs


def signature_set(fan, coeffs, m):
    """Signature of a lattice point: rays with l_i(m) < -c_i."""
    coeffs = _check_coeffs(fan, coeffs)
    return frozenset(
        i
        for i in range(fan.n_rays)
        if sum(a * b for a, b in zip(fan.ray(i), m)) < -coeffs[i]
    )


def signature_constraints(fan, coeffs, I):
    """Inequalities (a, b) meaning a.m <= b cutting out the region of lattice
    points with signature exactly I."""
    coeffs = _check_coeffs(fan, coeffs)
    I = frozenset(I)
    cons = []
    for i in range(fan.n_rays):
        ray = fan.ray(i)
        if i in I:
            cons.append((tuple(ray), -coeffs[i] - 1))
        else:
            cons.append((tuple(-x for x in ray), coeffs[i]))
    return cons


def signature_count(fan, coeffs, I, cap=DEFAULT_COUNT_CAP):
    """Exact number of lattice points with signature I: an int or INFINITE."""
    cons = signature_constraints(fan, coeffs, I)
    return count_lattice_points(cons, fan.dim, cap=cap)


@lru_cache(maxsize=None)
def _signature_span(fan, iset):
    cons = [
        (tuple(fan.ray(i)) if i in iset else tuple(-x for x in fan.ray(i)), 0)
        for i in range(fan.n_rays)
    ]
    return recession_span(cons, fan.dim)


def signature_occupied(fan, coeffs, I):
    """Whether any lattice point has signature I: signature_count != 0.

    Cheaper than counting when only emptiness matters; the recession span of
    the region depends on the signature alone and is reused across
    coefficient vectors, and bounded sweeps stop at the first point.
    """
    coeffs = _check_coeffs(fan, coeffs)
    iset = frozenset(I)
    cons = signature_constraints(fan, coeffs, iset)
    return has_lattice_point(cons, fan.dim, span=_signature_span(fan, iset))


# ---------------------------------------------------------------------------
# Multiplicity tables.


def _vkey(fan, vcones):
    if vcones is None:
        return WHOLE_VARIETY
    return tuple(sorted((frozenset(c) for c in vcones), key=sorted))


@lru_cache(maxsize=None)
def _table(fan, vkey, char):
    model = simplicial_model(fan)
    sub = subvariety_complex(fan, vkey)
    out = {}
    for size in range(fan.n_rays + 1):
        for I in combinations(range(fan.n_rays), size):
            iset = frozenset(I)
            dims = relative_cohomology_dims(
                model.full_subcomplex(iset), sub.full_subcomplex(iset), char
            )
            if dims:
                out[iset] = {q + 1: d for q, d in dims.items()}
    return out


def multiplicity_table(fan, vcones=None, char=0):
    """Signature sets with cohomology, as {I: {degree: dimension}}.

    The degree is the sheaf cohomology degree. `vcones` lists the cones whose
    orbit closures make up the supporting subvariety; None means cohomology
    supported on the whole variety (ordinary sheaf cohomology). `char` is the
    coefficient field characteristic, zero or a prime. Treat the result as
    read-only; it is cached per fan, subvariety, and characteristic.
    """
    if fan.n_rays > 16:
        raise PreconditionError("multiplicity tables are limited to 16 rays")
    return _table(fan, _vkey(fan, vcones), char)


def _accumulate(fan, coeffs, vcones, cap, char):
    coeffs = _check_coeffs(fan, coeffs)
    out = {}
    for iset, dims in multiplicity_table(fan, vcones, char).items():
        count = signature_count(fan, coeffs, iset, cap=cap)
        if count == 0:
            continue
        for degree, d in dims.items():
            value = INFINITE if count == INFINITE else count * d
            prev = out.get(degree, 0)
            out[degree] = INFINITE if INFINITE in (prev, value) else prev + value
    return out


def cohomology_dims(fan, coeffs, cap=DEFAULT_COUNT_CAP, char=0):
    """All nonzero sheaf cohomology dimensions of O(D), D = sum c_i D_i,
    as {degree: dimension}; dimensions may be INFINITE on noncomplete fans.
    """
    return _accumulate(fan, coeffs, None, cap, char)


def local_cohomology_dims(fan, coeffs, vcones=None, cap=DEFAULT_COUNT_CAP,
                          char=0):
    """Nonzero dimensions of the cohomology of O(D) supported on the union
    of the orbit closures of `vcones` (default: the fan's subvariety)."""
    if vcones is None:
        vcones = fan.subvariety
    if vcones is None:
        raise PreconditionError("the fan declares no subvariety")
    return _accumulate(fan, coeffs, vcones, cap, char)


def euler_characteristic(fan, coeffs, cap=DEFAULT_COUNT_CAP):
    """Alternating sum of the cohomology dimensions; finite ones only."""
    dims = cohomology_dims(fan, coeffs, cap=cap)
    if INFINITE in dims.values():
        raise PreconditionError("Euler characteristic of an infinite theory")
    return sum((-1) ** i * d for i, d in dims.items())


# ---------------------------------------------------------------------------
# Signature regions.


@dataclass(frozen=True)
class SignatureRegion:
    """A realized signature with its closed integer constraint system."""

    signature: frozenset
    constraints: tuple
    bounded: bool
    count: object


def signature_realized(fan, coeffs, I):
    """Whether the region of signature I contains a rational point.

    The region is the strict system l_i(m) < -c_i for i in I together with
    l_i(m) >= -c_i otherwise; rational solvability is decided exactly.
    """
    coeffs = _check_coeffs(fan, coeffs)
    iset = frozenset(I)
    cons = []
    strict = []
    for i in range(fan.n_rays):
        ray = fan.rays[i]
        if i in iset:
            strict.append(len(cons))
            cons.append((tuple(ray), -coeffs[i]))
        else:
            cons.append((tuple(-x for x in ray), coeffs[i]))
    opt, _ = max_epsilon(cons, strict, fan.dim)
    return bool(opt)


def realized_signatures(fan, coeffs, cap=DEFAULT_COUNT_CAP):
    """All signatures realized by rational points, with region data.

    A signature I is realized when the strict system l_i(m) < -c_i for
    i in I, l_i(m) >= -c_i otherwise, has a rational solution. The stored
    constraint system is the integer sharpening used for lattice counts;
    boundedness is read off the recession cone of the closed system.
    """
    coeffs = _check_coeffs(fan, coeffs)
    if fan.n_rays > 16:
        raise PreconditionError("signature enumeration is limited to 16 rays")
    out = []
    for bits in range(1 << fan.n_rays):
        iset = frozenset(i for i in range(fan.n_rays) if bits >> i & 1)
        if not signature_realized(fan, coeffs, iset):
            continue
        closed = tuple(signature_constraints(fan, coeffs, iset))
        normals = [[-x for x in a] for a, _ in closed]
        rays, lin = dd_cone(normals, fan.dim)
        bounded = not rays and not lin
        count = count_lattice_points(list(closed), fan.dim, cap=cap)
        out.append(SignatureRegion(iset, closed, bounded, count))
    return out


# ---------------------------------------------------------------------------
# Nef classes: Iitaka dimension and the vanishing it governs.


def fib_circuits(fan, value, group=None):
    """Fibrational circuits whose hyperplane contains the class of D."""
    group = group or class_group(fan)
    cls, _ = group.coerce(value)
    out = []
    for circuit in enumerate_circuits(fan.rays):
        if not is_fibrational(circuit):
            continue
        form = circuit_form(group, circuit.oriented())
        if sum(f * Fraction(x) for f, x in zip(form, cls.free)) == 0:
            out.append(circuit.indices)
    return tuple(out)


def _polytope_dimension(fan, coeffs):
    """Affine dimension of {m : l_i(m) >= -c_i}, or -1 when empty, via the
    implicit equalities of the inequality system."""
    cons = [(tuple(-x for x in fan.rays[i]), coeffs[i]) for i in range(fan.n_rays)]
    opt, _ = max_epsilon(cons, [], fan.dim)
    if opt is None:
        return -1
    implicit = []
    for idx in range(len(cons)):
        slack, _ = max_epsilon(cons, [idx], fan.dim)
        if not slack:
            implicit.append(list(cons[idx][0]))
    if not implicit:
        return fan.dim
    return fan.dim - rank(implicit)


def iitaka_dimension(fan, value, group=None):
    """Iitaka dimension of a nef class: the ambient dimension minus the
    rank of the rays lying in fibrational circuits through the class.

    For Q-Cartier classes the result is cross-checked against the affine
    dimension of the divisor polytope of a Cartier multiple.
    """
    from .discriminantal import nef_cone

    group = group or class_group(fan)
    cls, coeffs = group.coerce(value)
    if not nef_cone(fan, group).contains(cls):
        raise PreconditionError("the class is not nef")
    members = set()
    for circuit in fib_circuits(fan, cls, group):
        members.update(circuit)
    used = rank([list(fan.rays[i]) for i in sorted(members)]) if members else 0
    kappa = fan.dim - used
    witnesses = group.q_cartier_witnesses(coeffs)
    if witnesses is not None:
        k = 1
        for m in witnesses.values():
            for x in m:
                den = Fraction(x).denominator
                k = k * den // gcd(k, den)
        if _polytope_dimension(fan, [k * c for c in coeffs]) != kappa:
            raise RuntimeError("polytope dimension disagrees with the rank formula")
    return kappa


def antinef_vanishing_check(fan, value, cap=DEFAULT_COUNT_CAP, group=None):
    """Whether the cohomology of O(-D), for nef D, is confined to the
    degree equal to the Iitaka dimension of D."""
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    kappa = iitaka_dimension(fan, coeffs, group)
    dims = cohomology_dims(fan, [-c for c in coeffs], cap=cap)
    return all(degree == kappa for degree in dims)


def serre_duality_check(fan, value, cap=DEFAULT_COUNT_CAP, group=None):
    """Whether h^i(O(D)) equals h^(d-i)(O(K - D)) in every degree.

    Asserted only where it is a theorem: complete fans and Q-Cartier
    classes, whose divisorial sheaves are maximal Cohen-Macaulay."""
    if not is_complete(fan):
        raise PreconditionError("the duality check requires a complete fan")
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    if group.q_cartier_witnesses(coeffs) is None:
        raise PreconditionError("duality is only asserted for Q-Cartier classes")
    first = cohomology_dims(fan, coeffs, cap=cap)
    second = cohomology_dims(fan, [-1 - c for c in coeffs], cap=cap)
    return all(
        first.get(i, 0) == second.get(fan.dim - i, 0) for i in range(fan.dim + 1)
    )
