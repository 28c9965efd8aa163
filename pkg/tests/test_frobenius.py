"""Circuit quotients, Frobenius sets, and arithmetic vanishing cores."""

from itertools import product

import pytest

from toricvanish.bundled import load_fixture
from toricvanish.circuits import OrientedCircuit, enumerate_circuits
from toricvanish.classgroup import class_group
from toricvanish.errors import PreconditionError
from toricvanish.fan import make_fan, opposite_pairs
from toricvanish.frobenius import (
    ArithmeticCore,
    CircuitQuotient,
    denumerant,
    flat_for_generators,
    in_A_pq,
    in_F,
    in_F_pair,
    in_arithmetic_core,
    in_orthant,
    orthant_offset,
    pair_stratum_generator,
    semigroup_count,
    vpf_zero_window,
    zero_flat,
)

P2 = load_fixture("p2")
F3 = load_fixture("f3")
WPS = load_fixture("wps235")
MCM1 = load_fixture("mcm1")
SURF8 = load_fixture("surf8")


# -- denumerants -------------------------------------------------------------


def test_denumerant_small_values():
    assert denumerant((2, 3, 5), 0) == 1
    assert denumerant((2, 3, 5), 1) == 0
    assert denumerant((2, 3, 5), 11) == 4
    assert denumerant((2, 3, 5), 10, strict=(0, 1, 2)) == 1
    assert denumerant((2, 3, 5), 11, strict=(0, 1, 2)) == 0
    assert denumerant((1,), 7) == 1
    assert denumerant((2, 4), 7) == 0
    assert denumerant((2, 3, 5), -1) == 0


def test_denumerant_matches_enumeration():
    for target in range(31):
        expected = sum(
            1
            for a, b, c in product(range(16), range(11), range(7))
            if 2 * a + 3 * b + 5 * c == target
        )
        assert denumerant((2, 3, 5), target) == expected
        expected_strict = sum(
            1
            for a, b, c in product(range(1, 16), range(11), range(7))
            if 2 * a + 3 * b + 5 * c == target
        )
        assert denumerant((2, 3, 5), target, strict=(0,)) == expected_strict


def test_denumerant_rejects_nonpositive_weights():
    with pytest.raises(PreconditionError):
        denumerant((0, 2), 4)
    with pytest.raises(PreconditionError):
        denumerant((-1,), 3)


# -- circuit quotients -------------------------------------------------------


def test_quotient_of_fiber_circuit():
    group = class_group(F3)
    oc = enumerate_circuits(F3.rays)[0].oriented()
    cq = CircuitQuotient(group, oc)
    assert cq.invariants == ()
    assert cq.eta_ray(1) == (1, ())
    assert cq.eta_ray(3) == (1, ())
    for x, y in product(range(-3, 4), repeat=2):
        cls = group.make_class((x, y))
        assert cq.eta(group.lift(cls)) == (y, ())


def test_quotient_rejects_non_circuits():
    group = class_group(F3)
    with pytest.raises(PreconditionError):
        CircuitQuotient(group, OrientedCircuit((0, 1), (1, 1)))
    with pytest.raises(PreconditionError):
        CircuitQuotient(group, OrientedCircuit((1, 3), (1, 2)))


def test_semigroup_count_validates_input():
    group = class_group(F3)
    c13, c012, _ = enumerate_circuits(F3.rays)
    cq = CircuitQuotient(group, c13.oriented())
    with pytest.raises(PreconditionError):
        semigroup_count(cq, c012.oriented(), (0, ()))
    with pytest.raises(PreconditionError):
        semigroup_count(cq, c13.oriented(), (0, (1,)))


def test_semigroup_count_matches_denumerant_when_torsion_free():
    # With a torsion-free quotient the count is a denumerant of the weights,
    # strict at the positive indices.
    for fixture in (P2, F3, WPS):
        group = class_group(fixture)
        for circuit in enumerate_circuits(fixture.rays):
            for oc in circuit.orientations():
                cq = CircuitQuotient(group, oc)
                weights = [abs(a) for a in oc.alpha]
                strict = [k for k, a in enumerate(oc.alpha) if a > 0]
                for t in range(-15, 16):
                    assert semigroup_count(cq, oc, (t, ())) == denumerant(
                        weights, -t, strict=strict
                    )


def _brute_count(cq, oc, target, bound):
    invs = cq.invariants
    total = 0
    ranges = [range(1 if i in oc.plus else 0, bound) for i in oc.indices]
    for cs in product(*ranges):
        free = 0
        tors = [0] * len(invs)
        for c, i in zip(cs, oc.indices):
            ef, et = cq.eta_ray(i)
            sign = -1 if i in oc.plus else 1
            free += sign * c * ef
            tors = [(a + sign * c * b) % d for a, b, d in zip(tors, et, invs)]
        if free == target[0] and tuple(tors) == tuple(target[1]):
            total += 1
    return total


def test_semigroup_count_with_torsion():
    fan = make_fan([(1, 0), (1, 4), (1, 2)], [[0, 1, 2]])
    group = class_group(fan)
    assert group.invariants == (2,)
    circuit = enumerate_circuits(fan.rays)[0]
    assert circuit.alpha == (1, 1, -2)
    oc = circuit.oriented()
    cq = CircuitQuotient(group, oc)
    assert [cq.eta_ray(i) for i in oc.indices] == [(1, (1,)), (1, (0,)), (-2, (1,))]
    assert semigroup_count(cq, oc, (-4, (0,))) == 2
    assert semigroup_count(cq, oc, (-4, (1,))) == 2
    for orient in circuit.orientations():
        q = CircuitQuotient(group, orient)
        for t in range(-10, 3):
            for k in (0, 1):
                target = (t, (k,))
                assert semigroup_count(q, orient, target) == _brute_count(
                    q, orient, target, bound=12
                )


# -- Frobenius sets ----------------------------------------------------------


def test_in_F_halfspaces_f3():
    group = class_group(F3)
    c13, c012, c023 = enumerate_circuits(F3.rays)
    cases = [
        (c13.oriented(), lambda x, y: y >= -1),
        (c13.oriented().reverse(), lambda x, y: y <= -1),
        (c012.oriented(), lambda x, y: x - 3 * y >= -1),
        (c012.oriented().reverse(), lambda x, y: x - 3 * y <= 2),
        (c023.oriented(), lambda x, y: x >= -4),
        (c023.oriented().reverse(), lambda x, y: x <= -1),
    ]
    for oc, predicate in cases:
        for x, y in product(range(-6, 7), repeat=2):
            cls = group.make_class((x, y))
            assert in_F(group, oc, cls) == predicate(x, y), (oc, x, y)


def test_in_F_wps235():
    group = class_group(WPS)
    circuit = enumerate_circuits(WPS.rays)[0]
    oc, rev = circuit.orientations()
    assert in_F(group, oc, group.make_class((-11,)))
    assert not in_F(group, oc, group.make_class((-10,)))
    assert not in_F(group, oc, group.make_class((-12,)))
    assert in_F(group, oc, group.zero())
    assert not in_F(group, rev, group.zero())
    assert in_F(group, rev, group.make_class((1,)))


def test_in_F_pair_lines():
    group = class_group(F3)
    c13 = enumerate_circuits(F3.rays)[0]
    for x, y in product(range(-6, 7), repeat=2):
        cls = group.make_class((x, y))
        assert in_F_pair(group, c13, cls) == (y == -1)
    wgroup = class_group(WPS)
    wcircuit = enumerate_circuits(WPS.rays)[0]
    hits = {
        t
        for t in range(-20, 6)
        if in_F_pair(wgroup, wcircuit, wgroup.make_class((t,)))
    }
    assert hits == {-11, 1} | set(range(-9, 0))


def test_mixed_circuit_covers_every_class():
    # For a circuit with both signs present the two Frobenius sets cover the
    # class group: the represented degrees have opposite strict signs.
    group = class_group(F3)
    c012 = enumerate_circuits(F3.rays)[1]
    oc, rev = c012.orientations()
    for x, y in product(range(-6, 7), repeat=2):
        cls = group.make_class((x, y))
        assert in_F(group, oc, cls) or in_F(group, rev, cls)


def test_zero_class_is_zero_essential_mcm1():
    group = class_group(MCM1)
    for circuit in enumerate_circuits(MCM1.rays):
        assert in_F_pair(group, circuit, group.zero())


# -- flats and cores ---------------------------------------------------------


def test_flat_for_generators_f3_nef():
    group = class_group(F3)
    c13, c012, c023 = enumerate_circuits(F3.rays)
    flat = flat_for_generators(group, [(1, 0), (3, 1)])
    assert flat == [c13.oriented(), c012.oriented(), c023.oriented()]


def test_flat_for_generators_f3_pair():
    group = class_group(F3)
    c13, c012, c023 = enumerate_circuits(F3.rays)
    flat = flat_for_generators(group, [(-1, 0)])
    assert flat == [
        c13.oriented(),
        c13.oriented().reverse(),
        c012.oriented().reverse(),
        c023.oriented().reverse(),
    ]


def test_flat_for_generators_wps235():
    group = class_group(WPS)
    circuit = enumerate_circuits(WPS.rays)[0]
    assert flat_for_generators(group, [(1,)]) == [circuit.oriented()]


def test_zero_flat_sizes():
    assert len(zero_flat(class_group(F3))) == 6
    assert len(zero_flat(class_group(MCM1))) == 10


def test_nef_core_region_f3():
    group = class_group(F3)
    core = ArithmeticCore(group, flat_for_generators(group, [(1, 0), (3, 1)]))
    for x, y in product(range(-8, 9), repeat=2):
        expected = y >= -1 and x - 3 * y >= -1 and x >= -4
        assert core.test(group.make_class((x, y))) == expected, (x, y)


def test_pair_core_region_f3():
    group = class_group(F3)
    gen = pair_stratum_generator(F3, group, 1, 3)
    core = ArithmeticCore(group, flat_for_generators(group, [gen.free]))
    for x, y in product(range(-8, 9), repeat=2):
        expected = y == -1 and x <= -1
        assert core.test(group.make_class((x, y))) == expected, (x, y)
    assert in_A_pq(F3, 1, 3, group.make_class((-5, -1)))
    assert not in_A_pq(F3, 1, 3, group.make_class((-5, 0)))


def test_canonical_shifted_interior_inside_nef_core():
    # Adding the canonical class to the interior of the nef cone lands in
    # the nef core.
    group = class_group(F3)
    core = ArithmeticCore(group, flat_for_generators(group, [(1, 0), (3, 1)]))
    K = group.canonical_class()
    for x, y in product(range(1, 13), repeat=2):
        if not (y > 0 and x - 3 * y > 0):
            continue
        cls = group.add(K, group.make_class((x, y)))
        assert core.test(cls), (x, y)


def test_zero_flat_core_f3():
    # Intersection of all six Frobenius halfspaces: the segment of classes
    # (x, -1) with -4 <= x <= -1.
    group = class_group(F3)
    flat = zero_flat(group)
    for x, y in product(range(-6, 7), repeat=2):
        expected = y == -1 and -4 <= x <= -1
        member = in_arithmetic_core(group, flat, group.make_class((x, y)))
        assert member == expected, (x, y)


# -- opposite-pair strata ----------------------------------------------------


def test_opposite_pairs():
    assert opposite_pairs(P2) == []
    assert opposite_pairs(F3) == [(1, 3)]
    assert opposite_pairs(SURF8) == [(0, 6), (3, 7)]


def test_pair_stratum_generator_f3():
    group = class_group(F3)
    gen = pair_stratum_generator(F3, group, 1, 3)
    assert gen.free == (-1, 0) and gen.torsion == ()


def test_pair_stratum_generator_surf8():
    group = class_group(SURF8)
    gen06 = pair_stratum_generator(SURF8, group, 0, 6)
    assert gen06 == group.project([0, 0, 0, 0, 0, 0, 0, -1])
    # the other side of the line differs by a principal divisor
    assert gen06 == group.project([0, -1, -1, -1, -1, -1, 0, 0])
    gen37 = pair_stratum_generator(SURF8, group, 3, 7)
    assert gen37 == group.project([-1, -2, -1, 0, 0, 0, 0, 0])
    assert gen37 == group.project([0, 0, 0, 0, -1, -2, -1, 0])


def test_pair_stratum_generator_rejects_bad_input():
    group = class_group(F3)
    with pytest.raises(PreconditionError):
        pair_stratum_generator(F3, group, 0, 1)
    mgroup = class_group(MCM1)
    with pytest.raises(PreconditionError):
        pair_stratum_generator(MCM1, mgroup, 0, 2)


# -- orthants ----------------------------------------------------------------


def test_orthant_membership_wps235():
    group = class_group(WPS)
    full = {0, 1, 2}
    assert orthant_offset(group, full).free == (-10,)
    assert in_orthant(group, full, group.make_class((-10,)))
    assert not in_orthant(group, full, group.make_class((-9,)))
    assert orthant_offset(group, ()).free == (0,)
    assert in_orthant(group, (), group.zero())
    assert not in_orthant(group, (), group.make_class((-1,)))


def test_orthant_membership_f3():
    group = class_group(F3)
    assert in_orthant(group, (), group.make_class((0, 0)))
    assert in_orthant(group, (), group.make_class((5, 2)))
    assert not in_orthant(group, (), group.make_class((-1, 0)))


def test_vpf_zero_window_wps235():
    group = class_group(WPS)
    # Full index set: the empty-region classes t <= -10 are exactly t = -11.
    assert vpf_zero_window(WPS, {0, 1, 2}, 30) == [group.make_class((-11,))]
    # Empty index set: the only degree in [0, 12] with no sections is 1.
    assert vpf_zero_window(WPS, (), 12) == [group.make_class((1,))]
