"""MCM classes, cone triangulations, and the pushforward criterion."""

import random

import pytest

from toricvanish.bundled import load_fixture
from toricvanish.classgroup import class_group
from toricvanish.cohomology import multiplicity_table
from toricvanish.errors import PreconditionError, ScaleLimitError, StabilityError
from toricvanish.fan import make_fan
from toricvanish.frobenius import in_arithmetic_core, zero_flat
from toricvanish.mcm import (
    Triangulation,
    all_triangulations,
    circuit_cone_mcm,
    cone_facets,
    default_window,
    enumerate_mcm,
    is_mcm,
    mcm_criterion_report,
    pulling_triangulation,
    pushforward_vanishing,
    regular_triangulations,
    regularity_heights,
)

MCM1 = load_fixture("mcm1")
MCM2 = load_fixture("mcm2")
F3 = load_fixture("f3")

INF = float("inf")

SMOOTH = make_fan(
    [(1, 0, 0), (0, 1, 0), (0, 0, 1)], [[0, 1, 2]], subvariety=[[0, 1, 2]]
)
SQUARE = make_fan(
    [(0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1)],
    [[0, 1, 2, 3]],
    subvariety=[[0, 1, 2, 3]],
)
CONIFOLD = make_fan(
    [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)],
    [[0, 1, 2, 3]],
    subvariety=[[0, 1, 2, 3]],
)

# The 19 MCM classes of the pentagon cone and the 31 of the four-dimensional
# cone, in the Gale bases of the fixtures, frozen from the first verified
# enumeration (lexicographic order).
MCM1_CLASSES = [
    (-3, 0), (-3, 1), (-2, 0), (-2, 1), (-2, 2), (-1, -1), (-1, 0), (-1, 1),
    (0, -1), (0, 0), (0, 1), (1, -1), (1, 0), (1, 1), (2, -2), (2, -1),
    (2, 0), (3, -1), (3, 0),
]
MCM2_CLASSES = [
    (-3, -3), (-2, -5), (-2, -4), (-2, -3), (-2, -2), (-2, -1), (-1, -3),
    (-1, -2), (-1, -1), (-1, 0), (-1, 1), (-1, 2), (0, -3), (0, -2), (0, -1),
    (0, 0), (0, 1), (0, 2), (0, 3), (1, -2), (1, -1), (1, 0), (1, 1), (1, 2),
    (1, 3), (2, 1), (2, 2), (2, 3), (2, 4), (2, 5), (3, 3),
]

MCM1_TRIANGULATIONS = [
    ((0, 1, 2), (0, 2, 3), (0, 3, 4)),
    ((0, 1, 2), (0, 2, 4), (2, 3, 4)),
    ((0, 1, 3), (0, 3, 4), (1, 2, 3)),
    ((0, 1, 4), (1, 2, 3), (1, 3, 4)),
    ((0, 1, 4), (1, 2, 4), (2, 3, 4)),
]
MCM2_TRIANGULATIONS = [
    ((0, 1, 2, 3), (0, 1, 2, 5), (0, 1, 3, 4), (0, 1, 4, 5)),
    ((0, 1, 2, 4), (0, 1, 2, 5), (0, 1, 4, 5), (0, 2, 3, 4), (1, 2, 3, 4)),
    ((0, 1, 3, 4), (0, 1, 3, 5), (0, 1, 4, 5), (0, 2, 3, 5), (1, 2, 3, 5)),
    ((0, 2, 3, 4), (0, 2, 4, 5), (1, 2, 3, 4), (1, 2, 4, 5)),
    ((0, 2, 3, 5), (0, 3, 4, 5), (1, 2, 3, 5), (1, 3, 4, 5)),
]
# The five-cell triangulation whose pushforward detects the non-MCM-like
# behaviour of the two distinguished classes below.
WITNESS_CELLS = MCM2_TRIANGULATIONS[2]

# The two classes on MCM2 that are MCM yet fail pushforward vanishing for
# WITNESS_CELLS: the coefficient vectors sum the first three and the last
# three rays, and the classes are mutual negatives.
WITNESS_COEFFS = [(-1, -1, -1, 0, 0, 0), (0, 0, 0, -1, -1, -1)]
WITNESS_CLASSES = [(-1, 2), (1, -2)]


def nonzero_table(fan, vcones=None):
    table = multiplicity_table(fan, vcones) if vcones else multiplicity_table(fan)
    return {tuple(sorted(I)): dict(per) for I, per in table.items() if per}


# -- facets and pulling triangulations ----------------------------------------


def test_cone_facets_frozen():
    assert cone_facets(MCM1) == ((0, 1), (0, 4), (1, 2), (2, 3), (3, 4))
    assert cone_facets(MCM2) == (
        (0, 2, 3), (0, 2, 5), (0, 3, 4), (0, 4, 5),
        (1, 2, 3), (1, 2, 5), (1, 3, 4), (1, 4, 5),
    )


def test_pulling_mcm1_frozen():
    t = pulling_triangulation(MCM1, 0)
    assert t.cells == ((0, 1, 2), (0, 2, 3), (0, 3, 4))
    assert t.heights == (0, 1, 1, 1, 1)


@pytest.mark.parametrize("fan", [MCM1, MCM2], ids=["mcm1", "mcm2"])
def test_pulling_matches_facet_construction(fan):
    facets = cone_facets(fan)
    for i in range(fan.n_rays):
        t = pulling_triangulation(fan, i)
        expected = sorted(
            tuple(sorted(facet + (i,))) for facet in facets if i not in facet
        )
        assert list(t.cells) == expected
        assert t.heights is not None
        assert t.heights[i] == 0
        assert regularity_heights(fan, t.cells) is not None


def test_pulling_square_cone():
    splits = {
        0: ((0, 1, 2), (0, 2, 3)),
        1: ((0, 1, 3), (1, 2, 3)),
        2: ((0, 1, 2), (0, 2, 3)),
        3: ((0, 1, 3), (1, 2, 3)),
    }
    for i, cells in splits.items():
        t = pulling_triangulation(SQUARE, i)
        assert t.cells == cells
        assert t.heights == tuple(0 if j == i else 1 for j in range(4))


def test_pulling_simplicial_cone_is_identity():
    for i in range(3):
        t = pulling_triangulation(SMOOTH, i)
        assert t.cells == ((0, 1, 2),)


def test_pulling_skips_nonsimplicial_facets_of_apex():
    pyramid = make_fan(
        [(0, 0, 0, 1), (1, 0, 0, 1), (1, 1, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1)],
        [[0, 1, 2, 3, 4]],
        subvariety=[[0, 1, 2, 3, 4]],
    )
    assert cone_facets(pyramid) == (
        (0, 1, 2, 3), (0, 1, 4), (0, 3, 4), (1, 2, 4), (2, 3, 4),
    )
    t = pulling_triangulation(pyramid, 0)
    assert t.cells == ((0, 1, 2, 4), (0, 2, 3, 4))
    with pytest.raises(PreconditionError):
        pulling_triangulation(pyramid, 4)
    with pytest.raises(PreconditionError):
        pulling_triangulation(pyramid, 9)


# -- triangulation enumeration -------------------------------------------------


def test_all_triangulations_mcm1_frozen():
    assert [t.cells for t in all_triangulations(MCM1)] == MCM1_TRIANGULATIONS


def test_regular_triangulations_mcm1_all_regular():
    regular = regular_triangulations(MCM1)
    assert [t.cells for t in regular] == MCM1_TRIANGULATIONS
    for t in regular:
        assert t.heights is not None
        assert regularity_heights(MCM1, t.cells) is not None


def test_all_triangulations_mcm2_frozen():
    assert [t.cells for t in all_triangulations(MCM2)] == MCM2_TRIANGULATIONS
    assert WITNESS_CELLS in MCM2_TRIANGULATIONS


def test_regular_triangulations_mcm2_all_regular():
    assert [t.cells for t in regular_triangulations(MCM2)] == MCM2_TRIANGULATIONS


def test_triangulations_simplicial_cone():
    assert [t.cells for t in all_triangulations(SMOOTH)] == [((0, 1, 2),)]
    regular = regular_triangulations(SMOOTH)
    assert [(t.cells, t.heights) for t in regular] == [(((0, 1, 2),), (0, 0, 0))]


def test_triangulations_square_and_conifold():
    assert [t.cells for t in all_triangulations(SQUARE)] == [
        ((0, 1, 2), (0, 2, 3)),
        ((0, 1, 3), (1, 2, 3)),
    ]
    assert [t.cells for t in all_triangulations(CONIFOLD)] == [
        ((0, 1, 2), (1, 2, 3)),
        ((0, 1, 3), (0, 2, 3)),
    ]


def test_triangulations_scale_limit():
    heptagon = make_fan(
        [(3, 0, 1), (2, 2, 1), (0, 3, 1), (-2, 2, 1), (-3, 0, 1), (-2, -2, 1),
         (2, -2, 1)],
        [list(range(7))],
        subvariety=[list(range(7))],
    )
    with pytest.raises(ScaleLimitError):
        all_triangulations(heptagon)
    with pytest.raises(ScaleLimitError):
        regular_triangulations(heptagon)


# -- local cohomology signatures ----------------------------------------------


def test_local_signatures_mcm1():
    """The pentagon boundary leaves ten signatures with local cohomology.

    The disconnected full subcomplexes of the boundary cycle are the five
    diagonals and the five edge-plus-opposite-vertex triples, each a single
    class of middle local cohomology; the full signature carries the top.
    """
    table = nonzero_table(MCM1, (frozenset(range(5)),))
    assert table == {
        (0, 2): {2: 1}, (0, 3): {2: 1}, (1, 3): {2: 1}, (1, 4): {2: 1},
        (2, 4): {2: 1},
        (0, 1, 3): {2: 1}, (0, 2, 3): {2: 1}, (0, 2, 4): {2: 1},
        (1, 2, 4): {2: 1}, (1, 3, 4): {2: 1},
        (0, 1, 2, 3, 4): {3: 1},
    }


def test_local_signatures_mcm2():
    table = nonzero_table(MCM2, (frozenset(range(6)),))
    assert table == {
        (0, 1): {2: 1}, (2, 4): {2: 1}, (3, 5): {2: 1},
        (0, 1, 2, 4): {3: 1}, (0, 1, 3, 5): {3: 1}, (2, 3, 4, 5): {3: 1},
        (0, 1, 2, 3, 4, 5): {4: 1},
    }


def test_witness_triangulation_signatures():
    """On the witness triangulation the signature on rays 0, 1, 2 spans a
    hollow triangle, so its cohomology sits in reduced degree one."""
    xt = make_fan([tuple(MCM2.ray(i)) for i in range(6)], WITNESS_CELLS)
    assert nonzero_table(xt) == {
        (): {0: 1},
        (2, 4): {1: 1},
        (0, 1, 2): {2: 1},
        (3, 4, 5): {2: 1},
        (0, 1, 2, 4): {2: 1},
        (2, 3, 4, 5): {2: 1},
    }


# -- MCM enumeration ------------------------------------------------------------


def test_gale_transforms_frozen():
    g1 = class_group(MCM1)
    assert [g.free for g in g1.gale_transform()] == [
        (-1, -1), (2, 0), (-3, 1), (2, -1), (0, 1),
    ]
    g2 = class_group(MCM2)
    assert [g.free for g in g2.gale_transform()] == [
        (1, 0), (1, 0), (-1, -2), (1, 3), (-2, -2), (0, 1),
    ]


def test_default_windows():
    assert default_window(MCM1) == 8
    assert default_window(MCM2) == 8
    assert default_window(CONIFOLD) == 8


def test_enumerate_mcm1_frozen():
    group = class_group(MCM1)
    assert enumerate_mcm(MCM1) == [group.make_class(f) for f in MCM1_CLASSES]


def test_enumerate_mcm2_frozen():
    group = class_group(MCM2)
    assert enumerate_mcm(MCM2) == [group.make_class(f) for f in MCM2_CLASSES]


def test_enumerate_smooth_cone_trivial_group():
    group = class_group(SMOOTH)
    assert group.free_rank == 0
    assert enumerate_mcm(SMOOTH) == [group.zero()]


def test_enumerate_stability_margin():
    with pytest.raises(StabilityError, match=r"\(-2, 0\)"):
        enumerate_mcm(MCM1, window=1)
    inner = enumerate_mcm(MCM1, window=1, check_margin=False)
    assert [c.free for c in inner] == [
        (-1, -1), (-1, 0), (-1, 1), (0, -1), (0, 0), (0, 1),
        (1, -1), (1, 0), (1, 1),
    ]


def test_enumerate_requires_affine_cone():
    with pytest.raises(PreconditionError):
        enumerate_mcm(F3)
    with pytest.raises(PreconditionError):
        is_mcm(F3, class_group(F3).zero())


def test_is_mcm_known_negatives():
    group = class_group(MCM1)
    for free in [(1, -2), (-1, 2), (0, 2), (4, 0)]:
        assert not is_mcm(MCM1, group.make_class(free))


def test_q_cartier_implies_mcm():
    for fan in (MCM1, MCM2, CONIFOLD, SQUARE):
        group = class_group(fan)
        for cls in group.iter_window(3):
            if group.is_q_cartier(cls):
                assert is_mcm(fan, cls, group)
        assert is_mcm(fan, group.zero(), group)


def test_gorenstein_symmetry_mcm1():
    group = class_group(MCM1)
    assert group.canonical_class() == group.zero()
    classes = set(MCM1_CLASSES)
    assert {(-a, -b) for a, b in classes} == classes


# -- pushforward vanishing ------------------------------------------------------


@pytest.mark.parametrize("fan", [MCM1, MCM2], ids=["mcm1", "mcm2"])
def test_pushforward_zero_class_vanishes(fan):
    group = class_group(fan)
    for t in all_triangulations(fan):
        dims = pushforward_vanishing(fan, t, group.zero(), group)
        assert set(dims) <= {0}


def test_pushforward_counterexample_classes():
    witness = Triangulation(WITNESS_CELLS)
    group = class_group(MCM2)
    for coeffs, free in zip(WITNESS_COEFFS, WITNESS_CLASSES):
        assert group.project(coeffs) == group.make_class(free)
        dims = pushforward_vanishing(MCM2, witness, coeffs)
        assert dims == {0: INF, 2: 1}


def test_zero_essential_classes_vanish_on_every_triangulation():
    group = class_group(MCM1)
    flat = zero_flat(group)
    triangulations = all_triangulations(MCM1)
    for free in MCM1_CLASSES:
        cls = group.make_class(free)
        assert in_arithmetic_core(group, flat, cls)
        for t in triangulations:
            dims = pushforward_vanishing(MCM1, t, cls, group)
            assert set(dims) <= {0}


def test_zero_essential_window_vanishes_mcm2():
    group = class_group(MCM2)
    flat = zero_flat(group)
    triangulations = all_triangulations(MCM2)
    checked = 0
    for cls in group.iter_window(4):
        if not in_arithmetic_core(group, flat, cls):
            continue
        for t in triangulations:
            dims = pushforward_vanishing(MCM2, t, cls, group)
            assert set(dims) <= {0}
        checked += 1
    assert checked == 23


def test_non_essential_mcm_classes_mcm2():
    """Eight of the 31 MCM classes sit outside the full arithmetic core;
    among them are the two classes with a failing triangulation."""
    group = class_group(MCM2)
    flat = zero_flat(group)
    outside = [
        c.free for c in enumerate_mcm(MCM2)
        if not in_arithmetic_core(group, flat, c)
    ]
    assert outside == [
        (-3, -3), (-2, -5), (-2, -4), (-1, 2), (1, -2), (2, 4), (2, 5), (3, 3),
    ]
    assert set(WITNESS_CLASSES) <= set(outside)


# -- the criterion report --------------------------------------------------------


def test_report_on_all_mcm1_classes():
    group = class_group(MCM1)
    for free in MCM1_CLASSES:
        report = mcm_criterion_report(MCM1, group.make_class(free))
        assert report.mcm
        assert report.all_triangulations_vanish
        assert report.witness is None
        assert report.simplicial_facets


def test_report_converse_failure_dimension_four():
    group = class_group(MCM2)
    for free in WITNESS_CLASSES:
        report = mcm_criterion_report(MCM2, group.make_class(free))
        assert report.mcm
        assert not report.all_triangulations_vanish
        assert report.witness.cells == WITNESS_CELLS
        assert report.simplicial_facets


def test_report_equivalence_dimension_three_window():
    group = class_group(MCM1)
    frozen = set(MCM1_CLASSES)
    for cls in group.iter_window(4):
        report = mcm_criterion_report(MCM1, cls)
        assert report.mcm == report.all_triangulations_vanish
        assert report.mcm == (cls.free in frozen)


def test_report_equivalence_random_polygon_cones():
    rng = random.Random(20260819)

    def convex_polygon():
        while True:
            pts = sorted({(rng.randint(-3, 3), rng.randint(-3, 3))
                          for _ in range(8)})
            if len(pts) < 4:
                continue

            def half(ps):
                out = []
                for p in ps:
                    while len(out) >= 2 and (
                        (out[-1][0] - out[-2][0]) * (p[1] - out[-2][1])
                        - (out[-1][1] - out[-2][1]) * (p[0] - out[-2][0])
                    ) <= 0:
                        out.pop()
                    out.append(p)
                return out

            hull = half(pts)[:-1] + half(pts[::-1])[:-1]
            if 4 <= len(hull) <= 6:
                return [(x, y, 1) for x, y in hull]

    for _ in range(3):
        rays = convex_polygon()
        top = [list(range(len(rays)))]
        fan = make_fan(rays, top, subvariety=top)
        group = class_group(fan)
        for cls in group.iter_window(2):
            report = mcm_criterion_report(fan, cls)
            assert report.mcm == report.all_triangulations_vanish
            assert report.simplicial_facets


# -- single-circuit cones ---------------------------------------------------------


def test_circuit_cone_conifold():
    group = class_group(CONIFOLD)
    mcm_set = []
    for cls in group.iter_window(6):
        verdict = circuit_cone_mcm(CONIFOLD, cls)
        assert verdict == is_mcm(CONIFOLD, cls, group)
        if verdict:
            mcm_set.append(cls.free)
    assert sorted(mcm_set) == [(-1,), (0,), (1,)]
    assert [c.free for c in enumerate_mcm(CONIFOLD)] == [(-1,), (0,), (1,)]
    assert circuit_cone_mcm(CONIFOLD, group.zero())
    assert not circuit_cone_mcm(CONIFOLD, group.make_class((5,)))


def test_circuit_cone_preconditions():
    group = class_group(MCM1)
    with pytest.raises(PreconditionError):
        circuit_cone_mcm(MCM1, group.zero())
    lopsided = make_fan(
        [(1, 0, 1), (0, 1, 1), (-1, -1, 1), (0, 0, 1)],
        [[0, 1, 2, 3]],
        subvariety=[[0, 1, 2, 3]],
    )
    with pytest.raises(PreconditionError):
        circuit_cone_mcm(lopsided, class_group(lopsided).zero())
