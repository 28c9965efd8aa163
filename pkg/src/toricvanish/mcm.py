"""Rank-one maximal Cohen-Macaulay classes on affine toric varieties.

A divisor class on an affine toric variety with torus-fixed point x is
maximally Cohen-Macaulay exactly when the local cohomology at x vanishes in
every degree below the dimension. This module enumerates the finitely many
MCM classes in a window, builds pulling and regular triangulations of the
cone, and evaluates the pushforward criterion that relates the MCM property
to cohomology vanishing on every regular triangulation: vanishing for all of
them implies MCM, and in dimension three the two are equivalent.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from .circuits import enumerate_circuits
from .classgroup import class_group
from .cohomology import cohomology_dims, multiplicity_table, signature_occupied
from .errors import PreconditionError, ScaleLimitError, StabilityError
from .fan import cone_faces, cone_rank, ensure_valid, is_pointed, make_fan
from .frobenius import in_F_pair
from .lattice import determinant, integer_kernel, solve_rational, transpose
from .polyhedra import max_epsilon, rational_point

TRIANGULATION_SCALE = 3


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


@lru_cache(maxsize=None)
def _affine_cone(fan):
    """The single maximal cone of an affine fan, validated."""
    if len(fan.max_cones) != 1:
        raise PreconditionError("an affine cone fan has a single maximal cone")
    sigma = frozenset(fan.max_cones[0])
    if sigma != frozenset(range(fan.n_rays)):
        raise PreconditionError("every ray must generate the affine cone")
    if cone_rank(fan, sigma) != fan.dim:
        raise PreconditionError("the affine cone must be full dimensional")
    if not is_pointed(fan, sigma):
        raise PreconditionError("the affine cone must be strongly convex")
    return sigma


@lru_cache(maxsize=None)
def cone_facets(fan):
    """Facets of the affine cone as sorted tuples of ray indices."""
    sigma = _affine_cone(fan)
    top = fan.dim - 1
    return tuple(
        sorted(
            (
                tuple(sorted(face))
                for face in cone_faces(fan, sigma)
                if cone_rank(fan, face) == top
            )
        )
    )


# ---------------------------------------------------------------------------
# The MCM property and its window enumeration.


def is_mcm(fan, value, group=None):
    """Whether the class is maximally Cohen-Macaulay: local cohomology at
    the fixed point vanishes in every degree below the dimension."""
    sigma = _affine_cone(fan)
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    for iset, dims in multiplicity_table(fan, (sigma,)).items():
        if any(degree < fan.dim for degree in dims):
            if signature_occupied(fan, coeffs, iset):
                return False
    return True


def default_window(fan, group=None):
    """Window radius for MCM scans: max(8, twice the largest free Gale
    coordinate), a margin-checked stand-in for the finiteness bound."""
    group = group or class_group(fan)
    largest = max(
        (abs(x) for g in group.gale_transform() for x in g.free), default=0
    )
    return max(8, 2 * largest)


def enumerate_mcm(fan, window=None, check_margin=True):
    """All MCM classes with free coordinates in the window, in class order.

    With check_margin (the default) the scan is repeated on a half-again
    larger window; any additional class means the window missed part of the
    finite MCM set, reported as a StabilityError.
    """
    group = class_group(fan)
    radius = default_window(fan, group) if window is None else int(window)
    found = [cls for cls in group.iter_window(radius) if is_mcm(fan, cls, group)]
    if check_margin:
        bigger = radius + (radius + 1) // 2
        for cls in group.iter_window(bigger):
            if all(abs(x) <= radius for x in cls.free):
                continue
            if is_mcm(fan, cls, group):
                raise StabilityError(
                    f"MCM class {cls} outside the radius-{radius} window"
                )
    return found


# ---------------------------------------------------------------------------
# Triangulations of the cone on its own rays.


@dataclass(frozen=True)
class Triangulation:
    """Simplicial decomposition of the cone using its own rays.

    cells holds the maximal cones as sorted tuples of ray indices, sorted;
    heights is a rational height vector certifying regularity, or None when
    no certificate is attached.
    """

    cells: tuple
    heights: tuple = None


def _canonical_cells(cells):
    return tuple(sorted(tuple(sorted(c)) for c in cells))


def _cell_candidates(fan):
    """Full-dimensional simplicial subcones on d of the rays."""
    d = fan.dim
    out = []
    for combo in combinations(range(fan.n_rays), d):
        if determinant([list(fan.ray(i)) for i in combo]) != 0:
            out.append(combo)
    return out


def _cell_form(fan, cell, weights):
    """The linear form taking the given weight at each ray of the cell."""
    rows = [list(fan.ray(i)) for i in cell]
    sol = solve_rational(rows, [weights[i] for i in cell])
    assert sol is not None
    return sol


def _certifies(fan, cells, heights):
    """Whether the heights induce exactly these cells: each cell's form
    stays strictly below the height of every ray outside the cell."""
    for cell in cells:
        form = _cell_form(fan, cell, heights)
        for j in range(fan.n_rays):
            if j in cell:
                continue
            if _dot(form, fan.ray(j)) >= heights[j]:
                return False
    return True


def regularity_heights(fan, cells):
    """A height vector inducing the given cells, or None when the
    triangulation is not regular. Exact rational feasibility."""
    n = fan.n_rays
    cons = []
    strict = []
    for cell in cells:
        rows = [list(fan.ray(i)) for i in cell]
        for j in range(n):
            if j in cell:
                continue
            lam = solve_rational(transpose(rows), list(fan.ray(j)))
            assert lam is not None
            row = [Fraction(0)] * n
            for pos, i in enumerate(cell):
                row[i] += lam[pos]
            row[j] -= 1
            strict.append(len(cons))
            cons.append((tuple(row), 0))
    for j in range(n):
        unit = [0] * n
        unit[j] = 1
        cons.append((tuple(unit), 1))
        cons.append((tuple(-x for x in unit), 1))
    opt, witness = max_epsilon(cons, strict, n)
    if not opt:
        return None
    return tuple(witness)


def pulling_triangulation(fan, i):
    """Pull the cone open at ray i: one cell per facet avoiding the ray.

    The heights certificate puts ray i at height zero and every other ray at
    height one whenever that already induces the cells, falling back to an
    exact feasibility witness otherwise. Requires the facets away from ray i
    to be simplicial.
    """
    _affine_cone(fan)
    if not 0 <= i < fan.n_rays:
        raise PreconditionError("ray index out of range")
    d = fan.dim
    cells = []
    for facet in cone_facets(fan):
        if i in facet:
            continue
        if len(facet) != d - 1:
            raise PreconditionError(
                f"pulling at ray {i} needs the facets avoiding it simplicial"
            )
        cells.append(tuple(sorted(facet + (i,))))
    cells = _canonical_cells(cells)
    heights = tuple(0 if j == i else 1 for j in range(fan.n_rays))
    if not _certifies(fan, cells, heights):
        heights = regularity_heights(fan, cells)
        assert heights is not None
    return Triangulation(cells, heights)


def _wall_normal(fan, wall):
    """Primitive normal of the hyperplane spanned by a size d-1 wall."""
    ker = integer_kernel([list(fan.ray(i)) for i in wall])
    assert len(ker) == 1
    return tuple(ker[0])


def _require_triangulation_scale(fan):
    if fan.n_rays - fan.dim > TRIANGULATION_SCALE:
        raise ScaleLimitError(
            f"triangulation enumeration is limited to n - d <= {TRIANGULATION_SCALE}"
        )


def all_triangulations(fan):
    """Every triangulation of the cone on its own rays, regular or not.

    Cells are grown wall by wall: an interior wall of a chosen cell must be
    matched by exactly one cell on its far side, a boundary wall must lie in
    a facet of the cone and stay unshared. Completed cell sets are validated
    as fans (pairwise proper intersections, all rays used).
    """
    sigma = _affine_cone(fan)
    _require_triangulation_scale(fan)
    d = fan.dim
    if fan.n_rays == d:
        return [Triangulation(_canonical_cells([tuple(range(d))]))]
    candidates = _cell_candidates(fan)
    facets = [frozenset(f) for f in cone_facets(fan)]

    normals = {}
    boundary = {}

    def wall_data(wall):
        if wall not in normals:
            normals[wall] = _wall_normal(fan, wall)
            boundary[wall] = any(set(wall) <= f for f in facets)
        return normals[wall], boundary[wall]

    def cell_walls(cell):
        out = []
        for r in cell:
            wall = tuple(x for x in cell if x != r)
            normal, on_boundary = wall_data(wall)
            side = 1 if _dot(normal, fan.ray(r)) > 0 else -1
            out.append((wall, side, on_boundary))
        return out

    results = set()
    seen = set()

    def admit(cells, open_walls, closed_walls, cell):
        """Open/closed wall sets after adding the cell; None on conflict."""
        opened = dict(open_walls)
        closed = set(closed_walls)
        for wall, side, on_boundary in cell_walls(cell):
            if wall in closed:
                return None
            if on_boundary:
                closed.add(wall)
                continue
            if wall in opened:
                if opened[wall] == -side:
                    del opened[wall]
                    closed.add(wall)
                else:
                    return None
            else:
                opened[wall] = side
        return opened, closed

    def expand(cells, open_walls, closed_walls):
        key = cells
        if key in seen:
            return
        seen.add(key)
        if not open_walls:
            results.add(cells)
            return
        wall = min(open_walls)
        side = open_walls[wall]
        normal, _ = wall_data(wall)
        for r in range(fan.n_rays):
            if r in wall:
                continue
            pairing = _dot(normal, fan.ray(r))
            if pairing == 0 or (1 if pairing > 0 else -1) != -side:
                continue
            cell = tuple(sorted(wall + (r,)))
            if cell in cells or cell not in candidate_set:
                continue
            step = admit(cells, open_walls, closed_walls, cell)
            if step is None:
                continue
            expand(cells | {cell}, step[0], step[1])

    candidate_set = set(candidates)
    for seed in candidates:
        if 0 not in seed:
            continue
        step = admit(frozenset(), {}, set(), seed)
        if step is not None:
            expand(frozenset([seed]), step[0], step[1])

    out = []
    for cells in results:
        canon = _canonical_cells(cells)
        try:
            ensure_valid(make_fan([list(r) for r in fan.rays], canon))
        except Exception:
            continue
        out.append(Triangulation(canon))
    out.sort(key=lambda t: t.cells)
    return out


# ---------------------------------------------------------------------------
# Regular triangulations through the height chamber structure.


def _relation_basis(fan):
    """Integer basis of the linear relations among the rays, as rows."""
    return integer_kernel(transpose([list(r) for r in fan.rays]))


def _chamber_representatives(fan):
    """One interior rational point per chamber of the arrangement of
    hyperplanes spanned by (k-1)-subsets of the Gale vectors, k = n - d."""
    relations = _relation_basis(fan)
    k = len(relations)
    gale = [tuple(row[j] for row in relations) for j in range(fan.n_rays)]
    if k == 1:
        return [(1,), (-1,)]
    if k == 2:
        return _sector_points(gale)
    if k == 3:
        return _cell_points_3d(gale)
    raise AssertionError("chamber enumeration called beyond its scale")


def _primitive(v):
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, x)
    assert g > 0
    return tuple(x // g for x in v)


def _ccw_key(v):
    """Sort key for exact counterclockwise order starting at (1, 0)."""
    x, y = v
    if y > 0 or (y == 0 and x > 0):
        half = 0
    else:
        half = 1
    if y == 0:
        return half, 0, Fraction(0)
    return half, 1, Fraction(-x, y)


def _sector_points(gale):
    dirs = set()
    for b in gale:
        if any(b):
            p = _primitive(b)
            if p < tuple(-x for x in p):
                p = tuple(-x for x in p)
            dirs.add(p)
    assert dirs
    rays = sorted(
        {d for p in dirs for d in (p, tuple(-x for x in p))}, key=_ccw_key
    )
    if len(rays) == 2:
        (x, y), _ = rays
        return [(-y, x), (y, -x)]
    out = []
    for a, b in zip(rays, rays[1:] + rays[:1]):
        out.append((a[0] + b[0], a[1] + b[1]))
    return out


def _cell_points_3d(gale):
    def cross(u, v):
        return (
            u[1] * v[2] - u[2] * v[1],
            u[2] * v[0] - u[0] * v[2],
            u[0] * v[1] - u[1] * v[0],
        )

    planes = set()
    for u, v in combinations([b for b in gale if any(b)], 2):
        normal = cross(u, v)
        if not any(normal):
            continue
        p = _primitive(normal)
        planes.add(max(p, tuple(-x for x in p)))
    planes = sorted(planes)
    assert planes
    points = []

    def descend(idx, cons):
        if idx == len(planes):
            witness = rational_point(cons, 3)
            assert witness is not None
            points.append(tuple(witness))
            return
        h = planes[idx]
        for sign in (1, -1):
            row = tuple(-sign * x for x in h)
            nxt = cons + [(row, -1)]
            if rational_point(nxt, 3) is not None:
                descend(idx + 1, nxt)

    descend(0, [])
    return points


def _heights_for(fan, point):
    """A height vector whose relation pairing equals the chamber point."""
    relations = _relation_basis(fan)
    gram = [[_dot(a, b) for b in relations] for a in relations]
    y = solve_rational(gram, list(point))
    assert y is not None
    n = fan.n_rays
    return tuple(
        sum(Fraction(relations[i][j]) * y[i] for i in range(len(relations)))
        for j in range(n)
    )


def _induced_cells(fan, heights):
    """The strictly lower cells of the lifted cone for generic heights."""
    cells = []
    for cell in _cell_candidates(fan):
        form = _cell_form(fan, cell, heights)
        lower = True
        for j in range(fan.n_rays):
            if j in cell:
                continue
            value = _dot(form, fan.ray(j))
            assert value != heights[j], "heights lie on a chamber wall"
            if value > heights[j]:
                lower = False
                break
        if lower:
            cells.append(cell)
    return _canonical_cells(cells)


def regular_triangulations(fan):
    """All regular triangulations of the cone, each with a height
    certificate, enumerated chamber by chamber in the Gale plane."""
    _affine_cone(fan)
    _require_triangulation_scale(fan)
    if fan.n_rays == fan.dim:
        cells = _canonical_cells([tuple(range(fan.dim))])
        return [Triangulation(cells, tuple(0 for _ in range(fan.n_rays)))]
    out = {}
    for point in _chamber_representatives(fan):
        heights = _heights_for(fan, point)
        cells = _induced_cells(fan, heights)
        if cells in out:
            continue
        assert _certifies(fan, cells, heights)
        ensure_valid(make_fan([list(r) for r in fan.rays], cells))
        out[cells] = Triangulation(cells, heights)
    return [out[cells] for cells in sorted(out)]


# ---------------------------------------------------------------------------
# The pushforward criterion.


def pushforward_vanishing(fan, triangulation, value, group=None):
    """Cohomology of the strict-transform class on the triangulated fan.

    The triangulation keeps the ray set, so the coefficient vector of the
    divisor transfers unchanged.
    """
    _affine_cone(fan)
    group = group or class_group(fan)
    _, coeffs = group.coerce(value)
    refined = make_fan([list(r) for r in fan.rays], triangulation.cells)
    return cohomology_dims(refined, coeffs)


@dataclass(frozen=True)
class McmReport:
    """MCM status next to the pushforward criterion's verdict.

    witness is a triangulation with nonvanishing higher pushforward when one
    exists; simplicial_facets records the hypothesis under which vanishing
    for all regular triangulations implies MCM.
    """

    mcm: bool
    all_triangulations_vanish: bool
    witness: Triangulation
    simplicial_facets: bool


def mcm_criterion_report(fan, value):
    """Evaluate the MCM property and the regular-triangulation criterion.

    In dimension three the two verdicts are equivalent and asserted equal;
    in higher dimension only vanishing-implies-MCM holds, so reports with
    mcm True and vanishing False are genuine converse failures.
    """
    d = fan.dim
    simplicial = all(len(f) == d - 1 for f in cone_facets(fan))
    verdict = is_mcm(fan, value)
    vanishes = True
    witness = None
    for triangulation in regular_triangulations(fan):
        dims = pushforward_vanishing(fan, triangulation, value)
        if any(degree > 0 for degree in dims):
            vanishes = False
            witness = triangulation
            break
    if d == 3 and simplicial:
        assert verdict == vanishes
    return McmReport(verdict, vanishes, witness, simplicial)


def circuit_cone_mcm(fan, value):
    """MCM test on the cone over a single circuit via its Frobenius sets:
    the class must lie in the sets of both orientations."""
    _affine_cone(fan)
    circuits = enumerate_circuits(fan.rays)
    if len(circuits) != 1:
        raise PreconditionError("the rays must form a single circuit")
    circuit = circuits[0]
    oriented = circuit.oriented()
    if len(oriented.plus) < 2 or len(oriented.minus) < 2:
        raise PreconditionError("both circuit sides need at least two rays")
    group = class_group(fan)
    return in_F_pair(group, circuit, value)
