"""Discriminantal arrangement of a ray configuration in class space.

Every circuit of the rays spans a hyperplane in the rational class group,
namely the span of the classes of the divisors off the circuit, and each
orientation of the circuit picks a closed half-space bounded by it.  The
nef cone, its faces, the dual curve cone, and the secondary cones attached
to bases of the rays all live in this arrangement.  This module computes
them exactly, with the nef cone cross-checked by two independent routes:
an intersection of secondary cones over the bases contained in the fan,
and an intersection of circuit half-spaces selected by a face criterion.

All half-space tests go through the circuit relation functional (the form
pairing a class with the circuit's alpha vector); no convex hulls in class
space are ever computed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .circuits import (
    OrientedCircuit,
    circuit_hyperplane,
    circuit_relation,
    enumerate_circuits,
)
from .classgroup import class_group
from .errors import PreconditionError, ScaleLimitError
from .fan import simplicial_model, walls
from .lattice import rank
from .polyhedra import dd_cone, in_cone


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _dedup(vectors):
    out = []
    seen = set()
    for v in vectors:
        t = tuple(v)
        if t not in seen:
            seen.add(t)
            out.append(t)
    return out


def _free_vector(point):
    if hasattr(point, "free"):
        point = point.free
    return tuple(point)


# ---------------------------------------------------------------------------
# Hyperplanes and half-spaces.


@dataclass(frozen=True)
class DiscriminantalHyperplane:
    """A circuit's hyperplane: circuit indices, a primitive integer normal
    form on the free class coordinates, and an integer basis of the kernel
    (the span of the off-circuit divisor classes)."""

    circuit: tuple
    form: tuple
    span: tuple


def _as_oriented(fan, circuit):
    if isinstance(circuit, OrientedCircuit):
        return circuit
    if hasattr(circuit, "oriented"):
        return circuit.oriented()
    indices = tuple(sorted(int(i) for i in circuit))
    alpha = circuit_relation(fan.rays, indices)
    if alpha is None:
        raise PreconditionError("indices do not form a circuit of the rays")
    return OrientedCircuit(indices, tuple(alpha))


def hyperplane(fan, circuit, group=None):
    """The discriminantal hyperplane of a circuit, given by indices, a
    Circuit, or an OrientedCircuit."""
    group = group or class_group(fan)
    oc = _as_oriented(fan, circuit)
    form, kernel = circuit_hyperplane(group, oc)
    return DiscriminantalHyperplane(oc.indices, form, tuple(kernel))


def side(fan, oc, point, group=None):
    """Position of a point of rational class space relative to the closed
    half-space of an oriented circuit.

    Returns 'interior' (strictly inside), 'boundary' (on the hyperplane),
    or 'outside'.  The point is a free-coordinate vector or a class.
    """
    group = group or class_group(fan)
    form, _ = circuit_hyperplane(group, _as_oriented(fan, oc))
    value = sum(f * Fraction(x) for f, x in zip(form, _free_vector(point)))
    if value > 0:
        return "interior"
    if value == 0:
        return "boundary"
    return "outside"


# ---------------------------------------------------------------------------
# Secondary cones.


def model_bases(fan):
    """Ray subsets that are faces of the fan's simplicial model and span
    the ambient lattice rationally."""
    model = simplicial_model(fan)
    out = []
    for comb in combinations(range(fan.n_rays), fan.dim):
        if not model.has_face(frozenset(comb)):
            continue
        if rank([list(fan.rays[i]) for i in comb]) == fan.dim:
            out.append(comb)
    return out


def secondary_cone(fan, I, B, group=None):
    """Generators, in free class coordinates, of the secondary cone of the
    basis B relative to the sign set I: the classes -D_i for i in I minus B
    together with D_i for i outside both."""
    group = group or class_group(fan)
    n = fan.n_rays
    iset = frozenset(int(i) for i in I)
    bset = frozenset(int(i) for i in B)
    if not iset <= frozenset(range(n)) or not bset <= frozenset(range(n)):
        raise PreconditionError("ray index out of range")
    if len(bset) != fan.dim or rank([list(fan.rays[i]) for i in sorted(bset)]) != fan.dim:
        raise PreconditionError("subset does not index a basis of the rays")
    gale = [cls.free for cls in group.gale_transform()]
    gens = [tuple(-x for x in gale[i]) for i in sorted(iset - bset)]
    gens += [tuple(gale[i]) for i in sorted(frozenset(range(n)) - iset - bset)]
    return gens


def _halfspace_normals(gens, r):
    """Normals cutting out the cone spanned by the given vectors: the rays
    of the dual cone, plus both signs of the dual's lineality basis."""
    rays, lin = dd_cone([list(g) for g in gens], r)
    normals = [tuple(a) for a in rays]
    for line in lin:
        normals.append(tuple(line))
        normals.append(tuple(-x for x in line))
    return normals


# ---------------------------------------------------------------------------
# The nef cone, by two routes.


@dataclass(frozen=True)
class NefCone:
    """Half-space and generator descriptions of the nef cone in free class
    coordinates.  Lineality is nonempty only for degenerate configurations."""

    normals: tuple
    generators: tuple
    lineality: tuple

    def contains(self, point):
        v = _free_vector(point)
        return all(sum(a * Fraction(x) for a, x in zip(n, v)) >= 0 for n in self.normals)

    def interior_contains(self, point):
        """Strict version of `contains`; the interior is only nonempty when
        the cone is full-dimensional."""
        v = _free_vector(point)
        return all(sum(a * Fraction(x) for a, x in zip(n, v)) > 0 for n in self.normals)


def nef_supports(fan):
    """Oriented circuits whose half-space is forced to contain the nef
    cone: some maximal cone of the circuit's own fan, the circuit minus one
    positive member, is a face of the fan's simplicial model."""
    model = simplicial_model(fan)
    out = []
    for circuit in enumerate_circuits(fan.rays):
        for oc in circuit.orientations():
            members = set(oc.indices)
            if any(model.has_face(frozenset(members - {i})) for i in oc.plus):
                out.append(oc)
    return out


def nef_cone(fan, group=None):
    """The nef cone, intersected from secondary cones over model bases and
    cross-checked against the circuit half-space description."""
    group = group or class_group(fan)
    r = group.free_rank
    if r == 0:
        return NefCone((), (), ())
    route_a = []
    for basis in model_bases(fan):
        route_a.extend(_halfspace_normals(secondary_cone(fan, (), basis, group), r))
    route_b = []
    for oc in nef_supports(fan):
        form, _ = circuit_hyperplane(group, oc)
        route_b.append(form)
    normals_a = _dedup(route_a)
    normals_b = _dedup(route_b)
    cone_a = dd_cone([list(a) for a in normals_a], r)
    cone_b = dd_cone([list(a) for a in normals_b], r)
    if cone_a != cone_b:
        raise RuntimeError("nef cone routes disagree; fan data is inconsistent")
    rays, lin = cone_b
    return NefCone(
        tuple(normals_b),
        tuple(tuple(v) for v in rays),
        tuple(tuple(line) for line in lin),
    )


def nef_generators(fan, group=None):
    """Primitive generator classes of the nef cone, lineality included with
    both signs."""
    group = group or class_group(fan)
    cone = nef_cone(fan, group)
    gens = list(cone.generators)
    for line in cone.lineality:
        gens.append(tuple(line))
        gens.append(tuple(-x for x in line))
    return [group.make_class(g) for g in gens]


def nef_faces(fan, group=None):
    """Faces of the nef cone, each as a pair (active, generators) where
    active is the full set of stored normals vanishing on the face.

    The list is sorted by the size of the active set, so it starts with the
    whole cone and ends with the apex.
    """
    group = group or class_group(fan)
    cone = nef_cone(fan, group)
    if cone.lineality:
        raise PreconditionError("face enumeration requires a pointed nef cone")
    seen = {}
    for k in range(len(cone.normals) + 1):
        for active in combinations(range(len(cone.normals)), k):
            gens = tuple(
                g
                for g in cone.generators
                if all(_dot(cone.normals[a], g) == 0 for a in active)
            )
            full = frozenset(
                a
                for a in range(len(cone.normals))
                if all(_dot(cone.normals[a], g) == 0 for g in gens)
            )
            seen.setdefault(full, gens)
    return sorted(seen.items(), key=lambda kv: (len(kv[0]), sorted(kv[0])))


# ---------------------------------------------------------------------------
# Oriented flats of the nef cone and its faces.


def nef_oriented_flat(fan, group=None):
    """All oriented circuits whose half-space contains the whole nef cone."""
    from .frobenius import flat_for_generators

    group = group or class_group(fan)
    cone = nef_cone(fan, group)
    gens = list(cone.generators)
    for line in cone.lineality:
        gens.append(tuple(line))
        gens.append(tuple(-x for x in line))
    return flat_for_generators(group, gens)


def face_oriented_flat(fan, face, group=None):
    """The oriented flat of the negative of a nef face, the face given by
    its generators (free class coordinates or classes)."""
    from .frobenius import flat_for_generators

    group = group or class_group(fan)
    cone = nef_cone(fan, group)
    gens = [_free_vector(g) for g in face]
    for g in gens:
        if not cone.contains(g):
            raise PreconditionError("face generator lies outside the nef cone")
    return flat_for_generators(group, [tuple(-x for x in g) for g in gens])


# ---------------------------------------------------------------------------
# The dual curve cone.


def mori_generators(fan, group=None):
    """Primitive generators of the dual curve cone: one lifted wall form
    per inner wall of the fan, reduced to the extreme ones.

    Each wall of a simplicial fan carries a circuit through the two rays
    flanking it; the wall form is a positive multiple of the circuit form
    oriented to be positive on those rays, so the primitive circuit form
    itself generates the wall's curve class functional.
    """
    group = group or class_group(fan)
    forms = []
    for tau, pair, support in walls(fan):
        circuit = tuple(sorted(support))
        alpha = circuit_relation(fan.rays, circuit)
        oc = OrientedCircuit(circuit, tuple(alpha))
        first, second = pair
        i = min(first - tau)
        j = min(second - tau)
        if i not in oc.indices or j not in oc.indices:
            raise RuntimeError("wall circuit misses a flanking ray")
        if oc.alpha_of(i) < 0:
            oc = oc.reverse()
        if oc.alpha_of(i) <= 0 or oc.alpha_of(j) <= 0:
            raise RuntimeError("wall relation is not positive on the flanking rays")
        form, _ = circuit_hyperplane(group, oc)
        if form not in forms:
            forms.append(form)
    out = []
    for f in forms:
        others = [list(g) for g in forms if g != f]
        if not in_cone(others, list(f)):
            out.append(f)
    return sorted(out)


# ---------------------------------------------------------------------------
# Chamber comparison.


def chamber_equality_test(fan, group=None):
    """Whether the secondary cones over all sign sets cut class space into
    exactly the chambers of the circuit hyperplane arrangement.

    The check enumerates both wall systems exhaustively and exactly, so it
    is limited to class rank at most 2; larger ranks raise ScaleLimitError.
    """
    group = group or class_group(fan)
    r = group.free_rank
    if r > 2:
        raise ScaleLimitError("chamber comparison is limited to class rank 2")
    n = fan.n_rays
    bases = [
        comb
        for comb in combinations(range(n), fan.dim)
        if rank([list(fan.rays[i]) for i in comb]) == fan.dim
    ]
    circuits = enumerate_circuits(fan.rays)
    if r == 0:
        return not circuits
    if r == 1:
        has_disc_wall = bool(circuits)
        has_sec_wall = False
        for bits in range(1 << n):
            iset = [i for i in range(n) if bits >> i & 1]
            for basis in bases:
                gens = [g for g in secondary_cone(fan, iset, basis, group) if any(g)]
                if gens and (all(g[0] > 0 for g in gens) or all(g[0] < 0 for g in gens)):
                    has_sec_wall = True
        return has_sec_wall == has_disc_wall
    disc_walls = set()
    for circuit in circuits:
        _, kernel = circuit_hyperplane(group, circuit.oriented())
        v = tuple(kernel[0])
        disc_walls.add(v)
        disc_walls.add(tuple(-x for x in v))
    sec_walls = set()
    for bits in range(1 << n):
        iset = [i for i in range(n) if bits >> i & 1]
        for basis in bases:
            gens = secondary_cone(fan, iset, basis, group)
            drays, dlin = dd_cone([list(g) for g in gens], 2)
            if dlin or not drays:
                continue
            for a in drays:
                v = (-a[1], a[0])
                for w in (v, (-v[0], -v[1])):
                    if all(_dot(b, w) >= 0 for b in drays):
                        sec_walls.add(w)
    return sec_walls == disc_walls
