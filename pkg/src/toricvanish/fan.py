"""Fan container, validation, the simplicial model and its subcomplexes.

A fan is stored as primitive integer rays plus maximal cones given by ray
index sets (0-based). Geometric queries (faces, pointedness, pairwise face
intersections) are derived on demand with exact rational arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache

from .errors import FanValidationError, PreconditionError
from .homology import SimplicialComplex
from .lattice import integer_kernel, rank, vec_gcd
from .polyhedra import nonneg_combination, rational_point


@dataclass(frozen=True)
class Fan:
    """Rays plus maximal cones; optionally a name, a declared class basis
    (coefficient vectors on the rays) and a default subvariety (cone list)."""

    rays: tuple
    max_cones: tuple
    name: str = None
    class_basis: tuple = None
    subvariety: tuple = None

    @property
    def dim(self):
        return len(self.rays[0]) if self.rays else 0

    @property
    def n_rays(self):
        return len(self.rays)

    def ray(self, i):
        return self.rays[i]


def make_fan(rays, max_cones, name=None, class_basis=None, subvariety=None):
    rays = tuple(tuple(int(x) for x in r) for r in rays)
    cones = tuple(frozenset(int(i) for i in c) for c in max_cones)
    basis = None
    if class_basis is not None:
        basis = tuple(tuple(int(x) for x in b) for b in class_basis)
    sub = None
    if subvariety is not None:
        sub = tuple(frozenset(int(i) for i in c) for c in subvariety)
    return Fan(rays=rays, max_cones=cones, name=name, class_basis=basis, subvariety=sub)


def load_fan(path):
    """Read a fan file: JSON with rays, max_cones (0-based), optional
    name / class_basis / subvariety."""
    with open(path) as fh:
        data = json.load(fh)
    return make_fan(
        data["rays"],
        data["max_cones"],
        name=data.get("name"),
        class_basis=data.get("class_basis"),
        subvariety=data.get("subvariety"),
    )


def dump_fan(fan, path):
    data = {
        "rays": [list(r) for r in fan.rays],
        "max_cones": [sorted(c) for c in fan.max_cones],
    }
    if fan.name is not None:
        data["name"] = fan.name
    if fan.class_basis is not None:
        data["class_basis"] = [list(b) for b in fan.class_basis]
    if fan.subvariety is not None:
        data["subvariety"] = [sorted(c) for c in fan.subvariety]
    with open(path, "w") as fh:
        json.dump(data, fh, indent=1)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Cone geometry.


def _ray_matrix(fan, idx):
    return [list(fan.rays[i]) for i in sorted(idx)]


def cone_rank(fan, cone):
    if not cone:
        return 0
    return rank(_ray_matrix(fan, cone))


def is_pointed(fan, cone):
    """A cone is strongly convex iff 0 has no nontrivial nonnegative
    representation by its rays."""
    gens = [list(fan.rays[i]) + [1] for i in sorted(cone)]
    return nonneg_combination(gens, [0] * fan.dim + [1]) is None


def _is_extreme_ray(fan, cone, i):
    others = [fan.rays[j] for j in sorted(cone) if j != i]
    if not others:
        return True
    return nonneg_combination(others, fan.rays[i]) is None


@lru_cache(maxsize=None)
def cone_faces(fan, cone):
    """All faces of the cone as ray index sets (including the empty set and
    the cone itself), via supporting-functional feasibility."""
    cone = frozenset(cone)
    idx = sorted(cone)
    if cone_rank(fan, cone) == len(idx):
        # Simplicial: faces are exactly the subsets.
        from itertools import combinations

        return frozenset(
            frozenset(c) for k in range(len(idx) + 1) for c in combinations(idx, k)
        )
    d = fan.dim
    from itertools import combinations

    faces = set()
    for k in range(len(idx) + 1):
        for sub in combinations(idx, k):
            s = frozenset(sub)
            cons = []
            for i in idx:
                r = fan.rays[i]
                if i in s:
                    cons.append((tuple(r), 0))
                    cons.append((tuple(-x for x in r), 0))
                else:
                    cons.append((tuple(-x for x in r), -1))
            if rational_point(cons, d) is not None:
                faces.add(s)
    return frozenset(faces)


def fan_cones(fan):
    """Every cone of the fan (all faces of all maximal cones)."""
    out = set()
    for c in fan.max_cones:
        out.update(cone_faces(fan, c))
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def _separating_functional(fan, c1, c2):
    """A functional vanishing on the shared rays, strictly positive on the
    rest of c1 and strictly negative on the rest of c2; None if impossible."""
    shared = c1 & c2
    cons = []
    for i in sorted(shared):
        r = fan.rays[i]
        cons.append((tuple(r), 0))
        cons.append((tuple(-x for x in r), 0))
    for i in sorted(c1 - shared):
        cons.append((tuple(-x for x in fan.rays[i]), -1))
    for i in sorted(c2 - shared):
        cons.append((tuple(fan.rays[i]), -1))
    return rational_point(cons, fan.dim)


@dataclass
class FanDiagnostics:
    errors: list = field(default_factory=list)
    is_complete: bool = False
    is_simplicial: bool = False
    is_smooth: bool = False

    @property
    def is_valid(self):
        return not self.errors


def validate(fan):
    """Structural diagnostics: primitivity, pointedness, pairwise face
    intersections, dimension defects, and a completeness flag."""
    diag = FanDiagnostics()
    if not fan.rays:
        diag.errors.append("fan has no rays")
        return diag
    d = fan.dim
    for i, r in enumerate(fan.rays):
        if len(r) != d:
            diag.errors.append(f"ray {i} has wrong dimension")
            return diag
        if not any(r):
            diag.errors.append(f"ray {i} is zero")
        elif vec_gcd(r) != 1:
            diag.errors.append(f"ray {i} is not primitive: {tuple(r)}")
    if len(set(fan.rays)) != len(fan.rays):
        diag.errors.append("duplicate rays")
    if not fan.max_cones:
        diag.errors.append("fan has no maximal cones")
    used = set()
    for c in fan.max_cones:
        used |= c
        if any(i < 0 or i >= fan.n_rays for i in c):
            diag.errors.append(f"cone {sorted(c)} has out-of-range ray indices")
            return diag
    if used != set(range(fan.n_rays)):
        diag.errors.append("some rays belong to no maximal cone")
    if diag.errors:
        return diag
    for c in fan.max_cones:
        if not is_pointed(fan, c):
            diag.errors.append(f"cone {sorted(c)} is not strongly convex")
        for i in sorted(c):
            if not _is_extreme_ray(fan, c, i):
                diag.errors.append(f"ray {i} is not extreme in cone {sorted(c)}")
    cones = list(fan.max_cones)
    for a in range(len(cones)):
        for b in range(a + 1, len(cones)):
            if cones[a] <= cones[b] or cones[b] <= cones[a]:
                diag.errors.append(
                    f"maximal cones {sorted(cones[a])} and {sorted(cones[b])} are nested"
                )
                continue
            if _separating_functional(fan, cones[a], cones[b]) is None:
                diag.errors.append(
                    f"cones {sorted(cones[a])} and {sorted(cones[b])} do not meet in a common face"
                )
    if diag.errors:
        return diag
    diag.is_simplicial = all(
        cone_rank(fan, c) == len(c) for c in fan.max_cones
    )
    diag.is_smooth = diag.is_simplicial and all(
        _cone_is_smooth(fan, c) for c in fan.max_cones
    )
    diag.is_complete = _check_complete(fan)
    return diag


def ensure_valid(fan):
    diag = validate(fan)
    if not diag.is_valid:
        raise FanValidationError("; ".join(diag.errors))
    return diag


def _cone_is_smooth(fan, cone):
    from .lattice import saturation_index

    M = _ray_matrix(fan, cone)
    return rank(M) == len(M) and saturation_index(M) == 1


def _check_complete(fan):
    d = fan.dim
    if any(cone_rank(fan, c) != d for c in fan.max_cones):
        return False
    if rank([list(r) for r in fan.rays]) != d:
        return False
    counts = {}
    for c in fan.max_cones:
        for f in cone_faces(fan, c):
            if cone_rank(fan, f) == d - 1:
                counts[f] = counts.get(f, 0) + 1
    return all(v == 2 for v in counts.values())


def is_complete(fan):
    return _check_complete(fan)


def is_smooth(fan):
    return all(_cone_is_smooth(fan, c) for c in fan.max_cones)


# ---------------------------------------------------------------------------
# Simplicial model and subvariety subcomplexes.


def simplicial_model(fan):
    """The complex with I a face iff I is contained in some cone's ray set."""
    return SimplicialComplex.from_facets([sorted(c) for c in fan.max_cones])


def subvariety_complex(fan, vcones):
    """Simplicial model of the subfan of cones whose orbit closure is not
    inside V; V is the union of the orbit closures of `vcones`.

    The zero cone (empty index set) in `vcones` makes V the whole variety,
    giving the void complex. An empty `vcones` list means V is empty and
    returns the full model.
    """
    vcones = [frozenset(c) for c in vcones]
    all_cones = set(fan_cones(fan))
    for tau in vcones:
        if tau not in all_cones:
            raise PreconditionError(f"cone {sorted(tau)} is not in the fan")
    keep = [c for c in all_cones if not any(tau <= c for tau in vcones)]
    if not keep:
        return SimplicialComplex.void()
    return SimplicialComplex.from_facets([sorted(c) for c in keep])


# ---------------------------------------------------------------------------
# Walls and surface combinatorics.


def walls(fan):
    """Inner walls of a simplicial fan: (wall ray set, cone pair, circuit).

    The circuit is the unique minimal dependent subset of the union of the
    two adjacent maximal cones' rays.
    """
    if not all(cone_rank(fan, c) == len(c) for c in fan.max_cones):
        raise PreconditionError("walls are only computed for simplicial fans")
    cones = sorted(fan.max_cones, key=sorted)
    out = []
    for a in range(len(cones)):
        for b in range(a + 1, len(cones)):
            shared = cones[a] & cones[b]
            if len(shared) != len(cones[a]) - 1:
                continue
            if cone_rank(fan, shared) != cone_rank(fan, cones[a]) - 1:
                continue
            union = sorted(cones[a] | cones[b])
            M = [list(fan.rays[i]) for i in union]
            ker = integer_kernel([list(col) for col in zip(*M)])
            if len(ker) != 1:
                continue
            support = frozenset(
                union[j] for j, a_j in enumerate(ker[0]) if a_j != 0
            )
            out.append((frozenset(shared), (cones[a], cones[b]), support))
    return out


def opposite_pairs(fan):
    """Pairs (p, q), p < q, of rays with l_p = -l_q."""
    pairs = []
    for p in range(fan.n_rays):
        neg = tuple(-x for x in fan.ray(p))
        for q in range(p + 1, fan.n_rays):
            if fan.ray(q) == neg:
                pairs.append((p, q))
    return pairs


def circular_order(fan):
    """Counterclockwise circular order of the rays of a complete surface fan,
    starting from ray 0. Exact (no floating point)."""
    if fan.dim != 2:
        raise PreconditionError("circular order needs a surface fan")

    def half(v):
        x, y = v
        return 0 if (y > 0 or (y == 0 and x > 0)) else 1

    def cross(u, v):
        return u[0] * v[1] - u[1] * v[0]

    import functools

    def cmp(i, j):
        u, v = fan.rays[i], fan.rays[j]
        hu, hv = half(u), half(v)
        if hu != hv:
            return -1 if hu < hv else 1
        c = cross(u, v)
        return 0 if c == 0 else (-1 if c > 0 else 1)

    order = sorted(range(fan.n_rays), key=functools.cmp_to_key(cmp))
    start = order.index(0)
    return order[start:] + order[:start]


def surface_selfintersections(fan):
    """Integers a_i with l_{i-1} + l_{i+1} + a_i * l_i = 0, indexed by ray.

    Requires a complete smooth surface fan; raises on a non-smooth wall
    (adjacent rays that are not a Z-basis).
    """
    if fan.dim != 2:
        raise PreconditionError("self-intersection numbers need a surface fan")
    order = circular_order(fan)
    m = len(order)
    for k in range(m):
        u = fan.rays[order[k]]
        v = fan.rays[order[(k + 1) % m]]
        if u[0] * v[1] - u[1] * v[0] != 1:
            raise FanValidationError(
                f"non-smooth wall between rays {order[k]} and {order[(k + 1) % m]}"
            )
    out = {}
    for k in range(m):
        i = order[k]
        prev = fan.rays[order[(k - 1) % m]]
        nxt = fan.rays[order[(k + 1) % m]]
        li = fan.rays[i]
        s = (prev[0] + nxt[0], prev[1] + nxt[1])
        j = 0 if li[0] != 0 else 1
        if s[j] % li[j] != 0:
            raise FanValidationError(f"no integral relation at ray {i}")
        t = s[j] // li[j]
        if s[1 - j] != t * li[1 - j]:
            raise FanValidationError(f"no integral relation at ray {i}")
        out[i] = -t
    return [out[i] for i in range(fan.n_rays)]
