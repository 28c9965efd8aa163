"""Exact rational polyhedra: Fourier-Motzkin, simplex, lattice points, rays.

Constraints are pairs (a, b) encoding a.x <= b, with integer or Fraction
entries. Everything is exact; unboundedness and emptiness are decided, never
estimated. INFINITE is the value used for lattice point counts of regions
with infinitely many integer points.
"""

from __future__ import annotations

import math
from fractions import Fraction
from math import ceil, floor, gcd

from .errors import ScaleLimitError
from .lattice import (
    hermite_normal_form,
    smith_normal_form,
    transpose,
    unimodular_inverse,
)

INFINITE = math.inf

DEFAULT_COUNT_CAP = 100000


def normalize_constraint(a, b):
    """Scale a.x <= b to primitive integer form (deterministic)."""
    a = list(a)
    if isinstance(b, int) and all(isinstance(x, int) for x in a):
        g = 0
        for x in a:
            g = gcd(g, x)
        g = gcd(g, b)
        if g > 1:
            a = [x // g for x in a]
            b //= g
        return tuple(a), b
    b = Fraction(b)
    den = b.denominator
    for x in a:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    a = [int(Fraction(x) * den) for x in a]
    b = b * den
    g = 0
    for x in a:
        g = gcd(g, x)
    g = gcd(g, int(b.numerator)) if b.denominator == 1 else g
    if g > 1:
        a = [x // g for x in a]
        b = b / g
    if b.denominator == 1:
        b = int(b)
    return tuple(a), b


def _dedup(cons):
    seen = set()
    out = []
    for a, b in cons:
        a, b = normalize_constraint(a, b)
        key = (a, b)
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def fm_eliminate_last(cons, n):
    """Project {x : cons} onto the first n-1 coordinates (Fourier-Motzkin)."""
    pos, neg, zero = [], [], []
    for a, b in cons:
        co = a[n - 1]
        if co > 0:
            pos.append((a, b))
        elif co < 0:
            neg.append((a, b))
        else:
            zero.append((a[: n - 1], b))
    for ap, bp in pos:
        for an, bn in neg:
            cp, cn = ap[n - 1], -an[n - 1]
            a = [cn * ap[j] + cp * an[j] for j in range(n - 1)]
            b = cn * bp + cp * bn
            zero.append((tuple(a), b))
    return _dedup(zero)


def fm_tower(cons, n):
    """List of projected systems: tower[k] constrains x_1..x_{k+1}."""
    tower = [None] * n
    cur = _dedup([(tuple(a), b) for a, b in cons])
    tower[n - 1] = cur
    for k in range(n - 1, 0, -1):
        cur = fm_eliminate_last(cur, k + 1)
        tower[k - 1] = cur
    return tower


def _var_interval(cons, point):
    """Exact bounds for the next variable given values of the earlier ones.

    cons constrains x_1..x_{k+1}; point fixes x_1..x_k. Returns (lo, hi)
    where lo is a Fraction or None (unbounded below), likewise hi, or the
    string "empty" when a constraint with zero coefficient already fails.
    """
    k = len(point)
    lo, hi = None, None
    for a, b in cons:
        co = a[k]
        rest = b - sum(ai * xi for ai, xi in zip(a[:k], point))
        if co == 0:
            if rest < 0:
                return "empty"
        elif co > 0:
            bound = Fraction(rest, co)
            if hi is None or bound < hi:
                hi = bound
        else:
            bound = Fraction(rest, co)
            if lo is None or bound > lo:
                lo = bound
    return lo, hi


def iter_lattice_points(cons, n, cap=DEFAULT_COUNT_CAP):
    """Yield all integer points of {x in R^n : a.x <= b}, which must be
    bounded (raises ScaleLimitError on an unbounded sweep direction or when
    more than `cap` points show up)."""
    if n == 0:
        if all(b >= 0 for _, b in cons):
            yield ()
        return
    tower = fm_tower(cons, n)
    count = 0
    # Depth-first sweep over integer prefixes.
    prefixes = [()]
    while prefixes:
        point = prefixes.pop()
        k = len(point)
        iv = _var_interval(tower[k], point)
        if iv == "empty":
            continue
        lo, hi = iv
        if lo is None or hi is None:
            raise ScaleLimitError("unbounded region in lattice point sweep")
        lo_i, hi_i = ceil(lo), floor(hi)
        if k + 1 == n:
            got = max(0, hi_i - lo_i + 1)
            count += got
            if cap is not None and count > cap:
                raise ScaleLimitError(f"lattice point count exceeds cap {cap}")
            for v in range(lo_i, hi_i + 1):
                yield point + (v,)
        else:
            for v in range(lo_i, hi_i + 1):
                prefixes.append(point + (v,))


def count_lattice_points_bounded(cons, n, cap=DEFAULT_COUNT_CAP):
    c = 0
    for _ in iter_lattice_points(cons, n, cap=cap):
        c += 1
    return c


def rational_point(cons, n):
    """A rational point of the system, or None. Deterministic (midpoints)."""
    if n == 0:
        return () if all(b >= 0 for _, b in cons) else None
    tower = fm_tower(cons, n)
    if any(b < 0 for a, b in tower[0] if not any(a)):
        return None
    point = ()
    for k in range(n):
        iv = _var_interval(tower[k], point)
        if iv == "empty":
            return None
        lo, hi = iv
        if lo is not None and hi is not None:
            if lo > hi:
                return None
            v = (lo + hi) / 2
        elif lo is not None:
            v = lo + 1
        elif hi is not None:
            v = hi - 1
        else:
            v = Fraction(0)
        point = point + (v,)
    return point


def is_feasible(cons, n):
    return rational_point(cons, n) is not None


# ---------------------------------------------------------------------------
# Recession cones and exact lattice point counts of unbounded regions.


def recession_constraints(cons):
    return [(a, 0) for a, b in cons]


def _span_of_cone(cons, n):
    """Integer row basis of the linear span of {u : a.u <= 0 for all (a, _)}.

    The span is computed from the extreme rays and the lineality space of the
    cone, both found by double description.
    """
    rays, lineality = dd_cone([tuple(-x for x in a) for a, _ in cons], n)
    rows = [list(r) for r in rays] + [list(l) for l in lineality]
    if not rows:
        return []
    H, _ = hermite_normal_form(rows)
    return [row for row in H if any(row)]


def count_lattice_points(cons, n, cap=DEFAULT_COUNT_CAP):
    """Exact number of integer points: an int, or INFINITE.

    Bounded regions are swept; unbounded ones are split along the linear span
    of the recession cone, where each nonempty fiber over an integer point of
    the (bounded) transverse projection contains a full-dimensional translate
    of the recession cone and hence infinitely many integer points.
    """
    cons = _dedup(cons)
    span = _span_of_cone(recession_constraints(cons), n)
    k = len(span)
    if k == 0:
        return count_lattice_points_bounded(cons, n, cap=cap)
    return INFINITE if _has_lattice_point_unbounded(cons, n, span) else 0


def recession_span(cons, n):
    """Integer row basis of the linear span of the recession cone of cons.

    The span depends only on the constraint normals, so it can be computed
    once and passed to has_lattice_point for families of systems that share
    their left-hand sides.
    """
    return _span_of_cone(recession_constraints(_dedup(cons)), n)


def has_lattice_point(cons, n, span=None):
    """Exact integer feasibility of a.x <= b (bounded or not).

    span, when given, must equal recession_span(cons, n); passing it skips
    the double description step.
    """
    cons = _dedup(cons)
    if span is None:
        span = _span_of_cone(recession_constraints(cons), n)
    if not span:
        for _ in iter_lattice_points(cons, n, cap=None):
            return True
        return False
    return _has_lattice_point_unbounded(cons, n, span)


def _has_lattice_point_unbounded(cons, n, span):
    k = len(span)
    if k == n:
        # Full-dimensional recession cone: any rational point certifies
        # arbitrarily large balls inside the region, hence integer points.
        return rational_point(cons, n) is not None
    # Unimodular change of coordinates putting the span into the last k
    # coordinates: x = N z where the last k columns of N span the cone's span.
    _, S, V = smith_normal_form(span)
    Minv = unimodular_inverse(V)  # rows: first k span the same lattice as span
    rows = [list(r) for r in Minv]
    N = transpose(rows[k:] + rows[:k])
    newcons = []
    for a, b in cons:
        arow = [sum(a[i] * N[i][j] for i in range(n)) for j in range(n)]
        newcons.append((tuple(arow), b))
    # Transverse projection is bounded: sweep it, checking fibers rationally.
    tower = fm_tower(newcons, n)
    prefixes = [()]
    while prefixes:
        point = prefixes.pop()
        m = len(point)
        iv = _var_interval(tower[m], point)
        if iv == "empty":
            continue
        lo, hi = iv
        if m < n - k:
            if lo is None or hi is None:
                raise ScaleLimitError("transverse projection unbounded")
            for v in range(ceil(lo), floor(hi) + 1):
                prefixes.append(point + (v,))
        else:
            # Inside the fiber: rational feasibility is enough.
            fiber = []
            for a, b in newcons:
                rest = b - sum(ai * xi for ai, xi in zip(a[: n - k], point))
                fiber.append((a[n - k :], rest))
            if rational_point(fiber, k) is not None:
                return True
    return False


# ---------------------------------------------------------------------------
# Double description: extreme rays of {x : n_j . x >= 0}.


def _primitive(v):
    den = 1
    for x in v:
        den = den * Fraction(x).denominator // gcd(den, Fraction(x).denominator)
    w = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    return tuple(x // g for x in w) if g else tuple(w)


def dd_cone(normals, n):
    """Extreme rays and lineality basis of {x in R^n : a.x >= 0 for a in normals}.

    Incremental double description with the combinatorial adjacency test.
    Rays are primitive integer vectors, sorted, deterministic.
    """
    lineality = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    rays = []
    seen = []
    for a in normals:
        seen.append(a)
        piv = next((l for l in lineality if _dot(a, l) != 0), None)
        if piv is not None:
            if _dot(a, piv) < 0:
                piv = [-x for x in piv]
            lineality = [
                _reject(l, a, piv) for l in lineality if l is not piv and not _same_line(l, piv)
            ]
            lineality = [l for l in lineality if any(l)]
            rays = [list(_primitive(_reject(r, a, piv))) for r in rays]
            rays.append(list(_primitive(piv)))
            rays = _dedup_rays(rays)
            continue
        plus = [r for r in rays if _dot(a, r) > 0]
        zero = [r for r in rays if _dot(a, r) == 0]
        minus = [r for r in rays if _dot(a, r) < 0]
        if not minus:
            continue
        new = []
        for rp in plus:
            for rm in minus:
                if not _adjacent(rp, rm, rays, seen[:-1], lineality):
                    continue
                lp, lm = _dot(a, rp), -_dot(a, rm)
                comb = [lm * p + lp * m for p, m in zip(rp, rm)]
                comb = list(_primitive(comb))
                if any(comb):
                    new.append(comb)
        rays = _dedup_rays(plus + zero + new)
    rays = sorted(_primitive(r) for r in rays)
    lin = sorted(_primitive(l) for l in lineality if any(l))
    return rays, lin


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _reject(v, a, piv):
    """Component of v in the hyperplane a.x = 0, along piv."""
    num = _dot(a, v)
    den = _dot(a, piv)
    scaled = [den * x - num * p for x, p in zip(v, piv)]
    return list(_primitive(scaled)) if any(scaled) else [0] * len(v)


def _same_line(u, v):
    pu, pv = _primitive(u), _primitive(v)
    return pu == pv or pu == tuple(-x for x in pv)


def _dedup_rays(rays):
    out = []
    seen = set()
    for r in rays:
        p = _primitive(r)
        if any(p) and p not in seen:
            seen.add(p)
            out.append(list(p))
    return out


def _adjacent(r1, r2, rays, processed, lineality):
    """Combinatorial adjacency of two rays wrt the processed constraints."""
    z12 = [a for a in processed if _dot(a, r1) == 0 and _dot(a, r2) == 0]
    for r3 in rays:
        if r3 is r1 or r3 is r2 or _same_line(r3, r1) or _same_line(r3, r2):
            continue
        if all(_dot(a, r3) == 0 for a in z12):
            return False
    return True


# ---------------------------------------------------------------------------
# Exact simplex (two-phase, Bland's rule). Nonnegative variables.


def _simplex_pivot(T, basis, m, ncols, cost):
    """Run simplex iterations on tableau T with objective row `cost`.

    T has m constraint rows; columns 0..ncols-1 are variables, last column is
    the rhs. Maximizes. Returns "optimal" or "unbounded".
    """
    while True:
        enter = next((j for j in range(ncols) if cost[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i in range(m):
            if T[i][enter] > 0:
                ratio = T[i][ncols] / T[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return "unbounded"
        _, row = best
        piv = T[row][enter]
        T[row] = [x / piv for x in T[row]]
        for i in range(m):
            if i != row and T[i][enter]:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[row])]
        f = cost[enter]
        for j in range(ncols + 1):
            cost[j] -= f * T[row][j]
        basis[row] = enter


def simplex_eq_nonneg(A, b, c):
    """Maximize c.x subject to A x = b, x >= 0, by two-phase simplex.

    Returns (status, value, x) with status in "optimal", "unbounded",
    "infeasible". Exact over Fractions.
    """
    m = len(A)
    n = len(c)
    A = [[Fraction(x) for x in row] for row in A]
    b = [Fraction(x) for x in b]
    for i in range(m):
        if b[i] < 0:
            A[i] = [-x for x in A[i]]
            b[i] = -b[i]
    ncols = n + m  # variables + artificials
    T = [A[i] + [Fraction(1) if j == i else Fraction(0) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    # Phase 1: maximize -sum(artificials).
    cost = [Fraction(0)] * (ncols + 1)
    for i in range(m):
        for j in range(ncols + 1):
            cost[j] += T[i][j]
    for j in range(n, ncols):
        cost[j] = Fraction(0)
    _simplex_pivot(T, basis, m, ncols, cost)
    if cost[ncols] != 0:
        return "infeasible", None, None
    # Drive any artificial still in the basis out, or drop its row.
    keep = []
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if T[i][j] != 0), None)
            if enter is None:
                continue  # redundant row
            piv = T[i][enter]
            T[i] = [x / piv for x in T[i]]
            for k in range(m):
                if k != i and T[k][enter]:
                    f = T[k][enter]
                    T[k] = [x - f * y for x, y in zip(T[k], T[i])]
            basis[i] = enter
        keep.append(i)
    T = [T[i][:n] + [T[i][ncols]] for i in keep]
    basis = [basis[i] for i in keep]
    m = len(T)
    # Phase 2.
    cost = [Fraction(x) for x in c] + [Fraction(0)]
    for i in range(m):
        if cost[basis[i]]:
            f = cost[basis[i]]
            cost = [x - f * y for x, y in zip(cost, T[i])]
    status = _simplex_pivot(T, basis, m, n, cost)
    x = [Fraction(0)] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = T[i][n]
    if status == "unbounded":
        return "unbounded", None, x
    return "optimal", _value(c, x), x


def _value(c, x):
    return sum(Fraction(ci) * xi for ci, xi in zip(c, x))


def nonneg_combination(generators, target):
    """Coefficients lam >= 0 with sum(lam_i * g_i) = target, or None.

    generators: list of integer vectors; target: integer vector.
    """
    if not generators:
        return [] if not any(target) else None
    d = len(target)
    A = [[g[i] for g in generators] for i in range(d)]
    status, _, x = simplex_eq_nonneg(A, list(target), [0] * len(generators))
    return x if status == "optimal" else None


def in_cone(generators, target):
    return nonneg_combination(generators, target) is not None


def max_epsilon(cons, strict, n, cap=1):
    """Feasibility with strict rows: maximize eps subject to
    a.x + eps <= b on strict rows, a.x <= b otherwise, 0 <= eps <= cap.

    Free variables are split into positive and negative parts. Returns the
    optimum (a Fraction) and a witness point, or (None, None) if even the
    closed system is infeasible. Strict feasibility holds iff optimum > 0.
    """
    nv = 2 * n + 1  # x+ / x- / eps
    A_eq = []
    b_eq = []
    slack_count = len(cons) + 1
    total = nv + slack_count
    rows = []
    rhs = []
    for idx, (a, b) in enumerate(cons):
        row = [Fraction(0)] * total
        for j in range(n):
            row[j] = Fraction(a[j])
            row[n + j] = Fraction(-a[j])
        row[2 * n] = Fraction(1) if idx in strict else Fraction(0)
        row[nv + idx] = Fraction(1)
        rows.append(row)
        rhs.append(Fraction(b))
    row = [Fraction(0)] * total
    row[2 * n] = Fraction(1)
    row[nv + len(cons)] = Fraction(1)
    rows.append(row)
    rhs.append(Fraction(cap))
    c = [Fraction(0)] * total
    c[2 * n] = Fraction(1)
    status, val, x = simplex_eq_nonneg(rows, rhs, c)
    if status != "optimal":
        return (None, None) if status == "infeasible" else (Fraction(cap), None)
    point = tuple(x[j] - x[n + j] for j in range(n))
    return val, point
