"""Divisor class groups of toric varieties.

The class group is presented as Z^n modulo the row lattice of the ray
matrix; classes are kept in a normal form (free coordinates plus reduced
torsion coordinates). When the fan declares a class basis, free coordinates
are expressed in that basis.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError
from .lattice import (
    cokernel_presentation,
    hermite_normal_form,
    integer_kernel,
    matvec,
    rank,
    solve_integer,
    solve_rational,
    unimodular_inverse,
)


@dataclass(frozen=True)
class DivisorClass:
    """Normal form of a divisor class: free coordinates in the group's
    basis (declared basis when the fan has one) and reduced torsion part."""

    free: tuple
    torsion: tuple = ()

    def __str__(self):
        if not self.torsion:
            return str(tuple(self.free))
        return f"{tuple(self.free)}+t{tuple(self.torsion)}"


class ClassGroup:
    """Class group of a fan whose rays span the ambient lattice."""

    def __init__(self, fan):
        self.fan = fan
        L = [list(r) for r in fan.rays]
        if rank(L) != fan.dim:
            raise PreconditionError("rays do not span the lattice rationally")
        self._L = L
        self.group = cokernel_presentation(L)
        self.free_rank = self.group.free_rank
        self.invariants = self.group.invariants
        self._basis = None
        self._basis_inv = None
        if fan.class_basis is not None:
            if self.invariants:
                raise PreconditionError(
                    "declared class basis requires a torsion-free class group"
                )
            cols = []
            for b in fan.class_basis:
                free, tors = self.group.project(list(b))
                if any(tors):
                    raise PreconditionError("declared basis vector has torsion")
                cols.append(list(free))
            if len(cols) != self.free_rank:
                raise PreconditionError("declared basis has the wrong size")
            B = [[cols[j][i] for j in range(len(cols))] for i in range(self.free_rank)]
            inv = unimodular_inverse(B)
            if inv is None:
                raise PreconditionError("declared basis is not a lattice basis")
            self._basis = B
            self._basis_inv = inv

    # -- normal form -------------------------------------------------------

    def project(self, coeffs):
        """Class of a divisor given by its ray coefficients."""
        coeffs = list(coeffs)
        if len(coeffs) != self.fan.n_rays:
            raise PreconditionError(
                f"expected {self.fan.n_rays} ray coefficients, got {len(coeffs)}"
            )
        free, tors = self.group.project(coeffs)
        if self._basis_inv is not None:
            free = matvec(self._basis_inv, list(free))
        return DivisorClass(tuple(free), tuple(tors))

    def make_class(self, free, torsion=()):
        free = tuple(int(x) for x in free)
        if len(free) != self.free_rank:
            raise PreconditionError("wrong number of free coordinates")
        tors = tuple(
            int(t) % d for t, d in zip(torsion, self.invariants)
        ) if torsion else tuple(0 for _ in self.invariants)
        if torsion and len(torsion) != len(self.invariants):
            raise PreconditionError("wrong number of torsion coordinates")
        return DivisorClass(free, tors)

    def lift(self, cls):
        """A divisor (ray coefficient vector) representing the class."""
        free = list(cls.free)
        if self._basis is not None:
            free = matvec(self._basis, free)
        return self.group.lift(free, list(cls.torsion))

    def coerce(self, value):
        """Accept either a DivisorClass or a ray coefficient vector and
        return (class, representative coefficients)."""
        if isinstance(value, DivisorClass):
            return value, self.lift(value)
        coeffs = [int(x) for x in value]
        return self.project(coeffs), coeffs

    # -- group operations --------------------------------------------------

    def zero(self):
        return DivisorClass(
            tuple(0 for _ in range(self.free_rank)),
            tuple(0 for _ in self.invariants),
        )

    def add(self, a, b):
        free = tuple(x + y for x, y in zip(a.free, b.free))
        tors = tuple(
            (x + y) % d for x, y, d in zip(a.torsion, b.torsion, self.invariants)
        )
        return DivisorClass(free, tors)

    def neg(self, a):
        free = tuple(-x for x in a.free)
        tors = tuple((-x) % d for x, d in zip(a.torsion, self.invariants))
        return DivisorClass(free, tors)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def scale(self, k, a):
        free = tuple(k * x for x in a.free)
        tors = tuple((k * x) % d for x, d in zip(a.torsion, self.invariants))
        return DivisorClass(free, tors)

    def iter_window(self, radius):
        """All classes with free coordinates in [-radius, radius], every
        torsion part included, in lexicographic order."""
        from itertools import product

        span = range(-radius, radius + 1)
        for free in product(span, repeat=self.free_rank):
            for tors in product(*(range(d) for d in self.invariants)):
                yield DivisorClass(tuple(free), tuple(tors))

    # -- distinguished classes ---------------------------------------------

    def gale_transform(self):
        """Classes of the prime invariant divisors, in ray order."""
        n = self.fan.n_rays
        out = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            out.append(self.project(e))
        return out

    def canonical_class(self):
        return self.project([-1] * self.fan.n_rays)

    # -- Cartier tests -------------------------------------------------------

    def q_cartier_witnesses(self, value):
        """Per-cone rational points m with <l_i, m> = c_i on the cone's rays,
        or None if some cone admits none."""
        _, coeffs = self.coerce(value)
        out = {}
        for cone in self.fan.max_cones:
            idx = sorted(cone)
            A = [list(self.fan.rays[i]) for i in idx]
            b = [coeffs[i] for i in idx]
            m = solve_rational(A, b)
            if m is None:
                return None
            out[frozenset(cone)] = tuple(m)
        return out

    def is_q_cartier(self, value):
        return self.q_cartier_witnesses(value) is not None

    def cartier_witnesses(self, value):
        """Like q_cartier_witnesses but with integral points m."""
        _, coeffs = self.coerce(value)
        out = {}
        for cone in self.fan.max_cones:
            idx = sorted(cone)
            A = [list(self.fan.rays[i]) for i in idx]
            b = [coeffs[i] for i in idx]
            m = solve_integer(A, b)
            if m is None:
                return None
            out[frozenset(cone)] = tuple(m)
        return out

    def is_cartier(self, value):
        return self.cartier_witnesses(value) is not None

    # -- Picard groups -------------------------------------------------------

    def picard_rational(self):
        """Basis (free coordinate vectors) of the rational Picard subspace."""
        r = self.free_rank
        gale = self.gale_transform()
        W = [[1 if i == j else 0 for j in range(r)] for i in range(r)]
        for cone in self.fan.max_cones:
            outside = [i for i in range(self.fan.n_rays) if i not in cone]
            G = [self._internal_free(gale[i]) for i in outside]
            if not G:
                G = [[0] * r]
            ann = integer_kernel([list(g) for g in G])
            if not ann:
                continue
            M = [[sum(f[k] * w[k] for k in range(r)) for w in W] for f in ann]
            U = integer_kernel(M)
            W = [
                [sum(u[t] * W[t][k] for t in range(len(W))) for k in range(r)]
                for u in U
            ]
            if not W:
                return []
        if self._basis_inv is not None:
            W = [matvec(self._basis_inv, list(w)) for w in W]
        return [tuple(w) for w in W]

    def _internal_free(self, cls):
        free = list(cls.free)
        if self._basis is not None:
            free = matvec(self._basis, free)
        return free

    def cartier_lattice(self):
        """Basis of the lattice of Cartier divisors inside Z^n."""
        n = self.fan.n_rays
        d = self.fan.dim
        cones = sorted(self.fan.max_cones, key=sorted)
        ncols = n + d * len(cones)
        rows = []
        for k, cone in enumerate(cones):
            for i in sorted(cone):
                row = [0] * ncols
                row[i] = 1
                for j in range(d):
                    row[n + d * k + j] = -self.fan.rays[i][j]
                rows.append(row)
        ker = integer_kernel(rows)
        cparts = [v[:n] for v in ker]
        H, _ = hermite_normal_form(cparts)
        return [row for row in H if any(row)]

    def picard_integral(self):
        """Generators of the Picard group inside the class group, plus the
        index [A : Pic] (None when infinite)."""
        basis = self.cartier_lattice()
        gens = []
        seen = set()
        for c in basis:
            cls = self.project(c)
            if cls == self.zero():
                continue
            if cls not in seen:
                seen.add(cls)
                gens.append(cls)
        M = [list(row) for row in self._L]
        stacked = [
            [M[i][j] for j in range(self.fan.dim)] + [c[i] for c in basis]
            for i in range(self.fan.n_rays)
        ]
        quotient = cokernel_presentation(stacked)
        if quotient.free_rank > 0:
            return gens, None
        return gens, quotient.torsion_order


def class_group(fan):
    return ClassGroup(fan)
