"""Reduced and relative simplicial cohomology with exact ranks.

Complexes are finite and abstract: a set of faces (frozensets of vertices)
closed under taking subsets. A nonvoid complex always contains the empty
face; the void complex contains no faces at all and has zero cohomology in
every degree, while the complex {()} has one unit of cohomology in degree -1.
Dimensions are computed over Q (fraction-free integer elimination) or over
GF(p) when a positive characteristic is requested.
"""

from __future__ import annotations

from itertools import combinations

from .lattice import rank as qrank


class SimplicialComplex:
    """Immutable abstract simplicial complex on hashable vertices."""

    __slots__ = ("faces",)

    def __init__(self, faces):
        self.faces = frozenset(frozenset(f) for f in faces)
        for f in self.faces:
            for v in f:
                if not self.faces.issuperset({f - {v}}):
                    raise ValueError("face set is not downward closed")

    @classmethod
    def from_facets(cls, facets):
        """Downward closure of the given faces; no facets gives the void complex."""
        faces = set()
        for f in facets:
            f = tuple(sorted(set(f)))
            for k in range(len(f) + 1):
                faces.update(frozenset(c) for c in combinations(f, k))
        return cls(faces)

    @classmethod
    def void(cls):
        return cls(())

    @classmethod
    def empty(cls):
        """The complex whose only face is the empty face."""
        return cls((frozenset(),))

    @property
    def is_void(self):
        return not self.faces

    @property
    def vertices(self):
        out = set()
        for f in self.faces:
            out.update(f)
        return frozenset(out)

    @property
    def dim(self):
        """Dimension: -1 for {()}, None for the void complex."""
        if self.is_void:
            return None
        return max(len(f) for f in self.faces) - 1

    def full_subcomplex(self, verts):
        """All faces contained in the given vertex set."""
        verts = frozenset(verts)
        return SimplicialComplex(f for f in self.faces if f <= verts)

    def has_face(self, f):
        return frozenset(f) in self.faces

    def is_subcomplex_of(self, other):
        return self.faces <= other.faces

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.faces == other.faces

    def __hash__(self):
        return hash(self.faces)

    def __repr__(self):
        fs = sorted(tuple(sorted(f)) for f in self.faces)
        return f"SimplicialComplex({fs})"


def _gf_rank(rows, p):
    """Rank of an integer matrix over GF(p)."""
    M = [[a % p for a in row] for row in rows]
    if not M or not M[0]:
        return 0
    m, n = len(M), len(M[0])
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, m) if M[i][col]), None)
        if piv is None:
            continue
        M[r], M[piv] = M[piv], M[r]
        inv = pow(M[r][col], p - 2, p)
        M[r] = [(a * inv) % p for a in M[r]]
        for i in range(m):
            if i != r and M[i][col]:
                f = M[i][col]
                M[i] = [(a - f * b) % p for a, b in zip(M[i], M[r])]
        r += 1
        if r == m:
            break
    return r


def _matrix_rank(rows, char):
    if not rows or not rows[0]:
        return 0
    if char == 0:
        return qrank(rows)
    return _gf_rank(rows, char)


def _coboundary_matrix(lower, upper, ambient):
    """Matrix of the coboundary from span(lower) to span(upper).

    Faces in `ambient` but in neither list still receive coboundary terms;
    those terms are dropped, which is exactly the quotient differential of a
    relative cochain complex.
    """
    index = {f: i for i, f in enumerate(upper)}
    rows = []
    for f in lower:
        row = [0] * len(upper)
        fs = sorted(f)
        for v in ambient - f:
            g = f | {v}
            j = index.get(g)
            if j is None:
                continue
            pos = sum(1 for w in fs if w < v)
            row[j] = (-1) ** pos
        rows.append(row)
    return rows


def relative_cohomology_dims(K, K0, char=0):
    """Reduced relative cohomology dimensions of the pair (K, K0).

    K0 must be a subcomplex of K. Returns a dict {degree: dim} with only the
    nonzero entries; degrees run from -1 (possible only when K0 is void and K
    is not) up to dim K.
    """
    if not K0.is_subcomplex_of(K):
        raise ValueError("K0 is not a subcomplex of K")
    rel = K.faces - K0.faces
    if not rel:
        return {}
    ambient = K.vertices
    by_deg = {}
    for f in rel:
        by_deg.setdefault(len(f) - 1, []).append(f)
    for fs in by_deg.values():
        fs.sort(key=lambda f: tuple(sorted(f)))
    degs = sorted(by_deg)
    dims = {}
    ranks = {}
    for k in degs:
        upper = by_deg.get(k + 1, [])
        mat = _coboundary_matrix(by_deg[k], upper, ambient)
        ranks[k] = _matrix_rank(mat, char) if upper else 0
    for k in degs:
        n_k = len(by_deg[k])
        h = n_k - ranks.get(k, 0) - ranks.get(k - 1, 0)
        if h:
            dims[k] = h
    return dims


def reduced_cohomology_dims(K, char=0):
    """Reduced cohomology of a complex (relative to the void complex)."""
    return relative_cohomology_dims(K, SimplicialComplex.void(), char=char)


def euler_characteristic_reduced(K, K0=None):
    """Alternating face-count sum; equals the alternating cohomology sum."""
    faces = K.faces if K0 is None else K.faces - K0.faces
    return sum((-1) ** (len(f) - 1) for f in faces)
