"""Finite-dimensional structure-constant algebras with involution.

Covers tensor products of quaternion algebras with involution, split-case
adjoint-form extraction, Clifford algebras of small quadratic forms, and the
first three cohomological-style invariants of an algebra with orthogonal
involution (degree parity, discriminant, Clifford class pair).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg, quat
from .arith import (
    BrauerClass,
    brauer_class_of_symbol,
    rat,
    rat_str,
    square_class,
)
from .linalg import Matrix, Vector
from .qform import QuadraticForm
from .quat import OrthogonalInvolution, QuaternionAlgebra, QuaternionElement

FULL_VALIDATION_DIM = 16
SAMPLED_CHECKS = 2000


class AlgebraError(ValueError):
    pass


class UncomputableInvariant(RuntimeError):
    """The requested invariant has no implemented route for this algebra."""


# ---------------------------------------------------------------------------
# structure-constant algebras
# ---------------------------------------------------------------------------


class StructureAlgebra:
    """An associative unital algebra given by structure constants over Q.

    ``table[i][j]`` is a sparse map {k: c} meaning e_i e_j = sum c e_k.
    Associativity and the unit law are checked at construction (exhaustively
    up to dimension 16, on a deterministic sample beyond).
    """

    __slots__ = ("dim", "labels", "table", "unit")

    def __init__(self, labels, table, unit, validate: bool = True):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.table = tuple(
            tuple({k: Fraction(c) for k, c in cell.items() if c != 0} for cell in row)
            for row in table
        )
        self.unit = linalg.vector(unit)
        if validate:
            self._validate()

    # -- basic arithmetic ---------------------------------------------------

    def basis_vector(self, i: int) -> Vector:
        return tuple(
            Fraction(1) if t == i else Fraction(0) for t in range(self.dim)
        )

    def scalar(self, c) -> Vector:
        c = rat(c)
        return tuple(c * u for u in self.unit)

    def mul(self, x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
        out = [Fraction(0)] * self.dim
        for i, xi in enumerate(x):
            if xi == 0:
                continue
            row = self.table[i]
            for j, yj in enumerate(y):
                if yj == 0:
                    continue
                f = xi * yj
                for k, c in row[j].items():
                    out[k] += f * c
        return tuple(out)

    def regular_matrix(self, x: Sequence[Fraction]) -> Matrix:
        """Matrix of left multiplication by x."""
        cols = [self.mul(x, self.basis_vector(j)) for j in range(self.dim)]
        return linalg.transpose(linalg.matrix(cols))

    def degree(self) -> int:
        deg = math.isqrt(self.dim)
        if deg * deg != self.dim:
            raise AlgebraError("dimension is not a perfect square")
        return deg

    def trd(self, x: Sequence[Fraction]) -> Fraction:
        """Reduced trace: trace of the regular representation over the degree."""
        m = self.regular_matrix(x)
        return sum(m[i][i] for i in range(self.dim)) / self.degree()

    def reduced_char_poly(self, x: Sequence[Fraction]) -> list[Fraction]:
        """Monic polynomial p of degree deg with p^deg the regular char poly."""
        cp = linalg.charpoly(self.regular_matrix(x))
        return linalg.poly_nth_root(cp, self.degree())

    def nrd(self, x: Sequence[Fraction]) -> Fraction:
        p = self.reduced_char_poly(x)
        deg = self.degree()
        return p[-1] if deg % 2 == 0 else -p[-1]

    def is_invertible(self, x: Sequence[Fraction]) -> bool:
        return linalg.det(self.regular_matrix(x)) != 0

    def inverse(self, x: Sequence[Fraction]) -> Vector:
        sol = linalg.solve(self.regular_matrix(x), self.unit)
        if sol is None:
            raise ZeroDivisionError("element is not invertible")
        return sol

    # -- validation ---------------------------------------------------------

    def _validate(self):
        for j in range(self.dim):
            ej = self.basis_vector(j)
            if self.mul(self.unit, ej) != ej or self.mul(ej, self.unit) != ej:
                raise AlgebraError("unit law fails")
        if self.dim <= FULL_VALIDATION_DIM:
            triples = (
                (i, j, k)
                for i in range(self.dim)
                for j in range(self.dim)
                for k in range(self.dim)
            )
        else:
            rng = random.Random(0xA55)
            triples = (
                tuple(rng.randrange(self.dim) for _ in range(3))
                for _ in range(SAMPLED_CHECKS)
            )
        for i, j, k in triples:
            left = self.mul(self._basis_product(i, j), self.basis_vector(k))
            right = self.mul(self.basis_vector(i), self._basis_product(j, k))
            if left != right:
                raise AlgebraError(f"associativity fails on basis triple {(i, j, k)}")

    def _basis_product(self, i: int, j: int) -> Vector:
        out = [Fraction(0)] * self.dim
        for k, c in self.table[i][j].items():
            out[k] = c
        return tuple(out)


def quaternion_structure(q: QuaternionAlgebra) -> StructureAlgebra:
    """The 4-dimensional structure algebra of a quaternion symbol."""
    basis = q.basis()
    table = []
    for x in basis:
        row = []
        for y in basis:
            prod = (x * y).coords
            row.append({k: c for k, c in enumerate(prod) if c != 0})
        table.append(row)
    return StructureAlgebra(["1", "i", "j", "k"], table, [1, 0, 0, 0])


def matrix_structure(n: int) -> StructureAlgebra:
    """The matrix algebra M_n(Q) on the basis of matrix units."""
    labels = [f"E{r}{c}" for r in range(n) for c in range(n)]
    idx = lambda r, c: r * n + c
    table = []
    for r in range(n):
        for c in range(n):
            row = []
            for s in range(n):
                for d in range(n):
                    row.append({idx(r, d): Fraction(1)} if c == s else {})
            table.append(row)
    unit = [Fraction(1) if r == c else Fraction(0) for r in range(n) for c in range(n)]
    return StructureAlgebra(labels, table, unit)


def tensor_structure(a: StructureAlgebra, b: StructureAlgebra) -> StructureAlgebra:
    """Tensor product algebra; structure constants are Kronecker products."""
    labels = [f"{la}*{lb}" for la in a.labels for lb in b.labels]
    dim_b = b.dim
    table = []
    for ia in range(a.dim):
        for ib in range(b.dim):
            row = []
            for ja in range(a.dim):
                cell_a = a.table[ia][ja]
                for jb in range(b.dim):
                    cell_b = b.table[ib][jb]
                    row.append(
                        {
                            ka * dim_b + kb: ca * cb
                            for ka, ca in cell_a.items()
                            for kb, cb in cell_b.items()
                        }
                    )
            table.append(row)
    unit = tuple(x * y for x in a.unit for y in b.unit)
    return StructureAlgebra(labels, table, unit)


# ---------------------------------------------------------------------------
# involutions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Involution:
    """A linear anti-automorphism of order 2, stored as its coordinate matrix.

    The type tag is cross-checked against the dimension of the fixed space:
    an orthogonal involution on a degree-n algebra fixes n(n+1)/2 dimensions,
    a symplectic one n(n-1)/2.
    """

    algebra: StructureAlgebra
    matrix: Matrix
    type_tag: str

    def __post_init__(self):
        alg, m = self.algebra, self.matrix
        n = alg.dim
        for i in range(n):
            e = self.algebra.basis_vector(i)
            if self.apply(self.apply(e)) != e:
                raise AlgebraError("involution must square to the identity")
        if self.apply(alg.unit) != alg.unit:
            raise AlgebraError("involution must fix the unit")
        if n <= FULL_VALIDATION_DIM:
            pairs = ((i, j) for i in range(n) for j in range(n))
        else:
            rng = random.Random(0x515)
            pairs = (
                (rng.randrange(n), rng.randrange(n)) for _ in range(SAMPLED_CHECKS)
            )
        for i, j in pairs:
            lhs = self.apply(alg._basis_product(i, j))
            rhs = alg.mul(self.apply(alg.basis_vector(j)), self.apply(alg.basis_vector(i)))
            if lhs != rhs:
                raise AlgebraError("involution is not an anti-automorphism")
        deg = alg.degree()
        sym = self.symmetric_dimension()
        expected = {"orthogonal": deg * (deg + 1) // 2, "symplectic": deg * (deg - 1) // 2}
        if self.type_tag not in expected:
            raise AlgebraError(f"unknown involution type {self.type_tag!r}")
        if sym != expected[self.type_tag]:
            raise AlgebraError(
                f"symmetric dimension {sym} contradicts type {self.type_tag}"
            )

    def apply(self, x: Sequence[Fraction]) -> Vector:
        # involution matrices arising here are sparse (signed scaled
        # permutations for the most part); accumulate nonzero columns only
        cols = getattr(self, "_sparse_cols", None)
        if cols is None:
            n = self.algebra.dim
            cols = tuple(
                tuple(
                    (i, self.matrix[i][j])
                    for i in range(n)
                    if self.matrix[i][j] != 0
                )
                for j in range(n)
            )
            object.__setattr__(self, "_sparse_cols", cols)
        out = [Fraction(0)] * self.algebra.dim
        for j, xj in enumerate(x):
            if xj == 0:
                continue
            for i, mij in cols[j]:
                out[i] += mij * xj
        return tuple(out)

    def symmetric_dimension(self) -> int:
        # the matrix squares to the identity, so its +1-eigenspace has
        # dimension (n + trace)/2
        n = self.algebra.dim
        tr = sum(self.matrix[i][i] for i in range(n))
        num = Fraction(n) + tr
        if num.denominator != 1 or num.numerator % 2:
            raise AlgebraError("involution trace is not consistent with order 2")
        return num.numerator // 2


FactorInvolution = Union[str, QuaternionElement, OrthogonalInvolution]


@dataclass(frozen=True)
class InvolutionAlgebra:
    """A structure algebra with involution, with optional tensor provenance.

    ``factors`` records quaternion factors (symbol, pure twisting element or
    None for the canonical involution); ``twist`` an optional further global
    twisting element u with sigma = Int(u) o sigma_base. Provenance keeps the
    structural invariant routes available without reconstructing anything.
    """

    algebra: StructureAlgebra
    sigma: Involution
    factors: Optional[tuple[tuple[QuaternionAlgebra, Optional[QuaternionElement]], ...]] = None
    twist: Optional[Vector] = None
    matrix_iso: Optional["AlgebraIso"] = None

    @property
    def degree(self) -> int:
        return self.algebra.degree()


def from_quaternion(q: QuaternionAlgebra, inv: FactorInvolution) -> InvolutionAlgebra:
    """Quaternion algebra as a structure algebra with gamma or Int(s) o gamma."""
    alg = quaternion_structure(q)
    if isinstance(inv, str):
        if inv != "canonical":
            raise AlgebraError(f"unknown involution descriptor {inv!r}")
        m = linalg.matrix(
            [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
        )
        sigma = Involution(alg, m, "symplectic")
        return InvolutionAlgebra(alg, sigma, ((q, None),))
    if isinstance(inv, QuaternionElement):
        inv = OrthogonalInvolution(inv)
    if not isinstance(inv, OrthogonalInvolution) or inv.s.algebra != q:
        raise AlgebraError("invalid involution descriptor")
    sigma = Involution(alg, inv.matrix(), "orthogonal")
    return InvolutionAlgebra(alg, sigma, ((q, inv.s),))


_TYPE_PRODUCT = {
    ("orthogonal", "orthogonal"): "orthogonal",
    ("symplectic", "symplectic"): "orthogonal",
    ("orthogonal", "symplectic"): "symplectic",
    ("symplectic", "orthogonal"): "symplectic",
}


def tensor(x: InvolutionAlgebra, y: InvolutionAlgebra) -> InvolutionAlgebra:
    """Tensor product of algebras with involution."""
    alg = tensor_structure(x.algebra, y.algebra)
    m = linalg.kron(x.sigma.matrix, y.sigma.matrix)
    tag = _TYPE_PRODUCT[(x.sigma.type_tag, y.sigma.type_tag)]
    sigma = Involution(alg, m, tag)
    factors = None
    if x.factors is not None and y.factors is not None:
        factors = x.factors + y.factors
    twist = None
    if x.twist is not None or y.twist is not None:
        tx = x.twist if x.twist is not None else x.algebra.unit
        ty = y.twist if y.twist is not None else y.algebra.unit
        twist = tuple(a * b for a in tx for b in ty)
    return InvolutionAlgebra(alg, sigma, factors, twist)


def twist_involution(a: InvolutionAlgebra, u: Sequence[Fraction]) -> InvolutionAlgebra:
    """Replace sigma by Int(u) o sigma for a sigma-symmetric invertible u."""
    u = linalg.vector(u)
    alg = a.algebra
    if a.sigma.apply(u) != u:
        raise AlgebraError("twisting element must be symmetric under sigma")
    u_inv = alg.inverse(u)
    cols = [alg.mul(alg.mul(u, a.sigma.apply(alg.basis_vector(t))), u_inv) for t in range(alg.dim)]
    m = linalg.transpose(linalg.matrix(cols))
    sigma = Involution(alg, m, a.sigma.type_tag)
    prev = a.twist if a.twist is not None else alg.unit
    return InvolutionAlgebra(alg, sigma, a.factors, alg.mul(u, prev), a.matrix_iso)


# ---------------------------------------------------------------------------
# explicit isomorphisms with matrix algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AlgebraIso:
    """An isomorphism onto M_n(Q): the image matrix of every basis element."""

    degree: int
    images: tuple[Matrix, ...]

    def apply(self, x: Sequence[Fraction]) -> Matrix:
        n = self.degree
        out = [[Fraction(0)] * n for _ in range(n)]
        for c, m in zip(x, self.images):
            if c != 0:
                for r in range(n):
                    for s in range(n):
                        out[r][s] += c * m[r][s]
        return tuple(tuple(row) for row in out)


def split_isomorphism(a: InvolutionAlgebra) -> AlgebraIso:
    """Isomorphism with M_{2^r}(Q) assembled from split quaternion factors."""
    if a.factors is None:
        raise AlgebraError("no tensor provenance to build a splitting from")
    maps = []
    for q, _ in a.factors:
        if not quat.is_split(q):
            raise AlgebraError(f"factor ({rat_str(q.a)},{rat_str(q.b)}) is not split")
        maps.append(quat.splitting_isomorphism(q))
    degree = 2 ** len(maps)
    images = []
    for combo in _index_product(len(maps)):
        m = None
        for sm, t in zip(maps, combo):
            factor = sm.images[t]
            m = factor if m is None else linalg.kron(m, factor)
        images.append(m)
    return AlgebraIso(degree, tuple(images))


def _index_product(r: int):
    import itertools

    return itertools.product(range(4), repeat=r)


def twisted_conjugation_iso(q: QuaternionAlgebra) -> AlgebraIso:
    """Isomorphism (Q, gamma) tensor (Q, gamma) -> End(Q) = M_4(Q).

    x tensor y acts on Q by d -> x d gamma(y); works whether or not Q splits.
    """
    basis = q.basis()
    images = []
    for x in basis:
        for y in basis:
            gy = quat.canonical_involution(y)
            cols = [(x * d * gy).coords for d in basis]
            images.append(linalg.transpose(linalg.matrix(cols)))
    return AlgebraIso(4, tuple(images))


def adjoint_gram(
    a: InvolutionAlgebra,
    iso: AlgebraIso,
    generators: Optional[Sequence[Vector]] = None,
) -> QuadraticForm:
    """The quadratic form q with ad_q = sigma under the given splitting.

    Solves G . iso(sigma(x)) = iso(x)^T . G on a generating set; the solution
    space must be 1-dimensional and symmetric (an antisymmetric solution
    signals a symplectic involution). The scalar ambiguity is fixed by making
    the Gram matrix integral, primitive, with positive first nonzero entry.
    """
    n = iso.degree
    alg = a.algebra
    if generators is None:
        if alg.dim > FULL_VALIDATION_DIM and a.factors is not None:
            generators = _provenance_generators(a)
        else:
            generators = [alg.basis_vector(t) for t in range(alg.dim)]
    rows = []
    for x in generators:
        m = iso.apply(x)
        s = iso.apply(a.sigma.apply(x))
        # unknowns G[p][q] flattened as p*n+q
        for r in range(n):
            for c in range(n):
                row = [Fraction(0)] * (n * n)
                for k in range(n):
                    row[r * n + k] += s[k][c]
                    row[k * n + c] -= m[k][r]
                rows.append(row)
    kernel = linalg.nullspace(linalg.matrix(rows))
    if len(kernel) != 1:
        raise AlgebraError(
            f"adjoint Gram solution space has dimension {len(kernel)} (expected 1)"
        )
    flat = kernel[0]
    g = [[flat[r * n + c] for c in range(n)] for r in range(n)]
    if any(g[r][c] != g[c][r] for r in range(n) for c in range(n)):
        if all(g[r][c] == -g[c][r] for r in range(n) for c in range(n)):
            raise AlgebraError("adjoint form is alternating: involution is symplectic")
        raise AlgebraError("adjoint Gram is neither symmetric nor alternating")
    flat_int = linalg.clear_denominators(flat)
    g = [[Fraction(flat_int[r * n + c]) for c in range(n)] for r in range(n)]
    return QuadraticForm(g)


def _provenance_generators(a: InvolutionAlgebra) -> list[Vector]:
    """Images of each factor's i and j inside the tensor basis."""
    dims = [4] * len(a.factors)
    gens = []
    for t in range(len(a.factors)):
        for unit_index in (1, 2):  # i and j of factor t
            idx = 0
            for s, d in enumerate(dims):
                idx *= d
                idx += unit_index if s == t else 0
            gens.append(a.algebra.basis_vector(idx))
    gens.append(a.algebra.unit)
    return gens


def adjoint_algebra(q: QuadraticForm) -> tuple[InvolutionAlgebra, AlgebraIso]:
    """End(V) with the adjoint involution of the given form, plus its identity iso."""
    n = q.dim
    alg = matrix_structure(n)
    g = q.gram
    g_inv = linalg.inverse(g)
    cols = []
    for r in range(n):
        for c in range(n):
            e = tuple(
                tuple(Fraction(1) if (i, j) == (r, c) else Fraction(0) for j in range(n))
                for i in range(n)
            )
            img = linalg.mat_mul(g_inv, linalg.mat_mul(linalg.transpose(e), g))
            cols.append(tuple(img[i][j] for i in range(n) for j in range(n)))
    m = linalg.transpose(linalg.matrix(cols))
    sigma = Involution(alg, m, "orthogonal")
    images = []
    for r in range(n):
        for c in range(n):
            images.append(
                tuple(
                    tuple(Fraction(1) if (i, j) == (r, c) else Fraction(0) for j in range(n))
                    for i in range(n)
                )
            )
    iso = AlgebraIso(n, tuple(images))
    return InvolutionAlgebra(alg, sigma, matrix_iso=iso), iso


# ---------------------------------------------------------------------------
# invariants of (A, sigma)
# ---------------------------------------------------------------------------


def algebra_class(a: InvolutionAlgebra) -> BrauerClass:
    """Brauer class of the underlying algebra, from its tensor provenance."""
    if a.factors is None:
        raise UncomputableInvariant("no provenance to read the algebra class from")
    cls = BrauerClass.trivial()
    for q, _ in a.factors:
        cls = cls + brauer_class_of_symbol(q.a, q.b)
    return cls


def e0(a: InvolutionAlgebra) -> int:
    """Degree of the algebra modulo 2."""
    if a.sigma.type_tag != "orthogonal":
        raise AlgebraError("invariants are defined for orthogonal involutions")
    return a.degree % 2


def e1(a: InvolutionAlgebra) -> int:
    """Discriminant of the involution as a squarefree integer.

    Routes: a quaternion twisted involution Int(s) o gamma has discriminant
    s^2; a twisted tensor of quaternions with canonical involutions has the
    reduced norm of the twisting element; a split algebra falls back to the
    discriminant of the adjoint form.
    """
    if e0(a) != 0:
        raise AlgebraError("discriminant is undefined in odd degree")
    if a.factors is not None:
        if len(a.factors) == 1:
            q, s = a.factors[0]
            base = square_class(-quat.nrd(s)) if s is not None else None
            if base is None:
                raise AlgebraError("canonical involution is symplectic")
            if a.twist is not None:
                raise UncomputableInvariant("twisted quaternion involution")
            return base
        # r >= 2: the untwisted decomposable involution has trivial discriminant
        if a.twist is None:
            return 1
        return square_class(a.algebra.nrd(a.twist))
    return square_class(adjoint_form(a).invariants().disc)


def adjoint_form(a: InvolutionAlgebra) -> QuadraticForm:
    """Adjoint quadratic form of a split algebra with orthogonal involution."""
    iso = a.matrix_iso if a.matrix_iso is not None else split_isomorphism(a)
    return adjoint_gram(a, iso)


@dataclass(frozen=True)
class E2Pair:
    """The Clifford-class invariant: the unordered pair {beta, beta + [A]}.

    Triviality in the quotient by {0, [A]} is membership of the trivial class
    in the pair.
    """

    classes: frozenset[BrauerClass]
    algebra_class: BrauerClass

    @property
    def is_trivial(self) -> bool:
        return BrauerClass.trivial() in self.classes

    @staticmethod
    def of(beta: BrauerClass, alg_class: BrauerClass) -> "E2Pair":
        return E2Pair(frozenset({beta, beta + alg_class}), alg_class)


def e2(a: InvolutionAlgebra) -> E2Pair:
    """Clifford invariant pair of an even-degree involution of trivial discriminant.

    Computed from the adjoint form when the algebra splits; for non-split
    tensor products of quaternions the known component classes are used
    (degree 4 with canonical factors, and degree 8/16 decomposable cases,
    where one component class is trivial).
    """
    if e0(a) != 0 or e1(a) != 1:
        raise AlgebraError("Clifford invariant needs trivial e0 and e1")
    if a.matrix_iso is not None:
        beta = adjoint_form(a).invariants().clifford
        return E2Pair.of(beta, BrauerClass.trivial())
    if a.factors is not None and all(quat.is_split(q) for q, _ in a.factors):
        beta = adjoint_form(a).invariants().clifford
        return E2Pair.of(beta, BrauerClass.trivial())
    if a.factors is None:
        raise UncomputableInvariant("no route to the Clifford classes")
    alg_class = algebra_class(a)
    r = len(a.factors)
    if a.twist is not None:
        raise UncomputableInvariant("twisted non-split algebra")
    if r == 2:
        if any(s is not None for _, s in a.factors):
            raise UncomputableInvariant("non-split degree 4 with orthogonal factors")
        # Clifford components of the canonical pair are the factors themselves
        (q1, _), (q2, _) = a.factors
        c1 = brauer_class_of_symbol(q1.a, q1.b)
        c2 = brauer_class_of_symbol(q2.a, q2.b)
        if c1 + c2 != alg_class:
            raise AssertionError("component classes must sum to the algebra class")
        return E2Pair(frozenset({c1, c2}), alg_class)
    if r == 3:
        # a decomposable degree-8 involution has one split Clifford component
        return E2Pair.of(BrauerClass.trivial(), alg_class)
    if r == 4 and all(s is None for _, s in a.factors):
        # fourfold canonical products have trivial Clifford invariant
        return E2Pair.of(BrauerClass.trivial(), alg_class)
    raise UncomputableInvariant(f"no Clifford route for {r} factors")


def is_pfister_involution(a: InvolutionAlgebra) -> bool:
    """Degree 2, 4 and 8 recognition through e1 and e2."""
    if a.sigma.type_tag != "orthogonal":
        raise AlgebraError("only orthogonal involutions are considered")
    deg = a.degree
    if deg == 2:
        return True
    if deg == 4:
        return e1(a) == 1
    if deg == 8:
        if e1(a) != 1:
            return False
        return e2(a).is_trivial
    raise AlgebraError(f"unsupported degree {deg}")


# ---------------------------------------------------------------------------
# Clifford algebras of small quadratic forms
# ---------------------------------------------------------------------------

MAX_CLIFFORD_DIM = 6


class CliffordAlgebra(StructureAlgebra):
    """Clifford algebra of a diagonalized form, basis indexed by subsets.

    Basis element with bitmask S is the ordered product of the generators in
    S; the grading by parity of |S| gives the even part.
    """

    __slots__ = ("generators_squares",)

    def __init__(self, diag: Sequence[Fraction]):
        n = len(diag)
        if n > MAX_CLIFFORD_DIM:
            raise AlgebraError(f"Clifford construction capped at dimension {MAX_CLIFFORD_DIM}")
        diag = [rat(d) for d in diag]
        dim = 1 << n
        labels = []
        for mask in range(dim):
            name = "".join(f"e{t+1}" for t in range(n) if mask >> t & 1)
            labels.append(name or "1")
        table = []
        for s_mask in range(dim):
            row = []
            for t_mask in range(dim):
                sign = 1
                coeff = Fraction(1)
                # move each generator of t past the tail of s, squaring overlaps
                acc = s_mask
                for t in range(n):
                    if not t_mask >> t & 1:
                        continue
                    higher = acc >> (t + 1)
                    sign *= -1 if bin(higher).count("1") % 2 else 1
                    if acc >> t & 1:
                        coeff *= diag[t]
                        acc &= ~(1 << t)
                    else:
                        acc |= 1 << t
                row.append({acc: sign * coeff})
            table.append(row)
        unit = [Fraction(1) if m == 0 else Fraction(0) for m in range(dim)]
        super().__init__(labels, table, unit)
        self.generators_squares = tuple(diag)

    def generator(self, t: int) -> Vector:
        return self.basis_vector(1 << t)

    def even_part_indices(self) -> list[int]:
        return [m for m in range(self.dim) if bin(m).count("1") % 2 == 0]


def clifford_algebra(q: QuadraticForm) -> CliffordAlgebra:
    """Structure-constant Clifford algebra on an orthogonal basis of q."""
    return CliffordAlgebra(q.diagonal())


def _scalar_of(alg: StructureAlgebra, x: Vector) -> Fraction:
    """The scalar c with x = c.1; raises if x is not central-scalar."""
    c = None
    for t, (xt, ut) in enumerate(zip(x, alg.unit)):
        if ut != 0:
            c = xt / ut
            break
    assert c is not None
    if x != alg.scalar(c):
        raise AlgebraError("element is not a scalar")
    return c


def _quaternion_pair_class(alg: StructureAlgebra, u: Vector, v: Vector) -> BrauerClass:
    """Class of the quaternion subalgebra generated by anticommuting u, v."""
    uu = _scalar_of(alg, alg.mul(u, u))
    vv = _scalar_of(alg, alg.mul(v, v))
    anti = linalg.vec_add(alg.mul(u, v), alg.mul(v, u))
    if not linalg.is_zero_vector(anti):
        raise AlgebraError("generators do not anticommute")
    return brauer_class_of_symbol(uu, vv)


def clifford_brauer_class(q: QuadraticForm) -> BrauerClass:
    """Brauer class of C(q) (even dim) or of the even part (odd dim).

    Computed inside the structure-constant algebra by exhibiting explicit
    anticommuting generators of quaternion (sub)algebras and reading off
    their scalar squares; supports dimensions 1 to 5.
    """
    n = q.dim
    if n > 5:
        raise AlgebraError("structural Clifford class implemented up to dimension 5")
    alg = clifford_algebra(q)
    if n == 1:
        return BrauerClass.trivial()
    e = [alg.generator(t) for t in range(n)]
    if n == 2:
        return _quaternion_pair_class(alg, e[0], e[1])
    if n == 3:
        u = alg.mul(e[0], e[1])
        v = alg.mul(e[0], e[2])
        return _quaternion_pair_class(alg, u, v)
    if n == 4:
        return _even_dim4_class(alg, e)
    # n == 5: the even part is generated by f_t = e_1 e_{t+1}, which satisfy
    # the relations of a 4-dimensional Clifford algebra
    f = [alg.mul(e[0], e[t]) for t in range(1, 5)]
    return _even_dim4_class(alg, f)


def _even_dim4_class(alg: StructureAlgebra, e: list[Vector]) -> BrauerClass:
    """Class of the full Clifford algebra on 4 anticommuting generators.

    (e1, e2) generate a quaternion subalgebra; its centralizer is generated
    by e1 e2 e3 and e1 e2 e4, which commute with the first pair and
    anticommute with each other.
    """
    first = _quaternion_pair_class(alg, e[0], e[1])
    u = alg.mul(alg.mul(e[0], e[1]), e[2])
    v = alg.mul(alg.mul(e[0], e[1]), e[3])
    for g in (e[0], e[1]):
        for w in (u, v):
            if alg.mul(g, w) != alg.mul(w, g):
                raise AlgebraError("centralizer generators fail to commute")
    second = _quaternion_pair_class(alg, u, v)
    return first + second
