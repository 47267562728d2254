"""Exact dense linear algebra over Fraction.

Matrices are tuples of row tuples, vectors are tuples. Nothing here mutates
its inputs; intermediate work happens on lists.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vector(entries: Iterable) -> Vector:
    return tuple(Fraction(x) for x in entries)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vector(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(a: Matrix, v: Sequence[Fraction]) -> Vector:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(x - y for x, y in zip(u, v))


def vec_scale(c: Fraction, v: Sequence[Fraction]) -> Vector:
    return tuple(c * x for x in v)


def vec_dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    return sum(x * y for x, y in zip(u, v))


def is_zero_vector(v: Sequence[Fraction]) -> bool:
    return all(x == 0 for x in v)


def kron(a: Matrix, b: Matrix) -> Matrix:
    rows = []
    for ra in a:
        for rb in b:
            rows.append(tuple(x * y for x in ra for y in rb))
    return tuple(rows)


def det(a: Matrix) -> Fraction:
    n = len(a)
    m = [list(row) for row in a]
    result = ONE
    for k in range(n):
        pivot = None
        for i in range(k, n):
            if m[i][k] != 0:
                pivot = i
                break
        if pivot is None:
            return ZERO
        if pivot != k:
            m[k], m[pivot] = m[pivot], m[k]
            result = -result
        result *= m[k][k]
        inv = ONE / m[k][k]
        for i in range(k + 1, n):
            if m[i][k] != 0:
                f = m[i][k] * inv
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return result


def rref(rows: Iterable[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot column indices)."""
    m = [list(r) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def row_space_basis(rows: Iterable[Sequence[Fraction]]) -> list[Vector]:
    reduced, _ = rref(rows)
    return [tuple(r) for r in reduced]


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of the right kernel {x : a x = 0}."""
    if not a:
        return []
    ncols = len(a[0])
    reduced, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for r, pc in enumerate(pivots):
            v[pc] = -reduced[r][fc]
        basis.append(tuple(v))
    return basis


def solve(a: Matrix, b: Sequence[Fraction]) -> Optional[Vector]:
    """One solution of a x = b, or None if inconsistent."""
    if not a:
        return None
    ncols = len(a[0])
    aug = [list(row) + [bb] for row, bb in zip(a, b)]
    reduced, pivots = rref(aug)
    x = [ZERO] * ncols
    for r, pc in enumerate(pivots):
        if pc == ncols:
            return None  # pivot in the constant column
        x[pc] = reduced[r][ncols]
    return tuple(x)


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(row) + list(ident_row) for row, ident_row in zip(a, identity(n))]
    reduced, pivots = rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(row[n:]) for row in reduced)


def intersect_row_spaces(a_rows: Sequence[Vector], b_rows: Sequence[Vector]) -> list[Vector]:
    """Basis of span(a_rows) intersected with span(b_rows)."""
    if not a_rows or not b_rows:
        return []
    stacked = list(a_rows) + list(b_rows)
    relations = nullspace(transpose(matrix(stacked)))
    vecs = []
    na = len(a_rows)
    for rel in relations:
        v = zero_vector(len(a_rows[0]))
        for coeff, row in zip(rel[:na], a_rows):
            if coeff != 0:
                v = vec_add(v, vec_scale(coeff, row))
        if not is_zero_vector(v):
            vecs.append(v)
    return row_space_basis(vecs)


def charpoly(a: Matrix) -> list[Fraction]:
    """Coefficients [1, c1, ..., cn] of det(X I - a) via Faddeev-LeVerrier."""
    n = len(a)
    coeffs = [ONE]
    m = a
    for k in range(1, n + 1):
        ck = -sum(m[i][i] for i in range(n)) / k
        coeffs.append(ck)
        if k < n:
            shifted = tuple(
                tuple(m[i][j] + (ck if i == j else ZERO) for j in range(n))
                for i in range(n)
            )
            m = mat_mul(a, shifted)
    return coeffs


def poly_mul(p: Sequence[Fraction], q: Sequence[Fraction]) -> list[Fraction]:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        if x != 0:
            for j, y in enumerate(q):
                out[i + j] += x * y
    return out


def poly_nth_root(p: Sequence[Fraction], k: int) -> list[Fraction]:
    """Monic q with q^k == p (coefficients descending); raises if none exists."""
    p = [Fraction(x) for x in p]
    if p[0] != 1 or (len(p) - 1) % k:
        raise ValueError("not a perfect polynomial power")
    m = (len(p) - 1) // k
    q = [ONE] + [ZERO] * m
    for t in range(1, m + 1):
        cur = q[:1] + q[1:]
        power = [ONE]
        for _ in range(k):
            power = poly_mul(power, cur)
        q[t] = (p[t] - power[t]) / k
    power = [ONE]
    for _ in range(k):
        power = poly_mul(power, q)
    if power != p:
        raise ValueError("not a perfect polynomial power")
    return q


def primitive_kernel_basis(f: Sequence[int]) -> list[tuple[int, ...]]:
    """Basis of the full integer kernel lattice {x in Z^n : f . x = 0}.

    ``f`` must be a nonzero primitive integer vector. Built by the Bezout
    chain over the nonzero entries; the result is saturated (index 1), which
    is verified by checking that a Bezout solution of f . x = +-1 completes
    it to a unimodular matrix.
    """
    n = len(f)
    nz = [i for i, x in enumerate(f) if x != 0]
    if not nz:
        raise ValueError("zero functional")
    basis: list[list[int]] = []
    for i, x in enumerate(f):
        if x == 0:
            e = [0] * n
            e[i] = 1
            basis.append(e)
    g = f[nz[0]]
    coeff = {nz[0]: 1}  # g == sum coeff[i] * f[i]
    for k in nz[1:]:
        a, b, d = _ext_gcd(g, f[k])
        w = [0] * n
        for i, ci in coeff.items():
            w[i] = ci * (f[k] // d)
        w[k] = -(g // d)
        basis.append(w)
        coeff = {i: ci * a for i, ci in coeff.items()}
        coeff[k] = b
        g = d
    if g not in (1, -1):
        raise ValueError("functional must be primitive")
    x0 = [0] * n
    for i, ci in coeff.items():
        x0[i] = ci * g  # f . x0 == 1
    full = matrix([x0] + basis)
    assert abs(det(full)) == 1, "kernel basis is not saturated"
    return [tuple(r) for r in basis]


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(x, y, g) with a x + b y = g = gcd(a, b), g > 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_s, old_t, old_r


def saturated_constrained_lattice(
    constraints: Sequence[Sequence[Fraction]],
    lattice: Sequence[Vector],
) -> list[Vector]:
    """LLL-reduced basis of the sublattice of ``lattice`` annihilated by C.

    ``lattice`` is a saturated integer basis (e.g. the identity for Z^n).
    Constraint rows are imposed one at a time; each step keeps a saturated
    basis, so short solution vectors remain reachable by LLL.
    """
    ambient = len(lattice[0]) if lattice else 0
    lattice = [vector(b) for b in lattice]
    for row in constraints:
        f = [vec_dot(row, b) for b in lattice]
        if all(x == 0 for x in f):
            continue
        kernel = primitive_kernel_basis(list(clear_denominators(f)))
        new_lattice = []
        for coeffs in kernel:
            v = zero_vector(ambient)
            for c, b in zip(coeffs, lattice):
                if c:
                    v = vec_add(v, vec_scale(Fraction(c), b))
            new_lattice.append(v)
        lattice = lll_reduce(new_lattice) if new_lattice else []
        if not lattice:
            break
    return lattice


def lll_reduce(rows: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Lenstra-Lenstra-Lovasz reduction of independent rows (Euclidean metric).

    Used to keep basis vectors (and hence restricted Gram matrices and form
    values) small. A common rational denominator is cleared from the whole
    basis first, which rescales the lattice uniformly and so does not change
    which bases are reduced; the result is scaled back exactly.
    """
    basis = [[Fraction(x) for x in r] for r in rows]
    n = len(basis)
    if n <= 1:
        return [tuple(r) for r in basis]
    denom = 1
    for r in basis:
        for x in r:
            denom = denom * x.denominator // math.gcd(denom, x.denominator)
    from sympy import ZZ
    from sympy.polys.matrices import DomainMatrix

    ints = [[ZZ(int(x * denom)) for x in r] for r in basis]
    reduced = DomainMatrix(ints, (n, len(basis[0])), ZZ).lll()
    return [
        tuple(Fraction(int(x), denom) for x in row) for row in reduced.to_list()
    ]


def clear_denominators(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a nonzero rational vector to a primitive integer vector.

    The first nonzero entry of the result is positive.
    """
    denom = 1
    for x in v:
        denom = denom * x.denominator // math.gcd(denom, x.denominator)
    ints = [int(x * denom) for x in v]
    g = 0
    for x in ints:
        g = math.gcd(g, x)
    if g == 0:
        raise ValueError("zero vector")
    ints = [x // g for x in ints]
    for x in ints:
        if x != 0:
            if x < 0:
                ints = [-y for y in ints]
            break
    return tuple(ints)
