"""Certified pipeline for products of four quaternion algebras with involution.

Builds the degree-4 algebra D = Q1 (x) Q2 with its canonical tensor
involution, produces a symmetric trace-zero element u of square reduced
norm, forms the 16-dimensional trace form q_u(x) = Trd(x u gamma(x)), and
verifies exactly that the result is hyperbolic (with an explicit totally
isotropic subspace of dimension at least 5 and Witt index 8) or, in the
definite case, similar to a 4-fold multiplicative form. Every identity is
checked in rational arithmetic with zero tolerance.
"""

from __future__ import annotations

import functools
import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from . import csa, linalg, qform
from .arith import rat, rat_str, sqrt_rational
from .csa import InvolutionAlgebra
from .linalg import Vector
from .qform import QuadraticForm
from .quat import QuaternionAlgebra

VERSION = "0.1.0"

SYMBOL_POOL = (1, -1, 2, -2, 3, -3, 5, -5, 7, -7, 11, -11)
COORD_RANGE = 3
LAMBDA_POOL = (1, -1, 2, -2)


class ScenarioError(ValueError):
    pass


@dataclass(frozen=True)
class Scenario:
    """Input data: two quaternion symbols, an invertible c in D, a scalar, a seed."""

    q1: QuaternionAlgebra
    q2: QuaternionAlgebra
    c: Vector
    lam: Fraction
    seed: int

    def to_json(self) -> dict:
        return {
            "q1": self.q1.to_json(),
            "q2": self.q2.to_json(),
            "c": [rat_str(x) for x in self.c],
            "lambda": rat_str(self.lam),
            "seed": self.seed,
        }

    @staticmethod
    def from_json(data: dict) -> "Scenario":
        return Scenario(
            QuaternionAlgebra.from_json(data["q1"]),
            QuaternionAlgebra.from_json(data["q2"]),
            linalg.vector([rat(x) for x in data["c"]]),
            rat(data["lambda"]),
            int(data["seed"]),
        )


@functools.lru_cache(maxsize=64)
def build_D(q1: QuaternionAlgebra, q2: QuaternionAlgebra) -> InvolutionAlgebra:
    """The 16-dimensional tensor product with the product of canonical involutions."""
    return csa.tensor(
        csa.from_quaternion(q1, "canonical"), csa.from_quaternion(q2, "canonical")
    )


def _embed_q1(x: Sequence[Fraction]) -> Vector:
    """Coordinates of x (x) 1 in the tensor basis of D."""
    out = [Fraction(0)] * 16
    for t, c in enumerate(x):
        out[t * 4] = Fraction(c)
    return tuple(out)


def _embed_tensor(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(Fraction(a) * Fraction(b) for a in x for b in y)


@dataclass(frozen=True)
class UElement:
    """A gamma-symmetric trace-zero element with square reduced norm, validated."""

    d: InvolutionAlgebra
    coords: Vector

    def __post_init__(self):
        alg, g = self.d.algebra, self.d.sigma
        if g.apply(self.coords) != self.coords:
            raise ScenarioError("u must be symmetric under the involution")
        if alg.trd(self.coords) != 0:
            raise ScenarioError("u must have reduced trace zero")
        n = alg.nrd(self.coords)
        try:
            sqrt_rational(n)
        except ValueError:
            raise ScenarioError(f"reduced norm {n} of u is not a square")
        if n == 0:
            raise ScenarioError("u must be invertible")


def q_u_form(d: InvolutionAlgebra, u: Sequence[Fraction]) -> QuadraticForm:
    """The trace form q_u(x) = Trd(x u gamma(x)) on the 16 basis coordinates."""
    alg, g = d.algebra, d.sigma
    trace_row = tuple(alg.trd(alg.basis_vector(t)) for t in range(alg.dim))

    def trd_of(v: Vector) -> Fraction:
        return sum(a * b for a, b in zip(trace_row, v))

    gram = [[Fraction(0)] * alg.dim for _ in range(alg.dim)]
    right = [alg.mul(u, g.apply(alg.basis_vector(t))) for t in range(alg.dim)]
    for s in range(alg.dim):
        es = alg.basis_vector(s)
        for t in range(s, alg.dim):
            val = (trd_of(alg.mul(es, right[t])) + trd_of(alg.mul(alg.basis_vector(t), right[s]))) / 2
            gram[s][t] = gram[t][s] = val
    return QuadraticForm(gram)


class AnisotropicU(RuntimeError):
    """Raised when q_{u0} is anisotropic, routing the caller to the definite branch."""

    def __init__(self, u0: Vector):
        super().__init__("trace form of the unnormalized element is anisotropic")
        self.u0 = u0


def make_u(s: Scenario) -> tuple[UElement, Vector]:
    """Produce the validated u and the normalizing element y (u = y u0 gamma(y)).

    u0 = lambda (c gamma(c))^{-1} is symmetric with square reduced norm; if its
    trace is nonzero it is normalized through an invertible isotropic vector of
    its trace form. Raises AnisotropicU when no such vector exists.

    Every verdict downstream is invariant under scaling u by a nonzero
    rational (the trace form scales, which changes no Witt-theoretic
    conclusion, and the commutation identities are linear in u), so u0 is
    rescaled by Nrd(c gamma(c)) -- a square -- to have integer entries, and
    the normalized u is reduced to a primitive integer vector.

    The normalizing witness is searched on the form x -> lambda Trd(x
    gamma(x)), which right multiplication by gamma(c) carries exactly onto
    q_{u0} (the congruence is asserted). That form has tiny entries, so the
    witness z -- and with it y = z gamma(c) and u = y u0 gamma(y), a scalar
    times z gamma(z) -- stays small. Keeping u small is what keeps the
    diagonal of its trace form factorable later.
    """
    d = build_D(s.q1, s.q2)
    alg, g = d.algebra, d.sigma
    if not alg.is_invertible(s.c):
        raise ScenarioError("c must be invertible")
    if s.lam == 0:
        raise ScenarioError("lambda must be nonzero")
    cgc = alg.mul(s.c, g.apply(s.c))
    nrd_cgc = alg.nrd(cgc)
    u0 = tuple(s.lam * nrd_cgc * x for x in alg.inverse(cgc))
    assert all(x.denominator == 1 for x in u0)
    content = 0
    for x in u0:
        content = math.gcd(content, int(x))
    u0 = tuple(x / content for x in u0)
    assert g.apply(u0) == u0
    if alg.trd(u0) == 0:
        return UElement(d, u0), alg.unit
    # scalar mu with u0 = mu (c gamma(c))^{-1}: q_{u0}(x gamma(c)) = mu Trd(x gamma(x))
    mu = alg.mul(u0, cgc)[0]
    q_small = q_u_form(d, tuple(mu if t == 0 else Fraction(0) for t in range(alg.dim)))
    gc = g.apply(s.c)
    right_gc = linalg.transpose(
        linalg.matrix([alg.mul(alg.basis_vector(t), gc) for t in range(alg.dim)])
    )
    q0 = q_u_form(d, u0)
    assert linalg.mat_mul(
        linalg.transpose(right_gc), linalg.mat_mul(q0.gram, right_gc)
    ) == q_small.gram
    if not qform.is_isotropic(q_small):
        raise AnisotropicU(u0)
    for w in qform.isotropic_witnesses(q_small):
        z = linalg.vector(w)
        if alg.is_invertible(z):
            break
    else:  # pragma: no cover - stream only ends via the search ceiling
        raise AssertionError("witness stream ended without an invertible vector")
    y = alg.mul(z, gc)
    assert q0.evaluate(y) == 0
    u = alg.mul(alg.mul(y, u0), g.apply(y))
    u = tuple(Fraction(x) for x in linalg.clear_denominators(u))
    return UElement(d, u), y


def normalize_u(d: InvolutionAlgebra, u0: Vector) -> Vector:
    """An invertible y with Trd(y u0 gamma(y)) = 0, from the isotropy witness stream."""
    q0 = q_u_form(d, u0)
    if not qform.is_isotropic(q0):
        raise AnisotropicU(u0)
    for w in qform.isotropic_witnesses(q0):
        y = linalg.vector(w)
        if d.algebra.is_invertible(y):
            return y
    raise AssertionError("witness stream ended without an invertible vector")


# ---------------------------------------------------------------------------
# the three totally-isotropic-subspace checks
# ---------------------------------------------------------------------------


def check_claim_1(d: InvolutionAlgebra, z: Vector, qz: QuadraticForm) -> list[str]:
    """The first tensor factor is totally isotropic for the trace form of z.

    Checks the full 4x4 Gram block on Q1 (x) 1 and the vanishing of Trd(x z)
    for x running over the embedded basis of the first factor.
    """
    failures = []
    alg = d.algebra
    basis = [_embed_q1([1 if t == s else 0 for t in range(4)]) for s in range(4)]
    for a in range(4):
        if alg.trd(alg.mul(basis[a], z)) != 0:
            failures.append(f"claim1: Trd(e{a} z) != 0")
        for b in range(4):
            if qz.bilinear(basis[a], basis[b]) != 0:
                failures.append(f"claim1: form does not vanish on pair ({a},{b})")
    return failures


def w_subspace(
    s: Scenario,
    d: InvolutionAlgebra,
    u: UElement,
    y: Vector,
    q_pure: Sequence[Fraction],
) -> list[Vector]:
    """The 3-dimensional subspace W_q attached to a pure quaternion q of Q2.

    W_q is the conjugate by c of {x (x) q : x pure in Q1}, transported through
    the normalization by conjugation with gamma(y). Each basis element w is
    checked to satisfy gamma(w) u = u w and w^2 scalar.
    """
    alg, g = d.algebra, d.sigma
    q_pure = linalg.vector(q_pure)
    if q_pure[0] != 0 or linalg.is_zero_vector(q_pure):
        raise ScenarioError("q must be a nonzero pure quaternion")
    c_inv = alg.inverse(s.c)
    gy = g.apply(y)
    gy_inv = alg.inverse(gy)
    basis = []
    for t in range(1, 4):
        x = [Fraction(0)] * 4
        x[t] = Fraction(1)
        w0 = alg.mul(alg.mul(s.c, _embed_tensor(x, q_pure)), c_inv)
        w = alg.mul(alg.mul(gy_inv, w0), gy)
        lhs = alg.mul(g.apply(w), u.coords)
        rhs = alg.mul(u.coords, w)
        if lhs != rhs:
            raise ScenarioError("commutation identity gamma(w) u = u w fails")
        csa._scalar_of(alg, alg.mul(w, w))  # raises if w^2 is not scalar
        basis.append(w)
    if linalg.rank(linalg.matrix(basis)) != 3:
        raise ScenarioError("W_q is not 3-dimensional")
    return basis


def check_claim_2(
    d: InvolutionAlgebra, u: UElement, w_basis: Sequence[Vector], qu: QuadraticForm
) -> list[str]:
    """gamma(W_q) is totally isotropic for q_u, with the scalar identity q_u(gamma(w)) = w^2 Trd(u)."""
    failures = []
    alg, g = d.algebra, d.sigma
    gw = [g.apply(w) for w in w_basis]
    for a, w in enumerate(w_basis):
        sq = csa._scalar_of(alg, alg.mul(w, w))
        if qu.evaluate(gw[a]) != sq * alg.trd(u.coords):
            failures.append(f"claim2: q_u(gamma(w{a})) != w^2 Trd(u)")
    for a in range(len(gw)):
        for b in range(len(gw)):
            if qu.bilinear(gw[a], gw[b]) != 0:
                failures.append(f"claim2: form does not vanish on pair ({a},{b})")
    return failures


def build_V_q(
    d: InvolutionAlgebra, u: UElement, w_basis: Sequence[Vector]
) -> list[Vector]:
    """A deterministic 2-dimensional subspace of T intersected with gamma(W_q).

    T is the kernel of z -> Trd(u gamma(z)); it is 15-dimensional, so the cut
    of the 3-dimensional gamma(W_q) keeps dimension at least 2. The result is
    the first two rows of the reduced-echelon basis of the intersection.
    """
    alg, g = d.algebra, d.sigma
    functional = [
        alg.trd(alg.mul(u.coords, g.apply(alg.basis_vector(t))))
        for t in range(alg.dim)
    ]
    t_basis = linalg.nullspace(linalg.matrix([functional]))
    if len(t_basis) != 15:
        raise ScenarioError("trace functional kernel is not 15-dimensional")
    gw = [g.apply(w) for w in w_basis]
    meet = linalg.intersect_row_spaces(gw, t_basis)
    if len(meet) < 2:
        raise ScenarioError("T meets gamma(W_q) in dimension < 2")
    v_basis = meet[:2]
    for z in v_basis:
        assert alg.trd(alg.mul(u.coords, g.apply(z))) == 0
    return [linalg.vector(z) for z in v_basis]


def check_claim_3_and_assemble(
    s: Scenario,
    d: InvolutionAlgebra,
    u: UElement,
    y: Vector,
    qu: QuadraticForm,
) -> tuple[list[Vector], list[str]]:
    """A totally isotropic subspace of dimension >= 5 containing the first factor.

    Uses V_q for q = i of Q2; when that subspace falls inside the first
    factor, an independent pure quaternion q' = j is adjoined. Returns the
    echelonized basis and the list of violated identities (empty on success).
    """
    failures: list[str] = []
    q1_basis = [_embed_q1([1 if t == a else 0 for t in range(4)]) for a in range(4)]
    span = list(q1_basis)
    for pure in ([0, 1, 0, 0], [0, 0, 1, 0]):
        w_basis = w_subspace(s, d, u, y, pure)
        failures += check_claim_2(d, u, w_basis, qu)
        v_basis = build_V_q(d, u, w_basis)
        span = linalg.row_space_basis(span + v_basis)
        if len(span) >= 5:
            break
    if len(span) < 5:
        failures.append("claim3: assembled subspace has dimension < 5")
    for a in range(len(span)):
        for b in range(len(span)):
            if qu.bilinear(span[a], span[b]) != 0:
                failures.append(f"claim3: form does not vanish on pair ({a},{b})")
                break
    return [linalg.vector(v) for v in span], failures


def extend_to_lagrangian(q: QuadraticForm, basis: Sequence[Vector]) -> list[Vector]:
    """Grow a totally isotropic subspace of a hyperbolic form to half dimension.

    At each step the form restricted to a complement of the span inside its
    orthogonal is again isotropic (its Witt index is half-dimension minus the
    current size), so a witness lifts to a new isotropic vector orthogonal to
    everything collected so far.
    """
    n = q.dim
    assert n % 2 == 0
    span = [
        linalg.vector(linalg.clear_denominators(v))
        for v in linalg.row_space_basis(basis)
    ]
    identity_lattice = [linalg.vector(row) for row in linalg.identity(n)]
    while len(span) < n // 2:
        # the induced form on (span-orthogonal)/span: its values do not
        # depend on the span component, so any orthogonal vectors that are
        # independent modulo span carry it -- and the orthogonal lattice has
        # small reduced vectors, unlike a lattice that is also forced to be
        # Euclidean-orthogonal to the span
        constraints = [linalg.mat_vec(q.gram, v) for v in span]
        perp = linalg.saturated_constrained_lattice(
            constraints, lattice=identity_lattice
        )
        target = n - 2 * len(span)
        quot: list[Vector] = []
        for v in perp:
            if len(quot) == target:
                break
            stacked = list(span) + quot + [v]
            if len(linalg.row_space_basis(stacked)) == len(stacked):
                quot.append(v)
        assert len(quot) == target, "orthogonal must surject onto the quotient"
        sub = q.restrict(quot)
        res = qform.is_isotropic(sub)
        assert res.isotropic, "hyperbolic form must keep an isotropic complement"
        lifted = linalg.zero_vector(n)
        for c, vec in zip(res.witness, quot):
            if c:
                lifted = linalg.vec_add(lifted, linalg.vec_scale(Fraction(c), vec))
        span.append(linalg.vector(linalg.clear_denominators(lifted)))
    for a in range(len(span)):
        for b in range(len(span)):
            assert q.bilinear(span[a], span[b]) == 0
    return span


# ---------------------------------------------------------------------------
# scenario execution
# ---------------------------------------------------------------------------


@dataclass
class ScenarioReport:
    scenario: Scenario
    u: Vector
    trace_zero: bool
    branch: str
    invariants: dict
    in_cubic_ideal: bool
    witt_index: Optional[int] = None
    isotropic_subspace: Optional[list[Vector]] = None
    lagrangian: Optional[list[Vector]] = None
    gp4: Optional[bool] = None
    failures: list[str] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.failures else "fail"

    def to_json(self) -> dict:
        scenario_json = self.scenario.to_json()
        blob = json.dumps(scenario_json, sort_keys=True).encode()
        out = {
            "version": VERSION,
            "input_sha256": hashlib.sha256(blob).hexdigest(),
            "scenario": scenario_json,
            "u": [rat_str(x) for x in self.u],
            "trace_zero": self.trace_zero,
            "branch": self.branch,
            "form_invariants": self.invariants,
            "in_cubic_ideal": self.in_cubic_ideal,
            "verdict": self.verdict,
            "failures": list(self.failures),
        }
        if self.witt_index is not None:
            out["witt_index"] = self.witt_index
        if self.isotropic_subspace is not None:
            out["isotropic_subspace"] = [
                [rat_str(x) for x in v] for v in self.isotropic_subspace
            ]
        if self.lagrangian is not None:
            out["lagrangian"] = [[rat_str(x) for x in v] for v in self.lagrangian]
        if self.gp4 is not None:
            out["gp4"] = self.gp4
        return out

    def summary_line(self) -> str:
        dim = len(self.isotropic_subspace) if self.isotropic_subspace else "-"
        wi = self.witt_index if self.witt_index is not None else "-"
        return (
            f"seed={self.scenario.seed:<6} branch={self.branch:<16} "
            f"witt={wi:<3} subspace_dim={dim:<3} verdict={self.verdict}"
        )


def run_scenario(s: Scenario) -> ScenarioReport:
    """Execute the full pipeline on one scenario and aggregate every exact check."""
    d = build_D(s.q1, s.q2)
    failures: list[str] = []
    try:
        u, y = make_u(s)
    except AnisotropicU as exc:
        return _definite_branch(s, d, exc.u0)
    qu = q_u_form(d, u.coords)
    failures += check_claim_1(d, u.coords, qu)
    subspace, claim_failures = check_claim_3_and_assemble(s, d, u, y, qu)
    failures += claim_failures
    lagrangian = None
    if not claim_failures:
        try:
            lagrangian = extend_to_lagrangian(qu, subspace)
        except (AssertionError, qform.WitnessSearchLimit):
            lagrangian = None
    if lagrangian is not None:
        # search-free decomposition from the explicit Lagrangian
        witt = qform.witt_from_lagrangian(qu, lagrangian)
    else:
        witt = qform.witt_decompose(qu)
    if witt.witt_index != 8:
        failures.append(f"witt: index {witt.witt_index} != 8")
    if witt.witt_index == 8:
        # the explicit decomposition certifies the form hyperbolic, so its
        # invariants are those of the split model and membership in the cubic
        # ideal is automatic -- no factoring of the huge diagonal needed
        inv = qform.QuadraticForm.from_diagonal([1, -1] * 8).invariants()
        in_i3 = True
    else:
        inv = qu.invariants()
        in_i3 = qform.in_I_n(qu, 3)
        if not in_i3:
            failures.append("invariants: trace form is not in the cubic ideal")
    return ScenarioReport(
        scenario=s,
        u=u.coords,
        trace_zero=True,
        branch="hyperbolic",
        invariants=inv.to_json(),
        in_cubic_ideal=in_i3,
        witt_index=witt.witt_index,
        isotropic_subspace=subspace,
        lagrangian=lagrangian,
        failures=failures,
    )


def _definite_branch(s: Scenario, d: InvolutionAlgebra, u0: Vector) -> ScenarioReport:
    failures: list[str] = []
    qu = q_u_form(d, u0)
    inv = qu.invariants()
    in_i3 = qform.in_I_n(qu, 3)
    if not in_i3:
        failures.append("invariants: trace form is not in the cubic ideal")
    gp4 = qform.in_GP_r(qu, 4)
    if not gp4:
        failures.append("definite branch: trace form is not similar to a 4-fold multiplicative form")
    return ScenarioReport(
        scenario=s,
        u=u0,
        trace_zero=d.algebra.trd(u0) == 0,
        branch="definite-pfister",
        invariants=inv.to_json(),
        in_cubic_ideal=in_i3,
        gp4=gp4,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# sampling and batches
# ---------------------------------------------------------------------------


def sample_scenario(seed: int) -> Scenario:
    """Deterministic scenario from a seed: small symbols, small invertible c."""
    rng = random.Random(seed)
    q1 = QuaternionAlgebra(rng.choice(SYMBOL_POOL), rng.choice(SYMBOL_POOL))
    q2 = QuaternionAlgebra(rng.choice(SYMBOL_POOL), rng.choice(SYMBOL_POOL))
    d = build_D(q1, q2)
    while True:
        c = linalg.vector(
            [rng.randint(-COORD_RANGE, COORD_RANGE) for _ in range(16)]
        )
        if d.algebra.is_invertible(c):
            break
    lam = Fraction(rng.choice(LAMBDA_POOL))
    return Scenario(q1, q2, c, lam, seed)


def run_batch(count: int, seed: int) -> list[ScenarioReport]:
    """Reports for the scenarios with seeds seed .. seed + count - 1, in order."""
    return [run_scenario(sample_scenario(seed + k)) for k in range(count)]
