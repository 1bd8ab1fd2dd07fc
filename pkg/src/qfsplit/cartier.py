"""Frobenius descent data of a hypersurface and the invariants built from it.

For a homogeneous f of Calabi-Yau degree d = sum(weights) this module
constructs the triple (v_f, lambda, T) over the ordered degree-d monomial
basis:

* ``v_f`` -- the coefficient column of f;
* ``lambda`` -- the row of u-images u(f^(p-2) * M_i), scalars by degree count;
* ``T`` -- the matrix of the semilinear map h -> u(delta(f) * f^(p-2) * h)
  in the monomial basis (column j expands the image of M_j).

The twisted Krylov rows R_1 = F(lambda), R_{n+1} = F(R_n T) then decide
everything: the quasi-F-split height is the first n with R_n v_f != 0, and
when no such n exists the non-splitting index is the first n at which the
stacked rows R_1..R_n become linearly dependent.  (Over F_p the twist is
invisible and R_n = lambda T^(n-1); over extensions the Frobenius must wrap
the whole product -- R_n . v_f equals the level-n corner coefficient of the
descent products, which the suite checks over F_4.)  A Fedder-style corner
test on honest polynomial products is kept alongside as an independent
oracle for small n.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import _linalg
from .errors import ResourceError, UsageError
from .ffield import Field, RawElement
from .polyring import (
    Polynomial,
    RingConfig,
    corner_coefficient,
    delta,
    format_poly,
    mul_bounded,
    poly_pow,
    prune,
)
from .values import Infinite, is_infinite, value_to_json

K3_QUARTIC_WEIGHTS = (1, 1, 1, 1)
K3_SEXTIC_WEIGHTS = (1, 1, 1, 3)
K3_MAX_HEIGHT = 10  # finite heights of K3 surfaces lie in 1..10

FAMILY_QUARTIC = "quartic_K3"
FAMILY_SEXTIC = "weighted_sextic_K3"
FAMILY_GENERAL = "general_CY"

SIGMA_EQUALS_TAU = "equals_tau"
SIGMA_AMBIGUOUS = "tau_or_tau_plus_1_char2_quartic"
SIGMA_NOT_APPLICABLE = "not_applicable"


def family_of(ring: RingConfig) -> str:
    if ring.weights == K3_QUARTIC_WEIGHTS:
        return FAMILY_QUARTIC
    if ring.weights == K3_SEXTIC_WEIGHTS:
        return FAMILY_SEXTIC
    return FAMILY_GENERAL


# ---------------------------------------------------------------------------
# monomial basis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MonomialBasis:
    """All weighted-degree-d monomials in the frozen canonical order."""

    ring: RingConfig
    monomials: tuple

    @property
    def m(self) -> int:
        return len(self.monomials)

    def index_of(self, exps) -> int:
        return _basis_index(self.ring)[tuple(exps)]

    def polynomial(self, coeffs: Sequence[RawElement]) -> Polynomial:
        """The degree-d polynomial with the given coefficient vector."""
        if len(coeffs) != self.m:
            raise UsageError(f"expected {self.m} coefficients, got {len(coeffs)}")
        return Polynomial(self.ring, dict(zip(self.monomials, coeffs)))

    def coefficients(self, f: Polynomial) -> list:
        return [f.coefficient(mono) for mono in self.monomials]


@lru_cache(maxsize=None)
def basis(ring: RingConfig) -> MonomialBasis:
    """Exhaustive, duplicate-free basis: descending-lex exponent order."""
    weights = ring.weights
    nv = ring.num_vars
    found = []

    def rec(i: int, remaining: int, acc: list):
        if i == nv - 1:
            if remaining % weights[i] == 0:
                found.append(tuple(acc + [remaining // weights[i]]))
            return
        for e in range(remaining // weights[i] + 1):
            rec(i + 1, remaining - e * weights[i], acc + [e])

    rec(0, ring.d, [])
    found.sort(key=lambda t: tuple(-e for e in t))
    return MonomialBasis(ring, tuple(found))


@lru_cache(maxsize=None)
def _basis_index(ring: RingConfig) -> dict:
    return {mono: i for i, mono in enumerate(basis(ring).monomials)}


# ---------------------------------------------------------------------------
# bundle construction
# ---------------------------------------------------------------------------

class FrobeniusBundle:
    """The data (basis, f, v_f, lambda, T); construction via :func:`bundle`.

    Semantically immutable; height results and backend matrices are memoized
    lazily, so share an instance across threads only behind a lock (or keep
    instances thread-local, as the scan workers do).
    """

    def __init__(self, bas: MonomialBasis, f: Polynomial, v_f: list, lam: list, T: list):
        self.basis = bas
        self.f = f
        self.v_f = v_f
        self.lam = lam
        self.T = T
        self._ops = None
        self._T_mat = None
        self._lam_row = None
        self._v_col = None
        self._height_cache: dict = {}

    @property
    def ring(self) -> RingConfig:
        return self.basis.ring

    @property
    def field(self) -> Field:
        return self.ring.field

    @property
    def m(self) -> int:
        return self.basis.m

    @property
    def ops(self):
        if self._ops is None:
            self._ops = _linalg.make_ops(self.field)
        return self._ops

    @property
    def T_mat(self):
        if self._T_mat is None:
            self._T_mat = self.ops.matrix(self.T)
        return self._T_mat

    @property
    def lam_row(self):
        if self._lam_row is None:
            self._lam_row = self.ops.row(self.lam)
        return self._lam_row

    @property
    def v_col(self):
        if self._v_col is None:
            self._v_col = self.ops.row(self.v_f)
        return self._v_col

    def lam_is_zero(self) -> bool:
        f = self.field
        return all(f.is_zero(v) for v in self.lam)


def columns_from_kernel(bas: MonomialBasis, kernel: Polynomial) -> list:
    """Matrix of h -> u_op(kernel * h) on the basis, built column by column.

    The kernel is multiplied by each basis monomial (an exponent shift) and
    pushed through the corner projection; this is O(m) passes over the
    kernel's term list rather than O(m^2) polynomial products.
    """
    ring = bas.ring
    f = ring.field
    p = f.p
    index = _basis_index(ring)
    m = bas.m
    T = [[f.zero] * m for _ in range(m)]
    ifrob = f.inverse_frobenius
    kernel_terms = list(kernel.term_dict().items())
    for j, mono in enumerate(bas.monomials):
        for exps, coeff in kernel_terms:
            shifted = tuple(a + b for a, b in zip(exps, mono))
            if any(e % p != p - 1 for e in shifted):
                continue
            target = tuple((e - (p - 1)) // p for e in shifted)
            i = index[target]
            row = T[i]
            row[j] = f.add(row[j], ifrob(coeff))
    return T


def bundle(f: Polynomial) -> FrobeniusBundle:
    """Build the Frobenius descent bundle of a degree-d homogeneous f != 0."""
    ring = f.ring
    if f.is_zero():
        raise UsageError("the zero polynomial has no Frobenius bundle")
    if not f.is_homogeneous() or f.weighted_degree() != ring.d:
        raise UsageError(
            f"bundle requires a homogeneous polynomial of weighted degree {ring.d}"
        )
    bas = basis(ring)
    fld = ring.field
    p = fld.p
    v_f = bas.coefficients(f)

    fp2 = poly_pow(f, p - 2)
    corner = (p - 1,) * ring.num_vars
    lam = []
    for mono in bas.monomials:
        rest = tuple(c - e for c, e in zip(corner, mono))
        if any(e < 0 for e in rest):
            lam.append(fld.zero)
        else:
            lam.append(fld.inverse_frobenius(fp2.coefficient(rest)))

    kernel = delta(f) * fp2
    T = columns_from_kernel(bas, kernel)
    return FrobeniusBundle(bas, f, v_f, lam, T)


# ---------------------------------------------------------------------------
# height and non-splitting index
# ---------------------------------------------------------------------------

def default_height_cap(b: FrobeniusBundle) -> int:
    """m for prime fields (provably exhaustive), m*e otherwise (heuristic).

    Over F_p the recursion R_{n+1} = R_n T is linear, so if lambda T^i v_f
    vanishes for all i < m it vanishes on the whole Krylov span of v_f and
    hence for every i.  Over proper extensions the recursion is only
    semilinear and no such bound is in the contract; m*e is a documented
    heuristic, flagged in reports.
    """
    return b.m if b.field.e == 1 else b.m * b.field.e


def height(b: FrobeniusBundle, cap: int | None = None):
    """Least n <= cap with R_n v_f != 0, else an audited infinity."""
    if cap is None:
        cap = default_height_cap(b)
    if cap < 1:
        raise UsageError("the height cap must be positive")
    cached = b._height_cache.get(cap)
    if cached is not None:
        return cached
    ops = b.ops
    T = b.T_mat
    v = b.v_col
    R = ops.frobenius_row(b.lam_row)
    result = None
    for n in range(1, cap + 1):
        if not ops.is_zero_scalar(ops.dot(R, v)):
            result = n
            break
        if n < cap:
            R = ops.frobenius_row(ops.row_times_matrix(R, T))
    if result is None:
        exact = b.field.e == 1 and cap >= b.m
        result = Infinite(cap=cap, exact=exact)
    b._height_cache[cap] = result
    return result


def ns_index(b: FrobeniusBundle, cap: int | None = None, height_cap: int | None = None):
    """Non-splitting index: first rank drop of the stacked rows R_1..R_n.

    Defined (and finite, at most m+1) when the height is infinite; when the
    height is finite the hypersurface is quasi-F-split and the index is
    unconditionally infinite.
    """
    h = height(b, cap=height_cap)
    if not is_infinite(h):
        return Infinite(cap=None)
    if cap is None:
        cap = b.m + 1
    ops = b.ops
    T = b.T_mat
    tracker = ops.rank_tracker()
    R = ops.frobenius_row(b.lam_row)
    for n in range(1, cap + 1):
        if not tracker.add_row(R):
            return n
        R = ops.frobenius_row(ops.row_times_matrix(R, T))
    return Infinite(cap=cap)


def krylov_matrix(b: FrobeniusBundle, n: int, c: Sequence[RawElement] | None = None) -> list:
    """The n rows R_{c,1}, ..., R_{c,n} of the (optionally shifted) recursion.

    With a shift vector c the recursion runs against T - c*lambda, expanded
    on the fly as F(R) T - (F(R) . c) lambda; c = None (or zero) reproduces
    the plain rows whose rank profile encodes the non-splitting index.
    """
    if n < 1:
        raise UsageError("need at least one row")
    ops = b.ops
    T = b.T_mat
    lam = b.lam_row
    c_col = None
    if c is not None:
        if len(c) != b.m:
            raise UsageError(f"shift vector must have length {b.m}")
        c_col = ops.row(c)
    rows = []
    R = ops.frobenius_row(lam)
    for i in range(1, n + 1):
        rows.append(ops.row_to_raw(R))
        if i < n:
            W = ops.row_times_matrix(R, T)
            if c_col is not None:
                s = ops.dot(R, c_col)
                if not ops.is_zero_scalar(s):
                    W = ops.sub_rows(W, ops.scale_row(s, lam))
            R = ops.frobenius_row(W)
    return rows


def rank(rows: Sequence[Sequence[RawElement]], fld: Field) -> int:
    """Exact rank over the field by Gaussian elimination."""
    return _linalg.matrix_rank(rows, fld)


# ---------------------------------------------------------------------------
# Fedder-style corner oracle
# ---------------------------------------------------------------------------

def descent_product(
    f: Polynomial,
    n: int,
    fp2: Polynomial | None = None,
    df: Polynomial | None = None,
) -> Polynomial:
    """The n-th descent product of f, reduced mod m^[p^n].

    This is f^(p-2) * prod_{i=0}^{n-2} F^i( F(f^(p-2)) * delta(f) ), the
    polynomial whose product with a degree-d form is corner-tested at level
    n.  Exponents are capped at p^n throughout (sound for corner tests), and
    factors are multiplied most-twisted first so the cap prunes early.
    Degree growth limits this to n <= 4.
    """
    if not 1 <= n <= 4:
        raise ResourceError("descent products are capped at n = 4 (degree growth (p^n - 1)d)")
    p = f.ring.field.p
    bound = p**n
    if fp2 is None:
        fp2 = poly_pow(f, p - 2)
    if n == 1:
        return prune(fp2, bound)
    if df is None:
        df = delta(f)
    base = fp2.frobenius_twist(1) * df
    acc = base.frobenius_twist(n - 2, exp_bound=bound)
    for i in range(n - 3, -1, -1):
        acc = mul_bounded(acc, base.frobenius_twist(i, exp_bound=bound), bound)
    return mul_bounded(acc, prune(fp2, bound), bound)


def fedder_height_oracle(f: Polynomial, n_max: int = 3) -> int | None:
    """Height by direct corner tests on polynomial products; p in {2, 3} only.

    Returns the least n <= n_max whose level-n corner coefficient is nonzero,
    or None meaning "height >= n_max + 1".  Independent of the matrix
    recursion; agreement with :func:`height` on the overlap is a standing
    cross-check.
    """
    fld = f.ring.field
    if fld.e != 1:
        raise UsageError("the corner oracle is defined over prime fields only")
    if fld.p not in (2, 3):
        raise UsageError("the corner oracle supports p in {2, 3}")
    if n_max < 1:
        raise UsageError("n_max must be positive")
    if n_max > 4:
        raise ResourceError("the corner oracle is capped at n_max = 4")
    p = fld.p
    fp2 = poly_pow(f, p - 2)
    df = delta(f)
    for n in range(1, n_max + 1):
        bound = p**n
        element = mul_bounded(descent_product(f, n, fp2=fp2, df=df), prune(f, bound), bound)
        if element.is_zero():
            continue
        if not fld.is_zero(corner_coefficient(element, n)):
            return n
    return None


# ---------------------------------------------------------------------------
# invariant dictionary for the K3 families
# ---------------------------------------------------------------------------

def find_axis_line(f: Polynomial) -> tuple | None:
    """A pair (i, j) with f in (x_i, x_j), i.e. the line x_i = x_j = 0 lies on V(f)."""
    nv = f.ring.num_vars
    terms = list(f.term_dict())
    for i in range(nv):
        for j in range(i + 1, nv):
            if all(e[i] + e[j] >= 1 for e in terms):
                return (i, j)
    return None


@dataclass
class InvariantReport:
    """Computed invariants of one hypersurface with per-value provenance."""

    equation: str
    p: int
    ext_degree: int
    weights: tuple
    family: str
    height: "int | Infinite"
    ns: "int | Infinite"
    tau: "int | Infinite | None"
    sigma_note: str
    caps_used: dict
    provenance: dict
    line: tuple | None = None

    def to_json_dict(self) -> dict:
        return {
            "equation": self.equation,
            "p": self.p,
            "ext_degree": self.ext_degree,
            "weights": list(self.weights),
            "family": self.family,
            "height": value_to_json(self.height),
            "ns": value_to_json(self.ns),
            "tau": None if self.tau is None else value_to_json(self.tau),
            "sigma_note": self.sigma_note,
            "caps_used": self.caps_used,
            "provenance": self.provenance,
            "line": list(self.line) if self.line else None,
        }


def tau_from_ns(ns) -> "int | Infinite":
    """tau = ns if ns <= 9, 10 for any finite ns >= 10, infinite otherwise."""
    if is_infinite(ns):
        return Infinite(cap=None)
    return ns if ns <= 9 else 10


def artin_report(
    f: Polynomial,
    line: tuple | None = None,
    height_cap: int | None = None,
    ns_cap: int | None = None,
) -> InvariantReport:
    """Full invariant report: height, ns, and for the two K3 families tau.

    For K3 rings the default height cap is 11 (finite K3 heights stop at 10),
    assuming V(f) is smooth -- smoothness is the caller's responsibility
    (see the scan module for the heuristic witness search).  ``line`` names a
    coordinate-axis line (i, j) on the surface, which upgrades the sigma note
    for p = 2 quartics; it is verified and rejected if f is not in (x_i, x_j).
    """
    ring = f.ring
    fam = family_of(ring)
    b = bundle(f)
    if height_cap is None:
        height_cap = K3_MAX_HEIGHT + 1 if fam != FAMILY_GENERAL else default_height_cap(b)
    h = height(b, cap=height_cap)
    ns = ns_index(b, cap=ns_cap, height_cap=height_cap)
    if (
        fam != FAMILY_GENERAL
        and is_infinite(h)
        and not h.exact
        and height_cap == K3_MAX_HEIGHT + 1
    ):
        # cap 11 is exhaustive on the K3 families: finite heights stop at 10
        h = Infinite(cap=h.cap, exact=True)

    if line is not None:
        i, j = line
        if not all(e[i] + e[j] >= 1 for e in f.term_dict()):
            raise UsageError(f"the line x{i} = x{j} = 0 does not lie on the hypersurface")

    if fam == FAMILY_GENERAL:
        tau = None
        note = SIGMA_NOT_APPLICABLE
    else:
        tau = tau_from_ns(ns)
        if fam == FAMILY_SEXTIC or ring.field.p != 2:
            note = SIGMA_EQUALS_TAU
        else:
            note = SIGMA_EQUALS_TAU if line is not None else SIGMA_AMBIGUOUS

    ns_cap_used = ns_cap if ns_cap is not None else b.m + 1
    provenance = {
        "height": {
            "method": "krylov-matrix",
            "cap": height_cap,
            "exact": (not is_infinite(h)) or h.exact,
        },
        "ns": (
            {"method": "rank-profile", "cap": ns_cap_used}
            if is_infinite(h)
            else {"method": "finite-height", "cap": None}
        ),
        "tau": {"method": "ns-dictionary"} if tau is not None else {"method": "not-applicable"},
    }
    if fam != FAMILY_GENERAL and is_infinite(h) and h.cap == K3_MAX_HEIGHT + 1:
        provenance["height"]["note"] = (
            "cap 11 is exhaustive for smooth K3 surfaces (finite heights are at most 10)"
        )
    return InvariantReport(
        equation=format_poly(f),
        p=ring.field.p,
        ext_degree=ring.field.e,
        weights=ring.weights,
        family=fam,
        height=h,
        ns=ns,
        tau=tau,
        sigma_note=note,
        caps_used={"height": height_cap, "ns": ns_cap_used},
        provenance=provenance,
        line=line,
    )


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def bundle_to_json(b: FrobeniusBundle) -> dict:
    """JSON document with field config, weights, basis, v_f, lambda and T.

    Matrix entries are field-element strings in row-major order; the basis
    is the canonical-order list of exponent vectors.
    """
    fld = b.field
    fmt = fld.format
    return {
        "field": {
            "p": fld.p,
            "e": fld.e,
            "modulus": list(fld.modulus) if fld.modulus else None,
        },
        "weights": list(b.ring.weights),
        "basis": [list(mono) for mono in b.basis.monomials],
        "v_f": [fmt(v) for v in b.v_f],
        "lambda": [fmt(v) for v in b.lam],
        "T": [[fmt(v) for v in row] for row in b.T],
    }
