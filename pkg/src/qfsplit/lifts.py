"""Non-splitting behaviour of first-order lifts to mixed characteristic.

A lift of f = sum b_i M_i perturbs each coefficient to first order by a
vector c; all of its non-splitting data is governed by the shifted matrix

    T_c = T - c * lambda        (outer product, column c times row lambda)

through the twisted recursion R_{c,1} = F(lambda), R_{c,n+1} = F(R_{c,n} T_c)
(the Frobenius wraps the product; over a prime field it is invisible).
When f itself is not quasi-F-split (infinite height), the lift's
non-splitting index is the first n with R_{c,n} = 0; its only possible
values are ns(f) and infinity, and when lambda != 0 an explicit c with
infinite index exists and is constructed here.

``shifted_matrix_direct`` rebuilds T_c from the shifted polynomial kernel
(delta(f) - G(c)^p) * f^(p-2) instead of the rank-one update; agreement of
the two routes is a mandatory self-test exercised by the suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cartier import FrobeniusBundle, columns_from_kernel, descent_product, height
from .errors import ResourceError, UsageError
from .ffield import RawElement
from .polyring import corner_coefficient, delta, mul_bounded, poly_pow, prune
from .values import Infinite, is_infinite


@dataclass
class LiftShift:
    """A first-order coefficient shift c together with its matrix T_c."""

    bundle: FrobeniusBundle
    c: list
    T_c: list

    @property
    def m(self) -> int:
        return self.bundle.m


def t_shifted(b: FrobeniusBundle, c: Sequence[RawElement]) -> LiftShift:
    """T_c = T - c * lambda via the rank-one update."""
    if len(c) != b.m:
        raise UsageError(f"shift vector must have length {b.m}, got {len(c)}")
    fld = b.field
    c = list(c)
    T_c = []
    for i, row in enumerate(b.T):
        ci = c[i]
        if fld.is_zero(ci):
            T_c.append(list(row))
        else:
            T_c.append([fld.sub(row[j], fld.mul(ci, b.lam[j])) for j in range(b.m)])
    return LiftShift(b, c, T_c)


def shifted_matrix_direct(b: FrobeniusBundle, c: Sequence[RawElement]) -> list:
    """T_c rebuilt from shifted polynomial data, independent of the rank-one route.

    The first-order shift changes the defect kernel by delta -> delta - G(c)^p,
    where G(c) is the degree-d form with coefficient vector c; the matrix of
    h -> u((delta(f) - G(c)^p) f^(p-2) h) must equal T - c * lambda.
    """
    if len(c) != b.m:
        raise UsageError(f"shift vector must have length {b.m}, got {len(c)}")
    p = b.field.p
    g_c = b.basis.polynomial(list(c))
    shifted_kernel = (delta(b.f) - poly_pow(g_c, p)) * poly_pow(b.f, p - 2)
    return columns_from_kernel(b.basis, shifted_kernel)


def ns_lift(shift: LiftShift, cap: int | None = None):
    """Non-splitting index of the lifted equation: first n with R_{c,n} = 0.

    Requires the base height to be infinite (otherwise the recursion does not
    encode the lift's index); default cap m+1 covers every finite value the
    value-set property allows.
    """
    b = shift.bundle
    if not is_infinite(height(b)):
        raise UsageError("lift indices are defined only over a non-quasi-F-split base")
    if cap is None:
        cap = b.m + 1
    ops = b.ops
    T = ops.matrix(shift.T_c)
    R = ops.frobenius_row(b.lam_row)
    for n in range(1, cap + 1):
        if ops.is_zero_row(R):
            return n
        R = ops.frobenius_row(ops.row_times_matrix(R, T))
    return Infinite(cap=cap)


def infinite_lift(b: FrobeniusBundle, verify_cap: int = 36) -> list | None:
    """A shift c with ns_lift = infinity, or None when lambda = 0.

    Picks the first j with lambda_j != 0 and sets c = lambda_j^{-1} (T e_j - e_j),
    which forces T_c e_j = e_j, so the recursion preserves a nonzero value at
    coordinate j forever.  Both facts are verified up to ``verify_cap`` before
    returning.  When lambda = 0 every lift has index 1 and None is returned.
    """
    fld = b.field
    j = next((i for i, v in enumerate(b.lam) if not fld.is_zero(v)), None)
    if j is None:
        return None
    inv = fld.inv(b.lam[j])
    c = []
    for i in range(b.m):
        entry = b.T[i][j]
        if i == j:
            entry = fld.sub(entry, fld.one)
        c.append(fld.mul(inv, entry))

    # exact fixed-column check: (T - c lambda) e_j = e_j
    for i in range(b.m):
        expect = fld.one if i == j else fld.zero
        got = fld.sub(b.T[i][j], fld.mul(c[i], b.lam[j]))
        if got != expect:
            raise AssertionError("fixed-column identity T_c e_j = e_j failed")

    shift = t_shifted(b, c)
    ops = b.ops
    T = ops.matrix(shift.T_c)
    R = ops.frobenius_row(b.lam_row)
    for _ in range(verify_cap):
        if fld.is_zero(ops.row_to_raw(R)[j]):
            raise AssertionError("R_{c,n} e_j vanished; construction invariant broken")
        R = ops.frobenius_row(ops.row_times_matrix(R, T))
    return c


def coupling_values(b: FrobeniusBundle, c: Sequence[RawElement], n: int) -> list:
    """Corner coefficients coupling the shift c to each descent stage.

    Entry j (1-based stage) is the corner coefficient at level j of
    G(c) * (stage-j descent product of f); these scalars are exactly the
    coefficients appearing in the stage decomposition of the shifted rows,
    which the suite checks at points.  Degree growth caps n at 4 and the
    computation at prime fields.
    """
    fld = b.field
    if fld.e != 1:
        raise UsageError("coupling values are computed over prime fields only")
    if n < 1:
        raise UsageError("need at least one coupling value")
    if n > 4:
        raise ResourceError("coupling values are capped at n = 4 (degree growth (p^n - 1)d)")
    if len(c) != b.m:
        raise UsageError(f"shift vector must have length {b.m}")
    p = fld.p
    f = b.f
    fp2 = poly_pow(f, p - 2)
    df = delta(f)
    g_c = b.basis.polynomial(list(c))
    out = []
    for j in range(1, n + 1):
        bound = p**j
        stage = descent_product(f, j, fp2=fp2, df=df)
        product = mul_bounded(stage, prune(g_c, bound), bound)
        if product.is_zero():
            out.append(fld.zero)
        else:
            out.append(corner_coefficient(product, j))
    return out
