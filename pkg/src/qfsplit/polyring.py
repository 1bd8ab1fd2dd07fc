"""Sparse weighted-graded multivariate polynomials over finite fields.

This module is the computational kernel of the package: exact polynomial
arithmetic, the Frobenius-defect operator ``delta`` (two independent
constructions), the semilinear corner projection ``u_op``, and membership
tests in Frobenius power ideals m^[p^n] = (x_0^{p^n}, ..., x_N^{p^n}).

Representation: a polynomial is a map from exponent tuples to raw field
values (see ffield), with zero coefficients never stored.  The canonical
term order is graded lexicographic with x_0 > x_1 > ... > x_N: terms are
sorted by descending weighted degree, ties broken by descending exponent
tuple.  That order is frozen; the monomial basis layout in the cartier
module, hence the layout of all serialized vectors and matrices,
inherits it.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator, Mapping, Sequence

from .errors import ParseError, ResourceError, UsageError
from .ffield import Field, ModPSquare, RawElement

MAX_EXPONENT = 2**32  # documented headroom; exceeded only by runaway powers

ExponentVector = tuple  # tuple[int, ...], one entry per variable


class RingConfig:
    """A weighted polynomial ring k[x_0..x_N] with deg(x_i) = weights[i].

    The distinguished degree d = sum(weights) is the Calabi-Yau degree of
    the ring: hypersurfaces of that degree are the objects every invariant
    in this package is computed for.
    """

    def __init__(self, field: Field, weights: Sequence[int]):
        weights = tuple(int(w) for w in weights)
        if not (2 <= len(weights) <= 8):
            raise UsageError(f"number of variables must be in [2, 8], got {len(weights)}")
        if any(w <= 0 for w in weights):
            raise UsageError(f"all weights must be positive, got {weights}")
        self.field = field
        self.weights = weights
        self.num_vars = len(weights)
        self.d = sum(weights)

    def weighted_degree(self, exps: ExponentVector) -> int:
        return sum(w * e for w, e in zip(self.weights, exps))

    def var_name(self, i: int) -> str:
        return f"x{i}"

    def __eq__(self, other):
        return (
            isinstance(other, RingConfig)
            and self.field == other.field
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.field, self.weights))

    def __repr__(self):
        return f"RingConfig(p={self.field.p}, e={self.field.e}, weights={self.weights})"


def _order_key(ring: RingConfig, exps: ExponentVector):
    # graded lex, descending: highest weighted degree first, then x0-major
    return (-ring.weighted_degree(exps), tuple(-e for e in exps))


class Polynomial:
    """Immutable sparse polynomial; coefficients are raw field values."""

    __slots__ = ("ring", "_terms", "_max_exp")

    def __init__(self, ring: RingConfig, terms: Mapping[ExponentVector, RawElement] | None = None):
        self.ring = ring
        clean: dict = {}
        if terms:
            is_zero = ring.field.is_zero
            for exps, coeff in terms.items():
                if not is_zero(coeff):
                    clean[tuple(exps)] = coeff
        self._terms = clean
        self._max_exp = max((max(e) for e in clean), default=0)

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: RingConfig) -> "Polynomial":
        return cls(ring)

    @classmethod
    def one(cls, ring: RingConfig) -> "Polynomial":
        return cls(ring, {(0,) * ring.num_vars: ring.field.one})

    @classmethod
    def monomial(cls, ring: RingConfig, exps: ExponentVector, coeff: RawElement | None = None) -> "Polynomial":
        if coeff is None:
            coeff = ring.field.one
        return cls(ring, {tuple(exps): coeff})

    # -- inspection ---------------------------------------------------------

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def items(self) -> Iterator[tuple]:
        """Terms as (exponent tuple, raw coefficient) in canonical order."""
        key = lambda item: _order_key(self.ring, item[0])
        return iter(sorted(self._terms.items(), key=key))

    def term_dict(self) -> dict:
        return dict(self._terms)

    def coefficient(self, exps: ExponentVector) -> RawElement:
        return self._terms.get(tuple(exps), self.ring.field.zero)

    def weighted_degree(self) -> int | None:
        """Max weighted degree of the terms; None for the zero polynomial."""
        if not self._terms:
            return None
        wd = self.ring.weighted_degree
        return max(wd(e) for e in self._terms)

    def is_homogeneous(self) -> bool:
        """True for the zero polynomial and for single-degree polynomials."""
        degrees = {self.ring.weighted_degree(e) for e in self._terms}
        return len(degrees) <= 1

    # -- arithmetic ---------------------------------------------------------

    def _check_ring(self, other: "Polynomial") -> None:
        if not isinstance(other, Polynomial) or other.ring != self.ring:
            raise UsageError("polynomials belong to different ring configurations")

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        f = self.ring.field
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            cur = out.get(exps)
            out[exps] = coeff if cur is None else f.add(cur, coeff)
        return Polynomial(self.ring, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        f = self.ring.field
        out = dict(self._terms)
        for exps, coeff in other._terms.items():
            cur = out.get(exps, f.zero)
            out[exps] = f.sub(cur, coeff)
        return Polynomial(self.ring, out)

    def __neg__(self) -> "Polynomial":
        f = self.ring.field
        return Polynomial(self.ring, {e: f.neg(c) for e, c in self._terms.items()})

    def scaled(self, scalar: RawElement) -> "Polynomial":
        f = self.ring.field
        return Polynomial(self.ring, {e: f.mul(scalar, c) for e, c in self._terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_ring(other)
        if self._max_exp + other._max_exp >= MAX_EXPONENT:
            raise ResourceError("product exponent would exceed the 2^32 headroom")
        f = self.ring.field
        fmul, fadd = f.mul, f.add
        out: dict = {}
        small, large = (self._terms, other._terms)
        if len(small) > len(large):
            small, large = large, small
        for e1, c1 in small.items():
            for e2, c2 in large.items():
                exps = tuple(a + b for a, b in zip(e1, e2))
                val = fmul(c1, c2)
                cur = out.get(exps)
                out[exps] = val if cur is None else fadd(cur, val)
        return Polynomial(self.ring, out)

    def __pow__(self, n: int) -> "Polynomial":
        return poly_pow(self, n)

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.ring == other.ring
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- structural maps ----------------------------------------------------

    def frobenius_twist(self, k: int = 1, exp_bound: int | None = None) -> "Polynomial":
        """Termwise image under the k-fold Frobenius: coeff^(p^k), exps * p^k.

        With exp_bound set, terms whose scaled exponents reach the bound are
        dropped (sound inside a mod-m^[bound] computation, where exponents
        only ever grow).
        """
        q = self.ring.field.p**k
        if self._max_exp * q >= MAX_EXPONENT:
            raise ResourceError("Frobenius twist exponent would exceed the 2^32 headroom")
        frob = self.ring.field.frobenius
        out = {}
        for exps, coeff in self._terms.items():
            twisted = tuple(e * q for e in exps)
            if exp_bound is not None and max(twisted) >= exp_bound:
                continue
            c = coeff
            for _ in range(k):
                c = frob(c)
            out[twisted] = c
        return Polynomial(self.ring, out)

    def permute_variables(self, perm: Sequence[int]) -> "Polynomial":
        """Relabel x_i -> x_perm[i]; the permutation must preserve weights."""
        if sorted(perm) != list(range(self.ring.num_vars)):
            raise UsageError(f"{perm} is not a permutation of the variables")
        w = self.ring.weights
        if any(w[i] != w[perm[i]] for i in range(len(w))):
            raise UsageError("permutation does not preserve the grading")
        out = {}
        for exps, coeff in self._terms.items():
            new = [0] * len(exps)
            for i, e in enumerate(exps):
                new[perm[i]] = e
            out[tuple(new)] = coeff
        return Polynomial(self.ring, out)

    def partial(self, i: int) -> "Polynomial":
        """Formal partial derivative with respect to x_i."""
        f = self.ring.field
        out: dict = {}
        for exps, coeff in self._terms.items():
            e = exps[i]
            if e == 0:
                continue
            scalar = f.from_int(e)
            if f.is_zero(scalar):
                continue
            lowered = exps[:i] + (e - 1,) + exps[i + 1 :]
            val = f.mul(scalar, coeff)
            cur = out.get(lowered)
            out[lowered] = val if cur is None else f.add(cur, val)
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence[RawElement]) -> RawElement:
        """Value at a point with coordinates in the coefficient field."""
        f = self.ring.field
        if len(point) != self.ring.num_vars:
            raise UsageError("point has the wrong number of coordinates")
        total = f.zero
        for exps, coeff in self._terms.items():
            val = coeff
            for x, e in zip(point, exps):
                if e:
                    val = f.mul(val, f.pow(x, e))
            total = f.add(total, val)
        return total

    def __str__(self):
        return format_poly(self)

    def __repr__(self):
        return f"Polynomial({self!s})"


# ---------------------------------------------------------------------------
# powers
# ---------------------------------------------------------------------------

def poly_pow(a: Polynomial, n: int) -> Polynomial:
    """a^n by square-and-multiply, with the p-power part done termwise.

    Writing n = p^k * m with p the characteristic, a^(p^k) is the k-fold
    Frobenius twist (exact termwise), and only the m part needs honest
    products.
    """
    if n < 0:
        raise UsageError("polynomial powers require a nonnegative exponent")
    if n == 0:
        return Polynomial.one(a.ring)
    p = a.ring.field.p
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    base = a.frobenius_twist(k) if k else a
    result = None
    power = base
    while n:
        if n & 1:
            result = power if result is None else result * power
        n >>= 1
        if n:
            power = power * power
    return result


def mul_bounded(a: Polynomial, b: Polynomial, exp_bound: int) -> Polynomial:
    """Product with every term having some exponent >= exp_bound discarded.

    This is multiplication in k[x]/m^[exp_bound]; exponents never shrink, so
    discarded terms can never contribute to surviving monomials later.
    """
    a._check_ring(b)
    f = a.ring.field
    fmul, fadd = f.mul, f.add
    out: dict = {}
    small, large = (a._terms, b._terms)
    if len(small) > len(large):
        small, large = large, small
    for e1, c1 in small.items():
        for e2, c2 in large.items():
            exps = tuple(x + y for x, y in zip(e1, e2))
            if max(exps) >= exp_bound:
                continue
            val = fmul(c1, c2)
            cur = out.get(exps)
            out[exps] = val if cur is None else fadd(cur, val)
    return Polynomial(a.ring, out)


def prune(a: Polynomial, exp_bound: int) -> Polynomial:
    """Drop terms with any exponent >= exp_bound (reduction mod m^[exp_bound])."""
    return Polynomial(a.ring, {e: c for e, c in a._terms.items() if max(e) < exp_bound})


# ---------------------------------------------------------------------------
# the Frobenius-defect operator, two ways
# ---------------------------------------------------------------------------

def _sparse_compositions(total: int, parts: int, part_cap: int) -> Iterator[tuple]:
    """Compositions of `total` into `parts` slots with entries in [0, part_cap].

    Yielded sparsely as tuples of (slot index, positive part); at most
    `total` slots are ever nonzero, so enumeration cost does not scale with
    the number of slots.
    """
    acc: list = []

    def rec(start: int, remaining: int):
        if remaining == 0:
            yield tuple(acc)
            return
        for idx in range(start, parts):
            if (parts - idx) * part_cap < remaining:
                break
            for part in range(1, min(part_cap, remaining) + 1):
                acc.append((idx, part))
                yield from rec(idx + 1, remaining - part)
                acc.pop()

    yield from rec(0, total)


@lru_cache(maxsize=None)
def _multinomial_over_p(p: int, alpha: tuple) -> int:
    """binom(p; alpha) / p as an exact integer, for compositions with parts < p."""
    m = math.factorial(p)
    for a in alpha:
        m //= math.factorial(a)
    q, r = divmod(m, p)
    if r:
        raise AssertionError(f"multinomial({p}; {alpha}) not divisible by {p}")
    return q


def delta(f: Polynomial) -> Polynomial:
    """Frobenius defect of f via the multinomial expansion.

    For f = sum c_i M_i (distinct monomials M_i), returns

        sum over (a_1..a_m), 0 <= a_i <= p-1, sum a_i = p
            of  [binom(p; a) / p]  *  prod (c_i M_i)^(a_i).

    Vanishes on monomials; takes a homogeneous polynomial of weighted
    degree D to one of weighted degree p*D.  The integer multinomial / p is
    computed exactly before reduction mod p.  Cost grows with the number of
    compositions, roughly C(#terms + p - 1, p).
    """
    ring = f.ring
    field = ring.field
    p = field.p
    terms = list(f._terms.items())
    m = len(terms)
    if m * (p - 1) < p:
        return Polynomial.zero(ring)  # too few terms to reach exponent sum p
    out: dict = {}
    fmul, fadd, fpow = field.mul, field.add, field.pow
    for alpha in _sparse_compositions(p, m, p - 1):
        parts = tuple(sorted(a for _, a in alpha))
        scalar = field.from_int(_multinomial_over_p(p, parts) % p)
        if field.is_zero(scalar):
            continue
        exps = (0,) * ring.num_vars
        coeff = scalar
        for idx, a in alpha:
            mono, c = terms[idx]
            coeff = fmul(coeff, fpow(c, a))
            exps = tuple(x + a * y for x, y in zip(exps, mono))
        cur = out.get(exps)
        out[exps] = coeff if cur is None else fadd(cur, coeff)
    return Polynomial(ring, out)


def delta_lift_oracle(f: Polynomial) -> Polynomial:
    """Frobenius defect via the Teichmuller lift to Z/p^2; prime fields only.

    Lifts each coefficient c to the Teichmuller representative c^p mod p^2,
    forms (fhat^p - phi(fhat)) / p with phi the termwise (coeff, p*exps) map,
    and reduces mod p.  Agrees identically with :func:`delta`; kept as an
    independent cross-check of the multinomial path.
    """
    field = f.ring.field
    if field.e != 1:
        raise UsageError("the lift oracle is defined over prime fields only")
    p = field.p
    zring = ModPSquare(p)
    lifted = {e: zring.teichmuller(c) for e, c in f._terms.items()}

    def zmul(a: dict, b: dict) -> dict:
        out: dict = {}
        for e1, c1 in a.items():
            for e2, c2 in b.items():
                exps = tuple(x + y for x, y in zip(e1, e2))
                out[exps] = (out.get(exps, 0) + c1 * c2) % zring.psq
        return {e: c for e, c in out.items() if c}

    # fhat^p by square and multiply over Z/p^2
    power: dict = {(0,) * f.ring.num_vars: 1}
    base = lifted
    n = p
    while n:
        if n & 1:
            power = zmul(power, base)
        n >>= 1
        if n:
            base = zmul(base, base)

    # subtract phi(fhat): Teichmuller coefficients are Frobenius-fixed in Z/p^2
    for e, c in lifted.items():
        pe = tuple(p * x for x in e)
        power[pe] = zring.sub(power.get(pe, 0), c)

    out = {}
    for e, c in power.items():
        r = zring.exact_div_p(c)
        if r:
            out[e] = field.from_int(r)
    return Polynomial(f.ring, out)


# ---------------------------------------------------------------------------
# corner projection and Frobenius power ideals
# ---------------------------------------------------------------------------

def u_op(f: Polynomial) -> Polynomial:
    """Projection onto the top dual-basis component of the Frobenius pushforward.

    Keeps exactly the terms c * x^e with every e_i = p-1 (mod p), sending each
    to inverse_frobenius(c) * x^((e - (p-1))/p); everything else maps to 0.
    Semilinear: u_op(g^p * a) = g * u_op(a).
    """
    field = f.ring.field
    p = field.p
    ifrob = field.inverse_frobenius
    out = {}
    for exps, coeff in f._terms.items():
        if all(e % p == p - 1 for e in exps):
            out[tuple((e - (p - 1)) // p for e in exps)] = ifrob(coeff)
    return Polynomial(f.ring, out)


def in_frobenius_power(f: Polynomial, n: int) -> bool:
    """Membership in m^[p^n] = (x_0^(p^n), ..., x_N^(p^n))."""
    if n < 1:
        raise UsageError("the Frobenius power index must be positive")
    q = f.ring.field.p**n
    return all(max(exps) >= q for exps in f._terms)


def corner_coefficient(f: Polynomial, n: int) -> RawElement:
    """Coefficient of (x_0 ... x_N)^(p^n - 1) in f.

    Requires f homogeneous of weighted degree (p^n - 1) * d.  In that degree,
    the corner is the only monomial outside m^[p^n], so a zero corner
    coefficient is equivalent to membership in m^[p^n].
    """
    if n < 1:
        raise UsageError("the Frobenius power index must be positive")
    ring = f.ring
    q = ring.field.p**n
    target = (q - 1) * ring.d
    deg = f.weighted_degree()
    if not f.is_homogeneous() or (deg is not None and deg != target):
        raise UsageError(
            f"corner test needs a homogeneous polynomial of weighted degree {target}"
        )
    return f.coefficient((q - 1,) * ring.num_vars)


# ---------------------------------------------------------------------------
# parsing and formatting
# ---------------------------------------------------------------------------

_ALIASES = {"x": 0, "y": 1, "z": 2, "w": 3, "u": 4}


class _Tokenizer:
    """Whitespace-insensitive lexer shared by the polynomial and scalar grammars."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self._skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self) -> str:
        ch = self.peek()
        self.pos += 1
        return ch

    def expect(self, ch: str):
        got = self.peek()
        if got != ch:
            raise ParseError(f"expected '{ch}', found {got!r}", self.pos)
        self.pos += 1

    def read_uint(self) -> int:
        self._skip_ws()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start:
            raise ParseError("expected an unsigned integer", start)
        return int(self.text[start : self.pos])

    def at_end(self) -> bool:
        return self.peek() == ""


def _parse_scalar_expr(tok: _Tokenizer, field: Field, stop: str) -> RawElement:
    """Sum of terms in the extension generator t, up to (not consuming) `stop`."""
    total = field.zero
    sign = 1
    first = True
    while True:
        ch = tok.peek()
        if ch == "" or ch == stop:
            if first:
                raise ParseError("empty coefficient expression", tok.pos)
            return total
        if ch in "+-":
            tok.take()
            sign = -1 if ch == "-" else 1
        elif not first:
            raise ParseError(f"expected '+' or '-', found {ch!r}", tok.pos)
        first = False
        # one scalar term: [uint] ['*'] ['t' ['^' uint]]
        coeff = None
        ch = tok.peek()
        if ch.isdigit():
            coeff = tok.read_uint()
            if tok.peek() == "*":
                tok.take()
        power = 0
        if tok.peek() == "t":
            if field.e == 1:
                raise ParseError("extension generator t used over a prime field", tok.pos)
            tok.take()
            power = 1
            if tok.peek() == "^":
                tok.take()
                power = tok.read_uint()
        if coeff is None and power == 0:
            raise ParseError("expected a coefficient term", tok.pos)
        if coeff is None:
            coeff = 1
        value = field.from_int(coeff if sign > 0 else -coeff)
        if power:
            tgen = (0, 1) + (0,) * (field.e - 2)
            value = field.mul(value, field.pow(tgen, power))
        total = field.add(total, value)
        sign = 1


def parse_scalar(field: Field, text: str) -> RawElement:
    """Parse a standalone field element ('7', 't+1', '2*t^2 + 1', ...)."""
    tok = _Tokenizer(text)
    value = _parse_scalar_expr(tok, field, stop="")
    if not tok.at_end():
        raise ParseError(f"unexpected trailing input {tok.peek()!r}", tok.pos)
    return value


def _parse_var(tok: _Tokenizer, ring: RingConfig) -> int:
    pos = tok.pos
    ch = tok.take()
    if ch == "x" and tok.peek().isdigit():
        idx = tok.read_uint()
    elif ch in _ALIASES:
        idx = _ALIASES[ch]
    else:
        raise ParseError(f"unknown variable {ch!r}", pos)
    if idx >= ring.num_vars:
        raise ParseError(
            f"variable x{idx} out of range for a {ring.num_vars}-variable ring", pos
        )
    return idx


def parse_poly(text: str, ring: RingConfig) -> Polynomial:
    """Parse a polynomial expression into the given ring.

    Grammar (whitespace-insensitive)::

        poly   := ['+'|'-'] term (('+'|'-') term)*
        term   := coeff ['*' factors] | [coeff '*'?] factors
        factors:= factor ('*'? factor)*
        factor := var ('^' uint)?
        var    := 'x' uint | 'x' | 'y' | 'z' | 'w' | 'u'   (aliases -> x0..x4)
        coeff  := uint | '(' t-expression ')'              (parens need e > 1)

    Coefficients are reduced into the field and like terms combined.
    Raises ParseError (with byte offset) on malformed input.
    """
    field = ring.field
    tok = _Tokenizer(text)
    terms: dict = {}
    sign = 1
    first = True
    while True:
        ch = tok.peek()
        if ch == "":
            if first:
                raise ParseError("empty polynomial expression", tok.pos)
            break
        if ch in "+-":
            tok.take()
            sign = -1 if ch == "-" else 1
        elif not first:
            raise ParseError(f"expected '+' or '-', found {ch!r}", tok.pos)
        first = False

        coeff = field.from_int(sign)
        exps = [0] * ring.num_vars
        saw_coeff = False
        saw_factor = False
        ch = tok.peek()
        if ch.isdigit():
            n = tok.read_uint()
            coeff = field.mul(coeff, field.from_int(n))
            saw_coeff = True
        elif ch == "(":
            if field.e == 1:
                raise ParseError(
                    "parenthesized extension coefficient used over a prime field", tok.pos
                )
            tok.take()
            value = _parse_scalar_expr(tok, field, stop=")")
            tok.expect(")")
            coeff = field.mul(coeff, value)
            saw_coeff = True
        while True:
            ch = tok.peek()
            if ch == "*":
                tok.take()
                ch = tok.peek()
                if not (ch == "x" or ch in _ALIASES):
                    raise ParseError("expected a variable after '*'", tok.pos)
            if not (ch == "x" or ch in _ALIASES):
                break
            idx = _parse_var(tok, ring)
            power = 1
            if tok.peek() == "^":
                tok.take()
                power = tok.read_uint()
            if power >= MAX_EXPONENT:
                raise ResourceError("literal exponent exceeds the 2^32 headroom")
            exps[idx] += power
            saw_factor = True
        if not (saw_coeff or saw_factor):
            raise ParseError("expected a term", tok.pos)
        if not saw_factor and tok.peek() not in ("", "+", "-"):
            raise ParseError(f"unexpected character {tok.peek()!r}", tok.pos)

        key = tuple(exps)
        cur = terms.get(key, field.zero)
        terms[key] = field.add(cur, coeff)
        sign = 1
    return Polynomial(ring, terms)


def format_poly(f: Polynomial) -> str:
    """Canonical-order rendering; parse_poly(format_poly(f)) reproduces f."""
    if f.is_zero():
        return "0"
    field = f.ring.field
    parts = []
    for exps, coeff in f.items():
        factors = []
        for i, e in enumerate(exps):
            if e == 1:
                factors.append(f.ring.var_name(i))
            elif e > 1:
                factors.append(f"{f.ring.var_name(i)}^{e}")
        cstr = field.format(coeff)
        if field.e > 1 and ("+" in cstr or "t" in cstr):
            cstr = f"({cstr})"
        if not factors:
            parts.append(cstr)
        elif cstr == "1":
            parts.append("*".join(factors))
        else:
            parts.append("*".join([cstr] + factors))
    return " + ".join(parts)
