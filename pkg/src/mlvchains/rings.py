"""Exact arithmetic kernels: coefficient fields, polynomials, factorization.

Everything here is plain data plus context objects.  A *field context*
is an object exposing ``zero/one/add/neg/sub/mul/inv/div/eq/is_zero/
from_int/characteristic/size/render/random`` and operating on opaque
element values (``Fraction``, ``int``, :class:`FracMV`, tuples for tower
elements).  Univariate polynomials (:class:`UPoly`) are dense coefficient
tuples, lowest degree first, bound to their field context.

The factorization entry point :func:`factor_univariate` dispatches on
the field: Cantor-Zassenhaus over finite fields, and a deliberately
partial characteristic-p routine (perfect powers, ``y^p - c`` binomials,
monomial factors) over function fields.  Anything else raises
:class:`~mlvchains.errors.UnsupportedFactorization` instead of guessing.
"""

from __future__ import annotations

import zlib
from fractions import Fraction
from random import Random

from .errors import UnsupportedFactorization


# ---------------------------------------------------------------------------
# scalar field contexts
# ---------------------------------------------------------------------------

class QQ:
    """The rationals, elements are ``fractions.Fraction``."""

    def zero(self):
        return Fraction(0)

    def one(self):
        return Fraction(1)

    def from_int(self, n):
        return Fraction(n)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return 1 / a

    def div(self, a, b):
        return a / b

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def characteristic(self):
        return 0

    def size(self):
        return None

    def render(self, a):
        return str(a)

    def random(self, rng: Random):
        return Fraction(rng.randint(-9, 9), rng.randint(1, 9))

    def __repr__(self):
        return "QQ"

    def __eq__(self, other):
        return isinstance(other, QQ)

    def __hash__(self):
        return hash("QQ")


QQ_FIELD = QQ()


class GFp:
    """Prime field F_p, elements are ints in ``range(p)``."""

    def __init__(self, p: int):
        self.p = p

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n % self.p

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero in GF(p)")
        return pow(a, self.p - 2, self.p)

    def div(self, a, b):
        return (a * self.inv(b)) % self.p

    exact_div = div

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_zero(self, a):
        return a % self.p == 0

    def characteristic(self):
        return self.p

    def size(self):
        return self.p

    def pth_root(self, a):
        # Frobenius is the identity on the prime field.
        return a % self.p

    def render(self, a):
        return str(a % self.p)

    def random(self, rng: Random):
        return rng.randrange(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, GFp) and other.p == self.p

    def __hash__(self):
        return hash(("GFp", self.p))


# ---------------------------------------------------------------------------
# multivariate polynomials (a UFD domain, used under fraction fields)
# ---------------------------------------------------------------------------

class MPolyRing:
    """Polynomial ring ``coeff[vars]``; elements are :class:`MPoly`."""

    def __init__(self, coeff, variables: tuple[str, ...]):
        self.coeff = coeff
        self.vars = tuple(variables)
        self.nvars = len(self.vars)
        self._zero_exp = (0,) * self.nvars

    def zero(self):
        return MPoly(self, {})

    def one(self):
        return MPoly(self, {self._zero_exp: self.coeff.one()})

    def from_int(self, n):
        c = self.coeff.from_int(n)
        if self.coeff.is_zero(c):
            return self.zero()
        return MPoly(self, {self._zero_exp: c})

    def const(self, c):
        if self.coeff.is_zero(c):
            return self.zero()
        return MPoly(self, {self._zero_exp: c})

    def gen(self, name: str):
        i = self.vars.index(name)
        e = [0] * self.nvars
        e[i] = 1
        return MPoly(self, {tuple(e): self.coeff.one()})

    def monomial(self, exps, c=None):
        c = self.coeff.one() if c is None else c
        if self.coeff.is_zero(c):
            return self.zero()
        return MPoly(self, {tuple(exps): c})

    # -- domain protocol used by the subresultant PRS ----------------------
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a.is_zero()

    def eq(self, a, b):
        return a == b

    def exact_div(self, a, b):
        return a.exact_div(b)

    def render(self, a):
        return a.render()

    def __eq__(self, other):
        return (
            isinstance(other, MPolyRing)
            and other.coeff == self.coeff
            and other.vars == self.vars
        )

    def __hash__(self):
        return hash(("MPolyRing", self.coeff, self.vars))

    def __repr__(self):
        return f"{self.coeff!r}[{','.join(self.vars)}]"


class MPoly:
    """Element of an :class:`MPolyRing`: dict of exponent tuple -> coeff."""

    __slots__ = ("ring", "terms")

    def __init__(self, ring: MPolyRing, terms: dict):
        self.ring = ring
        self.terms = terms

    def is_zero(self):
        return not self.terms

    def is_one(self):
        if len(self.terms) != 1:
            return False
        (e, c), = self.terms.items()
        return e == self.ring._zero_exp and self.ring.coeff.eq(c, self.ring.coeff.one())

    def is_constant(self):
        return not self.terms or set(self.terms) == {self.ring._zero_exp}

    def constant_value(self):
        return self.terms.get(self.ring._zero_exp, self.ring.coeff.zero())

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def __add__(self, other):
        K = self.ring.coeff
        out = dict(self.terms)
        for e, c in other.terms.items():
            if e in out:
                s = K.add(out[e], c)
                if K.is_zero(s):
                    del out[e]
                else:
                    out[e] = s
            else:
                out[e] = c
        return MPoly(self.ring, out)

    def __neg__(self):
        K = self.ring.coeff
        return MPoly(self.ring, {e: K.neg(c) for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        K = self.ring.coeff
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                p = K.mul(c1, c2)
                if e in out:
                    s = K.add(out[e], p)
                    if K.is_zero(s):
                        del out[e]
                    else:
                        out[e] = s
                elif not K.is_zero(p):
                    out[e] = p
        return MPoly(self.ring, out)

    def scale(self, c):
        K = self.ring.coeff
        if K.is_zero(c):
            return self.ring.zero()
        return MPoly(self.ring, {e: K.mul(v, c) for e, v in self.terms.items()})

    def __pow__(self, n: int):
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if not isinstance(other, MPoly):
            return NotImplemented
        return (self - other).is_zero()

    def __hash__(self):
        return hash(self.key())

    def key(self):
        """Canonical hashable form (sorted terms with rendered coeffs)."""
        K = self.ring.coeff
        return tuple(sorted((e, K.render(c)) for e, c in self.terms.items()))

    def leading(self):
        """Lex-leading (exponent, coeff) pair."""
        e = max(self.terms)
        return e, self.terms[e]

    def exact_div(self, other):
        """Divide by a known divisor; raises if the division is not exact."""
        if other.is_zero():
            raise ZeroDivisionError("exact_div by zero")
        K = self.ring.coeff
        rem = self
        out = {}
        le, lc = other.leading()
        while not rem.is_zero():
            re, rc = rem.leading()
            qe = tuple(a - b for a, b in zip(re, le))
            if any(x < 0 for x in qe):
                raise ArithmeticError("exact_div: division is not exact")
            qc = K.div(rc, lc)
            out[qe] = qc
            rem = rem - MPoly(self.ring, {qe: qc}) * other
        return MPoly(self.ring, out)

    def min_exp(self, var_index: int):
        return min((e[var_index] for e in self.terms), default=0)

    def shift_var(self, var_index: int, k: int):
        """Multiply by var^k (k may be negative if exponents stay >= 0)."""
        out = {}
        for e, c in self.terms.items():
            e2 = list(e)
            e2[var_index] += k
            if e2[var_index] < 0:
                raise ArithmeticError("negative exponent in shift_var")
            out[tuple(e2)] = c
        return MPoly(self.ring, out)

    def subs_zero(self, var_index: int, target_ring: MPolyRing):
        """Set one variable to zero and re-express in ``target_ring``."""
        out = {}
        K = self.ring.coeff
        for e, c in self.terms.items():
            if e[var_index] != 0:
                continue
            e2 = tuple(x for i, x in enumerate(e) if i != var_index)
            if e2 in out:
                s = K.add(out[e2], c)
                if K.is_zero(s):
                    del out[e2]
                else:
                    out[e2] = s
            else:
                out[e2] = c
        return MPoly(target_ring, out)

    def embed(self, target_ring: MPolyRing):
        """Embed into a ring whose variables contain ours (by name)."""
        idx = [target_ring.vars.index(v) for v in self.ring.vars]
        out = {}
        for e, c in self.terms.items():
            e2 = [0] * target_ring.nvars
            for i, x in enumerate(e):
                e2[idx[i]] = x
            out[tuple(e2)] = c
        return MPoly(target_ring, out)

    def pth_root(self):
        """p-th root when it exists, else ``None`` (char p rings only)."""
        p = self.ring.coeff.characteristic()
        if p == 0:
            return None
        K = self.ring.coeff
        out = {}
        for e, c in self.terms.items():
            if any(x % p for x in e):
                return None
            r = K.pth_root(c) if hasattr(K, "pth_root") else None
            if r is None:
                return None
            out[tuple(x // p for x in e)] = r
        return MPoly(self.ring, out)

    def render(self):
        if not self.terms:
            return "0"
        K = self.ring.coeff
        bits = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            factors = []
            cs = K.render(c)
            mono = [
                (f"{v}^{k}" if k > 1 else v)
                for v, k in zip(self.ring.vars, e)
                if k
            ]
            if not mono:
                factors.append(cs)
            elif cs == "1":
                factors.extend(mono)
            elif cs == "-1":
                factors.append("-" + "*".join(mono))
            else:
                factors.append(cs)
                factors.extend(mono)
            bits.append("*".join(factors))
        s = bits[0]
        for b in bits[1:]:
            s += " - " + b[1:] if b.startswith("-") else " + " + b
        return s

    def __repr__(self):
        return self.render()


# ---------------------------------------------------------------------------
# fraction field of an MPolyRing
# ---------------------------------------------------------------------------

class FracMV:
    """Fraction num/den of multivariate polynomials.

    Kept only lightly normalized: common monomial content and the
    leading unit of the denominator are cancelled; full gcd reduction is
    avoided on purpose.  Equality is decided by cross-multiplication,
    which is exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: MPoly, den: MPoly, normalize=True):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if normalize:
            num, den = _frac_normalize(num, den)
        self.num = num
        self.den = den

    @property
    def ring(self):
        return self.num.ring

    def is_zero(self):
        return self.num.is_zero()

    def __add__(self, other):
        if self.den == other.den:
            return FracMV(self.num + other.num, self.den)
        return FracMV(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self):
        return FracMV(-self.num, self.den, normalize=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        return FracMV(self.num * other.num, self.den * other.den)

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return FracMV(self.den, self.num)

    def __truediv__(self, other):
        return self * other.inv()

    def __eq__(self, other):
        if not isinstance(other, FracMV):
            return NotImplemented
        return (self.num * other.den - other.num * self.den).is_zero()

    def __hash__(self):
        # hash-compatible only through full normalization; fall back to
        # a weak hash on the ring -- FracMV values are rarely dict keys.
        return hash(("FracMV", self.num.ring.vars))

    def render(self):
        if self.den.is_one():
            return self.num.render()
        n = self.num.render()
        d = self.den.render()
        return f"({n})/({d})"

    def __repr__(self):
        return self.render()


def _frac_normalize(num: MPoly, den: MPoly):
    if num.is_zero():
        return num, den.ring.one()
    ring = num.ring
    # cancel common monomial content
    shift = []
    for i in range(ring.nvars):
        k = min(num.min_exp(i), den.min_exp(i))
        shift.append(-k)
    if any(shift):
        num = MPoly(ring, {tuple(a + b for a, b in zip(e, shift)): c for e, c in num.terms.items()})
        den = MPoly(ring, {tuple(a + b for a, b in zip(e, shift)): c for e, c in den.terms.items()})
    # make the denominator's lex-leading coefficient one
    _, lc = den.leading()
    if not ring.coeff.eq(lc, ring.coeff.one()):
        inv = ring.coeff.inv(lc)
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


class FracMVField:
    """Field context for :class:`FracMV` elements over one MPolyRing."""

    def __init__(self, ring: MPolyRing):
        self.ring = ring

    def zero(self):
        return FracMV(self.ring.zero(), self.ring.one(), normalize=False)

    def one(self):
        return FracMV(self.ring.one(), self.ring.one(), normalize=False)

    def from_int(self, n):
        return FracMV(self.ring.from_int(n), self.ring.one(), normalize=False)

    def from_poly(self, p: MPoly):
        return FracMV(p, self.ring.one())

    def gen(self, name):
        return self.from_poly(self.ring.gen(name))

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        return a.inv()

    def div(self, a, b):
        return a / b

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a.is_zero()

    def characteristic(self):
        return self.ring.coeff.characteristic()

    def size(self):
        return None

    def pth_root(self, a):
        """p-th root in the fraction field, or None.

        ``a = f/g`` is a p-th power iff ``f * g^(p-1)`` is one in the
        polynomial ring (unique factorization).
        """
        p = self.characteristic()
        if p == 0:
            return None
        h = a.num * a.den ** (p - 1)
        r = h.pth_root()
        if r is None:
            return None
        return FracMV(r, a.den)

    def render(self, a):
        return a.render()

    def random(self, rng: Random):
        num = self.ring.zero()
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(0, 2) for _ in range(self.ring.nvars))
            c = self.ring.coeff.random(rng)
            num = num + self.ring.monomial(exps, c)
        if num.is_zero():
            num = self.ring.one()
        return self.from_poly(num)

    def __eq__(self, other):
        return isinstance(other, FracMVField) and other.ring == self.ring

    def __hash__(self):
        return hash(("FracMVField", self.ring))

    def __repr__(self):
        return f"Frac({self.ring!r})"


# ---------------------------------------------------------------------------
# dense univariate polynomials over a field context
# ---------------------------------------------------------------------------

class UPoly:
    """Dense univariate polynomial over a field context.

    ``coeffs`` is a tuple, lowest degree first, with no trailing zero;
    the zero polynomial has an empty tuple and degree -1.
    """

    __slots__ = ("field", "coeffs")

    def __init__(self, field, coeffs):
        while coeffs and field.is_zero(coeffs[-1]):
            coeffs = coeffs[:-1]
        self.field = field
        self.coeffs = tuple(coeffs)

    @classmethod
    def zero(cls, field):
        return cls(field, ())

    @classmethod
    def one(cls, field):
        return cls(field, (field.one(),))

    @classmethod
    def gen(cls, field):
        return cls(field, (field.zero(), field.one()))

    @classmethod
    def const(cls, field, c):
        return cls(field, (c,))

    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_one(self):
        return len(self.coeffs) == 1 and self.field.eq(self.coeffs[0], self.field.one())

    def lc(self):
        return self.coeffs[-1]

    def __getitem__(self, i):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return self.field.zero()

    def is_monic(self):
        return self.coeffs and self.field.eq(self.coeffs[-1], self.field.one())

    def monic(self):
        if self.is_zero() or self.is_monic():
            return self
        inv = self.field.inv(self.coeffs[-1])
        return UPoly(self.field, [self.field.mul(c, inv) for c in self.coeffs])

    def __add__(self, other):
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return UPoly(F, [F.add(self[i], other[i]) for i in range(n)])

    def __neg__(self):
        return UPoly(self.field, [self.field.neg(c) for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        F = self.field
        if self.is_zero() or other.is_zero():
            return UPoly.zero(F)
        out = [F.zero()] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if F.is_zero(a):
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = F.add(out[i + j], F.mul(a, b))
        return UPoly(F, out)

    def scale(self, c):
        F = self.field
        return UPoly(F, [F.mul(a, c) for a in self.coeffs])

    def __pow__(self, n: int):
        result = UPoly.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def shift(self, k: int):
        """Multiply by x^k."""
        if self.is_zero():
            return self
        return UPoly(self.field, (self.field.zero(),) * k + self.coeffs)

    def divmod(self, other):
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        d = other.degree()
        monic = F.eq(other.lc(), F.one())
        lc_inv = None if monic else F.inv(other.lc())
        q = [F.zero()] * max(len(rem) - d, 0)
        body = other.coeffs[:-1]
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if F.is_zero(c):
                continue
            factor = c if monic else F.mul(c, lc_inv)
            q[i - d] = factor
            rem[i] = F.zero()
            for j, b in enumerate(body):
                if F.is_zero(b):
                    continue
                rem[i - d + j] = F.sub(rem[i - d + j], F.mul(factor, b))
        return UPoly(F, q), UPoly(F, rem)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ArithmeticError("exact_div: not divisible")
        return q

    def __eq__(self, other):
        if not isinstance(other, UPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(self.field.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):
        return hash((len(self.coeffs), tuple(self.field.render(c) for c in self.coeffs)))

    def derivative(self):
        F = self.field
        out = []
        for i in range(1, len(self.coeffs)):
            out.append(F.mul(self.coeffs[i], F.from_int(i)))
        return UPoly(F, out)

    def eval(self, x):
        F = self.field
        acc = F.zero()
        for c in reversed(self.coeffs):
            acc = F.add(F.mul(acc, x), c)
        return acc

    def map_coeffs(self, fn, new_field):
        return UPoly(new_field, [fn(c) for c in self.coeffs])

    def deflate(self, p: int):
        """Write self = u(x^p); requires all other coefficients zero."""
        out = []
        for i, c in enumerate(self.coeffs):
            if i % p == 0:
                out.append(c)
            elif not self.field.is_zero(c):
                raise ArithmeticError("deflate: not a polynomial in x^p")
        return UPoly(self.field, out)

    def pth_root(self):
        """p-th root as a polynomial, or None (needs field.pth_root)."""
        p = self.field.characteristic()
        if p == 0 or not hasattr(self.field, "pth_root"):
            return None
        out = []
        for i, c in enumerate(self.coeffs):
            if i % p == 0:
                r = self.field.pth_root(c)
                if r is None:
                    return None
                out.append(r)
            elif not self.field.is_zero(c):
                return None
        return UPoly(self.field, out)

    def render(self, var="y"):
        if self.is_zero():
            return "0"
        F = self.field
        bits = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if F.is_zero(c):
                continue
            cs = F.render(c)
            if i == 0:
                bits.append(cs)
                continue
            xs = var if i == 1 else f"{var}^{i}"
            if cs == "1":
                bits.append(xs)
            elif cs == "-1":
                bits.append(f"-{xs}")
            elif any(ch in cs for ch in "+-*/ ") and not (cs.startswith("-") and _plain_term(cs[1:])):
                bits.append(f"({cs})*{xs}")
            else:
                bits.append(f"{cs}*{xs}")
        s = bits[0]
        for b in bits[1:]:
            s += " - " + b[1:] if b.startswith("-") else " + " + b
        return s

    def __repr__(self):
        return self.render()


def _plain_term(s: str) -> bool:
    return not any(ch in s for ch in "+-*/ ")


def upoly_gcd(f: UPoly, g: UPoly) -> UPoly:
    """Monic gcd by the Euclidean algorithm."""
    while not g.is_zero():
        f, g = g, f % g
    if f.is_zero():
        return f
    return f.monic()


def upoly_ext_gcd(f: UPoly, g: UPoly):
    """Extended gcd: returns (d, s, t) monic d = s*f + t*g."""
    F = f.field
    r0, r1 = f, g
    s0, s1 = UPoly.one(F), UPoly.zero(F)
    t0, t1 = UPoly.zero(F), UPoly.one(F)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc_inv = F.inv(r0.lc())
    return r0.scale(lc_inv), s0.scale(lc_inv), t0.scale(lc_inv)


def upoly_powmod(base: UPoly, e: int, mod: UPoly) -> UPoly:
    result = UPoly.one(base.field)
    base = base % mod
    while e:
        if e & 1:
            result = (result * base) % mod
        base = (base * base) % mod
        e >>= 1
    return result


# ---------------------------------------------------------------------------
# simple field extensions (towers)
# ---------------------------------------------------------------------------

class TowerField:
    """Simple extension base(gen) with gen a root of ``minpoly``.

    Elements are tuples of base elements of length ``deg(minpoly)``.
    ``radical_var``: if the minpoly is ``y^p - c`` with ``c`` a constant
    multiple of a single base variable, the variable name is recorded to
    enable p-th power testing over function-field towers.
    """

    def __init__(self, base, minpoly: UPoly, name: str, radical_var=None):
        if not minpoly.is_monic() or minpoly.degree() < 2:
            raise ValueError("tower minpoly must be monic of degree >= 2")
        self.base = base
        self.minpoly = minpoly
        self.deg = minpoly.degree()
        self.name = name
        self.radical_var = radical_var

    # -- element helpers ----------------------------------------------------
    def embed(self, a):
        return (a,) + (self.base.zero(),) * (self.deg - 1)

    def gen_elem(self):
        out = [self.base.zero()] * self.deg
        out[1] = self.base.one()
        return tuple(out)

    def from_upoly(self, f: UPoly):
        f = f % self.minpoly
        return tuple(f[i] for i in range(self.deg))

    def to_upoly(self, a) -> UPoly:
        return UPoly(self.base, a)

    # -- field protocol -------------------------------------------------------
    def zero(self):
        return (self.base.zero(),) * self.deg

    def one(self):
        return self.embed(self.base.one())

    def from_int(self, n):
        return self.embed(self.base.from_int(n))

    def add(self, a, b):
        return tuple(self.base.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.base.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.base.neg(x) for x in a)

    def mul(self, a, b):
        prod = self.to_upoly(a) * self.to_upoly(b)
        return self.from_upoly(prod)

    def inv(self, a):
        f = self.to_upoly(a)
        if f.is_zero():
            raise ZeroDivisionError("inverse of zero in tower field")
        d, s, _ = upoly_ext_gcd(f, self.minpoly)
        if d.degree() != 0:
            raise ArithmeticError("minpoly not irreducible: gcd found")
        return self.from_upoly(s.scale(self.base.inv(d.coeffs[0])))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def eq(self, a, b):
        return all(self.base.eq(x, y) for x, y in zip(a, b))

    def is_zero(self, a):
        return all(self.base.is_zero(x) for x in a)

    def characteristic(self):
        return self.base.characteristic()

    def size(self):
        s = self.base.size()
        return None if s is None else s ** self.deg

    def pth_root(self, a):
        p = self.characteristic()
        q = self.size()
        if q is not None:
            # Frobenius inverse in a finite field
            e = q // p
            return self._pow(a, e)
        return _tower_pth_root(self, a)

    def _pow(self, a, e):
        result = self.one()
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def render(self, a):
        f = self.to_upoly(a)
        return f.render(var=self.name)

    def random(self, rng: Random):
        return tuple(self.base.random(rng) for _ in range(self.deg))

    def tower_levels(self):
        """Names and minpolys bottom-up, ending with this level."""
        if isinstance(self.base, TowerField):
            return self.base.tower_levels() + [(self.name, self.minpoly)]
        return [(self.name, self.minpoly)]

    def bottom(self):
        return self.base.bottom() if isinstance(self.base, TowerField) else self.base

    def __eq__(self, other):
        return (
            isinstance(other, TowerField)
            and other.base == self.base
            and other.minpoly == self.minpoly
        )

    def __hash__(self):
        return hash(("TowerField", self.name, self.deg))

    def __repr__(self):
        return f"{self.base!r}({self.name})"


def embed_chain(value, src, dst):
    """Embed ``value`` from field ``src`` into ``dst`` (dst built over src)."""
    if src == dst:
        return value
    if isinstance(dst, TowerField):
        return dst.embed(embed_chain(value, src, dst.base))
    raise ValueError("embed_chain: src is not below dst")


def _tower_radical_data(field):
    """Collect (var_name, gen_index) for radical function-field towers.

    Returns (bottom_field, [(var, level)]) or raises UnsupportedFactorization
    when a level is not a recorded ``y^p - c*var`` binomial.
    """
    levels = []
    f = field
    while isinstance(f, TowerField):
        if f.radical_var is None:
            raise UnsupportedFactorization(
                "function-field tower level without binomial structure"
            )
        levels.append((f.radical_var, f))
        f = f.base
    levels.reverse()
    return f, levels


def _tower_pth_root(field: TowerField, a):
    """p-th root in a radical function-field tower, or None.

    Every p-th power lies in the span of ``base^p * prod(c_j^{i_j})``
    inside the bottom fraction field, so the element must be
    base-embedded and its monomial classes must match the adjoined
    radicals.
    """
    p = field.characteristic()
    bottom, levels = _tower_radical_data(field)
    if not isinstance(bottom, FracMVField):
        raise UnsupportedFactorization("unsupported tower bottom for p-th roots")
    # the element must live in the bottom field
    cur, fld = a, field
    chain = []
    while isinstance(fld, TowerField):
        if any(not fld.base.is_zero(c) for c in cur[1:]):
            return None
        chain.append(fld)
        cur, fld = cur[0], fld.base
    w = cur  # FracMV in the bottom field
    ring = bottom.ring
    var_index = {}
    for name, lev in levels:
        if name not in ring.vars:
            raise UnsupportedFactorization("radical variable missing from base ring")
        vi = ring.vars.index(name)
        if vi in var_index:
            raise UnsupportedFactorization("repeated radical variable in tower")
        var_index[vi] = lev
    h = w.num * w.den ** (p - 1)
    # bucket monomials of h by exponents mod p; classes must be supported
    # on radical variables only
    buckets: dict[tuple, dict] = {}
    for e, c in h.terms.items():
        rho = tuple(x % p for x in e)
        for i, r in enumerate(rho):
            if r and i not in var_index:
                return None
        buckets.setdefault(rho, {})[tuple((x - r) // p for x, r in zip(e, rho))] = c
    K = ring.coeff
    root = field.zero()
    for rho, terms in buckets.items():
        b = MPoly(ring, {e: K.pth_root(c) for e, c in terms.items()})
        piece = bottom.from_poly(b) / bottom.from_poly(w.den)
        elem = embed_chain(piece, bottom, field)
        for i, r in enumerate(rho):
            if r:
                lev = var_index[i]
                g = embed_chain(lev.gen_elem(), lev, field)
                elem = field.mul(elem, field._pow(g, r))
        root = field.add(root, elem)
    # certify
    if not field.eq(field._pow(root, p), a):
        return None
    return root


# ---------------------------------------------------------------------------
# univariate factorization
# ---------------------------------------------------------------------------

def factor_univariate(f: UPoly) -> list[tuple[UPoly, int]]:
    """Factor a nonzero univariate polynomial over its residue field.

    Returns monic irreducible factors with multiplicities, sorted
    deterministically; the product (times the leading unit) is certified
    to equal the input.  Over infinite char-p fields the routine is
    deliberately partial and raises UnsupportedFactorization outside the
    supported patterns.
    """
    if f.is_zero():
        raise ValueError("cannot factor the zero polynomial")
    f = f.monic()
    if f.degree() == 0:
        return []
    field = f.field
    if field.size() is not None:
        factors = _factor_finite(f)
    elif field.characteristic() > 0:
        factors = _factor_funcfield(f)
    else:
        raise UnsupportedFactorization("factorization over char-0 residue fields")
    out: dict = {}
    for g, m in factors:
        g = g.monic()
        matched = False
        for h in out:
            if h == g:
                out[h] += m
                matched = True
                break
        if not matched:
            out[g] = m
    result = sorted(out.items(), key=lambda it: (it[0].degree(), it[0].render()))
    # certify by multiplying back
    prod = UPoly.one(field)
    for g, m in result:
        prod = prod * g ** m
    if prod != f:
        raise ArithmeticError("factorization failed to certify")
    return result


def _factor_finite(f: UPoly):
    out = []
    for g, m in _squarefree_decompose(f):
        for h in _factor_squarefree_finite(g):
            out.append((h, m))
    return out


def _squarefree_decompose(f: UPoly):
    """Squarefree decomposition, valid in characteristic p."""
    field = f.field
    p = field.characteristic()
    out = []
    fp = f.derivative()
    if fp.is_zero():
        root = f.pth_root()
        if root is None:
            raise UnsupportedFactorization("inseparable polynomial without p-th root")
        return [(g, m * p) for g, m in _squarefree_decompose(root)]
    c = upoly_gcd(f, fp)
    w = f.exact_div(c)
    i = 1
    while w.degree() > 0:
        y = upoly_gcd(w, c)
        z = w.exact_div(y)
        if z.degree() > 0:
            out.append((z, i))
        i += 1
        w = y
        c = c.exact_div(y)
    if c.degree() > 0:
        root = c.pth_root()
        if root is None:
            raise UnsupportedFactorization("inseparable part without p-th root")
        out.extend((g, m * p) for g, m in _squarefree_decompose(root))
    return out


def _factor_squarefree_finite(f: UPoly):
    """Distinct-degree + equal-degree splitting over a finite field."""
    field = f.field
    q = field.size()
    out = []
    x = UPoly.gen(field)
    h = x
    rest = f
    d = 0
    while rest.degree() > 2 * (d + 1) - 1 and rest.degree() > 0:
        d += 1
        h = upoly_powmod(h, q, rest)
        g = upoly_gcd(h - x, rest)
        if g.degree() > 0:
            out.extend(_equal_degree_split(g, d))
            rest = rest.exact_div(g)
            h = h % rest
    if rest.degree() > 0:
        out.append(rest.monic())
    return out


def _equal_degree_split(f: UPoly, d: int):
    """Cantor-Zassenhaus splitting of a product of degree-d irreducibles."""
    field = f.field
    if f.degree() == d:
        return [f.monic()]
    q = field.size()
    p = field.characteristic()
    rng = Random(zlib.crc32(f.render().encode()) ^ (d * 7919))
    while True:
        r = UPoly(field, [field.random(rng) for _ in range(f.degree())])
        if r.is_zero():
            continue
        if p == 2:
            # trace map over GF(2^k)
            k = q.bit_length() - 1
            b = r % f
            acc = b
            for _ in range(k * d - 1):
                b = (b * b) % f
                acc = acc + b
            g = upoly_gcd(acc, f)
        else:
            e = (q ** d - 1) // 2
            b = upoly_powmod(r, e, f)
            g = upoly_gcd(b - UPoly.one(field), f)
        if 0 < g.degree() < f.degree():
            return _equal_degree_split(g, d) + _equal_degree_split(f.exact_div(g), d)


def _factor_funcfield(f: UPoly):
    """Partial factorization over infinite char-p fields.

    Supported: linear factors, monomial factors y^k, perfect p-th
    powers, irreducible binomials y^p - c, and products of those reached
    through gcd splitting.
    """
    field = f.field
    p = field.characteristic()
    if f.degree() == 0:
        return []
    if f.degree() == 1:
        return [(f, 1)]
    # strip monomial factor
    k = 0
    while field.is_zero(f[0]) and f.degree() > 0:
        f = UPoly(field, f.coeffs[1:])
        k += 1
    out = [(UPoly.gen(field), k)] if k else []
    if f.degree() == 0:
        return out
    if f.degree() == 1:
        return out + [(f, 1)]
    fp = f.derivative()
    if fp.is_zero():
        root = f.pth_root()
        if root is not None:
            return out + [(g, m * p) for g, m in _factor_funcfield(root)]
        u = f.deflate(p)
        if u.degree() == 1:
            # y^p - c with c not a p-th power: irreducible
            return out + [(f, 1)]
        raise UnsupportedFactorization(
            f"inseparable non-binomial over a function field: {f.render()}"
        )
    d = upoly_gcd(f, fp)
    if d.degree() == 0:
        raise UnsupportedFactorization(
            f"squarefree non-binomial over a function field: {f.render()}"
        )
    w = f.exact_div(d)
    return out + _factor_funcfield(w) + _factor_funcfield(d)


# ---------------------------------------------------------------------------
# characteristic polynomial (division-free Berkowitz)
# ---------------------------------------------------------------------------

def berkowitz_charpoly(field, matrix) -> UPoly:
    """Characteristic polynomial det(xI - M) by Berkowitz's algorithm.

    Division-free, so exact over any commutative coefficient field.
    ``matrix`` is a list of rows of field elements.
    """
    n = len(matrix)
    if n == 0:
        return UPoly.one(field)
    F = field
    # vectors represent polynomials highest degree first
    transforms = []
    for k in range(n - 1, 0, -1):
        # principal k+1 x k+1 leading submatrix data
        a = matrix[k][k]
        R = matrix[k][:k]           # row vector
        C = [matrix[i][k] for i in range(k)]  # column vector
        A = [row[:k] for row in matrix[:k]]
        # Toeplitz column: [1, -a, -R C, -R A C, -R A^2 C, ...]
        col = [F.one(), F.neg(a)]
        vec = C
        for _ in range(k):
            rv = F.zero()
            for x, y in zip(R, vec):
                rv = F.add(rv, F.mul(x, y))
            col.append(F.neg(rv))
            vec = [
                _dot(F, A[i], vec)
                for i in range(k)
            ]
        transforms.append((k + 1, col))
    poly = [F.one(), F.neg(matrix[0][0])]
    for k1, col in reversed(transforms):
        # multiply Toeplitz (k1+1 x k1) by poly (length k1)
        new = []
        for i in range(k1 + 1):
            s = F.zero()
            for j in range(len(poly)):
                idx = i - j
                if 0 <= idx < len(col):
                    s = F.add(s, F.mul(col[idx], poly[j]))
            new.append(s)
        poly = new
    return UPoly(field, list(reversed(poly)))


def _dot(F, row, vec):
    s = F.zero()
    for x, y in zip(row, vec):
        s = F.add(s, F.mul(x, y))
    return s


# ---------------------------------------------------------------------------
# subresultant PRS resultant over a UFD domain
# ---------------------------------------------------------------------------

class ZZRing:
    """Integer domain adapter for the PRS resultant."""

    def zero(self):
        return 0

    def one(self):
        return 1

    def from_int(self, n):
        return n

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def is_zero(self, a):
        return a == 0

    def eq(self, a, b):
        return a == b

    def exact_div(self, a, b):
        q, r = divmod(a, b)
        if r:
            raise ArithmeticError("exact_div: not divisible")
        return q

    def render(self, a):
        return str(a)


def _ddeg(f):
    return len(f) - 1


def _dtrim(dom, f):
    while f and dom.is_zero(f[-1]):
        f.pop()
    return f


def _dneg(dom, f):
    return [dom.neg(c) for c in f]


def _dscale(dom, f, c):
    return _dtrim(dom, [dom.mul(a, c) for a in f])


def _dsub(dom, f, g):
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else dom.zero()
        b = g[i] if i < len(g) else dom.zero()
        out.append(dom.sub(a, b))
    return _dtrim(dom, out)


def _dprem(dom, f, g):
    """Pseudo-remainder of dense lists (lowest first) over a domain."""
    df, dg = _ddeg(f), _ddeg(g)
    if dg < 0:
        raise ZeroDivisionError("pseudo-division by zero")
    r = list(f)
    lc_g = g[-1]
    n = df - dg + 1
    while _ddeg(r) >= dg:
        dr = _ddeg(r)
        lc_r = r[-1]
        shifted = [dom.zero()] * (dr - dg) + list(g)
        r = _dsub(dom, _dscale(dom, r, lc_g), _dscale(dom, shifted, lc_r))
        n -= 1
    if n > 0:
        r = _dscale(dom, r, _dpow(dom, lc_g, n))
    return r


def _dpow(dom, a, n):
    result = dom.one()
    while n:
        if n & 1:
            result = dom.mul(result, a)
        a = dom.mul(a, a)
        n >>= 1
    return result


def prs_resultant(dom, f, g):
    """Resultant of dense coefficient lists over a UFD domain.

    Brown's subresultant PRS; returns a domain element.  Lists are
    lowest-degree-first and must not carry trailing zeros.
    """
    f, g = list(f), list(g)
    if not f or not g:
        return dom.zero()
    n, m = _ddeg(f), _ddeg(g)
    if n < m:
        sign = dom.one() if (n * m) % 2 == 0 else dom.neg(dom.one())
        return dom.mul(sign, prs_resultant(dom, g, f))
    if m == 0:
        return _dpow(dom, g[0], n)
    d = n - m
    b = dom.one() if (d + 1) % 2 == 0 else dom.neg(dom.one())
    h = _dscale(dom, _dprem(dom, f, g), b)
    lc = g[-1]
    c = _dpow(dom, lc, d)
    S = [dom.one(), c]
    c = dom.neg(c)
    fcur, gcur = g, h
    mcur = m
    while gcur:
        k = _ddeg(gcur)
        d = mcur - k
        b = dom.neg(dom.mul(lc, _dpow(dom, c, d)))
        h = _dprem(dom, fcur, gcur)
        h = [dom.exact_div(x, b) for x in h]
        lc = gcur[-1]
        if d > 1:
            num = _dpow(dom, dom.neg(lc), d)
            c = dom.exact_div(num, _dpow(dom, c, d - 1))
        else:
            c = dom.neg(lc)
        S.append(dom.neg(c))
        fcur, gcur, mcur = gcur, h, k
    if _ddeg(fcur) > 0:
        return dom.zero()
    return S[-1]


# ---------------------------------------------------------------------------
# finitely generated subgroups of Q^r
# ---------------------------------------------------------------------------

class RatLattice:
    """Finitely generated subgroup of Q^r, closed under the generators.

    Stored as an integer row lattice after clearing denominators (the
    Hermite basis is computed once); rank r is 1 or 2 here.  Supports
    membership tests and least positive multipliers.
    """

    def __init__(self, rank: int, generators):
        self.rank = rank
        self.gens = [tuple(Fraction(x) for x in g) for g in generators]
        denom = 1
        for g in self.gens:
            for x in g:
                denom = denom * x.denominator // _gcd(denom, x.denominator)
        rows = [[int(x * denom) for x in g] for g in self.gens if any(g)]
        self._denom = denom
        self._basis = _hnf(rows, rank) if rows else []

    def extend(self, gen):
        return RatLattice(self.rank, self.gens + [tuple(Fraction(x) for x in gen)])

    def contains(self, vec) -> bool:
        vec = tuple(Fraction(x) for x in vec)
        if not any(vec):
            return True
        if not self._basis:
            return False
        dv = 1
        for x in vec:
            dv = dv * x.denominator // _gcd(dv, x.denominator)
        M = self._denom * dv // _gcd(self._denom, dv)
        scale = M // self._denom
        target = [int(x * M) for x in vec]
        basis = [[scale * a for a in row] for row in self._basis]
        return _hnf_solve(basis, target)

    def least_multiple(self, vec, bound=10**6) -> int:
        """Least e >= 1 with e*vec in the lattice."""
        vec = tuple(Fraction(x) for x in vec)
        if not any(vec):
            return 1
        e = 1
        while e <= bound:
            if self.contains([e * x for x in vec]):
                return e
            e += 1
        raise ArithmeticError("least_multiple: no multiplier found below bound")


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


def _hnf(rows, rank):
    """Row Hermite normal form of an integer matrix (small sizes)."""
    rows = [list(r) for r in rows if any(r)]
    basis = []
    for col in range(rank):
        pivot_rows = [r for r in rows if r[col] != 0]
        if not pivot_rows:
            continue
        while True:
            pivot_rows.sort(key=lambda r: abs(r[col]))
            p = pivot_rows[0]
            done = True
            for r in pivot_rows[1:]:
                q = r[col] // p[col]
                for i in range(rank):
                    r[i] -= q * p[i]
                if r[col] != 0:
                    done = False
            pivot_rows = [r for r in pivot_rows if r[col] != 0]
            if done or len(pivot_rows) <= 1:
                break
        p = pivot_rows[0]
        if p[col] < 0:
            p = [-x for x in p]
        basis.append(p)
        rows = [r for r in rows if r is not p and not (r[col] != 0 and r == p)]
        new_rows = []
        for r in rows:
            if r[col] != 0:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
            if any(r):
                new_rows.append(r)
        rows = new_rows
    return basis


def _hnf_solve(basis, target) -> bool:
    """Decide membership of an integer vector in the HNF row lattice."""
    t = list(target)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x != 0)
        if t[col] % row[col] != 0:
            return False
        q = t[col] // row[col]
        t = [a - q * b for a, b in zip(t, row)]
    return not any(t)


# ---------------------------------------------------------------------------
# expression parsing (coefficient grammar)
# ---------------------------------------------------------------------------

class ExprParser:
    """Recursive-descent parser for the coefficient grammar.

    Accepts integers, named generators, ``+ - * / ^`` and parentheses;
    evaluates directly into a field context via ``resolve(name)``.
    """

    def __init__(self, field, resolve):
        self.field = field
        self.resolve = resolve

    def parse(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0
        value = self._expr()
        if self.pos != len(self.tokens):
            raise ValueError(f"trailing input in expression: {text!r}")
        return value

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _next(self):
        tok = self._peek()
        self.pos += 1
        return tok

    def _expr(self):
        F = self.field
        value = self._term()
        while self._peek() in ("+", "-"):
            op = self._next()
            rhs = self._term()
            value = F.add(value, rhs) if op == "+" else F.sub(value, rhs)
        return value

    def _term(self):
        F = self.field
        value = self._factor()
        while self._peek() in ("*", "/"):
            op = self._next()
            rhs = self._factor()
            value = F.mul(value, rhs) if op == "*" else F.div(value, rhs)
        return value

    def _factor(self):
        F = self.field
        base = self._base()
        if self._peek() == "^":
            self._next()
            sign = 1
            if self._peek() == "-":
                self._next()
                sign = -1
            tok = self._next()
            if not isinstance(tok, int):
                raise ValueError("exponent must be an integer")
            e = tok
            if sign < 0:
                base = F.inv(base)
            out = F.one()
            for _ in range(e):
                out = F.mul(out, base)
            return out
        return base

    def _base(self):
        F = self.field
        tok = self._next()
        if tok == "-":
            return F.neg(self._factor())
        if tok == "+":
            return self._factor()
        if tok == "(":
            value = self._expr()
            if self._next() != ")":
                raise ValueError("unbalanced parenthesis")
            return value
        if isinstance(tok, int):
            return F.from_int(tok)
        if isinstance(tok, str) and tok.isidentifier():
            return self.resolve(tok)
        raise ValueError(f"unexpected token {tok!r}")


def _tokenize(text: str):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            tokens.append(int(text[i:j]))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < len(text) and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(text[i:j])
            i = j
        elif ch in "+-*/^()":
            tokens.append(ch)
            i += 1
        else:
            raise ValueError(f"bad character {ch!r} in expression")
    return tokens
