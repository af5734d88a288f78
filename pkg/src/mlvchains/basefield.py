"""Valued coefficient-field backends with residue fields and factorization.

Three backends:

* ``Q_padic``   -- (Q, ord_p); residue field F_p.
* ``Fp_rft``    -- F_p(vars)(t) with the t-adic valuation; residue field
  F_p(vars).  Exact rational functions replace the Laurent-series field
  they approximate: every chain computation stays inside this subfield.
* ``Qt_rank2``  -- Q(t) with the rank-two valuation
  v(u) = (ord_t(u), ord_p(in(u))), in(u) the lowest t-coefficient;
  residue field F_p.

Each backend fixes a monomial section of its value group (p^m, t^m,
t^m p^n); residues of units are always taken through that section.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from random import Random

from .errors import InputError, NegativeValue, UnsupportedFactorization
from .ordgroup import GroupValue, infinity, rank1, rank2
from .rings import (
    ExprParser,
    FracMV,
    FracMVField,
    GFp,
    MPolyRing,
    QQ_FIELD,
    RatLattice,
    TowerField,
    UPoly,
    ZZRing,
    factor_univariate,
)


def ord_p_fraction(a: Fraction, p: int) -> int:
    """p-adic order of a nonzero rational."""
    if a == 0:
        raise ZeroDivisionError("ord_p of zero")
    n, d, v = a.numerator, a.denominator, 0
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


# ---------------------------------------------------------------------------
# residue fields
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueField:
    """A residue field: a rings context plus construction data.

    ``kind`` is one of ``prime``, ``finite_tower``, ``rational_function``
    or ``function_field_tower``; ``steps`` lists the tower extensions
    (generator name, minimal polynomial) bottom-up.
    """

    kind: str
    ctx: object
    p: int
    vars: tuple = ()
    steps: tuple = ()

    def extend(self, name: str, minpoly: UPoly) -> "ResidueField":
        """Adjoin a root of a certified-irreducible minimal polynomial.

        Degree-one minimal polynomials do not change the field; the
        caller keeps the root (-constant term) instead.
        """
        if minpoly.degree() < 2:
            raise InputError("extend needs degree >= 2; use the root directly")
        facs = factor_univariate(minpoly)
        if len(facs) != 1 or facs[0][1] != 1 or facs[0][0].degree() != minpoly.degree():
            raise InputError("tower step minimal polynomial is reducible")
        radical = _binomial_radical_var(self, minpoly)
        new_ctx = TowerField(self.ctx, minpoly, name, radical_var=radical)
        new_kind = self.kind
        if self.kind == "prime":
            new_kind = "finite_tower"
        elif self.kind == "rational_function":
            new_kind = "function_field_tower"
        return ResidueField(
            new_kind, new_ctx, self.p, self.vars, self.steps + ((name, minpoly),)
        )

    def degree_over_base(self) -> int:
        d = 1
        for _, mp in self.steps:
            d *= mp.degree()
        return d

    def describe(self) -> dict:
        out = {"kind": self.kind, "p": self.p}
        if self.vars:
            out["vars"] = list(self.vars)
        if self.steps:
            out["tower"] = [
                {"gen": name, "minpoly": mp.render(var="y")} for name, mp in self.steps
            ]
        return out


def _binomial_radical_var(base: ResidueField, minpoly: UPoly):
    """Detect ``y^p - c*var`` tower steps over function fields."""
    if base.kind not in ("rational_function", "function_field_tower"):
        return None
    p = base.ctx.characteristic()
    if minpoly.degree() != p:
        return None
    if any(not base.ctx.is_zero(minpoly[i]) for i in range(1, p)):
        return None
    c = base.ctx.neg(minpoly[0])
    # climb to the bottom fraction field
    ctx = base.ctx
    while isinstance(ctx, TowerField):
        if any(not ctx.base.is_zero(x) for x in c[1:]):
            return None
        c = c[0]
        ctx = ctx.base
    if not isinstance(c, FracMV):
        return None
    if not c.den.is_one() or len(c.num.terms) != 1:
        return None
    (exps, _coef), = c.num.terms.items()
    live = [i for i, e in enumerate(exps) if e]
    if len(live) != 1 or exps[live[0]] != 1:
        return None
    return c.num.ring.vars[live[0]]


def prime_residue_field(p: int) -> ResidueField:
    return ResidueField("prime", GFp(p), p)


def rational_function_residue_field(p: int, variables) -> ResidueField:
    ring = MPolyRing(GFp(p), tuple(variables))
    return ResidueField("rational_function", FracMVField(ring), p, tuple(variables))


def residue_factorize(k: ResidueField, f: UPoly):
    """Complete factorization over the residue field ``k``.

    Returns (unit, [(monic irreducible, multiplicity)]); the product is
    certified inside :func:`~mlvchains.rings.factor_univariate`.  Over
    function fields the routine is partial and raises
    UnsupportedFactorization outside binomial/monomial/linear patterns.
    """
    if f.is_zero():
        raise InputError("cannot factor the zero polynomial")
    unit = f.lc()
    return unit, factor_univariate(f)


# ---------------------------------------------------------------------------
# valued fields
# ---------------------------------------------------------------------------

class ValuedField:
    """Common backend interface; see module docstring for the variants."""

    kind: str
    rank: int

    # subclasses provide: arith (field ctx for K-elements), residue_field_obj,
    # val, residue, lift, section, vk_lattice, parse/render, descriptor.

    def val(self, a) -> GroupValue:
        raise NotImplementedError

    def residue(self, a):
        raise NotImplementedError

    def lift(self, r):
        raise NotImplementedError

    def section(self, gamma: GroupValue):
        raise NotImplementedError

    def zero_value(self) -> GroupValue:
        return GroupValue(self.rank, (Fraction(0),) * self.rank)

    def infinity(self) -> GroupValue:
        return infinity(self.rank)

    def render(self, a) -> str:
        return self.arith.render(a)

    def parse(self, text: str):
        parser = ExprParser(self.arith, self._resolve_name)
        return parser.parse(text)

    def _resolve_name(self, name):
        raise InputError(f"unknown symbol {name!r} in this field")

    def residue_ctx(self):
        return self.residue_field_obj.ctx

    def __eq__(self, other):
        return isinstance(other, ValuedField) and other.describe() == self.describe()

    def __hash__(self):
        return hash(str(self.describe()))


class RationalsPadic(ValuedField):
    """(Q, ord_p) with the section m -> p^m."""

    kind = "Q_padic"
    rank = 1

    def __init__(self, p: int):
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.arith = QQ_FIELD
        self.residue_field_obj = prime_residue_field(p)

    def val(self, a: Fraction) -> GroupValue:
        if a == 0:
            return self.infinity()
        return rank1(ord_p_fraction(a, self.p))

    def residue(self, a: Fraction) -> int:
        if a == 0:
            return 0
        if ord_p_fraction(a, self.p) < 0:
            raise NegativeValue(f"residue of {a} has negative value")
        num = a.numerator % self.p
        den = a.denominator % self.p
        return (num * pow(den, self.p - 2, self.p)) % self.p

    def lift(self, r: int) -> Fraction:
        return Fraction(r % self.p)

    def section(self, gamma: GroupValue) -> Fraction:
        m = gamma.coords[0]
        if m.denominator != 1:
            raise InputError(f"{gamma.render()} is not in the base value group")
        return Fraction(self.p) ** int(m)

    def vk_lattice(self) -> RatLattice:
        return RatLattice(1, [(Fraction(1),)])

    def describe(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def random_element(self, rng: Random) -> Fraction:
        a = Fraction(rng.randint(1, 50), rng.randint(1, 50))
        if rng.random() < 0.5:
            a = -a
        return a * Fraction(self.p) ** rng.randint(-3, 3)

    def resultant_domain(self):
        dom = ZZRing()

        def to_parts(coeffs):
            lcm = 1
            for c in coeffs:
                lcm = lcm * c.denominator // _igcd(lcm, c.denominator)
            return [int(c * lcm) for c in coeffs], Fraction(lcm)

        def from_dom(x):
            return Fraction(x)

        return dom, to_parts, from_dom

    def __repr__(self):
        return f"Q(ord_{self.p})"


def _igcd(a, b):
    while b:
        a, b = b, a % b
    return abs(a)


class FpRatFuncLaurent(ValuedField):
    """F_p(vars)(t) with v = ord_t and the section m -> t^m.

    Elements are fractions of polynomials in vars + (t,); this is the
    exact sub-field of the Laurent-series field that every bundled
    computation lives in.
    """

    kind = "Fp_rft"
    rank = 1

    def __init__(self, p: int, variables):
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.vars = tuple(variables)
        if "t" in self.vars:
            raise InputError("'t' is the uniformizer, not a residue variable")
        self.ring = MPolyRing(GFp(p), self.vars + ("t",))
        self.arith = FracMVField(self.ring)
        self.t_index = len(self.vars)
        self.residue_field_obj = rational_function_residue_field(p, self.vars)
        self._res_ring = self.residue_field_obj.ctx.ring

    def _resolve_name(self, name):
        if name == "t" or name in self.vars:
            return self.arith.gen(name)
        raise InputError(f"unknown symbol {name!r} in this field")

    def val(self, a: FracMV) -> GroupValue:
        if a.is_zero():
            return self.infinity()
        return rank1(a.num.min_exp(self.t_index) - a.den.min_exp(self.t_index))

    def residue(self, a: FracMV) -> FracMV:
        if a.is_zero():
            return self.residue_field_obj.ctx.zero()
        v = a.num.min_exp(self.t_index) - a.den.min_exp(self.t_index)
        if v < 0:
            raise NegativeValue("residue of an element of negative value")
        k = a.den.min_exp(self.t_index)
        num = a.num.shift_var(self.t_index, -k)
        den = a.den.shift_var(self.t_index, -k)
        rnum = num.subs_zero(self.t_index, self._res_ring)
        rden = den.subs_zero(self.t_index, self._res_ring)
        return FracMV(rnum, rden)

    def lift(self, r: FracMV) -> FracMV:
        return FracMV(r.num.embed(self.ring), r.den.embed(self.ring))

    def section(self, gamma: GroupValue) -> FracMV:
        m = gamma.coords[0]
        if m.denominator != 1:
            raise InputError(f"{gamma.render()} is not in the base value group")
        m = int(m)
        one = self.ring.one()
        t_pow = self.ring.monomial((0,) * len(self.vars) + (abs(m),))
        if m >= 0:
            return FracMV(t_pow, one)
        return FracMV(one, t_pow)

    def vk_lattice(self) -> RatLattice:
        return RatLattice(1, [(Fraction(1),)])

    def describe(self) -> dict:
        return {"kind": self.kind, "p": self.p, "vars": list(self.vars)}

    def random_element(self, rng: Random) -> FracMV:
        num = self.ring.zero()
        for _ in range(rng.randint(1, 3)):
            exps = tuple(rng.randint(0, 2) for _ in self.vars) + (rng.randint(0, 3),)
            c = rng.randrange(1, self.p)
            num = num + self.ring.monomial(exps, c)
        if num.is_zero():
            num = self.ring.one()
        den = self.ring.one() + self.ring.monomial(
            (0,) * len(self.vars) + (rng.randint(1, 2),), rng.randrange(1, self.p)
        )
        return FracMV(num, den)

    def resultant_domain(self):
        dom = self.ring

        def to_parts(coeffs):
            den_prod = self.ring.one()
            for c in coeffs:
                den_prod = den_prod * c.den
            out = [c.num * den_prod.exact_div(c.den) for c in coeffs]
            return out, FracMV(den_prod, self.ring.one())

        def from_dom(x):
            return FracMV(x, self.ring.one())

        return dom, to_parts, from_dom

    def __repr__(self):
        return f"F{self.p}({','.join(self.vars)})(t)"


class RationalFunctionRank2(ValuedField):
    """Q(t) with the rank-two valuation (ord_t(u), ord_p(in(u)))."""

    kind = "Qt_rank2"
    rank = 2

    def __init__(self, p: int):
        if not _is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.ring = MPolyRing(QQ_FIELD, ("t",))
        self.arith = FracMVField(self.ring)
        self.residue_field_obj = prime_residue_field(p)

    def _resolve_name(self, name):
        if name == "t":
            return self.arith.gen("t")
        raise InputError(f"unknown symbol {name!r} in this field")

    def initial_coefficient(self, a: FracMV) -> Fraction:
        """in(u): the coefficient of the lowest t-power."""
        if a.is_zero():
            raise ZeroDivisionError("in(0) undefined")
        n0 = a.num.terms[min(a.num.terms)]
        d0 = a.den.terms[min(a.den.terms)]
        return n0 / d0

    def val(self, a: FracMV) -> GroupValue:
        if a.is_zero():
            return self.infinity()
        ot = a.num.min_exp(0) - a.den.min_exp(0)
        return rank2(ot, ord_p_fraction(self.initial_coefficient(a), self.p))

    def residue(self, a: FracMV) -> int:
        if a.is_zero():
            return 0
        v = self.val(a)
        if v < self.zero_value():
            raise NegativeValue("residue of an element of negative value")
        if v > self.zero_value():
            return 0
        c = self.initial_coefficient(a)
        return (c.numerator % self.p) * pow(c.denominator, self.p - 2, self.p) % self.p

    def lift(self, r: int) -> FracMV:
        return self.arith.from_int(r % self.p)

    def section(self, gamma: GroupValue) -> FracMV:
        m, n = gamma.coords
        if m.denominator != 1 or n.denominator != 1:
            raise InputError(f"{gamma.render()} is not in the base value group")
        m, n = int(m), int(n)
        c = Fraction(self.p) ** n
        if m >= 0:
            return FracMV(self.ring.monomial((m,), c), self.ring.one())
        return FracMV(self.ring.const(c), self.ring.monomial((-m,)))

    def vk_lattice(self) -> RatLattice:
        return RatLattice(2, [(Fraction(1), Fraction(0)), (Fraction(0), Fraction(1))])

    def describe(self) -> dict:
        return {"kind": self.kind, "p": self.p}

    def random_element(self, rng: Random) -> FracMV:
        num = self.ring.zero()
        for _ in range(rng.randint(1, 3)):
            c = Fraction(rng.randint(1, 9)) * Fraction(self.p) ** rng.randint(0, 2)
            if rng.random() < 0.5:
                c = -c
            num = num + self.ring.monomial((rng.randint(0, 3),), c)
        if num.is_zero():
            num = self.ring.one()
        return FracMV(num, self.ring.one() + self.ring.monomial((1,), Fraction(1)))

    def resultant_domain(self):
        dom = self.ring

        def to_parts(coeffs):
            den_prod = self.ring.one()
            for c in coeffs:
                den_prod = den_prod * c.den
            out = [c.num * den_prod.exact_div(c.den) for c in coeffs]
            return out, FracMV(den_prod, self.ring.one())

        def from_dom(x):
            return FracMV(x, self.ring.one())

        return dom, to_parts, from_dom

    def __repr__(self):
        return f"Q(t)(rank2,p={self.p})"


def field_from_descriptor(desc: dict) -> ValuedField:
    """Build a backend from the wire descriptor."""
    try:
        kind = desc["kind"]
    except (TypeError, KeyError):
        raise InputError("field descriptor needs a 'kind'")
    if kind == "Q_padic":
        return RationalsPadic(int(desc["p"]))
    if kind == "Fp_rft":
        return FpRatFuncLaurent(int(desc["p"]), tuple(desc.get("vars", ())))
    if kind == "Qt_rank2":
        return RationalFunctionRank2(int(desc["p"]))
    raise InputError(f"unknown field kind {kind!r}")


def render_residue(field: ValuedField, r) -> str:
    return field.residue_field_obj.ctx.render(r) if hasattr(
        field.residue_field_obj.ctx, "render"
    ) else str(r)
