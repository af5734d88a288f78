"""Distance sets, cuts of distances, and Okutsu-sequence verification.

Two distance engines:

* :class:`ChainOracle` -- distances inside L via a terminal chain:
  v(theta - b) = v_theta(x - beta(x)), exact.
* :class:`SeriesOracle` -- the rank-two example: theta = sqrt(1+t) + i
  embedded in truncated series over the p-adics, with per-coefficient
  precision tracking.  A value (m, ord_p(c_m)) is certified iff m < T
  and ord_p(c_m) lies below the tracked precision of that coefficient.

Okutsu verification is relative to sampled data and explicit caller
declarations (unboundedness, max-existence): every report says so.
Full quantifier checks are not decidable from finite samples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import inf

from .basefield import ord_p_fraction
from .errors import InputError, NoRoot, PrecisionExhausted
from .mlv import MLVChain
from .ordgroup import (
    Cut,
    DistanceSet,
    GroupValue,
    cut_from_set,
    infinity,
    plus_inf_minus,
    rank2,
)
from .rings import ExprParser, MPolyRing, QQ_FIELD, UPoly


# ---------------------------------------------------------------------------
# truncated series with p-adic precision tracking
# ---------------------------------------------------------------------------

def _ordp(x: Fraction, p: int):
    if x == 0:
        return inf
    return ord_p_fraction(x, p)


@dataclass(frozen=True)
class TruncatedSeries:
    """sum c_m t^m for m < T; each c_m carries a p-adic precision.

    ``coeffs[m] = (value, prec)``: the true coefficient is congruent to
    ``value`` modulo p^prec (prec = None marks an exact rational).
    Arithmetic tracks worst-case precision.
    """

    p: int
    T: int
    coeffs: tuple

    def prec_of(self, m: int):
        return self.coeffs[m][1]

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        T = min(self.T, other.T)
        out = []
        for m in range(T):
            a, pa = self.coeffs[m]
            b, pb = other.coeffs[m]
            pr = None if (pa is None and pb is None) else min(
                x for x in (pa, pb) if x is not None
            )
            out.append((a + b, pr))
        return TruncatedSeries(self.p, T, tuple(out))

    def __neg__(self) -> "TruncatedSeries":
        return TruncatedSeries(
            self.p, self.T, tuple((-a, pr) for a, pr in self.coeffs)
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        T = min(self.T, other.T)
        vals = [Fraction(0)] * T
        precs = [inf] * T
        for i in range(T):
            a, pa = self.coeffs[i]
            if a == 0 and pa is None:
                continue
            for j in range(T - i):
                b, pb = other.coeffs[j]
                if b == 0 and pb is None:
                    continue
                vals[i + j] += a * b
                # O(p^pa)*b contributes O(p^(pa+ord b)); symmetrically for pb
                if pa is not None:
                    precs[i + j] = min(precs[i + j], pa + min(_ordp(b, self.p), pb if pb is not None else inf))
                if pb is not None:
                    precs[i + j] = min(precs[i + j], pb + _ordp(a, self.p))
        out = tuple(
            (v, None if pr is inf else pr) for v, pr in zip(vals, precs)
        )
        return TruncatedSeries(self.p, T, out)

    def scale(self, r: Fraction) -> "TruncatedSeries":
        if r == 0:
            return TruncatedSeries(
                self.p, self.T, tuple((Fraction(0), None) for _ in range(self.T))
            )
        shift = _ordp(r, self.p)
        out = []
        for a, pr in self.coeffs:
            out.append((a * r, None if pr is None else pr + shift))
        return TruncatedSeries(self.p, self.T, tuple(out))


def series_zero(p: int, T: int) -> TruncatedSeries:
    return TruncatedSeries(p, T, tuple((Fraction(0), None) for _ in range(T)))


def series_const(p: int, T: int, value: Fraction, prec=None) -> TruncatedSeries:
    coeffs = [(value, prec)] + [(Fraction(0), None)] * (T - 1)
    return TruncatedSeries(p, T, tuple(coeffs))


def binomial_half_coefficients(T: int):
    """Exact binomial-series coefficients of sqrt(1+t): C(1/2, n)."""
    out = [Fraction(1)]
    for n in range(1, T):
        out.append(out[-1] * (Fraction(1, 2) - (n - 1)) / n)
    return out


def series_sqrt(p: int, T: int) -> TruncatedSeries:
    """sqrt(1+t) as an exact truncated binomial series."""
    js = binomial_half_coefficients(T)
    return TruncatedSeries(p, T, tuple((j, None) for j in js))


def series_hensel_root(p: int, P: int):
    """Square root of -1 in Z_p mod p^P: (digit vector, approximation).

    Hensel iteration with doubling precision; digits are canonical in
    0..p-1.  Raises NoRoot when p is not 1 mod 4.
    """
    if P < 1:
        raise InputError("precision must be positive")
    if p % 4 != 1:
        raise NoRoot(f"-1 is not a square modulo {p}")
    x = next(a for a in range(1, p) if (a * a + 1) % p == 0)
    k = 1
    mod = p
    while k < P:
        k = min(2 * k, P)
        mod = p ** k
        # Newton step: x <- x - (x^2+1)/(2x)
        x = (x - (x * x + 1) * pow(2 * x, -1, mod)) % mod
    digits = []
    r = x % (p ** P)
    for _ in range(P):
        digits.append(r % p)
        r //= p
    return digits, x % (p ** P)


def digit_truncations(digits, p: int):
    """Partial sums over the nonzero digits: a_n and their positions l_n.

    a_n adds the first n nonzero digits; l_n is the position of the
    n-th nonzero digit (the order of i - a_n).
    """
    positions = [j for j, d in enumerate(digits) if d != 0]
    a = 0
    trunc = [0]
    for j in positions:
        a += digits[j] * p ** j
        trunc.append(a)
    return trunc, positions


# ---------------------------------------------------------------------------
# oracles
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Distance:
    value: GroupValue
    certified: bool
    attested: bool = False

    def render(self):
        out = {"value": self.value.render(), "certified": self.certified}
        if self.attested:
            out["attested"] = True
        return out


class ChainOracle:
    """Distances to classes of L through a terminal chain; always exact."""

    def __init__(self, chain: MLVChain):
        if not chain.valuation.is_terminal:
            raise InputError("chain oracle needs a terminal chain")
        self.chain = chain
        self.K = chain.valuation.K
        self.rank = self.K.rank

    def theta_degree(self) -> int:
        return self.chain.degree()

    def distance(self, beta: UPoly) -> Distance:
        term = self.chain.valuation
        x = UPoly.gen(self.K.arith)
        return Distance(term.evaluate(x - beta), True)


class SeriesOracle:
    """theta = sqrt(1+t) + i over Q(t) with the rank-two valuation.

    Elements are spanned by {1, i, alpha, i*alpha} with rational-function
    coefficients in t; distances report rank-two values with a
    certification flag per the precision rule.
    """

    def __init__(self, p: int, T: int = 16, P: int = 16):
        if T < 2 or P < 1:
            raise InputError("precisions too small to see theta")
        self.p = p
        self.T = T
        self.P = P
        self.digits, self.i_approx = series_hensel_root(p, P)
        self.alpha = series_sqrt(p, T)
        self.i_series = series_const(p, T, Fraction(self.i_approx), P)
        self.theta = self.alpha + self.i_series
        self.ring = MPolyRing(QQ_FIELD, ("t",))
        self._parser = ExprParser(QQ_FIELD, lambda name: None)

    def theta_degree(self) -> int:
        return 4

    def with_precision(self, T: int, P: int) -> "SeriesOracle":
        return SeriesOracle(self.p, T, P)

    # -- element descriptions -------------------------------------------------
    def _ratfunc_series(self, text: str) -> TruncatedSeries:
        from .basefield import RationalFunctionRank2

        helper = RationalFunctionRank2(self.p)
        el = helper.parse(str(text))
        if el.is_zero():
            return series_zero(self.p, self.T)
        num, den = el.num, el.den
        shift = den.min_exp(0)
        if num.min_exp(0) - shift < 0:
            raise InputError("series elements need t-order >= 0")
        ncoef = [Fraction(0)] * self.T
        dcoef = [Fraction(0)] * self.T
        for (e,), c in num.terms.items():
            if e - shift < self.T:
                ncoef[e - shift] = c
        for (e,), c in den.terms.items():
            if e - shift < self.T:
                dcoef[e - shift] = c
        inv = [Fraction(0)] * self.T
        inv[0] = 1 / dcoef[0]
        for m in range(1, self.T):
            s = Fraction(0)
            for k in range(1, m + 1):
                s += dcoef[k] * inv[m - k]
            inv[m] = -s / dcoef[0]
        out = [Fraction(0)] * self.T
        for i2 in range(self.T):
            for j2 in range(self.T - i2):
                out[i2 + j2] += ncoef[i2] * inv[j2]
        return TruncatedSeries(self.p, self.T, tuple((v, None) for v in out))

    def element(self, desc) -> TruncatedSeries:
        """Build a series from {1, i, alpha, i*alpha} coefficients."""
        if isinstance(desc, TruncatedSeries):
            return desc
        if not isinstance(desc, dict):
            raise InputError("series element description must be an object")
        acc = series_zero(self.p, self.T)
        basis = {
            "1": series_const(self.p, self.T, Fraction(1)),
            "i": self.i_series,
            "alpha": self.alpha,
            "i*alpha": self.i_series * self.alpha,
        }
        for key, coeff_text in desc.items():
            if key not in basis:
                raise InputError(f"unknown basis element {key!r}")
            acc = acc + self._ratfunc_series(coeff_text) * basis[key]
        return acc

    def distance(self, desc) -> Distance:
        """v(theta - b) with the certification rule of the module docstring."""
        elem = self.element(desc)
        diff = self.theta - elem
        for m in range(diff.T):
            c, pr = diff.coeffs[m]
            if c == 0:
                continue
            o = ord_p_fraction(c, self.p)
            certified = m < self.T and (pr is None or o < pr)
            if not certified and pr is not None and o >= pr:
                raise PrecisionExhausted(
                    f"coefficient t^{m} known only modulo p^{pr}", needed=o + 1
                )
            return Distance(rank2(m, o), certified)
        # every representative vanished: b is theta to working precision
        return Distance(infinity(2), False)


def oracle_distance(oracle, desc) -> Distance:
    """Dispatch a wire-level element description to the oracle."""
    if isinstance(desc, dict) and desc.get("attested"):
        rank = 2 if isinstance(oracle, SeriesOracle) else oracle.K.rank
        from .ordgroup import parse_value

        return Distance(parse_value(desc["distance"], rank), False, attested=True)
    if isinstance(oracle, ChainOracle):
        if isinstance(desc, UPoly):
            return oracle.distance(desc)
        from .poly import parse_poly

        return oracle.distance(parse_poly(oracle.K, desc))
    return oracle.distance(desc)


# ---------------------------------------------------------------------------
# distance cuts
# ---------------------------------------------------------------------------

def distance_cut(oracle, elements, m: int, marker=None) -> Cut:
    """The cut d_m(theta) from sampled candidates of common degree m.

    Caller-declared unboundedness enters through ``marker``; the cut for
    m = deg(theta) is the improper maximal cut by definition.
    """
    rank = 2 if isinstance(oracle, SeriesOracle) else oracle.K.rank
    if m == oracle.theta_degree():
        return plus_inf_minus(rank)
    values = []
    for desc in elements:
        d = oracle_distance(oracle, desc)
        if not d.value.is_infinity:
            values.append(d.value)
    D = DistanceSet(rank, tuple(values), marker)
    return cut_from_set(D, "plus")


def ball_degree_witness(oracle, delta: GroupValue, witness, witness_degree: int):
    """distance(b) >= delta certifies deg B(theta, delta) <= deg b."""
    d = oracle_distance(oracle, witness)
    ok = d.value.compare(delta) >= 0
    return {
        "ok": ok,
        "delta": delta.render(),
        "witness_degree": witness_degree,
        "distance": d.render(),
        "certifies": f"deg B(theta, {delta.render()}) <= {witness_degree}" if ok else None,
    }


# ---------------------------------------------------------------------------
# Okutsu sequences
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Family:
    """A common-degree family with sampled elements and declarations."""

    degree: int
    elements: tuple
    max_exists: bool = False
    generator: dict | None = None
    is_theta: bool = False


@dataclass(frozen=True)
class OkutsuSequence:
    families: tuple

    def degrees(self):
        return [f.degree for f in self.families]


def _expand_generator(oracle, gen: dict):
    """Built-in indexed families for the series oracle."""
    kind = gen.get("kind")
    samples = int(gen.get("samples", 4))
    if not isinstance(oracle, SeriesOracle):
        raise InputError("generator families are supported on the series oracle")
    if kind == "theta_digit_truncations":
        offset = Fraction(str(gen.get("offset", "0")))
        trunc, _ = digit_truncations(oracle.digits, oracle.p)
        out = []
        for a in trunc[1 : samples + 1]:
            out.append({"1": str(Fraction(a) + offset)})
        return out
    if kind == "i_plus_series_truncations":
        js = binomial_half_coefficients(min(samples + 1, oracle.T))
        out = []
        for m in range(1, samples + 1):
            poly = " + ".join(
                f"({js[k]})*t^{k}" if k else f"({js[k]})" for k in range(m)
            )
            out.append({"i": "1", "1": poly})
        return out
    raise InputError(f"unknown generator kind {kind!r}")


def build_sequence(oracle, families_doc) -> OkutsuSequence:
    fams = []
    for fd in families_doc:
        if fd.get("theta"):
            fams.append(
                Family(oracle.theta_degree(), ({"theta": True},), max_exists=True, is_theta=True)
            )
            continue
        elements = list(fd.get("elements", ()))
        if "generator" in fd:
            elements.extend(_expand_generator(oracle, fd["generator"]))
        fams.append(
            Family(
                int(fd["degree"]),
                tuple(elements),
                bool(fd.get("max_exists", False)),
                fd.get("generator"),
            )
        )
    return OkutsuSequence(tuple(fams))


def _family_distances(oracle, fam: Family):
    if fam.is_theta:
        rank = 2 if isinstance(oracle, SeriesOracle) else oracle.K.rank
        return [Distance(infinity(rank), True)]
    return [oracle_distance(oracle, e) for e in fam.elements]


def verify_okutsu_sequence(oracle, seq: OkutsuSequence, challengers) -> dict:
    """Check the defining properties on the sampled data.

    OS0 (sampled): every challenger of degree below the next family
    degree is no closer than some sampled family element.  OS1: declared
    maxima force singletons.  OS2 (sampled): distances strictly increase
    within each family; well-ordering of infinite families is an
    attestation.  OS3: strict increase across consecutive families.
    Failures are report entries, never exceptions.
    """
    checks = []
    fams = seq.families
    degrees = seq.degrees()
    ok_structure = (
        degrees[0] == 1
        and all(a < b for a, b in zip(degrees, degrees[1:]))
        and fams[-1].is_theta
    )
    checks.append(
        {
            "check": "degrees",
            "ok": ok_structure,
            "degrees": degrees,
            "note": "1 = m_0 < ... < m_r = deg(theta), last family is {theta}",
        }
    )
    dists = [_family_distances(oracle, f) for f in fams]
    # OS2 sampled: strict increase inside each family
    for li, dv in enumerate(dists):
        vals = [d.value for d in dv]
        increasing = all(a.compare(b) < 0 for a, b in zip(vals, vals[1:]))
        checks.append(
            {
                "check": "OS2-sampled",
                "family": li,
                "ok": increasing,
                "values": [v.render() for v in vals],
                "note": "well-ordering of infinite families is attested, not checked",
            }
        )
    # OS1: declared maxima force singletons
    for li, fam in enumerate(fams[:-1]):
        if fam.max_exists:
            checks.append(
                {
                    "check": "OS1",
                    "family": li,
                    "ok": len(fam.elements) == 1,
                    "note": "declared max(D_m) exists",
                }
            )
    # OS3 across consecutive families
    for li in range(len(fams) - 1):
        hi = max(d.value for d in dists[li])
        lo = min(d.value for d in dists[li + 1])
        checks.append(
            {
                "check": "OS3",
                "families": [li, li + 1],
                "ok": hi.compare(lo) < 0,
                "max_lower": hi.render(),
                "min_upper": lo.render(),
            }
        )
    # OS0 sampled against challengers
    for ch in challengers:
        cdeg = int(ch["degree"])
        cd = oracle_distance(oracle, ch.get("element", ch))
        for li in range(len(fams) - 1):
            if cdeg >= fams[li + 1].degree:
                continue
            best = max(d.value for d in dists[li])
            checks.append(
                {
                    "check": "OS0-sampled",
                    "family": li,
                    "challenger_degree": cdeg,
                    "challenger_distance": cd.value.render(),
                    "family_max_sampled": best.render(),
                    "ok": cd.value.compare(best) <= 0,
                }
            )
    return {
        "ok": all(c["ok"] for c in checks),
        "scope": "verified relative to sampled data and caller declarations",
        "checks": checks,
    }


def okutsu_depth_and_kinds(seq: OkutsuSequence) -> tuple:
    """(r, per-step kinds): ordinary iff the family declares a maximum.

    The labels are attestations relative to the declarations; nothing
    here decides max-existence autonomously.
    """
    r = len(seq.families) - 1
    kinds = []
    for fam in seq.families[:-1]:
        kinds.append("ordinary" if fam.max_exists else "limit")
    return r, kinds
