"""Graded-unit bookkeeping and the residual polynomial operator.

A homogeneous unit is represented as a pair (value, kappa-residue): the
residue is the grade-zero quotient of the unit's initial form by the
*canonical monomial* of its grade -- the product of the section and the
level keys prescribed by the canonical decomposition of the value.  All
residues are therefore relative to the chain's recorded sections and
per-level elements u_i, which fixes the normalization ambiguity of
initial forms once and for all.

Reduction rule: at every level, in(phi_i)^{e_i} = z_{i+1} * in(u_i),
with z_{i+1} the stored residue generator.  Rewriting a monomial's
exponent vector into canonical range collects the kappa scalar that
relates it to the canonical monomial of the same grade; comparison of
canonical forms is exact because bounded decompositions are unique.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    DegreeTooLarge,
    InputError,
    NonMonic,
    NotKeyPolynomial,
    PreconditionViolated,
    TerminalValuation,
)
from .indval import InductiveValuation, decompose_value, monomial_of_decomposition
from .ordgroup import GroupValue
from .poly import phi_expansion
from .rings import TowerField, UPoly, embed_chain, factor_univariate


# ---------------------------------------------------------------------------
# residue-field navigation
# ---------------------------------------------------------------------------

def _kappa_at(K, levels, j):
    """Residue field context after absorbing levels[:j]."""
    if j == 0:
        return K.residue_field_obj.ctx
    return levels[j - 1].kappa_after


def _project_down(value, ctx_from, ctx_to):
    """Inverse of embed_chain for values that lie in the lower field."""
    while ctx_from != ctx_to:
        if not isinstance(ctx_from, TowerField):
            raise ArithmeticError("projection target is not below the source")
        if any(not ctx_from.base.is_zero(c) for c in value[1:]):
            raise ArithmeticError("value does not lie in the lower field")
        value = value[0]
        ctx_from = ctx_from.base
    return value


def _value_at(K, levels, j, a: UPoly) -> GroupValue:
    """Value of a polynomial under the valuation with normalized levels[:j]."""
    if a.is_zero():
        return K.infinity()
    if j == 0:
        return K.val(a.coeffs[0])
    L = levels[j - 1]
    best = None
    for n, c in enumerate(phi_expansion(a, L.phi)):
        if c.is_zero():
            continue
        v = _value_at(K, levels, j - 1, c)
        if n:
            v = v + L.gamma.scale(n)
        if best is None or v < best:
            best = v
    return best


def reduce_monomial(K, levels, j, beta: GroupValue, exps):
    """Rewrite a monomial exponent vector into canonical range.

    Returns (beta', exps', scalar) with each exps'[i] < e_i and the
    collected kappa_j scalar from the rewrites phi^e -> z * u.
    """
    kj = _kappa_at(K, levels, j)
    scalar = kj.one()
    exps = list(exps)
    for i in range(j - 1, -1, -1):
        L = levels[i]
        while exps[i] >= L.e:
            exps[i] -= L.e
            scalar = kj.mul(scalar, embed_chain(L.z, L.kappa_after, kj))
            bu, eu = L.u_decomp
            beta = beta + bu
            for k2, c in enumerate(eu):
                exps[k2] += c
    return beta, tuple(exps), scalar


def _kres_at(K, levels, j, a: UPoly):
    """(value, canonical kappa_j residue) of a homogeneous unit in(a).

    Requires a nonzero with degree below the key degree of level j (or
    of the current top when j == len(levels)).
    """
    if a.is_zero():
        raise InputError("zero polynomial has no unit residue")
    if j == 0:
        c = a.coeffs[0]
        v = K.val(c)
        unit = K.arith.div(c, K.section(v))
        return v, K.residue(unit)
    L = levels[j - 1]
    kj = _kappa_at(K, levels, j)
    kprev = _kappa_at(K, levels, j - 1)
    terms = []
    best = None
    for n, cn in enumerate(phi_expansion(a, L.phi)):
        if cn.is_zero():
            continue
        v = _value_at(K, levels, j - 1, cn)
        tv = v + L.gamma.scale(n) if n else v
        terms.append((n, cn, v, tv))
        if best is None or tv < best:
            best = tv
    target = decompose_value(K, levels[:j], best)
    acc = kj.zero()
    for n, cn, vn, tv in terms:
        if tv.compare(best) != 0:
            continue
        _, res = _kres_at(K, levels, j - 1, cn)
        beta_n, exps_n = decompose_value(K, levels[: j - 1], vn)
        beta_r, exps_r, sigma = reduce_monomial(K, levels, j, beta_n, exps_n + (n,))
        if (beta_r.compare(target[0]) != 0) or exps_r != target[1]:
            raise AssertionError("monomial reduction missed the canonical form")
        acc = kj.add(acc, kj.mul(embed_chain(res, kprev, kj), sigma))
    if kj.is_zero(acc):
        raise AssertionError("unit residue vanished; graded sum cancelled")
    return best, acc


# ---------------------------------------------------------------------------
# graded units
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GradedUnit:
    """(value, kappa-residue) presentation of a homogeneous unit."""

    value: GroupValue
    kappa_residue: object
    ctx: object

    def mul(self, other: "GradedUnit") -> "GradedUnit":
        return GradedUnit(
            self.value + other.value,
            self.ctx.mul(self.kappa_residue, other.kappa_residue),
            self.ctx,
        )

    def render(self):
        return {
            "value": self.value.render(),
            "residue": self.ctx.render(self.kappa_residue),
        }


def unit_residue(mu: InductiveValuation, a: UPoly) -> GradedUnit:
    """The homogeneous unit in(a) for deg a < deg(phi), as a graded pair."""
    if a.is_zero():
        raise InputError("zero polynomial has no unit residue")
    if a.degree() >= mu.degree():
        raise DegreeTooLarge(
            f"deg {a.degree()} not below the key degree {mu.degree()}"
        )
    v, res = _kres_at(mu.K, mu.levels, len(mu.levels), a)
    return GradedUnit(v, res, mu.kappa_ctx())


# ---------------------------------------------------------------------------
# residue tower view
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueTower:
    """kappa(mu) as a tower over the base residue field.

    One record per degree-growing chain step: generator name, minimal
    polynomial over the level below (None marks a trivial extension) and
    the normalization element u recorded for that step.
    """

    base: object
    records: tuple
    ctx: object

    def height(self) -> int:
        return len(self.records)

    def describe(self):
        out = []
        for name, minpoly, u in self.records:
            out.append(
                {
                    "gen": name,
                    "minpoly": minpoly.render(var="y") if minpoly is not None else None,
                    "u": u.render(var="x"),
                }
            )
        return out


def residue_tower(mu: InductiveValuation) -> ResidueTower:
    records = []
    seen = 0
    for L in mu.levels:
        if L.z_minpoly is not None:
            name = mu.residue_field.steps[seen][0]
            seen += 1
        else:
            name = f"(root in lower field)"
        records.append((name, L.z_minpoly, L.u))
    return ResidueTower(mu.K.residue_field_obj, tuple(records), mu.kappa_ctx())


# ---------------------------------------------------------------------------
# the residual polynomial operator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidualPolynomial:
    """R_{mu,phi,u}(g): monic over kappa(mu), with its S-bookkeeping."""

    upoly: UPoly
    ctx: object
    S: tuple
    l0: int
    l: int
    d: int
    e: int

    def render(self, var: str = "y") -> str:
        return self.upoly.render(var=var)

    def describe(self):
        return {
            "R": self.render(),
            "S": list(self.S),
            "l0": self.l0,
            "l": self.l,
            "d": self.d,
            "e": self.e,
        }


def residual_polynomial(mu: InductiveValuation, g: UPoly) -> ResidualPolynomial:
    """The residual polynomial of g for mu's stored minimal key and u.

    Coefficients follow the residual-coefficient rule: the unit residues
    of the expansion coefficients on the common-minimum support S,
    normalized by the recorded u-powers; zeta_0 is never zero.
    """
    if mu.is_terminal:
        raise TerminalValuation("residual polynomial needs a finite top value")
    if g.is_zero():
        raise InputError("residual polynomial of zero")
    K = mu.K
    levels = mu.levels
    j = len(levels)
    kappa = mu.kappa_ctx()
    e = mu.e_top
    coeffs = phi_expansion(g, mu.phi)
    data = []
    best = None
    for n, an in enumerate(coeffs):
        if an.is_zero():
            continue
        v = _value_at(K, levels, j, an)
        tv = v + mu.gamma.scale(n) if n else v
        data.append((n, an, v, tv))
        if best is None or tv < best:
            best = tv
    S = tuple(n for n, _, _, tv in data if tv.compare(best) == 0)
    l0, l = S[0], S[-1]
    if (l - l0) % e:
        raise AssertionError("support span not divisible by e")
    d = (l - l0) // e
    if d == 0:
        return ResidualPolynomial(UPoly.one(kappa), kappa, S, l0, l, 0, e)
    by_n = {n: (an, v) for n, an, v, tv in data if tv.compare(best) == 0}
    a_l, v_l = by_n[l]
    _, res_l = _kres_at(K, levels, j, a_l)
    beta_l, exps_l = decompose_value(K, levels, v_l)
    bu, eu = mu.u_top_decomp
    zcoeffs = []
    for jj in range(d):
        n = l0 + jj * e
        if n not in by_n:
            zcoeffs.append(kappa.zero())
            continue
        a_n, v_n = by_n[n]
        _, res_n = _kres_at(K, levels, j, a_n)
        # denominator in(a_l) * in(u)^(d-jj): reduce its monomial to the
        # canonical monomial of grade v(a_n); the leftover scalar is sigma
        k = d - jj
        beta_den = beta_l + bu.scale(k)
        exps_den = list(exps_l)
        for idx, c in enumerate(eu):
            exps_den[idx] += k * c
        beta_r, exps_r, sigma = reduce_monomial(K, levels, j, beta_den, exps_den)
        target = decompose_value(K, levels, v_n)
        if beta_r.compare(target[0]) != 0 or exps_r != target[1]:
            raise AssertionError("residual coefficient normalization mismatch")
        zcoeffs.append(kappa.div(res_n, kappa.mul(res_l, sigma)))
    zcoeffs.append(kappa.one())
    if kappa.is_zero(zcoeffs[0]):
        raise AssertionError("zeta_0 vanished")
    return ResidualPolynomial(UPoly(kappa, zcoeffs), kappa, S, l0, l, d, e)


# ---------------------------------------------------------------------------
# key-polynomial certification
# ---------------------------------------------------------------------------

def is_key_polynomial(mu: InductiveValuation, Q: UPoly, _resid=None):
    """charKP test: equal-degree equal initial form, or residually irreducible.

    Returns (bool, certificate dict); UnsupportedFactorization propagates
    from residue-field factorization.
    """
    if mu.is_terminal:
        raise TerminalValuation("key polynomials need a residue-transcendental valuation")
    if not Q.is_monic() or Q.degree() < 1:
        raise NonMonic("key polynomials are monic of degree >= 1")
    m = mu.degree()
    if Q.degree() == m:
        diff = Q - mu.phi
        if diff.is_zero() or mu.evaluate(diff).compare(mu.gamma) > 0:
            if mu.evaluate(Q).compare(mu.gamma) == 0:
                return True, {"kind": "same-degree-equal-initial-form"}
    R = _resid if _resid is not None else residual_polynomial(mu, Q)
    if R.d >= 1 and Q.degree() == m * mu.e_top * R.d:
        facs = factor_univariate(R.upoly)
        if len(facs) == 1 and facs[0][1] == 1:
            return True, {
                "kind": "residually-irreducible",
                "residual": R.render(),
                "d": R.d,
            }
        return False, {
            "kind": "residual-reducible",
            "residual": R.render(),
            "factors": [(f.render(var="y"), mult) for f, mult in facs],
        }
    return False, {
        "kind": "degree-mismatch",
        "residual": R.render(),
        "expected_degree": m * mu.e_top * max(R.d, 1),
    }


def relative_residue_degree(mu: InductiveValuation, phi_next: UPoly) -> int:
    """[kappa(nu):kappa(mu)] for the augmentation by phi_next."""
    ok, cert = is_key_polynomial(mu, phi_next)
    if not ok:
        raise NotKeyPolynomial(str(cert))
    if cert["kind"] == "same-degree-equal-initial-form":
        return 1
    R = residual_polynomial(mu, phi_next)
    d = phi_next.degree() // (mu.e_top * mu.degree())
    if d != R.upoly.degree():
        raise AssertionError("residual degree does not match the degree formula")
    return d


def residual_root_check(mu: InductiveValuation, nu: InductiveValuation, g: UPoly) -> bool:
    """Check that the image of phi^e/u under nu is a root of R_{mu,phi,u}(g)."""
    phi = mu.phi
    if mu.evaluate(phi).compare(nu.evaluate(phi)) != 0:
        raise PreconditionViolated("phi must keep its value under nu")
    if not mu.evaluate(g) < nu.evaluate(g):
        raise PreconditionViolated("g must strictly increase in value under nu")
    R = residual_polynomial(mu, g)
    knu = nu.kappa_ctx()
    z = _phi_unit_image(mu, nu)
    acc = knu.zero()
    for i in range(R.upoly.degree(), -1, -1):
        acc = knu.mul(acc, z)
        c = R.upoly[i]
        acc = knu.add(acc, embed_chain(c, mu.kappa_ctx(), knu))
    return knu.is_zero(acc)


def _phi_unit_image(mu: InductiveValuation, nu: InductiveValuation):
    """The kappa(nu) element in(phi^e) / in(u), phi = mu's key, u = mu's u."""
    for L in nu.levels:
        if L.phi == mu.phi and L.e == mu.e_top and L.u == mu.u_top:
            return embed_chain(L.z, L.kappa_after, nu.kappa_ctx())
    phie = mu.phi ** mu.e_top
    if phie.degree() >= nu.degree():
        raise PreconditionViolated("phi^e is not below nu's key degree")
    _, res_phie = _kres_at(nu.K, nu.levels, len(nu.levels), phie)
    _, res_u = _kres_at(nu.K, nu.levels, len(nu.levels), mu.u_top)
    return nu.kappa_ctx().div(res_phie, res_u)


# ---------------------------------------------------------------------------
# lifting: units and key polynomials with prescribed residues
# ---------------------------------------------------------------------------

def _tower_coords(kj, kprev, fdeg, chi):
    if fdeg == 1:
        return [chi]
    if not (isinstance(kj, TowerField) and kj.base == kprev and kj.deg == fdeg):
        raise AssertionError("tower structure mismatch in coordinate split")
    return list(chi)


def lift_unit(mu: InductiveValuation, delta: GroupValue, chi) -> UPoly:
    """A polynomial b, deg b < deg(phi), with mu(b) = delta, residue chi.

    Inverse of unit_residue on its range; delta may use negative section
    exponents (the group of unit grades, not the monoid).
    """
    kappa = mu.kappa_ctx()
    if kappa.is_zero(chi):
        raise InputError("cannot lift a zero residue")
    b = _lift_at(mu.K, mu.levels, len(mu.levels), delta, chi)
    return b


def _lift_at(K, levels, j, delta: GroupValue, chi):
    if j == 0:
        c = K.arith.mul(K.section(delta), K.lift(chi))
        return UPoly(K.arith, [c])
    L = levels[j - 1]
    kj = _kappa_at(K, levels, j)
    kprev = _kappa_at(K, levels, j - 1)
    # canonical component of delta at this level fixes the base exponent
    _, exps_full = decompose_value(K, levels[:j], delta)
    c_shift = exps_full[j - 1]
    coords = _tower_coords(kj, kprev, L.fdeg, chi)
    z = embed_chain(L.z, L.kappa_after, kj)
    out = UPoly.zero(K.arith)
    for i, chi_i in enumerate(coords):
        if kprev.is_zero(chi_i):
            continue
        n = c_shift + i * L.e
        delta_i = delta - L.gamma.scale(n) if n else delta
        beta_i, exps_i = decompose_value(K, levels[: j - 1], delta_i)
        _, _, scalar_r = reduce_monomial(K, levels, j, beta_i, exps_i + (n,))
        # kres(B_i) * scalar_r must equal chi_i * z^i
        want = embed_chain(chi_i, kprev, kj)
        for _ in range(i):
            want = kj.mul(want, z)
        target = _project_down(kj.div(want, scalar_r), kj, kprev)
        B = _lift_at(K, levels, j - 1, delta_i, target)
        out = out + B * L.phi ** n
    return out


def lift_key_polynomial(mu: InductiveValuation, h: UPoly):
    """Monic key polynomial Q with R_{mu,phi,u}(Q) = h; returns (Q, R(Q)).

    ``h`` must be monic over kappa(mu) with nonzero constant term (true
    for any irreducible h != y).  Verified by recomputing R(Q) and the
    key certificate.
    """
    kappa = mu.kappa_ctx()
    if mu.is_terminal:
        raise TerminalValuation("cannot lift keys at a terminal valuation")
    if not h.is_monic() or h.degree() < 1:
        raise NonMonic("residual factor must be monic of degree >= 1")
    if kappa.is_zero(h[0]):
        raise InputError("residual factor has zero constant term")
    e = mu.e_top
    d = h.degree()
    bu, eu = mu.u_top_decomp
    Q = mu.phi ** (e * d)
    for jj in range(d):
        hj = h[jj]
        if kappa.is_zero(hj):
            continue
        k = d - jj
        beta_den = bu.scale(k)
        exps_den = [k * c for c in eu]
        _, _, sigma = reduce_monomial(mu.K, mu.levels, len(mu.levels), beta_den, exps_den)
        A = lift_unit(mu, mu.gamma.scale(e * k), kappa.mul(hj, sigma))
        Q = Q + A * mu.phi ** (e * jj)
    R = residual_polynomial(mu, Q)
    if R.upoly != h:
        raise AssertionError("lifted key failed to reproduce its residual image")
    return Q, R
