"""Univariate polynomials over a valued field: expansions, resultants,
minimal polynomials inside quotient algebras.

Polynomials are :class:`~mlvchains.rings.UPoly` values over the field's
arithmetic context; this module adds the valued-field aware operations
and the wire format ``{"coeffs": [strings], "var": "x"}`` (lowest degree
first).
"""

from __future__ import annotations

from .basefield import ValuedField
from .errors import InputError, NonMonic
from .rings import UPoly, berkowitz_charpoly, prs_resultant


def poly_from_coeffs(K: ValuedField, coeffs) -> UPoly:
    return UPoly(K.arith, list(coeffs))


def poly_from_int_coeffs(K: ValuedField, ints) -> UPoly:
    return UPoly(K.arith, [K.arith.from_int(n) for n in ints])


def parse_poly(K: ValuedField, doc) -> UPoly:
    """Parse the polynomial wire format (or a list of coefficient strings)."""
    if isinstance(doc, dict):
        coeffs = doc.get("coeffs")
        if coeffs is None:
            raise InputError("polynomial document needs 'coeffs'")
    else:
        coeffs = doc
    return UPoly(K.arith, [K.parse(str(c)) for c in coeffs])


def render_poly(K: ValuedField, f: UPoly, var: str = "x") -> dict:
    return {"coeffs": [K.render(c) for c in f.coeffs], "var": var}


def poly_str(K: ValuedField, f: UPoly, var: str = "x") -> str:
    return f.render(var=var)


# ---------------------------------------------------------------------------
# phi-expansion
# ---------------------------------------------------------------------------

def phi_expansion(f: UPoly, phi: UPoly) -> list[UPoly]:
    """Coefficients a_n with f = sum a_n phi^n and deg a_n < deg phi.

    Unique by repeated division; ``phi`` must be monic of degree >= 1.
    The list has no trailing zero polynomial (empty for f = 0).
    """
    if not phi.is_monic() or phi.degree() < 1:
        raise NonMonic("phi-expansion needs a monic polynomial of degree >= 1")
    out = []
    cur = f
    while not cur.is_zero():
        cur, rem = cur.divmod(phi)
        out.append(rem)
    while out and out[-1].is_zero():
        out.pop()
    return out


def expansion_reconstruct(coeffs, phi: UPoly) -> UPoly:
    acc = UPoly.zero(phi.field)
    power = UPoly.one(phi.field)
    for a in coeffs:
        acc = acc + a * power
        power = power * phi
    return acc


# ---------------------------------------------------------------------------
# resultants
# ---------------------------------------------------------------------------

def resultant(K: ValuedField, f: UPoly, g: UPoly):
    """Res(f, g) = lc(f)^deg(g) * prod g(root_i), exactly.

    Clears denominators into the backend's polynomial domain and runs
    the subresultant PRS there (fraction-free).
    """
    if f.is_zero() or g.is_zero():
        raise InputError("resultant needs nonzero polynomials")
    dom, to_parts, from_dom = K.resultant_domain()
    F, sf = to_parts(list(f.coeffs))
    G, sg = to_parts(list(g.coeffs))
    res = prs_resultant(dom, F, G)
    out = from_dom(res)
    A = K.arith
    # Res(sf*f, sg*g) = sf^deg(g) * sg^deg(f) * Res(f, g)
    scale = A.one()
    for _ in range(g.degree()):
        scale = A.mul(scale, sf)
    for _ in range(f.degree()):
        scale = A.mul(scale, sg)
    return A.div(out, scale)


# ---------------------------------------------------------------------------
# quotient algebra K[x]/(g)
# ---------------------------------------------------------------------------

def minimal_polynomial_in_quotient(K: ValuedField, g: UPoly, h: UPoly) -> UPoly:
    """Minimal polynomial over K of the class of h in K[x]/(g).

    ``g`` must be irreducible monic (caller-certified) so the quotient
    is a field; the result is monic irreducible and divides the
    characteristic polynomial of multiplication by h.  Computed by exact
    linear algebra on the powers of h modulo g.
    """
    if not g.is_monic():
        raise NonMonic("quotient modulus must be monic")
    if h.degree() >= g.degree():
        raise InputError("representative must have degree < deg(g)")
    A = K.arith
    n = g.degree()
    # reduced row basis with pivot bookkeeping; each row carries the
    # combination over powers of h that produced it
    basis = []  # list of (vector, pivot index, combo)
    power = UPoly.one(A)
    for k in range(n + 1):
        vec = [power[i] for i in range(n)]
        combo = [A.zero()] * (k + 1)
        combo[k] = A.one()
        for bvec, bpiv, bcombo in basis:
            c = vec[bpiv]
            if A.is_zero(c):
                continue
            vec = [A.sub(x, A.mul(c, y)) for x, y in zip(vec, bvec)]
            for i, y in enumerate(bcombo):
                combo[i] = A.sub(combo[i], A.mul(c, y))
        piv = next((i for i, x in enumerate(vec) if not A.is_zero(x)), None)
        if piv is None:
            return UPoly(A, combo)
        inv = A.inv(vec[piv])
        vec = [A.mul(x, inv) for x in vec]
        combo = [A.mul(x, inv) for x in combo]
        basis.append((vec, piv, combo))
        power = (power * h) % g
    raise ArithmeticError("no dependency found below dimension bound")


def multiplication_matrix(K: ValuedField, g: UPoly, h: UPoly):
    """Matrix of multiplication by h on the power basis of K[x]/(g)."""
    A = K.arith
    n = g.degree()
    cols = []
    for i in range(n):
        xi = UPoly.gen(A) ** i
        col = (h * xi) % g
        cols.append([col[j] for j in range(n)])
    return [[cols[j][i] for j in range(n)] for i in range(n)]


def charpoly_of_multiplication(K: ValuedField, g: UPoly, h: UPoly) -> UPoly:
    """det(xI - M_h) over K, exact (division-free Berkowitz)."""
    return berkowitz_charpoly(K.arith, multiplication_matrix(K, g, h))


# ---------------------------------------------------------------------------
# normalization helper (never applied implicitly)
# ---------------------------------------------------------------------------

def normalize_monic_integral(K: ValuedField, f: UPoly):
    """Scale a polynomial to a monic one with valuation-ring coefficients.

    Returns (g, c, transcript) with g(x) = c^deg * lc^(deg-1) * f(x / (c*...))
    arranged so the roots of g are the section multiple c times the roots
    of the monic rescaling of f.  Provided for callers; chain routines
    never invoke it implicitly.
    """
    if f.is_zero():
        raise InputError("cannot normalize the zero polynomial")
    A = K.arith
    n = f.degree()
    steps = {}
    if not f.is_monic():
        lc = f.lc()
        # y = lc * x: lc^(n-1) f(y / lc) is monic in y
        coeffs = []
        for i, a in enumerate(f.coeffs):
            scale = A.one()
            for _ in range(n - 1 - i):
                scale = A.mul(scale, lc)
            coeffs.append(A.mul(a, scale))
        f = UPoly(A, coeffs)
        steps["monic_scale"] = K.render(lc)
    worst = None
    for i, a in enumerate(f.coeffs[:-1]):
        if A.is_zero(a):
            continue
        v = K.val(a)
        need = n - i
        cand = tuple(-c / need for c in v.coords)
        if worst is None or cand > worst:
            worst = cand
    if worst is None or all(c <= 0 for c in worst):
        return f, A.one(), steps
    from math import ceil

    m = [max(0, ceil(c)) for c in worst]
    while True:
        gamma = K.zero_value().__class__(K.rank, tuple(map(_frac, m)))
        c = K.section(gamma)
        ok = True
        for i, a in enumerate(f.coeffs[:-1]):
            if A.is_zero(a):
                continue
            v = K.val(a) + gamma.scale(n - i)
            if v < K.zero_value():
                ok = False
                break
        if ok:
            break
        m[0] += 1
    coeffs = []
    power = A.one()
    for i in range(n, -1, -1):
        coeffs.append(A.mul(f[i], power))
        power = A.mul(power, c)
    coeffs.reverse()
    steps["shift_section"] = K.render(c)
    return UPoly(A, coeffs), c, steps


def _frac(x):
    from fractions import Fraction

    return Fraction(x)
