"""Inductive valuations on K[x].

An inductive valuation is a chain of augmentations ``[(phi_0, gamma_0),
..., (phi_k, gamma_k)]`` starting from a degree-one key.  Evaluation is
the recursive minimum over phi-expansions.  Besides the raw chain, each
valuation caches its *normalized levels*: one record per key degree
strictly below the current minimal-degree key, holding the final key
and value at that degree together with the value-group and residue
bookkeeping (relative index e, the canonical monomial u of value
e*gamma, and the residue z of phi^e/u where the next level sees it).

Refinements (equal-degree augmentations) replace the top of the chain
without adding a level; value-group data is recomputed from the final
value.  Augmentations are certified: ``augment`` refuses non-key
polynomials and non-increasing values.
"""

from __future__ import annotations

from dataclasses import dataclass

from .basefield import ValuedField
from .errors import (
    InputError,
    NonIncreasingValue,
    NonMonic,
    NotInUnitGroup,
    NotKeyPolynomial,
    TerminalValuation,
)
from .ordgroup import GroupValue, infinity
from .poly import phi_expansion
from .rings import RatLattice, UPoly


@dataclass(frozen=True)
class Level:
    """Normalized bookkeeping for one key degree below the current top.

    ``u_decomp = (beta, exps)`` is the canonical decomposition of the
    monomial ``u``: value(u) = beta + sum exps[i]*gamma_i over the levels
    strictly below this one.  ``z`` is the residue of ``phi^e / u`` in
    the residue field ``kappa_after`` of the next level; its minimal
    polynomial over the previous residue field is ``z_minpoly`` (None
    when the extension is trivial).
    """

    phi: UPoly
    gamma: GroupValue
    e: int
    u: UPoly
    u_decomp: tuple
    z: object
    z_minpoly: UPoly | None
    fdeg: int
    kappa_after: object


class InductiveValuation:
    """Immutable chain state; ``augment`` returns a new value sharing the prefix."""

    __slots__ = (
        "K",
        "prev",
        "phi",
        "gamma",
        "levels",
        "residue_field",
        "e_top",
        "u_top",
        "u_top_decomp",
    )

    def __init__(self, K, prev, phi, gamma, levels, residue_field, e_top, u_top, u_top_decomp):
        self.K = K
        self.prev = prev
        self.phi = phi
        self.gamma = gamma
        self.levels = levels
        self.residue_field = residue_field
        self.e_top = e_top
        self.u_top = u_top
        self.u_top_decomp = u_top_decomp

    # -- basic structure ----------------------------------------------------
    @property
    def is_terminal(self) -> bool:
        return self.gamma.is_infinity

    def degree(self) -> int:
        return self.phi.degree()

    def raw_steps(self):
        steps = []
        node = self
        while node is not None:
            steps.append((node.phi, node.gamma))
            node = node.prev
        steps.reverse()
        return steps

    def depth_raw(self) -> int:
        return len(self.raw_steps()) - 1

    def kappa_ctx(self):
        return self.residue_field.ctx

    def __repr__(self):
        steps = ", ".join(
            f"({p.render(var='x')}, {g.render()})" for p, g in self.raw_steps()
        )
        return f"IndVal[{steps}]"

    # -- evaluation ----------------------------------------------------------
    def _coeff_value(self, a: UPoly) -> GroupValue:
        if self.prev is not None:
            return self.prev.evaluate(a)
        return self.K.val(a.coeffs[0])

    def evaluate(self, f: UPoly) -> GroupValue:
        """mu(f) = min over the phi-expansion of mu(a_n) + n*gamma."""
        if f.is_zero():
            return infinity(self.K.rank)
        best = None
        for n, a in enumerate(phi_expansion(f, self.phi)):
            if a.is_zero():
                continue
            v = self._coeff_value(a)
            if n > 0:
                if self.gamma.is_infinity:
                    continue
                v = v + self.gamma.scale(n)
            if best is None or v < best:
                best = v
        if best is None:
            return infinity(self.K.rank)
        return best

    # -- value-group bookkeeping ----------------------------------------------
    def group_lattice(self) -> RatLattice:
        """The unit-grade group: vK plus the level values."""
        lat = self.K.vk_lattice()
        for L in self.levels:
            lat = lat.extend(L.gamma.coords)
        return lat

    def value_lattice(self) -> RatLattice:
        """The whole value group (includes the top value when finite)."""
        lat = self.group_lattice()
        if not self.is_terminal:
            lat = lat.extend(self.gamma.coords)
        return lat


def depth_zero(K: ValuedField, a, gamma: GroupValue) -> InductiveValuation:
    """The depth-zero valuation min(v(c_n) + n*gamma) on (x-a)-expansions."""
    A = K.arith
    phi = UPoly(A, [A.neg(a), A.one()])
    rf = K.residue_field_obj
    if gamma.is_infinity:
        return InductiveValuation(K, None, phi, gamma, (), rf, None, None, None)
    e = K.vk_lattice().least_multiple(gamma.coords)
    beta = gamma.scale(e)
    u = UPoly(A, [K.section(beta)])
    return InductiveValuation(K, None, phi, gamma, (), rf, e, u, (beta, ()))


def gauss_valuation(K: ValuedField) -> InductiveValuation:
    return depth_zero(K, K.arith.zero(), K.zero_value())


def evaluate(mu: InductiveValuation, f: UPoly) -> GroupValue:
    return mu.evaluate(f)


def decompose_value(K: ValuedField, levels, gamma: GroupValue):
    """Canonical decomposition gamma = beta + sum c_i gamma_i, 0 <= c_i < e_i.

    ``beta`` lands in vK; raises NotInUnitGroup when gamma is not in the
    group generated by vK and the level values.
    """
    if gamma.is_infinity:
        raise InputError("cannot decompose Infinity")
    lats = [K.vk_lattice()]
    for L in levels:
        lats.append(lats[-1].extend(L.gamma.coords))
    exps = [0] * len(levels)
    cur = gamma
    for i in range(len(levels) - 1, -1, -1):
        L = levels[i]
        found = None
        for c in range(L.e):
            cand = cur - L.gamma.scale(c) if c else cur
            if lats[i].contains(cand.coords):
                found = c
                cur = cand
                break
        if found is None:
            raise NotInUnitGroup(f"{gamma.render()} is not a unit grade")
        exps[i] = found
    if not lats[0].contains(cur.coords):
        raise NotInUnitGroup(f"{gamma.render()} is not a unit grade")
    return cur, tuple(exps)


def monomial_of_decomposition(K: ValuedField, levels, beta: GroupValue, exps) -> UPoly:
    out = UPoly(K.arith, [K.section(beta)])
    for L, c in zip(levels, exps):
        if c:
            out = out * L.phi ** c
    return out


def element_of_value(mu: InductiveValuation, gamma: GroupValue) -> UPoly:
    """A monomial s(beta) * prod phi_i^{c_i} of value gamma, degree < deg(phi).

    The canonical decomposition bounds each c_i below e_i, which keeps
    the degree under deg(phi); the value/degree contract is re-checked
    on every call.
    """
    beta, exps = decompose_value(mu.K, mu.levels, gamma)
    out = monomial_of_decomposition(mu.K, mu.levels, beta, exps)
    if out.degree() >= mu.phi.degree():
        raise AssertionError("element_of_value degree contract violated")
    if mu.evaluate(out).compare(gamma) != 0:
        raise AssertionError("element_of_value value contract violated")
    return out


def value_group_data(mu: InductiveValuation):
    """Generators of the value group and unit-grade group, and e(mu)."""
    if mu.is_terminal:
        raise TerminalValuation("value group data needs a residue-transcendental valuation")
    unit_gens = ["vK"] + [L.gamma for L in mu.levels]
    full_gens = unit_gens + [mu.gamma]
    return full_gens, unit_gens, mu.e_top


# ---------------------------------------------------------------------------
# augmentation
# ---------------------------------------------------------------------------

def augment(
    mu: InductiveValuation,
    phi: UPoly,
    gamma: GroupValue,
    _certify: bool = True,
    _resid=None,
) -> InductiveValuation:
    """The augmented valuation [mu; phi, gamma].

    ``phi`` must be a certified key polynomial for ``mu`` and ``gamma``
    must exceed mu(phi); gamma = Infinity creates the terminal step.
    ``_resid`` lets internal callers hand over the residual polynomial
    of phi they just computed for the same state.
    """
    from . import residual  # deferred: residual builds on this module

    if mu.is_terminal:
        raise TerminalValuation("cannot augment past the terminal step")
    if not phi.is_monic() or phi.degree() < 1:
        raise NonMonic("key polynomials are monic of degree >= 1")
    if phi.degree() < mu.degree():
        raise NotKeyPolynomial("degree may not decrease along the chain")
    v_phi = mu.evaluate(phi)
    if gamma.compare(v_phi) <= 0:
        raise NonIncreasingValue(
            f"gamma = {gamma.render()} does not exceed mu(phi) = {v_phi.render()}"
        )
    if _certify:
        ok, cert = residual.is_key_polynomial(mu, phi, _resid=_resid)
        if not ok:
            raise NotKeyPolynomial(str(cert))
    K = mu.K
    if phi.degree() == mu.degree():
        levels = mu.levels
        rf = mu.residue_field
    else:
        R = _resid if _resid is not None else residual.residual_polynomial(mu, phi)
        fdeg = R.upoly.degree()
        if fdeg >= 2:
            rf = mu.residue_field.extend(f"xi{len(mu.residue_field.steps)}", R.upoly)
            z = rf.ctx.gen_elem()
            z_minpoly = R.upoly
        else:
            rf = mu.residue_field
            z = rf.ctx.neg(R.upoly[0])
            z_minpoly = None
        new_level = Level(
            mu.phi,
            mu.gamma,
            mu.e_top,
            mu.u_top,
            mu.u_top_decomp,
            z,
            z_minpoly,
            fdeg,
            rf.ctx,
        )
        levels = mu.levels + (new_level,)
    if gamma.is_infinity:
        return InductiveValuation(K, mu, phi, gamma, levels, rf, None, None, None)
    lat = K.vk_lattice()
    for L in levels:
        lat = lat.extend(L.gamma.coords)
    e = lat.least_multiple(gamma.coords)
    beta, exps = decompose_value(K, levels, gamma.scale(e))
    u = monomial_of_decomposition(K, levels, beta, exps)
    return InductiveValuation(K, mu, phi, gamma, levels, rf, e, u, (beta, exps))


# ---------------------------------------------------------------------------
# Newton polygons
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NewtonPolygon:
    """Lower convex hull of the expansion value points (n, mu(a_n)).

    Slopes increase strictly left to right; augmentation candidates are
    the values -slope exceeding mu(phi).
    """

    points: tuple
    sides: tuple  # (slope: GroupValue, start point, end point)

    def describe(self):
        return {
            "points": [[n, v.render()] for n, v in self.points],
            "sides": [
                {
                    "slope": s.render(),
                    "from": [p1[0], p1[1].render()],
                    "to": [p2[0], p2[1].render()],
                }
                for s, p1, p2 in self.sides
            ],
        }


def newton_polygon(mu: InductiveValuation, phi: UPoly, f: UPoly) -> NewtonPolygon:
    """Polygon of f with respect to an admitted key phi."""
    if f.is_zero():
        raise InputError("polygon of the zero polynomial")
    pts = []
    for n, a in enumerate(phi_expansion(f, phi)):
        if a.is_zero():
            continue
        pts.append((n, mu.evaluate(a)))
    hull = _lower_hull(pts)
    sides = []
    for (n1, v1), (n2, v2) in zip(hull, hull[1:]):
        slope = (v2 - v1).divide(n2 - n1)
        sides.append((slope, (n1, v1), (n2, v2)))
    return NewtonPolygon(tuple(pts), tuple(sides))


def _lower_hull(pts):
    hull = []
    for p in pts:
        while len(hull) >= 2:
            (n1, v1), (n2, v2) = hull[-2], hull[-1]
            n3, v3 = p
            # drop the middle point unless it lies strictly below the chord
            lhs = (v2 - v1).scale(n3 - n1)
            rhs = (v3 - v1).scale(n2 - n1)
            if lhs.compare(rhs) < 0:
                break
            hull.pop()
        hull.append(p)
    return hull


def polygon_candidates(np: NewtonPolygon, gamma_phi: GroupValue):
    """Candidate augmentation values: -slope of sides, above mu(phi), ascending."""
    out = []
    for slope, (n1, v1), (n2, v2) in np.sides:
        cand = (v1 - v2).divide(n2 - n1)
        if cand.compare(gamma_phi) > 0:
            out.append(cand)
    out.sort()
    return out
