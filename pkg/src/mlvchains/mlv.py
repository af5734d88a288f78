"""MLV-chain construction, depth, certificates and generator search.

The chain loop is not a quoted algorithm; its correctness is anchored by
post-hoc certificates: every augmentation is key-certified, the terminal
residual is irreducible, and chains carry full provenance (residual
polynomials, factorizations, Newton polygons) sufficient for offline
re-verification.

Residual splits mean the input is not unibranched.  ``branch_policy``
controls the loop: ``"follow"`` (default) proceeds deterministically
into the first component -- on genuinely branched inputs the walk never
grows the key degree and ends in LimitSituation, which is the diagnosis
the negative controls expect; ``"error"`` raises Branched immediately,
pointing at :func:`factor_certificate`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .basefield import ValuedField, field_from_descriptor
from .errors import (
    Branched,
    InputError,
    LimitSituation,
    NonMonic,
)
from .indval import (
    InductiveValuation,
    augment,
    depth_zero,
    gauss_valuation,
    newton_polygon,
    polygon_candidates,
)
from .ordgroup import GroupValue, infinity
from .poly import minimal_polynomial_in_quotient, parse_poly, render_poly, resultant
from .residual import residual_polynomial, unit_residue
from .rings import TowerField, UPoly, embed_chain, factor_univariate


# ---------------------------------------------------------------------------
# chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalizedStep:
    """One augmentation of the refinement-collapsed chain."""

    phi: UPoly
    gamma: GroupValue
    kind: str  # "ordinary" | "limit-attested"
    e_src: int
    f_step: int


@dataclass(frozen=True)
class MLVChain:
    """A terminal inductive valuation with its normalized view."""

    valuation: InductiveValuation
    normalized: tuple  # (phi, gamma) nodes, strictly increasing degrees
    steps: tuple  # NormalizedStep per augmentation
    depth: int
    provenance: tuple
    notes: tuple = ()

    def degree(self) -> int:
        return self.valuation.degree()


@dataclass(frozen=True)
class ChainInvariants:
    e: int
    f: int
    defect_assumed_one: bool = True


def depth(chain: MLVChain) -> int:
    return chain.depth


def chain_invariants(chain: MLVChain) -> ChainInvariants:
    e = 1
    f = 1
    for s in chain.steps:
        e *= s.e_src
        f *= s.f_step
    return ChainInvariants(e, f)


def _normalize(term: InductiveValuation):
    out = []
    for phi, gamma in term.raw_steps():
        if out and out[-1][0].degree() == phi.degree():
            out[-1] = (phi, gamma)
        else:
            out.append((phi, gamma))
    return out


def _build_chain(term: InductiveValuation, provenance, notes=()) -> MLVChain:
    normalized = _normalize(term)
    levels = term.levels
    steps = []
    for i in range(1, len(normalized)):
        phi, gamma = normalized[i]
        steps.append(
            NormalizedStep(phi, gamma, "ordinary", levels[i - 1].e, levels[i - 1].fdeg)
        )
    if len(levels) != len(normalized) - 1:
        raise AssertionError("normalized nodes out of sync with level records")
    return MLVChain(
        term, tuple(normalized), tuple(steps), len(normalized) - 1, tuple(provenance), tuple(notes)
    )


def _validate_input(K: ValuedField, g: UPoly):
    if g.is_zero() or g.degree() < 1:
        raise InputError("chain input must have degree >= 1")
    if not g.is_monic():
        raise NonMonic("chain input must be monic (normalization is never implicit)")
    zero = K.zero_value()
    for c in g.coeffs:
        if K.arith.is_zero(c):
            continue
        if K.val(c) < zero:
            raise InputError("chain input must have valuation-ring coefficients")


def _components(mu, R, facs):
    comps = []
    if R.l0 > 0:
        comps.append(("phi", None, None))
    for h, mult in facs:
        comps.append(("res", h, mult))
    return comps


def compute_mlv_chain(
    K: ValuedField,
    g: UPoly,
    max_refinements: int = 25,
    branch_policy: str = "follow",
) -> MLVChain:
    """Build the MLV chain of a root of g by ordinary augmentations.

    Starts at the Gauss valuation and alternates residual factorization,
    key lifting and Newton-polygon reading until g is certified key and
    appended with value Infinity.  Intended for unibranched defectless
    inputs; elsewhere the refinement bound trips LimitSituation (limit
    augmentations are diagnosed, never synthesized).
    """
    _validate_input(K, g)
    if g.degree() == 1:
        root = K.arith.neg(g[0])
        term = depth_zero(K, root, infinity(K.rank))
        return _build_chain(term, ({"level": 0, "note": "degree-one input"},))
    mu = gauss_valuation(K)
    refinements = 0
    provenance = []
    notes = []
    while True:
        R = residual_polynomial(mu, g)
        facs = factor_univariate(R.upoly) if R.d >= 1 else []
        record = {
            "phi": render_poly(K, mu.phi),
            "gamma": mu.gamma.render(),
            "e": mu.e_top,
            "u": render_poly(K, mu.u_top),
            "residual": R.describe(),
            "residual_factors": [[h.render(var="y"), m] for h, m in facs],
        }
        # is g itself a key polynomial here?
        if g.degree() == mu.degree():
            diff = g - mu.phi
            if diff.is_zero() or mu.evaluate(diff).compare(mu.gamma) > 0:
                record["terminal"] = "equal-initial-form"
                provenance.append(record)
                mu = augment(mu, g, infinity(K.rank), _resid=R)
                break
        if (
            R.d >= 1
            and len(facs) == 1
            and facs[0][1] == 1
            and g.degree() == mu.degree() * mu.e_top * R.d
        ):
            record["terminal"] = "residually-irreducible"
            provenance.append(record)
            mu = augment(mu, g, infinity(K.rank), _resid=R)
            break
        comps = _components(mu, R, facs)
        if not comps:
            raise AssertionError("no residual component; input escaped the loop")
        if len(comps) > 1:
            rendered = [
                "phi" if kind == "phi" else h.render(var="y")
                for kind, h, _ in comps
            ]
            if branch_policy == "error":
                raise Branched(rendered)
            record["branch_followed"] = rendered[0]
            notes.append({"level": len(provenance), "branched_into": rendered})
        kind, h, mult = comps[0]
        RQ = None
        if kind == "phi":
            Q = mu.phi
        else:
            from .residual import lift_key_polynomial

            Q, RQ = lift_key_polynomial(mu, h)
        record["next_key"] = render_poly(K, Q)
        quo, rem = g.divmod(Q)
        if rem.is_zero():
            # proper factor found: the walk terminates on a root of Q
            record["terminal"] = "exact-divisor"
            provenance.append(record)
            notes.append({"level": len(provenance), "reducible_input_divisor_degree": Q.degree()})
            mu = augment(mu, Q, infinity(K.rank), _resid=RQ)
            break
        np = newton_polygon(mu, Q, g)
        cands = polygon_candidates(np, mu.evaluate(Q))
        record["polygon"] = np.describe()
        if not cands:
            raise AssertionError("no admissible polygon side above mu(Q)")
        if len(cands) > 1:
            if branch_policy == "error":
                raise Branched([c.render() for c in cands], "polygon splits the branch")
            notes.append(
                {"level": len(provenance), "polygon_branches": [c.render() for c in cands]}
            )
        gamma_next = cands[0]
        record["gamma_next"] = gamma_next.render()
        provenance.append(record)
        was_deg = mu.degree()
        mu = augment(mu, Q, gamma_next, _resid=RQ)
        if mu.degree() == was_deg:
            refinements += 1
            if refinements > max_refinements:
                raise LimitSituation(
                    f"{refinements} refinements without degree growth "
                    f"(limit augmentation or defect suspected)",
                    refinements=refinements,
                    trace=provenance,
                )
        else:
            refinements = 0
    return _build_chain(mu, provenance, notes)


# ---------------------------------------------------------------------------
# branch certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchRecord:
    label: tuple
    resolved: bool
    e: int | None
    f: int | None
    degree: int | None
    reason: str
    chain_steps: tuple


def _branch_chain_steps(mu: InductiveValuation):
    return tuple((p.render(var="x"), g.render()) for p, g in mu.raw_steps())


def factor_certificate(K: ValuedField, g: UPoly, max_refinements: int = 25):
    """Explore every residual branch of g; Ore's program as a certificate.

    A branch resolves when its residual multiplicity is one (e, f read
    off) or its lifted key reaches the terminal step; branches that hit
    the refinement bound are reported unresolved, not thrown.
    """
    _validate_input(K, g)
    if g.degree() == 1:
        return [
            BranchRecord((), True, 1, 1, 1, "degree-one", ((g.render(var="x"), "inf"),))
        ]
    records = []
    queue = [(gauss_valuation(K), (), 0)]
    while queue:
        mu, label, refn = queue.pop(0)
        R = residual_polynomial(mu, g)
        facs = factor_univariate(R.upoly) if R.d >= 1 else []
        # terminal cases: g itself is a key polynomial for mu
        terminal = False
        if g.degree() == mu.degree():
            diff = g - mu.phi
            terminal = diff.is_zero() or mu.evaluate(diff).compare(mu.gamma) > 0
        if not terminal and R.d >= 1 and len(facs) == 1 and facs[0][1] == 1:
            terminal = g.degree() == mu.degree() * mu.e_top * R.d
        if terminal:
            term = augment(mu, g, infinity(K.rank), _resid=R if R.d >= 1 else None)
            e = 1
            for L in term.levels:
                e *= L.e
            f = term.residue_field.degree_over_base()
            records.append(
                BranchRecord(label, True, e, f, e * f, "terminal", _branch_chain_steps(term))
            )
            continue
        comps = _components(mu, R, facs)
        for kind, h, mult in comps:
            RQ = None
            if kind == "res":
                sub = label + (h.render(var="y"),)
                if mult == 1:
                    e = mu.e_top
                    for L in mu.levels:
                        e *= L.e
                    f = mu.residue_field.degree_over_base() * h.degree()
                    records.append(
                        BranchRecord(
                            sub, True, e, f, e * f, "multiplicity-one", _branch_chain_steps(mu)
                        )
                    )
                    continue
                from .residual import lift_key_polynomial

                Q, RQ = lift_key_polynomial(mu, h)
            else:
                sub = label + ("phi",)
                Q = mu.phi
            quo, rem = g.divmod(Q)
            if rem.is_zero():
                term = augment(mu, Q, infinity(K.rank), _resid=RQ)
                e = 1
                for L in term.levels:
                    e *= L.e
                f = term.residue_field.degree_over_base()
                records.append(
                    BranchRecord(
                        sub, True, e, f, e * f, "exact-divisor", _branch_chain_steps(term)
                    )
                )
                continue
            np = newton_polygon(mu, Q, g)
            cands = polygon_candidates(np, mu.evaluate(Q))
            if not cands:
                records.append(
                    BranchRecord(sub, False, None, None, None, "stuck:no-side", _branch_chain_steps(mu))
                )
                continue
            for gamma_next in cands:
                sublabel = sub + (gamma_next.render(),)
                nxt = augment(mu, Q, gamma_next)
                nrefn = refn + 1 if nxt.degree() == mu.degree() else 0
                if nrefn > max_refinements:
                    records.append(
                        BranchRecord(
                            sublabel,
                            False,
                            None,
                            None,
                            None,
                            "unresolved:refinement-bound",
                            _branch_chain_steps(nxt),
                        )
                    )
                else:
                    queue.append((nxt, sublabel, nrefn))
    records.sort(key=lambda r: r.label)
    return records


# ---------------------------------------------------------------------------
# depth-one certificate
# ---------------------------------------------------------------------------

def _flatten_to_base(ctx, val, base_ctx):
    if ctx == base_ctx:
        return [val]
    if not isinstance(ctx, TowerField):
        raise AssertionError("flattening fell off the tower")
    out = []
    for c in val:
        out.extend(_flatten_to_base(ctx.base, c, base_ctx))
    return out


def _minpoly_over_base(ctx, base_ctx, elem) -> UPoly:
    """Minimal polynomial of a tower element over the bottom field."""
    dim = 1
    walk = ctx
    while walk != base_ctx:
        dim *= walk.deg
        walk = walk.base
    basis = []
    power = ctx.one()
    for k in range(dim + 1):
        vec = _flatten_to_base(ctx, power, base_ctx)
        combo = [base_ctx.zero()] * (k + 1)
        combo[k] = base_ctx.one()
        for bvec, bpiv, bcombo in basis:
            c = vec[bpiv]
            if base_ctx.is_zero(c):
                continue
            vec = [base_ctx.sub(x, base_ctx.mul(c, y)) for x, y in zip(vec, bvec)]
            for i, y in enumerate(bcombo):
                combo[i] = base_ctx.sub(combo[i], base_ctx.mul(c, y))
        piv = next((i for i, x in enumerate(vec) if not base_ctx.is_zero(x)), None)
        if piv is None:
            return UPoly(base_ctx, combo)
        inv = base_ctx.inv(vec[piv])
        vec = [base_ctx.mul(x, inv) for x in vec]
        combo = [base_ctx.mul(x, inv) for x in combo]
        basis.append((vec, piv, combo))
        power = ctx.mul(power, elem)
    raise AssertionError("no dependency found in tower")


def depth_one_certificate(chain: MLVChain, alpha: UPoly) -> dict:
    """Check whether alpha witnesses depth one for the chain's extension.

    Condition: v(alpha) + vK generates vL/vK, and the residue of
    alpha^e/u generates the residue extension (u the section element of
    value e*v(alpha)).  Returns a report; the two failure modes are
    reported distinctly as ValueNotGenerating / ResidueNotGenerating.
    """
    term = chain.valuation
    K = term.K
    inv = chain_invariants(chain)
    report = {"e": inv.e, "f": inv.f, "ok": False}
    if alpha.is_zero() or alpha.degree() >= term.degree():
        raise InputError("alpha must be a nonzero class of degree < deg(g)")
    v_alpha = term.evaluate(alpha)
    report["v_alpha"] = v_alpha.render()
    order = K.vk_lattice().least_multiple(v_alpha.coords)
    report["value_order"] = order
    if order != inv.e:
        report["failure"] = "ValueNotGenerating"
        return report
    from .indval import decompose_value
    from .residual import _kres_at, reduce_monomial

    levels = term.levels
    _, res_a = _kres_at(K, levels, len(levels), alpha)
    beta_a, exps_a = decompose_value(K, levels, v_alpha)
    beta_r, exps_r, sigma = reduce_monomial(
        K, levels, len(levels), beta_a.scale(inv.e), tuple(c * inv.e for c in exps_a)
    )
    if any(exps_r):
        raise AssertionError("e * v(alpha) should reduce into vK")
    kappa = term.kappa_ctx()
    rho = kappa.one()
    for _ in range(inv.e):
        rho = kappa.mul(rho, res_a)
    rho = kappa.mul(rho, sigma)
    report["u"] = K.render(K.section(v_alpha.scale(inv.e)))
    report["rho"] = kappa.render(rho)
    base_ctx = K.residue_field_obj.ctx
    mp = _minpoly_over_base(kappa, base_ctx, rho)
    report["rho_minpoly"] = mp.render(var="y")
    report["rho_degree"] = mp.degree()
    if mp.degree() != inv.f:
        report["failure"] = "ResidueNotGenerating"
        return report
    report["ok"] = True
    return report


# ---------------------------------------------------------------------------
# generator search
# ---------------------------------------------------------------------------

@dataclass
class SearchResult:
    min_depth: int | None
    witness: tuple | None
    witness_minpoly: dict | None
    table: list = field(default_factory=list)
    scanned: int = 0
    full_degree: int = 0
    exhausted_budget: bool = False
    notes: list = field(default_factory=list)


def _candidate_boxes(degree: int, box: range):
    # skip the constant-only candidates: they never generate for deg > 1
    for coeffs in itertools.product(box, repeat=degree):
        if all(c == 0 for c in coeffs[1:]):
            continue
        yield coeffs


def search_depth_of_candidate(K, g, coeffs, max_refinements=25):
    """(minpoly, depth or None) for one candidate class sum c_i x^i."""
    A = K.arith
    h = UPoly(A, [A.from_int(c) for c in coeffs])
    mp = minimal_polynomial_in_quotient(K, g, h)
    if mp.degree() < g.degree():
        return mp, None
    chain = compute_mlv_chain(K, mp, max_refinements=max_refinements)
    return mp, chain.depth


def generator_search(
    K: ValuedField,
    g: UPoly,
    box: range = range(-2, 3),
    budget: int = 100000,
    stop_at_depth: int | None = None,
    max_refinements: int = 25,
    parallel: int = 1,
    rs_bounds: tuple | None = None,
) -> SearchResult:
    """Enumerate generators over a coefficient box; depth upper bound.

    Keeps candidates whose minimal polynomial has full degree, computes
    each exact depth through the chain builder, and returns the minimum:
    an upper bound for the depth of the extension (per-generator depths
    are exact).  ``stop_at_depth`` ends the scan early once witnessed;
    ``budget`` caps scanned candidates (partial table returned).
    """
    _validate_input(K, g)
    result = SearchResult(None, None, None)
    cache: dict = {}
    candidates = _candidate_boxes(g.degree(), box)
    if parallel > 1:
        _parallel_scan(K, g, candidates, budget, stop_at_depth, max_refinements, parallel, result)
        return result
    for coeffs in candidates:
        if result.scanned >= budget:
            result.exhausted_budget = True
            break
        result.scanned += 1
        try:
            mp, dep = search_depth_of_candidate(K, g, coeffs, max_refinements)
        except LimitSituation:
            result.notes.append({"candidate": list(coeffs), "limit_situation": True})
            continue
        if dep is None:
            continue
        result.full_degree += 1
        key = tuple(K.render(c) for c in mp.coeffs)
        cache[key] = dep
        result.table.append({"candidate": list(coeffs), "depth": dep})
        if result.min_depth is None or dep < result.min_depth:
            result.min_depth = dep
            result.witness = coeffs
            result.witness_minpoly = render_poly(K, mp)
        if stop_at_depth is not None and result.min_depth is not None:
            if result.min_depth <= stop_at_depth:
                break
    if rs_bounds is not None:
        r, s = rs_bounds
        result.notes.append(
            {
                "conjectured_lower": max(r, s),
                "conjectured_upper": r + s,
                "min_depth_found": result.min_depth,
                "within_conjecture": (
                    result.min_depth is not None and max(r, s) <= result.min_depth <= r + s
                ),
            }
        )
    return result


def _parallel_scan(K, g, candidates, budget, stop_at_depth, max_refinements, parallel, result):
    from concurrent.futures import ProcessPoolExecutor

    desc = K.describe()
    g_coeffs = [K.render(c) for c in g.coeffs]
    batch = []
    for coeffs in candidates:
        if len(batch) >= budget:
            result.exhausted_budget = True
            break
        batch.append(coeffs)
    args = [(desc, g_coeffs, coeffs, max_refinements) for coeffs in batch]
    with ProcessPoolExecutor(max_workers=parallel) as ex:
        for coeffs, outcome in zip(batch, ex.map(_search_worker, args, chunksize=64)):
            result.scanned += 1
            kind, payload = outcome
            if kind == "limit":
                result.notes.append({"candidate": list(coeffs), "limit_situation": True})
                continue
            if kind == "partial":
                continue
            dep, mp_doc = payload
            result.full_degree += 1
            result.table.append({"candidate": list(coeffs), "depth": dep})
            if result.min_depth is None or dep < result.min_depth:
                result.min_depth = dep
                result.witness = coeffs
                result.witness_minpoly = mp_doc
            if stop_at_depth is not None and result.min_depth is not None:
                if result.min_depth <= stop_at_depth:
                    break


def _search_worker(args):
    desc, g_coeffs, coeffs, max_refinements = args
    K = field_from_descriptor(desc)
    g = parse_poly(K, g_coeffs)
    try:
        mp, dep = search_depth_of_candidate(K, g, coeffs, max_refinements)
    except LimitSituation:
        return ("limit", None)
    if dep is None:
        return ("partial", None)
    return ("ok", (dep, render_poly(K, mp)))


# ---------------------------------------------------------------------------
# norm oracle (independent cross-check for unibranched chains)
# ---------------------------------------------------------------------------

def norm_oracle_check(chain: MLVChain, f: UPoly) -> bool:
    """deg(g) * v_theta(f) == val(Res(g, f)), exactly (unibranched only)."""
    term = chain.valuation
    K = term.K
    g = term.phi
    lhs = term.evaluate(f)
    if lhs.is_infinity:
        return False
    res = resultant(K, g, f)
    rhs = K.val(res)
    return lhs.scale(g.degree()).compare(rhs) == 0


# ---------------------------------------------------------------------------
# report rendering
# ---------------------------------------------------------------------------

def chain_report(K: ValuedField, chain: MLVChain) -> dict:
    inv = chain_invariants(chain)
    term = chain.valuation
    steps = []
    for s in chain.steps:
        steps.append(
            {
                "phi_deg": s.phi.degree(),
                "gamma": s.gamma.render(),
                "kind": s.kind,
                "e_i": s.e_src,
                "f_i": s.f_step,
            }
        )
    from .residual import residue_tower

    return {
        "field": K.describe(),
        "depth": chain.depth,
        "e": inv.e,
        "f": inv.f,
        "defect_assumed_one": inv.defect_assumed_one,
        "steps": steps,
        "chain": {
            "steps": [
                {"phi": render_poly(K, p), "gamma": g.render()} for p, g in term.raw_steps()
            ]
        },
        "residue_field": term.residue_field.describe(),
        "tower": residue_tower(term).describe(),
        "provenance": list(chain.provenance),
        "notes": list(chain.notes),
    }
