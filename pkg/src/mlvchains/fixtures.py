"""Bundled worked examples and the desk corpus.

Three named fixtures drive the CLI's ``--fixture`` switch:

* ``sec32`` -- the wild tower over F_p(q,r,s)(t): g = ((x^p-q)^p - t^p r)^p
  + t^{p^4} x - t^{p^3} s, depth three, residue degree p^3.
* ``sec34`` -- the tame sextic x^6 + 108 over (Q, ord_2): depth two,
  e = 3, f = 2, with no depth-one generator.
* ``sec4``  -- the rank-two series example over Q(t): theta = sqrt(1+t) + i,
  an Okutsu sequence of length two with both steps limit.

``ore_corpus`` ships the unibranched defectless polynomials used by the
degree <= 8 generator-search sweep over ord_p, p in {2, 3, 5}.
"""

from __future__ import annotations

from .basefield import FpRatFuncLaurent, RationalsPadic, ValuedField
from .errors import InputError
from .rings import UPoly


def sec32_field(p: int = 2) -> FpRatFuncLaurent:
    return FpRatFuncLaurent(p, ("q", "r", "s"))


def sec32_polynomial(K: FpRatFuncLaurent) -> UPoly:
    """((x^p - q)^p - t^p r)^p + t^{p^4} x - t^{p^3} s, built by arithmetic."""
    p = K.p
    A = K.arith
    x = UPoly.gen(A)
    q = A.gen("q")
    r = A.gen("r")
    s = A.gen("s")
    t = A.gen("t")

    def tpow(n):
        out = A.one()
        for _ in range(n):
            out = A.mul(out, t)
        return out

    inner = x ** p - UPoly.const(A, q)
    inner = inner ** p - UPoly.const(A, A.mul(tpow(p), r))
    g = inner ** p + UPoly.const(A, tpow(p ** 4)) * x - UPoly.const(A, A.mul(tpow(p ** 3), s))
    return g


def sec34_field() -> RationalsPadic:
    return RationalsPadic(2)


def sec34_polynomial(K: RationalsPadic) -> UPoly:
    A = K.arith
    return UPoly(A, [A.from_int(108)] + [A.zero()] * 5 + [A.one()])


def sec4_okutsu_document(samples: int = 4) -> dict:
    return {
        "oracle": {"kind": "series", "p": 5},
        "families": [
            {
                "degree": 1,
                "generator": {
                    "kind": "theta_digit_truncations",
                    "offset": "1",
                    "samples": samples,
                },
            },
            {
                "degree": 2,
                "generator": {"kind": "i_plus_series_truncations", "samples": samples},
            },
            {"theta": True},
        ],
        "challengers": [
            {"degree": 1, "element": {"1": "3"}},
            {"degree": 1, "element": {"1": "7"}},
            {"degree": 1, "element": {"1": "1 + t"}},
            {"degree": 2, "element": {"i": "1", "1": "1"}},
            {"degree": 2, "element": {"i": "1", "1": "1 + (1/2)*t"}},
            {"degree": 2, "element": {"alpha": "1"}},
        ],
    }


def sec34_okutsu_document() -> dict:
    """Chain-oracle sequence for the tame sextic, with attested level one.

    The degree-three optimal approximants of theta lie outside L; their
    maximal distance 4/3 is attested (the cube root b of -2 closest to
    theta has v(theta - b) = v_theta(x^3+2) - 2*(1/3) = 2 - 2/3).  Both
    distance sets carry maxima, so both steps are ordinary.
    """
    return {
        "oracle": {
            "kind": "chain",
            "field": {"kind": "Q_padic", "p": 2},
            "poly": {"coeffs": ["108", "0", "0", "0", "0", "0", "1"], "var": "x"},
        },
        "families": [
            {
                "degree": 1,
                "elements": [{"coeffs": ["0"], "var": "x"}],
                "max_exists": True,
            },
            {
                "degree": 3,
                "elements": [
                    {
                        "attested": True,
                        "degree": 3,
                        "distance": "4/3",
                        "note": "nearest root of x^3+2; lies outside L",
                    }
                ],
                "max_exists": True,
            },
            {"theta": True},
        ],
        "challengers": [
            {"degree": 1, "element": {"coeffs": ["2"], "var": "x"}},
            {"degree": 1, "element": {"coeffs": ["-6"], "var": "x"}},
            {"degree": 2, "element": {"coeffs": ["0", "0", "0", "1"], "var": "x"}},
            {"degree": 3, "element": {"coeffs": ["0", "0", "1"], "var": "x"}},
            {"degree": 3, "element": {"coeffs": ["2", "0", "1", "0", "1"], "var": "x"}},
        ],
    }


# (p, coefficients lowest-first, label) -- all verified unibranched and
# defectless by the acceptance suite before the search sweep runs.
ORE_CORPUS = [
    (2, [-2, 1], "x-2"),
    (2, [-2, 0, 1], "x^2-2"),
    (2, [2, 2, 1], "x^2+2x+2"),
    (2, [1, 1, 1], "x^2+x+1"),
    (2, [-2, 0, 0, 1], "x^3-2"),
    (2, [1, 1, 0, 1], "x^3+x+1"),
    (2, [-2, 0, 0, 0, 1], "x^4-2"),
    (2, [1, 1, 0, 0, 1], "x^4+x+1"),
    (2, [2, 0, 2, 0, 1], "x^4+2x^2+2"),
    (2, [-2, 0, 0, 0, 0, 1], "x^5-2"),
    (2, [108, 0, 0, 0, 0, 0, 1], "x^6+108"),
    (2, [2, 0, 0, 0, 0, 0, 1], "x^6+2"),
    (2, [-2, 0, 0, 0, 0, 0, 0, 0, 1], "x^8-2"),
    (3, [-3, 0, 1], "x^2-3"),
    (3, [1, 0, 1], "x^2+1"),
    (3, [-3, 0, 0, 1], "x^3-3"),
    (3, [1, 2, 0, 1], "x^3+2x+1"),
    (3, [3, 0, 3, 0, 1], "x^4+3x^2+3"),
    (3, [-3, 0, 0, 0, 0, 0, 1], "x^6-3"),
    (5, [-5, 0, 1], "x^2-5"),
    (5, [2, 0, 1], "x^2+2"),
    (5, [-5, 0, 0, 1], "x^3-5"),
    (5, [5, 5, 0, 0, 1], "x^4+5x+5"),
    (5, [2, 1, 0, 1], "x^3+x+2"),
]


def ore_corpus_entries():
    out = []
    for p, coeffs, label in ORE_CORPUS:
        K = RationalsPadic(p)
        A = K.arith
        out.append((K, UPoly(A, [A.from_int(c) for c in coeffs]), label))
    return out


def fixture_payload(name: str, task: str) -> dict:
    """The problem document a fixture supplies for a CLI task."""
    if name == "sec32":
        field = {"kind": "Fp_rft", "p": 2, "vars": ["q", "r", "s"]}
        K = sec32_field(2)
        g = sec32_polynomial(K)
        poly = {"coeffs": [K.render(c) for c in g.coeffs], "var": "x"}
        if task in ("chain", "branches", "depth"):
            return {"field": field, "poly": poly}
        if task == "iskey":
            return {
                "field": field,
                "chain": {
                    "steps": [
                        {"phi": {"coeffs": ["0", "1"]}, "gamma": "0"},
                        {"phi": {"coeffs": ["-q", "0", "1"]}, "gamma": "1"},
                        {
                            "phi": {"coeffs": ["q^2 + t^2*r", "0", "0", "0", "1"]},
                            "gamma": "4",
                        },
                    ]
                },
                "poly": poly,
            }
        if task in ("residual", "eval"):
            payload = fixture_payload("sec32", "iskey")
            return payload
        raise InputError(f"fixture sec32 does not serve task {task!r}")
    if name == "sec34":
        field = {"kind": "Q_padic", "p": 2}
        poly = {"coeffs": ["108", "0", "0", "0", "0", "0", "1"], "var": "x"}
        if task in ("chain", "branches", "depth"):
            return {"field": field, "poly": poly}
        if task == "cert-depth-one":
            return {"field": field, "poly": poly, "alpha": {"coeffs": ["0", "1"]}}
        if task == "search-generators":
            return {
                "field": field,
                "poly": poly,
                "box": [-2, 2],
                "budget": 100000,
            }
        if task == "okutsu-verify":
            return sec34_okutsu_document()
        if task in ("residual", "eval", "iskey"):
            return {
                "field": field,
                "chain": {"steps": [{"phi": {"coeffs": ["0", "1"]}, "gamma": "1/3"}]},
                "poly": poly,
            }
        raise InputError(f"fixture sec34 does not serve task {task!r}")
    if name == "sec4":
        if task == "okutsu-verify":
            return sec4_okutsu_document()
        if task == "series-value":
            return {
                "p": 5,
                "elements": [
                    {"1": "3"},
                    {"i": "1", "1": "1"},
                    {"i": "1", "1": "1 + (1/2)*t"},
                ],
            }
        raise InputError(f"fixture sec4 does not serve task {task!r}")
    raise InputError(f"unknown fixture {name!r}")
