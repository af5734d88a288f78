"""Ordered value groups (rank 1 and 2, plus infinity) and their cuts.

The group is the divisible hull of the base value group: rank one is Q,
rank two is Q^2 ordered lexicographically, each extended by an absorbing
``Infinity``.  Cuts form a closed six-variant family; comparison and
addition are driven by exhaustive variant tables whose entries are
justified by the left-set arithmetic (delta^L subset / delta^L + eps^L)
and checked against a grid-sampling oracle in the test suite.

One deliberate corner: the displayed addition formula forces
``(-inf) + (inf^-) = -inf`` (the empty left set absorbs), although prose
elsewhere says adding ``inf^-`` fixes every cut.  We follow the formula.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import InputError, MixedRank, UnrepresentableCut


# ---------------------------------------------------------------------------
# group values
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GroupValue:
    """Element of Q, Q^2-lex, or the absorbing Infinity.

    ``coords`` is a tuple of Fractions of length ``rank``; ``None``
    encodes Infinity.  Division by positive integers is exact: the group
    is its own divisible hull.
    """

    rank: int
    coords: tuple | None

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise InputError(f"unsupported group rank {self.rank}")
        if self.coords is not None and len(self.coords) != self.rank:
            raise InputError("coordinate arity does not match rank")

    @property
    def is_infinity(self) -> bool:
        return self.coords is None

    def _check(self, other: "GroupValue"):
        if self.rank != other.rank:
            raise MixedRank(f"rank {self.rank} vs rank {other.rank}")

    def __add__(self, other: "GroupValue") -> "GroupValue":
        self._check(other)
        if self.is_infinity or other.is_infinity:
            return GroupValue(self.rank, None)
        return GroupValue(
            self.rank, tuple(a + b for a, b in zip(self.coords, other.coords))
        )

    def __sub__(self, other: "GroupValue") -> "GroupValue":
        self._check(other)
        if self.is_infinity and not other.is_infinity:
            return GroupValue(self.rank, None)
        if self.is_infinity or other.is_infinity:
            raise InputError("cannot subtract Infinity")
        return GroupValue(
            self.rank, tuple(a - b for a, b in zip(self.coords, other.coords))
        )

    def scale(self, n: int) -> "GroupValue":
        """Integer multiple; n must be positive when the value is Infinity."""
        if self.is_infinity:
            if n <= 0:
                raise InputError("cannot scale Infinity by a non-positive integer")
            return self
        return GroupValue(self.rank, tuple(a * n for a in self.coords))

    def divide(self, n: int) -> "GroupValue":
        """Exact division by a positive integer (divisible hull)."""
        if n <= 0:
            raise InputError("division only by positive integers")
        if self.is_infinity:
            return self
        return GroupValue(self.rank, tuple(Fraction(a, 1) / n for a in self.coords))

    def compare(self, other: "GroupValue") -> int:
        self._check(other)
        if self.is_infinity and other.is_infinity:
            return 0
        if self.is_infinity:
            return 1
        if other.is_infinity:
            return -1
        if self.coords == other.coords:
            return 0
        return -1 if self.coords < other.coords else 1

    def __lt__(self, other):
        return self.compare(other) < 0

    def __le__(self, other):
        return self.compare(other) <= 0

    def __gt__(self, other):
        return self.compare(other) > 0

    def __ge__(self, other):
        return self.compare(other) >= 0

    def render(self) -> str:
        if self.is_infinity:
            return "inf"
        if self.rank == 1:
            return str(self.coords[0])
        return "(" + ", ".join(str(c) for c in self.coords) + ")"

    def __repr__(self):
        return self.render()


def value(rank: int, *coords) -> GroupValue:
    return GroupValue(rank, tuple(Fraction(c) for c in coords))


def rank1(q) -> GroupValue:
    return GroupValue(1, (Fraction(q),))


def rank2(a, b) -> GroupValue:
    return GroupValue(2, (Fraction(a), Fraction(b)))


def infinity(rank: int) -> GroupValue:
    return GroupValue(rank, None)


def parse_value(text: str, rank: int) -> GroupValue:
    text = text.strip()
    if text == "inf":
        return infinity(rank)
    if text.startswith("("):
        if not text.endswith(")"):
            raise InputError(f"bad group value {text!r}")
        parts = [p.strip() for p in text[1:-1].split(",")]
        if len(parts) != rank:
            raise MixedRank(f"value {text!r} does not have rank {rank}")
        return GroupValue(rank, tuple(Fraction(p) for p in parts))
    if rank != 1:
        raise MixedRank(f"value {text!r} does not have rank {rank}")
    return rank1(Fraction(text))


# ---------------------------------------------------------------------------
# cuts
# ---------------------------------------------------------------------------

MINUS_INF = "minus_inf"
PRINCIPAL_PLUS = "principal_plus"
PRINCIPAL_MINUS = "principal_minus"
LEVEL_PLUS = "level_plus"
LEVEL_MINUS = "level_minus"
PLUS_INF_MINUS = "plus_inf_minus"


@dataclass(frozen=True)
class Cut:
    """A cut (delta^L, delta^R) of the value group, six-variant family.

    * ``minus_inf``: delta^L empty (absolute minimum).
    * ``principal_plus(g)``: delta^L = {x : x <= g}.
    * ``principal_minus(g)``: delta^L = {x : x < g}.
    * ``level_plus(a)``: rank 2 only, delta^L = {(x, y) : x <= a}.
    * ``level_minus(a)``: rank 2 only, delta^L = {(x, y) : x < a}.
    * ``plus_inf_minus``: delta^L = whole group (absolute maximum).
    """

    rank: int
    kind: str
    gamma: GroupValue | None = None
    level: Fraction | None = None

    def __post_init__(self):
        if self.kind in (PRINCIPAL_PLUS, PRINCIPAL_MINUS):
            if self.gamma is None or self.gamma.is_infinity:
                raise InputError("principal cuts need a finite group value")
            if self.gamma.rank != self.rank:
                raise MixedRank("cut rank does not match its value")
        elif self.kind in (LEVEL_PLUS, LEVEL_MINUS):
            if self.rank != 2:
                raise InputError("level cuts exist only in rank 2")
            if self.level is None:
                raise InputError("level cuts need a level")
        elif self.kind not in (MINUS_INF, PLUS_INF_MINUS):
            raise InputError(f"unknown cut kind {self.kind!r}")

    def render(self) -> str:
        if self.kind == MINUS_INF:
            return "-inf"
        if self.kind == PLUS_INF_MINUS:
            return "inf^-"
        if self.kind == PRINCIPAL_PLUS:
            return f"{self.gamma.render()}^+"
        if self.kind == PRINCIPAL_MINUS:
            return f"{self.gamma.render()}^-"
        sign = "+" if self.kind == LEVEL_PLUS else "-"
        return f"lvl({self.level})^{sign}"

    def __repr__(self):
        return self.render()


def principal_plus(gamma: GroupValue) -> Cut:
    return Cut(gamma.rank, PRINCIPAL_PLUS, gamma=gamma)


def principal_minus(gamma: GroupValue) -> Cut:
    return Cut(gamma.rank, PRINCIPAL_MINUS, gamma=gamma)


def minus_inf(rank: int) -> Cut:
    return Cut(rank, MINUS_INF)


def plus_inf_minus(rank: int) -> Cut:
    return Cut(rank, PLUS_INF_MINUS)


def level_plus(a) -> Cut:
    return Cut(2, LEVEL_PLUS, level=Fraction(a))


def level_minus(a) -> Cut:
    return Cut(2, LEVEL_MINUS, level=Fraction(a))


def parse_cut(text: str, rank: int) -> Cut:
    text = text.strip()
    if text == "-inf":
        return minus_inf(rank)
    if text == "inf^-":
        return plus_inf_minus(rank)
    if text.startswith("lvl(") :
        body, _, sign = text.partition(")^")
        if sign not in ("+", "-"):
            raise InputError(f"bad cut {text!r}")
        a = Fraction(body[4:])
        return level_plus(a) if sign == "+" else level_minus(a)
    if text.endswith("^+"):
        return principal_plus(parse_value(text[:-2], rank))
    if text.endswith("^-"):
        return principal_minus(parse_value(text[:-2], rank))
    raise InputError(f"bad cut {text!r}")


def _first(gamma: GroupValue) -> Fraction:
    return gamma.coords[0]


def cut_compare(delta: Cut, eps: Cut) -> int:
    """Total order on cuts: delta <= eps iff delta^L is a subset of eps^L.

    Returns -1, 0 or 1.  The variant table below enumerates all pairs;
    each entry implements the subset relation of the two left sets.
    """
    if delta.rank != eps.rank:
        raise MixedRank("cannot compare cuts of different ranks")
    a, b = delta.kind, eps.kind
    if a == b:
        if a in (MINUS_INF, PLUS_INF_MINUS):
            return 0
        if a in (PRINCIPAL_PLUS, PRINCIPAL_MINUS):
            return delta.gamma.compare(eps.gamma)
        # level vs level of the same sign
        return -1 if delta.level < eps.level else (0 if delta.level == eps.level else 1)
    if a == MINUS_INF:
        return -1
    if b == MINUS_INF:
        return 1
    if a == PLUS_INF_MINUS:
        return 1
    if b == PLUS_INF_MINUS:
        return -1
    table = {
        # (-inf, g]  vs  (-inf, e):   subset iff g < e
        (PRINCIPAL_PLUS, PRINCIPAL_MINUS):
            lambda d, e: -1 if d.gamma < e.gamma else 1,
        # (-inf, g)  vs  (-inf, e]:   subset iff g <= e
        (PRINCIPAL_MINUS, PRINCIPAL_PLUS):
            lambda d, e: -1 if d.gamma <= e.gamma else 1,
        # {x <= a}   vs  {v <= g}:    subset iff a < g1; superset iff g1 <= a
        (LEVEL_PLUS, PRINCIPAL_PLUS):
            lambda d, e: -1 if d.level < _first(e.gamma) else 1,
        # {x <= a}   vs  {v < g}:     subset iff a < g1
        (LEVEL_PLUS, PRINCIPAL_MINUS):
            lambda d, e: -1 if d.level < _first(e.gamma) else 1,
        # {x < a}    vs  {v <= g}:    subset iff a <= g1
        (LEVEL_MINUS, PRINCIPAL_PLUS):
            lambda d, e: -1 if d.level <= _first(e.gamma) else 1,
        # {x < a}    vs  {v < g}:     subset iff a <= g1
        (LEVEL_MINUS, PRINCIPAL_MINUS):
            lambda d, e: -1 if d.level <= _first(e.gamma) else 1,
        # {x < a}    vs  {x <= a'}:   subset iff a <= a'
        (LEVEL_MINUS, LEVEL_PLUS):
            lambda d, e: -1 if d.level <= e.level else 1,
        # {x <= a}   vs  {x < a'}:    subset iff a < a'
        (LEVEL_PLUS, LEVEL_MINUS):
            lambda d, e: -1 if d.level < e.level else 1,
    }
    if (a, b) in table:
        return table[(a, b)](delta, eps)
    return -table[(b, a)](eps, delta)


def cut_add(delta: Cut, eps: Cut) -> Cut:
    """Addition of cuts: (delta^L + eps^L, complement).

    Entries follow from set arithmetic in the divisible group; the empty
    left set of ``-inf`` absorbs everything (formula-literal semantics).
    """
    if delta.rank != eps.rank:
        raise MixedRank("cannot add cuts of different ranks")
    a, b = delta.kind, eps.kind
    if a == MINUS_INF or b == MINUS_INF:
        return minus_inf(delta.rank)
    if a == PLUS_INF_MINUS or b == PLUS_INF_MINUS:
        return plus_inf_minus(delta.rank)
    if a in (LEVEL_PLUS, LEVEL_MINUS) or b in (LEVEL_PLUS, LEVEL_MINUS):
        if a not in (LEVEL_PLUS, LEVEL_MINUS):
            delta, eps = eps, delta
            a, b = b, a
        la = delta.level
        if b in (PRINCIPAL_PLUS, PRINCIPAL_MINUS):
            # second coordinate of the level set is unconstrained, so the
            # sum only sees the first coordinate of the principal value
            s = la + _first(eps.gamma)
            return level_plus(s) if a == LEVEL_PLUS else level_minus(s)
        s = la + eps.level
        if a == LEVEL_PLUS and b == LEVEL_PLUS:
            return level_plus(s)
        # {x <= a} + {x < b} and {x < a} + {x < b} both give {x < a+b}
        return level_minus(s)
    s = delta.gamma + eps.gamma
    if a == PRINCIPAL_PLUS and b == PRINCIPAL_PLUS:
        return principal_plus(s)
    # a strict summand keeps the supremum unattained
    return principal_minus(s)


def value_plus_cut(gamma: GroupValue, delta: Cut) -> Cut:
    """The cut ``gamma + delta`` (shorthand for ``gamma^+ + delta``)."""
    return cut_add(principal_plus(gamma), delta)


# ---------------------------------------------------------------------------
# distance sets
# ---------------------------------------------------------------------------

FULLY_UNBOUNDED = "full"


@dataclass(frozen=True)
class DistanceSet:
    """A finite sample of distances plus an optional unboundedness marker.

    ``marker`` is ``None``, ``"full"`` (cofinal in the whole group) or
    ``("level", a)``: rank-2 values with first coordinate ``a`` and
    unbounded second coordinate.
    """

    rank: int
    finite_values: tuple
    marker: object = None

    def __post_init__(self):
        if not self.finite_values and self.marker is None:
            raise InputError("distance set needs values or a marker")
        for v in self.finite_values:
            if v.rank != self.rank:
                raise MixedRank("distance value of wrong rank")
            if v.is_infinity:
                raise InputError("distance sets hold finite values only")
        if self.marker is not None:
            if self.marker == FULLY_UNBOUNDED:
                return
            if (
                isinstance(self.marker, tuple)
                and len(self.marker) == 2
                and self.marker[0] == "level"
            ):
                if self.rank != 2:
                    raise InputError("level markers exist only in rank 2")
                return
            raise InputError(f"unknown marker {self.marker!r}")


def cut_from_set(D: DistanceSet, mode: str) -> Cut:
    """The cuts D^+ / D^- of a distance set.

    ``plus``: left set {x : x <= some element}; ``minus``: left set
    {x : x < every element}.  Unrepresentable suprema raise.
    """
    if mode not in ("plus", "minus"):
        raise InputError(f"mode must be plus or minus, got {mode!r}")
    rank = D.rank
    if mode == "plus":
        candidates = []
        if D.finite_values:
            candidates.append(principal_plus(max(D.finite_values)))
        if D.marker == FULLY_UNBOUNDED:
            candidates.append(plus_inf_minus(rank))
        elif D.marker is not None:
            candidates.append(level_plus(Fraction(D.marker[1])))
        best = candidates[0]
        for c in candidates[1:]:
            if cut_compare(c, best) > 0:
                best = c
        return best
    candidates = []
    if D.finite_values:
        candidates.append(principal_minus(min(D.finite_values)))
    if D.marker == FULLY_UNBOUNDED:
        if not D.finite_values:
            raise UnrepresentableCut(
                "lower cut of a fully unbounded family with no finite values"
            )
    elif D.marker is not None:
        candidates.append(level_minus(Fraction(D.marker[1])))
    best = candidates[0]
    for c in candidates[1:]:
        if cut_compare(c, best) < 0:
            best = c
    return best
