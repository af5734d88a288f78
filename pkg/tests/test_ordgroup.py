"""Cut calculus against a set-semantics sampling oracle.

The oracle builds the left-set membership predicate of each cut straight
from the definitions and samples a parameter-adapted grid; the variant
tables must agree with subset relations and sum membership on every
sampled point.
"""

import itertools
from fractions import Fraction

import pytest

from mlvchains.errors import InputError, MixedRank, UnrepresentableCut
from mlvchains.ordgroup import (
    Cut,
    DistanceSet,
    cut_add,
    cut_compare,
    cut_from_set,
    infinity,
    level_minus,
    level_plus,
    minus_inf,
    parse_cut,
    parse_value,
    plus_inf_minus,
    principal_minus,
    principal_plus,
    rank1,
    rank2,
    value_plus_cut,
)

# ---------------------------------------------------------------------------
# oracle: left-set membership from the definitions
# ---------------------------------------------------------------------------


def left_member(cut: Cut, point) -> bool:
    if cut.kind == "minus_inf":
        return False
    if cut.kind == "plus_inf_minus":
        return True
    if cut.kind == "principal_plus":
        return point <= cut.gamma.coords
    if cut.kind == "principal_minus":
        return point < cut.gamma.coords
    if cut.kind == "level_plus":
        return point[0] <= cut.level
    if cut.kind == "level_minus":
        return point[0] < cut.level
    raise AssertionError(cut.kind)


def grid_for(cuts, rank):
    """Sample points adapted to the cuts' parameters, plus sentinels."""
    axis = {Fraction(-50), Fraction(0), Fraction(50)}
    for c in cuts:
        params = []
        if c.gamma is not None:
            params.extend(c.gamma.coords)
        if c.level is not None:
            params.append(c.level)
        for p in params:
            for d in (Fraction(0), Fraction(1), Fraction(1, 7), Fraction(40)):
                axis.add(p + d)
                axis.add(p - d)
    axis = sorted(axis)
    if rank == 1:
        return [(a,) for a in axis]
    return [(a, b) for a in axis for b in axis]


_GRIDS = {}


def shared_grid(rank):
    if rank not in _GRIDS:
        cuts = rank1_cuts() if rank == 1 else rank2_cuts()
        _GRIDS[rank] = grid_for(cuts, rank)
    return _GRIDS[rank]


def rank1_cuts():
    vals = [rank1(0), rank1(3), rank1(Fraction(-1, 2)), rank1(Fraction(5, 6))]
    cuts = [minus_inf(1), plus_inf_minus(1)]
    for v in vals:
        cuts.append(principal_plus(v))
        cuts.append(principal_minus(v))
    return cuts


def rank2_cuts():
    vals = [rank2(0, 0), rank2(0, 10), rank2(1, -2), rank2(Fraction(-1, 2), 3)]
    cuts = [minus_inf(2), plus_inf_minus(2)]
    for v in vals:
        cuts.append(principal_plus(v))
        cuts.append(principal_minus(v))
    for a in (0, 1, Fraction(-1, 2)):
        cuts.append(level_plus(a))
        cuts.append(level_minus(a))
    return cuts


@pytest.mark.parametrize("rank,cuts", [(1, rank1_cuts()), (2, rank2_cuts())])
def test_compare_agrees_with_sampled_subsets(rank, cuts):
    grid = shared_grid(rank)
    members = {c: frozenset(p for p in grid if left_member(c, p)) for c in cuts}
    for a, b in itertools.product(cuts, cuts):
        r = cut_compare(a, b)
        in_a, in_b = members[a], members[b]
        if r == 0:
            assert in_a == in_b
            assert a == b
        elif r < 0:
            assert in_a <= in_b
            assert in_b - in_a, f"no witness for {a} < {b} in the grid"
        else:
            assert in_b <= in_a
            assert in_a - in_b, f"no witness for {a} > {b} in the grid"


@pytest.mark.parametrize("rank,cuts", [(1, rank1_cuts()), (2, rank2_cuts())])
def test_compare_total_order(rank, cuts):
    # trichotomy
    for a, b in itertools.product(cuts, cuts):
        r1, r2 = cut_compare(a, b), cut_compare(b, a)
        assert r1 == -r2
    # transitivity
    for a, b, c in itertools.product(cuts, cuts, cuts):
        if cut_compare(a, b) <= 0 and cut_compare(b, c) <= 0:
            assert cut_compare(a, c) <= 0


@pytest.mark.parametrize("rank,cuts", [(1, rank1_cuts()), (2, rank2_cuts())])
def test_add_sound_on_sampled_sums(rank, cuts):
    # x in a^L and y in b^L implies x + y in (a+b)^L
    grid = shared_grid(rank)
    members = {c: [p for p in grid if left_member(c, p)] for c in cuts}
    for a, b in itertools.product(cuts, cuts):
        s = cut_add(a, b)
        pts_a = members[a][-9:] + members[a][:3]
        pts_b = members[b][-9:] + members[b][:3]
        for x in pts_a:
            for y in pts_b:
                z = tuple(u + v for u, v in zip(x, y))
                assert left_member(s, z), f"{a} + {b} = {s} misses {z}"


def test_add_commutative_associative_sampled():
    cuts = rank1_cuts() + []
    for a, b in itertools.product(cuts, cuts):
        assert cut_add(a, b) == cut_add(b, a)
    for a, b, c in itertools.product(cuts[:8], cuts[:8], cuts[:8]):
        assert cut_add(cut_add(a, b), c) == cut_add(a, cut_add(b, c))
    cuts2 = rank2_cuts()
    for a, b, c in itertools.product(cuts2[:7], cuts2[:7], cuts2[:7]):
        assert cut_add(cut_add(a, b), c) == cut_add(a, cut_add(b, c))


def test_spec_examples():
    # principal minus below plus at the same value
    assert cut_compare(principal_minus(rank1(0)), principal_plus(rank1(0))) == -1
    # absolute minimum
    assert cut_compare(minus_inf(1), principal_plus(rank1(5))) == -1
    # rank 2 level cut above a principal cut at the same level
    assert cut_compare(level_plus(0), principal_plus(rank2(0, 10))) == 1
    # absorbing maximal cut
    assert cut_add(principal_plus(rank1(Fraction(1, 2))), plus_inf_minus(1)) == plus_inf_minus(1)
    # principal plus addition attains the sum
    s = cut_add(principal_plus(rank1(Fraction(1, 2))), principal_plus(rank1(Fraction(1, 3))))
    assert s == principal_plus(rank1(Fraction(5, 6)))
    # gamma + delta shorthand
    assert value_plus_cut(rank1(1), principal_minus(rank1(2))) == principal_minus(rank1(3))
    # formula-literal corner: empty left set absorbs
    assert cut_add(minus_inf(1), plus_inf_minus(1)) == minus_inf(1)


def test_add_boundary_structure():
    # plus+plus attains its maximum; any strict summand loses it
    grid = [(Fraction(n, 6),) for n in range(-60, 61)]
    a, b = principal_plus(rank1(Fraction(1, 2))), principal_minus(rank1(Fraction(1, 3)))
    s = cut_add(a, b)
    assert s == principal_minus(rank1(Fraction(5, 6)))
    sums = {
        (x[0] + y[0],)
        for x in grid
        if left_member(a, x)
        for y in grid
        if left_member(b, y)
    }
    assert (Fraction(5, 6),) not in sums
    assert (Fraction(5, 6) - Fraction(1, 6),) in sums


def test_mixed_rank_rejected():
    with pytest.raises(MixedRank):
        cut_compare(principal_plus(rank1(1)), principal_plus(rank2(1, 0)))
    with pytest.raises(MixedRank):
        cut_add(minus_inf(1), minus_inf(2))
    with pytest.raises(MixedRank):
        rank1(1) + rank2(0, 0)


def test_group_values():
    assert rank1(1) + rank1(Fraction(1, 2)) == rank1(Fraction(3, 2))
    assert (rank2(1, 5) + rank2(0, -2)).coords == (1, 3)
    inf = infinity(1)
    assert rank1(3) + inf == inf
    assert inf > rank1(10**9)
    assert rank2(0, 10**9) < rank2(1, -(10**9))  # lex order
    assert rank1(Fraction(5, 6)).divide(5) == rank1(Fraction(1, 6))
    assert rank1(Fraction(1, 3)).scale(3) == rank1(1)


def test_cut_from_set():
    D = DistanceSet(1, (rank1(1), rank1(2), rank1(3)))
    assert cut_from_set(D, "plus") == principal_plus(rank1(3))
    assert cut_from_set(D, "minus") == principal_minus(rank1(1))
    D2 = DistanceSet(1, (), marker="full")
    assert cut_from_set(D2, "plus") == plus_inf_minus(1)
    with pytest.raises(UnrepresentableCut):
        cut_from_set(D2, "minus")
    D3 = DistanceSet(2, (), marker=("level", 0))
    assert cut_from_set(D3, "plus") == level_plus(0)
    # level marker dominated by a larger finite value
    D4 = DistanceSet(2, (rank2(1, 0),), marker=("level", 0))
    assert cut_from_set(D4, "plus") == principal_plus(rank2(1, 0))
    # finite below the level family
    D5 = DistanceSet(2, (rank2(0, 7),), marker=("level", 0))
    assert cut_from_set(D5, "plus") == level_plus(0)
    with pytest.raises(InputError):
        DistanceSet(1, ())


def test_finite_plus_equals_principal_of_max_property():
    import random

    rng = random.Random(11)
    for _ in range(200):
        vals = tuple(
            rank1(Fraction(rng.randint(-20, 20), rng.randint(1, 9))) for _ in range(rng.randint(1, 6))
        )
        D = DistanceSet(1, vals)
        assert cut_from_set(D, "plus") == principal_plus(max(vals))
        # gamma + D+ == (gamma + D)+
        gamma = rank1(Fraction(rng.randint(-9, 9), rng.randint(1, 4)))
        lhs = value_plus_cut(gamma, cut_from_set(D, "plus"))
        rhs = cut_from_set(DistanceSet(1, tuple(gamma + v for v in vals)), "plus")
        assert lhs == rhs


def test_render_parse_round_trip():
    samples = [
        minus_inf(1),
        plus_inf_minus(1),
        principal_plus(rank1(3)),
        principal_minus(rank1(Fraction(-3, 4))),
        principal_plus(rank2(0, 1)),
        level_plus(0),
        level_minus(Fraction(5, 2)),
    ]
    for c in samples:
        assert parse_cut(c.render(), c.rank) == c
    assert parse_value("5/6", 1) == rank1(Fraction(5, 6))
    assert parse_value("(0, 1)", 2) == rank2(0, 1)
    assert parse_value("inf", 1) == infinity(1)
    assert parse_cut("3^+", 1).render() == "3^+"
    assert parse_cut("lvl(0)^-", 2).render() == "lvl(0)^-"
