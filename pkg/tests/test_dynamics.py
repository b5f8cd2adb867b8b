import itertools
import random

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from _support import random_one_dim, random_system
from radixdyn.catalog import binary, cloud_five, cloud_nine, red_cross, saddle, shark, twin_dragon, unit_square
from radixdyn.dynamics import (
    AtomId,
    CycleAtomStructure,
    NotExpansiveError,
    apply_R,
    apply_sigma,
    apply_sigma_word,
    atom_of,
    coding,
    cycle_atom_structure,
    equivalent_approx,
    equivalent_sim,
    finite_period_points_by_words,
    hyperbolic_periodic_points,
    period,
    periodic_points,
    power_restriction,
    sub_cuntz_words,
    tau,
    zeta_series,
)
from radixdyn.onedim import b_infinity_interval, necklace_count
from radixdyn.system import make_system, one_dim, translate_digits

seeds = st.integers(0, 2**32)


def digit_index(system, d):
    return system.digits.index(tuple(d))


# the maps


def test_sigma_examples():
    s = shark()
    assert apply_sigma(s, digit_index(s, (0, 0)), (0, 0)) == (0, 0)
    assert apply_sigma(binary(3), 1, (0,)) == (3,)
    td = twin_dragon()
    assert apply_sigma(td, digit_index(td, (1, 0)), (0, 1)) == (0, 1)
    with pytest.raises(IndexError):
        apply_sigma(binary(3), 2, (0,))


def test_R_examples():
    s = shark()
    assert apply_R(s, (-1, -1)) == ((0, -1), digit_index(s, (0, 1)))
    assert apply_R(red_cross(), (0, 0)) == ((0, 0), 0)
    assert apply_R(binary(3), (5,)) == ((1,), 1)


@given(seeds, st.tuples(st.integers(-50, 50), st.integers(-50, 50)), st.integers(0, 5))
def test_R_is_left_inverse(seed, x, i):
    s = random_system(random.Random(seed))
    i %= s.order
    assert apply_R(s, apply_sigma(s, i, x)) == (x, i)


# coding


def test_coding_examples():
    c = coding(binary(1), (0,))
    assert c.preperiod == () and c.period == (0,)
    c = coding(binary(1), (-1,))
    assert c.preperiod == () and c.period == (1,)
    c = coding(binary(3), (1,))
    assert c.preperiod == (1,) and c.period == (1, 0)
    assert c.trace == ((1,), (-1,), (-2,))


def test_coding_refuses_non_expansive():
    diag = make_system([[1, 0], [0, 2]], [[0, 0], [0, 1]])
    with pytest.raises(NotExpansiveError):
        coding(diag, (0, 3))
    capped = coding(diag, (0, 3), step_cap=50)
    assert capped.period == (0,)


@given(seeds, st.tuples(st.integers(-30, 30), st.integers(-30, 30)))
def test_coding_reconstructs_point(seed, x):
    s = random_system(random.Random(seed))
    c = coding(s, x)
    # replaying the preperiod from the cycle entry recovers x
    entry = c.trace[len(c.preperiod)]
    assert apply_sigma_word(s, c.preperiod, entry) == x
    assert apply_sigma_word(s, c.period, entry) == entry
    # minimal preperiod: the last preperiod letter differs from the last period letter
    if c.preperiod:
        assert c.preperiod[-1] != c.period[-1]


# periodic points and cycles


def test_periodic_point_examples():
    assert periodic_points(shark()) == {(0, 0), (0, -1), (-1, 0), (1, -1)}
    assert periodic_points(red_cross()) == {(0, 0)}
    assert periodic_points(binary(7)) == {(k,) for k in range(-7, 1)}


def test_cycle_examples():
    st7 = cycle_atom_structure(binary(7))
    assert st7.cycles == (((-7,),), ((-6,), (-3,), (-5,)), ((-4,), (-2,), (-1,)), ((0,),))
    five = cycle_atom_structure(cloud_five())
    assert ((0, 0),) in five.cycles
    assert ((-1, -1), (0, -1), (1, 1), (0, 1)) in five.cycles
    sq = cycle_atom_structure(unit_square())
    assert sq.cycles == (((-1, -1),), ((-1, 0), (0, -1)), ((0, 0),))


@given(seeds)
def test_structure_invariants(seed):
    s = random_system(random.Random(seed))
    structure = cycle_atom_structure(s)
    pts = [p for c in structure.cycles for p in c]
    assert len(pts) == len(set(pts)) == structure.atom_count
    for cyc in structure.cycles:
        assert cyc[0] == min(cyc)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            assert apply_R(s, a)[0] == b
    # R permutes B_inf
    assert {apply_R(s, p)[0] for p in pts} == set(pts)
    # per-length cycle counts are bounded by the necklace count
    for k, count in structure.histogram().items():
        assert count <= necklace_count(s.order, k)


def test_word_oracle_examples():
    assert finite_period_points_by_words(red_cross(), 4) == {(0, 0)}
    sq = unit_square()
    assert (-1, -1) in finite_period_points_by_words(sq, 1)
    assert (0, 0) in finite_period_points_by_words(shark(), 1)


# equivalences and atoms


def test_equivalence_examples():
    s = binary(3)
    assert equivalent_sim(s, (1,), (5,))
    assert not equivalent_sim(s, (0,), (-3,))
    assert equivalent_sim(s, (4,), (4,))
    assert equivalent_approx(s, (1,), (4,))
    assert not equivalent_approx(s, (1,), (2,))
    assert equivalent_approx(s, (7,), (7,))


@given(seeds, st.lists(st.tuples(st.integers(-12, 12), st.integers(-12, 12)), min_size=2, max_size=6))
def test_atoms_and_relations(seed, xs):
    s = random_system(random.Random(seed))
    for x, y in itertools.combinations(xs, 2):
        approx = equivalent_approx(s, x, y)
        sim = equivalent_sim(s, x, y)
        assert not approx or sim
        ax, ay = atom_of(s, x), atom_of(s, y)
        assert approx == (ax == ay)
        assert sim == (ax.cycle_index == ay.cycle_index)


def test_tau_examples():
    s = binary(7)
    structure = cycle_atom_structure(s)
    a1 = atom_of(s, (1,))
    assert tau(structure, a1) == atom_of(s, (-3,)) == atom_of(s, (4,))
    for cyc_index, cyc in enumerate(structure.cycles):
        a = AtomId(cyc_index, 0)
        assert tau(structure, a, len(cyc)) == a
    fixed = atom_of(s, (0,))
    assert tau(structure, fixed) == fixed


@given(seeds, st.tuples(st.integers(-20, 20), st.integers(-20, 20)))
def test_tau_is_R_on_atoms(seed, x):
    s = random_system(random.Random(seed))
    structure = cycle_atom_structure(s)
    assert atom_of(s, apply_R(s, x)[0]) == tau(structure, atom_of(s, x))
    for i in range(s.order):
        assert tau(structure, atom_of(s, apply_sigma(s, i, x))) == atom_of(s, x)


def test_period_examples():
    assert period(cloud_nine(), (0, 1)) == 6
    assert period(shark(), (0, 0)) == 1
    assert period(cloud_five(), (1, 1)) == 4


def test_sub_cuntz_examples():
    s = shark()
    words = {m: tuple(s.digits[i] for i in w) for m, w in sub_cuntz_words(s)}
    assert words == {(0, 0): ((0, 0),), (-1, 0): ((1, 0),), (0, -1): ((1, 1),), (1, -1): ((0, 1),)}
    sq = unit_square()
    assert dict(sub_cuntz_words(sq))[(-1, -1)] == (digit_index(sq, (0, 3)),)
    assert sub_cuntz_words(binary(1)) == [((-1,), (1,)), ((0,), (0,))]


@given(seeds)
def test_sub_cuntz_words_fix_their_points(seed):
    s = random_system(random.Random(seed))
    for m, w in sub_cuntz_words(s):
        assert apply_sigma_word(s, w, m) == m
        assert len(w) == period(s, m)


# power restriction and zeta


def test_power_restriction():
    six = CycleAtomStructure.from_cycles([[(k,) for k in range(6)]])
    assert power_restriction(six, 2) == [(2, 3)]
    assert power_restriction(six, 6) == [(6, 1)]
    assert power_restriction(six, 1) == [(1, 6)]


def sympy_zeta(hist, order):
    t = sympy.Symbol("t")
    expr = sympy.Integer(1)
    for k, c in hist.items():
        expr *= (1 - t**k) ** (-c)
    poly = sympy.series(expr, t, 0, order + 1).removeO()
    return [int(poly.coeff(t, n)) for n in range(order + 1)]


def test_zeta_examples():
    assert zeta_series({}, 4) == [1, 0, 0, 0, 0]
    assert zeta_series(cycle_atom_structure(shark()), 4) == [1, 4, 10, 20, 35]
    nine = cycle_atom_structure(cloud_nine())
    assert zeta_series(nine, 12) == sympy_zeta({1: 3, 6: 1}, 12)


@given(st.dictionaries(st.integers(1, 6), st.integers(1, 4), max_size=3))
def test_zeta_matches_sympy(hist):
    assert zeta_series(hist, 9) == sympy_zeta(hist, 9)


# 1-D bounds on randomized digit sets


def test_one_dim_bounds_randomized():
    rng = random.Random(310)
    for _ in range(200):
        s = random_one_dim(rng, n_max=5)
        n = s.matrix[0][0]
        ds = [d[0] for d in s.digits]
        pts = periodic_points(s)
        assert len(pts) <= 1 + (max(ds) - min(ds)) // (n - 1)
        lo, hi = b_infinity_interval(s)
        assert all(-max(ds) / (n - 1) <= b[0] <= -min(ds) / (n - 1) for b in pts)
        assert all(lo <= b[0] <= hi for b in pts)
        cycles = cycle_atom_structure(s).cycles
        spread = max(abs(d) for d in ds)
        assert len(cycles) <= 1 + 2 * (spread // (n - 1))
        for k, count in cycle_atom_structure(s).histogram().items():
            assert count <= necklace_count(n, k)


# hyperbolic systems


def test_hyperbolic_example():
    res = hyperbolic_periodic_points(saddle())
    assert res.b_infinity == {(0, 0), (-1, 2)}
    assert res.has_infinite_cycles


def test_hyperbolic_delegates_for_expansive():
    res = hyperbolic_periodic_points(shark())
    assert res.b_infinity == periodic_points(shark())
    assert not res.has_infinite_cycles


def test_hyperbolic_translation():
    t = translate_digits(saddle(), (0, -1))
    moved = hyperbolic_periodic_points(t.system).b_infinity
    assert t.b_infinity_translates
    expected = {tuple(int(b - s) for b, s in zip(p, t.shift)) for p in hyperbolic_periodic_points(saddle()).b_infinity}
    assert moved == expected and len(moved) == 2


def test_non_expansive_orbit_refusal():
    with pytest.raises(NotExpansiveError):
        periodic_points(saddle())
    with pytest.raises(NotExpansiveError):
        hyperbolic_periodic_points(make_system([[1, 0], [0, 2]], [[0, 0], [0, 1]]))


def test_one_dim_catalog_agrees_with_sweep():
    s = one_dim(3, [1, 3, 5])
    assert cycle_atom_structure(s).cycles == (((-2,), (-1,)),)
