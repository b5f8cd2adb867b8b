import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _support import random_system
from radixdyn.catalog import cloud, red_cross, saddle, shark
from radixdyn.dynamics import cycle_atom_structure, period, periodic_points
from radixdyn.system import (
    InvalidSystemError,
    classify,
    digit_fixed_points,
    make_system,
    one_dim,
    parse_system,
    translate_digits,
    validate,
)


def kinds(report):
    return [i.kind for i in report.issues]


def test_valid_examples():
    assert validate([[2]], [[0], [3]]).valid
    assert validate([[1, 2], [-2, 1]], [[0, 0], [1, 0], [-1, 0], [0, 1], [0, -1]]).valid


def test_duplicate_residue_report():
    report = validate([[4]], [[0], [1], [8], [9]])
    assert not report.valid
    assert set(kinds(report)) == {"duplicate-residue"}
    assert report.to_json()["valid"] is False


def test_distinct_failure_kinds():
    assert kinds(validate([[4]], [[0], [1], [2]])) == ["wrong-cardinality"]
    assert kinds(validate([[1, 2], [2, 4]], [[0, 0]])) == ["singular"]
    assert kinds(validate([[1, 2]], [[0, 0]])) == ["not-square"]
    assert kinds(validate([[2]], [])) == ["empty-digits"]
    assert kinds(validate([[2]], [[0], [1, 1]])) == ["dimension-mismatch"]
    with pytest.raises(InvalidSystemError):
        make_system([[4]], [[0], [1], [8], [9]])


def test_parse_shorthand():
    assert parse_system({"n": 2, "digits": [0, 3]}) == ([[2]], [[0], [3]])
    m, d = parse_system({"matrix": [[2, 1], [0, 2]], "digits": [[0, 0], [1, 0], [1, 1], [0, 1]]})
    assert make_system(m, d) == shark()


def test_fingerprint_is_stable():
    assert shark().fingerprint == shark().fingerprint
    assert shark().fingerprint != red_cross().fingerprint


# spectral classes


def test_classify_examples():
    jordan = classify(shark())
    assert jordan.expansive and jordan.handelman_ok
    hyp = classify(saddle())
    assert hyp.hyperbolic and hyp.handelman_ok
    diag = classify(make_system([[1, 0], [0, 2]], [[0, 0], [0, 1]]))
    assert not diag.expansive and not diag.hyperbolic
    assert diag.kind == "indeterminate"
    assert diag.handelman_ok is False


@given(st.integers(0, 2**32))
def test_expansive_implies_handelman(seed):
    spec = classify(random_system(random.Random(seed)))
    assert spec.expansive and spec.handelman_ok
    assert min(spec.eigen_moduli) > 1


# translation


def test_translate_examples():
    t = translate_digits(shark(), (1, 0))
    assert t.b_infinity_translates and t.shift == (1, 0)
    t0 = translate_digits(red_cross(), (0, 0))
    assert t0.b_infinity_translates and t0.shift == (0, 0)
    t2 = translate_digits(shark(), (2, 1))
    assert t2.shift == (1, 1)
    assert periodic_points(t2.system) == {(x - 1, y - 1) for x, y in periodic_points(shark())}


def test_translation_outside_image_is_flagged():
    t = translate_digits(red_cross(), (1, 0))
    assert not t.b_infinity_translates
    assert t.shift == (Fraction(0), Fraction(1, 2))


def test_second_shark_digit_set():
    alt = make_system([[2, 1], [0, 2]], [[0, 0], [1, 0], [1, 1], [2, 1]])
    assert periodic_points(alt) == {(0, 0), (-1, 0), (0, -1), (-1, -1)}


@given(st.integers(0, 2**32), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
def test_translation_stays_valid(seed, p):
    s = random_system(random.Random(seed))
    moved = translate_digits(s, p).system
    assert validate(moved.matrix, moved.digits).valid


# fixed points


def test_fixed_point_examples():
    assert {x for _, x in digit_fixed_points(shark())} == {(0, 0), (-1, 0), (0, -1), (1, -1)}
    assert digit_fixed_points(red_cross()) == [((0, 0), (0, 0))]
    for n in range(-1, 2):
        fixed = {x for _, x in digit_fixed_points(cloud(2 * n + 1, 1))}
        assert fixed == {(0, 0), (2 * n + 1, n), (-2 * n - 1, -n)}


@given(st.integers(0, 2**32))
def test_fixed_points_are_periodic(seed):
    s = random_system(random.Random(seed), include_zero=True)
    fixed = digit_fixed_points(s)
    assert (0, 0) in {x for _, x in fixed}
    pts = periodic_points(s)
    for _, x in fixed:
        assert x in pts and period(s, x) == 1


def test_one_dim_fixed_points():
    s = one_dim(2, [0, 3])
    assert {x for _, x in digit_fixed_points(s)} == {(0,), (-3,)}
    assert len(cycle_atom_structure(s).cycles) == 3
