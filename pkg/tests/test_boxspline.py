import random

import pytest

from _support import random_one_dim
from radixdyn.boxspline import (
    check_intertwining,
    lift,
    phi_bijection,
    phi_target,
    predicted_structure,
)
from radixdyn.catalog import binary
from radixdyn.dynamics import cycle_atom_structure
from radixdyn.linalg import det, identity, mat_pow, mat_scale
from radixdyn.system import one_dim


def test_lift_examples():
    two = lift(binary(3), 2).lifted
    assert two.matrix == ((0, 1), (2, 0))
    assert two.digits == ((0, 0), (0, 3))
    three = lift(binary(3), 3).lifted
    assert three.matrix == ((0, 1, 0), (0, 0, 1), (2, 0, 0))
    assert three.digits == ((0, 0, 0), (0, 0, 3))
    assert lift(binary(3), 1).lifted == binary(3)
    with pytest.raises(ValueError):
        lift(binary(3), 0)


@pytest.mark.parametrize("n,m", [(2, 2), (2, 5), (3, 3), (5, 4)])
def test_lifted_matrix_is_an_mth_root(n, m):
    lifted = lift(one_dim(n, range(n)), m).lifted
    assert mat_pow(lifted.matrix, m) == mat_scale(n, identity(m))
    assert abs(det(lifted.matrix)) == n


def test_predicted_binary_three_cases():
    base = cycle_atom_structure(binary(3))
    assert predicted_structure(base, 2) == {1: 2, 2: 1, 4: 3}
    assert predicted_structure(base, 3) == {1: 2, 2: 1, 3: 2, 6: 9}
    assert predicted_structure(base, 1) == base.histogram()


def test_prediction_matches_lifted_sweep():
    for m in (2, 3):
        lifted = lift(binary(3), m).lifted
        assert cycle_atom_structure(lifted).histogram() == predicted_structure(
            cycle_atom_structure(binary(3)), m)


def test_prediction_matches_randomized_bases():
    rng = random.Random(8)
    for _ in range(12):
        base = random_one_dim(rng, n_max=3, spread=3)
        m = rng.choice([2, 3])
        predicted = predicted_structure(cycle_atom_structure(base), m)
        assert cycle_atom_structure(lift(base, m).lifted).histogram() == predicted, (base, m)


# phi


def test_phi_anchors():
    base = binary(3)
    assert phi_bijection(0, base, 2) == (0, 0)
    assert phi_bijection(-3, base, 2) == (-1, -1)
    # intertwining forces this pairing for the 2-cycle
    assert phi_bijection(-1, base, 2) == (0, -1)
    assert phi_bijection(-2, base, 2) == (-1, 0)
    assert phi_bijection(3, base, 2) == (0, 1)


def test_phi_closed_form():
    # phi(3 (i1 + 2 i2)) = (i2, i1) for the digits {0, 1} lift
    base = binary(3)
    for i1 in (0, 1):
        for i2 in (0, 1):
            assert phi_bijection(3 * (i1 + 2 * i2), base, 2) == (i2, i1)


@pytest.mark.parametrize("j,m", [(2, 2), (3, 3), (4, 2), (6, 3), (6, 2)])
def test_phi_intertwines_and_is_injective(j, m):
    base = binary(2**j - 1)
    assert check_intertwining(base, m, 64) == []
    images = [phi_bijection(n, base, m) for n in range(-64, 65)]
    assert len(set(images)) == len(images)


def test_phi_target_and_errors():
    assert phi_target(binary(15), 2).lifted.digits == ((0, 0), (0, 3))
    with pytest.raises(ValueError):
        phi_target(binary(5), 2)
    with pytest.raises(ValueError):
        phi_target(binary(7), 2)
