"""m-th roots of 1-D systems: the companion-matrix lift and its atom structure.

The lift of (N, {s_i}) to Z^m uses the matrix with ones on the
superdiagonal and N in the bottom-left corner, so that M^m = N 1, and the
digits (0, ..., 0, s_i). Its maps are sigma_i(x_1..x_m) = (x_2, .., x_m,
sigma_i(x_1)), and R acts on atoms of the lift as
tau(a_1, .., a_m) = (tau(a_m), a_1, .., a_{m-1}).
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass

from .dynamics import (
    CycleAtomStructure,
    apply_R,
    apply_sigma,
    apply_sigma_word,
    coding,
    cycle_atom_structure,
    tau,
)
from .linalg import (
    IntegralSolver,
    IntVector,
    identity,
    mat_mul,
    mat_pow,
    mat_scale,
    mat_sub,
    mat_vec,
    vec_add,
)
from .system import DigitSystem, make_system, one_dim


@dataclass(frozen=True)
class LiftedSystem:
    base: DigitSystem
    m: int
    lifted: DigitSystem


def companion(n: int, m: int) -> tuple[tuple[int, ...], ...]:
    rows = []
    for i in range(m - 1):
        rows.append(tuple(int(j == i + 1) for j in range(m)))
    rows.append(tuple([n] + [0] * (m - 1)))
    return tuple(rows)


def lift(base: DigitSystem, m: int) -> LiftedSystem:
    if m < 1:
        raise ValueError("m must be at least 1")
    if base.dim != 1:
        raise ValueError("base must be one-dimensional")
    n = base.matrix[0][0]
    mat = companion(n, m)
    assert mat_pow(mat, m) == mat_scale(n, identity(m))
    digits = [[0] * (m - 1) + [d[0]] for d in base.digits]
    return LiftedSystem(base, m, make_system(mat, digits))


def predicted_structure(base_structure: CycleAtomStructure, m: int) -> dict[int, int]:
    """Histogram (cycle length -> count) of the lift, from the base atoms alone.

    tau^m advances every coordinate once, so tau^(m L) = id with L the lcm of
    the base periods; orbit lengths are found by stepping at most m L times.
    """
    atoms = [base_structure.atom_at(p) for cyc in base_structure.cycles for p in cyc]
    periods = [len(c) for c in base_structure.cycles]
    cap = m * math.lcm(*periods) if periods else 0

    def step(t):
        return (tau(base_structure, t[-1]),) + t[:-1]

    seen: set = set()
    hist: Counter = Counter()
    for t in itertools.product(atoms, repeat=m):
        if t in seen:
            continue
        orbit = [t]
        u = step(t)
        while u != t:
            orbit.append(u)
            u = step(u)
            assert len(orbit) <= cap
        seen.update(orbit)
        hist[len(orbit)] += 1
    return dict(sorted(hist.items()))


def phi_target(base: DigitSystem, m: int) -> LiftedSystem:
    """For base digits {0, 2^j - 1} with m | j, the lift isomorphic to it: digits {0, 2^(j/m) - 1}."""
    if base.dim != 1 or base.matrix[0][0] != 2:
        raise ValueError("base must be N = 2")
    s = sorted(d[0] for d in base.digits)
    j = (s[1] + 1).bit_length() - 1
    if s[0] != 0 or s[1] != 2**j - 1 or j % m:
        raise ValueError("base digits must be {0, 2^j - 1} with m dividing j")
    return lift(one_dim(2, [d[0] if d[0] == 0 else 2 ** (j // m) - 1 for d in base.digits]), m)


def _fixed_by_word(system: DigitSystem, word) -> IntVector:
    # the x with sigma_word(x) = x, i.e. (1 - N^k) x = d_w1 + N d_w2 + ... + N^(k-1) d_wk
    k = len(word)
    total = tuple([0] * system.dim)
    power = identity(system.dim)
    for i in word:
        total = vec_add(total, mat_vec(power, system.digits[i]))
        power = mat_mul(power, system.matrix)
    x = IntegralSolver(mat_sub(identity(system.dim), mat_pow(system.matrix, k)))(total)
    if x is None:
        raise ValueError("word has no integral fixed point in the lift")
    return x


def phi_bijection(n: int, base: DigitSystem, m: int, step_cap: int = 100_000) -> IntVector:
    """The bijection Z -> Z^m with phi(sigma_k(x)) = sigma_k(phi(x)).

    n is unwound with the base R until it reaches a periodic point b; phi(b)
    is the lifted point fixed by the same periodic word, and the recorded
    digits are then replayed with the lifted maps.
    """
    target = phi_target(base, m).lifted
    structure = cycle_atom_structure(base)
    word = []
    x = (n,)
    while structure.atom_at(x) is None:
        x, i = apply_R(base, x)
        word.append(i)
        if len(word) > step_cap:
            raise RuntimeError("no periodic anchor within the step cap")
    anchor = _fixed_by_word(target, coding(base, x).period)
    return apply_sigma_word(target, word, anchor)


def check_intertwining(base: DigitSystem, m: int, radius: int) -> list[tuple[int, int]]:
    """Pairs (n, k) with |n| <= radius where phi o sigma_k != sigma_k o phi."""
    target = phi_target(base, m).lifted
    bad = []
    for n in range(-radius, radius + 1):
        image = phi_bijection(n, base, m)
        for k in range(base.order):
            if phi_bijection(apply_sigma(base, k, (n,))[0], base, m) != apply_sigma(target, k, image):
                bad.append((n, k))
    return bad
