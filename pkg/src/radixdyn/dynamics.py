"""The residual map R and the cycle/atom structure of its periodic points.

R is the joint left inverse of the maps sigma_i(x) = d_i + N x: it removes
the digit fixed by the residue of x and divides by N. For an expanding N
every orbit falls into the finite set B_inf of periodic points, which splits
into R-cycles. Each cycle is one class of atoms; R moves an atom one step
along its cycle.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .bounds import b_infinity_radius, check_budget, heuristic_seed_radius
from .linalg import (
    IntegralSolver,
    IntVector,
    as_vector,
    identity,
    mat_mul,
    mat_sub,
    mat_vec,
    vec_add,
)
from .system import DigitSystem, classify, is_expansive


class NotExpansiveError(ValueError):
    pass


class UnsupportedSystemError(ValueError):
    pass


def require_expansive(system: DigitSystem) -> None:
    if not is_expansive(system):
        raise NotExpansiveError("N is not expansive; orbits need not terminate")


def apply_sigma(system: DigitSystem, i: int, x: Sequence[int]) -> IntVector:
    if not 0 <= i < system.order:
        raise IndexError(f"digit index {i} out of range")
    return vec_add(system.digits[i], mat_vec(system.matrix, x))


def apply_sigma_word(system: DigitSystem, word: Sequence[int], x: Sequence[int]) -> IntVector:
    """sigma_{w1} o ... o sigma_{wk} (x); the last letter acts first."""
    x = tuple(x)
    for i in reversed(word):
        x = apply_sigma(system, i, x)
    return x


def apply_R(system: DigitSystem, x: Sequence[int]) -> tuple[IntVector, int]:
    """Return (y, i) with x = d_i + N y."""
    if system.dim == 1:
        n = system.matrix[0][0]
        i = system.digit_of_residue[(x[0] % abs(n),)]
        q, r = divmod(x[0] - system.digits[i][0], n)
        assert r == 0
        return (q,), i
    i = system.digit_of_residue[system.residue(x)]
    y = system.solver(tuple(a - b for a, b in zip(x, system.digits[i])))
    assert y is not None, "digit set is not a complete residue system"
    return y, i


def R(system: DigitSystem, x: Sequence[int]) -> IntVector:
    return apply_R(system, x)[0]


def R_power(system: DigitSystem, x: Sequence[int], k: int) -> IntVector:
    x = tuple(x)
    for _ in range(k):
        x = apply_R(system, x)[0]
    return x


# Coding sequences


@dataclass(frozen=True)
class CodingSequence:
    """Eventually periodic digit stream read off by iterating R.

    The period is aligned with the point where the orbit enters its cycle,
    which makes the preperiod as short as possible.
    """

    preperiod: tuple[int, ...]
    period: tuple[int, ...]
    trace: tuple[IntVector, ...] = field(default=(), compare=False)

    def to_json(self) -> dict:
        return {"preperiod": list(self.preperiod), "period": list(self.period),
                "trace": [list(p) for p in self.trace]}


def coding(system: DigitSystem, x: Sequence[int], step_cap: int | None = None) -> CodingSequence:
    """Coding of x; non-expanding systems are only accepted with a step cap."""
    if step_cap is None:
        require_expansive(system)
    x = as_vector(x)
    seen: dict[IntVector, int] = {}
    states: list[IntVector] = []
    letters: list[int] = []
    while x not in seen:
        if step_cap is not None and len(states) >= step_cap:
            raise RuntimeError(f"no repeated state within {step_cap} steps")
        seen[x] = len(states)
        states.append(x)
        x, i = apply_R(system, x)
        letters.append(i)
    j = seen[x]
    return CodingSequence(tuple(letters[:j]), tuple(letters[j:]), tuple(states))


# Periodic points and cycles


def seed_radius(system: DigitSystem) -> int:
    """Sup-norm radius of the seed box.

    The heuristic 2 d_max / (sigma_min - 1) is enlarged to the certain bound
    d_max * sum ||N^-i|| whenever that is bigger, so no periodic point is
    missed for non-normal N.
    """
    return max(heuristic_seed_radius(system.matrix, system.d_max),
               b_infinity_radius(system.matrix, system.d_max))


def box_points(dim: int, radius: int) -> Iterable[IntVector]:
    rng = range(-radius, radius + 1)
    return itertools.product(rng, repeat=dim)


def _cycles_from(system: DigitSystem, seeds: Iterable[IntVector]) -> list[list[IntVector]]:
    done: set[IntVector] = set()
    cycles = []
    for s in seeds:
        if s in done:
            continue
        path: list[IntVector] = []
        where: dict[IntVector, int] = {}
        x = s
        while x not in done and x not in where:
            where[x] = len(path)
            path.append(x)
            x = apply_R(system, x)[0]
        if x in where:
            cycles.append(path[where[x]:])
        done.update(path)
    return cycles


def _canonical_cycle(cyc: Sequence[IntVector]) -> tuple[IntVector, ...]:
    k = min(range(len(cyc)), key=lambda i: cyc[i])
    return tuple(cyc[k:]) + tuple(cyc[:k])


@dataclass(frozen=True)
class AtomId:
    cycle_index: int
    phase: int

    def to_json(self) -> dict:
        return {"cycle": self.cycle_index, "phase": self.phase}


@dataclass(frozen=True)
class CycleAtomStructure:
    """B_inf as disjoint R-cycles.

    Each cycle starts at its smallest point and lists points in R order
    (R of the last is the first). Cycles are sorted by their first point.
    """

    cycles: tuple[tuple[IntVector, ...], ...]

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[IntVector]]) -> "CycleAtomStructure":
        return cls(tuple(sorted(_canonical_cycle(c) for c in cycles)))

    def __post_init__(self):
        index = {}
        for c, cyc in enumerate(self.cycles):
            for phase, p in enumerate(cyc):
                index[p] = AtomId(c, phase)
        object.__setattr__(self, "_index", index)

    @property
    def points(self) -> frozenset[IntVector]:
        return frozenset(self._index)

    def atom_at(self, p: IntVector) -> AtomId | None:
        return self._index.get(p)

    def lengths(self) -> list[int]:
        return [len(c) for c in self.cycles]

    def histogram(self) -> dict[int, int]:
        """cycle length -> number of cycles of that length"""
        return dict(sorted(Counter(self.lengths()).items()))

    @property
    def atom_count(self) -> int:
        return len(self._index)

    def to_json(self) -> dict:
        return {
            "cycles": [{"length": len(c), "points": [list(p) for p in c]} for c in self.cycles],
            "atom_count": self.atom_count,
            "histogram": {str(k): v for k, v in self.histogram().items()},
        }


def periodic_points(system: DigitSystem, radius: int | None = None,
                    budget: int | None = None) -> frozenset[IntVector]:
    return cycle_atom_structure(system, radius, budget).points


def cycle_atom_structure(system: DigitSystem, radius: int | None = None,
                         budget: int | None = None) -> CycleAtomStructure:
    """Iterate R from every point of a seed box and keep the cycles reached."""
    cache_key = ("_structure", radius)
    if cache_key in system.__dict__:
        return system.__dict__[cache_key]
    require_expansive(system)
    r = seed_radius(system) if radius is None else radius
    check_budget((2 * r + 1) ** system.dim, budget, "seed box")
    structure = CycleAtomStructure.from_cycles(_cycles_from(system, box_points(system.dim, r)))
    system.__dict__[cache_key] = structure
    return structure


def _entry(system: DigitSystem, structure: CycleAtomStructure, x: Sequence[int]) -> tuple[IntVector, int]:
    # first point of the orbit inside B_inf, and the number of steps taken
    x = as_vector(x)
    k = 0
    while structure.atom_at(x) is None:
        x = apply_R(system, x)[0]
        k += 1
    return x, k


def atom_of(system: DigitSystem, x: Sequence[int], structure: CycleAtomStructure | None = None) -> AtomId:
    structure = structure or cycle_atom_structure(system)
    z, k = _entry(system, structure, x)
    a = structure.atom_at(z)
    n = len(structure.cycles[a.cycle_index])
    return AtomId(a.cycle_index, (a.phase - k) % n)


def tau(structure: CycleAtomStructure, a: AtomId, j: int = 1) -> AtomId:
    """Advance an atom j steps along its cycle (j may be negative)."""
    n = len(structure.cycles[a.cycle_index])
    return AtomId(a.cycle_index, (a.phase + j) % n)


def eventual_cycle(system: DigitSystem, x: Sequence[int]) -> tuple[IntVector, ...]:
    structure = cycle_atom_structure(system)
    z, _ = _entry(system, structure, x)
    return structure.cycles[structure.atom_at(z).cycle_index]


def equivalent_sim(system: DigitSystem, x: Sequence[int], y: Sequence[int]) -> bool:
    """x ~ y: the two orbits end in the same cycle."""
    return eventual_cycle(system, x) == eventual_cycle(system, y)


def equivalent_approx(system: DigitSystem, x: Sequence[int], y: Sequence[int]) -> bool:
    """x ~= y: R^k x = R^k y for k the larger of the two preperiods."""
    k = max(len(coding(system, x).preperiod), len(coding(system, y).preperiod))
    return R_power(system, x, k) == R_power(system, y, k)


def period(system: DigitSystem, x: Sequence[int]) -> int:
    return len(eventual_cycle(system, x))


def sub_cuntz_words(system: DigitSystem) -> list[tuple[IntVector, tuple[int, ...]]]:
    """For each cycle, its first point m and the word w with sigma_w(m) = m."""
    out = []
    for cyc in cycle_atom_structure(system).cycles:
        m = cyc[0]
        c = coding(system, m)
        assert not c.preperiod
        out.append((m, c.period))
    return out


def finite_period_points_by_words(system: DigitSystem, k_max: int,
                                  budget: int | None = None) -> frozenset[IntVector]:
    """Integral points m = (1 - N^k)^-1 (d_w1 + N d_w2 + ... + N^(k-1) d_wk), k <= k_max.

    Word prefixes are pruned by a congruence test: a periodic point m lies in
    the certain box and satisfies m = v_j (mod N^j) for each prefix sum v_j.
    """
    require_expansive(system)
    dim = system.dim
    r = b_infinity_radius(system.matrix, system.d_max)
    check_budget((2 * r + 1) ** dim, budget, "word search box")
    found: set[IntVector] = set()
    eye = identity(dim)
    # each frontier entry: (prefix sum v_j, candidate box points)
    frontier = [(tuple([0] * dim), list(box_points(dim, r)))]
    npow = eye
    work = 0
    for k in range(1, k_max + 1):
        nxt_pow = mat_mul(npow, system.matrix)
        congruence = IntegralSolver(nxt_pow)
        closing = IntegralSolver(mat_sub(eye, nxt_pow))
        nxt = []
        for v, cands in frontier:
            for d in system.digits:
                w = vec_add(v, mat_vec(npow, d))
                keep = [m for m in cands if congruence(tuple(a - b for a, b in zip(m, w))) is not None]
                work += len(cands)
                if not keep:
                    continue
                m = closing(w)
                if m is not None:
                    found.add(m)
                nxt.append((w, keep))
        check_budget(work, budget, "word search")
        frontier = nxt
        npow = nxt_pow
    return frozenset(found)


def power_restriction(structure: CycleAtomStructure, m: int) -> list[tuple[int, int]]:
    """Each n-cycle splits under tau^m into gcd(m, n) cycles of n / gcd(m, n) atoms."""
    if m < 1:
        raise ValueError("m must be positive")
    out = []
    for n in structure.lengths():
        g = math.gcd(m, n)
        out.append((g, n // g))
    return out


def zeta_series(structure: CycleAtomStructure | dict[int, int], order: int) -> list[int]:
    """Coefficients of prod_k (1 - t^k)^(-C(k)) up to t^order."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    hist = structure.histogram() if isinstance(structure, CycleAtomStructure) else structure
    series = [1] + [0] * order
    for k, c in hist.items():
        # (1 - t^k)^-c = sum_j binom(c + j - 1, j) t^(k j)
        factor = [0] * (order + 1)
        for j in range(order // k + 1):
            factor[k * j] = math.comb(c + j - 1, j)
        series = [sum(series[i] * factor[n - i] for i in range(n + 1)) for n in range(order + 1)]
    return series


# Hyperbolic systems

EIGEN_TOL = 1e-9


@dataclass(frozen=True)
class HyperbolicResult:
    b_infinity: frozenset[IntVector]
    has_infinite_cycles: bool
    box_radius: tuple[float, ...]


def hyperbolic_periodic_points(system: DigitSystem, budget: int | None = None) -> HyperbolicResult:
    """Finite cycles of R for a hyperbolic N diagonalizable over the reals.

    In eigen-coordinates y = V^-1 x each periodic orbit stays in the box
    |y_i| <= delta / (1 - 1/|l_i|) for expanding and delta / (1/|l_i| - 1) for
    contracting eigenvalues l_i, where delta = ||N^-1|| max ||d|| is measured
    in the same coordinates. Eigenvectors come from numpy with tolerance
    EIGEN_TOL; the box is then padded by that tolerance.
    """
    if is_expansive(system):
        return HyperbolicResult(periodic_points(system, budget=budget), False, ())
    spec = classify(system)
    if not spec.hyperbolic:
        raise NotExpansiveError("system is neither expansive nor hyperbolic")
    n = np.array(system.matrix, dtype=float)
    vals, vecs = np.linalg.eig(n)
    if np.abs(vals.imag).max() > EIGEN_TOL or np.abs(vecs.imag).max() > EIGEN_TOL:
        raise UnsupportedSystemError("eigenvalues are not all real")
    vals, vecs = vals.real, vecs.real
    if np.linalg.cond(vecs) > 1.0 / EIGEN_TOL:
        raise UnsupportedSystemError("matrix is not diagonalizable")
    vinv = np.linalg.inv(vecs)
    digits = np.array(system.digits, dtype=float)
    delta = float(np.max(1.0 / np.abs(vals))) * float(np.abs(digits @ vinv.T).max())
    mods = np.abs(vals)
    half = np.where(mods > 1, delta / (1 - 1 / mods), delta / (1 / mods - 1))
    half = half * (1 + 1e-6) + 1e-6
    reach = np.abs(vecs) @ half
    extent = [math.floor(v) for v in reach]
    check_budget(math.prod(2 * e + 1 for e in extent), budget, "hyperbolic box")
    box = set()
    for x in itertools.product(*(range(-e, e + 1) for e in extent)):
        y = vinv @ np.array(x, dtype=float)
        if np.all(np.abs(y) <= half):
            box.add(x)
    step = {x: apply_R(system, x)[0] for x in box}
    # periodic points are the cycles of R restricted to the box
    alive = set(box)
    while True:
        hit = Counter(step[x] for x in alive if step[x] in alive)
        drop = {x for x in alive if step[x] not in alive or x not in hit}
        if not drop:
            break
        alive -= drop
    return HyperbolicResult(frozenset(alive), bool(np.any(mods < 1)), tuple(float(h) for h in half))
