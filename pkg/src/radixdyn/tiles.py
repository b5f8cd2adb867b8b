"""The attractor T = {sum N^-i d_ji}: exact point clouds, its lattice points, tilings."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from .bounds import check_budget, inverse_tail_sum
from .dynamics import (
    CycleAtomStructure,
    apply_R,
    box_points,
    cycle_atom_structure,
    require_expansive,
)
from .linalg import (
    IntVector,
    LatticeBasis,
    inverse,
    mat_pow,
    mat_vec,
    smallest_invariant_lattice,
    vec_add,
    vec_sub,
)
from .system import DigitSystem

TOLERANCE_SAFETY = 2.0


@dataclass(frozen=True)
class TileCloud:
    """Depth-k partial sums sum_{i<=k} N^-i d_ji, stored as N^-k q for integer q.

    ``first_digit`` records which first-level piece N^-1 (d + T) each q
    belongs to; rendering colours cells by it. The numerators differ by
    vectors of the digit lattice, so a cell spanned by that lattice's basis
    (scaled by N^-k) fits between neighbours without gaps or overlap.
    """

    system: DigitSystem
    depth: int
    numerators: tuple[IntVector, ...]
    first_digit: tuple[int, ...]

    @cached_property
    def scale(self) -> tuple[tuple[Fraction, ...], ...]:
        """N^-k as an exact rational matrix."""
        return inverse(mat_pow(self.system.matrix, self.depth))

    @cached_property
    def points(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(mat_vec(self.scale, q) for q in self.numerators)

    def __len__(self) -> int:
        return len(self.numerators)

    @cached_property
    def cell_basis(self) -> tuple[IntVector, ...]:
        """Columns spanning the base cell: the digit lattice basis when it has full rank."""
        lat = digit_lattice(self.system)
        if lat.rank == self.system.dim:
            return lat.basis
        return tuple(tuple(int(i == j) for j in range(self.system.dim)) for i in range(self.system.dim))

    def cell(self) -> list[tuple[Fraction, ...]]:
        """Corners, in order, of the cell drawn around each point (2-D only)."""
        h = Fraction(1, 2)
        b0, b1 = self.cell_basis
        corners = []
        for s, t in [(-h, -h), (h, -h), (h, h), (-h, h)]:
            corners.append(mat_vec(self.scale, tuple(s * x + t * y for x, y in zip(b0, b1))))
        return corners


def tile_points(system: DigitSystem, depth: int, budget: int | None = None) -> TileCloud:
    require_expansive(system)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    check_budget(system.order ** depth, budget, "tile cloud")
    level: dict[IntVector, int] = {tuple([0] * system.dim): 0}
    for step in range(depth):
        nxt: dict[IntVector, int] = {}
        for q, first in level.items():
            nq = mat_vec(system.matrix, q)
            for i, d in enumerate(system.digits):
                nxt[vec_add(nq, d)] = i if step == 0 else first
        level = nxt
    keys = sorted(level)
    return TileCloud(system, depth, tuple(keys), tuple(level[q] for q in keys))


def tail_radius(system: DigitSystem, depth: int) -> float:
    """Sup-norm bound on the part of T's series beyond depth, with safety factor 2."""
    return TOLERANCE_SAFETY * system.d_max * inverse_tail_sum(system.matrix, depth)


def default_depth(system: DigitSystem, budget: int | None = None) -> int:
    k = 0
    while tail_radius(system, k) > 1.0 and system.order ** (k + 1) <= 20000:
        k += 1
    return k


@dataclass(frozen=True)
class MinusTPoints:
    points: frozenset[IntVector]
    depth: int
    tolerance: float
    candidates: int

    @property
    def separated(self) -> bool:
        """Whether the tolerance test alone already isolated the answer."""
        return self.candidates == len(self.points)


def integral_points_in_minus_T(system: DigitSystem, depth: int | None = None,
                               budget: int | None = None) -> MinusTPoints:
    """Z^dim intersected with -T.

    Integer points within the tail tolerance of -(depth-k cloud) enclose the
    answer. The enclosure is then cut down with the self-affinity of T: an
    integer point w is in T iff some N w - d is again in T, and a path that
    stays in a bounded set forever converges to w through the series of T.
    So the answer is the largest enclosure subset in which every point has
    such a successor, and no tolerance remains in the result.
    """
    if depth is None:
        depth = default_depth(system, budget)
    cloud = tile_points(system, depth, budget)
    rho = tail_radius(system, depth)
    # nearby cloud points share the same integer box, so collect distinct boxes first
    boxes = {tuple((math.ceil(float(c) - rho), math.floor(float(c) + rho)) for c in pt)
             for pt in cloud.points}
    check_budget(sum(math.prod(max(0, hi - lo + 1) for lo, hi in b) for b in boxes),
                 budget, "tile enclosure")
    enclosure: set[IntVector] = set()
    for b in boxes:
        enclosure.update(itertools.product(*(range(lo, hi + 1) for lo, hi in b)))
    alive = set(enclosure)
    while True:
        drop = {w for w in alive
                if not any(vec_sub(mat_vec(system.matrix, w), d) in alive for d in system.digits)}
        if not drop:
            break
        alive -= drop
    minus = frozenset(tuple(-c for c in w) for w in alive)
    return MinusTPoints(minus, depth, rho, len(enclosure))


# Lattices and tiling


def digit_lattice(system: DigitSystem) -> LatticeBasis:
    """Smallest N-invariant lattice holding all digit differences."""
    d0 = system.digits[0]
    return smallest_invariant_lattice(system.matrix, [vec_sub(d, d0) for d in system.digits])


@dataclass(frozen=True)
class TilingVerdict:
    kind: str  # "tiles_by" or "inconclusive"
    lattice: LatticeBasis | None
    route: str | None
    witness: tuple[IntVector, IntVector, IntVector] | None
    bound: int

    def to_json(self) -> dict:
        return {
            "verdict": self.kind,
            "lattice": [list(b) for b in self.lattice.basis] if self.lattice else None,
            "route": self.route,
            "witness": [list(v) for v in self.witness] if self.witness else None,
            "bound": self.bound,
        }


def _cycle_of(system: DigitSystem, structure: CycleAtomStructure, x: IntVector) -> int:
    while structure.atom_at(x) is None:
        x = apply_R(system, x)[0]
    return structure.atom_at(x).cycle_index


def sim_classes_in_box(system: DigitSystem, bound: int) -> dict[int, set[IntVector]]:
    """Points of the box grouped by the cycle their orbit ends in."""
    structure = cycle_atom_structure(system)
    out: dict[int, set[IntVector]] = {}
    for x in box_points(system.dim, bound):
        out.setdefault(_cycle_of(system, structure, x), set()).add(x)
    return out


def _lattice_if_exact(points: set[IntVector], box: list[IntVector], dim: int) -> LatticeBasis | None:
    lat = LatticeBasis.from_generators(points, dim)
    if all((x in lat) == (x in points) for x in box):
        return lat
    return None


def _sum_witness(points: set[IntVector], bound: int) -> tuple[IntVector, IntVector, IntVector] | None:
    ordered = sorted(points, key=lambda v: (max(abs(c) for c in v), v))
    best = None
    for a, b in itertools.combinations_with_replacement(ordered, 2):
        s = vec_add(a, b)
        if max(abs(c) for c in s) > bound or s in points:
            continue
        key = (max(abs(c) for c in s), max(abs(c) for c in a) + max(abs(c) for c in b), a, b)
        if best is None or key < best[0]:
            best = (key, (a, b, s))
    return best[1] if best else None


MAX_UNION_CYCLES = 12


def _acceptable(lat: LatticeBasis | None, system: DigitSystem) -> bool:
    if lat is None or lat.rank != system.dim:
        return False
    d0 = system.digits[0]
    return (all(mat_vec(system.matrix, b) in lat for b in lat.basis)
            and all(vec_sub(d, d0) in lat for d in system.digits))


def lattice_tiling_test(system: DigitSystem, bound: int = 6) -> TilingVerdict:
    """Decide whether T tiles by a lattice, judged on the box |x| <= bound.

    If the ~-class of 0 coincides with the lattice it spans, T tiles by that
    lattice. Otherwise unions of the class of 0 with classes of other fixed
    points are tried, smallest unions first. This second route is a search
    heuristic rather than a proof: a union only counts when its lattice is
    N-invariant and holds every digit difference. The witness is two members
    of the class of 0 whose sum is outside it.
    """
    require_expansive(system)
    structure = cycle_atom_structure(system)
    classes = sim_classes_in_box(system, bound)
    box = list(box_points(system.dim, bound))
    home = _cycle_of(system, structure, tuple([0] * system.dim))
    zero_class = classes[home]
    lat = _lattice_if_exact(zero_class, box, system.dim)
    if _acceptable(lat, system):
        return TilingVerdict("tiles_by", lat, "class-of-zero", None, bound)
    witness = _sum_witness(zero_class, bound)
    others = [c for c, cyc in enumerate(structure.cycles) if c != home and len(cyc) == 1]
    others = others[:MAX_UNION_CYCLES]
    for size in range(1, len(others) + 1):
        for extra in itertools.combinations(others, size):
            union = set(zero_class)
            for c in extra:
                union |= classes.get(c, set())
            lat = _lattice_if_exact(union, box, system.dim)
            if _acceptable(lat, system):
                return TilingVerdict("tiles_by", lat, "fixed-point-union", witness, bound)
    return TilingVerdict("inconclusive", None, None, witness, bound)


def measure_from_lattice(verdict: TilingVerdict) -> int:
    """Lebesgue measure of T when it tiles by the lattice L: the index of L."""
    if verdict.kind != "tiles_by" or verdict.lattice is None or verdict.lattice.index is None:
        raise ValueError("measure needs a full-rank tiling lattice")
    return verdict.lattice.index
