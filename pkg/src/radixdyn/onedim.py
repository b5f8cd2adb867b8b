"""Closed-form 1-D machinery for N = 2 with digits {0, p}, plus general 1-D censuses.

For odd p the periodic points are -p..0 and the atom of a point is its
residue class mod p, except that 0 and -p are two separate fixed atoms
(X0+ and X0-). R acts on the other classes as m -> m / 2 mod p, so the
cycles are the orbits of multiplication by 2 on Z/pZ.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .dynamics import CycleAtomStructure, apply_R
from .system import DigitSystem, one_dim


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for q, e in factorize(n).items():
        divs = [d * q**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def euler_phi(n: int) -> int:
    out = n
    for q in factorize(n):
        out = out // q * (q - 1)
    return out


def multiplicative_order(a: int, n: int) -> int:
    """Least k >= 1 with a^k = 1 (mod n), found among the divisors of phi(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    if math.gcd(a, n) != 1:
        raise ValueError(f"gcd({a}, {n}) != 1")
    if n == 1:
        return 1
    k = euler_phi(n)
    for q in factorize(k):
        while k % q == 0 and pow(a, k // q, n) == 1:
            k //= q
    return k


@lru_cache(maxsize=None)
def necklace_count(n: int, k: int) -> int:
    """Classes of sequences of minimal period k over n letters, up to shift.

    N(k) = (n^k - sum_{d | k, d < k} d N(d)) / k.
    """
    if n < 2 or k < 1:
        raise ValueError("need n >= 2 and k >= 1")
    total = n**k - sum(d * necklace_count(n, d) for d in divisors(k) if d < k)
    assert total % k == 0
    return total // k


# Census for N = 2, digits {0, p}


def atom_label(m: int, sign: str = "") -> str:
    return f"X0{sign}" if m == 0 else f"X{m}"


def atom_representative(p: int, label: str) -> int:
    """Class member of least absolute value; ties would go to the negative one."""
    if label == "X0+":
        return 0
    if label == "X0-":
        return -p
    m = int(label[1:])
    return m if m < p - m else m - p


@dataclass(frozen=True)
class OneDimCensus:
    """Atom census for N = 2, digits {0, p}.

    histogram maps cycle length to cycle count, computed from multiplicative
    orders alone so that very large p stay cheap; cycles() lists labels.
    """

    p: int
    histogram: dict[int, int]

    @property
    def atom_count(self) -> int:
        return sum(k * c for k, c in self.histogram.items())

    @property
    def cycle_count(self) -> int:
        return sum(self.histogram.values())

    def cycles(self) -> Iterator[list[str]]:
        """Label cycles in R order, each from its smallest index, ordered by that index."""
        yield ["X0+"]
        yield ["X0-"]
        p = self.p
        seen = bytearray(p)
        half = (p + 1) // 2  # inverse of 2 mod p
        for m in range(1, p):
            if seen[m]:
                continue
            cyc = []
            x = m
            while not seen[x]:
                seen[x] = 1
                cyc.append(x)
                x = x * half % p
            yield [atom_label(x) for x in cyc]

    def to_json(self) -> dict:
        return {"p": self.p, "atom_count": self.atom_count, "cycle_count": self.cycle_count,
                "histogram": {str(k): v for k, v in sorted(self.histogram.items())}}


def census_two(p: int) -> OneDimCensus:
    if p < 1 or p % 2 == 0:
        raise ValueError("p must be odd and positive")
    hist = {1: 2}
    for e in divisors(p):
        if e == 1:
            continue
        # the atoms X_m with p / gcd(m, p) = e: phi(e) of them, each of period ord_e(2)
        k = multiplicative_order(2, e)
        hist[k] = hist.get(k, 0) + euler_phi(e) // k
    return OneDimCensus(p, dict(sorted(hist.items())))


def census_csv(census: OneDimCensus) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "atom_label", "cycle_id", "cycle_length"])
    for cid, cyc in enumerate(census.cycles()):
        for label in cyc:
            w.writerow([census.p, label, cid, len(cyc)])
    return buf.getvalue()


def general_census(n: int, digits: Sequence[int]) -> CycleAtomStructure:
    """Cycles of R for a 1-D system, found in the interval that must hold B_inf.

    The interval [-max D / (N - 1), -min D / (N - 1)] is mapped into itself,
    so the cycles of R on its integers are exactly the periodic points.
    """
    return interval_structure(one_dim(n, digits))


def b_infinity_interval(system: DigitSystem) -> tuple[int, int]:
    n = system.matrix[0][0]
    if n < 2:
        raise ValueError("interval bound needs N >= 2")
    ds = [d[0] for d in system.digits]
    lo = -(max(ds) // (n - 1))
    hi = (-min(ds)) // (n - 1)
    return lo, hi


def interval_structure(system: DigitSystem) -> CycleAtomStructure:
    lo, hi = b_infinity_interval(system)
    succ = {x: apply_R(system, (x,))[0][0] for x in range(lo, hi + 1)}
    alive = set(succ)
    while True:
        images = {succ[x] for x in alive}
        drop = {x for x in alive if x not in images or succ[x] not in alive}
        if not drop:
            break
        alive -= drop
    cycles = []
    left = set(alive)
    for x in sorted(alive):
        if x not in left:
            continue
        cyc = [x]
        left.discard(x)
        y = succ[x]
        while y != x:
            cyc.append(y)
            left.discard(y)
            y = succ[y]
        cycles.append([(v,) for v in cyc])
    return CycleAtomStructure.from_cycles(cycles)


def label_of_point(p: int, b: int) -> str:
    """Atom label of a periodic point b in -p..0 for digits {0, p}."""
    if b == 0:
        return "X0+"
    if b == -p:
        return "X0-"
    return atom_label(b % p)


# Uniform cycle search


def _uniform_period(p: int) -> int | None:
    k = multiplicative_order(2, p)
    for e in divisors(p):
        if e > 1 and multiplicative_order(2, e) != k:
            return None
    return k


def uniform_cycle_search(bound: int, composite_only: bool = False) -> list[tuple[int, int, int]]:
    """Odd p <= bound whose non-fixed atoms all share one period k: (p, k, (p - 1) / k)."""
    if bound < 3:
        raise ValueError("bound must be at least 3")
    out = []
    for p in range(3, bound + 1, 2):
        if composite_only and len(divisors(p)) == 2:
            continue
        k = _uniform_period(p)
        if k is not None:
            out.append((p, k, (p - 1) // k))
    return out
