"""Exact integer linear algebra and integer polynomial tests.

Vectors are tuples of Python ints and matrices are tuples of row tuples, so
everything is hashable and arithmetic never overflows.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

IntVector = tuple[int, ...]
IntMatrix = tuple[tuple[int, ...], ...]


class SingularMatrixError(ValueError):
    pass


class UnsupportedDegreeError(ValueError):
    pass


def as_vector(v: Iterable[int]) -> IntVector:
    return tuple(int(x) for x in v)


def as_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    m = tuple(as_vector(r) for r in rows)
    if not m or any(len(r) != len(m) for r in m):
        raise ValueError("matrix must be square and nonempty")
    return m


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def mat_vec(a: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def mat_add(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(tuple(x + y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_sub(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    return tuple(tuple(x - y for x, y in zip(r, s)) for r, s in zip(a, b))


def mat_scale(c, a: Sequence[Sequence]) -> tuple:
    return tuple(tuple(c * x for x in r) for r in a)


def mat_pow(a: IntMatrix, k: int) -> IntMatrix:
    result = identity(len(a))
    base = a
    while k:
        if k & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        k >>= 1
    return result


def vec_add(u: Sequence, v: Sequence) -> tuple:
    return tuple(x + y for x, y in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> tuple:
    return tuple(x - y for x, y in zip(u, v))


def vec_neg(u: Sequence) -> tuple:
    return tuple(-x for x in u)


def sup_norm(v: Sequence) -> int | Fraction:
    return max((abs(x) for x in v), default=0)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by Bareiss fraction-free elimination."""
    a = [list(r) for r in m]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def adjugate(m: IntMatrix) -> IntMatrix:
    n = len(m)
    if n == 1:
        return ((1,),)
    cof = []
    for i in range(n):
        row = []
        for j in range(n):
            minor = [r[:j] + r[j + 1:] for k, r in enumerate(m) if k != i]
            row.append((-1) ** (i + j) * det(minor))
        cof.append(row)
    return tuple(tuple(cof[j][i] for j in range(n)) for i in range(n))


def inverse(m: IntMatrix) -> tuple[tuple[Fraction, ...], ...]:
    d = det(m)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    return tuple(tuple(Fraction(x, d) for x in r) for r in adjugate(m))


def solve_integral(m: IntMatrix, v: Sequence[int]) -> IntVector | None:
    """Return the integer x with m x = v, or None when x is not integral."""
    d = det(m)
    if d == 0:
        raise SingularMatrixError("matrix is singular")
    w = mat_vec(adjugate(m), v)
    if any(x % d for x in w):
        return None
    return tuple(x // d for x in w)


class IntegralSolver:
    """Repeated solves of m x = v against one fixed matrix."""

    def __init__(self, m: IntMatrix):
        self.matrix = m
        self.det = det(m)
        if self.det == 0:
            raise SingularMatrixError("matrix is singular")
        self.adj = adjugate(m)

    def __call__(self, v: Sequence[int]) -> IntVector | None:
        d = self.det
        w = mat_vec(self.adj, v)
        if any(x % d for x in w):
            return None
        return tuple(x // d for x in w)


# Polynomials


@dataclass(frozen=True)
class IntPolynomial:
    """Integer polynomial with coefficients stored low to high."""

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = tuple(int(x) for x in self.coeffs)
        while len(c) > 1 and c[-1] == 0:
            c = c[:-1]
        if not c or c == (0,):
            raise ValueError("zero polynomial")
        object.__setattr__(self, "coeffs", c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def monic(self) -> bool:
        return self.coeffs[-1] == 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __mul__(self, other: "IntPolynomial") -> "IntPolynomial":
        out = [0] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntPolynomial(tuple(out))

    def reversed(self) -> tuple[int, ...]:
        """Coefficients of x^n p(1/x); may have a zero leading term."""
        return tuple(reversed(self.coeffs))

    def divmod_monic(self, g: "IntPolynomial") -> tuple[tuple[int, ...], tuple[int, ...]]:
        if not g.monic:
            raise ValueError("divisor must be monic")
        rem = list(self.coeffs)
        q = [0] * max(self.degree - g.degree + 1, 1)
        for k in range(self.degree - g.degree, -1, -1):
            c = rem[k + g.degree]
            q[k] = c
            if c:
                for i, b in enumerate(g.coeffs):
                    rem[k + i] -= c * b
        rem = rem[: g.degree] or [0]
        return tuple(q), tuple(rem)

    def __str__(self) -> str:
        terms = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                s = "-" + mono if c < 0 else mono
            else:
                s = f"{c}{mono}" if not mono else f"{c}*{mono}"
            terms.append(s)
        return " + ".join(terms).replace("+ -", "- ")


def char_poly(m: IntMatrix) -> IntPolynomial:
    """det(x*1 - m) by the Faddeev-LeVerrier recursion (all divisions exact)."""
    n = len(m)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    mk = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    eye = identity(n)
    for k in range(1, n + 1):
        mk = mat_add(mat_mul(m, mk), mat_scale(coeffs[n - k + 1], eye))
        am = mat_mul(m, mk)
        tr = sum(am[i][i] for i in range(n))
        assert tr % k == 0
        coeffs[n - k] = -tr // k
    return IntPolynomial(tuple(coeffs))


def poly_matrix_eval(p: IntPolynomial, m: IntMatrix) -> IntMatrix:
    n = len(m)
    acc = tuple(tuple(0 for _ in range(n)) for _ in range(n))
    for c in reversed(p.coeffs):
        acc = mat_add(mat_mul(acc, m), mat_scale(c, identity(n)))
    return acc


class Verdict(str, enum.Enum):
    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


def _roots_inside_unit_disk(coeffs: Sequence[int]) -> Verdict:
    # Schur-Cohn reduction on integer coefficients (low to high).
    a = list(coeffs)
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    while len(a) > 1:
        n = len(a) - 1
        a0, an = a[0], a[n]
        if abs(a0) > abs(an):
            return Verdict.NO
        if abs(a0) == abs(an):
            return Verdict.BOUNDARY
        a = [an * a[k + 1] - a0 * a[n - k - 1] for k in range(n)]
        g = math.gcd(*a)
        if g > 1:
            a = [x // g for x in a]
    return Verdict.YES


def all_roots_outside_unit_circle(p: IntPolynomial) -> Verdict:
    """Decide whether every complex root of p has modulus > 1."""
    if p.degree < 1:
        raise ValueError("degree must be at least 1")
    if p.coeffs[0] == 0:
        return Verdict.NO
    return _roots_inside_unit_disk(p.reversed())


def _rational_poly_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    while len(a) >= len(b) and any(a):
        c = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, x in enumerate(b):
            a[shift + i] -= c * x
        a.pop()
        while a and a[-1] == 0:
            a.pop()
    return a


def poly_gcd(p: Sequence[int], q: Sequence[int]) -> tuple[Fraction, ...]:
    """Monic gcd over the rationals, coefficients low to high."""
    a = [Fraction(x) for x in p]
    b = [Fraction(x) for x in q]
    for v in (a, b):
        while v and v[-1] == 0:
            v.pop()
    while b:
        a, b = b, _rational_poly_rem(a, b)
    if not a:
        return ()
    lead = a[-1]
    return tuple(x / lead for x in a)


def reciprocal_factor_degree(p: IntPolynomial) -> int:
    """Degree of gcd(p, x^n p(1/x)); positive means a unit-modulus root is possible."""
    return len(poly_gcd(p.coeffs, p.reversed())) - 1


# Factorization by Kronecker-style enumeration of monic divisors

MAX_FACTOR_DEGREE = 6


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    k = 1
    while k * k <= n:
        if n % k == 0:
            small.append(k)
            if k * k != n:
                large.append(n // k)
        k += 1
    return small + large[::-1]


def _mignotte_ok(g: Sequence[int], f: IntPolynomial) -> bool:
    norm2 = sum(c * c for c in f.coeffs)
    d = len(g) - 1
    return all(c * c <= math.comb(d, j) ** 2 * norm2 for j, c in enumerate(g))


def _interpolate_monic(xs: Sequence[int], ys: Sequence[int]) -> tuple[int, ...] | None:
    # g = prod(x - xi) + r, with r of degree < d through the points (xi, yi).
    d = len(xs)
    base = [Fraction(0)] * (d + 1)
    base[0] = Fraction(1)
    prod = [Fraction(1)]
    for xi in xs:
        nxt = [Fraction(0)] * (len(prod) + 1)
        for i, c in enumerate(prod):
            nxt[i + 1] += c
            nxt[i] -= xi * c
        prod = nxt
    r = [Fraction(0)] * d
    for i, (xi, yi) in enumerate(zip(xs, ys)):
        if yi == 0:
            continue
        basis = [Fraction(1)]
        denom = 1
        for j, xj in enumerate(xs):
            if j == i:
                continue
            nxt = [Fraction(0)] * (len(basis) + 1)
            for k, c in enumerate(basis):
                nxt[k + 1] += c
                nxt[k] -= xj * c
            basis = nxt
            denom *= xi - xj
        for k, c in enumerate(basis):
            r[k] += c * yi / denom
    out = []
    for k in range(d + 1):
        c = prod[k] + (r[k] if k < d else 0)
        if c.denominator != 1:
            return None
        out.append(int(c))
    return tuple(out)


def _find_monic_factor(f: IntPolynomial, d: int) -> IntPolynomial | None:
    pool = []
    x = 0
    while len(pool) < 2 * d + 4:
        if f(x) != 0:
            pool.append(x)
        x = -x if x > 0 else 1 - x
    pool.sort(key=lambda t: (len(_divisors(f(t))), abs(t)))
    xs = pool[:d]
    choices = [[s * e for e in _divisors(f(t)) for s in (1, -1)] for t in xs]
    for ys in itertools.product(*choices):
        g = _interpolate_monic(xs, ys)
        if g is None or g[0] == 0 or f.coeffs[0] % g[0]:
            continue
        if not _mignotte_ok(g, f):
            continue
        gp = IntPolynomial(g)
        _, rem = f.divmod_monic(gp)
        if not any(rem):
            return gp
    return None


def monic_factors(p: IntPolynomial) -> list[IntPolynomial]:
    """Irreducible monic factors of p over the integers, with multiplicity."""
    if not p.monic:
        raise ValueError("polynomial must be monic")
    if p.degree > MAX_FACTOR_DEGREE:
        raise UnsupportedDegreeError(f"degree {p.degree} exceeds {MAX_FACTOR_DEGREE}")
    if p.coeffs[0] == 0:
        raise SingularMatrixError("p(0) = 0")
    out = []
    work = [p]
    while work:
        f = work.pop()
        if f.degree == 1:
            out.append(f)
            continue
        for d in range(1, f.degree // 2 + 1):
            g = _find_monic_factor(f, d)
            if g is not None:
                q, _ = f.divmod_monic(g)
                work.extend([g, IntPolynomial(q)])
                break
        else:
            out.append(f)
    return sorted(out, key=lambda f: (f.degree, f.coeffs))


def handelman_condition(p: IntPolynomial) -> bool:
    """True iff no irreducible monic factor f of p has |f(0)| = 1."""
    return all(abs(f.coeffs[0]) != 1 for f in monic_factors(p))


# Lattices in Hermite normal form


def hermite_normal_form(rows: Iterable[Sequence[int]], dim: int) -> tuple[IntVector, ...]:
    """Row-style HNF: echelon, positive pivots, entries above a pivot in [0, pivot)."""
    a = [list(r) for r in rows if any(r)]
    r = 0
    for c in range(dim):
        if r >= len(a):
            break
        if all(a[i][c] == 0 for i in range(r, len(a))):
            continue
        while True:
            piv = min((i for i in range(r, len(a)) if a[i][c] != 0), key=lambda i: abs(a[i][c]))
            a[r], a[piv] = a[piv], a[r]
            clean = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        r += 1
    return tuple(tuple(row) for row in a[:r])


@dataclass(frozen=True)
class LatticeBasis:
    dim: int
    basis: tuple[IntVector, ...]

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence[int]], dim: int) -> "LatticeBasis":
        return cls(dim, hermite_normal_form(gens, dim))

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def pivots(self) -> list[tuple[int, int]]:
        out = []
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            out.append((c, row[c]))
        return out

    @property
    def index(self) -> int | None:
        """[Z^dim : L] when L has full rank."""
        if self.rank < self.dim:
            return None
        return math.prod(p for _, p in self.pivots)

    def __contains__(self, v: Sequence[int]) -> bool:
        w = list(v)
        col = 0
        for row, (c, p) in zip(self.basis, self.pivots):
            if any(w[col:c]):
                return False
            if w[c] % p:
                return False
            q = w[c] // p
            w = [x - q * y for x, y in zip(w, row)]
            col = c + 1
        return not any(w)


def smallest_invariant_lattice(n: IntMatrix, gens: Iterable[Sequence[int]]) -> LatticeBasis:
    """Smallest lattice containing gens and mapped into itself by n."""
    if det(n) == 0:
        raise SingularMatrixError("matrix is singular")
    dim = len(n)
    basis = hermite_normal_form(list(gens), dim)
    while True:
        grown = hermite_normal_form(list(basis) + [mat_vec(n, b) for b in basis], dim)
        if grown == basis:
            return LatticeBasis(dim, basis)
        basis = grown
