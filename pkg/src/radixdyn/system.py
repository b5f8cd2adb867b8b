"""Digit systems (N, D): validation, spectral classification, digit translation."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np

from .linalg import (
    IntegralSolver,
    IntMatrix,
    IntVector,
    LatticeBasis,
    SingularMatrixError,
    Verdict,
    all_roots_outside_unit_circle,
    as_matrix,
    as_vector,
    char_poly,
    det,
    identity,
    inverse,
    mat_sub,
    mat_vec,
    reciprocal_factor_degree,
    handelman_condition,
    solve_integral,
)


class InvalidSystemError(ValueError):
    def __init__(self, report: "ValidationReport"):
        super().__init__("; ".join(i.message for i in report.issues))
        self.report = report


@dataclass(frozen=True)
class DigitSystem:
    """An integer matrix N with a complete residue set D of Z^dim / N Z^dim.

    Construct through :func:`make_system` or :func:`validate`; the digit order
    is significant because digit indices form the coding alphabet.
    """

    matrix: IntMatrix
    digits: tuple[IntVector, ...]

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def order(self) -> int:
        return len(self.digits)

    @cached_property
    def solver(self) -> IntegralSolver:
        return IntegralSolver(self.matrix)

    @cached_property
    def residue_lattice(self) -> LatticeBasis:
        cols = [tuple(row[j] for row in self.matrix) for j in range(self.dim)]
        return LatticeBasis.from_generators(cols, self.dim)

    def residue(self, x: Sequence[int]) -> IntVector:
        """Canonical representative of x modulo N Z^dim."""
        w = list(x)
        for row, (c, p) in zip(self.residue_lattice.basis, self.residue_lattice.pivots):
            q = w[c] // p
            if q:
                w = [a - q * b for a, b in zip(w, row)]
        return tuple(w)

    @cached_property
    def digit_of_residue(self) -> dict[IntVector, int]:
        return {self.residue(d): i for i, d in enumerate(self.digits)}

    @cached_property
    def d_max(self) -> int:
        return max(max(abs(c) for c in d) for d in self.digits)

    @property
    def is_one_dim(self) -> bool:
        return self.dim == 1

    def to_json(self) -> dict:
        return {"matrix": [list(r) for r in self.matrix], "digits": [list(d) for d in self.digits]}

    @cached_property
    def fingerprint(self) -> str:
        blob = json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class Issue:
    kind: str
    message: str
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "message": self.message, "detail": self.detail}


@dataclass(frozen=True)
class ValidationReport:
    issues: tuple[Issue, ...]
    system: DigitSystem | None = None

    @property
    def valid(self) -> bool:
        return not self.issues

    def to_json(self) -> dict:
        return {"valid": self.valid, "issues": [i.to_json() for i in self.issues]}


def validate(matrix: Iterable[Iterable[int]], digits: Iterable[Iterable[int]]) -> ValidationReport:
    """Check (matrix, digits) and build the system when everything holds."""
    issues: list[Issue] = []
    try:
        m = as_matrix(matrix)
    except (ValueError, TypeError) as exc:
        return ValidationReport((Issue("not-square", str(exc)),))
    try:
        ds = tuple(as_vector(d) for d in digits)
    except (ValueError, TypeError) as exc:
        return ValidationReport((Issue("bad-digit", str(exc)),))
    if not ds:
        return ValidationReport((Issue("empty-digits", "digit list is empty"),))
    bad = [i for i, d in enumerate(ds) if len(d) != len(m)]
    if bad:
        return ValidationReport((Issue("dimension-mismatch", "digit length differs from matrix size",
                                       {"indices": bad}),))
    n = abs(det(m))
    if n == 0:
        issues.append(Issue("singular", "matrix is singular"))
    elif len(ds) != n:
        issues.append(Issue("wrong-cardinality", f"expected {n} digits, got {len(ds)}",
                            {"expected": n, "got": len(ds)}))
    if n:
        probe = DigitSystem(m, ds)
        seen: dict[IntVector, int] = {}
        for i, d in enumerate(ds):
            r = probe.residue(d)
            if r in seen:
                issues.append(Issue("duplicate-residue",
                                    f"digits {seen[r]} and {i} are congruent modulo N",
                                    {"pair": [seen[r], i], "residue": list(r)}))
            else:
                seen[r] = i
    if issues:
        return ValidationReport(tuple(issues))
    return ValidationReport((), DigitSystem(m, ds))


def make_system(matrix, digits) -> DigitSystem:
    report = validate(matrix, digits)
    if not report.valid:
        raise InvalidSystemError(report)
    return report.system


def one_dim(n: int, digits: Iterable[int]) -> DigitSystem:
    return make_system([[n]], [[d] for d in digits])


def parse_system(doc: dict[str, Any]) -> tuple[list, list]:
    """Read {"matrix", "digits"} or the 1-D form {"n", "digits"}."""
    if "matrix" in doc:
        return doc["matrix"], doc["digits"]
    if "n" in doc:
        return [[doc["n"]]], [[d] if isinstance(d, int) else d for d in doc["digits"]]
    raise ValueError('system JSON needs "matrix" or "n"')


# Spectral classification


@dataclass(frozen=True)
class SpectralClass:
    kind: str  # expansive, hyperbolic or indeterminate
    handelman_ok: bool | None
    eigen_moduli: tuple[float, ...]
    verdict: Verdict
    reciprocal_gcd_degree: int

    @property
    def expansive(self) -> bool:
        return self.kind == "expansive"

    @property
    def hyperbolic(self) -> bool:
        return self.kind == "hyperbolic"

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "handelman_ok": self.handelman_ok,
            "eigen_moduli": [round(x, 12) for x in self.eigen_moduli],
            "outside_unit_circle": self.verdict.value,
            "possible_unit_modulus_eigenvalue": self.reciprocal_gcd_degree > 0,
        }


def eigen_moduli(m: IntMatrix) -> tuple[float, ...]:
    vals = np.linalg.eigvals(np.array(m, dtype=float))
    return tuple(sorted(float(abs(v)) for v in vals))


def classify(system: DigitSystem) -> SpectralClass:
    p = char_poly(system.matrix)
    verdict = all_roots_outside_unit_circle(p)
    gcd_deg = reciprocal_factor_degree(p)
    if verdict is Verdict.YES:
        kind = "expansive"
    elif gcd_deg == 0:
        # A failed Schur-Cohn step already rules out "all roots outside", and
        # p coprime to its reciprocal has no root on the unit circle.
        kind = "hyperbolic"
    else:
        kind = "indeterminate"
    return SpectralClass(kind, handelman_condition(p), eigen_moduli(system.matrix), verdict, gcd_deg)


def is_expansive(system: DigitSystem) -> bool:
    # memoized on the instance; frozen dataclasses still allow __dict__ writes
    cache = system.__dict__
    if "_expansive" not in cache:
        verdict = all_roots_outside_unit_circle(char_poly(system.matrix))
        cache["_expansive"] = verdict is Verdict.YES
    return cache["_expansive"]


# Digit translation and fixed points


def one_minus(m: IntMatrix) -> IntMatrix:
    return mat_sub(identity(len(m)), m)


@dataclass(frozen=True)
class Translation:
    system: DigitSystem
    b_infinity_translates: bool
    shift: tuple[Fraction, ...]


def translate_digits(system: DigitSystem, p: Sequence[int]) -> Translation:
    """Shift every digit by p; the attractor moves by (N - 1)^-1 p."""
    p = as_vector(p)
    nm1 = mat_sub(system.matrix, identity(system.dim))
    if det(nm1) == 0:
        raise SingularMatrixError("N - 1 is singular")
    shift = mat_vec(inverse(nm1), p)
    moved = make_system(system.matrix, [tuple(a + b for a, b in zip(d, p)) for d in system.digits])
    return Translation(moved, solve_integral(nm1, p) is not None, shift)


def digit_fixed_points(system: DigitSystem) -> list[tuple[IntVector, IntVector]]:
    """Pairs (d, x) with x = (1 - N)^-1 d integral, i.e. d + N x = x."""
    om = one_minus(system.matrix)
    if det(om) == 0:
        raise SingularMatrixError("1 is an eigenvalue of N")
    solver = IntegralSolver(om)
    out = []
    for d in system.digits:
        x = solver(d)
        if x is not None:
            out.append((d, x))
    return out
