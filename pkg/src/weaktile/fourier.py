"""Exact Fourier analysis of finitely supported weight functions.

Weights are exact: Fraction where possible, real CyclotomicNumber where a
construction forces algebraic values (witnesses extracted from spectra can
carry values like (2+sqrt(2))/4, which are cyclotomic reals but not
rational).  Transforms are computed by direct summation; the large-group
paths in the lonely-weak-tile construction use closed forms instead and
never run a full transform.

Weight files share the set-file header and hold one `x1,...,xk : value`
line per support point, where value is a rational `num/den` or a
serialized cyclotomic literal.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

from .config import SETTINGS
from .cyclo import (
    CyclotomicNumber,
    POSITIVE,
    ZERO,
    root_of_unity,
)
from .group import Element, GroupSpec, make_group

Weight = Union[Fraction, CyclotomicNumber]


@dataclass(frozen=True)
class Sampled:
    n: int


EXHAUSTIVE = "exhaustive"


def _norm_weight(value) -> Weight:
    if isinstance(value, CyclotomicNumber):
        if value.is_rational():
            return value.rational_value()
        return value
    return Fraction(value)


def _w_zero(value: Weight) -> bool:
    return (not value) if isinstance(value, Fraction) else value.is_zero()


def _w_eq(a: Weight, b: Weight) -> bool:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    return _as_cyclo(a) == _as_cyclo(b)


def _as_cyclo(value: Weight) -> CyclotomicNumber:
    if isinstance(value, CyclotomicNumber):
        return value
    return CyclotomicNumber.from_rational(value)


def weight_sign(value: Weight) -> int:
    """Exact sign of a real weight (NEGATIVE / ZERO / POSITIVE)."""
    if isinstance(value, Fraction):
        return (value > 0) - (value < 0)
    return value.sign_of_real()


class GroupFunction:
    """Sparse exact-weighted function on a finite abelian group."""

    __slots__ = ("spec", "weights")

    def __init__(self, spec: GroupSpec, weights: dict):
        cleaned = {}
        for x, w in weights.items():
            x = tuple(x)
            if not spec.contains(x):
                raise ValueError(f"support point {x} outside group {spec.orders}")
            w = _norm_weight(w)
            if not _w_zero(w):
                cleaned[x] = w
        self.spec = spec
        self.weights = cleaned

    # -- constructors ---------------------------------------------------

    @staticmethod
    def indicator(spec: GroupSpec, points: Iterable[Element]) -> "GroupFunction":
        return GroupFunction(spec, {tuple(x): Fraction(1) for x in points})

    @staticmethod
    def dirac(spec: GroupSpec, x: Element) -> "GroupFunction":
        return GroupFunction(spec, {tuple(x): Fraction(1)})

    @staticmethod
    def zero(spec: GroupSpec) -> "GroupFunction":
        return GroupFunction(spec, {})

    # -- basics ----------------------------------------------------------

    def value(self, x: Element) -> Weight:
        return self.weights.get(tuple(x), Fraction(0))

    def support(self) -> set[Element]:
        return set(self.weights)

    def total_mass(self) -> Weight:
        total: Weight = Fraction(0)
        for w in self.weights.values():
            total = _w_add(total, w)
        return total

    def is_indicator(self) -> bool:
        return all(w == 1 for w in self.weights.values())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupFunction):
            return NotImplemented
        if self.spec != other.spec or set(self.weights) != set(other.weights):
            return False
        return all(_w_eq(w, other.weights[x]) for x, w in self.weights.items())

    def __add__(self, other: "GroupFunction") -> "GroupFunction":
        if self.spec != other.spec:
            raise ValueError("group mismatch")
        out = dict(self.weights)
        for x, w in other.weights.items():
            out[x] = _w_add(out.get(x, Fraction(0)), w)
        return GroupFunction(self.spec, out)

    def __sub__(self, other: "GroupFunction") -> "GroupFunction":
        return self + other.scale(-1)

    def scale(self, c) -> "GroupFunction":
        c = _norm_weight(c)
        return GroupFunction(
            self.spec, {x: _w_mul(w, c) for x, w in self.weights.items()}
        )

    def translate(self, t: Element) -> "GroupFunction":
        return GroupFunction(
            self.spec, {self.spec.add(x, t): w for x, w in self.weights.items()}
        )

    def reflect(self) -> "GroupFunction":
        """x -> f(-x)."""
        return GroupFunction(
            self.spec, {self.spec.neg(x): w for x, w in self.weights.items()}
        )

    def conj_weights(self) -> "GroupFunction":
        return GroupFunction(
            self.spec,
            {
                x: (w if isinstance(w, Fraction) else w.conj())
                for x, w in self.weights.items()
            },
        )

    def is_even(self) -> bool:
        for x, w in self.weights.items():
            if not _w_eq(w, self.value(self.spec.neg(x))):
                return False
        return True

    def function_id(self) -> str:
        blob = ";".join(
            ",".join(map(str, x)) + ":" + _serialize_weight(w)
            for x, w in sorted(self.weights.items())
        )
        head = "group=" + ",".join(map(str, self.spec.orders)) + ";"
        return hashlib.sha256((head + blob).encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return (
            f"GroupFunction(orders={self.spec.orders}, "
            f"support={len(self.weights)})"
        )


def _w_add(a: Weight, b: Weight) -> Weight:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _norm_weight(_as_cyclo(a) + _as_cyclo(b))


def _w_mul(a: Weight, b: Weight) -> Weight:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _norm_weight(_as_cyclo(a) * _as_cyclo(b))


def _serialize_weight(w: Weight) -> str:
    if isinstance(w, Fraction):
        return f"{w.numerator}/{w.denominator}" if w.denominator != 1 else str(
            w.numerator
        )
    return w.serialize()


def parse_weight(text: str) -> Weight:
    text = text.strip()
    if text.startswith("cyclo:"):
        return _norm_weight(CyclotomicNumber.deserialize(text))
    return Fraction(text)


# -- transforms --------------------------------------------------------


def dft(f: GroupFunction, chi: Element) -> CyclotomicNumber:
    """f-hat(chi) = sum_x f(x) chi(x), exactly."""
    spec = f.spec
    if len(chi) != spec.rank:
        raise ValueError("character shape mismatch")
    n = spec.exponent
    rational_acc: dict = {}
    cyclo_acc = None
    for x, w in f.weights.items():
        e = spec.char_exponent(chi, x)
        if isinstance(w, Fraction):
            rational_acc[e] = rational_acc.get(e, Fraction(0)) + w
        else:
            term = w * root_of_unity(e, n)
            cyclo_acc = term if cyclo_acc is None else cyclo_acc + term
    total = CyclotomicNumber.zero(n)
    for e, coeff in rational_acc.items():
        if coeff:
            total = total + root_of_unity(e, n) * coeff
    if cyclo_acc is not None:
        total = total + cyclo_acc
    return total


def convolve(f: GroupFunction, g: GroupFunction) -> GroupFunction:
    """(f*g)(x) = sum_y f(y) g(x-y); exact sparse convolution."""
    if f.spec != g.spec:
        raise ValueError("group mismatch")
    out: dict = {}
    for y, wf in f.weights.items():
        for z, wg in g.weights.items():
            x = f.spec.add(y, z)
            out[x] = _w_add(out.get(x, Fraction(0)), _w_mul(wf, wg))
            if len(out) > SETTINGS.convolution_result_cap:
                raise MemoryError("convolution result exceeds configured cap")
    return GroupFunction(f.spec, out)


def tensor(u: GroupFunction, v: GroupFunction) -> GroupFunction:
    """(u (x) v)(g,h) = u(g) v(h) on the product group."""
    spec = make_group(u.spec.orders + v.spec.orders)
    out = {}
    for g, wu in u.weights.items():
        for h, wv in v.weights.items():
            out[g + h] = _w_mul(wu, wv)
    return GroupFunction(spec, out)


@dataclass(frozen=True)
class Spectrum0Set:
    function_id: str
    zeros: frozenset
    complete: bool


def zero_set(
    f: GroupFunction, mode=EXHAUSTIVE, rng: random.Random | None = None
) -> Spectrum0Set:
    """Characters annihilating f-hat, each certified by exact zero-test."""
    spec = f.spec
    if mode == EXHAUSTIVE:
        zeros = frozenset(
            chi for chi in spec.dual_elements() if dft(f, chi).is_zero()
        )
        return Spectrum0Set(f.function_id(), zeros, complete=True)
    if isinstance(mode, Sampled):
        rng = rng if rng is not None else random.Random(SETTINGS.seed)
        zeros = set()
        for _ in range(mode.n):
            chi = spec.random_element(rng)
            if dft(f, chi).is_zero():
                zeros.add(chi)
        return Spectrum0Set(f.function_id(), frozenset(zeros), complete=False)
    raise ValueError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class PdReport:
    """Outcome of the transform-nonnegativity test."""

    passed: bool
    not_even: bool
    violations: tuple  # characters with a negative (or non-real) transform


def is_positive_definite(f: GroupFunction) -> PdReport:
    """Check f-hat >= 0 on the whole dual.

    A real-valued f has a real transform exactly when f is even, so
    evenness is checked structurally first; an uneven f yields a
    structured NotEven failure rather than an exception.
    """
    if not f.is_even():
        return PdReport(passed=False, not_even=True, violations=())
    bad = []
    for chi in f.spec.dual_elements():
        if dft(f, chi).sign_of_real() not in (ZERO, POSITIVE):
            bad.append(chi)
    return PdReport(passed=not bad, not_even=False, violations=tuple(bad))


def parseval_check(f: GroupFunction) -> bool:
    """sum_chi |f-hat(chi)|^2 == |E| * sum_x |f(x)|^2, exactly."""
    spec = f.spec
    lhs = CyclotomicNumber.zero()
    for chi in spec.dual_elements():
        v = dft(f, chi)
        lhs = lhs + v * v.conj()
    rhs = CyclotomicNumber.zero()
    for w in f.weights.values():
        c = _as_cyclo(w)
        rhs = rhs + c * c.conj()
    return lhs == rhs * spec.size


def dft_table(f: GroupFunction) -> dict:
    return {chi: dft(f, chi) for chi in f.spec.dual_elements()}


def inverse_dft(spec: GroupSpec, table: dict) -> GroupFunction:
    """Reconstruct f from a full transform table (exact inversion)."""
    n = spec.exponent
    size = spec.size
    out = {}
    for x in spec.elements():
        acc = CyclotomicNumber.zero(n)
        for chi, v in table.items():
            acc = acc + v * root_of_unity(-spec.char_exponent(chi, x), n)
        if not acc.is_zero():
            out[x] = acc * Fraction(1, size)
    return GroupFunction(spec, out)


# -- weight files ------------------------------------------------------


def write_weight_file(path, f: GroupFunction) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("group: " + ",".join(map(str, f.spec.orders)) + "\n")
        for x, w in sorted(f.weights.items()):
            fh.write(",".join(map(str, x)) + " : " + _serialize_weight(w) + "\n")


def read_weight_file(path) -> GroupFunction:
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header.startswith("group:"):
            raise ValueError(f"{path}: missing 'group:' header")
        spec = make_group(int(t) for t in header.split(":", 1)[1].split(","))
        weights = {}
        for raw in fh:
            line = raw.strip()
            if not line:
                continue
            coords, value = line.split(":", 1)
            x = tuple(int(t) for t in coords.strip().rstrip(",").split(","))
            weights[x] = parse_weight(value)
    return GroupFunction(spec, weights)
