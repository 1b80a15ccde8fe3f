"""Exact arithmetic in cyclotomic fields Q(omega_N).

Elements are stored in a tensor basis over the coprime prime-power factors
of N: writing N = q_1 * ... * q_r with q_i = p_i^e_i, the root omega_N
splits as a product of roots omega_{q_i}, and the products

    omega_{q_1}^{t_1} * ... * omega_{q_r}^{t_r},   0 <= t_i < phi(q_i)

form a Q-basis of Q(omega_N).  Per-factor reduction uses the minimal
polynomial of omega_{p^e}: an exponent with top p-ary digit p-1 expands
into minus the sum over the smaller digits.  Canonical coordinates are
unique, so equality and zero testing are exact dictionary comparisons and
never involve floating point.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, NamedTuple

import mpmath

from .config import SETTINGS


class CapacityExceeded(Exception):
    """Requested modulus above the configured cap."""


class NotReal(Exception):
    """sign_of_real called on a non-real value."""


class IndeterminateSign(Exception):
    """Interval refinement hit its round cap without separating from 0."""


class NotCoprime(ValueError):
    pass


class WrongLength(ValueError):
    pass


NEGATIVE, ZERO, POSITIVE = -1, 0, 1


class _Factor(NamedTuple):
    p: int
    e: int
    q: int       # p**e
    phi: int     # p**(e-1) * (p-1)
    pe1: int     # p**(e-1)
    crt: int     # (N // q)^{-1} mod q, so omega_N = prod omega_q^crt


@lru_cache(maxsize=None)
def _factorization(n: int) -> tuple[_Factor, ...]:
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    out = []
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if m > 1:
        out.append((m, 1))
    factors = []
    for p, e in sorted(out):
        q = p**e
        crt = pow(n // q, -1, q)
        factors.append(_Factor(p, e, q, q // p * (p - 1), q // p, crt))
    return tuple(factors)


def _check_cap(n: int) -> None:
    if n > SETTINGS.modulus_cap:
        raise CapacityExceeded(f"modulus {n} exceeds cap {SETTINGS.modulus_cap}")


def _canonicalize(factors: tuple[_Factor, ...], terms: dict) -> dict:
    """Reduce raw exponent tuples (entries in [0, q_i)) to basis form."""
    for idx, fac in enumerate(factors):
        expanded = {}
        for exps, coeff in terms.items():
            t = exps[idx]
            if t < fac.phi:
                prev = expanded.get(exps)
                expanded[exps] = coeff if prev is None else prev + coeff
            else:
                a = t % fac.pe1
                for b in range(fac.p - 1):
                    key = exps[:idx] + (a + b * fac.pe1,) + exps[idx + 1:]
                    prev = expanded.get(key)
                    expanded[key] = -coeff if prev is None else prev - coeff
        terms = expanded
    return {k: v for k, v in terms.items() if v}


class CyclotomicNumber:
    """Immutable element of Q(omega_N) in canonical tensor coordinates."""

    __slots__ = ("modulus", "coeffs", "_min")

    def __init__(self, modulus: int, coeffs: dict, *, _canonical: bool = False):
        _check_cap(modulus)
        factors = _factorization(modulus)
        if not _canonical:
            coeffs = _canonicalize(
                factors, {k: Fraction(v) for k, v in coeffs.items() if v}
            )
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_min", None)

    def __setattr__(self, *_):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero(modulus: int = 1) -> "CyclotomicNumber":
        return CyclotomicNumber(modulus, {}, _canonical=True)

    @staticmethod
    def from_rational(value, modulus: int = 1) -> "CyclotomicNumber":
        value = Fraction(value)
        if not value:
            return CyclotomicNumber.zero(modulus)
        key = (0,) * len(_factorization(modulus))
        return CyclotomicNumber(modulus, {key: value}, _canonical=True)

    # -- structure ----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_rational(self) -> bool:
        zero_key = (0,) * len(_factorization(self.modulus))
        return not self.coeffs or set(self.coeffs) == {zero_key}

    def rational_value(self) -> Fraction:
        if not self.coeffs:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError("value is irrational")
        return next(iter(self.coeffs.values()))

    def _minimal(self):
        """(modulus, sorted coeff items) over the smallest cyclotomic field
        containing the value; used for cross-modulus equality and hashing."""
        if self._min is not None:
            return self._min
        factors = _factorization(self.modulus)
        keep: list[tuple[int, int]] = []  # (index, divisor of exponents)
        new_mod = 1
        for idx, fac in enumerate(factors):
            d = fac.e
            for exps in self.coeffs:
                t = exps[idx]
                if t:
                    v = 0
                    while t % fac.p == 0:
                        t //= fac.p
                        v += 1
                    d = min(d, v)
                    if d == 0:
                        break
            if d < fac.e:
                keep.append((idx, fac.p**d))
                new_mod *= fac.p ** (fac.e - d)
        items = tuple(
            sorted(
                (tuple(exps[idx] // div for idx, div in keep), coeff)
                for exps, coeff in self.coeffs.items()
            )
        )
        object.__setattr__(self, "_min", (new_mod, items))
        return self._min

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = CyclotomicNumber.from_rational(other)
        if not isinstance(other, CyclotomicNumber):
            return NotImplemented
        if self.modulus == other.modulus:
            return self.coeffs == other.coeffs
        return self._minimal() == other._minimal()

    def __hash__(self) -> int:
        return hash(self._minimal())

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    # -- rebasing -----------------------------------------------------

    def rebase(self, new_modulus: int) -> "CyclotomicNumber":
        """Re-express in Q(omega_M); M a multiple of the current modulus,
        or any modulus whose field still contains the value."""
        if new_modulus == self.modulus:
            return self
        if new_modulus % self.modulus == 0:
            return self._rebase_up(new_modulus)
        if self.modulus % new_modulus == 0:
            return self._rebase_down(new_modulus)
        lcm = self.modulus * new_modulus // gcd(self.modulus, new_modulus)
        return self._rebase_up(lcm)._rebase_down(new_modulus)

    def _rebase_up(self, new_modulus: int) -> "CyclotomicNumber":
        _check_cap(new_modulus)
        old = _factorization(self.modulus)
        new = _factorization(new_modulus)
        pos = {fac.p: i for i, fac in enumerate(new)}
        scale = []
        for fac in old:
            nf = new[pos[fac.p]]
            scale.append((pos[fac.p], nf.p ** (nf.e - fac.e)))
        coeffs = {}
        blank = (0,) * len(new)
        for exps, coeff in self.coeffs.items():
            key = list(blank)
            for (j, mult), t in zip(scale, exps):
                key[j] = t * mult
            coeffs[tuple(key)] = coeff
        return CyclotomicNumber(new_modulus, coeffs, _canonical=True)

    def _rebase_down(self, new_modulus: int) -> "CyclotomicNumber":
        old = _factorization(self.modulus)
        new = _factorization(new_modulus)
        pos = {fac.p: i for i, fac in enumerate(new)}
        plan = []
        for i, fac in enumerate(old):
            if fac.p in pos:
                plan.append((i, pos[fac.p], fac.p ** (fac.e - new[pos[fac.p]].e)))
            else:
                plan.append((i, None, fac.q))
        coeffs = {}
        for exps, coeff in self.coeffs.items():
            key = [0] * len(new)
            for i, j, div in plan:
                t = exps[i]
                if t % div:
                    raise ValueError(
                        f"value does not lie in Q(omega_{new_modulus})"
                    )
                if j is not None:
                    key[j] = t // div
            coeffs[tuple(key)] = coeff
        return CyclotomicNumber(new_modulus, coeffs, _canonical=True)

    def _common(self, other: "CyclotomicNumber"):
        if self.modulus == other.modulus:
            return self, other
        lcm = self.modulus * other.modulus // gcd(self.modulus, other.modulus)
        return self._rebase_up(lcm), other._rebase_up(lcm)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        coeffs = dict(a.coeffs)
        for key, coeff in b.coeffs.items():
            acc = coeffs.get(key)
            total = coeff if acc is None else acc + coeff
            if total:
                coeffs[key] = total
            elif acc is not None:
                del coeffs[key]
        return CyclotomicNumber(a.modulus, coeffs, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(
            self.modulus, {k: -v for k, v in self.coeffs.items()}, _canonical=True
        )

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if not other:
                return CyclotomicNumber.zero(self.modulus)
            return CyclotomicNumber(
                self.modulus,
                {k: v * other for k, v in self.coeffs.items()},
                _canonical=True,
            )
        other = _coerce(other)
        if other is None:
            return NotImplemented
        a, b = self._common(other)
        factors = _factorization(a.modulus)
        qs = tuple(f.q for f in factors)
        raw: dict = {}
        for e1, c1 in a.coeffs.items():
            for e2, c2 in b.coeffs.items():
                key = tuple((x + y) % q for x, y, q in zip(e1, e2, qs))
                prev = raw.get(key)
                c = c1 * c2
                raw[key] = c if prev is None else prev + c
        return CyclotomicNumber(
            a.modulus, _canonicalize(factors, raw), _canonical=True
        )

    __rmul__ = __mul__

    def conj(self) -> "CyclotomicNumber":
        factors = _factorization(self.modulus)
        qs = tuple(f.q for f in factors)
        raw = {}
        for exps, coeff in self.coeffs.items():
            key = tuple((-t) % q for t, q in zip(exps, qs))
            raw[key] = coeff
        return CyclotomicNumber(
            self.modulus, _canonicalize(factors, raw), _canonical=True
        )

    def is_real(self) -> bool:
        return self.coeffs == self.conj().coeffs

    # -- numeric views ------------------------------------------------

    def complex_value(self) -> complex:
        total = 0j
        factors = _factorization(self.modulus)
        for exps, coeff in self.coeffs.items():
            term = complex(coeff)
            for t, fac in zip(exps, factors):
                if t:
                    term *= _float_root(fac.q, t)
            total += term
        return total

    def sign_of_real(self) -> int:
        """Exact sign of a real value: NEGATIVE, ZERO or POSITIVE.

        Zero is decided symbolically; otherwise the value is bracketed by
        interval arithmetic at doubling precision until 0 falls outside.
        """
        if not self.is_real():
            raise NotReal(f"{self!r} is not real")
        if not self.coeffs:
            return ZERO
        factors = _factorization(self.modulus)
        # real value = sum of coeff * cos(2*pi*theta) over monomials
        parts = []
        for exps, coeff in self.coeffs.items():
            num, den = 0, 1
            for t, fac in zip(exps, factors):
                num = num * fac.q + t * den
                den *= fac.q
            parts.append((coeff, num % den, den))
        iv = mpmath.iv
        saved_prec = iv.prec
        prec = 64
        try:
            for _ in range(SETTINGS.sign_refine_rounds):
                iv.prec = prec
                total = iv.mpf(0)
                two_pi = 2 * iv.pi
                for coeff, num, den in parts:
                    angle = two_pi * num / den
                    total += iv.cos(angle) * iv.mpf(coeff.numerator) / coeff.denominator
                if total.a > 0:
                    return POSITIVE
                if total.b < 0:
                    return NEGATIVE
                prec *= 2
        finally:
            iv.prec = saved_prec
        raise IndeterminateSign(
            f"could not separate {self!r} from zero in "
            f"{SETTINGS.sign_refine_rounds} refinement rounds"
        )

    # -- serialization ------------------------------------------------

    def serialize(self) -> str:
        items = sorted(self.coeffs.items())
        body = ",".join(
            ".".join(map(str, exps)) + "=" + _fmt_fraction(coeff)
            for exps, coeff in items
        )
        return f"cyclo:{self.modulus}:{{{body}}}"

    @staticmethod
    def deserialize(text: str) -> "CyclotomicNumber":
        if not text.startswith("cyclo:"):
            raise ValueError(f"not a cyclotomic literal: {text!r}")
        _, mod_str, body = text.split(":", 2)
        modulus = int(mod_str)
        if not (body.startswith("{") and body.endswith("}")):
            raise ValueError(f"malformed cyclotomic literal: {text!r}")
        inner = body[1:-1]
        coeffs = {}
        if inner:
            for chunk in inner.split(","):
                exp_str, val = chunk.split("=")
                exps = tuple(int(x) for x in exp_str.split(".")) if exp_str else ()
                coeffs[exps] = Fraction(val)
        value = CyclotomicNumber(modulus, coeffs)
        if value.coeffs != coeffs:
            raise ValueError(f"non-canonical cyclotomic literal: {text!r}")
        return value

    def __repr__(self) -> str:
        return self.serialize()


def _coerce(value):
    if isinstance(value, CyclotomicNumber):
        return value
    if isinstance(value, (int, Fraction)):
        return CyclotomicNumber.from_rational(value)
    return None


def _fmt_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@lru_cache(maxsize=4096)
def _float_root(q: int, t: int) -> complex:
    return cmath.exp(2j * cmath.pi * t / q)


def root_of_unity(j: int, n: int) -> CyclotomicNumber:
    """Canonical representation of omega_n^j (j taken mod n)."""
    _check_cap(n)
    factors = _factorization(n)
    j %= n
    raw = {tuple((fac.crt * j) % fac.q for fac in factors): Fraction(1)}
    return CyclotomicNumber(n, _canonicalize(factors, raw), _canonical=True)


def from_root_coeffs(n: int, items) -> CyclotomicNumber:
    """Build sum_j coeff_j * omega_n^j from (j, coeff) pairs in one pass."""
    _check_cap(n)
    factors = _factorization(n)
    raw: dict = {}
    for j, coeff in items:
        coeff = Fraction(coeff)
        if not coeff:
            continue
        key = tuple((fac.crt * j) % fac.q for fac in factors)
        prev = raw.get(key)
        raw[key] = coeff if prev is None else prev + coeff
    return CyclotomicNumber(n, _canonicalize(factors, raw), _canonical=True)


def cyclo_sum(values: Iterable[CyclotomicNumber], modulus: int) -> CyclotomicNumber:
    """Sum of values, all rebased to the given modulus (fast accumulation)."""
    coeffs: dict = {}
    for v in values:
        v = v.rebase(modulus)
        for key, coeff in v.coeffs.items():
            prev = coeffs.get(key)
            total = coeff if prev is None else prev + coeff
            if total:
                coeffs[key] = total
            elif prev is not None:
                del coeffs[key]
    return CyclotomicNumber(modulus, coeffs, _canonical=True)


ALL_EQUAL = "AllEqual"
NOT_ALL_EQUAL = "NotAllEqual"


class VanishingSumWitness(NamedTuple):
    q: int
    base_modulus: int
    betas: tuple
    verdict: str


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def relative_vanishing_test(
    q: int, m: int, betas: list
) -> VanishingSumWitness:
    """Decide whether sum_j betas[j] * omega_q^j vanishes.

    With gcd(m, q) = 1 and coefficients in Q(omega_m), the minimal
    polynomial of omega_q over Q(omega_m) is 1 + x + ... + x^{q-1}, so the
    sum vanishes exactly when all coefficients coincide.  The verdict is
    computed from coefficient equality and then cross-checked against the
    exact evaluation of the sum.
    """
    if not _is_prime(q):
        raise ValueError(f"q must be prime, got {q}")
    if gcd(m, q) != 1:
        raise NotCoprime(f"gcd({m}, {q}) != 1")
    if len(betas) != q:
        raise WrongLength(f"expected {q} coefficients, got {len(betas)}")
    coerced = []
    for beta in betas:
        beta = _coerce(beta)
        try:
            coerced.append(beta.rebase(m))
        except ValueError as exc:
            raise ValueError(f"coefficient {beta!r} not in Q(omega_{m})") from exc
    all_equal = all(b == coerced[0] for b in coerced[1:])
    total = cyclo_sum(
        (b * root_of_unity(j, q) for j, b in enumerate(coerced)), m * q
    )
    if total.is_zero() != all_equal:
        raise AssertionError(
            "relative vanishing self-check failed: verdict and exact sum disagree"
        )
    return VanishingSumWitness(
        q=q,
        base_modulus=m,
        betas=tuple(coerced),
        verdict=ALL_EQUAL if all_equal else NOT_ALL_EQUAL,
    )
