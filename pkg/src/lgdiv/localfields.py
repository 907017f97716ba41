"""Arithmetic over Q and its completions.

Rationals are plain :class:`fractions.Fraction` objects (always reduced).
Places are immutable :class:`Place` values, and approximate elements of
Q_p are :class:`PadicNumber` values that carry their own precision.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from numbers import Rational

from sympy import factorint, isprime
from sympy.ntheory.residue_ntheory import nthroot_mod

DEFAULT_PRECISION = 12
MAX_PRECISION = 96
# extra digits given to exact zero so it never limits a result's precision
_EXACT_SLACK = 10**6


class HenselError(ValueError):
    """Raised when a residue does not satisfy the lifting criterion."""


class PrecisionError(ArithmeticError):
    """Raised when a p-adic computation cannot be decided at the working precision."""


def as_rational(a) -> Fraction:
    if isinstance(a, Fraction):
        return a
    if isinstance(a, (int, Rational)):
        return Fraction(a)
    if isinstance(a, str):
        return Fraction(a)
    raise TypeError(f"cannot interpret {a!r} as a rational number")


# ---------------------------------------------------------------------------
# places

@dataclass(frozen=True, order=True)
class Place:
    """A completion of Q: a finite prime ``p`` or the real place (``p is None``)."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or isinstance(self.p, bool):
                raise TypeError("prime must be an int")
            if not isprime(self.p):
                raise ValueError(f"{self.p} is not prime")

    @classmethod
    def finite(cls, p: int) -> "Place":
        return cls(int(p))

    @classmethod
    def real(cls) -> "Place":
        return cls(None)

    @classmethod
    def parse(cls, text: str) -> "Place":
        text = str(text).strip().lower()
        if text in ("real", "inf", "infinity", "oo"):
            return REAL
        return cls(int(text))

    @property
    def is_real(self) -> bool:
        return self.p is None

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    def __str__(self):
        return "real" if self.p is None else str(self.p)


REAL = Place(None)


def _place(v) -> Place:
    if isinstance(v, Place):
        return v
    if v is None:
        return REAL
    return Place.parse(v)


# ---------------------------------------------------------------------------
# valuations and residue symbols

def valuation(a, p: int) -> int:
    """p-adic valuation of a nonzero integer or rational."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("valuation of zero is infinite")
    return _int_val(a.numerator, p) - _int_val(a.denominator, p)


def _int_val(n: int, p: int) -> int:
    n = abs(n)
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def split_unit(a, p: int) -> tuple[int, Fraction]:
    """Write ``a = p**v * u`` with u a p-adic unit; return ``(v, u)``."""
    a = as_rational(a)
    v = valuation(a, p)
    return v, a / Fraction(p) ** v


def unit_residue(u, p: int, k: int) -> int:
    """Residue in [0, p**k) of a rational p-adic unit ``u``."""
    u = as_rational(u)
    m = p**k
    return u.numerator * pow(u.denominator, -1, m) % m


def legendre_symbol(a: int, p: int) -> int:
    """Euler-criterion value of (a/p) for an odd prime p."""
    if p == 2 or p < 2 or not isprime(p):
        raise ValueError(f"legendre_symbol needs an odd prime, got {p}")
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def is_square_local(a, v) -> bool:
    """True iff ``a`` is a nonzero square in Q_v."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no square class")
    v = _place(v)
    if v.is_real:
        return a > 0
    p = v.p
    e, u = split_unit(a, p)
    if e % 2:
        return False
    if p == 2:
        return unit_residue(u, 2, 3) == 1
    return legendre_symbol(unit_residue(u, p, 1), p) == 1


def is_cube_local(a, v) -> bool:
    """True iff ``a`` is a nonzero cube in Q_v."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no cube class")
    v = _place(v)
    if v.is_real:
        return True
    p = v.p
    e, u = split_unit(a, p)
    if e % 3:
        return False
    if p == 3:
        return unit_residue(u, 3, 2) in (1, 8)
    if p % 3 == 2:
        return True
    return pow(unit_residue(u, p, 1), (p - 1) // 3, p) == 1


def local_cube_class_order(v) -> int:
    """Order of Q_v^x / (Q_v^x)^3."""
    v = _place(v)
    if v.is_real:
        return 1
    if v.p == 3 or v.p % 3 == 1:
        return 9
    return 3


def is_rational_square(a) -> bool:
    a = as_rational(a)
    if a <= 0:
        return False
    return _is_square_int(a.numerator) and _is_square_int(a.denominator)


def _is_square_int(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def integer_cube_root(n: int) -> int | None:
    """Exact integer cube root of ``n`` (any sign), or None."""
    s = -1 if n < 0 else 1
    m = abs(n)
    r = round(m ** (1 / 3)) if m < 1 << 1000 else _icbrt(m)
    for c in (r - 1, r, r + 1):
        if c >= 0 and c**3 == m:
            return s * c
    r = _icbrt(m)
    return s * r if r**3 == m else None


def _icbrt(m: int) -> int:
    if m < 2:
        return m
    x = 1 << ((m.bit_length() + 2) // 3)
    while True:
        y = (2 * x + m // (x * x)) // 3
        if y >= x:
            return x
        x = y


def is_rational_cube(a) -> bool:
    a = as_rational(a)
    return integer_cube_root(a.numerator) is not None and integer_cube_root(a.denominator) is not None


# ---------------------------------------------------------------------------
# canonical class representatives over Q

def squarefree_part(a, primes=None) -> int:
    """Signed squarefree integer in the square class of the nonzero rational ``a``.

    If ``primes`` is given, those primes are stripped first and the remaining
    cofactor is tested for being a square, which avoids factoring when the
    class is known to be supported on ``primes``.
    """
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no square class")
    n = abs(a.numerator * a.denominator)
    rep = 1
    if primes:
        for p in primes:
            e = _int_val(n, p)
            n //= p**e
            if e % 2:
                rep *= p
        if _is_square_int(n):
            return rep if a > 0 else -rep
    for p, e in factorint(n).items():
        if e % 2:
            rep *= p
    return rep if a > 0 else -rep


def cubefree_part(a) -> int:
    """Cube-free integer with prime exponents in {0, 1, 2} in the cube class of ``a``."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no cube class")
    rep = 1
    for p, e in factorint(abs(a.numerator)).items():
        rep *= p ** (e % 3)
    for p, e in factorint(a.denominator).items():
        rep *= p ** (-e % 3)
    return rep if a > 0 else -rep


def least_nonresidue(p: int) -> int:
    for n in range(2, p):
        if legendre_symbol(n, p) == -1:
            return n
    raise ValueError(p)


def local_square_class(a, v) -> int:
    """Canonical squarefree integer representing the class of ``a`` in Q_v^x/(Q_v^x)^2.

    Real: +-1.  Odd p: one of 1, n, p, n*p with n the least non-residue.
    p = 2: u * 2**e with u in {1, 3, 5, 7} and e in {0, 1}.
    """
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no square class")
    v = _place(v)
    if v.is_real:
        return 1 if a > 0 else -1
    p = v.p
    e, u = split_unit(a, p)
    if p == 2:
        return unit_residue(u, 2, 3) * 2 ** (e % 2)
    rep = p ** (e % 2)
    if legendre_symbol(unit_residue(u, p, 1), p) == -1:
        rep *= least_nonresidue(p)
    return rep


# ---------------------------------------------------------------------------
# p-adic numbers

@dataclass(frozen=True)
class PadicNumber:
    """``p**valuation * unit`` known modulo ``p**(valuation + precision)``.

    An element indistinguishable from zero is stored with ``unit == 0`` and
    ``precision == 0``; its ``valuation`` is then the absolute precision.
    """

    prime: int
    valuation: int
    unit: int
    precision: int

    def __post_init__(self):
        p = self.prime
        if self.unit == 0:
            if self.precision != 0:
                raise ValueError("zero element must have relative precision 0")
            return
        if self.precision <= 0:
            raise ValueError("precision must be positive")
        if self.unit % p == 0 or not 0 < self.unit < p**self.precision:
            raise ValueError("unit must be in [1, p**precision) and prime to p")

    # constructors

    @classmethod
    def from_residue(cls, value: int, p: int, absprec: int) -> "PadicNumber":
        """Element of Z_p (or p**j Z_p) known modulo ``p**absprec``."""
        value %= p**absprec
        if value == 0:
            return cls(p, absprec, 0, 0)
        v = _int_val(value, p)
        k = absprec - v
        return cls(p, v, (value // p**v) % p**k, k)

    @classmethod
    def from_rational(cls, a, p: int, precision: int = DEFAULT_PRECISION) -> "PadicNumber":
        """Embed an exact rational with ``precision`` significant digits."""
        a = as_rational(a)
        if a == 0:
            raise ValueError("use zero() for the zero element")
        v, u = split_unit(a, p)
        return cls(p, v, unit_residue(u, p, precision), precision)

    @classmethod
    def zero(cls, p: int, absprec: int) -> "PadicNumber":
        return cls(p, absprec, 0, 0)

    # accessors

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.precision

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    def residue(self, absprec: int | None = None) -> int:
        """Integer residue modulo ``p**absprec``; requires nonnegative valuation."""
        N = self.absolute_precision if absprec is None else absprec
        if N > self.absolute_precision:
            raise PrecisionError(f"only {self.absolute_precision} digits known, {N} requested")
        if self.valuation < 0:
            raise ValueError("element is not integral")
        if self.is_zero:
            return 0
        return (self.unit * self.prime**self.valuation) % self.prime**N

    def congruent(self, other, absprec: int) -> bool:
        other = self._coerce(other)
        d = self - other
        if d.absolute_precision < absprec:
            raise PrecisionError("not enough precision to compare")
        return d.is_zero or d.valuation >= absprec

    # arithmetic; output precisions follow the usual min/shift rules

    def _coerce(self, other) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.prime != self.prime:
                raise ValueError("mixing different primes")
            return other
        other = as_rational(other)
        if other == 0:
            return PadicNumber.zero(self.prime, max(self.absolute_precision, 0) + _EXACT_SLACK)
        # exact rationals carry as much precision as the other operand can use
        v = valuation(other, self.prime)
        k = max(self.absolute_precision - v, 1) + max(self.precision, 1)
        # an exact zero has huge absolute precision; no real operand needs that much
        k = min(k, 4 * MAX_PRECISION)
        return PadicNumber.from_rational(other, self.prime, k)

    def __add__(self, other):
        other = self._coerce(other)
        p = self.prime
        N = min(self.absolute_precision, other.absolute_precision)
        base = min(self.valuation, other.valuation)
        if N <= base:
            return PadicNumber.zero(p, N)
        if self.is_zero or other.is_zero:
            nz = other if self.is_zero else self
            k = N - nz.valuation
            if k <= 0:
                return PadicNumber.zero(p, N)
            return PadicNumber(p, nz.valuation, nz.unit % p**k, k)
        s = self.unit * p ** (self.valuation - base) + other.unit * p ** (other.valuation - base)
        s %= p ** (N - base)
        if s == 0:
            return PadicNumber.zero(p, N)
        w = _int_val(s, p)
        return PadicNumber(p, base + w, s // p**w, N - base - w)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero:
            return self
        m = self.prime**self.precision
        return PadicNumber(self.prime, self.valuation, (-self.unit) % m, self.precision)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        p = self.prime
        if self.is_zero or other.is_zero:
            # absolute precision of a product with an approximate zero
            if self.is_zero and other.is_zero:
                return PadicNumber.zero(p, self.valuation + other.valuation)
            z, nz = (self, other) if self.is_zero else (other, self)
            return PadicNumber.zero(p, z.valuation + nz.valuation)
        k = min(self.precision, other.precision)
        return PadicNumber(p, self.valuation + other.valuation,
                           self.unit * other.unit % p**k, k)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroDivisionError("p-adic element indistinguishable from zero")
        k = self.precision
        return PadicNumber(self.prime, -self.valuation, pow(self.unit, -1, self.prime**k), k)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return PadicNumber.from_rational(1, self.prime, max(self.precision, 1))
        base = self
        result = None
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __repr__(self):
        if self.is_zero:
            return f"O({self.prime}^{self.valuation})"
        return f"{self.prime}^{self.valuation}*{self.unit} + O({self.prime}^{self.absolute_precision})"


# ---------------------------------------------------------------------------
# Hensel lifting

def poly_eval(coeffs, x):
    """Evaluate sum(coeffs[i] * x**i) by Horner's rule."""
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    return [i * c for i, c in enumerate(coeffs)][1:]


def _int_val_or(n: int, p: int, cap: int) -> int:
    if n == 0:
        return cap
    return min(_int_val(n, p), cap)


def _newton_lift(coeffs, p: int, r0: int, k: int) -> tuple[int, int]:
    """Lift ``r0`` to an integer r with f(r) = 0 mod p**k.

    Requires v(f(r0)) > 2 v(f'(r0)).  Returns ``(r, t)`` where t = v(f'(r0));
    the root is determined modulo p**(k - t).
    """
    df = poly_derivative(coeffs)
    cap = 10 * k + 10
    t = _int_val_or(poly_eval(df, r0), p, cap)
    if t >= cap:
        raise HenselError(f"derivative vanishes at {r0} modulo {p}^{cap}")
    if _int_val_or(poly_eval(coeffs, r0), p, cap) <= 2 * t:
        raise HenselError(f"{r0} does not satisfy the Hensel criterion modulo {p}")
    mod = p ** (k + t)
    r = r0 % mod
    while True:
        fr = poly_eval(coeffs, r)
        if fr % p**k == 0:
            return r, t
        dr = poly_eval(df, r)
        r = (r - (fr // p**t) * pow(dr // p**t, -1, mod)) % mod


def hensel_lift_root(coeffs, p: int, r0: int, k: int) -> PadicNumber:
    """Lift a simple root of ``f`` modulo p to a root modulo ``p**k``.

    ``coeffs`` lists the integer coefficients in ascending degree order
    (``[c0, c1, ..., cn]``).
    """
    if not isprime(p):
        raise ValueError(f"{p} is not prime")
    if poly_eval(coeffs, r0) % p:
        raise HenselError(f"{r0} is not a root of f modulo {p}")
    if poly_eval(poly_derivative(coeffs), r0) % p == 0:
        raise HenselError(f"{r0} is a multiple root modulo {p}")
    r, _ = _newton_lift(coeffs, p, r0, k)
    return PadicNumber.from_residue(r, p, k)


def _unit_nth_root_residue(u: int, n: int, p: int) -> int | None:
    """A residue r with x**n - u satisfying the Hensel criterion at r, if any."""
    t = _int_val(n, p) if n % p == 0 else 0
    if t == 0:
        if p == 2:
            return 1  # every odd unit has an odd n-th root when n is odd
        r = nthroot_mod(u % p, n, p)
        return None if r is None else int(r)
    m = p ** (2 * t + 1)
    if m > 10**6:
        raise ValueError(f"root extraction of degree {n} at {p} not supported")
    for r in range(1, m):
        if r % p and (pow(r, n, m) - u) % m == 0:
            return r
    return None


def nth_root_local(a, n: int, v, k: int = DEFAULT_PRECISION) -> PadicNumber | None:
    """An n-th root of ``a`` in Q_v with ``k`` known digits, or None if none exists."""
    a = as_rational(a)
    if a == 0:
        raise ValueError("zero has no local root class")
    v = _place(v)
    if v.is_real:
        raise NotImplementedError("real roots: use the sign test")
    p = v.p
    e, u = split_unit(a, p)
    if e % n:
        return None
    t = _int_val(n, p) if n % p == 0 else 0
    N = k + 2 * t + 1
    ures = unit_residue(u, p, N)
    r0 = _unit_nth_root_residue(ures, n, p)
    if r0 is None:
        return None
    coeffs = [-ures] + [0] * (n - 1) + [1]
    r, t = _newton_lift(coeffs, p, r0, k + t)
    root = PadicNumber.from_residue(r, p, k)
    return PadicNumber(p, root.valuation + e // n, root.unit, root.precision)


def roots_mod_p(coeffs, p: int) -> list[int]:
    """All roots of an integer polynomial modulo a (small) prime p, by enumeration."""
    return [x for x in range(p) if poly_eval(coeffs, x) % p == 0]
