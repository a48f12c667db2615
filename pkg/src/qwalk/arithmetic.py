"""Exact integer helpers behind the transfer certificates.

Floating eigenvalues enter here only through :func:`nearest_integer` and
:func:`recognize_quadratic_pair`; everything after recognition is integer arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import gcd, isqrt, sqrt

from .errors import InputError

__all__ = [
    "INTEGER_TOL",
    "QuadraticForm",
    "QuadraticPair",
    "nearest_integer",
    "squarefree_decompose",
    "is_squarefree",
    "is_perfect_square",
    "is_quadratic_integer",
    "recognize_quadratic_pair",
    "integer_differences",
    "compute_g",
]

INTEGER_TOL = 1e-7


@dataclass(frozen=True)
class QuadraticForm:
    """The number ``(a + b*sqrt(delta)) / 2`` with ``delta`` square-free.

    With ``delta == 1`` the value is rational and ``b`` is folded into ``a``, so ``b == 0``.
    """

    a: int
    b: int
    delta: int

    def __post_init__(self):
        if self.delta < 1 or not is_squarefree(self.delta):
            raise ValueError(f"delta must be a positive square-free integer, got {self.delta}")
        if self.delta == 1 and self.b != 0:
            object.__setattr__(self, "a", self.a + self.b)
            object.__setattr__(self, "b", 0)

    @property
    def value(self) -> float:
        return (self.a + self.b * sqrt(self.delta)) / 2

    @property
    def is_algebraic_integer(self) -> bool:
        return is_quadratic_integer(self.a, self.b, self.delta)

    def to_dict(self) -> dict:
        return {"a": self.a, "b": self.b, "delta": self.delta}


@dataclass(frozen=True)
class QuadraticPair:
    plus: QuadraticForm
    minus: QuadraticForm
    algebraic_integers: bool


def nearest_integer(x: float, tol: float = INTEGER_TOL) -> int | None:
    """``round(x)`` when ``x`` is within ``tol`` of it, else ``None``."""
    k = round(x)
    return int(k) if abs(x - k) <= tol else None


def _small_primes(limit: int = 1000) -> list[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[:2] = b"\x00\x00"
    for p in range(2, isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [p for p in range(limit + 1) if sieve[p]]


_PRIMES = _small_primes()


def _trial_divisors():
    yield from _PRIMES
    p = _PRIMES[-1] + 2
    while True:
        yield p
        p += 2


def squarefree_decompose(D: int) -> tuple[int, int]:
    """Write ``D = a**2 * b`` with ``b`` square-free, by trial division.

    Division stops once ``p**3`` exceeds the cofactor: what is left then has at most two
    prime factors, so it is either a perfect square or already square-free.
    """
    if int(D) != D or D < 1:
        raise InputError(f"squarefree_decompose needs a positive integer, got {D!r}")
    rest = int(D)
    a, b = 1, 1
    for p in _trial_divisors():
        if p * p * p > rest:
            break
        e = 0
        while rest % p == 0:
            rest //= p
            e += 1
        if e:
            a *= p ** (e // 2)
            if e % 2:
                b *= p
    s = isqrt(rest)
    if s * s == rest:
        a *= s
    else:
        b *= rest
    return a, b


def is_squarefree(x: int) -> bool:
    return x >= 1 and squarefree_decompose(x)[0] == 1


def is_perfect_square(D: int) -> bool:
    return D >= 0 and isqrt(D) ** 2 == D


def is_quadratic_integer(a: int, b: int, delta: int) -> bool:
    """Whether ``(a + b*sqrt(delta)) / 2`` is an algebraic integer.

    For ``delta = 1 (mod 4)`` the halves are allowed when ``a`` and ``b`` share parity;
    for ``delta = 2, 3 (mod 4)`` both ``a`` and ``b`` must be even.
    """
    if delta % 4 == 1:
        return (a - b) % 2 == 0
    return a % 2 == 0 and b % 2 == 0


def recognize_quadratic_pair(q1: float, q2: float, tol: float = INTEGER_TOL) -> QuadraticPair | None:
    """Recognise ``q1 >= q2`` as the conjugate pair ``(s +- b*sqrt(delta)) / 2``.

    ``s = q1 + q2`` must be within ``tol`` of an integer and ``(q1 - q2)**2`` within
    ``tol * max(1, 2*|q1 - q2|)`` of one (the error of a square grows with its base).
    Returns ``None`` when either test fails.
    """
    if q1 < q2:
        raise InputError("recognize_quadratic_pair expects q1 >= q2")
    s = nearest_integer(q1 + q2, tol)
    gap = q1 - q2
    D = nearest_integer(gap * gap, tol * max(1.0, 2 * gap))
    if s is None or D is None:
        return None
    if D == 0:
        plus = minus = QuadraticForm(s, 0, 1)
    else:
        b, delta = squarefree_decompose(D)
        plus, minus = QuadraticForm(s, b, delta), QuadraticForm(s, -b, delta)
    return QuadraticPair(plus, minus, plus.is_algebraic_integer and minus.is_algebraic_integer)


def integer_differences(values, q0: float, delta: int = 1, tol: float = INTEGER_TOL) -> list[int]:
    """``(q0 - q) / sqrt(delta)`` for each ``q``, each required to be an integer."""
    root = sqrt(delta)
    out = []
    for q in values:
        k = nearest_integer((q0 - q) / root, tol)
        if k is None:
            raise InputError(f"(q0 - q)/sqrt({delta}) is not an integer for q={q}")
        out.append(k)
    return out


def compute_g(support, q0: float, delta: int = 1, tol: float = INTEGER_TOL) -> int:
    """gcd of the nonzero normalised gaps ``(q0 - q) / sqrt(delta)`` over a support."""
    diffs = [abs(k) for k in integer_differences(support, q0, delta, tol) if k != 0]
    if not diffs:
        raise InputError("trivial support: no eigenvalue differs from q0")
    return reduce(gcd, diffs)
