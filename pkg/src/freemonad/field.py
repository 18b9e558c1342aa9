"""Exact scalar fields: prime fields F_p and the rationals."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

DEFAULT_PRIME = 32003


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    i = 3
    while i * i <= p:
        if p % i == 0:
            return False
        i += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """Either ``FieldSpec("prime", p)`` or ``FieldSpec("rational")``.

    Elements are plain Python ints in ``[0, p)`` for prime fields and
    :class:`fractions.Fraction` for the rationals. Matrices are numpy arrays
    with dtype int64 (prime) or object (rational).
    """

    kind: str
    p: int | None = None

    def __post_init__(self):
        if self.kind == "prime":
            if self.p is None or not (2 <= self.p < 2**31) or not is_prime(self.p):
                raise ValueError(f"not a prime in [2, 2^31): {self.p}")
        elif self.kind == "rational":
            if self.p is not None:
                raise ValueError("rational field takes no modulus")
        else:
            raise ValueError(f"unknown field kind {self.kind!r}")

    @classmethod
    def prime(cls, p: int = DEFAULT_PRIME) -> "FieldSpec":
        return cls("prime", p)

    @classmethod
    def rational(cls) -> "FieldSpec":
        return cls("rational")

    @property
    def is_prime(self) -> bool:
        return self.kind == "prime"

    @property
    def dtype(self):
        return np.int64 if self.is_prime else object

    def __str__(self):
        return f"GF({self.p})" if self.is_prime else "QQ"

    # -- scalars --------------------------------------------------------
    def __call__(self, x) -> int | Fraction:
        if self.is_prime:
            if isinstance(x, Fraction):
                return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
            return int(x) % self.p
        return Fraction(x)

    def zero(self):
        return self(0)

    def one(self):
        return self(1)

    def inv(self, x):
        if not x:
            raise ZeroDivisionError("inverse of zero")
        if self.is_prime:
            return pow(int(x), -1, self.p)
        return 1 / Fraction(x)

    def parse(self, s: str):
        s = s.strip()
        if "/" in s:
            num, den = s.split("/")
            return self(Fraction(int(num), int(den)))
        return self(int(s))

    def format(self, x) -> str:
        x = self(x)
        if self.is_prime:
            return str(x)
        return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"

    # -- arrays ---------------------------------------------------------
    def zeros(self, shape) -> np.ndarray:
        if self.is_prime:
            return np.zeros(shape, dtype=np.int64)
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out

    def array(self, data) -> np.ndarray:
        if self.is_prime:
            arr = np.array(data, dtype=object)
            if arr.size:
                arr = np.vectorize(self, otypes=[object])(arr)
            return arr.astype(np.int64)
        arr = np.array(data, dtype=object)
        if arr.size:
            arr = np.vectorize(Fraction, otypes=[object])(arr)
        return arr

    def reduce(self, arr: np.ndarray) -> np.ndarray:
        return arr % self.p if self.is_prime else arr

    def identity(self, n: int) -> np.ndarray:
        out = self.zeros((n, n))
        for i in range(n):
            out[i, i] = self.one()
        return out
