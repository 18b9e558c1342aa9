"""Homogeneous forms in X_0, ..., X_{v-1} and their multiplication maps."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from .field import FieldSpec

Monomial = tuple  # exponent vector


@lru_cache(maxsize=None)
def monomial_basis(num_vars: int, d: int) -> tuple[Monomial, ...]:
    """All monomials of degree ``d`` in graded lex order, X_0 > X_1 > ...

    >>> monomial_basis(2, 3)
    ((3, 0), (2, 1), (1, 2), (0, 3))
    """
    if num_vars < 1:
        raise ValueError("need at least one variable")
    if d < 0:
        return ()
    out = []
    for combo in combinations_with_replacement(range(num_vars), d):
        e = [0] * num_vars
        for k in combo:
            e[k] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(num_vars: int, d: int) -> dict[Monomial, int]:
    return {m: i for i, m in enumerate(monomial_basis(num_vars, d))}


def _mono_key(m: Monomial):
    return (sum(m), m)


@dataclass(frozen=True)
class HomogeneousForm:
    """A homogeneous polynomial with coefficients in ``field``.

    ``terms`` is a tuple of ``(monomial, coefficient)`` pairs in descending
    monomial order without zero coefficients. The zero form still carries its
    degree.
    """

    field: FieldSpec
    num_vars: int
    degree: int
    terms: tuple = ()

    def __post_init__(self):
        for m, c in self.terms:
            if len(m) != self.num_vars or sum(m) != self.degree:
                raise ValueError(f"monomial {m} does not have degree {self.degree}")
            if not c:
                raise ValueError("zero coefficient stored")

    @classmethod
    def from_dict(cls, field, num_vars, degree, coeffs: dict) -> "HomogeneousForm":
        terms = []
        for m, c in coeffs.items():
            c = field(c)
            if c:
                terms.append((tuple(int(e) for e in m), c))
        terms.sort(key=lambda t: _mono_key(t[0]), reverse=True)
        return cls(field, num_vars, degree, tuple(terms))

    @classmethod
    def zero(cls, field, num_vars, degree) -> "HomogeneousForm":
        return cls(field, num_vars, degree, ())

    @classmethod
    def constant(cls, field, num_vars, c) -> "HomogeneousForm":
        return cls.from_dict(field, num_vars, 0, {(0,) * num_vars: c})

    @classmethod
    def variable(cls, field, num_vars, k, c=1) -> "HomogeneousForm":
        e = [0] * num_vars
        e[k] = 1
        return cls.from_dict(field, num_vars, 1, {tuple(e): c})

    @classmethod
    def linear(cls, field, coeffs) -> "HomogeneousForm":
        n = len(coeffs)
        return cls.from_dict(
            field, n, 1, {tuple(int(j == k) for j in range(n)): c for k, c in enumerate(coeffs)}
        )

    def as_dict(self) -> dict:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def _check(self, other: "HomogeneousForm"):
        if self.field != other.field or self.num_vars != other.num_vars:
            raise ValueError("forms live in different rings")

    def __add__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check(other)
        if self.degree != other.degree:
            if other.is_zero():
                return self
            if self.is_zero():
                return other
            raise ValueError("adding forms of different degrees")
        acc = self.as_dict()
        for m, c in other.terms:
            acc[m] = acc.get(m, 0) + c
        return HomogeneousForm.from_dict(self.field, self.num_vars, self.degree, acc)

    def __neg__(self) -> "HomogeneousForm":
        return self.scale(-1)

    def __sub__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        return self + (-other)

    def scale(self, c) -> "HomogeneousForm":
        c = self.field(c)
        return HomogeneousForm.from_dict(
            self.field, self.num_vars, self.degree, {m: v * c for m, v in self.terms}
        )

    def __mul__(self, other: "HomogeneousForm") -> "HomogeneousForm":
        self._check(other)
        acc: dict = {}
        for m1, c1 in self.terms:
            for m2, c2 in other.terms:
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, 0) + c1 * c2
        return HomogeneousForm.from_dict(
            self.field, self.num_vars, self.degree + other.degree, acc
        )

    def __pow__(self, k: int) -> "HomogeneousForm":
        out = HomogeneousForm.constant(self.field, self.num_vars, 1)
        for _ in range(k):
            out = out * self
        return out

    # -- changes of ring ------------------------------------------------
    def add_variables(self, k: int = 1) -> "HomogeneousForm":
        """Same polynomial read in ``num_vars + k`` variables."""
        return HomogeneousForm(
            self.field,
            self.num_vars + k,
            self.degree,
            tuple((m + (0,) * k, c) for m, c in self.terms),
        )

    def restrict_last(self) -> "HomogeneousForm":
        """Set the last variable to zero and drop it."""
        return HomogeneousForm(
            self.field,
            self.num_vars - 1,
            self.degree,
            tuple((m[:-1], c) for m, c in self.terms if m[-1] == 0),
        )

    def substitute(self, images: list["HomogeneousForm"]) -> "HomogeneousForm":
        """Replace X_k by ``images[k]`` (all of the same degree)."""
        if len(images) != self.num_vars:
            raise ValueError("need one image per variable")
        deg = images[0].degree if images else 0
        out = HomogeneousForm.zero(self.field, images[0].num_vars, self.degree * deg)
        powers: dict = {}
        for m, c in self.terms:
            t = HomogeneousForm.constant(self.field, images[0].num_vars, c)
            for k, e in enumerate(m):
                if e:
                    key = (k, e)
                    if key not in powers:
                        powers[key] = images[k] ** e
                    t = t * powers[key]
            out = out + t
        return out

    def evaluate(self, point, mul=None, add=None, zero=0):
        """Evaluate at ``point``; custom ``mul``/``add`` allow extension fields."""
        mul = mul or (lambda a, b: a * b)
        add = add or (lambda a, b: a + b)
        acc = zero
        for m, c in self.terms:
            t = c
            for x, e in zip(point, m):
                for _ in range(e):
                    t = mul(t, x)
            acc = add(acc, t)
        return acc

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.terms:
            mono = "*".join(
                f"X{k}" if e == 1 else f"X{k}^{e}" for k, e in enumerate(m) if e
            )
            cs = self.field.format(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts)


@lru_cache(maxsize=4096)
def mult_map_matrix(f: HomogeneousForm, d: int) -> np.ndarray:
    """Matrix of S_d -> S_{d + deg f}, v -> f*v, in monomial bases.

    Column j holds the coefficients of ``f`` times the j-th monomial of
    degree ``d``. The result is read-only since it is cached.
    """
    src = monomial_basis(f.num_vars, d) if d >= 0 else ()
    tgt_index = monomial_index(f.num_vars, d + f.degree) if d + f.degree >= 0 else {}
    M = f.field.zeros((len(tgt_index), len(src)))
    for j, mono in enumerate(src):
        for m, c in f.terms:
            M[tgt_index[tuple(a + b for a, b in zip(m, mono))], j] = c
    M.setflags(write=False)
    return M
