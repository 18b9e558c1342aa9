"""Cohomology of the bundle E = H^0(K^•) of a free monad, by graded pieces.

With N = ker d^0 the monad splits into 0 -> K^-1 -> N -> E -> 0 and
0 -> N -> K^0 -> K^1 -> 0. For n >= 3 this gives

* H^0(E(d)) = ker H^0(d^0(d)) / im H^0(d^-1(d))
* H^1(E(d)) = coker H^0(d^0(d))
* H^i(E(d)) = 0 for 1 < i < n-1
* H^{n-1}, H^n by Serre duality from the dual monad, or directly from the
  top cohomology of the line bundles (inverse-monomial model).
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

import numpy as np

from . import linalg
from .errors import InternalConsistencyError, MonadError
from .monad import GradedMap, Monad, dual, linesum
from .poly import HomogeneousForm, monomial_basis, monomial_index, mult_map_matrix


def _require(m: Monad):
    if m.n < 3:
        raise MonadError("cohomology identities need n >= 3")


@lru_cache(maxsize=512)
def dual_of(m: Monad) -> Monad:
    return dual(m)


def _rank(m: Monad, M: np.ndarray) -> int:
    return linalg.rank(m.field, M)


# ---------------------------------------------------------------------------
# single graded pieces


def h1_piece(m: Monad, d: int) -> int:
    _require(m)
    A = m.dzero.sections_matrix(d)
    return A.shape[0] - _rank(m, A)


def h0_piece(m: Monad, d: int) -> int:
    _require(m)
    A = m.dzero.sections_matrix(d)
    B = m.dminus.sections_matrix(d)
    return (A.shape[1] - _rank(m, A)) - _rank(m, B)


def top_cohomology_matrix(phi: GradedMap, d: int) -> np.ndarray:
    """Matrix of H^n(φ(d)) in the inverse-monomial bases.

    H^n(O(c)) has basis X^{-1-β}, β of degree -c-n-1; multiplying by X^γ
    sends it to X^{-1-(β-γ)} when β >= γ and to zero otherwise.
    """
    n, v = phi.n, phi.n + 1
    col_bases = [monomial_basis(v, -a - d - n - 1) for a in phi.source]
    row_idx = [monomial_index(v, -b - d - n - 1) for b in phi.target]
    M = phi.field.zeros((sum(len(r) for r in row_idx), sum(len(c) for c in col_bases)))
    r0 = 0
    for i, row in enumerate(phi.entries):
        c0 = 0
        for j, f in enumerate(row):
            for col, beta in enumerate(col_bases[j]):
                for gamma, c in f.terms:
                    diff = tuple(x - y for x, y in zip(beta, gamma))
                    if min(diff) >= 0:
                        M[r0 + row_idx[i][diff], c0 + col] = c
            c0 += len(col_bases[j])
        r0 += len(row_idx[i])
    return M


def h_top_direct(m: Monad, d: int) -> tuple[int, int]:
    """(h^{n-1}, h^n) of E(d) from H^n(K^-1) -> H^n(K^0) -> H^n(K^1)."""
    _require(m)
    Bn = top_cohomology_matrix(m.dminus, d)
    An = top_cohomology_matrix(m.dzero, d)
    rb = _rank(m, Bn)
    h_nm1 = Bn.shape[1] - rb
    h_n = (An.shape[1] - _rank(m, An)) - rb
    return h_nm1, h_n


def h_top_dual(m: Monad, d: int) -> tuple[int, int]:
    _require(m)
    md = dual_of(m)
    e = -d - m.n - 1
    return h1_piece(md, e), h0_piece(md, e)


def h_top_pieces(m: Monad, d: int, self_check: bool = False) -> tuple[int, int]:
    """(h^{n-1}(E(d)), h^n(E(d))); with ``self_check`` both paths must agree."""
    via_dual = h_top_dual(m, d)
    if self_check:
        direct = h_top_direct(m, d)
        if direct != via_dual:
            raise InternalConsistencyError(
                f"duality paths disagree at d={d}: direct {direct} vs dual {via_dual}"
            )
    return via_dual


def line_bundle_h(i: int, a: int, n: int) -> int:
    """h^i(O(a)) on P^n."""
    if i == 0:
        return comb(a + n, n) if a >= 0 else 0
    if i == n:
        return comb(-a - 1, n) if a <= -n - 1 else 0
    return 0


def twist_sum_h(i: int, twists, d: int, n: int) -> int:
    return sum(line_bundle_h(i, a + d, n) for a in twists)


def intermediate_piece(m: Monad, d: int, i: int) -> int:
    """h^i(E(d)) for 1 < i < n-1.

    Bounded through the display by h^{i-1}(K^1(d)) + h^i(K^0(d)) +
    h^{i+1}(K^-1(d)), which the line-bundle values make zero.
    """
    _require(m)
    if not 1 < i < m.n - 1:
        raise ValueError(f"i={i} is not in the intermediate range for n={m.n}")
    bound = (
        twist_sum_h(i - 1, m.kplus, d, m.n)
        + twist_sum_h(i, m.kzero, d, m.n)
        + twist_sum_h(i + 1, m.kminus, d, m.n)
    )
    if bound:
        raise InternalConsistencyError(f"intermediate bound {bound} at (i={i}, d={d})")
    return 0


# ---------------------------------------------------------------------------
# Euler characteristic


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def binomial_poly(a: int, n: int) -> list[Fraction]:
    """Coefficients (ascending in d) of C(d + a + n, n) as a polynomial."""
    out = [Fraction(1)]
    for k in range(1, n + 1):
        out = _poly_mul(out, [Fraction(a + k), Fraction(1)])
    return [c / factorial(n) for c in out]


@dataclass(frozen=True)
class EulerPolynomial:
    coeffs: tuple  # ascending powers of d, Fractions

    def __call__(self, d: int) -> int:
        val = sum(c * Fraction(d) ** k for k, c in enumerate(self.coeffs))
        if val.denominator != 1:
            raise InternalConsistencyError("Euler characteristic is not integral")
        return int(val)

    @property
    def degree(self) -> int:
        nz = [k for k, c in enumerate(self.coeffs) if c]
        return max(nz) if nz else -1

    def __str__(self):
        terms = [f"{c}*d^{k}" for k, c in reversed(list(enumerate(self.coeffs))) if c]
        return " + ".join(terms) or "0"


def euler_poly(m: Monad) -> EulerPolynomial:
    n = m.n
    acc = [Fraction(0)] * (n + 1)
    for sign, ts in ((1, m.kzero), (-1, m.kminus), (-1, m.kplus)):
        for a in ts:
            for k, c in enumerate(binomial_poly(a, n)):
                acc[k] += sign * c
    return EulerPolynomial(tuple(acc))


# ---------------------------------------------------------------------------
# supports and tables


def _sweep_cap(m: Monad) -> int:
    tw = m.kminus.twists + m.kzero.twists + m.kplus.twists
    return 8 * (m.n + 1) + (max(tw) - min(tw) if tw else 0) + 8


def h1_support(m: Monad) -> dict[int, int]:
    """Nonzero values of h^1(E(d)); zero outside the returned keys."""
    _require(m)
    if not len(m.kplus):
        return {}
    lo, g = -max(m.kplus.twists), -min(m.kplus.twists)
    out = {}
    d = lo
    while True:
        h = h1_piece(m, d)
        if h:
            out[d] = h
        elif d >= g:
            return out
        d += 1
        if d > g + _sweep_cap(m):
            raise MonadError(f"H^1 sweep cap exceeded at d={d}; is the monad valid?")


def hn1_support(m: Monad) -> dict[int, int]:
    """Nonzero values of h^{n-1}(E(d)), through the dual monad."""
    sup = h1_support(dual_of(m))
    return {-e - m.n - 1: h for e, h in sorted(sup.items(), reverse=True)}


def default_window(m: Monad) -> tuple[int, int]:
    n = m.n
    pts = list(h1_support(m)) + list(hn1_support(m))
    if len(m.kzero):
        pts += [-max(m.kzero.twists), -min(m.kzero.twists) - n - 1]
    else:
        pts += [0]
    return min(pts) - 1, max(pts) + 1


@dataclass(frozen=True)
class CohomologyTable:
    """h^i(E(d)) for i = 0..n and d in [lo, hi].

    Outside the window, rows 1..n-1 vanish, h^0 equals χ above the window and
    h^n equals (-1)^n χ below it.
    """

    n: int
    lo: int
    hi: int
    rows: tuple  # rows[i][d - lo]
    chi: EulerPolynomial
    provenance: tuple = ()

    @property
    def degrees(self) -> range:
        return range(self.lo, self.hi + 1)

    def __getitem__(self, key) -> int:
        i, d = key
        return self.value(i, d)

    def value(self, i: int, d: int) -> int:
        if not 0 <= i <= self.n:
            raise IndexError(i)
        if self.lo <= d <= self.hi:
            return self.rows[i][d - self.lo]
        if 0 < i < self.n:
            return 0
        if d > self.hi:
            return self.chi(d) if i == 0 else 0
        return (-1) ** self.n * self.chi(d) if i == self.n else 0

    def row(self, i: int) -> dict[int, int]:
        return {d: self.rows[i][d - self.lo] for d in self.degrees}

    def with_window(self, lo: int, hi: int) -> "CohomologyTable":
        rows = tuple(tuple(self.value(i, d) for d in range(lo, hi + 1)) for i in range(self.n + 1))
        return CohomologyTable(self.n, lo, hi, rows, self.chi, self.provenance)

    def __add__(self, other: "CohomologyTable") -> "CohomologyTable":
        if self.n != other.n:
            raise ValueError("tables on different spaces")
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        a, b = self.with_window(lo, hi), other.with_window(lo, hi)
        rows = tuple(
            tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a.rows, b.rows)
        )
        chi = EulerPolynomial(tuple(x + y for x, y in zip(self.chi.coeffs, other.chi.coeffs)))
        return CohomologyTable(self.n, lo, hi, rows, chi, self.provenance)

    def equal_on(self, other: "CohomologyTable", degrees) -> tuple | None:
        """First cell (i, d) where the tables differ, or None."""
        for d in degrees:
            for i in range(self.n + 1):
                if self.value(i, d) != other.value(i, d):
                    return (i, d)
        return None

    def same_values(self, other: "CohomologyTable") -> bool:
        lo, hi = min(self.lo, other.lo), max(self.hi, other.hi)
        return self.n == other.n and self.equal_on(other, range(lo, hi + 1)) is None

    def support(self, i: int) -> dict[int, int]:
        return {d: v for d, v in self.row(i).items() if v}


def _column(m: Monad, d: int, self_check: bool) -> tuple:
    n = m.n
    col = [0] * (n + 1)
    col[0] = h0_piece(m, d)
    col[1] = h1_piece(m, d)
    for i in range(2, n - 1):
        col[i] = intermediate_piece(m, d, i)
    col[n - 1], col[n] = h_top_pieces(m, d, self_check)
    return tuple(col)


def table(
    m: Monad,
    window: tuple[int, int] | None = None,
    jobs: int = 1,
    self_check: bool = False,
) -> CohomologyTable:
    """Full cohomology table; every column is checked against χ."""
    _require(m)
    lo, hi = window if window is not None else default_window(m)
    if lo > hi:
        raise ValueError("empty window")
    degrees = list(range(lo, hi + 1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            cols = list(pool.map(lambda d: _column(m, d, self_check), degrees))
    else:
        cols = [_column(m, d, self_check) for d in degrees]
    chi = euler_poly(m)
    for d, col in zip(degrees, cols):
        alt = sum((-1) ** i * h for i, h in enumerate(col))
        if alt != chi(d):
            raise InternalConsistencyError(f"χ mismatch at d={d}: {alt} != {chi(d)}")
    rows = tuple(tuple(col[i] for col in cols) for i in range(m.n + 1))
    prov = tuple(
        "direct" if i in (0, 1) else ("via-duality" if i >= m.n - 1 else "bott-bound")
        for i in range(m.n + 1)
    )
    return CohomologyTable(m.n, lo, hi, rows, chi, prov)


def line_bundle_table(twists, n: int, window: tuple[int, int]) -> CohomologyTable:
    """Table of ⊕ O(a) straight from the binomial section counts."""
    lo, hi = window
    rows = tuple(
        tuple(twist_sum_h(i, twists, d, n) for d in range(lo, hi + 1)) for i in range(n + 1)
    )
    acc = [Fraction(0)] * (n + 1)
    for a in twists:
        for k, c in enumerate(binomial_poly(a, n)):
            acc[k] += c
    return CohomologyTable(n, lo, hi, rows, EulerPolynomial(tuple(acc)))


# ---------------------------------------------------------------------------
# the module H^1_*(E)


def _block_mult(m: Monad, k: int, d: int) -> np.ndarray:
    """X_k: ⊕ S_{d+b} -> ⊕ S_{d+1+b} over the twists b of K^1."""
    v = m.num_vars
    xk = HomogeneousForm.variable(m.field, v, k)
    blocks = [mult_map_matrix(xk, d + b) for b in m.kplus]
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = m.field.zeros((rows, cols))
    r0 = c0 = 0
    for b in blocks:
        out[r0 : r0 + b.shape[0], c0 : c0 + b.shape[1]] = b
        r0 += b.shape[0]
        c0 += b.shape[1]
    return out


@dataclass(frozen=True)
class GradedModule:
    """Finite-length graded module with explicit pieces and X_k actions.

    ``actions[(k, d)]`` is the matrix of X_k from piece d-1 to piece d.
    """

    num_vars: int
    dims: dict
    actions: dict

    @property
    def support(self) -> list[int]:
        return sorted(d for d, h in self.dims.items() if h)

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def generators(self, field) -> dict[int, int]:
        out = {}
        for d in sorted(self.dims):
            h = self.dims[d]
            if not h:
                continue
            mats = [self.actions[(k, d)] for k in range(self.num_vars) if (k, d) in self.actions]
            mats = [a for a in mats if a.size]
            r = linalg.rank(field, np.hstack(mats)) if mats else 0
            if h - r:
                out[d] = h - r
        return out


def h1_module(m: Monad) -> GradedModule:
    _require(m)
    f = m.field
    sup = h1_support(m)
    if not sup:
        return GradedModule(m.num_vars, {}, {})
    lo, hi = min(sup), max(sup)
    spaces = {}
    for d in range(lo - 1, hi + 1):
        spaces[d] = h1_quotient(m, d)
    dims = {d: spaces[d].codim for d in range(lo, hi + 1)}
    actions = {}
    for d in range(lo, hi + 1):
        Q = spaces[d].quotient_map()
        S = spaces[d - 1].section()
        for k in range(m.num_vars):
            if Q.shape[0] and S.shape[1]:
                actions[(k, d)] = linalg.matmul(f, linalg.matmul(f, Q, _block_mult(m, k, d - 1)), S)
            else:
                actions[(k, d)] = f.zeros((Q.shape[0], S.shape[1]))
    return GradedModule(m.num_vars, dims, actions)


def mu(m: Monad) -> dict[int, int]:
    """Minimal generator counts of H^1_*(E) by degree (nonzero entries only)."""
    return h1_module(m).generators(m.field)


def mu_direct(m: Monad) -> dict[int, int]:
    """μ_d = dim V_d - dim(im H^0(d^0(d)) + Σ_k X_k V_{d-1}), V = H^0_*(K^1)."""
    out = {}
    for d in h1_support(m):
        A = m.dzero.sections_matrix(d)
        mats = [A] + [_block_mult(m, k, d - 1) for k in range(m.num_vars)]
        mats = [x for x in mats if x.shape[1]]
        r = linalg.rank(m.field, np.hstack(mats)) if mats else 0
        if A.shape[0] - r:
            out[d] = A.shape[0] - r
    return out


def mu_dual(m: Monad) -> dict[int, int]:
    return mu(dual_of(m))


def h2_value(m: Monad, j: int) -> int:
    """h^2(E(j)); intermediate (zero) for n >= 4, h^{n-1} for n = 3."""
    _require(m)
    if m.n >= 4:
        return intermediate_piece(m, j, 2)
    return h_top_dual(m, j)[0]


def h2_support(m: Monad) -> dict[int, int]:
    if m.n >= 4:
        return {}
    return hn1_support(m)


# ---------------------------------------------------------------------------
# splitting


@dataclass(frozen=True)
class SplitType:
    """``split`` with the twist multiset, or ``not_split`` with a witness (i, d)."""

    split: bool
    twists: tuple = ()
    witness: tuple | None = None

    def __str__(self):
        if self.split:
            return "Split(" + ", ".join(str(a) for a in self.twists) + ")"
        i, d = self.witness
        return f"NotSplit(h^{i}(E({d})) != 0)"


def split_check(m: Monad) -> SplitType:
    """Horrocks: E splits iff H^1_* = H^{n-1}_* = 0; then read twists off h^0."""
    _require(m)
    s1 = h1_support(m)
    if s1:
        return SplitType(False, witness=(1, min(s1)))
    sn = hn1_support(m)
    if sn:
        return SplitType(False, witness=(m.n - 1, min(sn)))
    if m.rank == 0:
        return SplitType(True, ())
    # every summand O(a) has min(K^0) <= a <= max(K^0)
    top, bottom = max(m.kzero.twists), min(m.kzero.twists)
    degrees = range(-top, -bottom + 1)
    residual = {d: h0_piece(m, d) for d in degrees}
    found = []
    while any(residual.values()):
        d0 = min(d for d, h in residual.items() if h)
        a = -d0
        found.append(a)
        for d in degrees:
            residual[d] -= line_bundle_h(0, a + d, m.n)
            if residual[d] < 0:
                raise InternalConsistencyError(f"negative residual h^0 at d={d}")
        if len(found) > m.rank:
            raise InternalConsistencyError("more summands than the rank")
    if len(found) != m.rank:
        raise InternalConsistencyError(f"recovered {len(found)} summands for rank {m.rank}")
    return SplitType(True, tuple(sorted(found, reverse=True)))


def h1_quotient(m: Monad, d: int) -> linalg.Subspace:
    """im H^0(d^0(d)) inside H^0(K^1(d)); its quotient is H^1(E(d))."""
    A = m.dzero.sections_matrix(d)
    return linalg.Subspace(m.field, A, A.shape[0])
