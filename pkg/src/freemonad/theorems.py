"""Vanishing conditions, splitting statements and the effective extension
bound, evaluated on monads and on the extensions built from them."""
from __future__ import annotations

from dataclasses import dataclass

from .cohomology import (
    CohomologyTable,
    default_window,
    dual_of,
    h1_support,
    h2_support,
    hn1_support,
    intermediate_piece,
    mu,
    split_check,
    table,
)
from .errors import MonadError
from .extension import extend_once, restrict_hyperplane, restriction_map_h1
from .monad import Monad


def condition_i(m: Monad, tab: CohomologyTable | None = None) -> bool:
    """H^i_*(E) = 0 for 1 < i < n-1, read off a freshly computed table.

    Passing ``tab`` checks that table instead (used to feed in corrupted data).
    """
    tab = tab if tab is not None else table(m)
    return all(not any(tab.rows[i]) for i in range(2, tab.n - 1))


def vanishes(m: Monad, i: int) -> bool:
    """Whether the whole graded module H^i_*(E) is zero, for 0 < i < n."""
    if not 0 < i < m.n:
        raise ValueError(f"H^{i}_* is not of finite length on P^{m.n}")
    if i == 1:
        return not h1_support(m)
    if i == m.n - 1:
        return not hn1_support(m)
    lo, hi = default_window(m)
    return all(intermediate_piece(m, d, i) == 0 for d in range(lo, hi + 1))


@dataclass(frozen=True)
class BoundReport:
    n: int
    r: int
    sum1: int
    sum2: int
    floor1: int
    floor2: int
    m_star: int
    applicability: str
    mu: dict
    mu_star: dict
    h2: dict
    h2_star: dict

    @property
    def theorem_applies(self) -> bool:
        return self.applicability == "theorem_applies"

    def summary(self) -> str:
        return (
            f"n = {self.n}, r = {self.r}\n"
            f"mu = {self.mu}\nmu* = {self.mu_star}\n"
            f"h2(E(j)) = {self.h2}\nh2(E*(j)) = {self.h2_star}\n"
            f"sum1 = {self.sum1}\nsum2 = {self.sum2}\n"
            f"n-4 = {self.floor1}\nr-n+1 = {self.floor2}\n"
            f"m_star = {self.m_star}\n"
            f"applicability = {self.applicability}\n"
            + (
                f"a bundle with these invariants that extends to P^(n+m) splits once m >= {self.m_star + 1}\n"
                if self.theorem_applies
                else "n = 3: formula evaluated only; the splitting statement needs n >= 4\n"
            )
        )


def _pair_sum(gens: dict, h2: dict) -> int:
    return sum(g * h for i, g in gens.items() for j, h in h2.items() if i > j)


def theorem7_bound(m: Monad) -> BoundReport:
    if m.n < 3:
        raise MonadError("the bound needs n >= 3")
    md = dual_of(m)
    gens, gens_star = mu(m), mu(md)
    h2, h2_star = h2_support(m), h2_support(md)
    sum1, sum2 = _pair_sum(gens, h2), _pair_sum(gens_star, h2_star)
    f1, f2 = m.n - 4, m.rank - m.n + 1
    return BoundReport(
        n=m.n,
        r=m.rank,
        sum1=sum1,
        sum2=sum2,
        floor1=f1,
        floor2=f2,
        m_star=max(sum1, sum2, f1, f2),
        applicability="theorem_applies" if m.n >= 4 else "formula_only",
        mu=gens,
        mu_star=gens_star,
        h2=h2,
        h2_star=h2_star,
    )


def lemma2_check(E: Monad, i: int) -> bool:
    """H^i_*(E) = 0  <=>  H^i_*(F) = 0 and H^{i+1}_*(F) = 0, F = extend_once(E)."""
    if not 1 <= i <= E.n - 1:
        raise ValueError("i must lie in 1..n-1")
    F = extend_once(E)
    lhs = vanishes(E, i)
    # F restricts to E ⊕ A and A has no intermediate cohomology
    if vanishes(restrict_hyperplane(F), i) != lhs:
        return False
    rhs = vanishes(F, i) and vanishes(F, i + 1)
    return lhs == rhs


def lemma3_check(E: Monad) -> bool:
    """H^1_*(F) -> H^1_*(E ⊕ A) onto  <=>  H^2_*(F) = 0."""
    F = extend_once(E)
    return restriction_map_h1(F).surjective == vanishes(F, 2)


def vanishing_chain_check(E: Monad, steps: int) -> bool:
    """H^i_*(F_k) = 0 for 2 <= i <= n+k-2 along the tower of extensions."""
    if E.n < 4:
        raise MonadError("the vanishing chain needs n >= 4")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    F = E
    for k in range(1, steps + 1):
        F = extend_once(F)
        tab = table(F)  # cellwise χ identity guards the vanishing rows
        for i in range(2, E.n + k - 1):
            if not vanishes(F, i) or any(tab.rows[i]):
                return False
    return True


def theorem0_check(E: Monad) -> bool:
    """H^1_*(E) = H^1_*(E^*) = 0 forces E to split."""
    if h1_support(E) or hn1_support(E):
        return True
    return split_check(E).split
