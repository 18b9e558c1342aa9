"""Twist sums, graded maps between them, and free monads on P^n.

A map ``⊕_j O(a_j) -> ⊕_i O(b_i)`` has entry (i, j) homogeneous of degree
``b_i - a_j``. A monad ``K^-1 -> K^0 -> K^1`` is stored with all three twist
lists sorted non-increasingly; :meth:`Monad.assemble` permutes rows and
columns into that order (stably), so equal monads compare equal.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property
from itertools import product

import numpy as np

from . import linalg
from .errors import InternalConsistencyError, MonadError
from .field import FieldSpec
from .poly import HomogeneousForm, mult_map_matrix, monomial_basis


@dataclass(frozen=True)
class TwistSum:
    """The split bundle ⊕ O(a_j), kept sorted non-increasingly."""

    twists: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "twists", tuple(sorted((int(a) for a in self.twists), reverse=True)))

    @property
    def rank(self) -> int:
        return len(self.twists)

    def __len__(self):
        return len(self.twists)

    def __iter__(self):
        return iter(self.twists)

    def shift(self, t: int) -> "TwistSum":
        return TwistSum(tuple(a + t for a in self.twists))

    def dual(self) -> "TwistSum":
        return TwistSum(tuple(-a for a in self.twists))

    def __add__(self, other: "TwistSum") -> "TwistSum":
        return TwistSum(self.twists + other.twists)

    def __mul__(self, k: int) -> "TwistSum":
        return TwistSum(self.twists * k)

    def __str__(self):
        if not self.twists:
            return "0"
        return " + ".join(f"O({a})" for a in self.twists)


def _stable_order(twists) -> list[int]:
    return sorted(range(len(twists)), key=lambda k: -twists[k])


@dataclass(frozen=True)
class GradedMap:
    field: FieldSpec
    n: int
    source: TwistSum
    target: TwistSum
    entries: tuple  # rows (target) of columns (source) of HomogeneousForm

    def __post_init__(self):
        if len(self.entries) != len(self.target):
            raise MonadError("entry matrix has wrong number of rows")
        for i, row in enumerate(self.entries):
            if len(row) != len(self.source):
                raise MonadError("entry matrix has wrong number of columns")
            for j, f in enumerate(row):
                want = self.target.twists[i] - self.source.twists[j]
                if f.num_vars != self.n + 1 or f.field != self.field:
                    raise MonadError(f"entry ({i},{j}) lives in the wrong ring")
                if f.degree != want and not (f.is_zero() and want < 0):
                    raise MonadError(f"entry degree mismatch at ({i},{j})")
                if want < 0 and not f.is_zero():
                    raise MonadError(f"entry degree mismatch at ({i},{j})")

    @cached_property
    def _sections(self) -> dict:
        return {}

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.target), len(self.source))

    def transpose(self) -> "GradedMap":
        """The dual map, before re-sorting (twists negate, order reverses)."""
        src = self.target.dual()
        tgt = self.source.dual()
        rows, cols = self.shape
        # negating reverses the sorted order, so reverse indices as well
        entries = tuple(
            tuple(self.entries[rows - 1 - j][cols - 1 - i] for j in range(rows))
            for i in range(cols)
        )
        return GradedMap(self.field, self.n, src, tgt, entries)

    def is_zero(self) -> bool:
        return all(f.is_zero() for row in self.entries for f in row)

    def sections_matrix(self, d: int) -> np.ndarray:
        """Matrix of H^0(φ(d)): ⊕_j S_{d+a_j} -> ⊕_i S_{d+b_i}."""
        cache = self._sections
        if d in cache:
            return cache[d]
        v = self.n + 1
        col_sizes = [len(monomial_basis(v, d + a)) for a in self.source]
        row_sizes = [len(monomial_basis(v, d + b)) for b in self.target]
        M = self.field.zeros((sum(row_sizes), sum(col_sizes)))
        r0 = 0
        for i, row in enumerate(self.entries):
            c0 = 0
            for j, f in enumerate(row):
                if row_sizes[i] and col_sizes[j] and not f.is_zero():
                    M[r0 : r0 + row_sizes[i], c0 : c0 + col_sizes[j]] = mult_map_matrix(
                        f, d + self.source.twists[j]
                    )
                c0 += col_sizes[j]
            r0 += row_sizes[i]
        M.setflags(write=False)
        cache[d] = M
        return M

    def evaluate(self, point, mul=None, add=None, zero=0) -> list[list]:
        return [[f.evaluate(point, mul, add, zero) for f in row] for row in self.entries]


@dataclass(frozen=True)
class Monad:
    field: FieldSpec
    n: int
    kminus: TwistSum
    kzero: TwistSum
    kplus: TwistSum
    dminus: GradedMap
    dzero: GradedMap

    def __post_init__(self):
        if self.n < 3:
            raise MonadError(f"projective dimension n={self.n} < 3 is not supported")
        if self.dminus.source != self.kminus or self.dminus.target != self.kzero:
            raise MonadError("d^-1 does not map K^-1 to K^0")
        if self.dzero.source != self.kzero or self.dzero.target != self.kplus:
            raise MonadError("d^0 does not map K^0 to K^1")
        for d in (self.dminus, self.dzero):
            if d.n != self.n or d.field != self.field:
                raise MonadError("differential over the wrong ring")

    @classmethod
    def assemble(cls, field, n, kminus, kzero, kplus, dminus_rows, dzero_rows) -> "Monad":
        """Build a monad from twist lists in any order.

        ``dminus_rows[i][j]`` maps summand j of ``kminus`` to summand i of
        ``kzero``; likewise ``dzero_rows``. Entries may be HomogeneousForm,
        or 0 for the zero form of the forced degree.
        """
        kminus, kzero, kplus = list(kminus), list(kzero), list(kplus)
        om, oz, op = _stable_order(kminus), _stable_order(kzero), _stable_order(kplus)

        def form(x, deg):
            if isinstance(x, HomogeneousForm):
                return x
            if x:
                raise MonadError("scalar entries other than 0 must be given as forms")
            return HomogeneousForm.zero(field, n + 1, deg)

        dm = tuple(
            tuple(form(dminus_rows[i][j], kzero[i] - kminus[j]) for j in om) for i in oz
        )
        dz = tuple(
            tuple(form(dzero_rows[i][j], kplus[i] - kzero[j]) for j in oz) for i in op
        )
        Km, Kz, Kp = TwistSum(kminus), TwistSum(kzero), TwistSum(kplus)
        return cls(
            field, n, Km, Kz, Kp, GradedMap(field, n, Km, Kz, dm), GradedMap(field, n, Kz, Kp, dz)
        )

    @property
    def rank(self) -> int:
        return len(self.kzero) - len(self.kminus) - len(self.kplus)

    @property
    def num_vars(self) -> int:
        return self.n + 1

    def __str__(self):
        return (
            f"monad on P^{self.n} over {self.field}: {self.kminus} -> {self.kzero} -> "
            f"{self.kplus} (rank {self.rank})"
        )


# ---------------------------------------------------------------------------
# the three monad axioms


def compose_check(m: Monad) -> bool:
    """True iff d^0 ∘ d^-1 is the zero matrix of forms."""
    A, B = m.dzero.entries, m.dminus.entries
    for i in range(len(m.kplus)):
        for j in range(len(m.kminus)):
            acc = HomogeneousForm.zero(m.field, m.num_vars, m.kplus.twists[i] - m.kminus.twists[j])
            for k in range(len(m.kzero)):
                p = A[i][k] * B[k][j]
                if not p.is_zero():
                    acc = acc + p
            if not acc.is_zero():
                return False
    return True


@dataclass(frozen=True)
class EpiCheckResult:
    """``verdict`` is "certified", "falsified" or "inconclusive"."""

    verdict: str
    degree: int | None = None
    point: tuple | None = None
    cap: int | None = None

    @property
    def certified(self) -> bool:
        return self.verdict == "certified"

    def __str__(self):
        if self.verdict == "certified":
            return f"Certified(d={self.degree})"
        if self.verdict == "falsified":
            return "FalsifiedAtPoint[" + ":".join(str(x) for x in self.point) + "]"
        return f"Inconclusive(cap={self.cap})"


def default_cap(phi: GradedMap) -> int:
    tw = phi.source.twists + phi.target.twists
    g = -min(phi.target.twists)
    return g + 4 * (phi.n + 1) + (max(tw) - min(tw))


class _GFp2:
    """Elements a + b·t of F_p[t]/(t^2 - alpha - beta·t), a quadratic extension."""

    __slots__ = ("a", "b", "p", "mod")

    def __init__(self, a, b, p, mod):
        self.a, self.b, self.p, self.mod = a % p, b % p, p, mod

    def _lift(self, x):
        return x if isinstance(x, _GFp2) else _GFp2(int(x), 0, self.p, self.mod)

    def __add__(self, o):
        o = self._lift(o)
        return _GFp2(self.a + o.a, self.b + o.b, self.p, self.mod)

    __radd__ = __add__

    def __sub__(self, o):
        o = self._lift(o)
        return _GFp2(self.a - o.a, self.b - o.b, self.p, self.mod)

    def __mul__(self, o):
        o = self._lift(o)
        alpha, beta = self.mod
        bd = self.b * o.b
        return _GFp2(
            self.a * o.a + bd * alpha, self.a * o.b + self.b * o.a + bd * beta, self.p, self.mod
        )

    __rmul__ = __mul__

    def inv(self):
        if not self:
            raise ZeroDivisionError("inverse of zero")
        out, base, e = _GFp2(1, 0, self.p, self.mod), self, self.p * self.p - 2
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __bool__(self):
        return bool(self.a or self.b)


def _irreducible_quadratic(p: int) -> tuple[int, int]:
    """(alpha, beta) with t^2 - beta·t - alpha irreducible over F_p."""
    for beta in range(p):
        for alpha in range(p):
            if all((t * t - beta * t - alpha) % p for t in range(p)):
                return alpha, beta
    raise ValueError(p)


def _nonresidue_modulus(p: int) -> tuple[int, int]:
    for nu in range(2, p):
        if pow(nu, (p - 1) // 2, p) == p - 1:
            return nu, 0
    raise ValueError(p)


def _generic_rank(rows: list[list]) -> int:
    rows = [list(r) for r in rows]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for c in range(ncols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        inv = rows[rank][c].inv()
        for i in range(rank + 1, len(rows)):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[rank])]
        rank += 1
    return rank


def _rank_at(phi: GradedMap, point) -> int:
    f = phi.field
    if point and isinstance(point[0], _GFp2):
        z = _GFp2(0, 0, point[0].p, point[0].mod)
        vals = phi.evaluate(point, zero=z)
        vals = [[v if isinstance(v, _GFp2) else z + v for v in row] for row in vals]
        return _generic_rank(vals) if vals and vals[0] else 0
    vals = phi.evaluate([f(x) for x in point], zero=f.zero())
    if not vals or not vals[0]:
        return 0
    return linalg.rank(f, f.array(vals))


def _projective_points(coords, dim):
    """Points of P^dim with coordinates from ``coords`` (first nonzero = 1)."""
    nonzero = [c for c in coords if c]
    one = nonzero[0] * 0 + 1 if nonzero else 1
    for lead in range(dim + 1):
        for tail in product(coords, repeat=dim - lead):
            yield (0,) * lead + (one,) + tail


def _witness_points(field: FieldSpec, n: int, rng: np.random.Generator):
    small = (0, 1, -1)
    yield from _projective_points(small, n)
    if field.is_prime:
        p = field.p
        count = (p ** (n + 1) - 1) // (p - 1)
        if count <= 10**7:
            yield from _projective_points(tuple(range(p)), n)
        q = p * p
        mod = _irreducible_quadratic(p) if p < 1000 else _nonresidue_modulus(p)
        if (q ** (n + 1) - 1) // (q - 1) <= 10**7:
            elems = tuple(_GFp2(a, b, p, mod) for a in range(p) for b in range(p))
            yield from _projective_points(elems, n)
        else:
            for _ in range(64):
                yield tuple(
                    _GFp2(int(a), int(b), p, mod) for a, b in rng.integers(0, p, size=(n + 1, 2))
                )
        for _ in range(256):
            yield tuple(int(x) for x in rng.integers(0, p, size=n + 1))
    else:
        yield from _projective_points((0, 1, -1, 2, -2), n)
        for _ in range(256):
            yield tuple(int(x) for x in rng.integers(-50, 51, size=n + 1))


def check_sheaf_epi(phi: GradedMap, cap: int | None = None, seed: int = 0) -> EpiCheckResult:
    """Decide whether ``phi`` is surjective as a map of sheaves.

    Sweeps d upward from the top generator degree of the target; a single
    vanishing cokernel piece there certifies surjectivity. Past ``cap`` the
    drop-rank locus is searched for a witness point.
    """
    if len(phi.target) == 0:
        return EpiCheckResult("certified", degree=0)
    g = -min(phi.target.twists)
    if cap is None:
        cap = default_cap(phi)
    rng = np.random.default_rng(seed)
    nrows = len(phi.target)
    if len(phi.source) == 0 or phi.is_zero():
        return EpiCheckResult("falsified", point=(1,) + (0,) * phi.n)
    for d in range(g, cap + 1):
        M = phi.sections_matrix(d)
        if linalg.rank(phi.field, M) == M.shape[0]:
            # cross-check: a certified map must have full rank at random points
            for _ in range(4):
                pt = tuple(int(x) for x in rng.integers(1, 1000, size=phi.n + 1))
                if phi.field.is_prime:
                    pt = tuple(x % phi.field.p for x in pt)
                if _rank_at(phi, pt) < nrows and any(pt):
                    raise InternalConsistencyError(
                        f"certified epimorphism drops rank at {pt}"
                    )
            return EpiCheckResult("certified", degree=d)
    for pt in _witness_points(phi.field, phi.n, rng):
        if _rank_at(phi, pt) < nrows:
            if isinstance(pt[0], _GFp2):
                pt = tuple((x.a, x.b) for x in pt)
            else:
                pt = tuple(phi.field(x) for x in pt)
            return EpiCheckResult("falsified", point=pt, cap=cap)
    return EpiCheckResult("inconclusive", cap=cap)


def check_locally_split_mono(phi: GradedMap, cap: int | None = None, seed: int = 0) -> EpiCheckResult:
    """A bundle map is a locally split monomorphism iff its dual is onto."""
    if len(phi.source) == 0:
        return EpiCheckResult("certified", degree=0)
    return check_sheaf_epi(phi.transpose(), cap, seed)


@dataclass(frozen=True)
class Validation:
    """``status`` is "valid", "invalid" or "inconclusive"."""

    status: str
    reason: str = ""
    checks: dict = dc_field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    def __str__(self):
        return self.status.capitalize() + (f"({self.reason})" if self.reason else "")


def validate(m: Monad, cap: int | None = None) -> Validation:
    if not compose_check(m):
        return Validation("invalid", "complex condition: d^0 d^-1 != 0")
    if m.rank < 0:
        return Validation("invalid", f"negative rank {m.rank}")
    mono = check_locally_split_mono(m.dminus, cap)
    if mono.verdict == "falsified":
        return Validation("invalid", f"d^-1 not locally split mono: {mono}", {"dminus": mono})
    epi = check_sheaf_epi(m.dzero, cap)
    checks = {"dminus": mono, "dzero": epi}
    if epi.verdict == "falsified":
        return Validation("invalid", f"d^0 not an epimorphism: {epi}", checks)
    if mono.verdict == "inconclusive":
        return Validation("inconclusive", "locally split mono check", checks)
    if epi.verdict == "inconclusive":
        return Validation("inconclusive", "epimorphism check", checks)
    return Validation("valid", "", checks)


# ---------------------------------------------------------------------------
# constructions


def _rows(phi: GradedMap) -> list[list]:
    return [list(r) for r in phi.entries]


def dual(m: Monad) -> Monad:
    """Monad whose cohomology is E^*: K^1^* -> K^0^* -> K^-1^*."""
    dm = m.dzero.transpose()  # K^1^* -> K^0^*
    dz = m.dminus.transpose()  # K^0^* -> K^-1^*
    return Monad.assemble(
        m.field, m.n, dm.source.twists, dm.target.twists, dz.target.twists,
        _rows(dm), _rows(dz),
    )


def twist(m: Monad, t: int) -> Monad:
    return Monad.assemble(
        m.field, m.n, m.kminus.shift(t).twists, m.kzero.shift(t).twists, m.kplus.shift(t).twists,
        _rows(m.dminus), _rows(m.dzero),
    )


def _block_diag(field, n, A: GradedMap, B: GradedMap) -> list[list]:
    nv = n + 1
    rows = []
    for i, row in enumerate(A.entries):
        rows.append(list(row) + [
            HomogeneousForm.zero(field, nv, A.target.twists[i] - b) for b in B.source
        ])
    for i, row in enumerate(B.entries):
        rows.append([
            HomogeneousForm.zero(field, nv, B.target.twists[i] - a) for a in A.source
        ] + list(row))
    return rows


def direct_sum(m1: Monad, m2: Monad) -> Monad:
    if m1.n != m2.n or m1.field != m2.field:
        raise MonadError("direct sum of monads over different spaces or fields")
    return Monad.assemble(
        m1.field, m1.n,
        m1.kminus.twists + m2.kminus.twists,
        m1.kzero.twists + m2.kzero.twists,
        m1.kplus.twists + m2.kplus.twists,
        _block_diag(m1.field, m1.n, m1.dminus, m2.dminus),
        _block_diag(m1.field, m1.n, m1.dzero, m2.dzero),
    )


def substitute_linear(m: Monad, g) -> Monad:
    """Apply X_i -> Σ_j g[i][j] X_j to every entry."""
    f = m.field
    G = f.array(g)
    if G.shape != (m.n + 1, m.n + 1) or linalg.rank(f, G) != m.n + 1:
        raise MonadError("substitution matrix must be invertible of size n+1")
    images = [HomogeneousForm.linear(f, list(G[i])) for i in range(m.n + 1)]

    def sub(phi):
        return [[e.substitute(images) if not e.is_zero() else e for e in row] for row in phi.entries]

    return Monad.assemble(
        f, m.n, m.kminus.twists, m.kzero.twists, m.kplus.twists, sub(m.dminus), sub(m.dzero)
    )


# ---------------------------------------------------------------------------
# built-in corpus


def euler(n: int, field: FieldSpec | None = None) -> Monad:
    """Ω^1 on P^n as ker(O(-1)^{n+1} -> O)."""
    field = field or FieldSpec.prime()
    X = [HomogeneousForm.variable(field, n + 1, k) for k in range(n + 1)]
    return Monad.assemble(field, n, [], [-1] * (n + 1), [0], [[] for _ in range(n + 1)], [X])


def tangent(n: int, field: FieldSpec | None = None) -> Monad:
    return dual(euler(n, field))


def nullcorr(n: int = 3, field: FieldSpec | None = None) -> Monad:
    """Null correlation bundle: O(-1) -> O^{n+1} -> O(1), n odd."""
    if n % 2 == 0:
        raise MonadError("null correlation bundles need odd n")
    field = field or FieldSpec.prime()
    X = [HomogeneousForm.variable(field, n + 1, k) for k in range(n + 1)]
    b = []
    for k in range(0, n + 1, 2):
        b += [-X[k + 1], X[k]]
    return Monad.assemble(field, n, [-1], [0] * (n + 1), [1], [[x] for x in X], [b])


def linesum(twists, n: int, field: FieldSpec | None = None) -> Monad:
    field = field or FieldSpec.prime()
    return Monad.assemble(field, n, [], list(twists), [], [[] for _ in twists], [])


def powers(n: int, k: int = 2, field: FieldSpec | None = None) -> Monad:
    """ker(O(-k)^{n+1} -> O) given by X_0^k, ..., X_n^k."""
    field = field or FieldSpec.prime()
    X = [HomogeneousForm.variable(field, n + 1, i) ** k for i in range(n + 1)]
    return Monad.assemble(field, n, [], [-k] * (n + 1), [0], [[] for _ in range(n + 1)], [X])


BUILTINS = ("euler", "tangent", "nullcorr", "linesum", "powers")


def builtin(name: str, n: int, field: FieldSpec | None = None, twists=None, k: int = 2) -> Monad:
    if name == "euler":
        return euler(n, field)
    if name == "tangent":
        return tangent(n, field)
    if name == "nullcorr":
        return nullcorr(n, field)
    if name == "linesum":
        return linesum(twists if twists is not None else [0], n, field)
    if name == "powers":
        return powers(n, k, field)
    raise MonadError(f"unknown builtin {name!r}; choose from {', '.join(BUILTINS)}")


PROFILES = {
    # max direct summands, twist range, chance of an extend/restrict round trip
    "small": (2, 2, 0.35),
    "tiny": (1, 1, 0.25),
}


def random_monad(seed: int, n: int, profile: str = "small", field: FieldSpec | None = None) -> Monad:
    """A valid monad on P^n built from the corpus by closure operations."""
    from .extension import extend_once, restrict_hyperplane

    if profile not in PROFILES:
        raise MonadError(f"unknown profile {profile!r}")
    if n < 3:
        raise MonadError("n must be at least 3")
    field = field or FieldSpec.prime()
    max_parts, trange, p_round = PROFILES[profile]
    rng = np.random.default_rng([seed, n])

    def seed_monad():
        choices = ["euler", "tangent", "linesum", "nullcorr"]
        if n <= 4:
            choices.append("powers")
        kind = choices[int(rng.integers(len(choices)))]
        if kind == "linesum":
            r = int(rng.integers(1, 4))
            return linesum([int(a) for a in rng.integers(-2, 3, size=r)], n, field)
        if kind == "nullcorr":
            if n % 2:
                return nullcorr(n, field)
            return extend_once(nullcorr(n - 1, field))
        return builtin(kind, n, field)

    parts = [twist(seed_monad(), int(rng.integers(-trange, trange + 1)))
             for _ in range(int(rng.integers(1, max_parts + 1)))]
    m = parts[0]
    for other in parts[1:]:
        m = direct_sum(m, other)
    if rng.random() < 0.5:
        m = dual(m)
    if rng.random() < p_round:
        m = restrict_hyperplane(extend_once(m))
    while True:
        g = rng.integers(-2, 3, size=(n + 1, n + 1))
        if linalg.rank(field, field.array(g.tolist())) == n + 1:
            break
    m = substitute_linear(m, g.tolist())
    v = validate(m)
    if not v.valid:
        raise InternalConsistencyError(f"random monad failed validation: {v}")
    return m
