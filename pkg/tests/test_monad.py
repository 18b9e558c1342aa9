import numpy as np
import pytest

from freemonad.cohomology import h0_piece, table
from freemonad.errors import MonadError
from freemonad.field import FieldSpec
from freemonad.monad import (
    GradedMap,
    Monad,
    TwistSum,
    builtin,
    check_locally_split_mono,
    check_sheaf_epi,
    compose_check,
    direct_sum,
    dual,
    euler,
    linesum,
    nullcorr,
    powers,
    random_monad,
    substitute_linear,
    twist,
    validate,
)
from freemonad.poly import HomogeneousForm


def _X(F, v):
    return [HomogeneousForm.variable(F, v, k) for k in range(v)]


def _map(F, n, src, tgt, rows):
    m = Monad.assemble(F, n, [], list(src), list(tgt), [[] for _ in src], rows)
    return m.dzero


def _bad_nullcorr(F):
    X = _X(F, 4)
    b = [X[1], X[0], X[3], X[2]]
    return Monad.assemble(F, 3, [-1], [0] * 4, [1], [[x] for x in X], [b])


def test_twist_sum_canonical():
    t = TwistSum((0, 2, -1, 2))
    assert t.twists == (2, 2, 0, -1)
    assert t.rank == 4
    assert t.dual().twists == (1, 0, -2, -2)
    assert TwistSum().rank == 0


def test_compose_check_examples(F):
    assert compose_check(euler(3))
    assert compose_check(nullcorr())
    assert not compose_check(_bad_nullcorr(F))


def test_graded_map_rejects_wrong_degree(F):
    X = _X(F, 4)
    with pytest.raises(MonadError, match="degree mismatch"):
        Monad.assemble(F, 3, [], [0] * 4, [0], [[] for _ in range(4)], [X])


def test_epi_examples(F):
    X = _X(F, 4)
    # the degree-0 cokernel is H^1(Ω^1) = k; at d = 1 it is S_1 / <X_i> = 0
    res = check_sheaf_epi(euler(3).dzero)
    assert res.certified and res.degree == 1

    zero = _map(F, 3, [0], [1], [[HomogeneousForm.zero(F, 4, 1)]])
    assert check_sheaf_epi(zero).verdict == "falsified"

    three = _map(F, 3, [-1] * 3, [0], [X[:3]])
    res = check_sheaf_epi(three)
    assert res.verdict == "falsified" and res.point == (0, 0, 0, 1)


def test_mono_examples(F):
    X = _X(F, 4)
    empty = Monad.assemble(F, 3, [], [0], [], [[]], []).dminus
    assert check_locally_split_mono(empty).certified

    a = Monad.assemble(F, 3, [-1], [0] * 4, [], [[x] for x in X], []).dminus
    assert check_locally_split_mono(a).certified

    z = HomogeneousForm.zero(F, 4, 1)
    b = Monad.assemble(F, 3, [-1], [0] * 4, [], [[X[0]], [X[1]], [z], [z]], []).dminus
    res = check_locally_split_mono(b)
    assert res.verdict == "falsified" and res.point == (0, 0, 1, 0)


def test_epi_certificate_is_sound_on_points(F):
    # certified maps never drop rank at the coordinate points
    phi = nullcorr().dzero
    assert check_sheaf_epi(phi).certified
    for k in range(4):
        pt = [0] * 4
        pt[k] = 1
        vals = phi.evaluate(pt)
        assert any(v for v in vals[0])


def test_epi_small_prime_exhaustive():
    F = FieldSpec.prime(2)
    X = _X(F, 4)
    # q = X0^2 + X0X1 + X1^2 has no zero on P^1(F_2); (q, X2, X3) drops
    # rank only at the F_4 points [1:w:0:0]
    q = X[0] * X[0] + X[0] * X[1] + X[1] * X[1]
    phi = _map(F, 3, [-2, -1, -1], [0], [[q, X[2], X[3]]])
    res = check_sheaf_epi(phi, cap=2)
    assert res.verdict == "falsified"
    # the witness lives over the quadratic extension: coordinates are pairs
    assert isinstance(res.point[0], tuple)


def test_validate_examples(F):
    assert validate(euler(3)).valid
    assert validate(nullcorr()).valid
    v = validate(_bad_nullcorr(F))
    assert v.status == "invalid" and "complex" in v.reason


def test_dual_examples():
    e = euler(3)
    d = dual(e)
    assert d.kminus.twists == (0,)
    assert d.kzero.twists == (1, 1, 1, 1)
    assert d.kplus.twists == ()
    # T(-1) has h^0 = 4 (Euler sequence)
    assert h0_piece(d, -1) == 4
    assert dual(dual(e)) == e
    assert d.rank == e.rank
    nc = nullcorr()
    assert dual(dual(nc)) == nc


@pytest.mark.parametrize("name,n", [("euler", 3), ("nullcorr", 3), ("powers", 3), ("tangent", 4), ("euler", 5)])
def test_constructions_preserve_validity(name, n):
    m = builtin(name, n)
    rng = np.random.default_rng(n)
    assert validate(dual(m)).valid
    assert validate(twist(m, 2)).valid
    g = rng.integers(-2, 3, size=(n + 1, n + 1))
    while np.round(np.linalg.det(g)) == 0:
        g = rng.integers(-2, 3, size=(n + 1, n + 1))
    assert validate(substitute_linear(m, g.tolist())).valid


def test_twist_and_direct_sum():
    m = nullcorr()
    assert twist(m, 0) == m
    s = direct_sum(m, euler(3))
    assert s.rank == m.rank + euler(3).rank
    assert validate(s).valid


def test_substitute_rejects_singular():
    with pytest.raises(MonadError):
        substitute_linear(euler(3), [[1, 0, 0, 0]] * 4)


def test_substitute_keeps_table():
    m = nullcorr()
    g = [[1, 2, 0, 0], [0, 1, 0, 3], [1, 0, 1, 0], [0, 0, 1, 1]]
    assert table(substitute_linear(m, g)).same_values(table(m))


def test_builtins():
    e = builtin("euler", 3)
    assert validate(e).valid and e.rank == 3
    nc = builtin("nullcorr", 3)
    assert validate(nc).valid and nc.rank == 2
    assert builtin("linesum", 4, twists=[1, -1]).rank == 2
    with pytest.raises(MonadError):
        builtin("nope", 3)
    with pytest.raises(MonadError):
        nullcorr(4)
    with pytest.raises(MonadError):
        euler(2)


@pytest.mark.parametrize("n", [3, 4, 5])
@pytest.mark.parametrize("seed", range(6))
def test_random_monads_are_valid(n, seed):
    m = random_monad(seed, n)
    assert m.n == n
    assert validate(m).valid
    assert random_monad(seed, n) == m


def test_rank_zero_monad_has_zero_table(F):
    one = HomogeneousForm.constant(F, 4, 1)
    m = Monad.assemble(F, 3, [-1], [-1], [], [[one]], [])
    assert validate(m).valid and m.rank == 0
    t = table(m)
    assert not any(any(r) for r in t.rows)


def test_rational_field_monads():
    QQ = FieldSpec.rational()
    m = nullcorr(3, QQ)
    assert validate(m).valid
    assert table(m).same_values(table(nullcorr()))


def test_dual_euler_shape():
    d = dual(euler(3))
    assert (d.kminus.twists, d.kzero.twists, d.kplus.twists) == ((0,), (1, 1, 1, 1), ())
    assert validate(d).valid
