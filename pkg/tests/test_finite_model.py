import random
from fractions import Fraction

import pytest

from explab.cyclotomic import Cyclo, embed_rational, psi
from explab.finite_model import (
    ExpClass,
    ExpObject,
    FiniteMap,
    FiniteSet,
    canonical_rep,
    classical_ft,
    conv,
    ft,
    kernel_E,
    pairing_table,
    pullback,
    pushforward,
    real_psi,
    shear,
    twist_scale,
    unit_1,
)


def rand_object(base, p, rng):
    return ExpObject(
        base,
        p,
        [
            [embed_rational(Fraction(rng.randint(-3, 3), rng.randint(1, 2)), p) for _ in range(p)]
            for _ in base
        ],
    )


def rand_pullback_junk(base, p, rng):
    """A t-independent table: the class of this is zero."""
    rows = []
    for _ in base:
        c = embed_rational(rng.randint(-3, 3), p)
        rows.append([c] * p)
    return ExpObject(base, p, rows)


def ft_oracle(h, r):
    """Closed formula: (s,y,t) -> (-1)^r sum_x h(s,x,t-m(x,y)).  Independent
    of the pipeline implementation in explab.finite_model.ft."""
    p = h.prime
    q = p**r
    s_count = h.base.size // q
    m = pairing_table(p, r)
    sign = Fraction(-1) ** r
    rows = []
    for s in range(s_count):
        for y in range(q):
            row = []
            for t in range(p):
                acc = Cyclo.zero(p)
                for x in range(q):
                    acc = acc + h.values[s * q + x][(t - m[x][y]) % p]
                row.append(acc.scale(sign))
            rows.append(row)
    return ExpObject(h.base, p, rows)


# -- canonical representatives ------------------------------------------------


def test_canonical_kills_constants():
    X = FiniteSet(2)
    h = ExpObject(X, 3, [[embed_rational(5, 3)] * 3] * 2)
    assert canonical_rep(h) == ExpObject.zeros(X, 3)


def test_canonical_delta_p3():
    X = FiniteSet(2)
    h = pullback(FiniteMap.constant(X, FiniteSet(1), 0), ExpObject.delta(FiniteSet(1), 3, 0, 0))
    expected_row = [
        embed_rational(Fraction(2, 3), 3),
        embed_rational(Fraction(-1, 3), 3),
        embed_rational(Fraction(-1, 3), 3),
    ]
    assert canonical_rep(h) == ExpObject(X, 3, [expected_row, expected_row])


def test_canonical_idempotent():
    rng = random.Random(1)
    h = rand_object(FiniteSet(3), 5, rng)
    c = canonical_rep(h)
    assert canonical_rep(c) == c
    assert h.class_eq(c)


# -- pullback / pushforward ----------------------------------------------------


def test_pullback_identity_and_constant():
    X, Y = FiniteSet(2), FiniteSet(1)
    h = ExpObject.delta(Y, 3, 0, 1)
    assert pullback(FiniteMap.identity(Y), h) == h
    g = pullback(FiniteMap.constant(X, Y, 0), h)
    assert g.values[0] == h.values[0] and g.values[1] == h.values[0]


def test_pushforward_identity_fiber_sum_empty_fiber():
    X, Y = FiniteSet(2), FiniteSet(2)
    h = ExpObject.delta(X, 3, 0, 0) + ExpObject.delta(X, 3, 1, 0)
    assert pushforward(FiniteMap.identity(X), h) == h
    f = FiniteMap(X, Y, (0, 0))
    g = pushforward(f, h)
    assert g.values[0][0] == embed_rational(2, 3)
    assert all(not v for v in g.values[1])


# -- convolution ---------------------------------------------------------------


def test_conv_unit_and_deltas():
    X = FiniteSet(1)
    p = 5
    u = unit_1(X, p)
    h = ExpObject.delta(X, p, 0, 2)
    assert conv(h, u) == h
    assert conv(u, u) == u
    assert conv(ExpObject.delta(X, p, 0, 2), ExpObject.delta(X, p, 0, 4)) == ExpObject.delta(X, p, 0, 1)


def test_conv_spec_example_p3():
    X = FiniteSet(1)
    a = ExpObject.delta(X, 3, 0, 1)
    b = ExpObject.delta(X, 3, 0, 1) + ExpObject.delta(X, 3, 0, 2)
    expected = ExpObject.delta(X, 3, 0, 2) + ExpObject.delta(X, 3, 0, 0)
    assert conv(a, b) == expected


def test_conv_commutative_associative_on_classes():
    rng = random.Random(7)
    X, p = FiniteSet(2), 3
    a, b, c = (rand_object(X, p, rng) for _ in range(3))
    assert conv(a, b) == conv(b, a)
    assert conv(conv(a, b), c) == conv(a, conv(b, c))


# -- kernel and additivity -----------------------------------------------------


def test_kernel_values():
    E = kernel_E(3)
    assert E.values[2][2] == Cyclo.one(3)
    assert not E.values[1][2]


@pytest.mark.parametrize("p", [3, 5, 7])
def test_additivity_slicewise_exhaustive(p):
    # conv(delta_a, delta_b) = delta_{a+b} for every pair of points; this is
    # the per-point content of the additivity identity, since pullbacks of
    # the kernel are slicewise deltas and conv acts slice by slice.
    X = FiniteSet(1)
    for a in range(p):
        for b in range(p):
            lhs = conv(ExpObject.delta(X, p, 0, a), ExpObject.delta(X, p, 0, b))
            assert lhs == ExpObject.delta(X, p, 0, (a + b) % p)


@pytest.mark.parametrize("p,size", [(3, 2), (5, 2), (3, 3)])
def test_additivity_exhaustive_small(p, size):
    X = FiniteSet(size)
    G = FiniteSet(p)
    E = kernel_E(p)
    maps = [
        FiniteMap(X, G, tuple(vals))
        for vals in __import__("itertools").product(range(p), repeat=size)
    ]
    for f in maps:
        pf = pullback(f, E)
        for g in maps:
            fg = FiniteMap(X, G, tuple((f(x) + g(x)) % p for x in X))
            assert conv(pf, pullback(g, E)) == pullback(fg, E)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_kernel_invertible(p):
    G = FiniteSet(p)
    E = kernel_E(p)
    neg = FiniteMap(G, G, tuple((-s) % p for s in range(p)))
    assert conv(E, pullback(neg, E)) == unit_1(G, p)


# -- orthogonality --------------------------------------------------------------


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2)])
def test_orthogonality_counts(p, r):
    q = p**r
    m = pairing_table(p, r)
    counts = ExpObject(
        FiniteSet(q),
        p,
        [
            [embed_rational(sum(1 for x in range(q) if m[x][y] == t), p) for t in range(p)]
            for y in range(q)
        ],
    )
    target = ExpObject.delta(FiniteSet(q), p, 0, 0).scale(q)
    assert counts.class_eq(target)
    # dual route: the same table arises from pushing the pairing-pullback
    # of the kernel down to the dual side, exactly at table level.
    paired = FiniteSet(q * q)
    mmap = FiniteMap(paired, FiniteSet(p), tuple(m[i // q][i % q] for i in range(paired.size)))
    proj_y = FiniteMap(paired, FiniteSet(q), tuple(i % q for i in range(paired.size)))
    pipeline = pushforward(proj_y, pullback(mmap, kernel_E(p)))
    assert pipeline == counts


def test_orthogonality_row_values_p3_r1():
    m = pairing_table(3, 1)
    for y in (1, 2):
        assert [sum(1 for x in range(3) if m[x][y] == t) for t in range(3)] == [1, 1, 1]
    assert [sum(1 for x in range(3) if m[x][0] == t) for t in range(3)] == [3, 0, 0]


# -- shear and Fourier -----------------------------------------------------------


def test_shear_moves_delta():
    # S = point, r = 1, p = 3: base indices are 3*x + y.
    h = ExpObject.delta(FiniteSet(9), 3, 3 * 1 + 1, 0)
    assert shear(h, 1) == ExpObject.delta(FiniteSet(9), 3, 3 * 1 + 1, 1)


def test_shear_inverse_round_trip():
    rng = random.Random(3)
    h = rand_object(FiniteSet(9), 3, rng)
    assert shear(shear(h, 1), 1, inverse=True) == h


def test_shear_is_conv_with_pulled_back_kernel():
    rng = random.Random(5)
    p, r = 3, 1
    q = p**r
    h = rand_object(FiniteSet(q * q), p, rng)
    m = pairing_table(p, r)
    mmap = FiniteMap(h.base, FiniteSet(p), tuple(m[i // q][i % q] for i in range(h.base.size)))
    assert shear(h, r) == conv(h, pullback(mmap, kernel_E(p)))


def test_shear_rejects_bad_base():
    with pytest.raises(ValueError, match="factor"):
        shear(ExpObject.zeros(FiniteSet(5), 3), 1)
    with pytest.raises(ValueError, match="factor"):
        ft(ExpObject.zeros(FiniteSet(5), 3), 2)


def test_ft_delta_spec_example():
    # r=1, p=3, S = point, h = delta_{x=0,t=0}: class of -delta_{t=0},
    # independent of y.
    h = ExpObject.delta(FiniteSet(3), 3, 0, 0)
    expected = ExpObject(
        FiniteSet(3),
        3,
        [[-Cyclo.one(3), Cyclo.zero(3), Cyclo.zero(3)] for _ in range(3)],
    )
    assert ft(h, 1).class_eq(expected)


@pytest.mark.parametrize("p,r", [(3, 1), (5, 1), (3, 2)])
def test_ft_matches_oracle_and_inverts(p, r):
    q = p**r
    base = FiniteSet(q)
    neg_table = []
    for x in range(q):
        digits = [(x // p**i) % p for i in range(r)]
        neg_table.append(sum(((-d) % p) * p**i for i, d in enumerate(digits)))
    neg = FiniteMap(base, base, tuple(neg_table))
    for x0 in range(q):
        for t0 in range(p):
            h = ExpObject.delta(base, p, x0, t0)
            f1 = ft(h, r)
            assert f1 == ft_oracle(h, r)
            f2 = ft(f1, r)
            assert f2.class_eq(pullback(neg, h).scale(p**r))


def test_ft_with_nontrivial_s_factor():
    rng = random.Random(11)
    p, r, s = 3, 1, 2
    h = rand_object(FiniteSet(s * p), p, rng)
    assert ft(h, r) == ft_oracle(h, r)


# -- realizations ----------------------------------------------------------------


@pytest.mark.parametrize("p", [3, 5, 7])
def test_real_psi_of_kernel_is_character(p):
    E = kernel_E(p)
    for lam in range(1, p):
        assert real_psi(E, lam) == tuple(psi(s, lam, p) for s in range(p))


def test_real_psi_of_unit_is_one():
    for p in (3, 5, 7):
        X = FiniteSet(4)
        for lam in range(1, p):
            assert real_psi(unit_1(X, p), lam) == tuple(Cyclo.one(p) for _ in X)


def test_real_psi_rejects_zero_lambda():
    with pytest.raises(ValueError, match="not a realization kernel"):
        real_psi(unit_1(FiniteSet(1), 5), 0)


def test_real_psi_multiplicative_for_conv():
    rng = random.Random(13)
    X, p = FiniteSet(2), 5
    h1, h2 = rand_object(X, p, rng), rand_object(X, p, rng)
    for lam in range(1, p):
        lhs = real_psi(conv(h1, h2), lam)
        r1, r2 = real_psi(h1, lam), real_psi(h2, lam)
        assert lhs == tuple(a * b for a, b in zip(r1, r2))


def test_real_psi_representative_independent():
    rng = random.Random(17)
    X, p = FiniteSet(3), 5
    h = rand_object(X, p, rng)
    junk = rand_pullback_junk(X, p, rng)
    for lam in range(1, p):
        assert real_psi(h, lam) == real_psi(h + junk, lam)


def test_kloosterman_sum_p7():
    # h = pushforward to the point of the kernel pulled back along
    # x -> x + 1/x on invertible x; realization gives the Kloosterman sum.
    p = 7
    units = FiniteSet(p - 1)
    G = FiniteSet(p)
    table = tuple((x + pow(x, p - 2, p)) % p for x in range(1, p))
    f = FiniteMap(units, G, table)
    h = pushforward(FiniteMap.constant(units, FiniteSet(1), 0), pullback(f, kernel_E(p)))
    value = real_psi(h, 1)[0]
    # independent double-loop oracle
    oracle = Cyclo.zero(p)
    for x in range(1, p):
        oracle = oracle + psi((x + pow(x, p - 2, p)) % p, 1, p)
    assert value == oracle
    assert value == Cyclo(7, [-2, 0, -1, -2, -2, -1])


# -- classical Fourier transform and compatibility --------------------------------


def test_classical_ft_delta_and_ones():
    p = 3
    g = [Cyclo.one(p), Cyclo.zero(p), Cyclo.zero(p)]
    assert classical_ft(g, 1, 1) == tuple([-Cyclo.one(p)] * 3)
    ones = [Cyclo.one(p)] * 3
    out = classical_ft(ones, 1, 1)
    assert out == (embed_rational(-3, p), Cyclo.zero(p), Cyclo.zero(p))


@pytest.mark.parametrize("p", [3, 5])
def test_realization_compatibility_exhaustive(p):
    r = 1
    base = FiniteSet(p)
    for lam in range(1, p):
        for x0 in range(p):
            for t0 in range(p):
                h = ExpObject.delta(base, p, x0, t0)
                assert real_psi(ft(h, r), lam) == classical_ft(real_psi(h, lam), lam, r)


# -- base-change and projection shadows --------------------------------------------


def _random_map(rng, X, Y):
    return FiniteMap(X, Y, tuple(rng.randrange(Y.size) for _ in X))


@pytest.mark.parametrize("seed", [0, 1])
def test_proper_base_change_shadow(seed):
    rng = random.Random(seed)
    p = 3
    for _ in range(25):
        X, Y, Z = (FiniteSet(rng.randint(1, 4)) for _ in range(3))
        f = _random_map(rng, X, Z)
        g = _random_map(rng, Y, Z)
        W_elems = [(x, y) for x in X for y in Y if f(x) == g(y)]
        h = rand_object(X, p, rng)
        lhs = pullback(g, pushforward(f, h))
        if not W_elems:
            assert lhs == ExpObject.zeros(Y, p)
            continue
        W = FiniteSet(len(W_elems))
        f_prime = FiniteMap(W, Y, tuple(y for (_x, y) in W_elems))
        g_prime = FiniteMap(W, X, tuple(x for (x, _y) in W_elems))
        rhs = pushforward(f_prime, pullback(g_prime, h))
        assert lhs == rhs


@pytest.mark.parametrize("seed", [0, 1])
def test_projection_formula_shadow(seed):
    rng = random.Random(100 + seed)
    p = 3
    for _ in range(25):
        X, Y = FiniteSet(rng.randint(1, 4)), FiniteSet(rng.randint(1, 4))
        f = _random_map(rng, X, Y)
        h = rand_object(X, p, rng)
        k = rand_object(Y, p, rng)
        assert pushforward(f, conv(h, pullback(f, k))) == conv(pushforward(f, h), k)


# -- twists and well-definedness -----------------------------------------------------


def test_twist_scale():
    rng = random.Random(23)
    h = rand_object(FiniteSet(2), 5, rng)
    assert twist_scale(h, 0, 0) == h
    assert twist_scale(h, 4, 0) == h
    assert twist_scale(h, 0, -1) == h.scale(5)
    assert twist_scale(h, 1, 1) == h.scale(Fraction(-1, 5))


def test_operations_well_defined_on_classes():
    rng = random.Random(29)
    p, r = 3, 1
    base = FiniteSet(p)
    for _ in range(10):
        h = rand_object(base, p, rng)
        junk = rand_pullback_junk(base, p, rng)
        g = rand_object(base, p, rng)
        hj = h + junk
        f = _random_map(rng, base, base)
        assert pullback(f, h).class_eq(pullback(f, hj))
        assert pushforward(f, h).class_eq(pushforward(f, hj))
        assert conv(h, g).class_eq(conv(hj, g))
        assert ft(h, r).class_eq(ft(hj, r))
        assert twist_scale(h, 1, 1).class_eq(twist_scale(hj, 1, 1))
    paired = rand_object(FiniteSet(9), p, rng)
    pjunk = rand_pullback_junk(FiniteSet(9), p, rng)
    assert shear(paired, 1).class_eq(shear(paired + pjunk, 1))


def test_expclass_equality_semantics():
    X, p = FiniteSet(2), 3
    rng = random.Random(31)
    h = rand_object(X, p, rng)
    junk = rand_pullback_junk(X, p, rng)
    assert ExpClass(h) == ExpClass(h + junk)
    assert ExpClass(h) != ExpClass(h + ExpObject.delta(X, p, 0, 1))


def test_json_round_trip():
    rng = random.Random(37)
    h = rand_object(FiniteSet(2), 5, rng)
    assert ExpObject.from_json(h.to_json()) == h
