"""Shared corpus generators and independent oracles for the test suite."""

from fractions import Fraction

import pytest

from homcheck.dsl import RawExpr, prod, twist, var
from homcheck.normalform import canon

VARS4 = ("w", "x", "y", "z")


def random_coeff(rng):
    num = rng.choice([n for n in range(-4, 5) if n])
    return Fraction(num, rng.randint(1, 4))


def random_raw_term(rng, nvars, depth=3):
    if depth == 0 or rng.random() < 0.4:
        return var(rng.randrange(nvars))
    if rng.random() < 0.3:
        return twist(random_raw_term(rng, nvars, depth - 1))
    return (
        prod(
            random_raw_term(rng, nvars, depth - 1),
            random_raw_term(rng, nvars, depth - 1),
        )
    )


def random_raw_expr(rng, names=VARS4, max_terms=5, depth=3):
    terms = tuple(
        (random_coeff(rng), random_raw_term(rng, len(names), depth))
        for _ in range(rng.randint(1, max_terms))
    )
    return RawExpr(terms, tuple(names))


def shuffled_variant(rng, expr):
    """Reassociate the term list and randomly swap product arguments,
    flipping the sign for each swap; semantically a no-op."""

    def walk(term):
        tag = term[0]
        if tag == "var":
            return 1, term
        if tag == "twist":
            s, t = walk(term[1])
            return s, twist(t)
        sl, left = walk(term[1])
        sr, right = walk(term[2])
        if rng.random() < 0.5:
            return -sl * sr, prod(right, left)
        return sl * sr, prod(left, right)

    terms = []
    for coeff, term in expr.terms:
        sign, t = walk(term)
        terms.append((sign * coeff, t))
    rng.shuffle(terms)
    return RawExpr(tuple(terms), expr.vars)


def mono_to_raw(mono):
    """Canonical monomial -> raw term."""
    if isinstance(mono[0], int):
        t = var(mono[0])
        for _ in range(mono[1]):
            t = twist(t)
        return t
    return prod(mono_to_raw(mono[0]), mono_to_raw(mono[1]))


def random_monomial(rng, var_degrees, max_power=2):
    """Random canonical monomial with the given leaves-per-variable counts."""
    leaves = [
        (v, rng.randint(0, max_power))
        for v, d in enumerate(var_degrees)
        for _ in range(d)
    ]
    rng.shuffle(leaves)

    def build(items):
        if len(items) == 1:
            return items[0]
        cut = rng.randint(1, len(items) - 1)
        return (build(items[:cut]), build(items[cut:]))

    res = canon(build(leaves))
    return None if res is None else res[1]


# ---------------------------------------------------------------------------
# Cayley-Dickson doubling over the rationals (independent oracle for the
# bundled octonion commutator table).

def cd_conj(x):
    if isinstance(x, Fraction):
        return x
    return (cd_conj(x[0]), cd_neg(x[1]))


def cd_neg(x):
    if isinstance(x, Fraction):
        return -x
    return (cd_neg(x[0]), cd_neg(x[1]))


def cd_add(x, y):
    if isinstance(x, Fraction):
        return x + y
    return (cd_add(x[0], y[0]), cd_add(x[1], y[1]))


def cd_mul(x, y):
    if isinstance(x, Fraction):
        return x * y
    (a, b), (c, d) = x, y
    return (
        cd_add(cd_mul(a, c), cd_neg(cd_mul(cd_conj(d), b))),
        cd_add(cd_mul(d, a), cd_mul(b, cd_conj(c))),
    )


def cd_flatten(x, out):
    if isinstance(x, Fraction):
        out.append(x)
    else:
        cd_flatten(x[0], out)
        cd_flatten(x[1], out)
    return out


def cd_unit(k, dim=8):
    vec = [Fraction(0)] * dim
    vec[k] = Fraction(1)

    def build(v):
        if len(v) == 1:
            return v[0]
        h = len(v) // 2
        return (build(v[:h]), build(v[h:]))

    return build(vec)


def octonion_commutator_table():
    """e_i.e_j = (1/2)[x_i, x_j] on the seven imaginary octonion units,
    as {(i, j) 0-based, i < j: {k: Fraction}}."""
    table = {}
    for i in range(1, 8):
        for j in range(i + 1, 8):
            p = cd_add(
                cd_mul(cd_unit(i), cd_unit(j)),
                cd_neg(cd_mul(cd_unit(j), cd_unit(i))),
            )
            v = cd_flatten(p, [])
            assert v[0] == 0
            out = {k - 1: v[k] / 2 for k in range(1, 8) if v[k]}
            if out:
                table[(i - 1, j - 1)] = out
    return table


@pytest.fixture(scope="session")
def cd_table():
    return octonion_commutator_table()
