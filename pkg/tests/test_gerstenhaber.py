"""Free Gerstenhaber algebra: normal forms, the Lie basis and the anomalous operators."""
from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
import sympy

from ymbv.errors import DecorationCapExceeded
from ymbv.exact_arith import GaussianRational
from ymbv.gerstenhaber import (
    DecoratedLetters,
    FreeGerstenhaber,
    Operator,
    Sampler,
    add_into,
    axiom_defects,
    big_gamma,
    box,
    canonical_operator,
    commutator,
    operator_calculus,
    scaled,
)


@pytest.fixture(scope="module")
def small():
    """Letters of degrees 0, 1, 1, 2 (Lie parities 1, 0, 0, 1)."""
    return FreeGerstenhaber(DecoratedLetters([0, 1, 1, 2]))


def L(alg, i, kexp=(0, 0, 0, 0)):
    return alg.letters.letter(i, kexp)


def g(alg, i, kexp=(0, 0, 0, 0)):
    return alg.gen(L(alg, i, kexp))


# -- tensor model and Lie basis ----------------------------------------------


def _commutator_oracle(alg, x, y):
    """Graded commutator of two tensor vectors by direct expansion (Lie parities)."""

    def par(w):
        return sum((alg.letters.deg(l) - 1) & 1 for l in w) & 1

    if not x or not y:
        return {}
    px = {par(w) for w in x}.pop()
    py = {par(w) for w in y}.pop()
    out = {}
    for u, a in x.items():
        for v, b in y.items():
            out[u + v] = out.get(u + v, 0) + a * b
            out[v + u] = out.get(v + u, 0) - (-1) ** (px * py) * a * b
    return {w: c for w, c in out.items() if c}


def test_tensor_image_of_left_normed_brackets(small):
    rng = random.Random(0)
    for _ in range(50):
        seq = tuple(L(small, rng.randrange(4)) for _ in range(rng.randint(2, 4)))
        t = {seq[:1]: 1}
        for y in seq[1:]:
            t = _commutator_oracle(small, t, {(y,): 1})
        assert small.tensor(seq) == t


def _span_rank(alg, multiset):
    """Rank of all left-normed brackets on a multiset (every ordering), by sympy."""
    seqs = sorted(set(itertools.permutations(multiset)))
    words = sorted({w for s in seqs for w in alg.tensor(s)})
    if not words:
        return 0
    idx = {w: i for i, w in enumerate(words)}
    M = sympy.zeros(len(seqs), len(words))
    for r, s in enumerate(seqs):
        for w, c in alg.tensor(s).items():
            M[r, idx[w]] = c
    return M.rank()


@pytest.mark.parametrize("seed", range(40))
def test_lie_basis_size_matches_span_rank(small, seed):
    rng = random.Random(seed)
    ms = tuple(sorted(L(small, rng.randrange(4)) for _ in range(rng.randint(2, 5))))
    assert len(small._basis(ms).atoms) == _span_rank(small, ms)


def test_distinct_letters_give_factorial_many_atoms(small):
    for n in range(1, 5):
        ms = tuple(L(small, i) for i in range(n))
        assert len(small._basis(ms).atoms) == math.factorial(n - 1)


@pytest.mark.parametrize("seed", range(40))
def test_normal_form_reconstructs_the_bracket(small, seed):
    rng = random.Random(100 + seed)
    seq = tuple(L(small, rng.randrange(4), (rng.randint(0, 1), 0, 0, 0)) for _ in range(rng.randint(2, 5)))
    recon = {}
    for atom, c in small.normalize_seq(seq):
        for w, v in small.tensor(atom).items():
            recon[w] = recon.get(w, 0) + c * v
    recon = {w: c for w, c in recon.items() if c}
    assert recon == {w: c for w, c in small.tensor(seq).items() if c}


# -- products and brackets ----------------------------------------------------


def test_odd_letters_square_to_zero_and_even_letters_do_not(small):
    assert small.mul(g(small, 1), g(small, 1)) == {}
    assert small.mul(g(small, 0), g(small, 0)) != {}


def test_self_bracket_vanishes_exactly_for_even_lie_parity(small):
    # Lie parity |x| - 1: letters of degree 1 are Lie-even, so [x, x] = 0
    assert small.bracket(g(small, 1), g(small, 1)) == {}
    assert small.bracket(g(small, 0), g(small, 0)) != {}


def test_bracket_has_degree_minus_one(small):
    x = small.bracket(g(small, 3), g(small, 2))
    assert small.deg(x) == 2 + 1 - 1


@pytest.mark.parametrize("seed", range(30))
def test_axioms_on_random_words(small, seed):
    S = Sampler(small, random.Random(seed))
    a, b, c = (S.word(random.Random(seed + k).randint(1, 2)) for k in range(3))
    for name, v in axiom_defects(small, a, b, c).items():
        assert not v, name


def test_momentum_acts_by_leibniz(small):
    a, b = small.from_seq([L(small, 0), L(small, 2)]), g(small, 3)
    lhs = small.momentum(1, small.mul(a, b))
    rhs = small.mul(small.momentum(1, a), b)
    add_into(rhs, small.mul(a, small.momentum(1, b)))
    assert lhs == rhs


def test_decoration_cap():
    alg = FreeGerstenhaber(DecoratedLetters([1], cap=2))
    x = alg.gen(alg.letters.letter(0, (1, 1, 0, 0)))
    with pytest.raises(DecorationCapExceeded):
        alg.momentum(0, x)


def test_sexpr_is_stable(small):
    x = small.mul(g(small, 0), small.from_seq([L(small, 1), L(small, 2)]))
    assert small.sexpr(x) == "(+ (* 1 (mul dualx0 (lie dualx1 dualx2))))"
    assert small.sexpr({}) == "0"


# -- operators ----------------------------------------------------------------


def test_alpha_on_a_product_of_letters_is_their_bracket(small):
    alpha = canonical_operator(small, "alpha")
    a, b = g(small, 0), g(small, 3)
    # the anomaly enters with (-1)^|a|, |a| = 0
    assert alpha.apply(small.mul(a, b)) == small.bracket(a, b)
    c = g(small, 1)  # |c| = 1
    assert alpha.apply(small.mul(c, b)) == scaled(small.bracket(c, b), -1)


def test_K_on_a_letter_is_box(small):
    K = canonical_operator(small, "K")
    x = g(small, 2, (0, 1, 0, 0))
    assert K.apply(x) == box(small, x)
    # □ decorates: -k0² x + k1² x + k2² x + k3² x
    want = {((L(small, 2, e),),): c for e, c in [((2, 0, 0, 0), -1), ((0, 2, 0, 0), 1), ((0, 0, 2, 0), 1), ((0, 0, 0, 2), 1)]}
    assert box(small, g(small, 2)) == want


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_kappa_scaling_on_words(small, n):
    alpha, gamma = canonical_operator(small, "alpha"), canonical_operator(small, "gamma")
    S = Sampler(small, random.Random(n))
    for _ in range(10):
        w = S.word(n)
        lhs = alpha.apply(gamma.apply(w))
        add_into(lhs, gamma.apply(alpha.apply(w)))
        assert lhs == scaled(w, Fraction(n * (n - 1), 2))


def test_wrong_gamma_anomaly_breaks_kappa_scaling(small):
    alpha = canonical_operator(small, "alpha")

    def anomaly(a, b):  # n_a n_b + 1 instead of n_a n_b
        return scaled(small.mul(a, b), small.ndeg(a) * small.ndeg(b) + 1)

    bad_gamma = Operator(small, 1, 0, lambda x: {}, lie_anomaly=anomaly, name="gamma'")
    w = small.mul(g(small, 0), g(small, 3))
    lhs = alpha.apply(bad_gamma.apply(w))
    add_into(lhs, bad_gamma.apply(alpha.apply(w)))
    assert lhs != w


def test_gamma_of_a_derivation_scales_letter_values(small):
    gamma = canonical_operator(small, "gamma")
    value = small.mul(g(small, 0), g(small, 3))
    delta = Operator(small, 1, 1, lambda x: dict(value) if x[0] == 1 else {}, name="delta")
    G = big_gamma(delta, gamma)
    assert G.deg == 2 and G.ndeg == 1
    assert G.on_letter(L(small, 1)) == scaled(gamma.apply(value), GaussianRational(1))
    assert G.on_letter(L(small, 2)) == {}


def test_commutator_of_derivations_is_a_derivation(small):
    S = Sampler(small, random.Random(5))
    x, y = S.derivation(1), S.derivation(1)
    c = commutator(x, y)
    sgn = -1 if (x.deg * y.deg) & 1 else 1
    for _ in range(10):
        e = S.element(max_ndeg=2)
        direct = x.apply(y.apply(e))
        add_into(direct, y.apply(x.apply(e)), -sgn)
        assert c.apply(e) == direct


def test_operator_calculus_small_run(dual_algebra):
    rep = operator_calculus(dual_algebra, samples=15, seed=3)
    assert rep["ok"], {k: v for k, v in rep.items() if k != "ok" and not v["ok"]}
    assert set(rep) - {"ok"} == {
        "gerstenhaber_axioms",
        "alpha^2",
        "beta^2",
        "gamma^2",
        "alpha*beta+beta*alpha+K=box",
        "kappa_scaling",
        "d_alpha*Gamma+Gamma*d_alpha=1",
        "Gamma^2",
        "d_alpha_is_derivation",
        "Gamma_commutes_with_ndeg0",
    }
    assert rep["kappa_scaling"]["checked"] == 4 * 15
