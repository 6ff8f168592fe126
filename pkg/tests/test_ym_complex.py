"""The 16-dimensional fiber dgca, the homotopy h and plane-wave homology."""
from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
import sympy

import literal_tables
from ymbv.amplitudes import null_momentum
from ymbv.errors import ChecksumMismatch, ZeroMomentum
from ymbv.exact_arith import K, K_NAMES, Q_BOX, GaussianRational, PolyKP
from ymbv.ym_complex import (
    N,
    Momentum4,
    StructureTables,
    check_dgca,
    check_kih_and_iso,
    differential_at,
    h_from_json,
    h_to_json,
    homology_at,
    load_structure_tables,
    mat_mul,
    verify_h,
)


def _pair(z):
    return (Fraction(z.re), Fraction(z.im))


# -- fixture fidelity ---------------------------------------------------------


def test_every_literal_product_entry_is_loaded(tables):
    lit = literal_tables.products()
    assert len(lit) == literal_tables.product_rule_count() == 81
    for (o, a, b), val in lit.items():
        assert _pair(tables.prod_entry(o, a, b)) == val, (o, a, b)
    assert len(tables.prod) == len(lit)


def test_every_literal_differential_entry_is_loaded(tables):
    lit = literal_tables.differential()
    assert len(lit) == literal_tables.differential_rule_count() == 35
    for (r, c), (val, kidx) in lit.items():
        want = PolyKP.const(GaussianRational(*val))
        if kidx is not None:
            want = want * K[kidx]
        assert tables.dmat_entry(r, c) == want, (r, c)
    assert len(tables.dmat) == len(lit)


def test_tampered_fixture_fails_checksum(tmp_path):
    from importlib import resources

    data = json.loads(resources.files("ymbv").joinpath("data/ym16.json").read_text())
    data["prod"][5][1]["re"] = "2"
    bad = tmp_path / "ym16.json"
    bad.write_text(json.dumps(data))
    with pytest.raises(ChecksumMismatch):
        load_structure_tables(bad)


def test_basis_degrees(tables):
    b = tables.basis
    assert b.names[0] == "one" and b.names[-1] == "s0123"
    assert [len(b.of_udeg(p)) for p in range(4)] == [1, 7, 7, 1]
    assert sorted(set(b.deg)) == [-2, -1, 0, 1]


# -- dgca ---------------------------------------------------------------------


def test_dgca_certificate(tables):
    rep = check_dgca(tables)
    assert rep["ok"], rep
    assert rep["associativity"]["checked"] == N ** 3
    assert rep["graded_commutativity"]["checked"] == N ** 2


def _mutated(tables, prod=None, dmat=None):
    return StructureTables(tables.basis, prod or tables.prod, dmat or tables.dmat)


def test_dgca_detects_a_flipped_product_entry(tables):
    prod = dict(tables.prod)
    key = (5, 1, 2)  # {6,2,3} -> 1/2
    prod[key] = -prod[key]
    rep = check_dgca(_mutated(tables, prod=prod))
    assert not rep["ok"]
    assert not rep["graded_commutativity"]["ok"]


def test_dgca_detects_a_broken_differential(tables):
    dmat = dict(tables.dmat)
    dmat[(5, 1)] = dmat[(5, 1)] * 2  # {6,2} -> -k1/2 becomes -k1
    rep = check_dgca(_mutated(tables, dmat=dmat))
    assert not rep["ok"]
    assert not rep["d_squared_zero"]["ok"] and not rep["leibniz"]["ok"]


@pytest.mark.parametrize("key", [(5, 8), (6, 9), (7, 10)])
def test_rescaling_a_constant_entry_is_still_a_dgca(tables, key):
    # the constant s -> e entries are not fixed by the dgca axioms alone;
    # the fixture-fidelity tests above are what pin them
    dmat = dict(tables.dmat)
    dmat[key] = dmat[key] * 2
    assert check_dgca(_mutated(tables, dmat=dmat))["ok"]


def test_one_is_a_unit_only_up_to_momentum(tables):
    # the plane-wave unit has d(1) = k·e: Leibniz needs additive momenta
    d1 = {r: v for (r, c), v in tables.dmat.items() if c == 0}
    assert d1 == {1: K[0], 2: K[1], 3: K[2], 4: K[3]}


# -- homotopy -----------------------------------------------------------------


def test_h_identities_recomputed_directly(tables_h):
    H, D = tables_h.hmat, tables_h.dmat
    assert not mat_mul(H, H)
    s = mat_mul(D, H)
    for key, v in mat_mul(H, D).items():
        s[key] = s.get(key, PolyKP()) + v
    s = {k: v for k, v in s.items() if v}
    assert s == {(i, i): Q_BOX for i in range(N)}


def test_verify_h_reports_both_identities(tables_h, tables_alt):
    for t in (tables_h, tables_alt):
        v = verify_h(t)
        assert v["ok"] and v["h_squared_zero"] and v["dh_plus_hd_box"]


def test_two_distinct_homotopies(tables_h, tables_alt):
    assert tables_h.hmat != tables_alt.hmat


def test_h_lowers_degree_by_one(tables_h):
    deg = tables_h.basis.deg
    for (r, c) in tables_h.hmat:
        assert deg[r] == deg[c] - 1


def test_h_json_round_trip(tables, tables_h):
    data = json.loads(json.dumps(h_to_json(tables_h)))
    back = h_from_json(tables, data)
    assert back.hmat == tables_h.hmat


# -- homology -----------------------------------------------------------------


def _sympy_dims(tables, k: Momentum4):
    """Homology dimensions by sympy ranks of the blocks of d at k (oracle)."""
    D = differential_at(tables, k)
    b = tables.basis

    def sym(z):
        return sympy.Rational(z.re) + sympy.I * sympy.Rational(z.im)

    def block(p):
        rows, cols = b.of_udeg(p + 1), b.of_udeg(p)
        if not rows or not cols:
            return 0
        M = sympy.Matrix(len(rows), len(cols), lambda i, j: sym(D.get((rows[i], cols[j]), GaussianRational(0))))
        return M.rank()

    ranks = [block(p) for p in range(4)]
    dims = []
    for p in range(4):
        n = len(b.of_udeg(p))
        dims.append(n - ranks[p] - (ranks[p - 1] if p else 0))
    return dims


@pytest.mark.parametrize("seed", range(5))
def test_homology_at_null_momenta(tables, tables_h, seed):
    k = null_momentum(random.Random(seed))
    hom = homology_at(tables_h, k)
    assert list(hom.dims) == [0, 2, 2, 0] == _sympy_dims(tables, k)
    # p∘i = 1 on both nonzero degrees
    for p in (1, 2):
        for j, rep in enumerate(hom.i[p]):
            coords = hom.project(p, rep)
            assert coords == [GaussianRational(int(i == j)) for i in range(2)]


@pytest.mark.parametrize("seed", range(5))
def test_homology_vanishes_off_shell(tables, tables_h, seed):
    rng = random.Random(100 + seed)
    while True:
        k = Momentum4(*[GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 4))) for _ in range(4)])
        if k.square() and not k.is_zero():
            break
    assert list(homology_at(tables_h, k).dims) == [0, 0, 0, 0] == _sympy_dims(tables, k)


@pytest.mark.parametrize("seed", range(5))
def test_inclusions_and_h_independent_iso(tables_h, tables_alt, seed):
    k = null_momentum(random.Random(200 + seed))
    rep = check_kih_and_iso(tables_h, k, hmat2=tables_alt.hmat)
    assert rep["ok"], rep
    assert rep["ker_d1_in_ker_h1"] and rep["im_h3_in_im_d1"]
    assert rep["iso_rank"] == 2 and rep["h_independent"]


def test_zero_momentum_is_rejected(tables_h):
    with pytest.raises(ZeroMomentum):
        homology_at(tables_h, Momentum4(0, 0, 0, 0))


def test_momentum_bindings_cover_all_symbols():
    k = Momentum4(1, 2, 3, 4)
    assert set(k.bindings()) == set(K_NAMES)
    assert k.square() == GaussianRational(-1 + 4 + 9 + 16)
