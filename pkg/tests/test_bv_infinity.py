"""Homotopy BV structure: the θ ansatz, the unique θ₃ and the A/B/C axioms."""
from __future__ import annotations

import json

import pytest

from ymbv.bv_infinity import ThetaTable, YMStructure, theta_ansatz_words
from ymbv.exact_arith import GaussianRational
from ymbv.ym_complex import N


def test_structure_needs_a_homotopy(tables):
    with pytest.raises(ValueError):
        YMStructure(tables)


def test_theta2_is_the_product_table(tables, ym3):
    t2 = ym3.thetas[2]
    flat = {(o, a, b): c for o, lst in t2.entries.items() for (a, b), c in lst}
    assert flat == dict(tables.prod)


@pytest.mark.parametrize("n", [3, 4])
def test_ansatz_words_are_graded_symmetric_and_homogeneous(tables, n):
    deg, rdeg = tables.basis.deg, tables.basis.rdeg
    words = theta_ansatz_words(tables, n)
    assert len(words) == N
    for i, lst in enumerate(words):
        for t in lst:
            assert list(t) == sorted(t)
            odd = [j for j in t if deg[j] % 2]
            assert len(odd) == len(set(odd))
            assert sum(deg[j] for j in t) + 2 == deg[i]
            assert sum(rdeg[j] for j in t) == rdeg[i]


def test_theta3_solve_is_unique(ym3):
    info = ym3.solve_info[3]
    assert info["free"] == []
    assert info["rank"] == info["unknowns"] == 656
    assert any(ym3.thetas[3].entries[i] for i in range(N))


def test_axioms_hold_through_arity_three(ym3):
    rep = ym3.verify_all(3)
    assert rep.ok, rep.failures()
    kinds = {(v["check"], v.get("kind"), v.get("arity"), v.get("degree")) for v in rep.verdicts}
    assert ("axiom", "A", 1, 2) in kinds and ("axiom", "C", 3, 2) in kinds
    assert ("unique", None, 3, None) in kinds and ("sectors", None, 3, None) in kinds


def test_first_axioms_are_d_squared_and_dh_plus_hd(ym3):
    for comp in (-2, 0, 2):
        assert not any(ym3.axiom("A", 1, comp).values())


def test_a_perturbed_theta3_violates_the_axioms(tables_h, ym3):
    other = YMStructure(tables_h)
    entries = {i: list(lst) for i, lst in ym3.thetas[3].entries.items()}
    i = next(i for i in range(N) if entries[i])
    t, c = entries[i][0]
    entries[i][0] = (t, c + GaussianRational(1))
    other.set_theta(3, ThetaTable(3, entries))
    rep = other.verify_all(3)
    assert not rep.ok
    failing = {(v.get("kind"), v.get("arity")) for v in rep.failures()}
    assert ("B", 3) in failing


def test_certificate_is_deterministic_and_round_trips(tables_h, ym3):
    a = json.dumps(ym3.certificate(3), sort_keys=True)
    b = json.dumps(ym3.certificate(3), sort_keys=True)
    assert a == b
    cert = json.loads(a)
    assert "seconds" not in cert["solve"]["3"]
    assert cert["arities"] == [2, 3]
    other = YMStructure(tables_h)
    other.load_thetas(cert)
    assert other.thetas[3] == ym3.thetas[3]
    assert other.verify_all(3).ok


def test_theta_table_json_uses_one_based_indices(ym3):
    data = ym3.thetas[3].to_json()
    idx = [j for _, lst in data["entries"] for t, _ in lst for j in t]
    assert min(idx) >= 1 and max(idx) <= N
    assert ThetaTable.from_json(data) == ym3.thetas[3]
