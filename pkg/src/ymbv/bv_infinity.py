"""The homotopy BV structure on the Yang-Mills fiber model.

All structure maps are derivations of the free Gerstenhaber algebra on the
16 dual generators (momentum decorations act by the Hopf action):

* ``d``, ``h`` from the fiber tables, ``θ₂`` the transpose of the product;
* ``ν_k = [α, θ_k]`` and ``μ_k = -Γ[h, ν_k]``;
* ``θ_k`` for ``k ≥ 3`` from the graded-symmetric ansatz, fixed by the
  affine system ``b_k = -[d, θ_k] + q_k = 0`` with
  ``q_k = Γ Σ_{m+n-1=k, m≠1} [μ_m, ν_n]``.

The axioms are split by degree into the families A, B, C::

    A_1: -K + [d,h] (deg 0), ½[d,d] (deg 2), ½[h,h] (deg -2)
    A_k: [h, μ_k] (0);  [β, ν_k] + [d, μ_k] + ½ Σ [μ_m, μ_n] (2)
    B_k: [α, μ_k] + [h, ν_k] (0);  [d, ν_k] + Σ [μ_m, ν_n] (2)
    C_k: [α, ν_k] (0);  ½ Σ [ν_m, ν_n] (2)

with sums over ``m + n - 1 = k``, ``m, n ≥ 2``. Each is a derivation and
vanishes iff it vanishes on the 16 generators.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import Inconsistent, NonUnique
from .exact_arith import (
    GaussianRational,
    LinearSystem,
    PolyKP,
    scalar_from_json,
    scalar_to_json,
    solve_affine,
)
from .gerstenhaber import (
    DecoratedLetters,
    Elem,
    FreeGerstenhaber,
    Operator,
    add_into,
    big_gamma,
    canonical_operator,
    commutator,
    op_sum,
    scaled,
    zero_operator,
)
from .ym_complex import N, StructureTables

HALF = GaussianRational(Fraction(1, 2))

__all__ = ["YMStructure", "ThetaTable", "AxiomReport", "theta_ansatz_words", "TOOL_VERSION"]

TOOL_VERSION = "0.1.0"


def theta_ansatz_words(tables: StructureTables, n: int) -> List[List[Tuple[int, ...]]]:
    """Per target generator, the admissible index tuples of an arity-n word.

    Non-decreasing tuples of basis indices, no repeated odd-degree index,
    total degree + 2 = degree of the target, total row = row of the target.
    """
    deg, rdeg = tables.basis.deg, tables.basis.rdeg
    odd = {i for i in range(N) if deg[i] % 2}
    tuples = []
    for t in itertools.combinations_with_replacement(range(N), n):
        odds = [i for i in t if i in odd]
        if len(odds) != len(set(odds)):
            continue
        tuples.append(t)
    out = []
    for i in range(N):
        out.append(
            [t for t in tuples if sum(deg[j] for j in t) + 2 == deg[i] and sum(rdeg[j] for j in t) == rdeg[i]]
        )
    return out


@dataclass
class ThetaTable:
    """Coefficients of θ_n: target generator -> list of (index tuple, coefficient)."""

    arity: int
    entries: Dict[int, List[Tuple[Tuple[int, ...], object]]]
    params: List[str] = field(default_factory=list)

    def to_json(self):
        return {
            "arity": self.arity,
            "entries": [
                [i + 1, [[[j + 1 for j in t], scalar_to_json(c)] for t, c in self.entries[i]]]
                for i in sorted(self.entries)
                if self.entries[i]
            ],
        }

    @classmethod
    def from_json(cls, data):
        entries = {i: [] for i in range(N)}
        for i, lst in data["entries"]:
            entries[i - 1] = [(tuple(j - 1 for j in t), scalar_from_json(c)) for t, c in lst]
        return cls(data["arity"], entries)

    def substitute(self, bindings) -> "ThetaTable":
        entries = {}
        for i, lst in self.entries.items():
            new = []
            for t, c in lst:
                v = c.substitute(bindings) if isinstance(c, PolyKP) else c
                if isinstance(v, PolyKP) and v.is_constant():
                    v = v.constant_value()
                if v:
                    new.append((t, v))
            entries[i] = new
        return ThetaTable(self.arity, entries)


@dataclass
class AxiomReport:
    verdicts: List[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.verdicts)

    def add(self, **v):
        self.verdicts.append(v)

    def failures(self):
        return [v for v in self.verdicts if not v["ok"]]


class YMStructure:
    """Derivations d, h, θ_n, ν_n, μ_n and the axioms on the dual generators."""

    def __init__(self, tables: StructureTables, cap: int = 4):
        if tables.hmat is None:
            raise ValueError("tables need a solved homotopy (see ym_complex.solve_h)")
        self.tables = tables
        self.letters = DecoratedLetters([-d for d in tables.basis.deg], tables.basis.names, cap=cap)
        self.alg = FreeGerstenhaber(self.letters)
        a = self.alg
        self.alpha = canonical_operator(a, "alpha")
        self.beta = canonical_operator(a, "beta")
        self.gamma = canonical_operator(a, "gamma")
        self.K = canonical_operator(a, "K")
        self.d = self._matrix_op(tables.dmat, 1, "d")
        self.h = self._matrix_op(tables.hmat, -1, "h")
        self.thetas: Dict[int, ThetaTable] = {2: self.theta2_table()}
        self._ops: Dict[tuple, Operator] = {}
        self.solve_info: Dict[int, dict] = {}

    # -- generators and basic operators -----------------------------------
    def dual(self, i: int) -> Elem:
        return self.alg.gen(self.letters.letter(i))

    def base_letters(self):
        return [self.letters.letter(i) for i in range(N)]

    def _matrix_op(self, mat, deg, name) -> Operator:
        rows: Dict[int, List[Tuple[int, PolyKP]]] = {}
        for (i, j), v in mat.items():
            rows.setdefault(i, []).append((j, PolyKP.lift(v)))
        alg = self.alg

        def gen(letter):
            out: Elem = {}
            for j, p in rows.get(letter[0], ()):
                add_into(out, alg.apply_kpoly(p, self.dual(j)))
            return out

        return Operator(alg, deg, 0, gen, name=name)

    def theta2_table(self) -> ThetaTable:
        entries: Dict[int, List] = {i: [] for i in range(N)}
        acc: Dict[int, Dict[Tuple[int, int], object]] = {i: {} for i in range(N)}
        for (o, a, b), c in sorted(self.tables.prod.items()):
            acc[o][(a, b)] = c
        for o in range(N):
            entries[o] = sorted(acc[o].items())
        return ThetaTable(2, entries)

    def _theta_op_from_table(self, table: ThetaTable, name: str) -> Operator:
        alg = self.alg

        def gen(letter):
            out: Elem = {}
            for t, c in table.entries.get(letter[0], ()):
                add_into(out, alg.mul_many(*[self.dual(j) for j in t]), c)
            return out

        return Operator(alg, 2, table.arity - 1, gen, name=f"theta{table.arity}")

    # -- memoized derived operators ----------------------------------------
    def _memo(self, key, build):
        op = self._ops.get(key)
        if op is None:
            op = build()
            self._ops[key] = op
        return op

    def theta(self, n: int) -> Operator:
        if n not in self.thetas:
            raise KeyError(f"theta_{n} is not solved yet")
        return self._memo(("theta", n), lambda: self._theta_op_from_table(self.thetas[n], f"theta{n}"))

    def nu(self, n: int) -> Operator:
        return self._memo(("nu", n), lambda: commutator(self.alpha, self.theta(n), name=f"nu{n}"))

    def mu(self, n: int) -> Operator:
        return self._memo(
            ("mu", n), lambda: big_gamma(commutator(self.h, self.nu(n)), self.gamma).scaled(-1)
        )

    def comm(self, key: str, x: Operator, y: Operator) -> Operator:
        return self._memo(("comm", key), lambda: commutator(x, y, name=key))

    def q(self, k: int) -> Operator:
        def build():
            terms = [(1, self.comm(f"mn{k + 1 - n},{n}", self.mu(k + 1 - n), self.nu(n))) for n in range(2, k)]
            inner = op_sum(self.alg, 2, k - 1, terms, name=f"sum_mn{k}")
            return big_gamma(inner, self.gamma)

        return self._memo(("q", k), build)

    # -- θ ansatz and solve ---------------------------------------------------
    def theta_ansatz(self, n: int) -> ThetaTable:
        words = theta_ansatz_words(self.tables, n)
        entries: Dict[int, List] = {}
        params: List[str] = []
        for i in range(N):
            lst = []
            for j, t in enumerate(words[i]):
                name = f"t{n}_{i + 1}_{j + 1}"
                params.append(name)
                lst.append((t, PolyKP.symbol(name)))
            entries[i] = lst
        return ThetaTable(n, entries, params)

    def b_values(self, n: int, table: ThetaTable) -> Dict[int, Elem]:
        """b_n = -[d, θ_n] + q_n on every base generator, for a (parametric) θ_n table."""
        th = self._theta_op_from_table(table, f"theta{n}")
        dt = commutator(self.d, th)
        qn = self.q(n)
        out = {}
        for i, x in enumerate(self.base_letters()):
            v = scaled(dt.on_letter(x), -1)
            add_into(v, qn.on_letter(x))
            out[i] = v
        return out

    def solve_theta(self, n: int, require_unique: bool = True) -> ThetaTable:
        """Solve b_n = 0 for the θ_n ansatz; the solution must be unique."""
        for m in range(3, n):
            if m not in self.thetas:
                self.solve_theta(m, require_unique)
        t0 = time.perf_counter()
        ans = self.theta_ansatz(n)
        vals = self.b_values(n, ans)
        eqs = []
        for i in range(N):
            for w in sorted(vals[i], key=repr):
                eqs.append(PolyKP.lift(vals[i][w]))
        sol = solve_affine(LinearSystem(ans.params, eqs))
        info = {
            "arity": n,
            "unknowns": len(ans.params),
            "equations": len(eqs),
            "rank": sol.rank,
            "free": list(sol.free),
            "seconds": round(time.perf_counter() - t0, 3),
        }
        self.solve_info[n] = info
        if sol.free and require_unique:
            raise NonUnique(f"theta_{n} solve leaves {len(sol.free)} free parameters", sol.free)
        bindings = dict(sol.solution)
        for f in sol.free:
            bindings[f] = PolyKP()
        table = ans.substitute(bindings)
        self.set_theta(n, table)
        return table

    def set_theta(self, n: int, table: ThetaTable) -> None:
        self.thetas[n] = table
        # drop derived operators that depend on θ_n
        self._ops = {k: v for k, v in self._ops.items() if not _depends_on(k, n)}

    def build(self, nmax: int = 3) -> None:
        for n in range(3, nmax + 1):
            if n not in self.thetas:
                self.solve_theta(n)

    # -- axioms -----------------------------------------------------------
    def axiom_operator(self, kind: str, k: int, comp: int) -> Operator:
        """The derivation A/B/C_k restricted to degree ``comp``."""
        a = self.alg
        C = self.comm
        if kind == "A" and k == 1:
            if comp == 2:
                return op_sum(a, 2, 0, [(HALF, C("dd", self.d, self.d))], "A1,2")
            if comp == 0:
                return op_sum(a, 0, 0, [(-1, self.K), (1, C("dh", self.d, self.h))], "A1,0")
            if comp == -2:
                return op_sum(a, -2, 0, [(HALF, C("hh", self.h, self.h))], "A1,-2")
        pairs = [(k + 1 - n, n) for n in range(2, k)]
        if kind == "A":
            if comp == 0:
                return op_sum(a, 0, k - 1, [(1, C(f"hm{k}", self.h, self.mu(k)))], f"A{k},0")
            if comp == 2:
                terms = [(1, C(f"bn{k}", self.beta, self.nu(k))), (1, C(f"dm{k}", self.d, self.mu(k)))]
                terms += [(HALF, C(f"mm{m},{n}", self.mu(m), self.mu(n))) for m, n in pairs]
                return op_sum(a, 2, k - 1, terms, f"A{k},2")
        if kind == "B":
            if comp == 0:
                terms = [(1, C(f"am{k}", self.alpha, self.mu(k))), (1, C(f"hn{k}", self.h, self.nu(k)))]
                return op_sum(a, 0, k - 1, terms, f"B{k},0")
            if comp == 2:
                terms = [(1, C(f"dn{k}", self.d, self.nu(k)))]
                terms += [(1, C(f"mn{m},{n}", self.mu(m), self.nu(n))) for m, n in pairs]
                return op_sum(a, 2, k - 1, terms, f"B{k},2")
        if kind == "C":
            if comp == 0:
                return op_sum(a, 0, k - 1, [(1, C(f"an{k}", self.alpha, self.nu(k)))], f"C{k},0")
            if comp == 2:
                terms = [(HALF, C(f"nn{m},{n}", self.nu(m), self.nu(n))) for m, n in pairs]
                return op_sum(a, 2, k - 1, terms, f"C{k},2")
        raise ValueError(f"no axiom component {kind}{k} in degree {comp}")

    def axiom(self, kind: str, k: int, comp: int) -> Dict[int, Elem]:
        """Values of the axiom component on all 16 generators (all zero iff it holds)."""
        op = self.axiom_operator(kind, k, comp)
        return {i: op.on_letter(x) for i, x in enumerate(self.base_letters())}

    def axiom_components(self, nmax: int):
        comps = [("A", 1, c) for c in (-2, 0, 2)]
        for k in range(2, nmax + 1):
            comps += [("A", k, 0), ("A", k, 2), ("B", k, 0), ("B", k, 2)]
        for k in range(3, nmax + 1):
            comps += [("C", k, 0), ("C", k, 2)]
        return comps

    def reduced_values(self, kind: str, k: int) -> Dict[int, Elem]:
        """Γ B_k or Γ C_k (both degree components), on all generators."""
        out: Dict[int, Elem] = {}
        for comp in (0, 2):
            g = big_gamma(self.axiom_operator(kind, k, comp), self.gamma)
            for i, x in enumerate(self.base_letters()):
                add_into(out.setdefault(i, {}), g.on_letter(x))
        return out

    def sector_violations(self, n: int) -> List[str]:
        """Check b_n(V*) ⊂ (V*)^{⊗n} and c_n(V*) ⊂ [V*,V*](V*)^{⊗(n-2)} structurally."""
        bad = []
        q = self.q(n)
        for i, x in enumerate(self.base_letters()):
            for w in q.on_letter(x):
                if len(w) != n or any(len(a) != 1 for a in w):
                    bad.append(f"q{n} on generator {i + 1}")
                    break
        if n >= 3:
            c = big_gamma(self.axiom_operator("C", n, 2), self.gamma)
            for i, x in enumerate(self.base_letters()):
                for w in c.on_letter(x):
                    lens = sorted(len(a) for a in w)
                    if lens != [1] * (n - 2) + [2]:
                        bad.append(f"c{n} on generator {i + 1}")
                        break
        return bad

    def verify_all(self, nmax: int = 3) -> AxiomReport:
        self.build(nmax)
        rep = AxiomReport()
        for kind, k, comp in self.axiom_components(nmax):
            vals = self.axiom(kind, k, comp)
            bad = [i for i in range(N) if vals[i]]
            v = dict(check="axiom", kind=kind, arity=k, degree=comp, ok=not bad)
            if bad:
                v["witness"] = bad[0] + 1
                v["value"] = self.alg.sexpr(vals[bad[0]])[:400]
            rep.add(**v)
        for kind, k0 in (("B", 2), ("C", 3)):
            for k in range(k0, nmax + 1):
                vals = self.reduced_values(kind, k)
                bad = [i for i in range(N) if vals[i]]
                v = dict(check="reduced", kind=f"Gamma{kind}", arity=k, ok=not bad)
                if bad:
                    v["witness"] = bad[0] + 1
                rep.add(**v)
        for n in range(3, nmax + 1):
            info = self.solve_info.get(n)
            if info is not None:
                rep.add(check="unique", arity=n, ok=not info["free"], free=len(info["free"]))
            bad = self.sector_violations(n)
            rep.add(check="sectors", arity=n, ok=not bad, **({"witness": bad[0]} if bad else {}))
        return rep

    # -- certificate --------------------------------------------------------
    def certificate(self, nmax: int, report: Optional[AxiomReport] = None) -> dict:
        from .ym_complex import h_to_json

        h = h_to_json(self.tables)
        body = {
            "tool_version": TOOL_VERSION,
            "h_hash": h["hash"],
            "h": h,
            "arities": list(range(2, nmax + 1)),
            "theta": {str(n): self.thetas[n].to_json() for n in range(3, nmax + 1)},
            "solve": {
                str(n): {k: v for k, v in self.solve_info[n].items() if k != "seconds"}
                for n in range(3, nmax + 1)
                if n in self.solve_info
            },
        }
        if report is not None:
            body["verdicts"] = report.verdicts
            body["ok"] = report.ok
        return body

    def load_thetas(self, cert: dict) -> None:
        for n, data in sorted(cert["theta"].items(), key=lambda t: int(t[0])):
            self.set_theta(int(n), ThetaTable.from_json(data))


def _depends_on(key: tuple, n: int) -> bool:
    # derived operators are cheap to rebuild; drop everything touching arity >= n
    return key[0] != "theta" or key[1] == n
