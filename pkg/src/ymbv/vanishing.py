"""Explicit linear algebra for the H⁰/H¹ vanishing theorem over the self-dual quotient algebras.

Objects (``n`` blocks, generators ``e^μ_j`` of degree 1, μ = 0..3, j = 1..n):

* ``Λ_n``: exterior algebra on the 4n generators (monomials are bitmasks);
* ``A_n = Λ_n / (e⁰e¹ − i e²e³, e⁰e² − i e³e¹, e⁰e³ − i e¹e²)_j``;
* case modules ``M_n``: Case 1 is ``A_n g``; Case 2 is ``(A_n g₁ ⊕ A_n g₂ ⊕ A_n g₃)/S_n``
  with the eight degree-one relations written in the first block;
* ``M = M_1`` (the same construction at n = 1) receives ``f: e^μ_j ↦ e^μ``.

The complex ``X^{k,ℓ} = S^k U_n* ⊗ Hom^ℓ(M_n, M)`` has differential
``ψ_v(m) = f(v) φ_v(m) − (−1)^k φ_v(vm)``; a polynomial of degree k in
``v`` is stored in the monomial basis of the coordinates of ``v``.
Everything is exact over Q(i).
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from . import linalg
from .kernel import sparse_rref
from .exact_arith import GaussianRational, I

__all__ = [
    "ExteriorAlgebra",
    "CaseModule",
    "Complex",
    "build_complex",
    "check_vanishing",
    "w_matrix",
    "w_injectivity",
    "hilbert_series",
    "poly_mul",
]

ONE = GaussianRational(1)
ZERO = GaussianRational(0)


def poly_mul(a: Sequence[int], b: Sequence[int]) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def hilbert_series(case: int, n: int) -> List[int]:
    """Expected graded dimensions of M_n: (1+4t+3t²)ⁿ or (3+4t+t²)(1+4t+3t²)ⁿ⁻¹."""
    out = [1] if case == 1 else [3, 4, 1]
    for _ in range(n if case == 1 else n - 1):
        out = poly_mul(out, [1, 4, 3])
    return out


class ExteriorAlgebra:
    """Λ_n with generator ``g = 4j + μ`` (0-based block j); monomials are bitmasks."""

    def __init__(self, n: int):
        self.n = n
        self.ngens = 4 * n
        self.by_degree: List[List[int]] = [[] for _ in range(self.ngens + 1)]
        for mask in range(1 << self.ngens):
            self.by_degree[bin(mask).count("1")].append(mask)

    @staticmethod
    def gen_mul(g: int, mask: int) -> Tuple[int, int]:
        """e_g ∧ (monomial): ``(sign, mask)``, sign 0 if it vanishes."""
        if mask >> g & 1:
            return 0, mask
        below = bin(mask & ((1 << g) - 1)).count("1")
        return (-1 if below & 1 else 1), mask | (1 << g)

    def mono_mul(self, m1: int, m2: int) -> Tuple[int, int]:
        sign = 1
        mask = m2
        for g in reversed([g for g in range(self.ngens) if m1 >> g & 1]):
            s, mask = self.gen_mul(g, mask)
            if not s:
                return 0, mask
            sign *= s
        return sign, mask

    def seq(self, gens: Sequence[int]) -> Tuple[int, int]:
        """The ordered product e_{g1} ∧ … ∧ e_{gk} as ``(sign, mask)``."""
        sign, mask = 1, 0
        for g in reversed(gens):
            s, mask = self.gen_mul(g, mask)
            if not s:
                return 0, 0
            sign *= s
        return sign, mask

    def self_dual_relations(self, j: int) -> List[Dict[int, GaussianRational]]:
        """e⁰e¹ − i e²e³, e⁰e² − i e³e¹, e⁰e³ − i e¹e² in block j (0-based)."""
        b = 4 * j
        out = []
        for (p, q), (r, s) in (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))):
            v: Dict[int, GaussianRational] = {}
            s1, m1 = self.seq([b + p, b + q])
            s2, m2 = self.seq([b + r, b + s])
            v[m1] = v.get(m1, ZERO) + GaussianRational(s1)
            v[m2] = v.get(m2, ZERO) - I * s2
            out.append(v)
        return out


# The eight Case 2 relations: (coefficient, μ, generator) triples, generators 0..2.
CASE2_RELATIONS: Tuple[Tuple[Tuple[GaussianRational, int, int], ...], ...] = (
    ((ONE, 1, 0), (-ONE, 2, 1)),
    ((ONE, 1, 0), (-ONE, 3, 2)),
    ((ONE, 1, 1), (ONE, 2, 0)),
    ((ONE, 2, 2), (ONE, 3, 1)),
    ((ONE, 3, 0), (ONE, 1, 2)),
    ((ONE, 0, 0), (I, 2, 2)),
    ((ONE, 0, 1), (I, 3, 0)),
    ((ONE, 0, 2), (I, 1, 1)),
)


class CaseModule:
    """A graded quotient of the free Λ_n-module of rank r by a submodule given by homogeneous generators.

    Ambient basis in degree k: pairs ``(a, mask)`` with ``popcount(mask) = k``.
    The quotient basis in each degree is the set of non-pivot ambient columns
    of the RREF of the submodule; ``reduce`` returns quotient coordinates.
    """

    def __init__(self, case: int, n: int, relations: Optional[Sequence[Dict[Tuple[int, int], GaussianRational]]] = None):
        if case not in (1, 2):
            raise ValueError("case must be 1 or 2")
        self.case = case
        self.n = n
        self.ext = ExteriorAlgebra(n)
        self.rank = 1 if case == 1 else 3
        rels: List[Dict[Tuple[int, int], GaussianRational]] = []
        for j in range(n):
            for rel in self.ext.self_dual_relations(j):
                for a in range(self.rank):
                    rels.append({(a, m): c for m, c in rel.items()})
        if relations is None and case == 2:
            relations = []
            for terms in CASE2_RELATIONS:
                v: Dict[Tuple[int, int], GaussianRational] = {}
                for c, mu, a in terms:
                    key = (a, 1 << mu)
                    v[key] = v.get(key, ZERO) + c
                relations.append(v)
        rels.extend(relations or [])
        self.relations = rels
        self.top = self.ext.ngens
        self._build()

    def _build(self) -> None:
        ext = self.ext
        self.ambient: List[List[Tuple[int, int]]] = []
        self.index: List[Dict[Tuple[int, int], int]] = []
        for k in range(self.top + 1):
            amb = [(a, m) for m in ext.by_degree[k] for a in range(self.rank)]
            self.ambient.append(amb)
            self.index.append({x: i for i, x in enumerate(amb)})
        sub_rows: List[List[Dict[int, GaussianRational]]] = [[] for _ in range(self.top + 1)]
        for rel in self.relations:
            dr = bin(next(iter(rel))[1]).count("1")
            for k in range(dr, self.top + 1):
                for m in ext.by_degree[k - dr]:
                    row: Dict[int, GaussianRational] = {}
                    for (a, mm), c in rel.items():
                        s, prod = ext.mono_mul(m, mm)
                        if s:
                            col = self.index[k][(a, prod)]
                            row[col] = row.get(col, ZERO) + c * s
                    row = {c: v for c, v in row.items() if v}
                    if row:
                        sub_rows[k].append(row)
        self.pivots: List[Dict[int, Dict[int, GaussianRational]]] = []
        self.basis: List[List[int]] = []
        self.basis_pos: List[Dict[int, int]] = []
        for k in range(self.top + 1):
            piv, _ = sparse_rref(sub_rows[k], len(self.ambient[k]) + 1)
            self.pivots.append(piv)
            b = [i for i in range(len(self.ambient[k])) if i not in piv]
            self.basis.append(b)
            self.basis_pos.append({c: p for p, c in enumerate(b)})
        self.top_degree = max((k for k in range(self.top + 1) if self.basis[k]), default=0)
        self._act: Dict[Tuple[int, int], List[Dict[int, GaussianRational]]] = {}

    def dims(self) -> List[int]:
        return [len(self.basis[k]) for k in range(self.top_degree + 1)]

    def dim(self, k: int) -> int:
        return len(self.basis[k]) if 0 <= k <= self.top else 0

    def reduce(self, k: int, vec: Dict[int, GaussianRational]) -> Dict[int, GaussianRational]:
        """Quotient coordinates of an ambient degree-k vector."""
        v = {c: x for c, x in vec.items() if x}
        piv = self.pivots[k]
        for p in sorted(c for c in v if c in piv):
            f = v.get(p)
            if not f:
                continue
            for cc, vv in piv[p].items():
                nv = v.get(cc, ZERO) - f * vv
                if nv:
                    v[cc] = nv
                else:
                    v.pop(cc, None)
        pos = self.basis_pos[k]
        return {pos[c]: x for c, x in v.items()}

    def act(self, g: int, k: int) -> List[Dict[int, GaussianRational]]:
        """Matrix (list of image columns) of left multiplication by e_g: degree k → k+1."""
        key = (g, k)
        r = self._act.get(key)
        if r is not None:
            return r
        out = []
        for col in self.basis[k]:
            a, m = self.ambient[k][col]
            s, prod = self.ext.gen_mul(g, m)
            if not s or k + 1 > self.top:
                out.append({})
                continue
            out.append(self.reduce(k + 1, {self.index[k + 1][(a, prod)]: GaussianRational(s)}))
        self._act[key] = out
        return out

    def generator_degree_zero(self) -> int:
        return self.dim(0)


@dataclass
class Complex:
    """The complex X^{k,ℓ+k} for fixed ℓ, with explicit differentials on demand."""

    case: int
    n: int
    ell: int
    Mn: CaseModule
    M: CaseModule

    def hom_basis(self, ell: int) -> List[Tuple[int, int, int]]:
        """Basis of Hom^ℓ(M_n, M): (a, s, t) with s ∈ M_n^a and t ∈ M^{a+ℓ}."""
        out = []
        for a in range(self.Mn.top_degree + 1):
            for s in range(self.Mn.dim(a)):
                for t in range(self.M.dim(a + ell)):
                    out.append((a, s, t))
        return out

    def poly_basis(self, k: int) -> List[Tuple[int, ...]]:
        return list(itertools.combinations_with_replacement(range(self.Mn.ext.ngens), k))

    def basis(self, k: int) -> List[Tuple[Tuple[int, ...], Tuple[int, int, int]]]:
        """Basis of X^{k, ℓ+k}."""
        return [(p, h) for p in self.poly_basis(k) for h in self.hom_basis(self.ell + k)]

    def dim(self, k: int) -> int:
        return len(self.poly_basis(k)) * len(self.hom_basis(self.ell + k))

    def differential(self, k: int) -> Tuple[int, int, List[Dict[int, GaussianRational]]]:
        """d: X^{k,ℓ+k} → X^{k+1,ℓ+k+1} as (rows, cols, columns)."""
        lk = self.ell + k
        src = self.basis(k)
        tgt_index = {b: i for i, b in enumerate(self.basis(k + 1))}
        Mn, M = self.Mn, self.M
        sgn = -1 if k & 1 else 1
        cols = []
        for P, (a, s, t) in src:
            col: Dict[int, GaussianRational] = {}
            for g in range(Mn.ext.ngens):
                P2 = tuple(sorted(P + (g,)))
                # f(e_g) φ(m): M^{a+lk} → M^{a+lk+1}
                for t2, c in M.act(g % 4, a + lk)[t].items() if M.dim(a + lk + 1) else ():
                    key = tgt_index[(P2, (a, s, t2))]
                    col[key] = col.get(key, ZERO) + c
                # −(−1)^k φ(e_g m'): inputs m' ∈ M_n^{a-1} with e_g m' ∋ s
                if a >= 1 and M.dim(a - 1 + lk + 1):
                    for s2, img in enumerate(Mn.act(g, a - 1)):
                        c = img.get(s)
                        if c:
                            key = tgt_index[(P2, (a - 1, s2, t))]
                            col[key] = col.get(key, ZERO) - c * sgn
            cols.append({r: v for r, v in col.items() if v})
        return len(tgt_index), len(src), cols


def _modules(case: int, n: int) -> Tuple[CaseModule, CaseModule]:
    return CaseModule(case, n), CaseModule(case, 1)


def build_complex(case: int, n: int, ell: int) -> Complex:
    if n not in (1, 2):
        raise ValueError("n must be 1 or 2")
    Mn, M = _modules(case, n)
    return Complex(case, n, ell, Mn, M)


def compose_is_zero(cx: Complex, k: int) -> bool:
    """d^{k+1} ∘ d^k = 0 by explicit matrix product."""
    _, _, d0 = cx.differential(k)
    _, _, d1 = cx.differential(k + 1)
    for col in d0:
        acc: Dict[int, GaussianRational] = {}
        for j, c in col.items():
            for r, v in d1[j].items():
                acc[r] = acc.get(r, ZERO) + c * v
        if any(acc.values()):
            return False
    return True


def check_vanishing(case: int, n: int, ell: int, cx: Optional[Complex] = None) -> Dict[str, int]:
    """Exact dimensions of H⁰(C_ℓ) and H¹(C_ℓ)."""
    cx = cx or build_complex(case, n, ell)
    x0, x1 = cx.dim(0), cx.dim(1)
    r0 = linalg.rank(cx.differential(0)[2]) if x0 and x1 else 0
    r1 = linalg.rank(cx.differential(1)[2]) if x1 and cx.dim(2) else 0
    return {"dimH0": x0 - r0, "dimH1": x1 - r1 - r0, "dimX0": x0, "dimX1": x1, "dimX2": cx.dim(2)}


def in_theorem_range(ell: int) -> Dict[str, bool]:
    return {"H0": ell < 0, "H1": ell + 1 < 0}


# ---------------------------------------------------------------------------
# the W-matrix step


def w_matrix() -> List[List[Dict[int, GaussianRational]]]:
    """The 8×3 matrix of degree-one elements of A (entries as {μ: coefficient})."""
    e = lambda mu, c=ONE: {mu: c}  # noqa: E731
    z: Dict[int, GaussianRational] = {}
    return [
        [e(0), e(3, I), z],
        [e(3), e(0, I), z],
        [z, e(0), e(1, I)],
        [z, e(1), e(0, I)],
        [e(2, I), z, e(0)],
        [e(0, I), z, e(2)],
        [e(1), e(2, -ONE), z],
        [z, e(2), e(3, -ONE)],
    ]


def w_rank(case: int, W: Optional[List[List[Dict[int, GaussianRational]]]] = None) -> Tuple[int, int]:
    """(rank, domain dimension) of W: (M⁰)³ → (M¹)⁸."""
    W = W if W is not None else w_matrix()
    M = CaseModule(case, 1)
    d0, d1 = M.dim(0), M.dim(1)
    cols = []
    for c in range(3):
        for s in range(d0):
            col: Dict[int, GaussianRational] = {}
            for r in range(8):
                for mu, coef in W[r][c].items():
                    for t, v in M.act(mu, 0)[s].items():
                        key = r * d1 + t
                        col[key] = col.get(key, ZERO) + coef * v
            cols.append({k: v for k, v in col.items() if v})
    return linalg.rank(cols), 3 * d0


def w_injectivity() -> Dict[str, dict]:
    out = {}
    for case in (1, 2):
        r, dom = w_rank(case)
        out[f"case{case}"] = {"rank": r, "domain": dom, "injective": r == dom}
    return out


def lambda_submodule_dims() -> List[int]:
    """Graded dims of the Λ-submodule of Λ generated by e⁰e^a + i e^b e^c (a,b,c cyclic)."""
    ext = ExteriorAlgebra(1)
    gens = []
    for (p, q), (r, s) in (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))):
        s1, m1 = ext.seq([p, q])
        s2, m2 = ext.seq([r, s])
        gens.append({m1: GaussianRational(s1), m2: I * s2})
    dims = []
    for k in range(2, 5):
        idx = {m: i for i, m in enumerate(ext.by_degree[k])}
        cols = []
        for g in gens:
            for m in ext.by_degree[k - 2]:
                v: Dict[int, GaussianRational] = {}
                for mm, c in g.items():
                    s, prod = ext.mono_mul(m, mm)
                    if s:
                        v[idx[prod]] = v.get(idx[prod], ZERO) + c * s
                cols.append({a: b for a, b in v.items() if b})
        dims.append(linalg.rank(cols))
    return dims
