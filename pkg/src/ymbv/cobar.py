"""Word-length-truncated cobar construction: a strict BV□ algebra (A, d_A, h_A).

Model. Fix ``W`` external labels ``1..W`` with generic momenta ``p_1..p_W``.
A plane-wave letter is ``(i, S)``: fiber basis vector ``i`` carrying the
momentum ``p_S = Σ_{j∈S} p_j`` of a nonempty label set ``S``. Words in
which a label occurs twice are set to zero; this is the multilinear
(one-particle-per-label) part of the plane-wave algebra, which is closed
under every operation used here and determines all identities by
polarization. On the dual side the letters ``(i, S)*`` generate a free
Gerstenhaber algebra ``G_L``; a derivation of the fiber model acts on it
by distributing its momentum decorations over the labels::

    D_L((i,S)*) = Σ_{words w in D(x_i*)} Σ_{S = S_1 ⊔ … ⊔ S_m} Π_j p_{S_j}^{e_j} · w[(i_j, S_j)*]

* ``C`` has the basis dual to the normal-form words of ``G_L``;
  ``Δ⁰``/``Δ⁻¹`` are the transposes of the product and the bracket.
* ``A`` is the free Gerstenhaber algebra on ``C[-2]`` (a C-letter of
  G-degree ``g`` has A-degree ``2 - g``).
* On C-letters::

    d_A(c) = β(c) + δ¹(c) + (-1)^{c₁} c₁c₂ + (-1)^{z₁-1} [z₁, z₂]
    h_A(c) = α(c) + δ⁻¹(c)

  with ``Δ⁻¹c = c₁⊗c₂``, ``Δ⁰c = z₁⊗z₂``, ``δ¹`` the transpose of
  ``d + Σμ_k + Σν_k`` and ``δ⁻¹`` the transpose of ``h``; ``d_A`` extends
  with the □-anomaly on brackets and ``h_A`` with the bracket anomaly on
  products.

Truncation: d_A and h_A never increase the number of plane-wave letters
(coproducts split them, δ¹ merges them), so working with at most ``W``
labels is exact.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import LetterBudgetExceeded
from .exact_arith import GaussianRational
from .gerstenhaber import (
    Elem,
    FreeGerstenhaber,
    LetterSpace,
    Operator,
    _box_anomaly,
    add_into,
    canonical_operator,
    op_sum,
    scaled,
)
from .ym_complex import N, Momentum4

__all__ = ["CobarModel", "SignConvention", "CobarReport"]

ETA = (-1, 1, 1, 1)
ONE = GaussianRational(1)


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def _labels_of_word(word) -> Tuple[int, ...]:
    out: List[int] = []
    for atom in word:
        for letter in atom:
            out.extend(letter[1])
    return tuple(sorted(out))


def _letters_of_word(word) -> Tuple:
    return tuple(sorted(x for atom in word for x in atom))


class LabelledDuals(LetterSpace):
    """Letters ``(i, S)`` of G_L: dual fiber generator ``i`` at label set ``S``."""

    def __init__(self, degrees: Sequence[int], momenta: Dict[Tuple[int, ...], tuple], names=None):
        self.degrees = tuple(degrees)
        self.momenta = momenta
        self.names = names

    def deg(self, letter):
        return self.degrees[letter[0]]

    def momentum(self, mu, letter):
        return [(self.momenta[letter[1]][mu], letter)]

    def show(self, letter):
        name = self.names[letter[0]] if self.names else str(letter[0])
        return f"dual{name}@{''.join(map(str, letter[1]))}"


class CoLetters(LetterSpace):
    """Letters of A: basis co-words of C (keyed by their G_L normal-form word)."""

    def __init__(self, model: "CobarModel"):
        self.model = model

    def deg(self, letter):
        return 2 - self.model.GL.word_deg(letter)

    def momentum(self, mu, letter):
        return [(self.model.label_momentum(_labels_of_word(letter))[mu], letter)]

    def show(self, letter):
        return "<" + self.model.GL.show_word(letter) + ">"


@dataclass(frozen=True)
class SignConvention:
    """Sign choices for transposes and coproducts (see module doc).

    ``transpose``: 0 = ⟨T†c, v⟩ = ⟨c, Tv⟩; 1 = extra (−1)^{|T||c|}.
    ``coproduct_koszul``: ⟨c₁⊗c₂, u⊗v⟩ carries (−1)^{|c₂||u|}.
    ``mul_term`` / ``lie_term``: overall signs of the coproduct terms of d_A.
    """

    transpose: int = 0
    coproduct_koszul: bool = False
    mul_term: int = 1
    lie_term: int = 1


@dataclass
class CobarReport:
    checks: Dict[str, dict] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v["ok"] for v in self.checks.values())


class CobarModel:
    """The strict algebra (A, d_A, h_A) at letter budget W over fixed label momenta."""

    def __init__(self, ym, momenta: Sequence[Momentum4], signs: SignConvention = SignConvention()):
        self.ym = ym
        self.W = len(momenta)
        self.p = [m.k for m in momenta]
        self.signs = signs
        labels = tuple(range(1, self.W + 1))
        self._pS: Dict[Tuple[int, ...], tuple] = {}
        for r in range(1, self.W + 1):
            for S in itertools.combinations(labels, r):
                self._pS[S] = tuple(sum((self.p[j - 1][mu] for j in S), GaussianRational(0)) for mu in range(4))
        degs = [-d for d in ym.tables.basis.deg]
        self.letters = LabelledDuals(degs, self._pS, ym.tables.basis.names)
        self.GL = FreeGerstenhaber(self.letters)
        self.A = FreeGerstenhaber(CoLetters(self))
        self.maxarity = max(ym.thetas)
        gl = self.GL
        self.alpha = canonical_operator(gl, "alpha")
        self.beta = canonical_operator(gl, "beta")
        self.h_L = self._labelled(ym.h, -1, 0, "h")
        terms = [(1, self._labelled(ym.d, 1, 0, "d"))]
        for k in range(2, self.maxarity + 1):
            terms.append((1, self._labelled(ym.mu(k), 1, k - 1, f"mu{k}")))
            terms.append((1, self._labelled(ym.nu(k), 1, k - 1, f"nu{k}")))
        self._delta1_parts = [op for _, op in terms]
        self.delta1_L = op_sum(gl, 1, 0, terms, name="delta1")
        self._ym_values = self._values()
        self._index_links = self._links()
        self._basis_cache: Dict[tuple, List] = {}
        self._tcache: Dict[tuple, Elem] = {}
        self.dA = Operator(self.A, 1, 0, self._dA_letter, lie_anomaly=_box_anomaly(self.A), name="dA", equivariant=False)
        self.hA = Operator(self.A, -1, 0, self._hA_letter, mul_anomaly=self.A.bracket, name="hA", equivariant=False)

    # -- momenta --------------------------------------------------------
    def label_momentum(self, S: Tuple[int, ...]) -> tuple:
        if len(set(S)) != len(S):
            raise LetterBudgetExceeded("repeated label")
        return self._pS[tuple(sorted(S))]

    def box_scalar(self, S) -> GaussianRational:
        k = self.label_momentum(S)
        out = GaussianRational(0)
        for mu in range(4):
            out = out + k[mu] * k[mu] * ETA[mu]
        return out

    # -- labelled derivations -------------------------------------------
    def _labelled(self, op: Operator, deg: int, ndeg: int, name: str) -> Operator:
        gl = self.GL
        ym_letters = self.ym.letters

        def gen(letter):
            i, S = letter
            base = op.on_letter(ym_letters.letter(i))
            out: Elem = {}
            for word, c in base.items():
                flat = [x for atom in word for x in atom]
                m = len(flat)
                if m > len(S):
                    continue
                for assign in itertools.product(range(m), repeat=len(S)):
                    parts = [[] for _ in range(m)]
                    for lab, slot in zip(S, assign):
                        parts[slot].append(lab)
                    if any(not q for q in parts):
                        continue
                    coef = c
                    for x, q in zip(flat, parts):
                        pq = self._pS[tuple(q)]
                        for mu, e in enumerate(x[1:]):
                            if e:
                                coef = coef * pq[mu] ** e
                    if not coef:
                        continue
                    pos = 0
                    elems = []
                    for atom in word:
                        seq = tuple((x[0], tuple(parts[pos + t])) for t, x in enumerate(atom))
                        pos += len(atom)
                        elems.append(gl.from_seq(seq))
                    add_into(out, gl.mul_many(*elems), coef)
            return out

        return Operator(gl, deg, ndeg, gen, name=f"{name}_L", equivariant=False)

    def _values(self) -> Dict[str, List[Elem]]:
        """Images of the dual generators under h and under d + Σμ_k + Σν_k."""
        ym = self.ym
        parts = [ym.d]
        for k in range(2, self.maxarity + 1):
            parts += [ym.mu(k), ym.nu(k)]
        d1, hv = [], []
        for j in range(N):
            x = ym.letters.letter(j)
            acc: Elem = {}
            for op in parts:
                add_into(acc, op.on_letter(x))
            d1.append(acc)
            hv.append(ym.h.on_letter(x))
        return {"d1": d1, "h": hv}

    def _links(self) -> Dict[str, Dict[Tuple[int, ...], set]]:
        """Sorted index tuple of an image word -> source generators, for δ¹ and h."""
        links: Dict[str, Dict[Tuple[int, ...], set]] = {}
        for key, vals in self._ym_values.items():
            table: Dict[Tuple[int, ...], set] = {}
            for j, val in enumerate(vals):
                for word in val:
                    idx = tuple(sorted(x[0] for atom in word for x in atom))
                    table.setdefault(idx, set()).add(j)
            links[key] = table
        return links

    # -- bases ------------------------------------------------------------
    def basis_words(self, letters: Tuple) -> List:
        """Normal-form basis words of G_L on a set of distinct letters."""
        letters = tuple(sorted(letters))
        b = self._basis_cache.get(letters)
        if b is not None:
            return b
        gl = self.GL
        out = []
        for blocks in _set_partitions(list(letters)):
            choices = [gl._basis(tuple(sorted(bl))).atoms for bl in blocks]
            for atoms in itertools.product(*choices):
                s, w = gl.make_word(list(atoms))
                if s:
                    out.append(w)
        out = sorted(set(out))
        self._basis_cache[letters] = out
        return out

    def gdeg(self, word) -> int:
        return self.GL.word_deg(word)

    # -- transposes -------------------------------------------------------
    def _transpose(self, op: Operator, key: str, word, candidates: Iterable) -> Elem:
        """Σ_v s · coef_w(op v) · v over candidate basis words (result as C-letters in A)."""
        ck = (key, word)
        r = self._tcache.get(ck)
        if r is not None:
            return r
        out: Elem = {}
        cdeg = -self.gdeg(word)
        for v in candidates:
            c = op.on_word(v).get(word)
            if c:
                if self.signs.transpose and (op.deg * cdeg) & 1:
                    c = -c
                add_into(out, {((v,),): 1}, c)
        self._tcache[ck] = out
        return out

    def alpha_T(self, word) -> Elem:
        return self._transpose(self.alpha, "alpha", word, self.basis_words(_letters_of_word(word)))

    def beta_T(self, word) -> Elem:
        return self._transpose(self.beta, "beta", word, self.basis_words(_letters_of_word(word)))

    def _merge_groups(self, word, link_key: str, max_merge: int):
        """(new letter, merged letters) pairs: a letter whose image can contain w's letters."""
        letters = list(_letters_of_word(word))
        links = self._index_links[link_key]
        for k in range(1, max_merge + 1):
            for group in itertools.combinations(range(len(letters)), k):
                G = tuple(letters[g] for g in group)
                idx = tuple(sorted(x[0] for x in G))
                srcs = links.get(idx)
                if not srcs:
                    continue
                S = tuple(sorted(l for x in G for l in x[1]))
                rest = [letters[t] for t in range(len(letters)) if t not in group]
                for j in sorted(srcs):
                    yield (j, S), G, tuple(sorted(rest + [(j, S)]))

    def _restricted_value(self, key: str, new_letter, G) -> Elem:
        """The component of the labelled image of ``new_letter`` whose letters are exactly ``G``."""
        ck = ("rv", key, new_letter, G)
        r = self._tcache.get(ck)
        if r is not None:
            return r
        gl = self.GL
        j = new_letter[0]
        idx = tuple(sorted(x[0] for x in G))
        out: Elem = {}
        for word, c in self._ym_values[key][j].items():
            flat = [x for atom in word for x in atom]
            if tuple(sorted(x[0] for x in flat)) != idx:
                continue
            for perm in set(itertools.permutations(G)):
                if any(x[0] != y[0] for x, y in zip(flat, perm)):
                    continue
                coef = c
                for x, y in zip(flat, perm):
                    pq = self._pS[y[1]]
                    for mu, e in enumerate(x[1:]):
                        if e:
                            coef = coef * pq[mu] ** e
                if not coef:
                    continue
                pos = 0
                elems = []
                for atom in word:
                    elems.append(gl.from_seq(perm[pos:pos + len(atom)]))
                    pos += len(atom)
                add_into(out, gl.mul_many(*elems), coef)
        self._tcache[ck] = out
        return out

    def _merged_transpose(self, key: str, deg: int, word, max_merge: int) -> Elem:
        ck = (key, word)
        r = self._tcache.get(ck)
        if r is not None:
            return r
        out: Elem = {}
        cdeg = -self.gdeg(word)
        for new_letter, G, letters in self._merge_groups(word, key, max_merge):
            val = self._restricted_value(key, new_letter, G)
            if not val:
                continue
            op = Operator(self.GL, deg, 0, lambda x, nl=new_letter, v=val: v if x == nl else {}, equivariant=False)
            for v in self.basis_words(letters):
                c = op.on_word(v).get(word)
                if c:
                    if self.signs.transpose and (deg * cdeg) & 1:
                        c = -c
                    add_into(out, {((v,),): 1}, c)
        self._tcache[ck] = out
        return out

    def delta1_T(self, word) -> Elem:
        return self._merged_transpose("d1", 1, word, self.maxarity)

    def h_T(self, word) -> Elem:
        return self._merged_transpose("h", -1, word, 1)

    def delta1_T_direct(self, word) -> Elem:
        """Reference route: transpose of the full labelled δ¹ over all merge candidates."""
        cands = {v for _, _, L in self._merge_groups(word, "d1", self.maxarity) for v in self.basis_words(L)}
        return self._transpose(self.delta1_L, "delta1_direct", word, sorted(cands))

    def h_T_direct(self, word) -> Elem:
        cands = {v for _, _, L in self._merge_groups(word, "h", 1) for v in self.basis_words(L)}
        return self._transpose(self.h_L, "h_direct", word, sorted(cands))

    # -- coproducts -------------------------------------------------------
    def delta0(self, word) -> List[Tuple[tuple, tuple, object]]:
        """Δ⁰ c_w = Σ coef · c_u ⊗ c_v over splittings of the atoms of w."""
        out = []
        n = len(word)
        gl = self.GL
        for r in range(1, n):
            for sub in itertools.combinations(range(n), r):
                u = tuple(word[i] for i in sub)
                v = tuple(word[i] for i in range(n) if i not in sub)
                s, w = gl.make_word(list(u) + list(v))
                if s and w == word:
                    out.append((u, v, self._co_sign(u, v, s)))
        return out

    def delta_m1(self, word) -> List[Tuple[tuple, tuple, object]]:
        """Δ⁻¹ c_w = Σ coef · c_u ⊗ c_v, transposing the bracket."""
        ck = ("dm1", word)
        r = self._tcache.get(ck)
        if r is not None:
            return r
        letters = _letters_of_word(word)
        n = len(letters)
        out = []
        gl = self.GL
        for r_ in range(1, n):
            for sub in itertools.combinations(range(n), r_):
                L1 = tuple(letters[i] for i in sub)
                L2 = tuple(letters[i] for i in range(n) if i not in sub)
                for u in self.basis_words(L1):
                    for v in self.basis_words(L2):
                        c = gl.bracket_words(u, v).get(word)
                        if c:
                            out.append((u, v, self._co_sign(u, v, c)))
        self._tcache[ck] = out
        return out

    def _co_sign(self, u, v, c):
        if self.signs.coproduct_koszul and (self.gdeg(u) * self.gdeg(v)) & 1:
            return -c
        return c

    # -- d_A and h_A on C-letters ----------------------------------------
    def _dA_letter(self, letter) -> Elem:
        word = letter
        out: Elem = {}
        add_into(out, self.beta_T(word))
        add_into(out, self.delta1_T(word))
        A = self.A
        for u, v, c in self.delta_m1(word):
            cu = 2 - self.gdeg(u)
            add_into(out, A.mul(A.gen(u), A.gen(v)), c * _sign(cu) * self.signs.mul_term)
        for u, v, c in self.delta0(word):
            zu = 2 - self.gdeg(u)
            add_into(out, A.bracket(A.gen(u), A.gen(v)), c * _sign(zu - 1) * self.signs.lie_term)
        return out

    def _hA_letter(self, letter) -> Elem:
        out: Elem = {}
        add_into(out, self.alpha_T(letter))
        add_into(out, self.h_T(letter))
        return out

    def box(self, x: Elem) -> Elem:
        out: Elem = {}
        for w, c in x.items():
            labels = tuple(sorted(l for atom in w for letter in atom for l in _labels_of_word(letter)))
            add_into(out, {w: c}, self.box_scalar(labels))
        return out

    # -- element helpers --------------------------------------------------
    def coletter(self, word) -> Elem:
        return self.A.gen(word)

    def letters_count(self, x: Elem) -> int:
        m = 0
        for w in x:
            m = max(m, sum(len(_letters_of_word(letter)) for atom in w for letter in atom))
        return m

    def primal_letter(self, i: int, label: int) -> Elem:
        """The image of a fiber basis vector under V[-2] ↪ A."""
        return self.A.gen((((i, (label,)),),))

    # -- sampling ---------------------------------------------------------
    def random_coword(self, rng: random.Random, labels: Sequence[int]):
        """A random basis co-word on the given labels (random grouping into letters)."""
        labels = list(labels)
        rng.shuffle(labels)
        groups: List[List[int]] = []
        for lab in labels:
            if groups and rng.random() < 0.2:
                groups[rng.randrange(len(groups))].append(lab)
            else:
                groups.append([lab])
        letters = tuple(sorted((rng.randrange(N), tuple(sorted(g))) for g in groups))
        basis = self.basis_words(letters)
        return basis[rng.randrange(len(basis))]

    def random_element(self, rng: random.Random, max_letters: Optional[int] = None, max_coletters: int = 3) -> Elem:
        """A random A-word (product or bracket of up to three C-letters) on disjoint labels."""
        W = self.W if max_letters is None else max_letters
        if W > self.W:
            raise LetterBudgetExceeded(f"{W} letters exceed the budget {self.W}")
        total = rng.randint(1, W)
        labels = rng.sample(range(1, self.W + 1), total)
        ncl = rng.randint(1, min(max_coletters, total))
        cuts = sorted(rng.sample(range(1, total), ncl - 1)) if ncl > 1 else []
        chunks = [labels[a:b] for a, b in zip([0] + cuts, cuts + [total])]
        elems = [self.A.gen(self.random_coword(rng, ch)) for ch in chunks]
        x = elems[0]
        for e in elems[1:]:
            x = self.A.mul(x, e) if rng.random() < 0.5 else self.A.bracket(x, e)
        return x

    def homogeneous_parts(self, x: Elem) -> List[Elem]:
        parts: Dict[int, Elem] = {}
        for w, c in x.items():
            parts.setdefault(self.A.word_deg(w), {})[w] = c
        return [parts[d] for d in sorted(parts)]


# ---------------------------------------------------------------------------
# identities


def _sub(a: Elem, b: Elem, c=1) -> Elem:
    out = dict(a)
    return add_into(out, b, -c)


def strictness_defects(model: CobarModel, x: Elem) -> Dict[str, Elem]:
    """d_A²x, h_A²x and (d_Ah_A + h_Ad_A − □)x."""
    dA, hA = model.dA, model.hA
    comm = dA(hA(x))
    add_into(comm, hA(dA(x)))
    return {
        "dA^2": dA(dA(x)),
        "hA^2": hA(hA(x)),
        "[dA,hA]-box": _sub(comm, model.box(x)),
    }


def seven_term(model: CobarModel, x: Elem, y: Elem, z: Elem) -> Elem:
    """The obstruction to h_A being second order on homogeneous x, y, z."""
    A, h = model.A, model.hA
    a, b = A.deg(x), A.deg(y)
    m = A.mul
    out: Elem = {}
    add_into(out, h(m(m(x, y), z)))
    add_into(out, m(h(m(x, y)), z), -1)
    add_into(out, m(x, h(m(y, z))), -_sign(a))
    add_into(out, m(y, h(m(x, z))), -_sign((a + 1) * b))
    add_into(out, m(m(h(x), y), z))
    add_into(out, m(m(x, h(y)), z), _sign(a))
    add_into(out, m(m(x, y), h(z)), _sign(a + b))
    return out


def bracket_defect(model: CobarModel, x: Elem, y: Elem) -> Elem:
    """(−1)^x [x, y] − h_A(xy) + h_A(x)y + (−1)^x x h_A(y): the bracket as the defect of h_A."""
    A, h = model.A, model.hA
    sx = _sign(A.deg(x))
    out = scaled(A.bracket(x, y), sx)
    add_into(out, h(A.mul(x, y)), -1)
    add_into(out, A.mul(h(x), y))
    add_into(out, A.mul(x, h(y)), sx)
    return out


def kinematic_jacobi(model: CobarModel, x: Elem, y: Elem, z: Elem) -> Tuple[Elem, Elem]:
    """For x, y, z ∈ ker h_A: the Jacobiator J and J − h_A(xyz).

    J = h_A(xy)z + (−1)^{x(y+z)} h_A(yz)x + (−1)^{z(x+y)} h_A(zx)y; the second
    entry vanishing shows J ∈ im h_A, so every ℓ with ℓ∘h_A = 0 kills J.
    """
    A, h = model.A, model.hA
    a, b, c = A.deg(x), A.deg(y), A.deg(z)
    m = A.mul
    J = m(h(m(x, y)), z)
    add_into(J, m(h(m(y, z)), x), _sign(a * (b + c)))
    add_into(J, m(h(m(z, x)), y), _sign(c * (a + b)))
    return J, _sub(J, h(m(m(x, y), z)))


def inclusion_defects(model: CobarModel, tables, label: int = 1) -> Dict[str, int]:
    """Compare d_A, h_A on single-letter co-words with the fiber d and h at momentum p_label.

    A single letter (i, S) is the image of the fiber basis vector i at momentum p_S;
    returns the number of fiber indices where d_A∘I ≠ I∘d (resp. for h).
    """
    from .ym_complex import differential_at, h_at

    k = Momentum4(*model.label_momentum((label,)))
    dm, hm = differential_at(tables, k), h_at(tables, k)
    bad = {"d": 0, "h": 0}
    for name, op, mat in (("d", model.dA, dm), ("h", model.hA, hm)):
        for i in range(N):
            got = op(model.primal_letter(i, label))
            want: Elem = {}
            for j in range(N):
                v = mat.get((j, i))
                if v:
                    add_into(want, model.primal_letter(j, label), v)
            if got != want:
                bad[name] += 1
    return bad


def random_configuration(rng: random.Random, W: int) -> List[Momentum4]:
    """W generic rational momenta (every label-subset sum off-shell and nonzero)."""
    while True:
        moms = [
            Momentum4(*[GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 5))) for _ in range(4)])
            for _ in range(W)
        ]
        ok = True
        for r in range(1, W + 1):
            for S in itertools.combinations(range(W), r):
                tot = moms[S[0]]
                for j in S[1:]:
                    tot = tot + moms[j]
                if tot.is_zero() or not tot.square():
                    ok = False
        if ok:
            return moms


def certify(
    ym,
    samples: int = 200,
    seed: int = 0,
    max_letters: int = 4,
    configurations: int = 4,
    signs: SignConvention = SignConvention(),
) -> CobarReport:
    """Seeded certification of strictness, second order, the bracket identity and kinematic Jacobi.

    ``samples`` words are split evenly over ``configurations`` random momentum
    configurations; each sample contributes one strictness test, one seven-term
    triple, one bracket pair and one Jacobi triple.
    """
    rng = random.Random(seed)
    names = ["dA^2", "hA^2", "[dA,hA]-box", "seven_term", "bracket", "kinematic_jacobi", "equivariance"]
    counts = {n: [0, 0] for n in names}  # [tested, failed]
    witnesses: Dict[str, str] = {}
    per = -(-samples // configurations)
    done = 0
    jacobi_nonzero = 0
    for _ in range(configurations):
        model = CobarModel(ym, random_configuration(rng, max_letters), signs)
        A = model.A
        for _ in range(min(per, samples - done)):
            done += 1
            x = model.random_element(rng, max_letters)

            def record(name, val, what):
                counts[name][0] += 1
                if val:
                    counts[name][1] += 1
                    witnesses.setdefault(name, what)

            for name, val in strictness_defects(model, x).items():
                record(name, val, A.sexpr(x))
            mu = rng.randrange(4)
            lhs = model.dA(A.momentum(mu, x))
            rhs = A.momentum(mu, model.dA(x))
            record("equivariance", _sub(lhs, rhs), A.sexpr(x))
            tri = _disjoint_elements(model, rng, 3, max_letters)
            record("seven_term", seven_term(model, *tri), " | ".join(A.sexpr(t) for t in tri))
            pair = _disjoint_elements(model, rng, 2, max_letters)
            record("bracket", bracket_defect(model, *pair), " | ".join(A.sexpr(t) for t in pair))
            for _attempt in range(20):
                pre = _disjoint_elements(model, rng, 3, max_letters)
                kers = [model.hA(t) for t in pre]
                if all(kers):
                    break
            else:
                continue
            J, dev = kinematic_jacobi(model, *kers)
            if J:
                jacobi_nonzero += 1
            record("kinematic_jacobi", dev, " | ".join(A.sexpr(t) for t in pre))
    report = CobarReport()
    for name, (tested, failed) in counts.items():
        report.checks[name] = {"ok": failed == 0, "samples": tested, "failures": failed}
        if name in witnesses:
            report.checks[name]["witness"] = witnesses[name]
    report.checks["kinematic_jacobi"]["nonzero_jacobiators"] = jacobi_nonzero
    return report


def _disjoint_elements(model: CobarModel, rng: random.Random, count: int, max_letters: int) -> List[Elem]:
    """``count`` random single-C-letter elements on disjoint label sets (≤ max_letters labels in total)."""
    total = rng.randint(count, max_letters)
    labels = rng.sample(range(1, model.W + 1), total)
    cuts = sorted(rng.sample(range(1, total), count - 1))
    chunks = [labels[a:b] for a, b in zip([0] + cuts, cuts + [total])]
    return [model.A.gen(model.random_coword(rng, ch)) for ch in chunks]


def _set_partitions(items: List):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
