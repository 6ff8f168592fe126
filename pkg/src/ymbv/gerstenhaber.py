"""Free Gerstenhaber algebra on graded letters, with anomalous operators.

Elements are finite sums of *words*: graded-commutative products of *Lie
atoms*, each atom a bracket monomial in the letters. The product has degree
0 and the bracket degree -1, so a letter of degree ``|x|`` sits in the Lie
algebra with parity ``|x| - 1``.

Normal forms
------------
* An atom is stored as a tuple of letters read as the left-normed bracket
  ``[[..[x1, x2], ..], xn]``; a single letter is a 1-tuple.
* For each multiset of letters a basis of the bracket monomials is fixed
  once: left-normed brackets of the distinct orderings, in lexicographic
  order, keeping those whose image in the tensor algebra (bracket ↦ graded
  commutator) is independent of the earlier ones. Any bracket expression is
  rewritten over that basis by solving in the tensor algebra, which is exact
  (the free Lie algebra embeds in the tensor algebra).
* A word is the tuple of its atoms sorted by ``(length, letters)`` with the
  Koszul sign of the sort; a repeated odd atom kills the word.

Letters are supplied by a :class:`LetterSpace`, which gives degrees and the
action of the momentum symbols ``k_μ`` (the Hopf action: on products and
brackets ``k_μ`` acts by the Leibniz rule).

Operators
---------
An :class:`Operator` is determined by its values on letters plus optional
anomalies, and is extended by::

    s(a·b)   = (-1)^a g(a, b) + s(a)·b + (-1)^(|s| a) a·s(b)
    s([a,b]) = (-1)^a h(a, b) + [s a, b] + (-1)^(|s|(a-1)) [a, s b]

where ``a`` is the first atom of a word (resp. the left part of a bracket).
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DecorationCapExceeded, NotADerivation
from .exact_arith import K_NAMES, GaussianRational, PolyKP, _SYM_NAMES
from .kernel import sparse_rref

Letter = tuple
Atom = Tuple[Letter, ...]
Word = Tuple[Atom, ...]
Elem = Dict[Word, object]

__all__ = [
    "LetterSpace",
    "DecoratedLetters",
    "FreeGerstenhaber",
    "GElement",
    "Operator",
    "commutator",
    "big_gamma",
    "canonical_operator",
    "op_sum",
    "zero_operator",
    "derivation_defect",
    "Sampler",
    "axiom_defects",
    "operator_calculus",
    "box",
]


# ---------------------------------------------------------------------------
# coefficient helpers


def _is_zero(c) -> bool:
    return not c


def _acc(target: Elem, word: Word, c) -> None:
    cur = target.get(word)
    v = c if cur is None else cur + c
    if v:
        target[word] = v
    elif cur is not None:
        del target[word]


def add_into(target: Elem, src: Elem, scale=1) -> Elem:
    if scale == 1:
        for w, c in src.items():
            _acc(target, w, c)
    else:
        for w, c in src.items():
            _acc(target, w, c * scale)
    return target


def scaled(src: Elem, scale) -> Elem:
    if not scale:
        return {}
    if scale == 1:
        return dict(src)
    out = {}
    for w, c in src.items():
        v = c * scale
        if v:
            out[w] = v
    return out


# ---------------------------------------------------------------------------
# letters


class LetterSpace:
    """Degrees and momentum action of the letters of a free algebra."""

    def deg(self, letter: Letter) -> int:
        raise NotImplementedError

    def momentum(self, mu: int, letter: Letter) -> List[Tuple[object, Letter]]:
        """``k_μ · letter`` as a list of ``(coefficient, letter)``."""
        raise NotImplementedError

    def undecorate(self, letter: Letter):
        """``(base letter, kexp)`` when the letter is a decorated base letter, else ``None``."""
        return None

    def show(self, letter: Letter) -> str:
        return repr(letter)


class DecoratedLetters(LetterSpace):
    """Letters ``(index, e0, e1, e2, e3)``: a base generator with the decoration k^e.

    ``degrees[index]`` is the degree of the base generator; decorations do
    not change degrees. ``names`` is used for display only. ``cap`` bounds
    the total decoration degree of a single letter.
    """

    def __init__(self, degrees: Sequence[int], names: Optional[Sequence[str]] = None, cap: int = 4):
        self.degrees = tuple(degrees)
        self.names = tuple(names) if names else tuple(f"x{i}" for i in range(len(degrees)))
        self.cap = cap

    def letter(self, index: int, kexp=(0, 0, 0, 0)) -> Letter:
        return (index,) + tuple(kexp)

    def deg(self, letter):
        return self.degrees[letter[0]]

    def momentum(self, mu, letter):
        e = list(letter)
        e[1 + mu] += 1
        if sum(e[1:]) > self.cap:
            raise DecorationCapExceeded(
                f"decoration of {self.show(letter)} would exceed total degree {self.cap}"
            )
        return [(1, tuple(e))]

    def undecorate(self, letter):
        return (letter[0], 0, 0, 0, 0), letter[1:]

    def show(self, letter):
        name = "dual" + self.names[letter[0]]
        dec = "*".join(
            K_NAMES[mu] if e == 1 else f"{K_NAMES[mu]}^{e}" for mu, e in enumerate(letter[1:]) if e
        )
        return f"{dec}*{name}" if dec else name


# ---------------------------------------------------------------------------
# the algebra


def _atom_key(atom: Atom):
    return (len(atom), atom)


class _LieBasis:
    """Basis of the bracket monomials on one multiset of letters."""

    __slots__ = ("atoms", "pivots", "inverse")

    def __init__(self, atoms, pivots, inverse):
        self.atoms = atoms  # list of basis atoms
        self.pivots = pivots  # list of tensor words
        self.inverse = inverse  # r x r inverse of [expansion of atom j at pivot i]; None = identity


class FreeGerstenhaber:
    """Normal-form arithmetic in the free Gerstenhaber algebra on a :class:`LetterSpace`."""

    def __init__(self, letters: LetterSpace):
        self.letters = letters
        self._deg_cache: Dict[Atom, int] = {}
        self._tensor_cache: Dict[Atom, Dict[tuple, object]] = {}
        self._basis_cache: Dict[tuple, _LieBasis] = {}
        self._bracket_cache: Dict[Tuple[Atom, Atom], List[Tuple[Atom, object]]] = {}
        self._seq_cache: Dict[Atom, List[Tuple[Atom, object]]] = {}
        self._mom_cache: Dict[Tuple[int, Atom], Elem] = {}

    # -- degrees ----------------------------------------------------------
    def atom_deg(self, atom: Atom) -> int:
        d = self._deg_cache.get(atom)
        if d is None:
            ld = self.letters.deg
            d = sum(ld(x) for x in atom) - (len(atom) - 1)
            self._deg_cache[atom] = d
        return d

    def word_deg(self, word: Word) -> int:
        return sum(self.atom_deg(a) for a in word)

    @staticmethod
    def word_ndeg(word: Word) -> int:
        return sum(len(a) for a in word)

    # -- tensor model of brackets -----------------------------------------
    def _lpar(self, letter) -> int:
        return (self.letters.deg(letter) - 1) & 1

    def tensor(self, atom: Atom) -> Dict[tuple, object]:
        """Image of a left-normed bracket in the tensor algebra (graded commutators)."""
        t = self._tensor_cache.get(atom)
        if t is not None:
            return t
        if len(atom) == 1:
            t = {atom: 1}
        else:
            left = self.tensor(atom[:-1])
            y = atom[-1]
            ly = self._lpar(y)
            lx = sum(self._lpar(x) for x in atom[:-1]) & 1
            sign = -1 if (lx * ly) % 2 == 0 else 1
            t = {}
            for w, c in left.items():
                _acc(t, w + (y,), c)
                _acc(t, (y,) + w, c * sign)
        self._tensor_cache[atom] = t
        return t

    def _basis(self, multiset: tuple) -> _LieBasis:
        b = self._basis_cache.get(multiset)
        if b is not None:
            return b
        # Left-normed brackets starting with the smallest letter span, and they
        # come first in lexicographic order, so the greedy choice below only
        # ever picks among them.
        lo = min(multiset)
        rest = list(multiset)
        rest.remove(lo)
        perms = sorted({(lo,) + p for p in itertools.permutations(rest)})
        if lo not in rest:
            # The expansion of (lo, *p) contains the word (lo, *p) with
            # coefficient 1 and no other word starting with lo: the atoms are
            # independent and their own pivots, with identity coordinates.
            basis = _LieBasis(perms, perms, None)
            self._basis_cache[multiset] = basis
            return basis
        chosen: List[Atom] = []
        rows = []
        word_ids: Dict[tuple, int] = {}
        rank = 0
        for p in perms:
            t = self.tensor(p)
            row = {}
            for w, c in t.items():
                j = word_ids.setdefault(w, len(word_ids))
                row[j] = GaussianRational(c) if isinstance(c, int) else c
            trial = rows + [row]
            piv, _ = sparse_rref(trial, len(word_ids) + 1)
            if len(piv) > rank:
                rank = len(piv)
                rows.append(row)
                chosen.append(p)
        ids_word = {j: w for w, j in word_ids.items()}
        piv, _ = sparse_rref(rows, len(word_ids) + 1)
        pivot_cols = sorted(piv)
        pivots = [ids_word[j] for j in pivot_cols]
        r = len(chosen)
        # A[i][a] = expansion of basis atom a at pivot word i; coordinates are A^{-1} v
        A = [{a: rows[a][j] for a in range(r) if rows[a].get(j)} for j in pivot_cols]
        inv = [[0] * r for _ in range(r)]
        for e in range(r):
            eqs = [{**A[i], r: GaussianRational(-1)} if i == e else dict(A[i]) for i in range(r)]
            sol, bad = sparse_rref(eqs, r)
            assert bad is None and len(sol) == r
            for p, row in sol.items():
                v = row.get(r)
                if v:
                    inv[p][e] = -v
        basis = _LieBasis(chosen, pivots, inv)
        self._basis_cache[multiset] = basis
        return basis

    def lie_coords(self, tvec: Dict[tuple, object], multiset: tuple) -> List[Tuple[Atom, object]]:
        """Rewrite a tensor-algebra vector (known to be a Lie element) over the atom basis."""
        b = self._basis(multiset)
        if b.inverse is None:
            return [(a, tvec[a]) for a in b.atoms if tvec.get(a)]
        vals = [tvec.get(w, 0) for w in b.pivots]
        out = []
        for a, atom in enumerate(b.atoms):
            acc = 0
            for i, v in enumerate(vals):
                if v:
                    m = b.inverse[a][i]
                    if m:
                        acc = v * m + acc
            if acc:
                out.append((atom, acc))
        return out

    def normalize_seq(self, seq: Atom) -> List[Tuple[Atom, object]]:
        """A left-normed bracket of arbitrary letters, rewritten over the basis."""
        r = self._seq_cache.get(seq)
        if r is None:
            if len(seq) == 1:
                r = [(seq, 1)]
            else:
                r = self.lie_coords(self.tensor(seq), tuple(sorted(seq)))
            self._seq_cache[seq] = r
        return r

    # -- words ------------------------------------------------------------
    def make_word(self, atoms: Sequence[Atom]):
        """Sort atoms into a canonical word. Returns ``(sign, word)``, sign 0 if the word vanishes."""
        n = len(atoms)
        if n <= 1:
            return 1, tuple(atoms)
        order = sorted(range(n), key=lambda i: _atom_key(atoms[i]))
        word = tuple(atoms[i] for i in order)
        odd = [i for i in order if self.atom_deg(atoms[i]) & 1]
        for x, y in zip(word, word[1:]):
            if x == y and self.atom_deg(x) & 1:
                return 0, None
        inv = 0
        for i in range(len(odd)):
            for j in range(i + 1, len(odd)):
                if odd[i] > odd[j]:
                    inv += 1
        return (-1 if inv & 1 else 1), word

    def elem_from_atoms(self, pairs: Iterable[Tuple[Atom, object]]) -> Elem:
        out: Elem = {}
        for atom, c in pairs:
            _acc(out, (atom,), c)
        return out

    def mul_words(self, w1: Word, w2: Word):
        if not w1:
            return 1, w2
        if not w2:
            return 1, w1
        return self.make_word(w1 + w2)

    def mul(self, x: Elem, y: Elem) -> Elem:
        out: Elem = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                s, w = self.mul_words(w1, w2)
                if s:
                    _acc(out, w, c1 * c2 * s if s == 1 else -(c1 * c2))
        return out

    def mul_many(self, *elems: Elem) -> Elem:
        out = elems[0]
        for e in elems[1:]:
            out = self.mul(out, e)
        return out

    def bracket_atoms(self, a: Atom, b: Atom) -> List[Tuple[Atom, object]]:
        key = (a, b)
        r = self._bracket_cache.get(key)
        if r is not None:
            return r
        ta, tb = self.tensor(a), self.tensor(b)
        la = sum(self._lpar(x) for x in a) & 1
        lb = sum(self._lpar(x) for x in b) & 1
        sign = -1 if (la * lb) % 2 == 0 else 1
        t: Dict[tuple, object] = {}
        for u, cu in ta.items():
            for v, cv in tb.items():
                c = cu * cv
                _acc(t, u + v, c)
                _acc(t, v + u, c * sign)
        r = self.lie_coords(t, tuple(sorted(a + b))) if t else []
        self._bracket_cache[key] = r
        return r

    def bracket_words(self, w1: Word, w2: Word) -> Elem:
        if not w1 or not w2:
            return {}
        if len(w1) > 1:
            a, rest = w1[:1], w1[1:]
            da, dr = self.atom_deg(w1[0]), self.word_deg(rest)
            out = self.mul({a: 1}, self.bracket_words(rest, w2))
            sgn = -1 if (da * dr) & 1 else 1
            add_into(out, self.mul({rest: 1}, self.bracket_words(a, w2)), sgn)
            return out
        if len(w2) > 1:
            b, rest = w2[:1], w2[1:]
            da, db = self.atom_deg(w1[0]), self.atom_deg(w2[0])
            out = self.mul(self.bracket_words(w1, b), {rest: 1})
            sgn = -1 if ((da - 1) * db) & 1 else 1
            add_into(out, self.mul({b: 1}, self.bracket_words(w1, rest)), sgn)
            return out
        return self.elem_from_atoms(self.bracket_atoms(w1[0], w2[0]))

    def bracket(self, x: Elem, y: Elem) -> Elem:
        out: Elem = {}
        for w1, c1 in x.items():
            for w2, c2 in y.items():
                add_into(out, self.bracket_words(w1, w2), c1 * c2)
        return out

    # -- constructors -----------------------------------------------------
    def gen(self, letter: Letter) -> Elem:
        return {((letter,),): 1}

    def from_seq(self, seq: Sequence[Letter]) -> Elem:
        return self.elem_from_atoms(self.normalize_seq(tuple(seq)))

    # -- momentum (Hopf) action --------------------------------------------
    def momentum_atom(self, mu: int, atom: Atom) -> Elem:
        key = (mu, atom)
        r = self._mom_cache.get(key)
        if r is not None:
            return r
        out: Elem = {}
        for pos, x in enumerate(atom):
            for c, y in self.letters.momentum(mu, x):
                if not c:
                    continue
                seq = atom[:pos] + (y,) + atom[pos + 1:]
                for a, cc in self.normalize_seq(seq):
                    _acc(out, (a,), cc * c)
        self._mom_cache[key] = out
        return out

    def momentum(self, mu: int, x: Elem) -> Elem:
        out: Elem = {}
        for w, c in x.items():
            for pos, atom in enumerate(w):
                rest_l, rest_r = w[:pos], w[pos + 1:]
                for (na,), cc in self.momentum_atom(mu, atom).items():
                    # k_μ is even: no Koszul sign moving past other atoms
                    s, nw = self.make_word(rest_l + (na,) + rest_r)
                    if s:
                        _acc(out, nw, c * cc * s if s == 1 else -(c * cc))
        return out

    def apply_kpoly(self, poly, x: Elem) -> Elem:
        """Apply a polynomial in the momentum symbols (coefficients may carry parameters)."""
        poly = PolyKP.lift(poly)
        out: Elem = {}
        cache: Dict[tuple, Elem] = {(0, 0, 0, 0): x}

        def power(e):
            r = cache.get(e)
            if r is None:
                mu = next(i for i in range(4) if e[i])
                prev = list(e)
                prev[mu] -= 1
                r = self.momentum(mu, power(tuple(prev)))
                cache[e] = r
            return r

        for mono, c in poly.terms.items():
            e = [0, 0, 0, 0]
            rest = []
            for s, p in mono:
                if s < 4:
                    e[s] = p
                else:
                    rest.append((s, p))
            coef = PolyKP({tuple(rest): c}) if rest else c
            add_into(out, power(tuple(e)), coef)
        return out

    # -- queries ----------------------------------------------------------
    def deg(self, x: Elem) -> Optional[int]:
        ds = {self.word_deg(w) for w in x}
        return ds.pop() if len(ds) == 1 else None

    def ndeg(self, x: Elem) -> Optional[int]:
        ds = {self.word_ndeg(w) for w in x}
        return ds.pop() if len(ds) == 1 else None

    def show_word(self, word: Word) -> str:
        def atom_s(a):
            s = self.letters.show(a[0])
            for x in a[1:]:
                s = f"(lie {s} {self.letters.show(x)})"
            return s

        if len(word) == 1:
            return atom_s(word[0])
        return "(mul " + " ".join(atom_s(a) for a in word) + ")"

    def sexpr(self, x: Elem) -> str:
        """Stable s-expression text of an element (debug / golden tests)."""
        if not x:
            return "0"
        terms = sorted(x.items(), key=lambda t: (self.word_ndeg(t[0]), t[0]))
        return "(+ " + " ".join(f"(* {c} {self.show_word(w)})" for w, c in terms) + ")"


class GElement:
    """Immutable value wrapper over a normal-form element, with operator overloads."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: FreeGerstenhaber, terms: Optional[Elem] = None):
        self.alg = alg
        self.terms: Elem = {w: c for w, c in (terms or {}).items() if c}

    def __add__(self, o: "GElement"):
        return GElement(self.alg, add_into(dict(self.terms), o.terms))

    def __sub__(self, o: "GElement"):
        return GElement(self.alg, add_into(dict(self.terms), o.terms, -1))

    def __neg__(self):
        return GElement(self.alg, scaled(self.terms, -1))

    def __mul__(self, o):
        if isinstance(o, GElement):
            return GElement(self.alg, self.alg.mul(self.terms, o.terms))
        return GElement(self.alg, scaled(self.terms, o))

    def __rmul__(self, c):
        return GElement(self.alg, scaled(self.terms, c))

    def bracket(self, o: "GElement"):
        return GElement(self.alg, self.alg.bracket(self.terms, o.terms))

    def momentum(self, mu: int):
        return GElement(self.alg, self.alg.momentum(mu, self.terms))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, o):
        return isinstance(o, GElement) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        return self.alg.sexpr(self.terms)


# ---------------------------------------------------------------------------
# operators


class Operator:
    """A (possibly anomalous) operator on a free Gerstenhaber algebra.

    ``gen(letter) -> Elem`` gives the value on letters; for letter spaces
    with decorations ``gen`` only needs to handle undecorated letters when
    ``equivariant`` is true (the value on ``k^e x`` is ``k^e`` applied to
    the value on ``x``). ``mul_anomaly(a, b)`` and ``lie_anomaly(a, b)`` take
    and return elements.
    """

    def __init__(
        self,
        alg: FreeGerstenhaber,
        deg: int,
        ndeg: int,
        gen: Callable[[Letter], Elem],
        mul_anomaly: Optional[Callable[[Elem, Elem], Elem]] = None,
        lie_anomaly: Optional[Callable[[Elem, Elem], Elem]] = None,
        name: str = "op",
        equivariant: bool = True,
    ):
        self.alg = alg
        self.deg = deg
        self.ndeg = ndeg
        self._gen = gen
        self.mul_anomaly = mul_anomaly
        self.lie_anomaly = lie_anomaly
        self.name = name
        self.equivariant = equivariant
        self._letter_memo: Dict[Letter, Elem] = {}
        self._seq_memo: Dict[Atom, Elem] = {}

    @property
    def is_derivation(self) -> bool:
        return self.mul_anomaly is None and self.lie_anomaly is None

    # values on letters, memoized per letter
    def on_letter(self, letter: Letter) -> Elem:
        r = self._letter_memo.get(letter)
        if r is not None:
            return r
        alg = self.alg
        und = alg.letters.undecorate(letter) if self.equivariant else None
        if und is not None and any(und[1]):
            base, kexp = und
            r = self.on_letter(base)
            for mu, e in enumerate(kexp):
                for _ in range(e):
                    r = alg.momentum(mu, r)
        else:
            r = self._gen(letter)
        self._letter_memo[letter] = r
        return r

    def gen_values(self, letters: Iterable[Letter]) -> Dict[Letter, Elem]:
        return {x: self.on_letter(x) for x in letters}

    def _on_seq(self, seq: Atom) -> Elem:
        """Value on a raw left-normed bracket (not necessarily a basis atom)."""
        r = self._seq_memo.get(seq)
        if r is not None:
            return r
        alg = self.alg
        if len(seq) == 1:
            r = self.on_letter(seq[0])
        else:
            X, y = seq[:-1], seq[-1:]
            dX = alg.atom_deg(X)
            Xe = alg.from_seq(X)
            ye = alg.gen(y[0])
            r = alg.bracket(self._on_seq(X), ye)
            sgn = -1 if (self.deg * (dX - 1)) & 1 else 1
            add_into(r, alg.bracket(Xe, self.on_letter(y[0])), sgn)
            if self.lie_anomaly is not None:
                add_into(r, self.lie_anomaly(Xe, ye), -1 if dX & 1 else 1)
        self._seq_memo[seq] = r
        return r

    def on_word(self, word: Word) -> Elem:
        alg = self.alg
        if len(word) == 0:
            return {}
        if len(word) == 1:
            return self._on_seq(word[0])
        a, rest = word[:1], word[1:]
        da = alg.atom_deg(word[0])
        out = alg.mul(self._on_seq(word[0]), {rest: 1})
        sgn = -1 if (self.deg * da) & 1 else 1
        add_into(out, alg.mul({a: 1}, self.on_word(rest)), sgn)
        if self.mul_anomaly is not None:
            add_into(out, self.mul_anomaly({a: 1}, {rest: 1}), -1 if da & 1 else 1)
        return out

    def apply(self, x: Elem) -> Elem:
        out: Elem = {}
        for w, c in x.items():
            add_into(out, self.on_word(w), c)
        return out

    def __call__(self, x):
        if isinstance(x, GElement):
            return GElement(self.alg, self.apply(x.terms))
        return self.apply(x)

    def scaled(self, c) -> "Operator":
        g, m, l = self._gen, self.mul_anomaly, self.lie_anomaly
        return Operator(
            self.alg,
            self.deg,
            self.ndeg,
            lambda x: scaled(g(x), c),
            (lambda a, b: scaled(m(a, b), c)) if m else None,
            (lambda a, b: scaled(l(a, b), c)) if l else None,
            name=f"{c}*{self.name}",
            equivariant=self.equivariant,
        )

    def __repr__(self):
        return f"Operator({self.name}, deg={self.deg}, ndeg={self.ndeg})"


def zero_operator(alg: FreeGerstenhaber, deg: int, ndeg: int, name="0") -> Operator:
    return Operator(alg, deg, ndeg, lambda x: {}, name=name)


def op_sum(alg: FreeGerstenhaber, deg: int, ndeg: int, terms: Sequence[Tuple[object, Operator]], name="sum") -> Operator:
    """The derivation whose letter values are Σ c·op(letter) (anomalies are dropped)."""
    terms = list(terms)

    def gen(x):
        out: Elem = {}
        for c, op in terms:
            add_into(out, op.on_letter(x), c)
        return out

    return Operator(alg, deg, ndeg, gen, name=name)


def commutator(x: Operator, y: Operator, name: Optional[str] = None) -> Operator:
    """Graded commutator ``xy - (-1)^{|x||y|} yx``, returned as the derivation with those letter values."""
    sgn = -1 if (x.deg * y.deg) & 1 else 1

    def gen(letter):
        out = x.apply(y.on_letter(letter))
        add_into(out, y.apply(x.on_letter(letter)), -sgn)
        return out

    return Operator(
        x.alg, x.deg + y.deg, x.ndeg + y.ndeg, gen, name=name or f"[{x.name},{y.name}]"
    )


def derivation_defect(op: Operator, direct: Callable[[Elem], Elem], samples: Iterable[Elem]) -> List[Elem]:
    """Compare ``op`` (extended as a derivation) with a direct evaluation on samples.

    Returns the nonzero differences; raises :class:`NotADerivation` via
    :func:`check_derivation` if requested there.
    """
    out = []
    for s in samples:
        diff = add_into(op.apply(s), direct(s), -1)
        if diff:
            out.append(diff)
    return out


def check_derivation(x: Operator, y: Operator, samples: Iterable[Elem]) -> None:
    """Spot-check that ``commutator(x, y)`` is a derivation; raise :class:`NotADerivation` if not."""
    c = commutator(x, y)
    sgn = -1 if (x.deg * y.deg) & 1 else 1

    def direct(e):
        out = x.apply(y.apply(e))
        add_into(out, y.apply(x.apply(e)), -sgn)
        return out

    bad = derivation_defect(c, direct, samples)
    if bad:
        raise NotADerivation(f"[{x.name},{y.name}] is not a derivation on {len(bad)} samples")


# ---------------------------------------------------------------------------
# canonical operators

ETA = (-1, 1, 1, 1)


def _box_anomaly(alg: FreeGerstenhaber):
    """(a, b) ↦ □(ab) − (□a)b − a(□b) = 2 Σ_μ η_μμ (k_μ a)(k_μ b)."""

    def f(a, b):
        out: Elem = {}
        for mu in range(4):
            add_into(out, alg.mul(alg.momentum(mu, a), alg.momentum(mu, b)), 2 * ETA[mu])
        return out

    return f


def _ndeg_elem(alg, x: Elem) -> int:
    n = alg.ndeg(x)
    if n is None:
        raise ValueError("element is not homogeneous in word degree")
    return n


def canonical_operator(alg: FreeGerstenhaber, kind: str) -> Operator:
    """The operators α, β, γ and the curvature K.

    alpha: degree -1, zero on letters, product anomaly (a, b) ↦ [a, b]
    beta:  degree +1, zero on letters, bracket anomaly □(ab) − (□a)b − a(□b)
    gamma: degree +1, zero on letters, bracket anomaly n_a n_b ab
    K:     derivation with K(x) = □x on letters
    (the recursion supplies the (-1)^a prefactor).
    """
    zero = lambda x: {}  # noqa: E731
    if kind == "alpha":
        return Operator(alg, -1, 0, zero, mul_anomaly=alg.bracket, name="alpha")
    if kind == "beta":
        return Operator(alg, 1, 0, zero, lie_anomaly=_box_anomaly(alg), name="beta")
    if kind == "gamma":

        def g(a, b):
            return scaled(alg.mul(a, b), _ndeg_elem(alg, a) * _ndeg_elem(alg, b))

        return Operator(alg, 1, 0, zero, lie_anomaly=g, name="gamma")
    if kind == "K":
        return Operator(alg, 0, 0, lambda x: box(alg, alg.gen(x)), name="K", equivariant=False)
    raise ValueError(f"unknown canonical operator {kind!r}")


def box(alg: FreeGerstenhaber, x: Elem) -> Elem:
    """The wave operator □ = -k0² + k1² + k2² + k3² acting by the Hopf action."""
    out: Elem = {}
    for mu in range(4):
        add_into(out, alg.momentum(mu, alg.momentum(mu, x)), ETA[mu])
    return out


def big_gamma(x: Operator, gamma: Optional[Operator] = None) -> Operator:
    """Γ(x): zero when ndeg x = 0, else the derivation with letter values 2/((n+1)n) γ(x(letter))."""
    alg = x.alg
    n = x.ndeg
    if n == 0:
        return zero_operator(alg, x.deg + 1, 0, name=f"Gamma({x.name})")
    g = gamma or canonical_operator(alg, "gamma")
    c = Fraction(2, (n + 1) * n)
    cg = GaussianRational(c)

    def gen(letter):
        return scaled(g.apply(x.on_letter(letter)), cg)

    return Operator(alg, x.deg + 1, n, gen, name=f"Gamma({x.name})")


# ---------------------------------------------------------------------------
# seeded sampling and the operator-calculus checks


class Sampler:
    """Seeded random letters, words, elements and derivations over decorated letters.

    ``dec`` bounds the total decoration of sampled letters, keeping every
    check below the letter space's decoration cap.
    """

    def __init__(self, alg: FreeGerstenhaber, rng, dec: int = 1):
        self.alg = alg
        self.rng = rng
        self.dec = dec
        self.base = list(range(len(alg.letters.degrees)))

    def letter(self, index: Optional[int] = None) -> Letter:
        rng = self.rng
        i = rng.choice(self.base) if index is None else index
        e = [0, 0, 0, 0]
        for _ in range(rng.randint(0, self.dec)):
            e[rng.randrange(4)] += 1
        return self.alg.letters.letter(i, e)

    def coeff(self) -> GaussianRational:
        rng = self.rng
        return GaussianRational(Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 1, 2])))

    def word(self, n: int, tries: int = 50) -> Elem:
        """A nonzero product of random brackets with ``n`` letters in total."""
        alg, rng = self.alg, self.rng
        for _ in range(tries):
            sizes, left = [], n
            while left:
                s = rng.randint(1, left)
                sizes.append(s)
                left -= s
            out: Elem = {(): self.coeff()}
            for s in sizes:
                out = alg.mul(out, alg.from_seq([self.letter() for _ in range(s)]))
                if not out:
                    break
            if out:
                return out
        raise RuntimeError(f"no nonzero word with {n} letters after {tries} tries")

    def element(self, max_ndeg: int = 4, terms: int = 3) -> Elem:
        """A nonzero, not necessarily homogeneous, sum of random words."""
        out: Elem = {}
        while not out:
            for _ in range(self.rng.randint(1, terms)):
                add_into(out, self.word(self.rng.randint(1, max_ndeg)))
        return out

    def homogeneous(self, n: int, terms: int = 2) -> Elem:
        """A nonzero sum of words with ``n`` letters and one common degree."""
        alg = self.alg
        out = self.word(n)
        d = alg.deg(out)
        for _ in range(terms - 1):
            w = self.word(n)
            if alg.deg(w) == d:
                add_into(out, w)
        return out if out else self.word(n)

    def derivation(self, n: int, support: int = 2) -> Operator:
        """A random equivariant derivation of ndeg ``n`` supported on a few base letters."""
        alg = self.alg
        degs = alg.letters.degrees
        g0 = self.rng.choice(self.base)
        v0 = self.homogeneous(n + 1)
        shift = alg.deg(v0) - degs[g0]
        values = {g0: v0}
        for _ in range(support - 1):
            g = self.rng.choice(self.base)
            if g in values:
                continue
            for _ in range(10):
                v = self.homogeneous(n + 1)
                if alg.deg(v) == degs[g] + shift:
                    values[g] = v
                    break
        return _table_derivation(alg, values, shift, n, "delta")

    def letter_map(self) -> Operator:
        """A random equivariant derivation of ndeg 0: letters to combinations of letters."""
        alg = self.alg
        degs = alg.letters.degrees
        shift = self.rng.choice([-1, 0, 1])
        values = {}
        for g in self.base:
            targets = [j for j in self.base if degs[j] == degs[g] + shift]
            v: Elem = {}
            for j in targets:
                if self.rng.random() < 0.5:
                    add_into(v, alg.gen(self.letter(j)), self.coeff())
            if v:
                values[g] = v
        return _table_derivation(alg, values, shift, 0, "delta0")


def _table_derivation(alg, values: Dict[int, Elem], deg: int, ndeg: int, name: str) -> Operator:
    def gen(letter):
        v = values.get(letter[0])
        return dict(v) if v else {}

    return Operator(alg, deg, ndeg, gen, name=name)


def axiom_defects(alg: FreeGerstenhaber, a: Elem, b: Elem, c: Elem) -> Dict[str, Elem]:
    """The five Gerstenhaber axioms on homogeneous a, b, c; every value must vanish."""
    da, db, dc = alg.deg(a), alg.deg(b), alg.deg(c)
    m, br = alg.mul, alg.bracket

    def sg(e):
        return -1 if e & 1 else 1

    out = {
        "commutativity": add_into(m(a, b), m(b, a), -sg(da * db)),
        "associativity": add_into(m(m(a, b), c), m(a, m(b, c)), -1),
        "antisymmetry": add_into(br(a, b), br(b, a), sg((da + 1) * (db + 1))),
        "jacobi": add_into(
            add_into(br(a, br(b, c)), br(b, br(c, a)), sg((da + 1) * (db + dc))),
            br(c, br(a, b)),
            sg((dc + 1) * (da + db)),
        ),
        "poisson": add_into(
            add_into(br(m(a, b), c), m(a, br(b, c)), -1), m(b, br(a, c)), -sg(da * db)
        ),
    }
    return out


def _same_on_letters(x: Operator, y: Operator, letters, sign=1) -> Optional[Letter]:
    for g in letters:
        if add_into(dict(x.on_letter(g)), y.on_letter(g), -sign):  # letter values are memoized
            return g
    return None


def operator_calculus(alg: FreeGerstenhaber, samples: int = 500, seed: int = 0) -> Dict[str, dict]:
    """Exact, seeded checks of the operator identities on ``samples`` draws each.

    * the five Gerstenhaber axioms on random homogeneous triples;
    * α² = β² = γ² = 0 on random elements through ndeg 4;
    * αβ + βα + K = □·id on random elements;
    * (αγ + γα)w = ½n(n−1)w on homogeneous words, n = 1..4;
    * (d_αΓ + Γd_α)δ = δ and Γ²δ = 0 for random derivations of ndeg 1..3;
    * Γ[δ, x] = (−1)^δ [δ, Γx] for ndeg-0 δ and random derivations x.

    Derivations are compared on their letter values (which determine them);
    d_α(Γδ) is additionally compared with α∘Γδ ± Γδ∘α on a random element.
    Each entry is ``{"ok", "checked", "witness"}`` with the failing sample
    printed as an s-expression.
    """
    import random

    rng = random.Random(seed)
    S = Sampler(alg, rng)
    alpha, beta, gamma, K = (canonical_operator(alg, k) for k in ("alpha", "beta", "gamma", "K"))
    report: Dict[str, dict] = {}

    def record(name, count, witness):
        report[name] = {"ok": witness is None, "checked": count}
        if witness is not None:
            report[name]["witness"] = witness

    bad = None
    for _ in range(samples):
        a, b, c = (S.word(rng.randint(1, 2)) for _ in range(3))
        for name, v in axiom_defects(alg, a, b, c).items():
            if v:
                bad = f"{name}: a={alg.sexpr(a)} b={alg.sexpr(b)} c={alg.sexpr(c)}"
                break
        if bad:
            break
    record("gerstenhaber_axioms", samples, bad)

    for op in (alpha, beta, gamma):
        bad = None
        for _ in range(samples):
            x = S.element()
            if op.apply(op.apply(x)):
                bad = alg.sexpr(x)
                break
        record(f"{op.name}^2", samples, bad)

    bad = None
    for _ in range(samples):
        x = S.element()
        lhs = alpha.apply(beta.apply(x))
        add_into(lhs, beta.apply(alpha.apply(x)))
        add_into(lhs, K.apply(x))
        if add_into(lhs, box(alg, x), -1):
            bad = alg.sexpr(x)
            break
    record("alpha*beta+beta*alpha+K=box", samples, bad)

    bad = None
    count = 0
    for n in range(1, 5):
        for _ in range(samples):
            w = S.word(n)
            lhs = alpha.apply(gamma.apply(w))
            add_into(lhs, gamma.apply(alpha.apply(w)))
            count += 1
            if add_into(lhs, w, -Fraction(n * (n - 1), 2)):
                bad = f"n={n}: {alg.sexpr(w)}"
                break
        if bad:
            break
    record("kappa_scaling", count, bad)

    bad_id = bad_sq = bad_der = None
    for _ in range(samples):
        n = rng.randint(1, 3)
        delta = S.derivation(n)
        G = big_gamma(delta, gamma)
        lhs = op_sum(
            alg,
            delta.deg,
            n,
            [(1, commutator(alpha, G)), (1, big_gamma(commutator(alpha, delta), gamma))],
        )
        letters = [S.letter(g) for g in rng.sample(S.base, 4)]
        support = [S.letter(g) for g in S.base if delta.on_letter(alg.letters.letter(g))]
        g = _same_on_letters(lhs, delta, support + letters)
        if g is not None and bad_id is None:
            bad_id = f"n={n} at {alg.letters.show(g)}"
        g = _same_on_letters(big_gamma(G, gamma), zero_operator(alg, G.deg + 1, n), support)
        if g is not None and bad_sq is None:
            bad_sq = f"n={n} at {alg.letters.show(g)}"
        x = S.element(max_ndeg=2)
        direct = alpha.apply(G.apply(x))
        add_into(direct, G.apply(alpha.apply(x)), 1 if (G.deg & 1) else -1)
        if add_into(commutator(alpha, G).apply(x), direct, -1) and bad_der is None:
            bad_der = alg.sexpr(x)
    record("d_alpha*Gamma+Gamma*d_alpha=1", samples, bad_id)
    record("Gamma^2", samples, bad_sq)
    record("d_alpha_is_derivation", samples, bad_der)

    bad = None
    for _ in range(samples):
        d0 = S.letter_map()
        x = S.derivation(rng.randint(1, 3))
        lhs = big_gamma(commutator(d0, x), gamma)
        rhs = commutator(d0, big_gamma(x, gamma))
        letters = [S.letter(g) for g in S.base]
        g = _same_on_letters(lhs, rhs, letters, -1 if d0.deg & 1 else 1)
        if g is not None:
            bad = f"at {alg.letters.show(g)}"
            break
    record("Gamma_commutes_with_ndeg0", samples, bad)
    report_ok = all(v["ok"] for v in report.values())
    report["ok"] = report_ok  # type: ignore[assignment]
    return report
