"""Exact arithmetic over Q(i): scalars, polynomials, affine and small quadratic solving.

Polynomials (:class:`PolyKP`) live in one shared ring: the four momentum
symbols ``k0..k3`` plus any number of named parameters. Every coefficient in
the package is either a :class:`GaussianRational` or a :class:`PolyKP`.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .errors import Inconsistent, NotFound
from .kernel import GaussianRational, sparse_rref

__all__ = [
    "GaussianRational",
    "PolyKP",
    "LinearSystem",
    "AffineSolution",
    "I",
    "ONE",
    "ZERO",
    "gr",
    "K",
    "Q_BOX",
    "poly_ops",
    "substitute",
    "solve_affine",
    "find_instance",
    "DEFAULT_CANDIDATES",
    "gr_to_json",
    "gr_from_json",
    "scalar_to_json",
    "scalar_from_json",
]

Scalar = Union[GaussianRational, "PolyKP"]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)


def gr(x) -> GaussianRational:
    """Coerce int / Fraction / str / complex-like to a GaussianRational."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    if isinstance(x, str):
        return _parse_gr(x)
    if isinstance(x, complex):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    raise TypeError(f"cannot convert {x!r} to GaussianRational")


def _parse_gr(s: str) -> GaussianRational:
    s = s.replace(" ", "")
    if s.endswith("*I") or s.endswith("I"):
        # forms: "I", "-I", "3/2*I", "1+2*I", "1-I"
        body = s[:-2] if s.endswith("*I") else s[:-1]
        cut = max(body.rfind("+", 1), body.rfind("-", 1))
        if cut > 0 and body[cut - 1] not in "/":
            re, im = body[:cut], body[cut:]
        else:
            re, im = "0", body
        if im in ("", "+"):
            im = "1"
        elif im == "-":
            im = "-1"
        return GaussianRational(Fraction(re), Fraction(im))
    return GaussianRational(Fraction(s))


# ---------------------------------------------------------------------------
# symbols

_SYM_IDS: Dict[str, int] = {}
_SYM_NAMES: List[str] = []


def _sym_id(name: str) -> int:
    sid = _SYM_IDS.get(name)
    if sid is None:
        sid = len(_SYM_NAMES)
        _SYM_IDS[name] = sid
        _SYM_NAMES.append(name)
    return sid


for _n in ("k0", "k1", "k2", "k3"):
    _sym_id(_n)

K_NAMES = ("k0", "k1", "k2", "k3")


def _name_key(name: str):
    # momentum symbols first, then parameters with natural ordering of digit runs
    if name in K_NAMES:
        return (0, int(name[1]), ())
    parts = re.split(r"(\d+)", name)
    return (1, 0, tuple((0, int(p), "") if p.isdigit() else (1, 0, p) for p in parts if p))


Monomial = Tuple[Tuple[int, int], ...]


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for s, e in m2:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


def _mono_key(m: Monomial):
    return (sum(e for _, e in m), tuple((_name_key(_SYM_NAMES[s]), e) for s, e in m))


class PolyKP:
    """Polynomial over Q(i) in momentum symbols and named parameters.

    ``terms`` maps a monomial (sorted tuple of ``(symbol id, exponent)``) to a
    nonzero GaussianRational. Instances are treated as immutable.
    """

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, GaussianRational]] = None):
        self.terms: Dict[Monomial, GaussianRational] = (
            {m: c for m, c in terms.items() if c} if terms else {}
        )
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c) -> "PolyKP":
        c = gr(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def symbol(cls, name: str) -> "PolyKP":
        return cls({((_sym_id(name), 1),): ONE})

    @classmethod
    def from_monomial(cls, powers: Mapping[str, int], coeff=1) -> "PolyKP":
        mono = tuple(sorted((_sym_id(n), e) for n, e in powers.items() if e))
        return cls({mono: gr(coeff)})

    @staticmethod
    def lift(x) -> "PolyKP":
        if isinstance(x, PolyKP):
            return x
        return PolyKP.const(x)

    # -- queries ----------------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def constant_value(self) -> GaussianRational:
        return self.terms.get((), ZERO)

    def symbols(self) -> List[str]:
        ids = {s for m in self.terms for s, _ in m}
        return sorted((_SYM_NAMES[i] for i in ids), key=_name_key)

    def total_degree(self, names: Optional[Iterable[str]] = None) -> int:
        if not self.terms:
            return -1
        if names is None:
            return max(sum(e for _, e in m) for m in self.terms)
        ids = {_sym_id(n) for n in names}
        return max(sum(e for s, e in m if s in ids) for m in self.terms)

    def sorted_terms(self):
        """Terms in the canonical graded-lexicographic order (for serialization)."""
        return sorted(self.terms.items(), key=lambda t: _mono_key(t[0]))

    def __eq__(self, other):
        if isinstance(other, PolyKP):
            return self.terms == other.terms
        if isinstance(other, (GaussianRational, int, Fraction)):
            o = gr(other)
            if not o:
                return not self.terms
            return len(self.terms) == 1 and self.terms.get(()) == o
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- arithmetic -------------------------------------------------------
    def __neg__(self) -> "PolyKP":
        return PolyKP({m: -c for m, c in self.terms.items()})

    def __add__(self, other) -> "PolyKP":
        if not isinstance(other, PolyKP):
            if isinstance(other, (GaussianRational, int, Fraction)):
                other = PolyKP.const(other)
            else:
                return NotImplemented
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for m, c in small.items():
            cur = out.get(m)
            if cur is None:
                out[m] = c
            else:
                nc = cur + c
                if nc:
                    out[m] = nc
                else:
                    del out[m]
        r = PolyKP.__new__(PolyKP)
        r.terms = out
        r._hash = None
        return r

    __radd__ = __add__

    def __sub__(self, other) -> "PolyKP":
        if not isinstance(other, PolyKP):
            if isinstance(other, (GaussianRational, int, Fraction)):
                other = PolyKP.const(other)
            else:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PolyKP":
        return (-self) + other

    def __mul__(self, other) -> "PolyKP":
        if isinstance(other, PolyKP):
            out: Dict[Monomial, GaussianRational] = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    m = _mono_mul(m1, m2)
                    cur = out.get(m)
                    v = c1 * c2
                    if cur is None:
                        out[m] = v
                    else:
                        nv = cur + v
                        if nv:
                            out[m] = nv
                        else:
                            del out[m]
            r = PolyKP.__new__(PolyKP)
            r.terms = out
            r._hash = None
            return r
        if isinstance(other, (GaussianRational, int, Fraction)):
            o = gr(other)
            if not o:
                return PolyKP()
            r = PolyKP.__new__(PolyKP)
            r.terms = {m: c * o for m, c in self.terms.items()}
            r._hash = None
            return r
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "PolyKP":
        if isinstance(other, (GaussianRational, int, Fraction)):
            return self * gr(other).inverse()
        if isinstance(other, PolyKP) and other.is_constant() and other:
            return self * other.constant_value().inverse()
        return NotImplemented

    def __pow__(self, n: int) -> "PolyKP":
        out = PolyKP.const(1)
        for _ in range(n):
            out = out * self
        return out

    # -- substitution -----------------------------------------------------
    def substitute(self, bindings: Mapping[str, object]) -> "PolyKP":
        """Replace bound symbols by GaussianRational or PolyKP values."""
        if not bindings:
            return self
        bid = {}
        for n, v in bindings.items():
            sid = _SYM_IDS.get(n)
            if sid is not None:
                bid[sid] = v if isinstance(v, PolyKP) else gr(v)
        if not bid:
            return self
        out = PolyKP()
        acc: Dict[Monomial, GaussianRational] = {}
        for m, c in self.terms.items():
            if not any(s in bid for s, _ in m):
                cur = acc.get(m)
                acc[m] = c if cur is None else cur + c
                continue
            rest = []
            scal = c
            polys = []
            for s, e in m:
                v = bid.get(s)
                if v is None:
                    rest.append((s, e))
                elif isinstance(v, PolyKP):
                    polys.append(v ** e)
                else:
                    scal = scal * (v ** e)
            if not scal:
                continue
            term = PolyKP({tuple(rest): scal})
            for p in polys:
                term = term * p
            out = out + term
        return out + PolyKP(acc)

    def evaluate(self, bindings: Mapping[str, object]) -> GaussianRational:
        p = self.substitute(bindings)
        if not p.is_constant():
            raise ValueError(f"unbound symbols remain: {p.symbols()}")
        return p.constant_value()

    def coefficient_split(self, names: Sequence[str]):
        """Split into ``{rest monomial: {unknown monomial: coeff}}``.

        ``names`` are the unknowns; ``rest`` collects all other symbols.
        """
        ids = {_sym_id(n) for n in names}
        out: Dict[Monomial, Dict[Monomial, GaussianRational]] = {}
        for m, c in self.terms.items():
            u = tuple((s, e) for s, e in m if s in ids)
            r = tuple((s, e) for s, e in m if s not in ids)
            out.setdefault(r, {})[u] = c
        return out

    # -- display ----------------------------------------------------------
    def __repr__(self):
        return f"PolyKP({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            mono = "*".join(
                _SYM_NAMES[s] if e == 1 else f"{_SYM_NAMES[s]}^{e}" for s, e in m
            )
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif c == ONE:
                parts.append(mono)
            elif c == -ONE:
                parts.append("-" + mono)
            else:
                parts.append(f"({cs})*{mono}")
        return " + ".join(parts)

    # -- serialization ----------------------------------------------------
    def to_json(self):
        return [
            [[[_SYM_NAMES[s], e] for s, e in m], gr_to_json(c)] for m, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, data) -> "PolyKP":
        terms = {}
        for mono, c in data:
            m = tuple(sorted((_sym_id(n), int(e)) for n, e in mono))
            terms[m] = gr_from_json(c)
        return cls(terms)


K = tuple(PolyKP.symbol(n) for n in K_NAMES)
#: the wave operator symbol -k0^2 + k1^2 + k2^2 + k3^2
Q_BOX = -(K[0] * K[0]) + K[1] * K[1] + K[2] * K[2] + K[3] * K[3]


def gr_to_json(c: GaussianRational) -> dict:
    return {"re": str(c.re), "im": str(c.im)}


def gr_from_json(d) -> GaussianRational:
    if isinstance(d, dict):
        return GaussianRational(Fraction(d["re"]), Fraction(d.get("im", "0")))
    return gr(d)


def scalar_to_json(c):
    if isinstance(c, PolyKP):
        return {"poly": c.to_json()}
    return gr_to_json(gr(c))


def scalar_from_json(d):
    if isinstance(d, dict) and "poly" in d:
        return PolyKP.from_json(d["poly"])
    return gr_from_json(d)


def poly_ops(a, b, op: str) -> PolyKP:
    """Binary ring operation on polynomials ("add", "mul") or unary "neg" on ``a``."""
    a = PolyKP.lift(a)
    if op == "neg":
        return -a
    b = PolyKP.lift(b)
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown op {op!r}")


def substitute(p, bindings: Mapping[str, object]) -> PolyKP:
    return PolyKP.lift(p).substitute(bindings)


# ---------------------------------------------------------------------------
# affine systems


@dataclass
class LinearSystem:
    """Equations (PolyKP, understood as ``== 0``) affine in ``unknowns``.

    Coefficients may contain momentum symbols or other non-unknown symbols;
    each monomial in those is a separate scalar equation.
    """

    unknowns: List[str]
    equations: List[PolyKP] = field(default_factory=list)

    def add(self, eq) -> None:
        self.equations.append(PolyKP.lift(eq))


@dataclass
class AffineSolution:
    solution: Dict[str, PolyKP]
    free: List[str]
    rank: int

    def bindings(self) -> Dict[str, PolyKP]:
        return dict(self.solution)


def _expand_rows(sys: LinearSystem):
    index = {n: j for j, n in enumerate(sys.unknowns)}
    ncols = len(sys.unknowns)
    ids = {_sym_id(n): j for n, j in index.items()}
    for eq in sys.equations:
        groups = PolyKP.lift(eq).coefficient_split(sys.unknowns)
        for rest in sorted(groups, key=_mono_key):
            row = {}
            for u, c in groups[rest].items():
                if not u:
                    row[ncols] = c
                elif len(u) == 1 and u[0][1] == 1:
                    row[ids[u[0][0]]] = c
                else:
                    names = [(_SYM_NAMES[s], e) for s, e in u]
                    raise ValueError(f"equation is not affine in the unknowns: {names}")
            yield row


def solve_affine(sys: LinearSystem) -> AffineSolution:
    """Exact RREF solve. Raises :class:`Inconsistent` if some row reduces to 0 = c != 0."""
    ncols = len(sys.unknowns)
    pivots, bad = sparse_rref(_expand_rows(sys), ncols)
    if bad is not None:
        raise Inconsistent(f"0 = {bad[ncols]} survives reduction")
    names = sys.unknowns
    free = [names[j] for j in range(ncols) if j not in pivots]
    sol: Dict[str, PolyKP] = {}
    for p in sorted(pivots):
        row = pivots[p]
        val: Dict[Monomial, GaussianRational] = {}
        for c, v in row.items():
            if c == p:
                continue
            if c == ncols:
                val[()] = -v
            else:
                val[((_sym_id(names[c]), 1),)] = -v
        sol[names[p]] = PolyKP(val)
    return AffineSolution(sol, free, len(pivots))


# ---------------------------------------------------------------------------
# small quadratic systems

DEFAULT_CANDIDATES: Tuple[GaussianRational, ...] = tuple(
    gr(x)
    for x in (
        0,
        1,
        -1,
        GaussianRational(0, 1),
        GaussianRational(0, -1),
        Fraction(1, 2),
        GaussianRational(0, 2),
        GaussianRational(0, -2),
        2,
        -2,
    )
)


def _subst_all(eqs, bindings):
    out = []
    for e in eqs:
        e = e.substitute(bindings)
        if e:
            out.append(e)
    return out


def _propagate(eqs, unknowns, assigned):
    """Solve every affine equation, substitute back, repeat. Returns (eqs, exprs) or None."""
    exprs: Dict[str, PolyKP] = {}
    while True:
        live = [u for u in unknowns if u not in assigned and u not in exprs]
        if any(e.is_constant() for e in eqs):
            return None
        affine = [e for e in eqs if e.total_degree(live) <= 1]
        if not affine:
            return eqs, exprs
        try:
            sol = solve_affine(LinearSystem(live, affine))
        except Inconsistent:
            return None
        if not sol.solution:
            return eqs, exprs
        exprs = {n: v.substitute(sol.solution) for n, v in exprs.items()}
        exprs.update(sol.solution)
        eqs = _subst_all([e for e in eqs if e.total_degree(live) > 1], sol.solution)


def find_instance(
    equations: Sequence[PolyKP],
    unknowns: Optional[Sequence[str]] = None,
    candidates: Sequence = DEFAULT_CANDIDATES,
    max_nodes: int = 200000,
) -> Dict[str, GaussianRational]:
    """First assignment from the candidate list solving a system of degree <= 2.

    Unknowns are tried in the given order (default: sorted symbol names of all
    non-momentum symbols); after each choice all affine consequences are
    solved and substituted. Raises :class:`NotFound` when the search is
    exhausted.
    """
    eqs = [PolyKP.lift(e) for e in equations if PolyKP.lift(e)]
    if unknowns is None:
        names = set()
        for e in eqs:
            names.update(e.symbols())
        unknowns = sorted((n for n in names if n not in K_NAMES), key=_name_key)
    unknowns = list(unknowns)
    cands = [gr(c) for c in candidates]
    for e in eqs:
        if e.total_degree(unknowns) > 2:
            raise ValueError("find_instance expects equations of degree <= 2")
    nodes = [0]

    def finish(assigned, exprs):
        full = dict(assigned)
        # unconstrained unknowns take the first candidate
        for u in unknowns:
            if u not in full and u not in exprs:
                full[u] = cands[0]
        pending = dict(exprs)
        while pending:
            progress = False
            for n, v in list(pending.items()):
                vv = v.substitute(full)
                if vv.is_constant():
                    full[n] = vv.constant_value()
                    del pending[n]
                    progress = True
            if not progress:
                return None
        for e in equations:
            if PolyKP.lift(e).substitute(full):
                return None
        return full

    def search(eqs, assigned, exprs):
        nodes[0] += 1
        if nodes[0] > max_nodes:
            raise NotFound("search budget exhausted")
        res = _propagate(eqs, unknowns, {**assigned, **{n: None for n in exprs}})
        if res is None:
            return None
        eqs, new_exprs = res
        if new_exprs:
            exprs = {n: v.substitute(new_exprs) for n, v in exprs.items()}
            exprs.update(new_exprs)
        if not eqs:
            return finish(assigned, exprs)
        present = set()
        for e in eqs:
            present.update(e.symbols())
        var = next(u for u in unknowns if u in present and u not in assigned and u not in exprs)
        for c in cands:
            b = {var: c}
            out = search(
                _subst_all(eqs, b),
                {**assigned, var: c},
                {n: v.substitute(b) for n, v in exprs.items()},
            )
            if out is not None:
                return out
        return None

    result = search(eqs, {}, {})
    if result is None:
        raise NotFound("candidate list exhausted")
    return {u: result[u] for u in unknowns}
