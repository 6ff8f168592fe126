"""Plane-wave Feynman machinery: S, E, Sₙ, Tₙ, the primal θ₃, and partial amplitudes.

A :class:`Wave` is a 16-vector tagged with a momentum. Momenta are
4-tuples of exact scalars (GaussianRational) or of symbolic ``PolyKP``
linear forms, so the same code checks identities numerically and as
polynomial identities in independent symbolic momenta. Products add
momenta; ``d`` and ``h`` act through the fiber tables at the carried
momentum; the propagator ``h♯ = h/k²`` needs ``k² ≠ 0``.

Degrees in signs are the unshifted degrees of the fiber basis (same
parity as the shifted ones). All multilinear maps split their arguments
into degree-homogeneous parts first.

Tree-sum sign convention. With ``E(x) = x`` and, for blocks of two or
more legs, ``E_L = h♯(λ_L)``, the tree sum is::

    λ_L = Σ_{L = A|B} ε(A) E_A E_B,   ε(A) = (-1)^{|x_A| + |A| + |x_last(A)| + 1}

where ``|x_A|`` is the total degree and ``x_last(A)`` the last leg of
``A``. This is the unique-up-to-normalization choice making ``λ_L``
d-closed for closed inputs at off-shell internal momenta, normalized by
``λ(x, y) = xy``; the partial amplitude is ``Mₙ = p∘λₙ∘i⊗ⁿ``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import DegenerateKinematics, OnShellPole
from .exact_arith import K_NAMES, GaussianRational, PolyKP, gr
from .ym_complex import (
    N,
    Homology,
    Momentum4,
    StructureTables,
    fiber_product,
    homology_at,
)

__all__ = [
    "Wave",
    "WaveCalculus",
    "theta_primal_tensor",
    "symbolic_momentum",
    "null_momentum",
    "null_kinematics",
    "complex_null_pair",
    "ExternalLeg",
    "theta3_checks",
    "lemma_identities",
    "bcj_check",
    "random_coords",
    "amplitude_checks",
]

ETA = (-1, 1, 1, 1)


# ---------------------------------------------------------------------------
# momenta


def symbolic_momentum(label: str) -> Tuple[PolyKP, ...]:
    """Four independent symbols ``{label}_0 .. {label}_3``."""
    return tuple(PolyKP.symbol(f"{label}_{mu}") for mu in range(4))


def _msum(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _msquare(k):
    out = None
    for mu in range(4):
        t = k[mu] * k[mu] * ETA[mu]
        out = t if out is None else out + t
    return out


def _as_momentum(k) -> tuple:
    if isinstance(k, Momentum4):
        return k.k
    return tuple(k)


def _is_zero_momentum(k) -> bool:
    return not any(k)


def null_momentum(rng: random.Random, size: int = 6) -> Momentum4:
    """A random nonzero rational null momentum from an integer Pythagorean quadruple.

    ``(m²+n²+p²+q²)² = (2(mq+np))² + (2(nq−mp))² + (m²+n²−p²−q²)²``,
    with a random energy sign and a random rational scale.
    """
    while True:
        m, n, p, q = (rng.randint(-size, size) for _ in range(4))
        t = m * m + n * n + p * p + q * q
        if t == 0:
            continue
        x, y, z = 2 * (m * q + n * p), 2 * (n * q - m * p), m * m + n * n - p * p - q * q
        s = Fraction(rng.choice([-1, 1]) * rng.randint(1, 5), rng.randint(1, 4))
        return Momentum4(s * t, s * x, s * y, s * z)


def complex_null_pair(rng: random.Random, size: int = 5) -> List[Momentum4]:
    """Two non-collinear null momenta over Q(i) with a null (nonzero) sum.

    The rows ``r0, r1, r2`` of the quaternion rotation matrix of a random
    integer quaternion are orthogonal with equal norm ``t``; then
    ``k1 = (t, r0)`` and ``w = (0, r1 + i r2)`` are null and orthogonal, and
    ``k2 = w + c·k1``.
    """
    while True:
        a, b, c, d = (rng.randint(-size, size) for _ in range(4))
        t = a * a + b * b + c * c + d * d
        if t == 0:
            continue
        r0 = (a * a + b * b - c * c - d * d, 2 * (b * c - a * d), 2 * (b * d + a * c))
        r1 = (2 * (b * c + a * d), a * a - b * b + c * c - d * d, 2 * (c * d - a * b))
        r2 = (2 * (b * d - a * c), 2 * (c * d + a * b), a * a - b * b - c * c + d * d)
        k1 = Momentum4(t, *r0)
        s = Fraction(rng.randint(1, 4), rng.randint(1, 3))
        w = Momentum4(0, *(GaussianRational(s * x, s * y) for x, y in zip(r1, r2)))
        cc = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
        k2 = w + Momentum4(*(x * cc for x in k1.k))
        if (k1 + k2).is_zero():
            continue
        return [k1, k2]


def _dot(a: Momentum4, b: Momentum4) -> GaussianRational:
    out = GaussianRational(0)
    for mu in range(4):
        out = out + a.k[mu] * b.k[mu] * ETA[mu]
    return out


def null_kinematics(rng: random.Random, n: int, total_null: bool = True, tries: int = 1000) -> List[Momentum4]:
    """n null momenta whose total is null (and nonzero), with every proper subset sum of size ≥ 2 off-shell.

    The last momentum is ``λ·v`` for a random null direction ``v`` with
    ``λ = −K²/(2K·v)``, ``K`` the sum of the others. For n = 2 a null total
    forces collinear momenta, so the second one is a rational multiple of
    the first.
    """
    if n == 2 and total_null:
        k = null_momentum(rng)
        c = Fraction(rng.choice([1, 2, 3, 5]), rng.choice([1, 2, 3, 7]))
        return [k, Momentum4(*(x * c for x in k.k))]
    for _ in range(tries):
        ks = [null_momentum(rng) for _ in range(n - 1)]
        if total_null and n >= 2:
            K = ks[0]
            for k in ks[1:]:
                K = K + k
            v = null_momentum(rng)
            kv = _dot(K, v)
            if not kv:
                continue
            lam = -(K.square()) / (kv * 2)
            if not lam:
                continue
            ks.append(Momentum4(*(lam * x for x in v.k)))
        else:
            ks.append(null_momentum(rng))
        if _generic(ks, total_null):
            return ks
    raise DegenerateKinematics(f"no generic null configuration found for n={n}")


def _generic(ks: Sequence[Momentum4], total_null: bool) -> bool:
    n = len(ks)
    total = ks[0]
    for k in ks[1:]:
        total = total + k
    if total.is_zero() or (total_null and total.square()):
        return False
    for r in range(2, n):
        for sub in itertools.combinations(range(n), r):
            s = ks[sub[0]]
            for j in sub[1:]:
                s = s + ks[j]
            if s.is_zero() or not s.square():
                return False
    return True


# ---------------------------------------------------------------------------
# waves


@dataclass(frozen=True)
class Wave:
    """A fiber vector (index -> scalar) at a momentum (4-tuple of scalars)."""

    momentum: tuple
    vec: Mapping[int, object]

    def __bool__(self):
        return bool(self.vec)

    def __add__(self, other: "Wave") -> "Wave":
        if not other.vec:
            return self
        if not self.vec:
            return other
        if tuple(self.momentum) != tuple(other.momentum):
            raise ValueError("cannot add waves with different momenta")
        return Wave(self.momentum, _vadd(self.vec, other.vec, 1))

    def __sub__(self, other: "Wave") -> "Wave":
        return self + other.scale(-1)

    def scale(self, c) -> "Wave":
        if not c:
            return Wave(self.momentum, {})
        return Wave(self.momentum, {i: v * c for i, v in self.vec.items() if v * c})

    def __neg__(self):
        return self.scale(-1)


def _vadd(a: Mapping, b: Mapping, c) -> Dict[int, object]:
    out = dict(a)
    for i, v in b.items():
        t = v * c
        cur = out.get(i)
        t = t if cur is None else cur + t
        if t:
            out[i] = t
        else:
            out.pop(i, None)
    return out


def _sign(e: int) -> int:
    return -1 if e & 1 else 1


def koszul_permutation_sign(parities: Sequence[int], perm: Sequence[int]) -> int:
    """Sign of reordering graded items ``(x_0..x_{n-1})`` into ``(x_perm[0], ..)``."""
    s = 0
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s += parities[perm[i]] * parities[perm[j]]
    return _sign(s)


def theta_primal_tensor(tables: StructureTables, table) -> Dict[Tuple[int, ...], Dict[int, GaussianRational]]:
    """The primal n-ary map of a dual θₙ table via the symmetric pairing.

    ``⟨d_{t1}⋯d_{tn}, x_{a1}⊗…⊗x_{an}⟩ = 2^{1-n} Σ_σ ε(σ)`` over the
    permutations σ with ``t_j = a_{σ(j)}``, ε the Koszul sign of the
    reordering: each binary product of duals pairs with the symmetrizer
    ½(x⊗y ± y⊗x). This is the normalization under which the transposed
    product is the fiber product and the dual θ₃ solves the second-order
    homotopy equation. Returns ``(a1..an) -> {target: coefficient}``.
    """
    par = [d & 1 for d in tables.basis.deg]
    n = table.arity
    weight = GaussianRational(Fraction(1, 2 ** (n - 1)))
    out: Dict[Tuple[int, ...], Dict[int, GaussianRational]] = {}
    for target, lst in table.entries.items():
        for t, c in lst:
            for perm in itertools.permutations(range(n)):
                # inputs a with a_{perm[j]} = t_j
                a = [None] * n
                for j, pj in enumerate(perm):
                    a[pj] = t[j]
                a = tuple(a)
                eps = koszul_permutation_sign([par[x] for x in a], perm)
                v = out.setdefault(a, {})
                cur = v.get(target)
                add = c * weight * eps
                nv = add if cur is None else cur + add
                if nv:
                    v[target] = nv
                else:
                    v.pop(target, None)
    return {k: v for k, v in out.items() if v}


@dataclass
class ExternalLeg:
    """A null momentum and H¹ coordinates in the module's deterministic representatives."""

    momentum: Momentum4
    coords: Sequence


class WaveCalculus:
    """Fiber product, d, h, h♯, S, E, Sₙ, Tₙ and partial amplitudes on plane waves."""

    def __init__(self, tables: StructureTables, theta3=None):
        if tables.hmat is None:
            raise ValueError("tables need a solved homotopy")
        self.tables = tables
        self.udeg = tables.basis.udeg
        self._mat_cache: Dict[tuple, Dict[Tuple[int, int], object]] = {}
        self._hom_cache: Dict[tuple, Homology] = {}
        self.theta3 = theta_primal_tensor(tables, theta3) if theta3 is not None else None

    # -- elementary operations ---------------------------------------------
    def basis_wave(self, i: int, momentum) -> Wave:
        return Wave(_as_momentum(momentum), {i: GaussianRational(1)})

    def zero(self, momentum) -> Wave:
        return Wave(_as_momentum(momentum), {})

    def homogeneous_parts(self, x: Wave) -> List[Tuple[int, Wave]]:
        parts: Dict[int, Dict[int, object]] = {}
        for i, v in x.vec.items():
            parts.setdefault(self.udeg[i], {})[i] = v
        return [(p, Wave(x.momentum, parts[p])) for p in sorted(parts)]

    def degree(self, x: Wave) -> int:
        ds = {self.udeg[i] for i in x.vec}
        if len(ds) != 1:
            raise ValueError("wave is not homogeneous")
        return ds.pop()

    def mul(self, x: Wave, y: Wave) -> Wave:
        return Wave(_msum(x.momentum, y.momentum), fiber_product(self.tables, x.vec, y.vec))

    def _matrix(self, which: str, k) -> Dict[Tuple[int, int], object]:
        key = (which, tuple(k))
        m = self._mat_cache.get(key)
        if m is None:
            src = self.tables.dmat if which == "d" else self.tables.hmat
            symbolic = any(isinstance(c, PolyKP) for c in k)
            b = dict(zip(K_NAMES, k))
            m = {}
            for rc, v in src.items():
                p = PolyKP.lift(v)
                x = p.substitute(b) if symbolic else p.evaluate(b)
                if x:
                    m[rc] = x
            self._mat_cache[key] = m
        return m

    def _apply(self, which: str, x: Wave) -> Wave:
        m = self._matrix(which, x.momentum)
        out: Dict[int, object] = {}
        for (r, c), v in m.items():
            a = x.vec.get(c)
            if a is None:
                continue
            t = v * a
            cur = out.get(r)
            t = t if cur is None else cur + t
            if t:
                out[r] = t
            else:
                out.pop(r, None)
        return Wave(x.momentum, out)

    def d(self, x: Wave) -> Wave:
        return self._apply("d", x)

    def h(self, x: Wave) -> Wave:
        return self._apply("h", x)

    def box(self, x: Wave) -> Wave:
        return x.scale(_msquare(x.momentum))

    def propagator(self, x: Wave) -> Wave:
        """h♯ = h/k² at the wave's momentum; OnShellPole if k² = 0."""
        if not x.vec:
            return x
        k2 = _msquare(x.momentum)
        if isinstance(k2, PolyKP):
            if not k2.is_constant():
                raise OnShellPole("propagator needs a numeric momentum")
            k2 = k2.constant_value()
        if not k2:
            raise OnShellPole(f"k² = 0 at momentum {tuple(str(c) for c in x.momentum)}")
        return self.h(x).scale(GaussianRational(1) / k2)

    # -- multilinear helpers ---------------------------------------------
    def _multilinear(self, f, args: Sequence[Wave]) -> Wave:
        """Evaluate ``f(degrees, waves)`` summed over homogeneous components."""
        mom = None
        for a in args:
            mom = a.momentum if mom is None else _msum(mom, a.momentum)
        total = Wave(mom, {})
        split = [self.homogeneous_parts(a) for a in args]
        for combo in itertools.product(*split):
            degs = [p for p, _ in combo]
            ws = [w for _, w in combo]
            r = f(degs, ws)
            if r.vec:
                total = Wave(mom, _vadd(total.vec, r.vec, 1))
        return total

    # -- S and its identities -----------------------------------------
    def S(self, x: Wave, y: Wave, z: Wave) -> Wave:
        """The failure of h to be second order (seven-term combination)."""

        def f(degs, ws):
            a, b, c = degs
            X, Y, Z = ws
            m, h = self.mul, self.h
            terms = [
                (1, h(m(m(X, Y), Z))),
                (-1, m(h(m(X, Y)), Z)),
                (-_sign(a), m(X, h(m(Y, Z)))),
                (-_sign((a + 1) * b), m(Y, h(m(X, Z)))),
                (1, m(m(h(X), Y), Z)),
                (_sign(a), m(m(X, h(Y)), Z)),
                (_sign(a + b), m(m(X, Y), h(Z))),
            ]
            return _combine(terms)

        return self._multilinear(f, [x, y, z])

    def theta3_map(self, x: Wave, y: Wave, z: Wave) -> Wave:
        """The primal θ₃ (momentum independent, multilinear)."""
        if self.theta3 is None:
            raise ValueError("no θ₃ table attached")
        mom = _msum(_msum(x.momentum, y.momentum), z.momentum)
        out: Dict[int, object] = {}
        for a, va in x.vec.items():
            for b, vb in y.vec.items():
                for c, vc in z.vec.items():
                    t = self.theta3.get((a, b, c))
                    if not t:
                        continue
                    s = va * vb * vc
                    out = _vadd(out, t, s)
        return Wave(mom, out)

    def chain_defect(self, op, args: Sequence[Wave], sign_base: int) -> Wave:
        """``d op(args) − Σ (−1)^{sign_base + x₁+…+x_{i−1}} op(…, dxᵢ, …)`` (args homogeneous)."""
        out = self.d(op(*args))
        acc = 0
        for i, a in enumerate(args):
            da = self.d(a)
            if da.vec:
                new = list(args)
                new[i] = da
                out = out - op(*new).scale(_sign(sign_base + acc))
            acc += self.degree(a) if a.vec else 0
        return out

    def homotopy_defect(self, S_op, T_op, args: Sequence[Wave]) -> Wave:
        """``S(args) − dT(args) − Σ (−1)^{n + x₁+…+x_{i−1}} T(…, dxᵢ, …)``."""
        n = len(args)
        out = S_op(*args) - self.d(T_op(*args))
        acc = 0
        for i, a in enumerate(args):
            da = self.d(a)
            if da.vec:
                new = list(args)
                new[i] = da
                out = out - T_op(*new).scale(_sign(n + acc))
            acc += self.degree(a) if a.vec else 0
        return out

    def four_identities(self, op, x: Wave, y: Wave, u: Wave, v: Wave, first_sign_variant: str = "S") -> Tuple[Wave, Wave]:
        """The two four-argument identities for ``op`` ∈ {S, θ₃} (homogeneous args).

        ``S`` variant: (−1)^x x·S(y,u,v) − (−1)^{xy+y} y·S(x,u,v) + S(x,yu,v) − (−1)^{xy} S(y,xu,v)
        ``theta`` variant: x·θ(y,u,v) − (−1)^{xy} y·θ(x,u,v) + θ(x,yu,v) − (−1)^{xy} θ(y,xu,v)
        second (both): op(xy,u,v) − op(x,yu,v) + op(x,y,uv) − (−1)^{x(y+u+v)} op(y,u,vx)
        """
        a, b, c, e = (self.degree(w) if w.vec else 0 for w in (x, y, u, v))
        m = self.mul
        if first_sign_variant == "S":
            s1, s2 = _sign(a), -_sign(a * b + b)
        else:
            s1, s2 = 1, -_sign(a * b)
        first = _combine(
            [
                (s1, m(x, op(y, u, v))),
                (s2, m(y, op(x, u, v))),
                (1, op(x, m(y, u), v)),
                (-_sign(a * b), op(y, m(x, u), v)),
            ]
        )
        second = _combine(
            [
                (1, op(m(x, y), u, v)),
                (-1, op(x, m(y, u), v)),
                (1, op(x, y, m(u, v))),
                (-_sign(a * (b + c + e)), op(y, u, m(v, x))),
            ]
        )
        return first, second

    # -- trees --------------------------------------------------------------
    def tree_sum(self, waves: Sequence[Wave], _memo=None) -> Wave:
        """λ over the planar cubic trees with h♯ on internal lines (see module doc)."""
        memo = {} if _memo is None else _memo
        return self._lam(tuple(range(len(waves))), waves, memo)

    def _lam(self, idx: tuple, waves, memo) -> Wave:
        key = ("lam", idx)
        if key in memo:
            return memo[key]
        mom = None
        for i in idx:
            mom = waves[i].momentum if mom is None else _msum(mom, waves[i].momentum)
        total = Wave(mom, {})
        for cut in range(1, len(idx)):
            A, B = idx[:cut], idx[cut:]
            eA = self._E(A, waves, memo)
            eB = self._E(B, waves, memo)
            if not eA.vec or not eB.vec:
                continue
            xa = sum(self.degree(waves[i]) for i in A)
            eps = _sign(xa + len(A) + self.degree(waves[A[-1]]) + 1)
            total = total + self.mul(eA, eB).scale(eps)
        memo[key] = total
        return total

    def _E(self, idx: tuple, waves, memo) -> Wave:
        if len(idx) == 1:
            return waves[idx[0]]
        key = ("E", idx)
        if key not in memo:
            memo[key] = self.propagator(self._lam(idx, waves, memo))
        return memo[key]

    def E(self, *waves: Wave) -> Wave:
        """Sum of planar cubic trees with h♯ on internal and output lines; E(x) = x."""
        return self._E(tuple(range(len(waves))), waves, {})

    # -- BCJ combinations ----------------------------------------------------
    def S4(self, x: Wave, y: Wave, u: Wave, v: Wave) -> Wave:
        a, b, c, e = (self.degree(w) for w in (x, y, u, v))
        E = self.E
        return _combine(
            [
                (1, self.S(E(x, y), u, v)),
                (-_sign(a), self.S(x, E(y, u), v)),
                (_sign(a + b), self.S(x, y, E(u, v))),
                (-_sign(b + c + a * (b + c + e)), self.S(y, u, E(v, x))),
            ]
        )

    def T4(self, x: Wave, y: Wave, u: Wave, v: Wave) -> Wave:
        a, b, c, e = (self.degree(w) for w in (x, y, u, v))
        E, T = self.E, self.theta3_map
        return _combine(
            [
                (1, T(E(x, y), u, v)),
                (-_sign(a), T(x, E(y, u), v)),
                (_sign(a + b), T(x, y, E(u, v))),
                (-_sign(b + c + a * (b + c + e)), T(y, u, E(v, x))),
            ]
        )

    S_N_CAP = 5

    def _E_bcj(self, idx: tuple, waves, memo) -> Wave:
        """E inside Sₙ: ``E(x,y) = h♯(xy)``, ``E(x,y,z) = h♯(E(x,y)z − (−1)^x xE(y,z))``.

        This is the tree sum λ renormalized by ``−(−1)^x`` on three legs.
        """
        e = self._E(idx, waves, memo)
        if len(idx) == 3:
            e = e.scale(-_sign(self.degree(waves[idx[0]])))
        return e

    def S_n(self, *waves: Wave, inner=None) -> Wave:
        """Signed sum over the C(n,3) decompositions of ℤ/n into three contiguous blocks.

        For a rotation by ``r`` (blocks taken from the rotated legs) the sign is
        ``(−1)^{r(n−1)}`` times the Koszul sign of the rotation, and the blocks
        ``A|B|C`` carry :meth:`_block_sign`. For n = 4 this reproduces
        :meth:`S4` term by term.
        """
        inner = inner or self.S
        n = len(waves)
        if not 3 <= n <= self.S_N_CAP:
            raise ValueError(f"S_n is implemented for 3 ≤ n ≤ {self.S_N_CAP}")
        degs = [self.degree(w) for w in waves]
        mom = None
        for w in waves:
            mom = w.momentum if mom is None else _msum(mom, w.momentum)
        total = Wave(mom, {})
        memo: Dict = {}
        for r, i, j in self._decompositions(n):
            order = [(r + t) % n for t in range(n)]
            rot = [waves[o] for o in order]
            rdeg = [degs[o] for o in order]
            A, B, C = tuple(range(0, i)), tuple(range(i, j)), tuple(range(j, n))
            sgn = _sign(r * (n - 1)) * _rotation_sign(degs, r) * self._block_sign(rdeg, A, B, C)
            key = tuple(order)
            m = memo.setdefault(key, {})
            eA, eB, eC = (self._E_bcj(blk, rot, m) for blk in (A, B, C))
            if eA.vec and eB.vec and eC.vec:
                total = total + inner(eA, eB, eC).scale(sgn)
        return total

    @staticmethod
    def _decompositions(n: int):
        """Decompositions of ℤ/n into three nonempty contiguous blocks, as (start, cut1, cut2).

        Each decomposition is listed once, with its first block starting at the
        smallest start index r among its three blocks' starts that is < the
        first cut (i.e. r is the start of the block containing leg 0, or leg 0
        starts a block).
        """
        seen = set()
        for r in range(n):
            for i in range(1, n - 1):
                for j in range(i + 1, n):
                    starts = frozenset({r % n, (r + i) % n, (r + j) % n})
                    if starts in seen:
                        continue
                    seen.add(starts)
                    yield r, i, j

    @staticmethod
    def _block_sign(degs, A, B, C) -> int:
        """Koszul sign of ``E_A ⊗ E_B ⊗ E_C`` on the suspended legs.

        A block of m legs acts with degree m − 1 (its m − 1 propagators);
        each leg counts with its degree plus one.
        """

        def shifted(blk):
            return sum(degs[t] + 1 for t in blk)

        return _sign((len(B) - 1) * shifted(A) + (len(C) - 1) * (shifted(A) + shifted(B)))

    def T_n(self, *waves: Wave) -> Wave:
        return self.S_n(*waves, inner=self.theta3_map)

    # -- homology and amplitudes --------------------------------------------
    def homology(self, k) -> Homology:
        key = tuple(_as_momentum(k))
        hom = self._hom_cache.get(key)
        if hom is None:
            hom = homology_at(self.tables, Momentum4(*key))
            self._hom_cache[key] = hom
        return hom

    def leg_wave(self, leg: ExternalLeg) -> Wave:
        hom = self.homology(leg.momentum)
        if hom.dims[1] == 0:
            raise ValueError("leg momentum is not null")
        return Wave(leg.momentum.k, hom.include(1, leg.coords))

    def project(self, x: Wave, degree: int = 2) -> List[GaussianRational]:
        if _is_zero_momentum(x.momentum):
            raise DegenerateKinematics("total momentum is zero")
        hom = self.homology(x.momentum)
        return hom.project(degree, x.vec)

    def pre_amplitude(self, legs: Sequence[ExternalLeg]) -> Wave:
        waves = [self.leg_wave(l) for l in legs]
        try:
            return self.tree_sum(waves)
        except OnShellPole as e:
            raise DegenerateKinematics(str(e)) from e

    def partial_amplitude(self, legs: Sequence[ExternalLeg]) -> Tuple[Momentum4, List[GaussianRational]]:
        """Color-ordered M_n on H¹ legs: (total momentum, H² coordinates)."""
        pre = self.pre_amplitude(legs)
        if self.d(pre).vec:
            raise AssertionError("pre-projection tree sum is not d-closed")
        return Momentum4(*pre.momentum), self.project(pre, 2)

    def bcj_projection(self, legs: Sequence[ExternalLeg]) -> List[GaussianRational]:
        """p∘Sₙ∘i⊗ⁿ on H¹ legs."""
        waves = [self.leg_wave(l) for l in legs]
        n = len(waves)
        try:
            out = self.S(*waves) if n == 3 else self.S_n(*waves)
        except OnShellPole as e:
            raise DegenerateKinematics(str(e)) from e
        return self.project(out, 2)


def _rotation_sign(degs: Sequence[int], r: int) -> int:
    """Koszul sign of moving the first r legs to the end."""
    a = sum(degs[:r])
    b = sum(degs[r:])
    return _sign(a * b)


def _combine(terms: Iterable[Tuple[int, Wave]]) -> Wave:
    mom = None
    out: Dict[int, object] = {}
    for c, w in terms:
        if mom is None:
            mom = w.momentum
        if w.vec:
            out = _vadd(out, w.vec, c)
    return Wave(mom, out)


# ---------------------------------------------------------------------------
# exhaustive identity checks over basis tuples


def _verdict(report: Dict[str, dict], name: str, count: int, witness) -> None:
    report[name] = {"ok": witness is None, "checked": count}
    if witness is not None:
        report[name]["witness"] = [i + 1 for i in witness]


def _basis_tuples(udeg: Sequence[int], n: int, max_total: Optional[int] = None):
    for t in itertools.product(range(N), repeat=n):
        if max_total is None or sum(udeg[i] for i in t) <= max_total:
            yield t


def theta3_checks(wc: WaveCalculus) -> Dict[str, dict]:
    """The primal θ₃ against S, as polynomial identities in independent symbolic momenta.

    * graded symmetry under both adjacent transpositions (all 16³ triples);
    * S = dθ₃ + θ₃d on all 16³ triples;
    * both four-argument identities for θ₃ on all quadruples with total
      degree ≤ 5 (above that every term lies in a zero graded piece).

    Witnesses are 1-based basis tuples.
    """
    if wc.theta3 is None:
        raise ValueError("no θ₃ table attached")
    u = wc.udeg
    p = [symbolic_momentum(s) for s in ("p", "q", "r", "s")]
    report: Dict[str, dict] = {}
    bad = None
    count = 0
    for t in _basis_tuples(u, 3):
        x, y, z = (wc.basis_wave(i, p[j]) for j, i in enumerate(t))
        base = wc.theta3_map(x, y, z).vec
        swaps = (
            (wc.theta3_map(y, x, z).vec, u[t[0]] * u[t[1]]),
            (wc.theta3_map(x, z, y).vec, u[t[1]] * u[t[2]]),
        )
        count += 1
        if any(_vadd(base, v, -_sign(e)) for v, e in swaps):
            bad = t
            break
    _verdict(report, "graded_symmetry", count, bad)
    bad = None
    count = 0
    for t in _basis_tuples(u, 3):
        ws = [wc.basis_wave(i, p[j]) for j, i in enumerate(t)]
        count += 1
        if wc.homotopy_defect(wc.S, wc.theta3_map, ws).vec:
            bad = t
            break
    _verdict(report, "S=d.theta3+theta3.d", count, bad)
    bad1 = bad2 = None
    count = 0
    for t in _basis_tuples(u, 4, 5):
        ws = [wc.basis_wave(i, p[j]) for j, i in enumerate(t)]
        first, second = wc.four_identities(wc.theta3_map, *ws, first_sign_variant="theta")
        count += 1
        if first.vec and bad1 is None:
            bad1 = t
        if second.vec and bad2 is None:
            bad2 = t
    _verdict(report, "quadruple_first", count, bad1)
    _verdict(report, "quadruple_second", count, bad2)
    return report


def lemma_identities(wc: WaveCalculus) -> Dict[str, dict]:
    """S is a chain map on all triples, and S obeys both four-argument identities.

    Triples use three independent symbolic momenta; quadruples use four and
    run over all basis tuples of total degree ≤ 4.
    """
    u = wc.udeg
    p = [symbolic_momentum(s) for s in ("p", "q", "r", "s")]
    report: Dict[str, dict] = {}
    bad = None
    count = 0
    for t in _basis_tuples(u, 3):
        ws = [wc.basis_wave(i, p[j]) for j, i in enumerate(t)]
        count += 1
        if wc.chain_defect(wc.S, ws, 3).vec:
            bad = t
            break
    _verdict(report, "S_chain_map", count, bad)
    bad1 = bad2 = None
    count = 0
    for t in _basis_tuples(u, 4, 4):
        ws = [wc.basis_wave(i, p[j]) for j, i in enumerate(t)]
        first, second = wc.four_identities(wc.S, *ws, first_sign_variant="S")
        count += 1
        if first.vec and bad1 is None:
            bad1 = t
        if second.vec and bad2 is None:
            bad2 = t
    _verdict(report, "S_quadruple_first", count, bad1)
    _verdict(report, "S_quadruple_second", count, bad2)
    return report


def random_coords(rng: random.Random) -> List[GaussianRational]:
    """Two small nonzero-in-total integer H¹ coordinates."""
    while True:
        c = [gr(rng.randint(-3, 3)) for _ in range(2)]
        if any(c):
            return c


def bcj_check(wc: WaveCalculus, n: int, configs: int = 3, seed: int = 0, max_tries: int = 100) -> List[dict]:
    """p∘Sₙ∘i⊗ⁿ at ``configs`` seeded random null configurations.

    Configurations hitting an on-shell internal line are skipped. Each run
    records the momenta, leg coordinates, projection and verdict.
    """
    rng = random.Random(seed)
    runs: List[dict] = []
    tries = 0
    while len(runs) < configs:
        tries += 1
        if tries > max_tries:
            raise DegenerateKinematics(f"no generic configuration in {max_tries} tries")
        ks = null_kinematics(rng, n)
        legs = [ExternalLeg(k, random_coords(rng)) for k in ks]
        try:
            val = wc.bcj_projection(legs)
        except DegenerateKinematics:
            continue
        runs.append(
            {
                "momenta": [str(k) for k in ks],
                "legs": [[str(c) for c in leg.coords] for leg in legs],
                "projection": [str(v) for v in val],
                "ok": not any(val),
            }
        )
    return runs


def _legs(rng: random.Random, ks: Sequence[Momentum4]) -> List[ExternalLeg]:
    return [ExternalLeg(k, random_coords(rng)) for k in ks]


def amplitude_checks(wc: WaveCalculus, wc_alt: WaveCalculus, theta2_table, configs: int = 3, seed: int = 0) -> Dict[str, dict]:
    """Properties of the partial amplitudes Mₙ = p∘λₙ∘i⊗ⁿ.

    * M₂ equals p∘θ₂∘i⊗² with θ₂ taken from the dual product table through
      the pairing (complex null pairs, where M₂ is generically nonzero);
    * M₃ and M₄ agree for the two homotopies of ``wc`` and ``wc_alt``;
    * Mₙ is linear in each leg's H¹ coordinates (n = 3, 4);
    * the amplitude lives at the total momentum, which is null and nonzero.

    Identity checks also require at least one nonzero amplitude so that they
    cannot pass vacuously. Values are recorded as strings.
    """
    rng = random.Random(seed)
    theta2 = theta_primal_tensor(wc.tables, theta2_table)
    report: Dict[str, dict] = {}

    runs, nonzero, ok = [], False, True
    for _ in range(configs):
        legs = _legs(rng, complex_null_pair(rng))
        _, m2 = wc.partial_amplitude(legs)
        x, y = (wc.leg_wave(leg) for leg in legs)
        out: Dict[int, object] = {}
        for a, va in x.vec.items():
            for b, vb in y.vec.items():
                t = theta2.get((a, b))
                if t:
                    out = _vadd(out, t, va * vb)
        via_theta = wc.project(Wave(_msum(x.momentum, y.momentum), out), 2)
        nonzero = nonzero or any(m2)
        ok = ok and m2 == via_theta
        runs.append({"tree": [str(c) for c in m2], "theta2": [str(c) for c in via_theta]})
    report["M2=p.theta2.i"] = {"ok": ok and nonzero, "runs": runs}

    for n in (3, 4):
        runs, nonzero, ok = [], False, True
        for _ in range(configs):
            legs = _legs(rng, null_kinematics(rng, n))
            _, a = wc.partial_amplitude(legs)
            _, b = wc_alt.partial_amplitude(legs)
            nonzero = nonzero or any(a)
            ok = ok and a == b
            runs.append({"h": [str(c) for c in a], "h_alt": [str(c) for c in b]})
        report[f"gauge_independence_M{n}"] = {"ok": ok and nonzero, "runs": runs}

    ok, checked = True, 0
    for n in (3, 4):
        for _ in range(configs):
            ks = null_kinematics(rng, n)
            legs = _legs(rng, ks)
            j = rng.randrange(n)
            c1, c2 = random_coords(rng), random_coords(rng)
            s, t = gr(rng.randint(-4, 4)), gr(Fraction(rng.randint(1, 5), rng.randint(1, 3)))

            def amp(coords):
                ls = list(legs)
                ls[j] = ExternalLeg(ks[j], coords)
                return wc.partial_amplitude(ls)[1]

            combo = amp([s * u + t * v for u, v in zip(c1, c2)])
            lin = [s * u + t * v for u, v in zip(amp(c1), amp(c2))]
            ok = ok and combo == lin
            checked += 1
    report["multilinearity"] = {"ok": ok, "checked": checked}

    ok, checked = True, 0
    for n in (2, 3, 4):
        for _ in range(configs):
            ks = null_kinematics(rng, n)
            total, _ = wc.partial_amplitude(_legs(rng, ks))
            expect = ks[0]
            for k in ks[1:]:
                expect = expect + k
            ok = ok and total == expect and not total.square() and not total.is_zero()
            checked += 1
    report["momentum_conservation"] = {"ok": ok, "checked": checked}
    return report
