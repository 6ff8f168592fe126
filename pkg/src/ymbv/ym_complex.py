"""The 16-dimensional fiber model of the Yang-Mills dgca.

A plane wave of momentum ``k`` is a vector in a fixed 16-dimensional space
``V`` (two rows of forms: 1, Λ¹, Λ²₊ in row 0 and Λ²₊, Λ³, Λ⁴ in row 1).
This module ships the product and differential structure constants,
solves for a homotopy ``h`` with ``dh + hd = □·1`` and ``h² = 0``, and
computes the plane-wave homology with deterministic representatives.

Indices are 0-based internally; ``StructureTables.prod_entry`` and
``dmat_entry`` take the 1-based indices of the literal listings.
Matrix convention: ``d(basis_j) = Σ_i dmat[(i, j)] · basis_i``.
"""
from __future__ import annotations

import hashlib
import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from . import linalg
from .errors import ChecksumMismatch, ZeroMomentum
from .exact_arith import (
    DEFAULT_CANDIDATES,
    K,
    K_NAMES,
    ONE,
    Q_BOX,
    GaussianRational,
    LinearSystem,
    PolyKP,
    find_instance,
    gr,
    gr_from_json,
    gr_to_json,
    solve_affine,
)

N = 16
Mat = Dict[Tuple[int, int], PolyKP]

__all__ = [
    "YMBasis",
    "StructureTables",
    "Momentum4",
    "load_structure_tables",
    "fiber_product",
    "check_dgca",
    "apply_matrix",
    "mat_mul",
    "differential_at",
    "h_ansatz",
    "solve_h",
    "verify_h",
    "homology_at",
    "check_kih_and_iso",
    "h_to_json",
    "h_from_json",
    "ALT_CANDIDATES",
]


# ---------------------------------------------------------------------------
# basis and tables


@dataclass(frozen=True)
class YMBasis:
    names: Tuple[str, ...]
    deg: Tuple[int, ...]  # shifted grading, -2..1
    rdeg: Tuple[int, ...]  # row 0 or 1

    @property
    def udeg(self) -> Tuple[int, ...]:
        """Unshifted degree deg + 2 (form degree plus row)."""
        return tuple(d + 2 for d in self.deg)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def of_udeg(self, p: int) -> List[int]:
        return [i for i in range(N) if self.deg[i] + 2 == p]


@dataclass
class StructureTables:
    basis: YMBasis
    prod: Dict[Tuple[int, int, int], GaussianRational]
    dmat: Mat
    hmat: Optional[Mat] = None
    h_params: Dict[str, GaussianRational] = field(default_factory=dict)

    def prod_entry(self, o: int, a: int, b: int) -> GaussianRational:
        return self.prod.get((o - 1, a - 1, b - 1), GaussianRational(0))

    def dmat_entry(self, r: int, c: int) -> PolyKP:
        return self.dmat.get((r - 1, c - 1), PolyKP())

    def with_h(self, hmat: Mat, params=None) -> "StructureTables":
        return StructureTables(self.basis, self.prod, self.dmat, dict(hmat), dict(params or {}))


def _payload_checksum(payload: dict) -> str:
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def load_structure_tables(path=None) -> StructureTables:
    """Load the shipped ``ym16.json`` fixture, verifying its checksum."""
    if path is None:
        text = resources.files("ymbv").joinpath("data/ym16.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    data = json.loads(text)
    recorded = data.pop("checksum", None)
    if recorded != _payload_checksum(data):
        raise ChecksumMismatch(f"fixture checksum {recorded} does not match its payload")
    basis = YMBasis(tuple(data["basis"]), tuple(data["deg"]), tuple(data["rdeg"]))
    prod = {(o - 1, a - 1, b - 1): gr_from_json(v) for (o, a, b), v in data["prod"]}
    dmat = {(r - 1, c - 1): PolyKP.from_json(v) for (r, c), v in data["dmat"]}
    return StructureTables(basis, prod, dmat)


# ---------------------------------------------------------------------------
# momenta and fiber elements


def _num(x) -> GaussianRational:
    if isinstance(x, str):
        x = x.strip()
        return gr(Fraction(x)) if "I" not in x else gr(x)
    return gr(x)


@dataclass(frozen=True)
class Momentum4:
    k: Tuple[GaussianRational, ...]

    def __init__(self, *k):
        if len(k) == 1 and not isinstance(k[0], (int, Fraction, GaussianRational, str)):
            k = tuple(k[0])
        if len(k) != 4:
            raise ValueError("a momentum has four components")
        object.__setattr__(self, "k", tuple(_num(x) for x in k))

    def square(self) -> GaussianRational:
        k0, k1, k2, k3 = self.k
        return -(k0 * k0) + k1 * k1 + k2 * k2 + k3 * k3

    def is_zero(self) -> bool:
        return not any(self.k)

    def bindings(self) -> Dict[str, GaussianRational]:
        return dict(zip(K_NAMES, self.k))

    def __add__(self, other: "Momentum4") -> "Momentum4":
        return Momentum4(*(a + b for a, b in zip(self.k, other.k)))

    def __neg__(self) -> "Momentum4":
        return Momentum4(*(-a for a in self.k))

    def __str__(self):
        return ",".join(str(x) for x in self.k)


def fiber_product(tables: StructureTables, a: Mapping[int, object], b: Mapping[int, object]) -> Dict[int, object]:
    """``out[o] = Σ prod(o, i, j) a[i] b[j]`` on sparse 16-vectors."""
    out: Dict[int, object] = {}
    for (o, i, j), c in tables.prod.items():
        x = a.get(i)
        if x is None:
            continue
        y = b.get(j)
        if y is None:
            continue
        t = x * y * c
        cur = out.get(o)
        t = t if cur is None else cur + t
        if t:
            out[o] = t
        else:
            out.pop(o, None)
    return out


def check_dgca(tables: StructureTables) -> Dict[str, object]:
    """Associativity (16³), graded commutativity (16²), Leibniz and d² = 0, symbolically in k.

    Signs use the unshifted degrees. Returns per-property verdicts with the
    first failing basis tuple (1-based) as witness.
    """
    u = tables.basis.udeg
    e = [{i: GaussianRational(1)} for i in range(N)]
    prod = lambda a, b: fiber_product(tables, a, b)  # noqa: E731
    report: Dict[str, object] = {}

    def verdict(name, witness, count):
        report[name] = {"ok": witness is None, "checked": count}
        if witness is not None:
            report[name]["witness"] = [i + 1 for i in witness]

    pairs = {(a, b): prod(e[a], e[b]) for a in range(N) for b in range(N)}
    bad = None
    for a, b, c in itertools.product(range(N), repeat=3):
        if prod(pairs[a, b], e[c]) != prod(e[a], pairs[b, c]):
            bad = (a, b, c)
            break
    verdict("associativity", bad, N ** 3)
    bad = None
    for a, b in itertools.product(range(N), repeat=2):
        flipped = {o: -v for o, v in pairs[b, a].items()} if (u[a] * u[b]) & 1 else pairs[b, a]
        if pairs[a, b] != flipped:
            bad = (a, b)
            break
    verdict("graded_commutativity", bad, N ** 2)
    # plane-wave products add momenta: d_{p+q}(xy) = d_p(x) y + (-1)^x x d_q(y)
    D = {k: PolyKP.lift(v) for k, v in tables.dmat.items()}
    p = {n: PolyKP.symbol(f"p_{mu}") for mu, n in enumerate(K_NAMES)}
    q = {n: PolyKP.symbol(f"q_{mu}") for mu, n in enumerate(K_NAMES)}
    pq = {n: p[n] + q[n] for n in K_NAMES}
    Dp, Dq, Dpq = ({key: v.substitute(b) for key, v in D.items()} for b in (p, q, pq))
    d = lambda M, v: _drop_zero(linalg.mat_vec(M, v))  # noqa: E731
    bad = None
    for a, b in itertools.product(range(N), repeat=2):
        lhs = d(Dpq, pairs[a, b])
        rhs = dict(prod(d(Dp, e[a]), e[b]))
        for o, v in prod(e[a], d(Dq, e[b])).items():
            rhs[o] = rhs.get(o, 0) + (-v if u[a] & 1 else v)
        diff = {o: lhs.get(o, 0) - rhs.get(o, 0) for o in set(lhs) | set(rhs)}
        if _drop_zero(diff):
            bad = (a, b)
            break
    verdict("leibniz", bad, N ** 2)
    dd = _drop_zero(mat_mul(D, D))
    verdict("d_squared_zero", None if not dd else next(iter(dd)), N ** 2)
    report["ok"] = all(v["ok"] for k, v in report.items() if isinstance(v, dict))
    return report


def _drop_zero(m: Mapping) -> Dict:
    return {k: v for k, v in m.items() if v}


def apply_matrix(mat: Mapping[Tuple[int, int], object], vec: Mapping[int, object]) -> Dict[int, object]:
    return linalg.mat_vec(mat, vec)


def mat_mul(a: Mapping, b: Mapping) -> Dict[Tuple[int, int], object]:
    cols: Dict[int, List[Tuple[int, object]]] = {}
    for (r, c), v in b.items():
        cols.setdefault(r, []).append((c, v))
    out: Dict[Tuple[int, int], object] = {}
    for (i, j), x in a.items():
        for c, y in cols.get(j, ()):
            t = x * y
            cur = out.get((i, c))
            t = t if cur is None else cur + t
            if t:
                out[(i, c)] = t
            else:
                out.pop((i, c), None)
    return out


def _mat_add(*ms) -> Dict[Tuple[int, int], object]:
    out: Dict[Tuple[int, int], object] = {}
    for m in ms:
        for key, v in m.items():
            cur = out.get(key)
            t = v if cur is None else cur + v
            if t:
                out[key] = t
            else:
                out.pop(key, None)
    return out


def _eval_mat(mat: Mapping, k: Optional[Momentum4]):
    if k is None:
        return dict(mat)
    b = k.bindings()
    out = {}
    for key, v in mat.items():
        x = PolyKP.lift(v).evaluate(b) if isinstance(v, PolyKP) else v
        if x:
            out[key] = x
    return out


def differential_at(tables: StructureTables, k: Optional[Momentum4] = None):
    """The 16×16 differential, symbolic in k (``k=None``) or evaluated at ``k``."""
    return _eval_mat(tables.dmat, k)


def h_at(tables: StructureTables, k: Optional[Momentum4] = None):
    if tables.hmat is None:
        raise ValueError("tables carry no homotopy; call solve_h first")
    return _eval_mat(tables.hmat, k)


# ---------------------------------------------------------------------------
# the homotopy


def h_ansatz(tables: StructureTables) -> Tuple[Mat, List[str]]:
    """Parametric h: entry (i, j) only where deg i = deg j - 1.

    Same row: a generic linear form Σ h{i}_{j}_{μ} k_μ. Row i one below
    row j: a constant h{i}_{j}. Indices in parameter names are 1-based.
    Parameters are returned in creation (row-major) order.
    """
    deg, rdeg = tables.basis.deg, tables.basis.rdeg
    mat: Mat = {}
    names: List[str] = []
    for i in range(N):
        for j in range(N):
            if deg[i] != deg[j] - 1:
                continue
            if rdeg[i] == rdeg[j]:
                entry = PolyKP()
                for mu in range(4):
                    n = f"h{i + 1}_{j + 1}_{mu}"
                    names.append(n)
                    entry = entry + PolyKP.symbol(n) * K[mu]
                mat[(i, j)] = entry
            elif rdeg[i] - rdeg[j] == -1:
                n = f"h{i + 1}_{j + 1}"
                names.append(n)
                mat[(i, j)] = PolyKP.symbol(n)
    return mat, names


def _identity_box() -> Mat:
    return {(i, i): Q_BOX for i in range(N)}


ALT_CANDIDATES = tuple(reversed(DEFAULT_CANDIDATES[1:])) + (DEFAULT_CANDIDATES[0],)


def solve_h(tables: StructureTables, candidates: Sequence = DEFAULT_CANDIDATES) -> StructureTables:
    """Fix an admissible h: affine solve of dh + hd = □·1, then a candidate search for h² = 0.

    ``candidates`` is the ordered candidate list of the search; passing a
    different order (e.g. :data:`ALT_CANDIDATES`) yields another admissible h.
    """
    ans, names = h_ansatz(tables)
    D = tables.dmat
    lin = _mat_add(mat_mul(D, ans), mat_mul(ans, D), {key: -v for key, v in _identity_box().items()})
    sol = solve_affine(LinearSystem(names, [lin[key] for key in sorted(lin)]))
    partial = {key: v.substitute(sol.solution) for key, v in ans.items()}
    partial = {key: v for key, v in partial.items() if v}
    quad = mat_mul(partial, partial)
    free = [n for n in names if n in sol.free]
    inst = find_instance([quad[key] for key in sorted(quad)], free, candidates)
    params: Dict[str, GaussianRational] = {}
    for n in names:
        if n in inst:
            params[n] = inst[n]
        else:
            params[n] = sol.solution[n].substitute(inst).constant_value()
    hmat = {}
    for key, v in ans.items():
        x = v.substitute(params)
        if x:
            hmat[key] = x
    return tables.with_h(hmat, params)


def _pattern_violations(tables: StructureTables, hmat: Mat) -> List[Tuple[int, int]]:
    deg, rdeg = tables.basis.deg, tables.basis.rdeg
    bad = []
    for (i, j), v in sorted(hmat.items()):
        v = PolyKP.lift(v)
        if not v:
            continue
        if deg[i] != deg[j] - 1:
            bad.append((i, j))
            continue
        ok = True
        for mono in v.terms:
            kdeg = sum(e for s, e in mono if s < 4)
            if len(mono) != sum(1 for s, _ in mono if s < 4):
                ok = False  # leftover parameters
            if rdeg[i] == rdeg[j]:
                ok = ok and kdeg == 1
            elif rdeg[i] - rdeg[j] == -1:
                ok = ok and kdeg == 0
            else:
                ok = False
        if not ok:
            bad.append((i, j))
    return bad


def verify_h(tables: StructureTables, hmat: Optional[Mat] = None) -> Dict[str, object]:
    """Per-identity verdicts for h² = 0, dh + hd = □·1 and the sparsity pattern."""
    H = tables.hmat if hmat is None else hmat
    H = {key: PolyKP.lift(v) for key, v in H.items()}
    D = tables.dmat
    hh = mat_mul(H, H)
    comm = _mat_add(mat_mul(D, H), mat_mul(H, D), {key: -v for key, v in _identity_box().items()})
    pattern = _pattern_violations(tables, H)
    report = {
        "h_squared_zero": not hh,
        "dh_plus_hd_box": not comm,
        "pattern": not pattern,
    }
    if hh:
        report["h_squared_witness"] = [i + 1 for i in sorted(hh)[0]]
    if comm:
        report["dh_plus_hd_witness"] = [i + 1 for i in sorted(comm)[0]]
    if pattern:
        report["pattern_witness"] = [i + 1 for i in pattern[0]]
    report["ok"] = report["h_squared_zero"] and report["dh_plus_hd_box"] and report["pattern"]
    return report


def h_to_json(tables: StructureTables) -> dict:
    if tables.hmat is None:
        raise ValueError("no homotopy to serialize")
    body = {
        "params": {n: gr_to_json(v) for n, v in tables.h_params.items()},
        "hmat": [[[r + 1, c + 1], PolyKP.lift(v).to_json()] for (r, c), v in sorted(tables.hmat.items())],
    }
    body["hash"] = _payload_checksum(body)
    return body


def h_from_json(tables: StructureTables, data: Mapping) -> StructureTables:
    data = dict(data)
    recorded = data.pop("hash", None)
    if recorded is not None and recorded != _payload_checksum(data):
        raise ChecksumMismatch("h table does not match its recorded hash")
    hmat = {(r - 1, c - 1): PolyKP.from_json(v) for (r, c), v in data["hmat"]}
    params = {n: gr_from_json(v) for n, v in data.get("params", {}).items()}
    return tables.with_h(hmat, params)


# ---------------------------------------------------------------------------
# plane-wave homology


def _block_cols(M: Mapping, src: Sequence[int]) -> List[Dict[int, GaussianRational]]:
    """Columns M(basis_j) for j in src, as sparse vectors over target indices."""
    cols = []
    for j in src:
        cols.append({i: v for (i, c), v in M.items() if c == j and v})
    return cols


def _unit(i: int) -> Dict[int, GaussianRational]:
    return {i: ONE}


def _embed(vec: Mapping[int, GaussianRational], idx: Sequence[int]) -> Dict[int, GaussianRational]:
    return {idx[j]: v for j, v in vec.items()}


@dataclass
class Homology:
    momentum: Momentum4
    dims: Tuple[int, int, int, int]
    # per unshifted degree: representatives (16-vectors) and coordinate functionals
    i: Dict[int, List[Dict[int, GaussianRational]]]
    p: Dict[int, List[Dict[int, GaussianRational]]]

    def project(self, degree: int, vec: Mapping[int, GaussianRational]) -> List[GaussianRational]:
        out = []
        for row in self.p[degree]:
            acc = GaussianRational(0)
            for j, c in row.items():
                x = vec.get(j)
                if x:
                    acc = acc + c * x
            out.append(acc)
        return out

    def include(self, degree: int, coords: Sequence) -> Dict[int, GaussianRational]:
        out: Dict[int, GaussianRational] = {}
        for c, rep in zip(coords, self.i[degree]):
            linalg_axpy(out, rep, c)
        return out


def linalg_axpy(target, source, scale):
    for key, v in source.items():
        t = v * scale
        cur = target.get(key)
        t = t if cur is None else cur + t
        if t:
            target[key] = t
        else:
            target.pop(key, None)
    return target


def homology_at(tables: StructureTables, k, d_or_h_aware: bool = False) -> Homology:
    """Homology of the plane-wave complex at momentum ``k``, per unshifted degree 0..3.

    Representatives: image basis = d-columns at RREF pivot columns; kernel
    basis = standard RREF nullspace; homology representatives = first-fit
    extension of the image basis inside the kernel; complement = first-fit
    unit vectors. ``p`` reads off the homology coordinates in the basis
    [image, representatives, complement], so ``p∘i = 1``.
    ``d_or_h_aware`` is accepted for interface compatibility; the choice of
    representatives does not depend on h.
    """
    k = k if isinstance(k, Momentum4) else Momentum4(*k)
    if k.is_zero():
        raise ZeroMomentum("homology at k = 0 is not computed")
    D = differential_at(tables, k)
    basis = tables.basis
    dims = []
    reps: Dict[int, List[Dict[int, GaussianRational]]] = {}
    proj: Dict[int, List[Dict[int, GaussianRational]]] = {}
    for p in range(4):
        idx = basis.of_udeg(p)
        cols_out = _block_cols(D, idx)  # d: degree p -> p+1
        kernel = [_embed(v, idx) for v in linalg.nullspace(cols_out)]
        prev = basis.of_udeg(p - 1)
        cols_in = _block_cols(D, prev)
        image = [cols_in[j] for j in linalg.pivot_columns(cols_in)] if prev else []
        chosen = linalg.first_fit(image, kernel)
        hreps = [kernel[j] for j in chosen]
        start = image + hreps
        units = [_unit(i) for i in idx]
        comp = [units[j] for j in linalg.first_fit(start, units)]
        full = start + comp
        nim, nh = len(image), len(hreps)
        # p: rows of the inverse basis matrix at the homology positions
        rows = [dict() for _ in range(nh)]
        for i in idx:
            coords = linalg.coordinates(_unit(i), full)
            for r in range(nh):
                c = coords.get(nim + r)
                if c:
                    rows[r][i] = c
        dims.append(nh)
        reps[p] = hreps
        proj[p] = rows
    return Homology(k, tuple(dims), reps, proj)


def check_kih_and_iso(tables: StructureTables, k, hmat: Optional[Mat] = None, hmat2: Optional[Mat] = None) -> Dict[str, object]:
    """Verify the kernel/image inclusions of h at null k and the induced iso H² → H¹.

    With a second admissible ``hmat2`` also verifies the induced iso is the
    same for both homotopies.
    """
    k = k if isinstance(k, Momentum4) else Momentum4(*k)
    if k.is_zero():
        raise ZeroMomentum("k = 0")
    if k.square():
        raise ValueError("check_kih_and_iso needs a null momentum")
    H = _eval_mat(hmat if hmat is not None else tables.hmat, k)
    D = differential_at(tables, k)
    basis = tables.basis
    hom = homology_at(tables, k)
    d1 = basis.of_udeg(1)
    ker_d1 = [_embed(v, d1) for v in linalg.nullspace(_block_cols(D, d1))]
    ker_ok = all(not linalg.mat_vec(H, v) for v in ker_d1)
    im_d1 = _block_cols(D, d1)
    h3 = _block_cols(H, basis.of_udeg(3))
    im_ok = linalg.rank(im_d1 + h3) == linalg.rank(im_d1)

    def induced(Hm):
        return [hom.project(1, linalg.mat_vec(Hm, rep)) for rep in hom.i[2]]

    M = induced(H)
    cols = [{r: v for r, v in enumerate(col) if v} for col in M]
    iso_rank = linalg.rank(cols)
    report = {
        "momentum": str(k),
        "ker_d1_in_ker_h1": ker_ok,
        "im_h3_in_im_d1": im_ok,
        "iso_rank": iso_rank,
        "iso_matrix": [[str(x) for x in col] for col in M],
    }
    ok = ker_ok and im_ok and iso_rank == 2
    if hmat2 is not None:
        M2 = induced(_eval_mat(hmat2, k))
        report["h_independent"] = M == M2
        ok = ok and report["h_independent"]
    report["ok"] = ok
    return report
