"""Ext over ``R`` as a module over the operator algebra ``k[ξ_1..ξ_n]``.

A minimal free resolution ``F_• -> V`` is lifted entrywise to ``Q`` along the
monomial section; since ``d^2 = 0`` over ``R`` the lifted square splits as
``Σ_i x_i^l t_i`` and the constant terms of the ``t_i`` give the degree-2
operators on ``Ext^*_R(V, k) = Hom_R(F_•, k)``.

Conventions: ``diffs[s]`` has shape ``(b_s, b_{s-1}, l^n)``; row ``j`` holds the
``R``-coefficients of ``d(e_j)``.  ``ops[i][s]`` is the ``b_{s+2} x b_s``
matrix of ``ξ_i : Ext^s -> Ext^{s+2}`` acting on column vectors in the basis
dual to the generators.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb

import numpy as np

from . import linalg as la
from .errors import LiftResidue, ValidationError, WindowOutOfRange, ZeroModule
from .fields import Field
from .qci import (
    ModuleRep,
    QciAlgebra,
    cover_rows,
    free_action,
    generators_of,
    module_action,
)
from .tate import ProjPoint, enumerate_points, support_field

MIN_EXTRA_DEGREES = 6


@dataclass
class Resolution:
    alg: QciAlgebra
    length: int
    betti: list
    diffs: dict  # s -> (b_s, b_{s-1}, L) array, 1 <= s <= length
    generators: np.ndarray  # rows: images of the F_0 basis in V

    @property
    def field(self) -> Field:
        return self.alg.field


def minimal_resolution(alg: QciAlgebra, V: ModuleRep, D: int) -> Resolution:
    """Minimal free resolution of ``V`` through homological degree ``D``."""
    if V.dim == 0:
        raise ZeroModule("cannot resolve the zero module")
    if D < 2:
        raise ValidationError("resolution length must be >= 2")
    F = V.field
    alg = alg.base_change(F)
    L = alg.dim
    gens = generators_of(F, alg.n, module_action(V), la.identity(V.dim))
    betti = [gens.shape[0]]
    images = cover_rows(alg, F, module_action(V), gens)
    kernel = la.kernel_basis(F, images.T)
    if kernel.shape[0] != betti[0] * L - V.dim:
        raise AssertionError("projective cover is not surjective")
    diffs = {}
    for s in range(1, D + 1):
        prev = betti[-1]
        act = free_action(alg, prev)
        g = generators_of(F, alg.n, act, kernel) if kernel.shape[0] else la.zeros(0, prev * L)
        b = g.shape[0]
        betti.append(b)
        diffs[s] = g.reshape(b, prev, L)
        if b and diffs[s][:, :, 0].any():
            raise AssertionError(f"non-minimal differential in degree {s}")
        if s == D:
            break
        if b == 0:
            kernel = la.zeros(0, 0)
            continue
        images = cover_rows(alg, F, act, g)
        new_kernel = la.kernel_basis(F, images.T)
        # exactness: rank of d_s equals dim ker d_{s-1}
        if b * L - new_kernel.shape[0] != kernel.shape[0]:
            raise AssertionError(f"resolution not exact at degree {s - 1}")
        kernel = new_kernel
    return Resolution(alg, D, betti, diffs, gens)


def poincare_betti(n: int, s: int) -> int:
    """``Σ_{j+2m=s} C(n,j) C(n+m-1,m)``: Betti numbers of the trivial module."""
    return sum(comb(n, j) * comb(n + (s - j) // 2 - 1, (s - j) // 2) for j in range(0, min(n, s) + 1) if (s - j) % 2 == 0)


# --------------------------------------------------------------------------
# operators


@dataclass
class OperatorFamily:
    field: Field
    n: int
    ops: list  # ops[i][s] : Ext^s -> Ext^{s+2}

    def apply(self, exps, s: int) -> np.ndarray:
        """Matrix of the monomial ``ξ^exps`` on ``Ext^s``."""
        F = self.field
        M = None
        deg = s
        for i, k in enumerate(exps):
            for _ in range(k):
                step = self.ops[i][deg]
                M = step if M is None else F.matmul(step, M)
                deg += 2
        return M


def _r_product_pairs(alg: QciAlgebra):
    pairs = []
    for a_idx, al in enumerate(alg.monomials):
        for b_idx, be in enumerate(alg.monomials):
            g, k = alg.mono_mul(al, be)
            if alg.in_R(g):
                pairs.append((a_idx, b_idx, alg.mono_index[g], k))
    return pairs


def _compose_constant(F: Field, alg: QciAlgebra, A: np.ndarray, B: np.ndarray, i: int) -> np.ndarray:
    """Coefficient of ``x_i^l`` in the ``Q``-product of lifted ``A`` and ``B``."""
    out = la.zeros(A.shape[0], B.shape[1])
    for a in range(1, alg.l):
        ia = alg.mono_index[tuple(a * (t == i) for t in range(alg.n))]
        ib = alg.mono_index[tuple((alg.l - a) * (t == i) for t in range(alg.n))]
        if A[:, :, ia].any() and B[:, :, ib].any():
            out = F.add(out, F.matmul(A[:, :, ia], B[:, :, ib]))
    return out


def _check_residue(F: Field, alg: QciAlgebra, A: np.ndarray, B: np.ndarray, pairs) -> None:
    acc: dict = {}
    for ia, ib, ig, k in pairs:
        Aa, Bb = A[:, :, ia], B[:, :, ib]
        if not (Aa.any() and Bb.any()):
            continue
        term = F.mul(alg.scalar(k), F.matmul(Aa, Bb))
        acc[ig] = term if ig not in acc else F.add(acc[ig], term)
    for ig, M in acc.items():
        if M.any():
            raise LiftResidue(f"lifted d^2 has a term {alg.monomials[ig]} outside (x^l)")


def cohomological_operators(alg: QciAlgebra, res: Resolution) -> OperatorFamily:
    F = res.field
    alg = res.alg
    D = res.length
    pairs = _r_product_pairs(alg)
    ops = [dict() for _ in range(alg.n)]
    for s in range(0, D - 1):
        A, B = res.diffs[s + 2], res.diffs[s + 1]
        if A.shape[0] and B.shape[0] and B.shape[1]:
            _check_residue(F, alg, A, B, pairs)
        for i in range(alg.n):
            if A.shape[0] == 0 or B.shape[1] == 0 or B.shape[0] == 0:
                ops[i][s] = la.zeros(A.shape[0], B.shape[1])
            else:
                ops[i][s] = _compose_constant(F, alg, A, B, i)
    fam = OperatorFamily(F, alg.n, ops)
    for s in range(0, D - 3):
        for i in range(alg.n):
            for j in range(i + 1, alg.n):
                ij = F.matmul(ops[i][s + 2], ops[j][s])
                ji = F.matmul(ops[j][s + 2], ops[i][s])
                if not np.array_equal(ij, ji):
                    raise AssertionError(f"ξ_{i + 1} and ξ_{j + 1} do not commute on Ext^{s}")
    return fam


@dataclass
class GradedExtModule:
    field: Field
    n: int
    dims: list
    operators: OperatorFamily

    @property
    def top(self) -> int:
        return len(self.dims) - 1

    @property
    def bounded(self) -> bool:
        return any(d == 0 for d in self.dims[1:])

    def base_change(self, K: Field) -> "GradedExtModule":
        if K == self.field:
            return self
        emb = self.field.embedding(K)
        ops = [{s: emb[M] for s, M in d.items()} for d in self.operators.ops]
        return GradedExtModule(K, self.n, self.dims, OperatorFamily(K, self.n, ops))

    def summary(self) -> dict:
        return {"dims": list(self.dims), "bounded": self.bounded}


def ext_module(alg: QciAlgebra, V: ModuleRep, D: int | None = None) -> GradedExtModule:
    """``Ext^s_R(V, k)`` for ``s <= D`` with its degree-2 operators."""
    if D is None:
        D = alg.n + MIN_EXTRA_DEGREES
    if D < alg.n + 4:
        raise ValidationError(f"need D >= n + 4 = {alg.n + 4}")
    res = minimal_resolution(alg, V, D)
    fam = cohomological_operators(alg, res)
    return GradedExtModule(res.field, alg.n, list(res.betti), fam)


def _point_kernel(K: Field, coords) -> np.ndarray:
    """Rows ``u`` with ``Σ u_i c_i = 0``."""
    return la.kernel_basis(K, np.array([list(coords)], dtype=np.int64))


def quotient_dims(E: GradedExtModule, c: ProjPoint, degrees) -> dict[int, int]:
    """Dimensions of ``E / (ker of evaluation at c)·E`` in the given degrees."""
    K = c.field
    if E.field != K:
        E = E.base_change(K)
    U = _point_kernel(K, c.coords)
    out = {}
    for s in degrees:
        if s < 2:
            out[s] = E.dims[s]
            continue
        maps = [K.lincomb(u, [E.operators.ops[i][s - 2] for i in range(E.n)]) for u in U]
        stacked = np.hstack(maps) if maps and E.dims[s] else la.zeros(E.dims[s], 0)
        out[s] = E.dims[s] - la.rank(K, stacked)
    return out


def fiber_supported_at(alg: QciAlgebra, E: GradedExtModule, c: ProjPoint, window=None) -> bool:
    """Nonvanishing of the fiber of ``Ext`` at ``c``, read in the top two stable degrees."""
    lo, hi = window if window is not None else (alg.n, E.top)
    if hi > E.top or lo < 0 or hi - lo < 1:
        raise WindowOutOfRange(f"window [{lo}, {hi}] not inside [0, {E.top}]")
    K = c.field
    if K.p != E.field.p or K.e % E.field.e:
        raise ValidationError("point field does not contain the Ext field")
    dims = quotient_dims(E, c, (hi - 1, hi))
    return dims[hi - 1] > 0 or dims[hi] > 0


# --------------------------------------------------------------------------
# annihilators


@dataclass
class AnnWindow:
    d_max: int
    window: tuple
    polys: list  # [(degree, {exps: coeff})]
    bounded: bool
    field: Field

    def to_json(self) -> dict:
        return {
            "d_max": self.d_max,
            "window": list(self.window),
            "bounded": self.bounded,
            "polynomials": [
                {"degree": 2 * deg, "terms": [[list(e), self.field.serialize(c)] for e, c in p.items()]}
                for deg, p in self.polys
            ],
        }

    def format_poly(self, poly: dict) -> str:
        parts = []
        for exps, c in poly.items():
            mono = "*".join(f"ξ{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(exps) if k) or "1"
            parts.append(mono if c == 1 else f"{self.field.serialize(c)}*{mono}")
        return " + ".join(parts)


def _monomials_of_degree(n: int, deg: int) -> list[tuple]:
    return sorted(
        (e for e in itertools.product(range(deg + 1), repeat=n) if sum(e) == deg),
        reverse=True,
    )


def annihilator_window(alg: QciAlgebra, V: ModuleRep | GradedExtModule, D: int | None = None, d_max: int = 1) -> AnnWindow:
    """Homogeneous polynomials of ξ-degree ``<= d_max`` killing Ext on ``[n, D - 2 d_max]``."""
    if isinstance(V, GradedExtModule):
        E = V
        D = E.top
    else:
        if D is None:
            D = alg.n + 2 * d_max + MIN_EXTRA_DEGREES
        E = ext_module(alg, V, D)
    if D < alg.n + 2 * d_max + 2:
        raise ValidationError(f"need D >= n + 2 d_max + 2 = {alg.n + 2 * d_max + 2}")
    F = E.field
    lo, hi = alg.n, D - 2 * d_max
    bounded = all(E.dims[s] == 0 for s in range(lo, hi + 1))
    polys = []
    for deg in range(0, d_max + 1):
        monos = _monomials_of_degree(alg.n, deg)
        cols = []
        for mono in monos:
            blocks = []
            for s in range(lo, hi + 1):
                if E.dims[s] == 0 or E.dims[s + 2 * deg] == 0:
                    continue
                M = E.operators.apply(mono, s) if deg else la.identity(E.dims[s])
                blocks.append(M.reshape(-1))
            cols.append(np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.int64))
        A = np.stack(cols, axis=1)
        for row in la.kernel_basis(F, A):
            polys.append((deg, {m: int(c) for m, c in zip(monos, row) if c}))
    return AnnWindow(d_max, (lo, hi), polys, bounded, F)


def _evaluate(K: Field, poly: dict, coords) -> int:
    total = 0
    for exps, c in poly.items():
        term = c
        for x, k in zip(coords, exps):
            if k:
                term = int(K.mul(term, K.power(x, k)))
        total = int(K.add(total, term))
    return total


def zero_locus(alg: QciAlgebra, ann: AnnWindow, e: int) -> list[ProjPoint]:
    """Points of ``P^{n-1}(F_{p^e})`` where every listed polynomial vanishes."""
    K = support_field(alg, e)
    emb = ann.field.embedding(K)
    polys = [{m: int(emb[c]) for m, c in p.items()} for _, p in ann.polys]
    return [P for P in enumerate_points(K, alg.n) if all(_evaluate(K, p, P.coords) == 0 for p in polys)]


def ext_supported_points(alg: QciAlgebra, V: ModuleRep, e: int, D: int | None = None) -> list[ProjPoint]:
    E = ext_module(alg, V, D)
    K = support_field(alg, e)
    return [P for P in enumerate_points(K, alg.n) if fiber_supported_at(alg, E, P)]

