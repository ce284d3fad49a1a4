"""Support decisions through the reduced Tate complex.

For a point ``c`` of ``P(m_Z/m_Z^2)`` the reduced complex is the free right
``R``-module on ``ξ_S y^(m)`` (``S`` a subset of generators, ``m >= 0``) in
homological degree ``|S| + 2m``, with

    D(ξ_S y^(m)) = d(ξ_S) y^(m) + (-1)^|S| ξ_S z y^(m-1),
    z = Σ_i c_i x_i^(l-1) ξ_i,

where ``d(ξ_i) = x_i``, ``ξ_i ξ_j = -q^{a_ij} ξ_j ξ_i`` and
``x_i ξ_j = q^{a_ij} ξ_j x_i``.  Tensoring with a module ``M`` and taking
homology gives ``Tor^{Q_c}(k, M)``; the support verdict reads off degrees
``n+1`` and ``n+2``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import linalg as la
from .errors import D2NonZero, EnumerationTooLarge, ValidationError, ZeroLinearPart
from .fields import Field, field_create, format_element
from .qci import ModuleRep, QciAlgebra, base_change, combo_mul

ENUMERATION_LIMIT = 2**20


# --------------------------------------------------------------------------
# points and hypersurfaces


@dataclass(frozen=True)
class ProjPoint:
    field: Field
    coords: tuple

    def __str__(self):
        return "[" + ":".join(format_element(self.field.serialize(c)) for c in self.coords) + "]"

    def to_json(self):
        return [self.field.serialize(c) for c in self.coords]

    def over(self, K: Field) -> "ProjPoint":
        if K == self.field:
            return self
        emb = self.field.embedding(K)
        return ProjPoint(K, tuple(int(emb[c]) for c in self.coords))


def make_point(field: Field, coords) -> ProjPoint:
    """Normalise so that the first nonzero coordinate is 1."""
    coords = [field.element(c) for c in coords]
    lead = next((c for c in coords if c), None)
    if lead is None:
        raise ValidationError("the zero vector is not a projective point")
    inv = int(field.inv(lead))
    return ProjPoint(field, tuple(int(field.mul(c, inv)) for c in coords))


def enumerate_points(field: Field, n: int) -> list[ProjPoint]:
    """All points of ``P^{n-1}`` over ``field``, lexicographic by coordinates."""
    if field.order**n > ENUMERATION_LIMIT:
        raise EnumerationTooLarge(f"|{field}|^{n} exceeds {ENUMERATION_LIMIT}")
    pts = []
    for lead in range(n):
        for tail in itertools.product(field.elements(), repeat=n - lead - 1):
            pts.append(ProjPoint(field, (0,) * lead + (1,) + tuple(tail)))
    return sorted(pts, key=lambda P: P.coords)


@dataclass(frozen=True)
class HypersurfacePoly:
    """``f ∈ m_Z`` as ``{alpha: coeff}`` in the variables ``y_i = x_i^l``."""

    field: Field
    n: int
    terms: tuple  # sorted ((alpha, coeff), ...)

    @property
    def linear_part(self) -> tuple:
        d = dict(self.terms)
        return tuple(d.get(tuple(int(t == i) for t in range(self.n)), 0) for i in range(self.n))

    def point(self) -> ProjPoint:
        if not any(self.linear_part):
            raise ZeroLinearPart("f has zero class in m_Z/m_Z^2")
        return make_point(self.field, self.linear_part)

    def to_json(self):
        return [[list(a), self.field.serialize(c)] for a, c in self.terms]


def hypersurface_poly(field: Field, n: int, terms) -> HypersurfacePoly:
    """Build ``f`` from ``{alpha: coeff}`` or ``[(alpha, coeff), ...]``; no constant term allowed."""
    items = terms.items() if isinstance(terms, dict) else terms
    acc: dict = {}
    for alpha, c in items:
        alpha = tuple(int(x) for x in alpha)
        if len(alpha) != n or min(alpha) < 0:
            raise ValidationError(f"bad exponent vector {alpha}")
        if sum(alpha) == 0:
            raise ValidationError("f must lie in m_Z (no constant term)")
        acc[alpha] = int(field.add(acc.get(alpha, 0), field.element(c)))
    return HypersurfacePoly(field, n, tuple(sorted((a, c) for a, c in acc.items() if c)))


def divide_by_generators(f: HypersurfacePoly) -> list[dict]:
    """``h_1..h_n`` with ``f = Σ h_i y_i``; each monomial goes to its smallest variable."""
    F = f.field
    hs: list[dict] = [{} for _ in range(f.n)]
    for alpha, c in f.terms:
        i = next(t for t in range(f.n) if alpha[t])
        beta = tuple(x - (t == i) for t, x in enumerate(alpha))
        hs[i][beta] = int(F.add(hs[i].get(beta, 0), c))
    return [{b: c for b, c in sorted(h.items()) if c} for h in hs]


@dataclass(frozen=True)
class KoszulElem:
    """``Σ_i r_i ξ_i`` with ``r_i ∈ R`` stored as ``((i, {alpha: coeff}), ...)``."""

    terms: tuple

    def linear_coefficients(self, alg: QciAlgebra) -> tuple:
        out = [0] * alg.n
        for i, r in self.terms:
            for alpha, c in r.items():
                if alpha != tuple((alg.l - 1) * (t == i) for t in range(alg.n)):
                    raise ValidationError("not a reduced bounding cocycle")
                out[i] = c
        return tuple(out)


def _cocycle_from_linear(alg: QciAlgebra, lin) -> KoszulElem:
    terms = []
    for i, c in enumerate(lin):
        if c:
            terms.append((i, {tuple((alg.l - 1) * (t == i) for t in range(alg.n)): int(c)}))
    z = KoszulElem(tuple(terms))
    # d(z) = Σ r_i x_i must vanish in R
    F = alg.field
    total: dict = {}
    for i, r in z.terms:
        prod = combo_mul(alg, r, {tuple(int(t == i) for t in range(alg.n)): 1})
        for m, c in prod.items():
            total[m] = int(F.add(total.get(m, 0), c))
    assert not any(total.values()), "reduced cocycle is not a cycle"
    return z


def bounding_cocycle_reduced(alg: QciAlgebra, f: HypersurfacePoly) -> KoszulElem:
    """Reduction mod ``m_Z`` of ``z_f = Σ_i h_i(x^l) x_i^(l-1) ξ_i``.

    Only the constant terms ``h_i(0)``, i.e. the linear part of ``f``,
    survive the reduction.
    """
    hs = divide_by_generators(f)
    zero = tuple([0] * f.n)
    lin = tuple(h.get(zero, 0) for h in hs)
    if not any(lin):
        raise ZeroLinearPart("f has zero class in m_Z/m_Z^2")
    emb = f.field.embedding(alg.field) if f.field != alg.field else None
    if emb is not None:
        lin = tuple(int(emb[c]) for c in lin)
    return _cocycle_from_linear(alg, lin)


def cocycle_for_point(alg: QciAlgebra, c: ProjPoint) -> KoszulElem:
    return _cocycle_from_linear(alg, c.over(alg.field).coords)


# --------------------------------------------------------------------------
# the reduced Tate complex


def _ext_mul(alg: QciAlgebra, S, alpha, T, beta):
    """``(ξ_S x^alpha)(ξ_T x^beta) = ± q^k ξ_{S∪T} x^gamma``; ``None`` if zero."""
    if set(S) & set(T):
        return None
    k = 0
    for i in range(alg.n):
        if alpha[i]:
            for t in T:
                k += alpha[i] * alg.a[i][t]
    sign = 1
    for s in S:
        for t in T:
            if s > t:
                sign = -sign
                k += alg.a[s][t]
    gamma, k2 = alg.mono_mul(alpha, beta)
    if not alg.in_R(gamma):
        return None
    return tuple(sorted(S + T)), gamma, sign, (k + k2) % alg.l


def components(n: int, degree: int) -> list[tuple[tuple, int]]:
    """Basis ``(S, m)`` with ``|S| + 2m = degree``, ordered by ``|S|`` then ``S``."""
    out = []
    if degree < 0:
        return out
    for j in range(0, min(n, degree) + 1):
        if (degree - j) % 2 == 0:
            m = (degree - j) // 2
            out.extend((S, m) for S in itertools.combinations(range(n), j))
    return out


@dataclass(eq=False)
class TateComplex:
    """R-level description of the reduced Tate complex on degrees ``lo..hi``."""

    alg: QciAlgebra
    cocycle: KoszulElem
    lo: int
    hi: int
    check: bool = True
    terms: dict = dc_field(init=False)
    diffs: dict = dc_field(init=False, repr=False)

    def __post_init__(self):
        if self.hi < self.lo:
            raise ValidationError("empty degree window")
        alg = self.alg
        self.lin = self.cocycle.linear_coefficients(alg)
        self.terms = {d: components(alg.n, d) for d in range(self.lo - 1, self.hi + 1)}
        self.diffs = {d: self._differential(d) for d in range(self.lo, self.hi + 1)}
        if self.check:
            self.assert_d2()

    def rank(self, degree: int) -> int:
        return len(self.terms.get(degree, components(self.alg.n, degree)))

    def _differential(self, d: int) -> list:
        """Entries ``(target_index, source_index, alpha, coeff)`` of ``D_d``."""
        alg, F = self.alg, self.alg.field
        n, l = alg.n, alg.l
        zero = tuple([0] * n)
        tgt_index = {comp: k for k, comp in enumerate(self.terms.get(d - 1, []))}
        entries = []
        for src, (S, m) in enumerate(self.terms[d]):
            acc: dict = {}

            def push(T, mm, gamma, coeff):
                key = (tgt_index[(T, mm)], gamma)
                acc[key] = int(F.add(acc.get(key, 0), coeff))

            for t, s in enumerate(S):
                x_s = tuple(int(u == s) for u in range(n))
                left = _ext_mul(alg, S[:t], zero, (), x_s)
                r = _ext_mul(alg, left[0], left[1], S[t + 1 :], zero)
                if r is None:
                    continue
                T, gamma, sign, k = r
                push(T, m, gamma, alg.scalar(k, sign * (-1) ** t))
            if m >= 1:
                for i, c in enumerate(self.lin):
                    if not c:
                        continue
                    xi = tuple((l - 1) * (u == i) for u in range(n))
                    left = _ext_mul(alg, S, zero, (), xi)
                    r = _ext_mul(alg, left[0], left[1], (i,), zero)
                    if r is None:
                        continue
                    T, gamma, sign, k = r
                    coeff = F.mul(c, alg.scalar(k, sign * (-1) ** len(S)))
                    push(T, m - 1, gamma, int(coeff))
            entries.extend((tgt, src, gamma, c) for (tgt, gamma), c in acc.items() if c)
        return entries

    def assert_d2(self) -> None:
        alg, F = self.alg, self.alg.field
        for d in range(self.lo + 1, self.hi + 1):
            by_src: dict = {}
            for tgt, src, gamma, c in self.diffs[d - 1]:
                by_src.setdefault(src, []).append((tgt, gamma, c))
            for src in range(len(self.terms[d])):
                acc: dict = {}
                for mid, alpha, c in ((t, g, c) for t, s, g, c in self.diffs[d] if s == src):
                    for tgt, beta, c2 in by_src.get(mid, []):
                        gamma, k = alg.mono_mul(beta, alpha)
                        if not alg.in_R(gamma):
                            continue
                        val = F.mul(F.mul(c, c2), alg.scalar(k))
                        acc[(tgt, gamma)] = int(F.add(acc.get((tgt, gamma), 0), val))
                if any(acc.values()):
                    raise D2NonZero(f"D_{d - 1} D_{d} != 0 on component {self.terms[d][src]}")

    def tensor(self, M: ModuleRep) -> la.ChainComplex:
        """``T ⊗_R M`` as a complex of k-spaces on degrees ``lo-1..hi``."""
        F = M.field
        if F != self.alg.field:
            raise ValidationError("module and complex live over different fields")
        m = M.dim
        actions: dict = {}

        def act(alpha):
            if alpha not in actions:
                actions[alpha] = M.monomial_action(alpha)
            return actions[alpha]

        dims = {d: m * len(comps) for d, comps in self.terms.items()}
        diffs = {}
        for d in range(self.lo, self.hi + 1):
            D = la.zeros(dims[d - 1], dims[d])
            for tgt, src, alpha, c in self.diffs[d]:
                blk = D[tgt * m : (tgt + 1) * m, src * m : (src + 1) * m]
                blk[:] = F.add(blk, F.mul(c, act(alpha)))
            diffs[d] = D
        return la.ChainComplex(F, self.lo - 1, self.hi, dims, diffs)

    def differential_as_r_matrix(self, d: int) -> list[list[dict]]:
        """``D_d`` as a (target x source) matrix of ``R``-elements (for display)."""
        out = [[{} for _ in self.terms[d]] for _ in self.terms[d - 1]]
        for tgt, src, alpha, c in self.diffs[d]:
            out[tgt][src][alpha] = c
        return out


def tate_complex(alg: QciAlgebra, c, lo: int, hi: int) -> TateComplex:
    """Reduced Tate complex at a point ``c`` (a :class:`ProjPoint` or a :class:`HypersurfacePoly`)."""
    if lo < 0 or hi < lo:
        raise ValidationError("need 0 <= lo <= hi")
    if isinstance(c, HypersurfacePoly):
        z = bounding_cocycle_reduced(alg, c)
    elif isinstance(c, KoszulElem):
        z = c
    else:
        z = cocycle_for_point(alg, c)
    return TateComplex(alg, z, lo, hi)


# --------------------------------------------------------------------------
# Tor and support


def common_field(*fields: Field) -> Field:
    p = fields[0].p
    e = 1
    for F in fields:
        if F.p != p:
            raise ValidationError("fields of different characteristic")
        e = np.lcm(e, F.e)
    return field_create(p, int(e))


def tor_dims(alg: QciAlgebra, M: ModuleRep, c, lo: int, hi: int) -> dict[int, int]:
    """``dim Tor_i^{Q_c}(k, M)`` for ``lo <= i <= hi``.

    ``c`` may be a point, a hypersurface polynomial or a reduced cocycle;
    scalars are extended to a field containing both ``M`` and ``c``.
    """
    fields = [alg.field, M.field]
    if isinstance(c, (ProjPoint, HypersurfacePoly)):
        fields.append(c.field)
    K = common_field(*fields)
    algK = alg.base_change(K)
    MK = base_change(M, K)
    if isinstance(c, KoszulElem):
        T = TateComplex(algK, c, max(lo - 1, 0), hi + 1)
    else:
        T = tate_complex(algK, c, max(lo - 1, 0), hi + 1)
    C = T.tensor(MK)
    H = la.homology_dims(C)
    return {i: H[i] for i in range(lo, hi + 1)}


def decision_window(alg: QciAlgebra) -> tuple[int, int]:
    return alg.n + 1, alg.n + 2


def supported_at(alg: QciAlgebra, M: ModuleRep, c) -> bool:
    """True iff ``M`` has infinite projective dimension over ``Q_c``."""
    lo, hi = decision_window(alg)
    dims = tor_dims(alg, M, c, lo, hi)
    return dims[lo] > 0 or dims[hi] > 0


@dataclass
class SupportReport:
    module: str
    algebra: dict
    ext_degree: int
    points: list  # [(ProjPoint, verdict, {degree: dim})]
    annihilator: dict | None = None

    @property
    def supported(self) -> list[ProjPoint]:
        return [P for P, v, _ in self.points if v]

    def to_json(self) -> dict:
        out = {
            "module": self.module,
            "algebra": self.algebra,
            "ext_degree": self.ext_degree,
            "points": [
                {"point": P.to_json(), "supported": v, "tor": {str(k): d for k, d in dims.items()}}
                for P, v, dims in self.points
            ],
            "supported": [P.to_json() for P in self.supported],
        }
        if self.annihilator is not None:
            out["annihilator"] = self.annihilator
        return out


def support_field(alg: QciAlgebra, e: int) -> Field:
    if e % alg.field.e:
        raise ValidationError(f"extension degree {e} is not a multiple of {alg.field.e}")
    return field_create(alg.field.p, e)


def support_enumerate(alg: QciAlgebra, M: ModuleRep, e: int, name: str = "M") -> SupportReport:
    """Verdicts at every point of ``P^{n-1}(F_{p^e})`` in lexicographic order."""
    K = support_field(alg, e)
    pts = enumerate_points(K, alg.n)
    algK = alg.base_change(K)
    MK = base_change(M, K)
    lo, hi = decision_window(alg)
    rows = []
    for P in pts:
        dims = tor_dims(algK, MK, P, lo, hi)
        rows.append((P, dims[lo] > 0 or dims[hi] > 0, dims))
    return SupportReport(name, alg.describe(), e, rows)
