"""Cross-checks between the Tate route, the Ext route and classical oracles.

Every suite returns a :class:`SuiteReport`; a failing case carries enough
data (module matrices, point, dimensions on both sides) to be replayed.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from . import cohomology as co
from . import linalg as la
from . import qci, tate
from .errors import PreconditionViolated, WrongRegime
from .fields import Field
from .qci import ModuleRep, QciAlgebra


@dataclass
class SuiteReport:
    name: str
    corpus: dict
    cases: list = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["passed"] for c in self.cases)

    @property
    def failures(self) -> list:
        return [c for c in self.cases if not c["passed"]]

    def add(self, passed: bool, **data) -> None:
        self.cases.append({"passed": bool(passed), **data})

    def to_json(self) -> dict:
        return {
            "suite": self.name,
            "corpus": self.corpus,
            "passed": self.passed,
            "n_cases": len(self.cases),
            "n_failed": len(self.failures),
            "cases": self.cases,
        }


def designed_modules(alg: QciAlgebra) -> dict[str, ModuleRep]:
    """Modules with known support: free ones, k, R ⊕ k and R/(x_1R)."""
    R = qci.regular_module(alg)
    k = qci.trivial_module(alg)
    return {
        "R": R,
        "R^2": qci.free_module(alg, 2),
        "k": k,
        "R+k": qci.direct_sum(R, k),
        "R/(x1R)": qci.ideal_quotient(alg, [[1]]),
    }


def named_corpus(alg: QciAlgebra, seed: int, count: int, max_rank: int = 2) -> dict[str, ModuleRep]:
    mods = qci.corpus_generate(alg, seed, count, max_rank)
    return {f"seed{seed}#{i}": M for i, M in enumerate(mods)}


def _as_named(corpus) -> dict[str, ModuleRep]:
    if isinstance(corpus, dict):
        return corpus
    return {f"M{i}": M for i, M in enumerate(corpus)}


def _witness(M: ModuleRep) -> dict:
    return M.to_json()


def relative_degrees(alg: QciAlgebra, rel=(1, 2)) -> tuple:
    """Absolute extension degrees ``e`` for fields of degree ``rel`` over the base field."""
    return tuple(alg.field.e * r for r in rel)


# --------------------------------------------------------------------------


def suite_representative_independence(alg: QciAlgebra, f, g, corpus, D: int | None = None) -> SuiteReport:
    """Same class in ``m_Z/m_Z^2`` ⇒ same reduced cocycle and same Tor tables."""
    corpus = _as_named(corpus)
    if f.linear_part != g.linear_part or not any(f.linear_part):
        raise PreconditionViolated("f and g must have equal nonzero linear parts")
    rep = SuiteReport(
        "representative_independence",
        {"algebra": alg.describe(), "f": f.to_json(), "g": g.to_json(), "modules": list(corpus)},
    )
    hf, hg = tate.divide_by_generators(f), tate.divide_by_generators(g)
    zf, zg = tate.bounding_cocycle_reduced(alg, f), tate.bounding_cocycle_reduced(alg, g)
    rep.add(
        zf == zg,
        case="cocycle",
        divisions_differ=hf != hg,
        h_f=[[[list(a), f.field.serialize(c)] for a, c in h.items()] for h in hf],
        h_g=[[[list(a), g.field.serialize(c)] for a, c in h.items()] for h in hg],
    )
    point = f.point()
    top = alg.n + 4
    lo, hi = tate.decision_window(alg)
    for name, M in corpus.items():
        tf = tate.tor_dims(alg, M, f, 0, top)
        tg = tate.tor_dims(alg, M, g, 0, top)
        verdict = tf[lo] > 0 or tf[hi] > 0
        K = tate.common_field(point.field, M.field, alg.field)
        E = co.ext_module(alg, M, D)
        fiber = co.fiber_supported_at(alg, E, point.over(K))
        ok = tf == tg and fiber == verdict
        data = {"case": name, "tor_f": list(tf.values()), "tor_g": list(tg.values()), "fiber": fiber}
        if not ok:
            data["module"] = _witness(M)
        rep.add(ok, **data)
    return rep


def suite_detection(alg: QciAlgebra, corpus, ext_degrees=None, D: int | None = None) -> SuiteReport:
    """free ⇔ no supported point (over the given extensions) ⇔ Ext eventually vanishes."""
    corpus = _as_named(corpus)
    ext_degrees = ext_degrees or relative_degrees(alg)
    rep = SuiteReport(
        "detection",
        {"algebra": alg.describe(), "ext_degrees": list(ext_degrees), "modules": list(corpus)},
    )
    for name, M in corpus.items():
        free = qci.module_is_free(alg, M)
        supported = []
        for e in ext_degrees:
            supported += [P.to_json() for P in tate.support_enumerate(alg, M, e, name).supported]
        E = co.ext_module(alg, M, D)
        ok = free == (not supported) == E.bounded
        data = {"case": name, "free": free, "n_supported": len(supported), "ext_bounded": E.bounded}
        if not ok:
            data.update(module=_witness(M), supported=supported, betti=E.dims)
        rep.add(ok, **data)
    return rep


def suite_route_agreement(
    alg: QciAlgebra, corpus, e: int | None = None, D: int | None = None, exact: dict | None = None, d_max: int = 1
) -> SuiteReport:
    """Tate verdict = Ext-fiber verdict at every rational point.

    ``exact`` names modules whose support is cut out in ξ-degree ``<= d_max``;
    for those the annihilator zero locus must equal the supported set too.
    """
    corpus = _as_named(corpus)
    exact = exact or {}
    e = e or alg.field.e
    rep = SuiteReport(
        "route_agreement",
        {"algebra": alg.describe(), "ext_degree": e, "modules": list(corpus), "exact": sorted(exact)},
    )
    K = tate.support_field(alg, e)
    pts = tate.enumerate_points(K, alg.n)
    algK = alg.base_change(K)
    for name, M in corpus.items():
        E = co.ext_module(alg, M, D)
        MK = qci.base_change(M, K)
        mism = []
        supp = []
        for P in pts:
            a = tate.supported_at(algK, MK, P)
            b = co.fiber_supported_at(alg, E, P)
            if a:
                supp.append(P.coords)
            if a != b:
                mism.append({"point": P.to_json(), "tate": a, "fiber": b})
        data = {"case": name, "n_points": len(pts), "n_supported": len(supp)}
        ok = not mism
        if name in exact:
            ann = co.annihilator_window(alg, E, d_max=d_max)
            zl = [P.coords for P in co.zero_locus(alg, ann, e)]
            data["zero_locus_matches"] = zl == supp
            ok = ok and zl == supp
        if not ok:
            data.update(module=_witness(M), mismatches=mism, betti=E.dims)
        rep.add(ok, **data)
    return rep


def frobenius_inverse(K: Field, x: int) -> int:
    """The unique ``y`` with ``y^p = x``."""
    return K.power(x, K.order // K.p)


def rank_variety_supported(alg: QciAlgebra, M: ModuleRep, c: tate.ProjPoint) -> bool:
    """Shifted-subgroup test: ``M`` is not free over ``k[u]/(u^p)``.

    The hypersurface point ``c`` corresponds to the shifted subgroup
    ``u = Σ α_i x_i`` with ``α_i^p = c_i``, because ``u^p = Σ α_i^p x_i^p``.
    """
    K = c.field
    MK = qci.base_change(M, K)
    p = alg.l
    alpha = [frobenius_inverse(K, x) for x in c.coords]
    U = K.lincomb(alpha, list(MK.X))
    P = la.identity(MK.dim)
    for _ in range(p - 1):
        P = K.matmul(U, P)
    return p * la.rank(K, P) != MK.dim


def suite_rank_variety(alg: QciAlgebra, corpus, e: int | None = None) -> SuiteReport:
    """Elementary abelian case: Tate verdicts against the shifted-subgroup oracle."""
    if alg.regime != qci.COMMUTATIVE or alg.l != alg.field.p:
        raise WrongRegime("rank varieties need q = 1 and l = p")
    corpus = _as_named(corpus)
    e = e or alg.field.e
    rep = SuiteReport("rank_variety", {"algebra": alg.describe(), "ext_degree": e, "modules": list(corpus)})
    K = tate.support_field(alg, e)
    pts = tate.enumerate_points(K, alg.n)
    algK = alg.base_change(K)
    for name, M in corpus.items():
        MK = qci.base_change(M, K)
        mism = []
        for P in pts:
            a = tate.supported_at(algK, MK, P)
            b = rank_variety_supported(alg, M, P)
            if a != b:
                mism.append({"point": P.to_json(), "tate": a, "oracle": b})
        data = {"case": name, "n_points": len(pts)}
        if mism:
            data.update(module=_witness(M), mismatches=mism)
        rep.add(not mism, **data)
    return rep
