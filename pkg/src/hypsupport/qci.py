"""Quantum complete intersections and their finite-dimensional modules.

``Q = k_q[x_1..x_n]`` with ``x_i x_j = q^{a_ij} x_j x_i``, central subalgebra
``Z = k[x_1^l..x_n^l]`` and ``R = Q/(x_1^l..x_n^l)``.  Monomials are
exponent tuples in the order ``x_1^{e_1} ... x_n^{e_n}``; structure constants
are always powers of ``q``, so they are tracked as exponents mod ``l``.

Generators are 0-based internally.  :func:`normal_form` accepts 1-based words
to match the CLI and user-facing examples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import linalg as la
from .errors import (
    BadExponents,
    BadOrder,
    BadTruncation,
    NilpotencyViolated,
    RegimeConflict,
    RelationViolated,
    ValidationError,
    ZeroModule,
)
from .fields import Field

QUANTUM = "quantum"
COMMUTATIVE = "commutative"


@dataclass(frozen=True, eq=False)
class QciAlgebra:
    field: Field
    n: int
    l: int
    q: int
    a: tuple
    regime: str

    @property
    def global_dim(self) -> int:
        return self.n

    @property
    def dim(self) -> int:
        return self.l**self.n

    @cached_property
    def monomials(self) -> list[tuple[int, ...]]:
        return list(itertools.product(range(self.l), repeat=self.n))

    @cached_property
    def mono_index(self) -> dict:
        return {m: k for k, m in enumerate(self.monomials)}

    @cached_property
    def qpow(self) -> np.ndarray:
        """``qpow[k] = q^k`` for ``0 <= k < l``."""
        return np.array([self.field.power(self.q, k) for k in range(self.l)], dtype=np.int64)

    def scalar(self, qexp: int, sign: int = 1) -> int:
        s = int(self.qpow[qexp % self.l])
        return s if sign > 0 else int(self.field.neg(s))

    def mono_mul(self, alpha, beta) -> tuple[tuple[int, ...], int]:
        """``x^alpha x^beta = q^k x^(alpha+beta)`` in ``Q``; returns (exponent, k mod l)."""
        k = 0
        for i in range(self.n):
            if alpha[i]:
                for j in range(i):
                    if beta[j]:
                        k += self.a[i][j] * alpha[i] * beta[j]
        return tuple(x + y for x, y in zip(alpha, beta)), k % self.l

    def in_R(self, alpha) -> bool:
        return all(x < self.l for x in alpha)

    @cached_property
    def left_mult(self) -> tuple[np.ndarray, ...]:
        """Matrices of ``x_i ·`` on the monomial basis of ``R`` (column convention)."""
        mats = []
        L = self.dim
        for i in range(self.n):
            unit = tuple(int(t == i) for t in range(self.n))
            M = np.zeros((L, L), dtype=np.int64)
            for col, m in enumerate(self.monomials):
                g, k = self.mono_mul(unit, m)
                if self.in_R(g):
                    M[self.mono_index[g], col] = self.scalar(k)
            mats.append(M)
        return tuple(mats)

    def base_change(self, K: Field) -> "QciAlgebra":
        if K == self.field:
            return self
        emb = self.field.embedding(K)
        return QciAlgebra(K, self.n, self.l, int(emb[self.q]), self.a, self.regime)

    def describe(self) -> dict:
        return {
            "p": self.field.p,
            "e": self.field.e,
            "n": self.n,
            "l": self.l,
            "q": self.field.serialize(self.q),
            "a": [list(r) for r in self.a],
            "regime": self.regime,
        }

    def __repr__(self):
        return f"QciAlgebra({self.field!r}, n={self.n}, l={self.l}, q={self.q}, {self.regime})"


def algebra_create(field: Field, n: int, l: int, q, a, regime: str | None = None) -> QciAlgebra:
    """Validate parameters of ``k_q[x]/(x_i^l)`` and infer the regime from ``q``."""
    if l < 2:
        raise BadTruncation(f"truncation exponent l={l} < 2")
    if n < 1:
        raise ValidationError("need at least one generator")
    q = field.element(q)
    a = np.asarray(a, dtype=np.int64)
    if a.shape != (n, n):
        raise BadExponents(f"exponent matrix has shape {a.shape}, expected {(n, n)}")
    a = a % l
    if np.any(np.diag(a)) or np.any((a + a.T) % l):
        raise BadExponents("a must be antisymmetric mod l with zero diagonal")
    inferred = COMMUTATIVE if q == 1 else QUANTUM
    if regime is not None and regime != inferred:
        raise RegimeConflict(f"q={q} implies {inferred} regime, {regime} was claimed")
    if q == 0:
        raise BadOrder("q must be nonzero")
    if inferred == QUANTUM:
        order = field.mult_order(q)
        if order != l:
            raise BadOrder(f"q={q} has multiplicative order {order}, expected l={l}")
    alg = QciAlgebra(field, n, l, int(q), tuple(tuple(int(v) for v in r) for r in a), inferred)
    for i in range(n):
        for j in range(n):
            if alg.scalar(l * alg.a[i][j]) != 1:  # pragma: no cover - forced by q^l = 1
                raise BadOrder("x_i^l is not central")
    return alg


# --------------------------------------------------------------------------
# normal forms


def combo_mul(alg: QciAlgebra, u: dict, v: dict, truncate: bool = True) -> dict:
    """Product of two basis combinations ``{exponent: coeff}``."""
    F = alg.field
    out: dict = {}
    for al, ca in u.items():
        for be, cb in v.items():
            g, k = alg.mono_mul(al, be)
            if truncate and not alg.in_R(g):
                continue
            c = int(F.mul(F.mul(ca, cb), alg.scalar(k)))
            out[g] = int(F.add(out.get(g, 0), c))
    return {m: c for m, c in sorted(out.items()) if c}


def normal_form(alg: QciAlgebra, word, coeff=1, in_R: bool = True) -> dict:
    """Normal form of ``coeff * x_{w_1} ... x_{w_k}`` (1-based generator indices)."""
    F = alg.field
    result = {tuple([0] * alg.n): F.element(coeff)}
    for w in word:
        if not 1 <= w <= alg.n:
            raise ValidationError(f"generator index {w} out of range")
        unit = {tuple(int(t == w - 1) for t in range(alg.n)): 1}
        result = combo_mul(alg, result, unit, truncate=in_R)
    return {m: c for m, c in result.items() if c}


def combo_to_vector(alg: QciAlgebra, combo: dict) -> np.ndarray:
    v = np.zeros(alg.dim, dtype=np.int64)
    for m, c in combo.items():
        v[alg.mono_index[m]] = c
    return v


def vector_to_combo(alg: QciAlgebra, v) -> dict:
    return {alg.monomials[k]: int(c) for k, c in enumerate(v) if c}


# --------------------------------------------------------------------------
# modules


@dataclass(frozen=True, eq=False)
class ModuleRep:
    """Left ``R``-module: ``X[i]`` is the matrix of ``x_i`` (column convention)."""

    field: Field
    dim: int
    X: tuple

    @cached_property
    def _actions(self) -> dict:
        return {}

    def monomial_action(self, alpha) -> np.ndarray:
        alpha = tuple(alpha)
        if alpha in self._actions:
            return self._actions[alpha]
        F = self.field
        M = la.identity(self.dim)
        for i in reversed(range(len(alpha))):
            for _ in range(alpha[i]):
                M = F.matmul(self.X[i], M)
        M.setflags(write=False)
        self._actions[alpha] = M
        return M

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "X": [[[self.field.serialize(v) for v in row] for row in Xi] for Xi in self.X],
        }


def module_validate(alg: QciAlgebra, dim: int, X, field: Field | None = None) -> ModuleRep:
    """Check the skew-commutation and truncation relations exactly."""
    F = field or alg.field
    if F != alg.field:
        alg = alg.base_change(F)
    if len(X) != alg.n:
        raise ValidationError(f"expected {alg.n} action matrices, got {len(X)}")
    mats = []
    for i, Xi in enumerate(X):
        Xi = la.as_matrix(Xi, dim, dim)
        if Xi.shape != (dim, dim):
            raise ValidationError(f"X_{i + 1} has shape {Xi.shape}, expected {(dim, dim)}")
        if np.any((Xi < 0) | (Xi >= F.order)):
            raise ValidationError(f"X_{i + 1} has entries outside the field encoding")
        Xi = Xi.copy()
        Xi.setflags(write=False)
        mats.append(Xi)
    for i in range(alg.n):
        for j in range(i + 1, alg.n):
            lhs = F.matmul(mats[i], mats[j])
            rhs = F.mul(alg.scalar(alg.a[i][j]), F.matmul(mats[j], mats[i]))
            bad = np.argwhere(lhs != rhs)
            if bad.size:
                raise RelationViolated(i + 1, j + 1, tuple(int(t) for t in bad[0]))
    for i in range(alg.n):
        P = la.identity(dim)
        for _ in range(alg.l):
            P = F.matmul(mats[i], P)
        if P.any():
            raise NilpotencyViolated(i + 1)
    return ModuleRep(F, dim, tuple(mats))


def free_module(alg: QciAlgebra, rank: int = 1) -> ModuleRep:
    mats = tuple(la.direct_sum(*([L] * rank)) if rank else la.zeros(0, 0) for L in alg.left_mult)
    return ModuleRep(alg.field, rank * alg.dim, mats)


def regular_module(alg: QciAlgebra) -> ModuleRep:
    return free_module(alg, 1)


def trivial_module(alg: QciAlgebra) -> ModuleRep:
    return ModuleRep(alg.field, 1, tuple(la.zeros(1, 1) for _ in range(alg.n)))


def direct_sum(*mods: ModuleRep) -> ModuleRep:
    F = mods[0].field
    n = len(mods[0].X)
    return ModuleRep(F, sum(M.dim for M in mods), tuple(la.direct_sum(*(M.X[i] for M in mods)) for i in range(n)))


def base_change(M: ModuleRep, K: Field) -> ModuleRep:
    if K == M.field:
        return M
    emb = M.field.embedding(K)
    return ModuleRep(K, M.dim, tuple(emb[Xi] for Xi in M.X))


def span_closure(M: ModuleRep, gens) -> tuple[np.ndarray, list[int]]:
    """Echelon basis of the submodule of ``M`` generated by the rows ``gens``."""
    F = M.field
    B, piv = la.row_space(F, la.as_matrix(gens, 0, M.dim))
    while True:
        new = [B] + [F.matmul(B, Xi.T) for Xi in M.X]
        B2, piv2 = la.row_space(F, np.vstack(new))
        if len(piv2) == len(piv):
            return B, piv
        B, piv = B2, piv2


def submodule(M: ModuleRep, basis: np.ndarray, pivots: list[int]) -> ModuleRep:
    """Restriction of the action to an invariant subspace given in echelon form."""
    F = M.field
    mats = tuple(F.matmul(Xi, basis.T)[pivots, :] if len(pivots) else la.zeros(0, 0) for Xi in M.X)
    return ModuleRep(F, len(pivots), mats)


def quotient(M: ModuleRep, basis: np.ndarray, pivots: list[int]) -> ModuleRep:
    """``M / S`` for an invariant subspace ``S`` in echelon form.

    Coordinates on the quotient are the non-pivot coordinates after reducing
    modulo ``S``.
    """
    F = M.field
    keep = [c for c in range(M.dim) if c not in set(pivots)]
    mats = []
    for Xi in M.X:
        images = Xi[:, keep].T  # rows: x_i applied to the complement basis vectors
        red = la.reduce_rows(F, images, basis, pivots)
        mats.append(np.ascontiguousarray(red[:, keep].T))
    return ModuleRep(F, len(keep), tuple(mats))


def radical_rows(M: ModuleRep) -> np.ndarray:
    """Rows spanning ``Jac(R)·M = Σ_i im X_i``."""
    if M.dim == 0:
        return la.zeros(0, 0)
    return np.vstack([Xi.T for Xi in M.X])


def top_dimension(M: ModuleRep) -> int:
    """``dim M / Jac(R) M``: the number of generators of a projective cover."""
    return M.dim - la.rank(M.field, radical_rows(M))


def module_action(M: ModuleRep):
    """``act(i, W)``: apply ``x_i`` to every row of ``W``."""
    F = M.field
    return lambda i, W: F.matmul(W, M.X[i].T)


def free_action(alg: QciAlgebra, rank: int):
    """Row action of ``x_i`` on ``R^rank`` (generator-major coordinates), blockwise."""
    F, L = alg.field, alg.dim
    LT = [Li.T.copy() for Li in alg.left_mult]

    def act(i, W):
        k = W.shape[0]
        return F.matmul(W.reshape(k * rank, L), LT[i]).reshape(k, rank * L)

    return act


def generators_of(F: Field, n: int, act, rows: np.ndarray) -> np.ndarray:
    """Echelon basis of a complement to ``Jac·N`` in ``N = span(rows)``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.shape[0] == 0:
        return rows
    J = np.vstack([act(i, rows) for i in range(n)])
    JB, Jp = la.row_space(F, J)
    red = la.reduce_rows(F, rows, JB, Jp)
    G, _ = la.row_space(F, red)
    return G


def cover_rows(alg: QciAlgebra, F: Field, act, gens: np.ndarray) -> np.ndarray:
    """Row ``j*L + k`` is ``x^{alpha_k} · g_j`` (images of the basis of ``R^b``)."""
    b, L = gens.shape[0], alg.dim
    out = la.zeros(b * L, gens.shape[1])
    cache = {tuple([0] * alg.n): gens}
    for k, alpha in enumerate(alg.monomials):
        if alpha not in cache:
            i = next(t for t in range(alg.n) if alpha[t])
            prev = tuple(x - (t == i) for t, x in enumerate(alpha))
            cache[alpha] = act(i, cache[prev])
        out[k::L] = cache[alpha]
    return out


def minimal_generators(M: ModuleRep, rows=None) -> np.ndarray:
    """Rows of a deterministic minimal generating set.

    ``rows`` spans an invariant subspace of ``M`` (default: all of ``M``);
    generators are an echelon basis of a complement to its radical.
    """
    if rows is None:
        rows = la.identity(M.dim)
    return generators_of(M.field, len(M.X), module_action(M), rows)


def cover_matrix(alg: QciAlgebra, M: ModuleRep, gens: np.ndarray) -> np.ndarray:
    """k-matrix of ``R^b -> M``, ``x^alpha e_j -> x^alpha · g_j`` (generator-major columns)."""
    return cover_rows(alg, M.field, module_action(M), gens).T


def syzygy(alg: QciAlgebra, M: ModuleRep) -> ModuleRep:
    """``ΩM``: the kernel of the minimal projective cover ``R^b -> M``."""
    if M.dim == 0:
        raise ZeroModule("zero module has no projective cover")
    gens = minimal_generators(M)
    K = la.kernel_basis(M.field, cover_matrix(alg, M, gens))
    Fb = free_module(alg.base_change(M.field), gens.shape[0])
    B, piv = la.row_space(M.field, K)
    return submodule(Fb, B, piv)


def module_is_free(alg: QciAlgebra, M: ModuleRep) -> bool:
    """Freeness over the local Frobenius algebra ``R``.

    Counting criterion ``dim M = b_0 l^n``, cross-checked against the kernel
    of the projective cover (``b_1 = 0``).
    """
    if M.dim == 0:
        return True
    b0 = top_dimension(M)
    counted = M.dim == b0 * alg.dim
    gens = minimal_generators(M)
    assert gens.shape[0] == b0
    cover = cover_matrix(alg, M, gens)
    kernel_dim = cover.shape[1] - la.rank(M.field, cover)
    assert kernel_dim == b0 * alg.dim - M.dim, "projective cover is not surjective"
    assert counted == (kernel_dim == 0)
    return counted


def ideal_quotient(alg: QciAlgebra, words, rank: int = 1) -> ModuleRep:
    """``R^rank`` modulo the words (1-based) in every summand; ``[[1]]`` gives R/(x_1R)."""
    Fr = free_module(alg, rank)
    L = alg.dim
    gens = []
    for j in range(rank):
        for w in words:
            v = np.zeros(rank * L, dtype=np.int64)
            v[j * L : (j + 1) * L] = combo_to_vector(alg, normal_form(alg, w))
            gens.append(v)
    B, piv = span_closure(Fr, np.array(gens, dtype=np.int64).reshape(-1, rank * L))
    return quotient(Fr, B, piv)


def corpus_generate(alg: QciAlgebra, seed: int, count: int, max_rank: int = 2) -> list[ModuleRep]:
    """Deterministic modules ``R^r / S`` with ``S`` generated by seeded random elements."""
    if count < 1:
        raise ValidationError("count must be >= 1")
    F = alg.field
    rng = np.random.default_rng(seed)
    L = alg.dim
    out: list[ModuleRep] = []
    while len(out) < count:
        r = int(rng.integers(1, max_rank + 1))
        Fr = free_module(alg, r)
        ngens = int(rng.integers(0, r + 2))
        gens = []
        for _ in range(ngens):
            kind = int(rng.integers(0, 3))
            v = F.random(rng, r * L)
            if kind >= 1:
                v[::L] = 0  # drop constant terms: element of the radical
            if kind == 2:
                keep = rng.choice(r * L, size=min(2, r * L), replace=False)
                mask = np.zeros(r * L, dtype=bool)
                mask[keep] = True
                v[~mask] = 0
            gens.append(v)
        B, piv = span_closure(Fr, np.array(gens, dtype=np.int64).reshape(-1, r * L))
        M = quotient(Fr, B, piv)
        if M.dim == 0:
            continue
        out.append(module_validate(alg, M.dim, M.X))
    return out
