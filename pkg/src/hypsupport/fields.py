"""Finite fields F_{p^e} with vectorised numpy arithmetic.

Elements are encoded as integers in ``[0, p^e)``; the base-``p`` digits of an
element are its coefficients (low degree first) as a polynomial in the
canonical generator ``t``.  For ``e == 1`` this is the usual ``Z/p``.

Multiplication in proper extensions goes through exp/log tables built from
the smallest primitive element, so every operation works elementwise on
numpy arrays as well as on Python ints.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from .errors import ExtensionTooLarge, NonPrime, ValidationError

MAX_ORDER = 2**20
_TABLE_ADD_LIMIT = 256


def format_element(value) -> str:
    """Text form of a serialised element: ints as-is, coefficient lists as polynomials in ``t``."""
    if isinstance(value, int):
        return str(value)
    terms = []
    for k, c in enumerate(value):
        if c:
            mono = "" if k == 0 else "t" if k == 1 else f"t^{k}"
            terms.append(str(c) if not mono else mono if c == 1 else f"{c}{mono}")
    return "+".join(terms) or "0"


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _poly_divmod_is_zero(num: list[int], den: tuple[int, ...], p: int) -> bool:
    """True iff the monic ``den`` divides ``num`` over F_p."""
    num = list(num)
    dd = len(den) - 1
    for k in range(len(num) - 1, dd - 1, -1):
        c = num[k] % p
        if c:
            for j in range(dd + 1):
                num[k - dd + j] = (num[k - dd + j] - c * den[j]) % p
    return not any(x % p for x in num[:dd])


def _is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if _poly_divmod_is_zero(list(poly), tuple(low) + (1,), p):
                return False
    return True


def smallest_irreducible(p: int, e: int) -> tuple[int, ...]:
    """Lexicographically smallest monic irreducible of degree ``e``.

    Coefficient tuples are compared low degree first; the returned tuple
    includes the leading 1.
    """
    for low in itertools.product(range(p), repeat=e):
        poly = tuple(low) + (1,)
        if e > 1 and low[0] == 0:
            continue
        if _is_irreducible(poly, p):
            return poly
    raise AssertionError("no irreducible polynomial found")  # pragma: no cover


class Field:
    """The finite field with ``p**e`` elements."""

    def __init__(self, p: int, e: int = 1):
        if not is_prime(p):
            raise NonPrime(f"{p} is not prime")
        if e < 1:
            raise ValidationError("extension degree must be >= 1")
        if p**e > MAX_ORDER:
            raise ExtensionTooLarge(f"p^e = {p}^{e} exceeds {MAX_ORDER}")
        self.p = p
        self.e = e
        self.order = p**e
        self.modulus = smallest_irreducible(p, e) if e > 1 else None
        if e == 1:
            self._inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)
        else:
            self._build_tables()

    # -- construction helpers -------------------------------------------------
    def _mul_slow(self, a: int, b: int) -> int:
        p, e, mod = self.p, self.e, self.modulus
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                for j in range(e + 1):
                    prod[k - e + j] = (prod[k - e + j] - c * mod[j]) % p
        return self.from_coeffs(prod[:e])

    def _build_tables(self) -> None:
        n = self.order - 1
        for g in range(2, self.order):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_slow(x, g)
            if len(exp) == n:
                break
        self.generator = g
        self._exp = np.array(exp + exp, dtype=np.int64)
        log = np.zeros(self.order, dtype=np.int64)
        log[self._exp[:n]] = np.arange(n)
        self._log = log
        self._pows = self.p ** np.arange(self.e, dtype=np.int64)
        if self.order <= _TABLE_ADD_LIMIT:
            el = np.arange(self.order)
            self._add_table = self._add_digits(el[:, None], el[None, :])
            self._neg_table = self._neg_digits(el)
            self._mul_table = self._mul_logs(el[:, None], el[None, :])
        else:
            self._add_table = None
            self._mul_table = None
        # t^k mod modulus for k < 2e-1, as digit vectors, for coefficient-wise matmul
        red = []
        for k in range(2 * self.e - 1):
            red.append(self.to_coeffs(self._t_power(k)))
        self._reduce_t = np.array(red, dtype=np.int64)

    def _t_power(self, k: int) -> int:
        x = 1
        for _ in range(k):
            x = self._mul_slow(x, self.p)
        return x

    def _mul_logs(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        r = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, r)

    def _digits(self, a):
        a = np.asarray(a, dtype=np.int64)
        return [(a // pk) % self.p for pk in self._pows]

    def _add_digits(self, a, b):
        da, db = self._digits(a), self._digits(b)
        return sum(((x + y) % self.p) * pk for x, y, pk in zip(da, db, self._pows))

    def _neg_digits(self, a):
        return sum(((-x) % self.p) * pk for x, pk in zip(self._digits(a), self._pows))

    # -- identity -------------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Field) and (self.p, self.e) == (other.p, other.e)

    def __hash__(self):
        return hash((self.p, self.e))

    def __repr__(self):
        if self.e == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.e})"

    # -- encoding -------------------------------------------------------------
    def to_coeffs(self, a: int) -> list[int]:
        a = int(a)
        out = []
        for _ in range(self.e):
            out.append(a % self.p)
            a //= self.p
        return out

    def from_coeffs(self, coeffs) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.e:
            raise ValidationError(f"too many coefficients for {self}")
        return sum((int(c) % self.p) * self.p**k for k, c in enumerate(coeffs))

    def element(self, value) -> int:
        """Canonical element from a coefficient list or an int.

        Ints in ``[0, p^e)`` are read in the digit encoding (so ``0..p-1`` are
        the prime subfield); negative ints are images of ``Z``.
        """
        if isinstance(value, (list, tuple)):
            return self.from_coeffs(value)
        value = int(value)
        if self.e == 1 or value < 0:
            return value % self.p
        if value >= self.order:
            raise ValidationError(f"{value} is not an element of {self}")
        return value

    def serialize(self, a):
        a = int(a)
        return a if self.e == 1 else self.to_coeffs(a)

    def elements(self) -> range:
        return range(self.order)

    # -- arithmetic (vectorised; Python ints in -> numpy scalars out) ---------
    def add(self, a, b):
        if self.e == 1:
            return (np.asarray(a) + np.asarray(b)) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._add_digits(a, b)

    def neg(self, a):
        if self.e == 1:
            return (-np.asarray(a)) % self.p
        if self._add_table is not None:
            return self._neg_table[a]
        return self._neg_digits(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.e == 1:
            return (np.asarray(a, dtype=np.int64) * np.asarray(b, dtype=np.int64)) % self.p
        if self._mul_table is not None:
            return self._mul_table[a, b]
        return self._mul_logs(a, b)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero")
        if self.e == 1:
            return self._inv[a]
        return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]

    def power(self, a: int, k: int) -> int:
        a = int(a)
        if a == 0:
            return 0 if k > 0 else 1
        if self.e == 1:
            return pow(a, k % (self.p - 1), self.p)
        return int(self._exp[(int(self._log[a]) * k) % (self.order - 1)])

    def mult_order(self, a: int) -> int:
        a = int(a)
        if a == 0:
            raise ValidationError("zero has no multiplicative order")
        k, x = 1, a
        while x != 1:
            x = int(self.mul(x, a))
            k += 1
        return k

    def matmul(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if self.e == 1:
            return (A @ B) % self.p
        # multiply coefficient matrices over Z, then reduce powers of t
        p, e = self.p, self.e
        Ad, Bd = self._digits(A), self._digits(B)
        out = np.zeros((e, A.shape[0], B.shape[1]), dtype=np.int64)
        for m in range(2 * e - 1):
            acc = None
            for j in range(max(0, m - e + 1), min(m, e - 1) + 1):
                term = Ad[j] @ Bd[m - j]
                acc = term if acc is None else acc + term
            acc %= p
            for d in range(e):
                c = self._reduce_t[m, d]
                if c:
                    out[d] += c * acc
        out %= p
        return np.tensordot(self._pows, out, axes=1)

    def lincomb(self, coeffs, mats):
        """Σ c_k M_k for scalars ``c_k`` and equally shaped arrays ``M_k``."""
        out = None
        for c, M in zip(coeffs, mats):
            term = self.mul(c, M)
            out = term if out is None else self.add(out, term)
        return out

    def random(self, rng, size=None):
        return rng.integers(0, self.order, size=size, dtype=np.int64)

    # -- embeddings -----------------------------------------------------------
    def embedding(self, target: "Field") -> np.ndarray:
        """Lookup array sending each element of ``self`` into ``target``.

        Requires ``self.p == target.p`` and ``self.e | target.e``.  The image
        of the generator ``t`` is the smallest root of ``self.modulus`` in
        ``target``, so the embedding is deterministic.
        """
        if target.p != self.p or target.e % self.e:
            raise ValidationError(f"{self} does not embed in {target}")
        if self.e == 1:
            return np.arange(self.p, dtype=np.int64)
        return _embedding_table(self.p, self.e, target.e)


@lru_cache(maxsize=None)
def field_create(p: int, e: int = 1) -> Field:
    """Cached field constructor; identical arguments return the same object."""
    return Field(p, e)


@lru_cache(maxsize=None)
def _embedding_table(p: int, e_src: int, e_dst: int) -> np.ndarray:
    src, dst = field_create(p, e_src), field_create(p, e_dst)
    mod = src.modulus
    root = None
    for r in dst.elements():
        acc = 0
        for c in reversed(mod):
            acc = int(dst.add(dst.mul(acc, r), c))
        if acc == 0:
            root = r
            break
    assert root is not None
    powers = [dst.power(root, k) for k in range(src.e)]
    table = np.zeros(src.order, dtype=np.int64)
    for a in src.elements():
        acc = 0
        for c, pw in zip(src.to_coeffs(a), powers):
            acc = int(dst.add(acc, dst.mul(c, pw)))
        table[a] = acc
    table.setflags(write=False)
    return table
