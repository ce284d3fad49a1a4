"""Problem files: JSON in, validated algebra/modules/polys/points out.

Schema::

    {
      "p": 2, "e": 1, "l": 2, "q": 1, "a": [[0, 0], [0, 0]],
      "modules": {"V": {"dim": 2, "X": [[[0,0],[0,0]], [[0,0],[1,0]]]},
                  "K": {"kind": "trivial"}},
      "polys":   {"f": [[[1, 0], 1], [[1, 1], 1]]},
      "points":  [[1, 0], [0, 1]]
    }

Field elements are ints (prime field) or coefficient lists, low degree first.
Besides explicit ``dim``/``X`` a module may be given by ``kind``: ``trivial``,
``free`` (with ``rank``) or ``ideal_quotient`` (with ``words``, 1-based
generator indices, and optional ``rank``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import qci, tate
from .errors import ParseError, ValidationError
from .fields import field_create
from .qci import ModuleRep, QciAlgebra

_TOP_KEYS = {"p", "e", "l", "q", "a", "modules", "polys", "points"}


@dataclass
class Problem:
    algebra: QciAlgebra
    modules: dict = dc_field(default_factory=dict)
    polys: dict = dc_field(default_factory=dict)
    points: list = dc_field(default_factory=list)

    def module(self, name: str) -> ModuleRep:
        try:
            return self.modules[name]
        except KeyError:
            raise ValidationError(f"unknown module {name!r}; have {sorted(self.modules)}") from None

    def poly(self, name: str) -> tate.HypersurfacePoly:
        try:
            return self.polys[name]
        except KeyError:
            raise ValidationError(f"unknown poly {name!r}; have {sorted(self.polys)}") from None


def _require(obj: dict, key: str, where: str):
    if key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise ParseError(f"{where}: expected an integer, got {x!r}")
    return x


def _element(F, x, where: str):
    if isinstance(x, list):
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in x):
            raise ParseError(f"{where}: coefficient list must hold integers")
        if len(x) > F.e:
            raise ParseError(f"{where}: {len(x)} coefficients for {F}")
        return F.from_coeffs(x)
    return F.element(_int(x, where))


def _matrix(F, rows, dim: int, where: str):
    if not isinstance(rows, list) or len(rows) != dim:
        raise ParseError(f"{where}: expected {dim} rows")
    out = []
    for r, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"{where}[{r}]: expected {dim} entries")
        out.append([_element(F, x, f"{where}[{r}]") for x in row])
    return out


def _rank_of(entry, where: str) -> int:
    r = _int(entry.get("rank", 1), f"{where}.rank")
    if r < 1:
        raise ParseError(f"{where}.rank: must be positive")
    return r


def parse_module(alg: QciAlgebra, entry, name: str) -> ModuleRep:
    where = f"modules.{name}"
    if not isinstance(entry, dict):
        raise ParseError(f"{where}: expected an object")
    kind = entry.get("kind")
    if kind == "trivial":
        return qci.trivial_module(alg)
    if kind == "free":
        return qci.free_module(alg, _rank_of(entry, where))
    if kind == "ideal_quotient":
        words = _require(entry, "words", where)
        ok = isinstance(words, list) and all(
            isinstance(w, list) and all(isinstance(i, int) and 1 <= i <= alg.n for i in w) for w in words
        )
        if not ok:
            raise ParseError(f"{where}.words: expected lists of generator indices 1..{alg.n}")
        return qci.ideal_quotient(alg, words, _rank_of(entry, where))
    if kind is not None:
        raise ParseError(f"{where}: unknown kind {kind!r}")
    dim = _int(_require(entry, "dim", where), f"{where}.dim")
    if dim < 1:
        raise ParseError(f"{where}.dim: must be positive")
    X = _require(entry, "X", where)
    if not isinstance(X, list):
        raise ParseError(f"{where}.X: expected a list of matrices")
    mats = [_matrix(alg.field, Xi, dim, f"{where}.X[{i}]") for i, Xi in enumerate(X)]
    return qci.module_validate(alg, dim, mats)


def _with_context(exc: ValidationError, where: str) -> ValidationError:
    if getattr(exc, "where", None) is None:
        exc.where = where
    return exc


def parse_problem(data) -> Problem:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    unknown = set(data) - _TOP_KEYS
    if unknown:
        raise ParseError(f"unknown fields {sorted(unknown)}")
    p = _int(_require(data, "p", "problem"), "p")
    e = _int(data.get("e", 1), "e")
    l = _int(_require(data, "l", "problem"), "l")
    F = field_create(p, e)
    q = _element(F, _require(data, "q", "problem"), "q")
    a = _require(data, "a", "problem")
    if not isinstance(a, list) or not all(isinstance(r, list) for r in a):
        raise ParseError("a: expected a square integer matrix")
    a = [[_int(x, "a") for x in row] for row in a]
    alg = qci.algebra_create(F, len(a), l, q, a)

    modules = {}
    mods = data.get("modules", {})
    if not isinstance(mods, dict):
        raise ParseError("modules: expected an object")
    for name, entry in mods.items():
        try:
            modules[name] = parse_module(alg, entry, name)
        except ValidationError as exc:
            raise _with_context(exc, f"modules.{name}")

    polys = {}
    raw_polys = data.get("polys", {})
    if not isinstance(raw_polys, dict):
        raise ParseError("polys: expected an object")
    for name, terms in raw_polys.items():
        if not isinstance(terms, list) or not all(isinstance(t, list) and len(t) == 2 for t in terms):
            raise ParseError(f"polys.{name}: expected [[exponents, coeff], ...]")
        parsed = [(t[0], _element(F, t[1], f"polys.{name}")) for t in terms]
        for alpha, _ in parsed:
            if not isinstance(alpha, list):
                raise ParseError(f"polys.{name}: exponent vector must be a list")
        try:
            polys[name] = tate.hypersurface_poly(F, alg.n, parsed)
        except ValidationError as exc:
            raise _with_context(exc, f"polys.{name}")

    points = [parse_point(alg, P) for P in data.get("points", [])]
    return Problem(alg, modules, polys, points)


def parse_point(alg: QciAlgebra, coords, e: int | None = None) -> tate.ProjPoint:
    """Point from a list or a ``"c1,c2,..."`` string; ``e`` defaults to the smallest fitting field."""
    if isinstance(coords, str):
        try:
            coords = [json.loads(c) for c in _split_coords(coords)]
        except json.JSONDecodeError as exc:
            raise ParseError(f"point {coords!r}: {exc.msg}") from None
    if not isinstance(coords, list) or len(coords) != alg.n:
        raise ParseError(f"point must have {alg.n} coordinates")
    if e is None:
        width = max([len(c) for c in coords if isinstance(c, list)] + [1])
        e = alg.field.e
        while e < width:
            e += alg.field.e
    K = tate.support_field(alg, e)
    return tate.make_point(K, [_element(K, c, "point") for c in coords])


def _split_coords(text: str) -> list[str]:
    """Split on commas outside brackets, so ``"[0,1],1"`` gives two coordinates."""
    parts, depth, cur = [], 0, ""
    for ch in text:
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
            continue
        depth += (ch == "[") - (ch == "]")
        cur += ch
    parts.append(cur)
    return [s.strip() for s in parts]


def load_problem(path) -> Problem:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}: {exc.msg}") from None
    return parse_problem(data)
