"""JSON documents for algebras, data, actions and maps.

Every document carries ``format``, ``version``, ``kind`` and ``field``
(``"Q"`` or ``"F<p>"``).  Coefficients are strings such as ``"4"`` or
``"3/7"`` and indices are 0-based.  Algebra brackets list only entries with
``i <= j``.  Documents that depend on an algebra either embed it or give a
path relative to the referencing file.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .algebra import JJAlgebra, verify_jj
from .classify import FlagDatum
from .errors import ConditionFailed, InputError
from .extend import ExtendingDatum
from .galois import GaloisPair, GroupAction
from .linalg import BilinearMap, Field, LinearMap
from .products import CrossedSystem, MatchedPair, SkewCrossedSystem, SupersolvableDatum

FORMAT = "jjext"
VERSION = 1


@dataclass(frozen=True)
class Basis:
    field: Field
    vectors: tuple


@dataclass(frozen=True)
class GaloisPairInput:
    matched_pair: MatchedPair
    pair: GaloisPair


# -- scalars, vectors, maps ------------------------------------------------------


def _coeff(F: Field, value, where: str):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise InputError(f"{where}: coefficient {value!r} must be a string or integer")
    try:
        return F(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{where}: bad coefficient {value!r} ({exc})") from None


def _vector(F: Field, value, n: int, where: str) -> tuple:
    if not isinstance(value, list) or len(value) != n:
        raise InputError(f"{where}: expected a list of {n} coefficients")
    return tuple(_coeff(F, c, f"{where}[{k}]") for k, c in enumerate(value))


def _fmt_vec(F: Field, v) -> list[str]:
    return [str(F(c)) for c in v]


def _matrix(F: Field, value, rows: int | None, cols: int | None, where: str) -> LinearMap:
    if not isinstance(value, list):
        raise InputError(f"{where}: matrix must be a list of rows")
    if rows is not None and len(value) != rows:
        raise InputError(f"{where}: expected {rows} rows, found {len(value)}")
    if cols is None:
        cols = len(value[0]) if value else 0
    return LinearMap(F, len(value), cols, tuple(_vector(F, r, cols, f"{where} row {i}") for i, r in enumerate(value)))


def _fmt_matrix(m: LinearMap) -> list[list[str]]:
    return [_fmt_vec(m.field, r) for r in m.entries]


def _entries(F: Field, value, left: int, right: int, target: int, where: str, upper_only: bool = False) -> BilinearMap:
    if not isinstance(value, list):
        raise InputError(f"{where}: expected a list of entries")
    table: dict = {}
    for k, e in enumerate(value):
        loc = f"{where} entry {k}"
        if not isinstance(e, dict) or set(e) != {"i", "j", "coeffs"}:
            raise InputError(f"{loc}: entries need exactly the keys i, j, coeffs")
        i, j = e["i"], e["j"]
        if not (isinstance(i, int) and isinstance(j, int)) or not (0 <= i < left and 0 <= j < right):
            raise InputError(f"{loc}: index ({i}, {j}) out of range for {left} x {right}")
        if upper_only and i > j:
            raise InputError(f"{loc}: only entries with i <= j are stored")
        if (i, j) in table:
            raise InputError(f"{loc}: duplicate entry ({i}, {j})")
        table[(i, j)] = _vector(F, e["coeffs"], target, f"{loc} coeffs")
    return BilinearMap.from_entries(F, left, right, target, table, symmetric=upper_only)


def _fmt_entries(b: BilinearMap, upper_only: bool = False) -> list[dict]:
    out = []
    for i, row in enumerate(b.tensor):
        for j, v in enumerate(row):
            if upper_only and i > j:
                continue
            if any(v):
                out.append({"i": i, "j": j, "coeffs": _fmt_vec(b.field, v)})
    return out


# -- document plumbing -------------------------------------------------------------


def _header(kind: str, F: Field) -> dict:
    return {"format": FORMAT, "version": VERSION, "kind": kind, "field": str(F)}


def _get(doc: dict, key: str, where: str):
    if key not in doc:
        raise InputError(f"{where}: missing key {key!r}")
    return doc[key]


def _field(doc: dict, where: str) -> Field:
    try:
        return Field.parse(str(_get(doc, "field", where)))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from None


def _int(doc: dict, key: str, where: str) -> int:
    v = _get(doc, key, where)
    if not isinstance(v, int) or isinstance(v, bool) or v < 0:
        raise InputError(f"{where}: {key} must be a non-negative integer")
    return v


class _Loader:
    def __init__(self, base: Path, unchecked: bool):
        self.base = base
        self.unchecked = unchecked

    def algebra_ref(self, ref, where: str) -> JJAlgebra:
        if isinstance(ref, str):
            obj = load(self.base / ref, unchecked=self.unchecked)
            if not isinstance(obj, JJAlgebra):
                raise InputError(f"{where}: {ref} is not an algebra document")
            return obj
        if isinstance(ref, dict):
            obj = self.document(ref, where)
            if not isinstance(obj, JJAlgebra):
                raise InputError(f"{where}: embedded document is not an algebra")
            return obj
        raise InputError(f"{where}: algebra must be a path or an embedded document")

    def document(self, doc: Any, where: str):
        if not isinstance(doc, dict):
            raise InputError(f"{where}: document must be a JSON object")
        if doc.get("format", FORMAT) != FORMAT:
            raise InputError(f"{where}: unknown format {doc.get('format')!r}")
        if doc.get("version", VERSION) != VERSION:
            raise InputError(f"{where}: unsupported version {doc.get('version')!r}")
        kind = _get(doc, "kind", where)
        handler = getattr(self, "kind_" + str(kind).replace("-", "_"), None)
        if handler is None:
            raise InputError(f"{where}: unknown document kind {kind!r}")
        return handler(doc, where)

    def kind_algebra(self, doc, where):
        F = _field(doc, where)
        n = _int(doc, "dim", where)
        labels = doc.get("basis") or ()
        if labels and (not isinstance(labels, list) or len(labels) != n):
            raise InputError(f"{where}: basis must list {n} names")
        bracket = _entries(F, _get(doc, "bracket", where), n, n, n, f"{where} bracket", upper_only=True)
        A = JJAlgebra(bracket, tuple(labels))
        if not self.unchecked:
            rep = verify_jj(A)
            if not rep.ok:
                raise ConditionFailed(f"{where}: not a JJ algebra", rep)
        return A

    def kind_matrix(self, doc, where):
        F = _field(doc, where)
        return _matrix(F, _get(doc, "matrix", where), _int(doc, "rows", where), _int(doc, "cols", where),
                       f"{where} matrix")

    def kind_basis(self, doc, where):
        F = _field(doc, where)
        n = _int(doc, "dim", where)
        vecs = _get(doc, "vectors", where)
        if not isinstance(vecs, list):
            raise InputError(f"{where}: vectors must be a list")
        return Basis(F, tuple(_vector(F, v, n, f"{where} vector {k}") for k, v in enumerate(vecs)))

    def _A(self, doc, where, key="algebra"):
        A = self.algebra_ref(_get(doc, key, where), f"{where} {key}")
        F = _field(doc, where)
        if A.field != F:
            raise InputError(f"{where}: {key} is over {A.field}, document over {F}")
        return A

    def kind_datum(self, doc, where):
        A = self._A(doc, where)
        F, n, m = A.field, A.dim, _int(doc, "vdim", where)
        return ExtendingDatum(
            A, m,
            _entries(F, doc.get("left_act", []), m, n, m, f"{where} left_act"),
            _entries(F, doc.get("right_act", []), m, n, n, f"{where} right_act"),
            _entries(F, doc.get("cocycle", []), m, m, n, f"{where} cocycle"),
            _entries(F, doc.get("brace", []), m, m, m, f"{where} brace"),
        )

    def kind_matched(self, doc, where):
        A, V = self._A(doc, where, "A"), self._A(doc, where, "V")
        F, n, m = A.field, A.dim, V.dim
        return MatchedPair(A, V, _entries(F, doc.get("left_act", []), m, n, m, f"{where} left_act"),
                           _entries(F, doc.get("right_act", []), m, n, n, f"{where} right_act"))

    def kind_crossed(self, doc, where):
        A, V = self._A(doc, where, "A"), self._A(doc, where, "V")
        F, n, m = A.field, A.dim, V.dim
        return CrossedSystem(A, V, _entries(F, doc.get("right_act", []), m, n, n, f"{where} right_act"),
                             _entries(F, doc.get("cocycle", []), m, m, n, f"{where} cocycle"))

    def kind_skew(self, doc, where):
        A = self._A(doc, where)
        F, n, m = A.field, A.dim, _int(doc, "vdim", where)
        return SkewCrossedSystem(A, m, _entries(F, doc.get("left_act", []), m, n, m, f"{where} left_act"),
                                 _entries(F, doc.get("cocycle", []), m, m, n, f"{where} cocycle"),
                                 _entries(F, doc.get("brace", []), m, m, m, f"{where} brace"))

    def kind_supersolvable(self, doc, where):
        A = self._A(doc, where)
        F, n = A.field, A.dim
        return SupersolvableDatum(A, _matrix(F, _get(doc, "D", where), n, n, f"{where} D"),
                                  _vector(F, _get(doc, "a0", where), n, f"{where} a0"))

    def kind_flag(self, doc, where):
        A = self._A(doc, where)
        F, n = A.field, A.dim
        return FlagDatum(A, _matrix(F, _get(doc, "D", where), n, n, f"{where} D"),
                         _vector(F, _get(doc, "lambda", where), n, f"{where} lambda"),
                         _vector(F, _get(doc, "a0", where), n, f"{where} a0"),
                         _coeff(F, _get(doc, "alpha0", where), f"{where} alpha0"))

    def kind_galois_pair(self, doc, where):
        ref = _get(doc, "matched", where)
        mp = load(self.base / ref, unchecked=self.unchecked) if isinstance(ref, str) else self.document(ref, f"{where} matched")
        if not isinstance(mp, MatchedPair):
            raise InputError(f"{where}: matched must be a matched pair document")
        F, n, m = mp.field, mp.A.dim, mp.V.dim
        return GaloisPairInput(mp, GaloisPair(_matrix(F, _get(doc, "sigma", where), m, m, f"{where} sigma"),
                                              _matrix(F, _get(doc, "r", where), n, m, f"{where} r")))

    def kind_action(self, doc, where):
        A = self._A(doc, where)
        F, n = A.field, A.dim
        if "elements" in doc:
            elems = [_matrix(F, g, n, n, f"{where} element {k}") for k, g in enumerate(doc["elements"])]
            index = {g.flat(): k for k, g in enumerate(elems)}
            if len(index) != len(elems):
                raise InputError(f"{where}: repeated group elements")
            table = [[index.get((g @ h).flat(), -1) for h in elems] for g in elems]
            ident = LinearMap.identity(F, n)
            if ident.flat() not in index:
                raise InputError(f"{where}: the identity is not among the elements")
            return GroupAction(A, elems, table, index[ident.flat()])
        gens = [_matrix(F, g, n, n, f"{where} generator {k}") for k, g in enumerate(_get(doc, "generators", where))]
        return GroupAction.generate(A, gens)


# -- public API --------------------------------------------------------------------


def from_document(doc: dict, base: str | Path = ".", unchecked: bool = False):
    return _Loader(Path(base), unchecked).document(doc, "document")


def load(path: str | Path, unchecked: bool = False):
    """Parse a document; raises :class:`InputError` naming the bad entry."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return _Loader(path.parent, unchecked).document(doc, str(path))


def to_document(obj) -> dict:
    """Self-contained document for any supported object (algebras are embedded)."""
    if isinstance(obj, JJAlgebra):
        doc = _header("algebra", obj.field)
        doc.update(dim=obj.dim, basis=list(obj.labels), bracket=_fmt_entries(obj.bracket, upper_only=True))
        if not obj.bracket.symmetric:
            raise ValueError("only symmetric brackets can be stored")
        return doc
    if isinstance(obj, LinearMap):
        doc = _header("matrix", obj.field)
        doc.update(rows=obj.rows, cols=obj.cols, matrix=_fmt_matrix(obj))
        return doc
    if isinstance(obj, Basis):
        doc = _header("basis", obj.field)
        doc.update(dim=len(obj.vectors[0]) if obj.vectors else 0, vectors=[_fmt_vec(obj.field, v) for v in obj.vectors])
        return doc
    if isinstance(obj, ExtendingDatum):
        doc = _header("datum", obj.field)
        doc.update(algebra=to_document(obj.A), vdim=obj.vdim, left_act=_fmt_entries(obj.left_act),
                   right_act=_fmt_entries(obj.right_act), cocycle=_fmt_entries(obj.cocycle),
                   brace=_fmt_entries(obj.brace))
        return doc
    if isinstance(obj, MatchedPair):
        doc = _header("matched", obj.field)
        doc.update(A=to_document(obj.A), V=to_document(obj.V), left_act=_fmt_entries(obj.left_act),
                   right_act=_fmt_entries(obj.right_act))
        return doc
    if isinstance(obj, CrossedSystem):
        doc = _header("crossed", obj.A.field)
        doc.update(A=to_document(obj.A), V=to_document(obj.V), right_act=_fmt_entries(obj.right_act),
                   cocycle=_fmt_entries(obj.cocycle))
        return doc
    if isinstance(obj, SkewCrossedSystem):
        doc = _header("skew", obj.A.field)
        doc.update(algebra=to_document(obj.A), vdim=obj.vdim, left_act=_fmt_entries(obj.left_act),
                   cocycle=_fmt_entries(obj.cocycle), brace=_fmt_entries(obj.brace))
        return doc
    if isinstance(obj, SupersolvableDatum):
        doc = _header("supersolvable", obj.A.field)
        doc.update(algebra=to_document(obj.A), D=_fmt_matrix(obj.D), a0=_fmt_vec(obj.A.field, obj.a0))
        return doc
    if isinstance(obj, FlagDatum):
        F = obj.field
        doc = _header("flag", F)
        doc.update(algebra=to_document(obj.A), D=_fmt_matrix(obj.D), a0=_fmt_vec(F, obj.a0),
                   alpha0=str(obj.alpha0))
        doc["lambda"] = _fmt_vec(F, obj.lam)
        return doc
    if isinstance(obj, GaloisPairInput):
        doc = _header("galois-pair", obj.matched_pair.field)
        doc.update(matched=to_document(obj.matched_pair), sigma=_fmt_matrix(obj.pair.sigma),
                   r=_fmt_matrix(obj.pair.r))
        return doc
    if isinstance(obj, GroupAction):
        doc = _header("action", obj.A.field)
        doc.update(algebra=to_document(obj.A), elements=[_fmt_matrix(g) for g in obj.elements])
        return doc
    raise TypeError(f"no document format for {type(obj).__name__}")


def dumps(obj) -> str:
    doc = obj if isinstance(obj, dict) else to_document(obj)
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def save(obj, path: str | Path) -> None:
    Path(path).write_text(dumps(obj))
