"""Command-line interface.

Exit codes: 0 all checks passed, 1 a verification failed, 2 the input could
not be read, 3 an enumeration exceeded ``--budget``.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from pathlib import Path

from . import io
from .algebra import JJAlgebra, abelian, heisenberg3, is_morphism, nilpotent_plane, verify_jj, zero_algebra
from .classify import (EnumerationStats, FlagDatum, check_flag_datum, classify_h2_codim1,
                       enumerate_flag_data, flag_extension, recursive_classify)
from .errors import BudgetExceeded, ConditionFailed, DimensionMismatch, InputError
from .extend import ExtendingDatum, canonical_datum, check_extending, unified_product
from .galois import (GroupAction, artin_reconstruct, check_galois_pair, enumerate_galois_group,
                     hilbert_kernel_check)
from .linalg import DEFAULT_BUDGET, BilinearMap, Field, LinearMap
from .products import (CrossedSystem, MatchedPair, SkewCrossedSystem, SupersolvableDatum,
                       bicrossed_product, check_crossed_system, check_matched_pair,
                       check_skew_crossed, check_supersolvable_datum, crossed_product,
                       semidirect_product, skew_crossed_product, supersolvable_extension)
from .report import Report

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

STOCK = {
    "heisenberg3": heisenberg3,
    "nilpotent-plane": nilpotent_plane,
    "zero": zero_algebra,
}


class Outcome:
    """What a subcommand produced: a JSON payload, its text rendering and a verdict."""

    def __init__(self, payload: dict, text: str, ok: bool = True):
        self.payload = payload
        self.text = text
        self.ok = ok


# -- input helpers ------------------------------------------------------------------


def _field_arg(text: str | None) -> Field | None:
    if text is None:
        return None
    try:
        return Field.parse(text)
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _retarget(doc, F: Field):
    """Copy of ``doc`` with every embedded ``field`` replaced (for reading Q documents mod p)."""
    if isinstance(doc, dict):
        out = {k: _retarget(v, F) for k, v in doc.items()}
        if "field" in out:
            out["field"] = str(F)
        return out
    if isinstance(doc, list):
        return [_retarget(v, F) for v in doc]
    return doc


def _read_json(path: str) -> dict:
    p = Path(path)
    try:
        return json.loads(p.read_text())
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_input(path: str, args, expect: type | tuple | None = None, unchecked: bool | None = None):
    """Load a document, reducing a rational one when ``--field`` names a prime field."""
    unchecked = args.unchecked if unchecked is None else unchecked
    F = _field_arg(getattr(args, "field", None))
    doc = _read_json(path)
    if F is not None and isinstance(doc, dict) and doc.get("field") != str(F):
        if doc.get("field") not in ("Q", "QQ"):
            raise InputError(f"{path}: document is over {doc.get('field')}, --field asks for {F}")
        doc = _retarget(doc, F)
    obj = io.from_document(doc, Path(path).parent, unchecked)
    if expect is not None and not isinstance(obj, expect):
        raise InputError(f"{path}: expected a {getattr(expect, '__name__', expect)} document, "
                         f"found kind {doc.get('kind')!r}")
    return obj


def load_algebra(spec: str, args, unchecked: bool | None = None) -> JJAlgebra:
    """A path, or a stock name: ``heisenberg3``, ``nilpotent-plane``, ``zero``, ``abelian<n>``."""
    if not Path(spec).exists():
        F = _field_arg(getattr(args, "field", None)) or Field(5)
        if spec in STOCK:
            return STOCK[spec](F)
        if spec.startswith("abelian") and spec[7:].isdigit():
            return abelian(F, int(spec[7:]))
    return load_input(spec, args, JJAlgebra, unchecked)


# -- rendering ----------------------------------------------------------------------


def _fmt_vec(F: Field, v) -> list[str]:
    return [str(F(c)) for c in v]


def _fmt_map(m: LinearMap) -> list[list[str]]:
    return [_fmt_vec(m.field, r) for r in m.entries]


def _flag_entry(fd: FlagDatum) -> dict:
    F = fd.field
    return {"D": _fmt_map(fd.D), "lambda": _fmt_vec(F, fd.lam), "a0": _fmt_vec(F, fd.a0),
            "alpha0": str(fd.alpha0)}


def _flag_text(fd: FlagDatum) -> str:
    F = fd.field
    cols = " ".join("(" + ",".join(_fmt_vec(F, c)) + ")" for c in fd.D.columns())
    return (f"D cols {cols}  lambda ({','.join(_fmt_vec(F, fd.lam))})  "
            f"a0 ({','.join(_fmt_vec(F, fd.a0))})  alpha0 {fd.alpha0}")


def _algebra_text(A: JJAlgebra) -> str:
    F = A.field
    parts = []
    for i in range(A.dim):
        for j in range(i, A.dim):
            v = A.bracket.tensor[i][j]
            if any(v):
                terms = " + ".join(f"{'' if c == 1 else str(F(c)) + '*'}{A.labels[k]}"
                                   for k, c in enumerate(v) if c)
                parts.append(f"[{A.labels[i]},{A.labels[j]}] = {terms}")
    return f"JJ algebra over {F}, dim {A.dim}: " + ("; ".join(parts) if parts else "abelian")


def _report_outcome(rep: Report, extra: dict | None = None, header: str = "") -> Outcome:
    payload = {"report": rep.to_dict()}
    if extra:
        payload.update(extra)
    text = (header + "\n" if header else "") + rep.text()
    return Outcome(payload, text, rep.ok)


def _save(obj, path: str | None) -> list[str]:
    if path:
        io.save(obj, path)
        return [f"wrote {path}"]
    return []


# -- subcommands ----------------------------------------------------------------------


def cmd_verify(args) -> Outcome:
    A = load_algebra(args.algebra, args, unchecked=True)
    rep = verify_jj(A)
    return _report_outcome(rep, {"algebra": io.to_document(A)}, _algebra_text(A))


def _product(args):
    kind = args.kind
    if kind == "unified":
        d = load_input(args.input, args, ExtendingDatum)
        rep = check_extending(d)
        if not rep.ok:
            raise ConditionFailed("extending datum fails its conditions", rep)
        return unified_product(d)
    if kind == "bicrossed":
        return bicrossed_product(load_input(args.input, args, MatchedPair))
    if kind == "semidirect":
        mp = load_input(args.input, args, MatchedPair)
        if not mp.left_act.is_zero():
            raise InputError(f"{args.input}: a semidirect product needs left_act = 0")
        return semidirect_product(mp.V, mp.A, mp.right_act)
    if kind == "crossed":
        return crossed_product(load_input(args.input, args, CrossedSystem))
    if kind == "skew":
        return skew_crossed_product(load_input(args.input, args, SkewCrossedSystem))
    if kind == "supersolvable":
        s = load_input(args.input, args, SupersolvableDatum)
        return supersolvable_extension(s.A, s.D, s.a0)
    fd = load_input(args.input, args, FlagDatum)
    rep = check_flag_datum(fd)
    if not rep.ok and not args.printed_variant:
        raise ConditionFailed("flag datum fails its conditions", rep)
    return flag_extension(fd, printed_variant=args.printed_variant)


def cmd_product(args) -> Outcome:
    E = _product(args)
    rep = verify_jj(E)
    notes = _save(E, args.save)
    out = _report_outcome(rep, {"algebra": io.to_document(E)}, _algebra_text(E))
    out.text += "".join("\n" + n for n in notes)
    return out


def cmd_check(args) -> Outcome:
    kind = args.kind
    if kind == "datum":
        rep = check_extending(load_input(args.input, args, ExtendingDatum))
    elif kind == "matched":
        rep = check_matched_pair(load_input(args.input, args, MatchedPair))
    elif kind == "crossed":
        rep = check_crossed_system(load_input(args.input, args, CrossedSystem))
    elif kind == "skew":
        rep = check_skew_crossed(load_input(args.input, args, SkewCrossedSystem))
    elif kind == "supersolvable":
        s = load_input(args.input, args, SupersolvableDatum)
        rep = check_supersolvable_datum(s.A, s.D, s.a0)
    elif kind == "flag":
        rep = check_flag_datum(load_input(args.input, args, FlagDatum))
    else:
        g = load_input(args.input, args, io.GaloisPairInput)
        rep = check_galois_pair(g.matched_pair, g.pair)
    return _report_outcome(rep)


def cmd_canonical(args) -> Outcome:
    E = load_algebra(args.algebra, args)
    basis = load_input(args.a_basis, args, io.Basis)
    p = load_input(args.projection, args, LinearMap) if args.projection else None
    vb = load_input(args.v_basis, args, io.Basis).vectors if args.v_basis else None
    cd = canonical_datum(E, basis.vectors, p, vb)
    rep = check_extending(cd.datum)
    phi_rep = is_morphism(unified_product(cd.datum), E, cd.phi)
    phi_rep.conditions["invertible"] = [] if cd.phi.is_invertible() else [("phi",)]
    rep.extend(phi_rep, prefix="phi_")
    notes = _save(cd.datum, args.save)
    out = _report_outcome(rep, {"datum": io.to_document(cd.datum), "phi": _fmt_map(cd.phi)},
                          "phi (a, x) -> a + x, columns: " +
                          " ".join("(" + ",".join(_fmt_vec(E.field, c)) + ")" for c in cd.phi.columns()))
    out.text += "".join("\n" + n for n in notes)
    return out


def cmd_enumerate(args) -> Outcome:
    A = load_algebra(args.algebra, args)
    stats = EnumerationStats()
    data = enumerate_flag_data(A, args.budget, stats)
    lines = [f"{len(data)} flag data over {A.field}"] + [f"  [{i}] {_flag_text(d)}" for i, d in enumerate(data)]
    return Outcome({"count": len(data), "data": [_flag_entry(d) for d in data], "stats": stats.as_dict()},
                   "\n".join(lines))


def cmd_classify_h2(args) -> Outcome:
    A = load_algebra(args.algebra, args)
    res = classify_h2_codim1(A, args.budget, certify=not args.no_certificates)
    reps = []
    for k, fd in enumerate(res.representatives):
        entry = _flag_entry(fd)
        entry["orbit_size"] = res.orbit_sizes[k]
        reps.append(entry)
    payload = {
        "field": str(res.field), "count": res.count, "classes": res.classes,
        "orbit_sizes": res.orbit_sizes, "representatives": reps,
        "certificates": [dict(c, pair=list(c["pair"])) for c in res.certificates],
        "problems": [list(p) for p in res.problems], "stats": res.stats,
    }
    lines = [f"{res.count} flag data, {res.classes} classes over {res.field}",
             f"orbit sizes: {res.orbit_sizes}"]
    lines += [f"  class {k} (size {res.orbit_sizes[k]}): {_flag_text(fd)}"
              for k, fd in enumerate(res.representatives)]
    if res.certificates:
        lines.append(f"{len(res.certificates)} inequivalence certificates from exhausted witness searches")
    lines += [f"problem: {p}" for p in res.problems]
    if args.figure:
        from .plotting import orbit_sizes_figure

        orbit_sizes_figure(res.orbit_sizes, args.figure, f"orbit sizes over {res.field}")
        payload["figure"] = args.figure
        lines.append(f"figure written to {args.figure}")
    ok = not res.problems and sum(res.orbit_sizes) == res.count
    return Outcome(payload, "\n".join(lines), ok)


def cmd_classify_all(args) -> Outcome:
    F = _field_arg(args.field)
    if F is None:
        raise InputError("classify all needs --field")
    res = recursive_classify(F, args.dim, args.budget, args.jobs)
    by_dim = {str(d): [io.to_document(A) for A in algs] for d, algs in res.by_dim.items()}
    certs = {str(d): [dict(c, pair=list(c["pair"])) for c in cs] for d, cs in res.certificates.items()}
    verdicts = Report("emitted algebras")
    verdicts.conditions["jj"] = [(d, i) for d, algs in res.by_dim.items()
                                 for i, A in enumerate(algs) if not verify_jj(A).ok]
    verdicts.conditions["certified_distinct"] = [(d, tuple(c["pair"])) for d, cs in res.certificates.items()
                                                 for c in cs if c["search"] != "exhausted"]
    payload = {"field": str(F), "dim": args.dim, "banner": res.banner, "complete": res.complete,
               "counts": {str(d): len(a) for d, a in res.by_dim.items()}, "algebras": by_dim,
               "certificates": certs, "report": verdicts.to_dict()}
    lines = [res.banner]
    for d, algs in sorted(res.by_dim.items()):
        lines.append(f"dim {d}: {len(algs)} classes")
        lines += [f"  {_algebra_text(A)}" for A in algs]
    lines.append(verdicts.text())
    if args.figure:
        from .plotting import classes_by_dim_figure

        classes_by_dim_figure({d: len(a) for d, a in res.by_dim.items()}, args.figure,
                              f"JJ algebras over {F} by dimension")
        payload["figure"] = args.figure
        lines.append(f"figure written to {args.figure}")
    return Outcome(payload, "\n".join(lines), verdicts.ok)


def cmd_galois(args) -> Outcome:
    mp = load_input(args.matched, args, MatchedPair)
    G = enumerate_galois_group(mp, args.budget)
    F = mp.field
    payload = {"order": G.order, "identity": G.identity,
               "elements": [{"sigma": _fmt_map(p.sigma), "r": _fmt_map(p.r)} for p in G.elements],
               "table": G.table, "report": G.validation.to_dict()}
    lines = [f"Galois group over {F}: order {G.order}, identity index {G.identity}", G.validation.text()]
    if args.list:
        lines += [f"  [{i}] sigma {_fmt_map(p.sigma)} r {_fmt_map(p.r)}" for i, p in enumerate(G.elements)]
    return Outcome(payload, "\n".join(lines), G.validation.ok)


def cmd_artin(args) -> Outcome:
    A = load_algebra(args.algebra, args)
    doc = _read_json(args.action)
    if isinstance(doc, dict) and "algebra" not in doc:
        doc = dict(doc, algebra=io.to_document(A))
    action = io.from_document(doc, Path(args.action).parent, args.unchecked)
    if not isinstance(action, GroupAction):
        raise InputError(f"{args.action}: expected an action document")
    if action.A != A:
        raise InputError(f"{args.action}: the action is on a different algebra")
    res = artin_reconstruct(action)
    rep = Report("Artin reconstruction").extend(res.checks)
    if action.generator() is not None:
        rep.extend(hilbert_kernel_check(action), prefix="hilbert_")
    else:
        rep.notes.append("group is not cyclic; kernel description skipped")
    F = A.field
    td = res.trace
    payload = {"order": action.order, "invariant_basis": [_fmt_vec(F, v) for v in td.invariant_basis],
               "trace": _fmt_map(td.trace), "kernel_basis": [_fmt_vec(F, v) for v in td.kernel_basis],
               "skew": io.to_document(res.system), "theta": _fmt_map(res.theta)}
    head = [f"group of order {action.order}",
            f"invariants: {payload['invariant_basis']}",
            f"trace matrix: {payload['trace']}",
            f"ker t basis: {payload['kernel_basis']}",
            f"cocycle entries: {({k: _fmt_vec(F, v) for k, v in res.system.cocycle.entries().items()})}",
            f"left action zero: {res.system.left_act.is_zero()}, brace zero: {res.system.brace.is_zero()}"]
    return _report_outcome(rep, payload, "\n".join(head))


def cmd_selftest(args) -> Outcome:
    """A few fast end-to-end checks plus a sampled equivalence test seeded by ``--seed``."""
    from .linalg import GF

    rng = random.Random(args.seed)
    rep = Report("selftest")
    F = GF(5)
    rep.conditions["heisenberg_jj"] = [] if verify_jj(heisenberg3(F)).ok else [("heisenberg3",)]
    n1 = len(enumerate_flag_data(abelian(F, 1)))
    rep.conditions["abelian_line_data"] = [] if n1 == 5 else [(n1,)]
    order = enumerate_galois_group(MatchedPair.trivial(abelian(F, 2), abelian(F, 1))).order
    rep.conditions["galois_order"] = [] if order == 100 else [(order,)]
    bad = []
    t0 = time.perf_counter()
    for k in range(args.samples):
        Fp = GF(rng.choice((2, 5)))
        A = rng.choice([abelian(Fp, 1), abelian(Fp, 2), nilpotent_plane(Fp)])
        n, m = A.dim, rng.choice((1, 2))

        def rand(l, r, t):
            return BilinearMap.from_function(Fp, l, r, t, lambda i, j: tuple(rng.randrange(Fp.modulus) if rng.random() < 0.3 else 0
                                                                           for _ in range(t)))
        brace = rand(m, m, m)
        brace = BilinearMap.from_function(Fp, m, m, m, lambda i, j: brace.tensor[min(i, j)][max(i, j)])
        cocycle = rand(m, m, n)
        cocycle = BilinearMap.from_function(Fp, m, m, n, lambda i, j: cocycle.tensor[min(i, j)][max(i, j)])
        d = ExtendingDatum(A, m, rand(m, n, m), rand(m, n, n), cocycle, brace)
        if check_extending(d, exhaustive=False).ok != verify_jj(unified_product(d), exhaustive=False).ok:
            bad.append((k,))
    rep.conditions["extending_biconditional"] = bad
    rep.notes.append(f"{args.samples} sampled data with seed {args.seed} in {time.perf_counter() - t0:.2f}s")
    return _report_outcome(rep)


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("text", "json"), default=argparse.SUPPRESS,
                        help="report format (default text)")
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS,
                        help=f"largest enumeration allowed (default {DEFAULT_BUDGET})")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="seed for sampled modes")
    common.add_argument("--unchecked", action="store_true", default=argparse.SUPPRESS,
                        help="skip the JJ check when loading algebras")
    common.add_argument("--field", default=argparse.SUPPRESS,
                        help="Q or F<p>; stock algebras use it, rational documents are reduced to it")

    parser = argparse.ArgumentParser(prog="jjext", parents=[common],
                                     description="Construct, check and classify extensions of Jacobi-Jordan algebras.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check the JJ axioms")
    p.add_argument("algebra")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("product", parents=[common], help="build a product algebra")
    p.add_argument("kind", choices=("unified", "bicrossed", "crossed", "skew", "semidirect", "flag", "supersolvable"))
    p.add_argument("input")
    p.add_argument("--save", metavar="PATH", help="write the algebra document here")
    p.add_argument("--printed-variant", action="store_true",
                   help="flag only: add a0 to every [e_i, x] (comparison form)")
    p.set_defaults(func=cmd_product)

    p = sub.add_parser("check", parents=[common], help="condition-by-condition report")
    p.add_argument("kind", choices=("datum", "matched", "crossed", "skew", "supersolvable", "flag", "galois-pair"))
    p.add_argument("input")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("canonical-datum", parents=[common], help="datum of a subalgebra through a retraction")
    p.add_argument("algebra")
    p.add_argument("a_basis", metavar="A-basis")
    p.add_argument("--projection", metavar="MAP", help="matrix document for p: E -> A")
    p.add_argument("--v-basis", metavar="BASIS", help="basis document for ker p")
    p.add_argument("--save", metavar="PATH", help="write the datum document here")
    p.set_defaults(func=cmd_canonical)

    p = sub.add_parser("enumerate", parents=[common], help="list flag data")
    esub = p.add_subparsers(dest="what", required=True)
    q = esub.add_parser("flag", parents=[common])
    q.add_argument("algebra")
    q.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("classify", parents=[common], help="orbit enumeration")
    csub = p.add_subparsers(dest="what", required=True)
    q = csub.add_parser("h2", parents=[common], help="codimension-one classes over an algebra")
    q.add_argument("algebra")
    q.add_argument("--figure", metavar="PATH", help="write an orbit-size bar chart")
    q.add_argument("--no-certificates", action="store_true", help="skip pairwise witness searches")
    q.set_defaults(func=cmd_classify_h2)
    q = csub.add_parser("all", parents=[common], help="recursive classification up to --dim")
    q.add_argument("--dim", type=int, required=True)
    q.add_argument("--figure", metavar="PATH", help="write a classes-per-dimension bar chart")
    q.set_defaults(func=cmd_classify_all)

    p = sub.add_parser("galois", parents=[common], help="Galois group of a bicrossed product")
    p.add_argument("matched")
    p.add_argument("--list", action="store_true", help="print every element in text mode")
    p.set_defaults(func=cmd_galois)

    p = sub.add_parser("artin", parents=[common], help="reconstruct an algebra from its invariants")
    p.add_argument("algebra")
    p.add_argument("action")
    p.set_defaults(func=cmd_artin)

    p = sub.add_parser("selftest", parents=[common], help="fast end-to-end checks")
    p.add_argument("--samples", type=int, default=200)
    p.set_defaults(func=cmd_selftest)
    return parser


_DEFAULTS = {"output": "text", "budget": None, "jobs": 1, "seed": 0, "unchecked": False, "field": None}


def _emit(payload: dict, text: str, fmt: str, stream) -> None:
    if fmt == "json":
        stream.write(json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n")
    else:
        stream.write(text + "\n")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in _DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    fmt = args.output
    try:
        out = args.func(args)
    except BudgetExceeded as exc:
        _emit({"error": "budget", "stage": exc.stage, "required": exc.required, "budget": exc.budget},
              f"budget exceeded: {exc}", fmt, sys.stderr)
        return EXIT_BUDGET
    except ConditionFailed as exc:
        rep = exc.report
        payload = {"error": "verification", "message": str(exc), "report": rep.to_dict() if rep else None}
        _emit(payload, f"{exc}" + ("\n" + rep.text() if rep else ""), fmt, sys.stdout)
        return EXIT_FAIL
    except (InputError, DimensionMismatch, ValueError, ZeroDivisionError) as exc:
        _emit({"error": "input", "message": str(exc)}, f"input error: {exc}", fmt, sys.stderr)
        return EXIT_INPUT
    _emit(out.payload, out.text, fmt, sys.stdout)
    return EXIT_OK if out.ok else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
