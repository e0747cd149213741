"""Command-line front end.

    balsq check   FILE | --inline 'x[1,2]*x[2,2]*x[3,2]' --m 2,2,2 --closure shifted
    balsq complex FILE [--flag]
    balsq decompose FILE [--search]
    balsq shelling FILE
    balsq sr | gin | shift FILE
    balsq betti FILE [--target sr,gin] [--method koszul|...|all] [--grading fine|zd|z] [--field q|gf:p]
    balsq verify [--property NAME ...] [--mutant drop-sr-generator]

Exit codes: 0 success, 1 a property failed, 2 bad input or an unmet
precondition, 3 a resource cap was hit.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

from . import betti as B
from .complex import (
    SimplicialComplex,
    balanced_squeezed_complex,
    f_vector,
    flag_f_vector,
    flag_h_vector,
    h_vector,
    is_vertex_decomposable,
    shelling_order,
    squeezed_decomposition,
    tree_to_json,
    verify_decomposition,
    verify_shelling,
    Leaf,
)
from .errors import BalsqError, ParseError, PreconditionError, ResourceLimitError
from .ideals import (
    MonomialIdeal,
    color_shifted_complex,
    gin_formula,
    is_color_squarefree_stable_across_colors,
    sr_ideal_formula,
    stanley_reisner_ideal,
)
from .orderideal import (
    OrderIdeal,
    complement_ideal,
    d_max,
    d_max_ideal,
    from_monomials,
    is_shifted,
    is_shifted_across_colors,
    smallest_shifted_closure,
    violations,
)
from .ring import Monomial, RingSignature, Variable
from .verify import BATTERIES, VerifyOptions, cs_part, run_batteries

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_RESOURCE = 0, 1, 2, 3
CLOSURES = ("shifted", "divisibility", "none")
METHODS = ("koszul", "hochster", "stable", "cone-polarized", "cone-squares")
TARGETS = ("sr", "gin", "shift", "ideal", "input")


# -- input ----------------------------------------------------------------------


@dataclass
class Job:
    """What was read from the input: a signature and either an order
    ideal's seed monomials or the generators of an ideal."""

    signature: RingSignature
    monomials: list[Monomial]
    closure: str = "shifted"
    is_ideal: bool = False

    def order_ideal(self) -> OrderIdeal:
        if self.is_ideal:
            raise PreconditionError("this command needs an order ideal, but the input lists ideal generators")
        if self.closure == "shifted":
            return smallest_shifted_closure(self.signature, self.monomials)
        if self.closure == "divisibility":
            return from_monomials(self.signature, self.monomials)
        problems = violations(self.signature, self.monomials)
        if problems:
            raise PreconditionError("not an order ideal: " + "; ".join(problems))
        return OrderIdeal(self.signature, frozenset(self.monomials))

    def ideal(self) -> MonomialIdeal:
        return MonomialIdeal(self.signature, self.monomials)


def _monomial_from_pairs(pairs, where: str) -> Monomial:
    if not isinstance(pairs, list):
        raise ParseError(f"{where}: expected a list of [color, index] pairs, got {pairs!r}")
    out = []
    for k, pair in enumerate(pairs):
        if not (isinstance(pair, list) and len(pair) == 2 and all(isinstance(x, int) and x >= 1 for x in pair)):
            raise ParseError(f"{where}[{k}]: expected [color, index] with positive integers, got {pair!r}")
        out.append((Variable(*pair), 1))
    return Monomial(out)


def _parse_m(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise ParseError(f"--m expects comma-separated integers, got {text!r}") from None


def load_job(path: str | None, inline: str | None, m: str | None, closure: str | None, ideal: bool) -> Job:
    if inline is not None:
        monos = [Monomial.parse(t) for t in _split_inline(inline)]
        if m is not None:
            mm = _parse_m(m)
        else:
            colors = max((v.color for u in monos for v in u.variables()), default=1)
            mm = tuple(
                max((v.index for u in monos for v in u.variables() if v.color == c), default=0)
                for c in range(1, colors + 1)
            )
        sig = RingSignature(len(mm), mm)
        return _checked(Job(sig, monos, closure or "shifted", ideal))
    if path is None:
        raise ParseError("give an input file or --inline")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ParseError(f"{path}: top level must be an object")
    for key in ("d", "m"):
        if key not in data:
            raise ParseError(f"{path}: missing field {key!r}")
    if not isinstance(data["d"], int) or not isinstance(data["m"], list):
        raise ParseError(f"{path}: 'd' must be an integer and 'm' a list")
    try:
        sig = RingSignature(data["d"], tuple(data["m"]))
    except (TypeError, ValueError) as exc:
        raise ParseError(f"{path}: field 'm': {exc}") from None
    key = "generators" if "generators" in data else "monomials"
    raw = data.get(key, [])
    if not isinstance(raw, list):
        raise ParseError(f"{path}: field {key!r} must be a list")
    monos = [_monomial_from_pairs(p, f"{path}: {key}[{k}]") for k, p in enumerate(raw)]
    chosen = closure or data.get("closure", "shifted")
    if chosen not in CLOSURES:
        raise ParseError(f"{path}: field 'closure' must be one of {', '.join(CLOSURES)}, got {chosen!r}")
    return _checked(Job(sig, monos, chosen, ideal or key == "generators"))


def _split_inline(text: str) -> list[str]:
    parts = [p.strip() for p in text.replace(";", ",").split(",")]
    # commas also separate the indices inside x[i,j]; glue those back
    out, buf = [], ""
    for p in parts:
        buf = f"{buf},{p}" if buf else p
        if buf.count("[") == buf.count("]"):
            if buf:
                out.append(buf)
            buf = ""
    if buf:
        raise ParseError(f"unbalanced brackets in {text!r}")
    return out


def _checked(job: Job) -> Job:
    for u in job.monomials:
        if not job.signature.contains(u):
            raise ParseError(f"{u} has a variable outside {job.signature}")
    return job


# -- rendering --------------------------------------------------------------------


def _emit(args, payload: dict, text: str) -> None:
    if args.format == "json":
        sys.stdout.write(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _yes(flag: bool) -> str:
    return "yes" if flag else "no"


def _gens(I: MonomialIdeal) -> list[str]:
    return [str(g) for g in I.sorted_generators()]


def _vertex_list(delta: SimplicialComplex) -> list[list[int]]:
    return [[v.color, v.index] for v in delta.ring.variables]


def _facet_indices(delta: SimplicialComplex, mask: int) -> list[int]:
    return [k for k in range(delta.ring.nvars) if mask >> k & 1]


def _facet_text(delta: SimplicialComplex, mask: int) -> str:
    return "{" + ", ".join(map(str, delta.vertices_of_mask(mask))) + "}"


def _ordered_facets(U: OrderIdeal, delta: SimplicialComplex) -> list[int]:
    return [s.facet for s in shelling_order(U)]


# -- commands -----------------------------------------------------------------------


def cmd_check(args) -> int:
    job = load_job(args.input, args.inline, args.m, args.closure, False)
    if job.closure == "none":
        problems = violations(job.signature, job.monomials)
        if problems:
            payload = {"signature": str(job.signature), "valid": False, "violations": problems}
            _emit(args, payload, "valid: no\n" + "".join(f"  {p}\n" for p in problems))
            return EXIT_FAIL
    U = job.order_ideal()
    I = complement_ideal(U)
    low, high = 2, d_max(U) + 1
    bounds = low <= d_max_ideal(I) <= high
    payload = {
        "signature": str(U.signature),
        "valid": True,
        "size": len(U),
        "monomials": [str(u) for u in U],
        "shifted": is_shifted(U),
        "shifted_across_colors": is_shifted_across_colors(U),
        "d_max_U": d_max(U),
        "d_max_I": d_max_ideal(I),
        "bounds_hold": bounds,
    }
    text = (
        f"signature: {U.signature}\n"
        f"valid: yes\n"
        f"size: {len(U)}\n"
        f"U: {U}\n"
        f"shifted: {_yes(payload['shifted'])}\n"
        f"shifted across colors: {_yes(payload['shifted_across_colors'])}\n"
        f"d_max(U) = {d_max(U)}\n"
        f"d_max(I(U)) = {d_max_ideal(I)}\n"
        f"2 <= d_max(I(U)) <= d_max(U)+1: {'holds' if bounds else 'FAILS'}\n"
    )
    _emit(args, payload, text)
    return EXIT_OK if bounds else EXIT_FAIL


def cmd_complex(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    delta = balanced_squeezed_complex(U)
    facets = _ordered_facets(U, delta)
    f, h = f_vector(delta), h_vector(delta)
    payload = {
        "vertices": _vertex_list(delta),
        "facets": [_facet_indices(delta, F) for F in facets],
        "f_vector": f,
        "h_vector": h,
    }
    lines = [f"facets ({len(facets)}):"] + [f"  {_facet_text(delta, F)}" for F in facets]
    lines += [f"f-vector: {tuple(f)}", f"h-vector: {tuple(h)}"]
    if args.flag:
        ff, fh = flag_f_vector(delta), flag_h_vector(delta)
        payload["flag_f"], payload["flag_h"] = ff.as_json(), fh.as_json()
        lines.append("flag vectors (S: f_S h_S):")
        for key, val in fh.as_json().items():
            lines.append(f"  {{{key}}}: {ff.as_json()[key]} {val}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def _tree_text(tree, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if isinstance(tree, Leaf):
        return [f"{pad}simplex"]
    return (
        [f"{pad}shed {tree.vertex}", f"{pad}link:"]
        + _tree_text(tree.link, depth + 1)
        + [f"{pad}deletion:"]
        + _tree_text(tree.deletion, depth + 1)
    )


def cmd_decompose(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    delta = balanced_squeezed_complex(U)
    tree = is_vertex_decomposable(delta, max_memo=args.max_memo) if args.search else squeezed_decomposition(U)
    if tree is None:
        _emit(args, {"vertex_decomposable": False}, "not vertex decomposable")
        return EXIT_FAIL
    ok = verify_decomposition(delta, tree)
    payload = {"vertex_decomposable": True, "verified": ok, "tree": tree_to_json(tree)}
    _emit(args, payload, "\n".join(_tree_text(tree) + [f"verified: {_yes(ok)}"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_shelling(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    delta = balanced_squeezed_complex(U)
    steps = shelling_order(U)
    ok, inferred = verify_shelling(delta, [s.facet for s in steps])
    payload = {
        "vertices": _vertex_list(delta),
        "order": [
            {
                "monomial": str(s.monomial),
                "facet": _facet_indices(delta, s.facet),
                "restriction": _facet_indices(delta, s.restriction),
            }
            for s in steps
        ],
        "shelling": ok,
        "restrictions_match": ok and inferred == [s.restriction for s in steps],
    }
    lines = [
        f"{k + 1:>3}. {_facet_text(delta, s.facet)}  restriction {_facet_text(delta, s.restriction)}  ({s.monomial})"
        for k, s in enumerate(steps)
    ]
    lines.append(f"shelling: {_yes(ok)}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if ok else EXIT_FAIL


def _ideal_output(args, name: str, I: MonomialIdeal, extra: dict | None = None, extra_text: str = "") -> int:
    payload = {"ring": str(I.ring), "generators": _gens(I), "count": len(I)}
    payload.update(extra or {})
    text = f"{name} in {I.ring}, {len(I)} generators:\n" + "".join(f"  {g}\n" for g in _gens(I)) + extra_text
    _emit(args, payload, text)
    return EXIT_OK


def cmd_sr(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    I = sr_ideal_formula(U)
    oracle = stanley_reisner_ideal(balanced_squeezed_complex(U))
    agree = I == oracle
    code = _ideal_output(
        args, "Stanley-Reisner ideal", I, {"matches_minimal_nonfaces": agree},
        f"matches minimal non-faces: {_yes(agree)}\n",
    )
    return code if agree else EXIT_FAIL


def cmd_gin(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    G = gin_formula(U)
    sqfree = sum(1 for g in G.generators if g.is_squarefree())
    return _ideal_output(
        args, "gin", G, {"squarefree": sqfree, "squares": len(G) - sqfree},
        f"squarefree: {sqfree}, other: {len(G) - sqfree}\n",
    )


def cmd_shift(args) -> int:
    U = load_job(args.input, args.inline, args.m, args.closure, False).order_ideal()
    delta = color_shifted_complex(U)
    I = stanley_reisner_ideal(delta)
    facets = sorted(delta.facets)
    return _ideal_output(
        args, "color-shifted complex, Stanley-Reisner ideal", I,
        {"vertices": _vertex_list(delta), "facets": [_facet_indices(delta, F) for F in facets]},
        f"facets ({len(facets)}):\n" + "".join(f"  {_facet_text(delta, F)}\n" for F in facets),
    )


def _target_ideal(job: Job, target: str) -> tuple[MonomialIdeal, MonomialIdeal | None]:
    """The ideal for ``target`` and, where a mapping cone applies, its J."""
    if target == "input":
        return job.ideal(), None
    U = job.order_ideal()
    if target == "sr":
        return sr_ideal_formula(U), cs_part(complement_ideal(U))
    if target == "gin":
        return gin_formula(U), cs_part(complement_ideal(U))
    if target == "ideal":
        return complement_ideal(U), cs_part(complement_ideal(U))
    if target == "shift":
        return stanley_reisner_ideal(color_shifted_complex(U)), None
    raise ParseError(f"unknown target {target!r}")


def _betti_by(method: str, target: str, I: MonomialIdeal, J, field, cap: int) -> B.BettiTable:
    if method == "koszul":
        return B.koszul_betti(I, field, max_degrees=cap)
    if method == "hochster":
        if not I.is_squarefree():
            raise PreconditionError("hochster needs a squarefree ideal")
        return B.hochster_betti(I, field)
    if method == "stable":
        if not is_color_squarefree_stable_across_colors(I):
            raise PreconditionError("stable needs a color-squarefree stable across colors ideal")
        return B.stable_betti_formula(I)
    if method == "cone-polarized":
        if J is None or target != "sr" or B.polarized_target(J) != I:
            raise PreconditionError("cone-polarized needs J + sum m_i^[2] + sum x[i,m_i+1] m_i (target sr)")
        return B.mapping_cone_betti_polarized(J, field)
    if method == "cone-squares":
        if J is None or target not in ("ideal", "gin"):
            raise PreconditionError("cone-squares needs J + sum m_i^2 (target ideal or gin)")
        table = B.mapping_cone_betti_squares(J, field)
        return table.embed(I.ring) if I.ring != table.ring else table
    raise ParseError(f"unknown method {method!r}")


def cmd_betti(args) -> int:
    job = load_job(args.input, args.inline, args.m, args.closure, args.ideal)
    field = B.FieldConfig.parse(args.field)
    targets = args.target.split(",") if args.target else (["input"] if job.is_ideal else ["sr"])
    for t in targets:
        if t not in TARGETS:
            raise ParseError(f"unknown target {t!r}; choose from {', '.join(TARGETS)}")
    methods = list(METHODS) if args.method == "all" else [args.method]
    tables = []
    skipped = []
    for t in targets:
        I, J = _target_ideal(job, t)
        for method in methods:
            try:
                table = _betti_by(method, t, I, J, field, args.max_degrees)
            except PreconditionError as exc:
                if args.method == "all":
                    skipped.append(f"{t}/{method}: {exc}")
                    continue
                raise
            tables.append((t, method, table.coarsen(args.grading)))
    payload = {
        "grading": args.grading,
        "field": str(field),
        "tables": [
            {"target": t, "method": m, **tab.to_json(ideal_convention=args.ideal_convention)}
            for t, m, tab in tables
        ],
    }
    lines = []
    for t, m, tab in tables:
        lines.append(f"[{t} / {m}, {args.grading} grading]")
        lines.append(tab.render(ideal_convention=args.ideal_convention))
        if args.grading != "z" and args.entries:
            for k, a, v in tab.sorted_entries():
                lines.append(f"  beta[{k}, {list(a)}] = {v}")
    code = EXIT_OK
    if len(tables) > 1:
        diffs = []
        ref_t, ref_m, ref = tables[0]
        for t, m, tab in tables[1:]:
            try:
                d = B.compare(ref, tab, args.grading)
            except PreconditionError as exc:
                diffs.append(f"{ref_t}/{ref_m} vs {t}/{m}: {exc}")
                continue
            if d:
                diffs.append(f"{ref_t}/{ref_m} vs {t}/{m}: {len(d)} differences, first {d[0]}")
        payload["agree"] = not diffs
        payload["differences"] = diffs
        lines.append("all methods agree" if not diffs else "methods disagree:")
        lines.extend(f"  {d}" for d in diffs)
        code = EXIT_OK if not diffs else EXIT_FAIL
    if skipped:
        payload["skipped"] = skipped
        lines.append("skipped:")
        lines.extend(f"  {s}" for s in skipped)
    _emit(args, payload, "\n".join(lines))
    return code


def cmd_verify(args) -> int:
    props = None
    if args.property:
        props = [p for chunk in args.property for p in chunk.split(",") if p]
        unknown = [p for p in props if p not in BATTERIES]
        if unknown:
            raise ParseError(f"unknown property {unknown[0]!r}; choose from {', '.join(BATTERIES)}")
    options = VerifyOptions(
        properties=props,
        max_items=args.max_items,
        per_signature=args.per_signature,
        seed=args.seed,
        mutant=args.mutant,
        threads=args.threads,
    )
    results = run_batteries(options)
    payload = {"results": [r.to_json() for r in results], "passed": all(r.passed for r in results)}
    lines = []
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status} {r.name:<15} {r.checked:>4} checked  {BATTERIES[r.name].description}")
        if r.counterexample:
            lines.append(f"     counterexample: {r.counterexample}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK if payload["passed"] else EXIT_FAIL


# -- argument parsing ---------------------------------------------------------------


def _input_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="JSON input file")
    p.add_argument("--inline", help="comma-separated monomials, e.g. 'x[1,2]*x[2,2]'")
    p.add_argument("--m", help="color class sizes for --inline, e.g. 2,2,2")
    p.add_argument("--closure", choices=CLOSURES, help="how to close the monomials into an order ideal")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="balsq", description="Balanced squeezed complexes and their Betti numbers.")
    parser.add_argument("--format", choices=("text", "json"), default="text")
    parser.add_argument("--seed", type=int, default=0)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        # accept global options after the subcommand too
        p.add_argument("--format", choices=("text", "json"), default=argparse.SUPPRESS)
        p.add_argument("--seed", type=int, default=argparse.SUPPRESS)
        return p

    p = add("check", cmd_check, "validate an order ideal and report its shiftedness")
    _input_args(p)
    p = add("complex", cmd_complex, "facets and f/h-vectors of the balanced squeezed complex")
    _input_args(p)
    p.add_argument("--flag", action="store_true", help="also print flag f- and h-vectors")
    p = add("decompose", cmd_decompose, "vertex decomposition")
    _input_args(p)
    p.add_argument("--search", action="store_true", help="general backtracking search instead of the constructive one")
    p.add_argument("--max-memo", type=int, default=1 << 20)
    p = add("shelling", cmd_shelling, "shelling order and restriction faces")
    _input_args(p)
    for name, func, text in (
        ("sr", cmd_sr, "Stanley-Reisner ideal"),
        ("gin", cmd_gin, "generic initial ideal (closed form, shifted input)"),
        ("shift", cmd_shift, "color-shifted complex"),
    ):
        _input_args(add(name, func, text))
    p = add("betti", cmd_betti, "Betti tables")
    _input_args(p)
    p.add_argument("--ideal", action="store_true", help="read the monomials as ideal generators")
    p.add_argument("--target", help=f"comma-separated, from {', '.join(TARGETS)}")
    p.add_argument("--method", choices=METHODS + ("all",), default="koszul")
    p.add_argument("--grading", choices=B.GRADINGS, default="z")
    p.add_argument("--field", default="q", help="q or gf:<prime>")
    p.add_argument("--ideal-convention", action="store_true", help="index Betti numbers of I instead of P/I")
    p.add_argument("--entries", action="store_true", help="list every entry for fine and Z^d gradings")
    p.add_argument("--max-degrees", type=int, default=2_000_000, help="cap on multidegrees scanned")
    p = add("verify", cmd_verify, "run the property batteries")
    p.add_argument("--property", action="append", help=f"battery name(s): {', '.join(BATTERIES)}")
    p.add_argument("--max-items", type=int, default=200)
    p.add_argument("--per-signature", type=int, default=24)
    p.add_argument("--mutant", choices=("drop-sr-generator",))
    p.add_argument("--threads", type=int, help="worker processes (default: BALSQ_THREADS or 1)")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ResourceLimitError as exc:
        print(f"balsq: resource cap: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (BalsqError, ValueError, KeyError) as exc:
        print(f"balsq: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
