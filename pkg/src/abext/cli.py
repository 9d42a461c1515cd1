"""Command-line surface: every capability behind a scriptable verb.

Output is a single JSON document on stdout; algebraic values are decimal
strings so arbitrary precision survives the wire.  Exit codes: 0 success,
1 domain error (structured {"error": {code, message, position?}}), 2 usage
error.  `--seed` fixes any sampling, `--budget` bounds oracle searches
(default from ABEXT_BUDGET), `--pretty` toggles indentation; output is
byte-for-byte deterministic for identical argv otherwise.

Group arguments accept either an expression ("Z(4)+Z(6)", "Z^2+Z(12)" —
composite orders CRT-split, free parts for the homological verbs only) or
the JSON object emitted by the group-producing verbs.  Arguments starting
with '@' are read from the named file.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .errors import DomainError, ParseError
from .intlin import DimensionMismatch, IntMatrix, snf
from .abgroup import AbMap, FinGenAb, canonicalize
from .homext import (
    ExtClass,
    ShortExactSeq,
    classify as classify_seq,
    connecting_hom,
    connecting_hom_dual,
    ext_group,
    hom_group,
    pullback_action,
    pushout_action,
    realize,
)
from .torsioncat import (
    DEFAULT_WITNESS_BUDGET,
    ab4star_failure_witness,
    classify as classify_torsion,
    counterexample_witness,
    is_cotorsion,
    parse as parse_torsion,
    parse_finite_group,
)
from .universal import (
    build_universal_coextension,
    build_universal_extension,
    cyclic_generation_check,
    phi,
    psi,
)
from . import acceptance


def _read_arg(value: str) -> str:
    if value.startswith("@"):
        with open(value[1:], "r", encoding="utf-8") as fh:
            return fh.read()
    return value


def _load_json(value: str):
    try:
        return json.loads(_read_arg(value))
    except json.JSONDecodeError as e:
        raise DomainError(f"malformed JSON input: {e}") from e


def _group(value: str) -> FinGenAb:
    text = _read_arg(value)
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return FinGenAb.from_json(json.loads(text))
    return parse_finite_group(text)


def _matrix(value: str) -> IntMatrix:
    return IntMatrix.from_json(_load_json(value))


def _emit(obj, pretty: bool) -> None:
    if pretty:
        sys.stdout.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    else:
        sys.stdout.write(json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n")


def _cmd_snf(args):
    dec = snf(_matrix(args.matrix))
    return {"U": dec.U.to_json(), "D": dec.D.to_json(), "V": dec.V.to_json()}


def _cmd_canon(args):
    pres = _matrix(args.presentation)
    group, proj, lift = canonicalize(pres)
    return {
        "group": group.to_json(),
        "to_canonical": proj.to_json(),
        "from_canonical": lift.to_json(),
    }


def _cmd_hom(args):
    H = hom_group(_group(args.A), _group(args.B))
    return {"group": H.carrier.to_json()}


def _cmd_ext(args):
    X = ext_group(_group(args.A), _group(args.B))
    return {"group": X.group.to_json()}


def _cmd_realize(args):
    cls = ExtClass.from_json(_load_json(args.cls))
    return {"sequence": realize(cls).to_json()}


def _cmd_classify(args):
    seq = ShortExactSeq.from_json(_load_json(args.sequence))
    return {"class": classify_seq(seq).to_json()}


def _cmd_baer(args):
    c1 = ExtClass.from_json(_load_json(args.c1))
    c2 = ExtClass.from_json(_load_json(args.c2))
    out = c1 - c2 if args.subtract else c1 + c2
    return {"class": out.to_json()}


def _cmd_act(args):
    cls = ExtClass.from_json(_load_json(args.cls))
    h = AbMap.from_json(_load_json(args.map))
    if args.side == "pull":
        out = pullback_action(cls, h)
    else:
        out = pushout_action(cls, h)
    return {"class": out.to_json()}


def _cmd_delta(args):
    seq = ShortExactSeq.from_json(_load_json(args.sequence))
    T = _group(args.T)
    d = connecting_hom_dual(seq, T) if args.dual else connecting_hom(seq, T)
    return {"map": d.to_json()}


def _cmd_psi(args):
    summands = [_group(s) for s in args.summands.split(";") if s.strip()]
    B = _group(args.B)
    pm = phi(summands, B) if args.phi else psi(summands, B)
    return {
        "domain": pm.domain.group.to_json(),
        "codomain": pm.codomain.total.to_json(),
        "matrix": pm.matrix.to_json(),
        "injective": pm.injective,
        "bijective": pm.bijective,
    }


def _cmd_univ_ext(args):
    cert = build_universal_extension(_group(args.B), _group(args.A))
    return cert.to_json(include_sequence=args.full)


def _cmd_univ_coext(args):
    cert = build_universal_coextension(_group(args.B), _group(args.A))
    return cert.to_json(include_sequence=args.full)


def _cmd_cyclic_check(args):
    cert = build_universal_extension(_group(args.B), _group(args.A))
    res = cyclic_generation_check(cert, samples=args.samples, seed=args.seed)
    return {
        "passed": res.passed,
        "detail": res.detail,
        "witnesses": [
            {"class": cls.to_json(), "gamma": gamma.to_json()} for cls, gamma in res.witnesses
        ],
    }


def _cmd_parse(args):
    expr = parse_torsion(_read_arg(args.expression))
    terms = []
    for atom, mult in expr.terms:
        entry = {"atom": type(atom).__name__}
        if hasattr(atom, "p"):
            entry["p"] = str(atom.p)
        if hasattr(atom, "k"):
            entry["k"] = str(atom.k)
        entry["multiplicity"] = "inf" if mult is None else str(mult)
        terms.append(entry)
    return {"expression": str(expr), "terms": terms}


def _cmd_classify_torsion(args):
    expr = parse_torsion(_read_arg(args.expression))
    primes = [int(p) for p in args.p.split(",")] if args.p else []
    return classify_torsion(expr, primes=primes).to_json()


def _cmd_cotorsion(args):
    res = is_cotorsion(parse_torsion(_read_arg(args.expression)))
    return {
        "cotorsion": res.cotorsion,
        "bound": str(res.bound) if res.bound is not None else None,
        "divisible": str(res.divisible_part),
        "bounded": str(res.bounded_part),
    }


def _cmd_witness(args):
    w = counterexample_witness(args.p, args.N, budget=args.budget, mode=args.mode)
    return {"order": str(w.order), "method": w.method}


def _cmd_ab4_witness(args):
    w = ab4star_failure_witness(args.p, args.N, budget=args.budget, mode=args.mode)
    return {"order": str(w.order), "method": w.method}


def _cmd_suite(args):
    only = [int(x) for x in args.only.split(",")] if args.only else None
    return acceptance.run_all(seed=args.seed, budget=args.budget, only=only)


def _build_parser() -> argparse.ArgumentParser:
    default_budget = int(os.environ.get("ABEXT_BUDGET", DEFAULT_WITNESS_BUDGET))
    top = argparse.ArgumentParser(prog="abext", description="exact toolkit for abelian group extensions")
    sub = top.add_subparsers(dest="verb", required=True)

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text)
        p.set_defaults(fn=fn)
        p.add_argument("--pretty", action="store_true", help="indent the JSON output")
        p.add_argument("--seed", type=int, default=0, help="seed for any sampling")
        p.add_argument("--budget", type=int, default=default_budget, help="search budget")
        return p

    p = add("snf", _cmd_snf, "Smith normal form of an integer matrix")
    p.add_argument("--matrix", required=True, help="JSON matrix (decimal strings) or @file")

    p = add("canon", _cmd_canon, "canonical form of a presented group")
    p.add_argument("--presentation", required=True, help="JSON relation matrix (rows = relations)")

    p = add("hom", _cmd_hom, "Hom(A, B) as a group")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)

    p = add("ext", _cmd_ext, "Ext^1(A, B) as a group")
    p.add_argument("--A", required=True)
    p.add_argument("--B", required=True)

    p = add("realize", _cmd_realize, "realize an Ext class as a short exact sequence")
    p.add_argument("--class", dest="cls", required=True)

    p = add("classify", _cmd_classify, "normal-form class of a short exact sequence")
    p.add_argument("--sequence", required=True)

    p = add("baer", _cmd_baer, "Baer sum (or difference) of two classes")
    p.add_argument("--c1", required=True)
    p.add_argument("--c2", required=True)
    p.add_argument("--subtract", action="store_true")

    p = add("act", _cmd_act, "pullback/pushout action of a map on a class")
    p.add_argument("--class", dest="cls", required=True)
    p.add_argument("--map", required=True)
    p.add_argument("--side", choices=["pull", "push"], required=True)

    p = add("delta", _cmd_delta, "connecting morphism of a sequence at a test object")
    p.add_argument("--sequence", required=True)
    p.add_argument("--T", required=True)
    p.add_argument("--dual", action="store_true", help="Hom(sub,T) → Ext^1(quot,T) instead")

    p = add("psi", _cmd_psi, "Psi (or Phi) comparison map for a finite family")
    p.add_argument("--summands", required=True, help="semicolon-separated group expressions")
    p.add_argument("--B", required=True)
    p.add_argument("--phi", action="store_true", help="compute Phi instead of Psi")

    p = add("univ-ext", _cmd_univ_ext, "canonical universal extension certificate")
    p.add_argument("--B", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--full", action="store_true", help="include the sequence and class")

    p = add("univ-coext", _cmd_univ_coext, "canonical universal co-extension certificate")
    p.add_argument("--B", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--full", action="store_true")

    p = add("cyclic-check", _cmd_cyclic_check, "cyclic generation of Ext over End(B^(X))")
    p.add_argument("--B", required=True)
    p.add_argument("--A", required=True)
    p.add_argument("--samples", type=int, default=5)

    p = add("parse", _cmd_parse, "parse a torsion group expression")
    p.add_argument("expression")

    p = add("classify-torsion", _cmd_classify_torsion, "co-Ext^1-universality classification")
    p.add_argument("expression")
    p.add_argument("--p", default="", help="extra primes for T_p verdicts, comma-separated")

    p = add("cotorsion", _cmd_cotorsion, "Baer–Fomin cotorsion test with witness")
    p.add_argument("expression")

    p = add("witness", _cmd_witness, "divisibility-defect witness order")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "brute", "fast"], default="auto")

    p = add("ab4-witness", _cmd_ab4_witness, "Ab4* failure witness order")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--mode", choices=["auto", "brute", "fast"], default="auto")

    p = add("suite", _cmd_suite, "run the acceptance criteria, emit a scorecard")
    p.add_argument("--only", default="", help="comma-separated criterion ids")

    return top


def main(argv: Optional[list] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code in (0, None) else 2
    try:
        result = args.fn(args)
    except ParseError as e:
        _emit({"error": {"code": e.code, "message": str(e), "position": e.position}}, args.pretty)
        return 1
    except (DomainError, DimensionMismatch) as e:
        code = getattr(e, "code", "domain-error")
        _emit({"error": {"code": code, "message": str(e)}}, args.pretty)
        return 1
    _emit(result, args.pretty)
    return 0


if __name__ == "__main__":
    sys.exit(main())
