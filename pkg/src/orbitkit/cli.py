"""Command-line interface: ``orbitkit <subcommand> [options]``.

Exit codes: 0 success, 1 verification failure, 2 usage error (argparse),
3 parameters outside an algebra's domain.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
from fractions import Fraction

from . import __version__
from .algebras import PRESETS, DomainError, make
from .induce import PRESET_NAMES, build, induce, induce_one_dimensional, preset_rep
from .pds import ALL_OF_Z, orbit, stabilizer
from .spectrum import (
    Character,
    is_positive,
    labeled,
    norm_products,
    positive_spectrum,
    section,
)
from .verify import (
    bad_polynomial,
    covariance_check,
    positivity_check,
    relation_residual,
    sos_membership,
    well_behaved_check,
)

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2, 3


class CliDomainError(Exception):
    pass


# helpers -------------------------------------------------------------------------


def _clean(obj):
    """Make a result JSON-safe and deterministic."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else str(obj)
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return str(obj)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a rational or decimal number, got {text!r}") from None


def _algebra_params(args) -> dict:
    params = {}
    if args.q is not None:
        params["q"] = args.q
    if args.algebra == "podles" and args.r is not None:
        params["r"] = args.r
    return params


def _make_algebra(args, numeric: bool = True):
    params = _algebra_params(args)
    if numeric:
        if "q" not in params:
            raise CliDomainError("--q is required")
        if args.algebra == "podles" and "r" not in params:
            raise CliDomainError("--r is required for the Podles sphere")
    try:
        return make(args.algebra, **params)
    except DomainError as exc:
        raise CliDomainError(str(exc)) from None


def _warnings(argv_params: dict, raw: list) -> list:
    out = []
    for flag in ("--q", "--r", "--gamma"):
        if flag in raw:
            text = raw[raw.index(flag) + 1]
            if "." in text or "e" in text.lower():
                out.append(f"{flag} {text} was read as the exact rational {Fraction(text)}")
    return out


def _parse_character(alg, text: str) -> Character:
    """Character spec: a family label (e.g. 'fock:0', 'fixed', 'gamma:1/2',
    '0,+', 'inf', '0,2,+') or explicit values 't=...[,s=...]'."""
    text = text.strip()
    try:
        if text.startswith("t=") or ",t=" in text or text.startswith("s="):
            vals = dict(part.split("=", 1) for part in text.split(","))
            return Character(alg, Fraction(vals["t"]), Fraction(vals["s"]) if "s" in vals else None)
        if alg.key == "qosc":
            if text == "fixed":
                return labeled(alg, ("fixed",))
            kind, _, val = text.partition(":")
            if kind == "gamma":
                return labeled(alg, ("gamma", Fraction(val)))
            if kind == "fock":
                return labeled(alg, ("fock", int(val)))
            return labeled(alg, ("fock", int(text)))
        if alg.key == "podles":
            if text in ("inf", "infinity"):
                return labeled(alg, ("inf",))
            m, sign = text.split(",")
            return labeled(alg, (sign.strip(), int(m)))
        m, n, sign = text.split(",")
        return labeled(alg, (int(m), int(n), 1 if sign.strip() in ("+", "+1", "1") else -1))
    except (ValueError, KeyError) as exc:
        raise CliDomainError(f"cannot read character {text!r}: {exc}") from None


def _rep_params(args) -> dict:
    params = {"q": args.q}
    if args.r is not None:
        params["r"] = args.r
    if args.gamma is not None:
        params["gamma"] = args.gamma
    if args.phi is not None:
        params["phi"] = args.phi
    if args.l is not None:
        params["l"] = args.l
    params["omega"] = args.omega
    return params


REP_ALGEBRA = {
    "fock": "qosc",
    "gamma": "qosc",
    "one_dim": "qosc",
    "podles_plus": "podles",
    "podles_minus": "podles",
    "podles_phi": "podles",
    "uq": "uq",
}


def _build_rep(args, golden: bool = False):
    if args.rep is None:
        raise CliDomainError("--rep is required")
    if REP_ALGEBRA[args.rep] != args.algebra:
        raise CliDomainError(f"representation {args.rep} belongs to algebra {REP_ALGEBRA[args.rep]}")
    _make_algebra(args)  # domain validation
    params = _rep_params(args)
    if args.rep == "gamma" and args.gamma is None:
        raise CliDomainError("--gamma is required for the gamma series")
    if args.rep == "uq" and args.l is None:
        raise CliDomainError("--l is required for U_q(su(2)) representations")
    try:
        if golden:
            return preset_rep(args.rep, params, args.truncation)
        return build(args.rep, params, args.truncation)
    except DomainError as exc:
        raise CliDomainError(str(exc)) from None
    except ValueError as exc:
        raise CliDomainError(str(exc)) from None


# subcommands ---------------------------------------------------------------------------


def cmd_list_algebras(args):
    rows = []
    for key, cls in PRESETS.items():
        desc = cls().descriptor()
        rows.append(desc)
    table = [{"key": d["key"], "name": d["name"], "domain": d["domain"],
              "generators": " ".join(g["display"] for g in d["generators"])} for d in rows]
    return {"algebras": rows}, table, True


def cmd_spectrum(args):
    alg = _make_algebra(args)
    desc = positive_spectrum(alg)
    table = []
    for chi in desc.points(args.cutoff):
        products = norm_products(chi, args.depth)
        finite = [float(v) for v in products.values()]
        table.append(
            {
                "point": chi.describe(),
                "t": chi.t,
                "s": chi.s,
                "min_product": min(finite),
                "positive": is_positive(chi, args.depth),
            }
        )
    ok = all(row["positive"] for row in table)
    return {"description": desc.to_json(), "depth": args.depth, "verification": table}, table, ok


def cmd_orbits(args):
    alg = _make_algebra(args)
    sec = section(alg, max_n=args.max_n)
    out = []
    table = []
    for chi in sec:
        orb = orbit(chi, args.max_radius)
        out.append(orb.to_json())
        table.append({"point": chi.describe(), "size": len(orb), "first": orb.labels[0], "last": orb.labels[-1],
                      "truncated": orb.truncated, "stabilizer": orb.stabilizer})
    return {"section": sec.to_json(), "orbits": out}, table, True


def _golden_deviation(rep, gold) -> float:
    worst = 0.0
    for name in gold.matrices:
        d = (rep.matrices[name] - gold.matrices[name]).toarray()
        scale = abs(gold.matrices[name].toarray()) + 1
        if d.size:
            worst = max(worst, float((abs(d) / scale).max()))
    return worst


def cmd_classify(args):
    alg = _make_algebra(args)
    max_n = int(Fraction(args.max_l) * 2)
    sec = section(alg, max_n=max_n)
    T = args.truncation
    entries = []
    for chi in sec:
        stab = stabilizer(chi)
        entry = {"section_point": chi.describe(), "character": chi.to_json(), "stabilizer": stab}
        if stab == ALL_OF_Z:
            if alg.key == "qosc":
                family, params = "one_dim", {"q": alg.qv, "phi": 0.0}
            else:
                family, params = "podles_phi", {"q": alg.qv, "r": alg.rv, "phi": 0.0}
            rep = induce_one_dimensional(chi, 0.0)
            entry.update(family=family, representation="pi_phi", parameter="phi in [0, 2 pi)", dimension=1)
        else:
            rep = induce(chi, T)
            label = chi.label
            if alg.key == "qosc":
                family = "fock" if label[0] == "fock" else "gamma"
                params = {"q": alg.qv} if family == "fock" else {"q": alg.qv, "gamma": label[1]}
                entry.update(family=family, representation="pi_F" if family == "fock" else f"pi_gamma (gamma={label[1]})")
            elif alg.key == "podles":
                family = "podles_plus" if label[0] == "+" else "podles_minus"
                params = {"q": alg.qv, "r": alg.rv}
                entry.update(family=family, representation="pi_+" if label[0] == "+" else "pi_-")
            else:
                n, w = label[1], label[2]
                family = "uq"
                params = {"q": alg.qv, "l": Fraction(n, 2), "omega": w}
                entry.update(family=family, representation=f"pi_{{{'+' if w > 0 else '-'}1,{Fraction(n, 2)}}}",
                             omega=w, l=Fraction(n, 2))
            entry["dimension"] = rep.dim if not (rep.truncated_below or rep.truncated_above) else "infinite"
            entry["window"] = [rep.labels[0], rep.labels[-1]]
        gold = preset_rep(family, params, T)
        entry["golden_max_deviation"] = _golden_deviation(rep, gold)
        entries.append(entry)
    families = list(sec.families)
    for e in entries:
        if e["stabilizer"] == ALL_OF_Z:
            families.append({"name": "phi", "formula": "one-dimensional, degree-one generator -> e^(i phi) * modulus",
                             "parameter": "phi in [0, 2 pi)", "section_point": e["section_point"]})
    table = [{k: e.get(k) for k in ("representation", "family", "section_point", "stabilizer", "dimension", "golden_max_deviation")}
             for e in entries]
    ok = all(e["golden_max_deviation"] <= 1e-12 for e in entries)
    return {"count": len(entries), "representations": entries, "continuous_families": families}, table, ok


def cmd_induce(args):
    if args.rep is not None:
        rep = _build_rep(args, golden=args.golden)
    else:
        alg = _make_algebra(args)
        if args.character is None:
            raise CliDomainError("give --character or --rep")
        chi = _parse_character(alg, args.character)
        try:
            if stabilizer(chi) == ALL_OF_Z:
                rep = induce_one_dimensional(chi, float(args.phi or 0))
            else:
                rep = induce(chi, args.truncation)
        except ValueError as exc:
            raise CliDomainError(str(exc)) from None
    data = rep.to_json()
    table = []
    for gen, triples in data["matrices"].items():
        for row, col, re, im in triples:
            table.append({"generator": gen, "row": row, "col": col, "re": re, "im": im,
                          "formula": _entry_formula(rep.algebra.key, gen)})
    return data, table, True


def _entry_formula(key: str, gen: str) -> str:
    if gen in ("K", "K^-1", "a") and key != "qosc":
        return "chi^g(" + gen + ") on the diagonal"
    return "chi(c) (chi(a_{g+d}* a_{g+d}) / chi(a_g* a_g))^(1/2), x a_g = a_{g+d} c"


def cmd_verify(args):
    rep = _build_rep(args)
    rr = relation_residual(rep, args.tol)
    wb = well_behaved_check(rep)
    cv = covariance_check(rep, tol=args.tol)
    result = {"representation": rep.family, "dimension": rep.dim, "relations": rr.to_json(),
              "well_behaved": wb, "covariance": cv}
    ok = rr.passed and wb["passed"] and cv["passed"]
    if rep.algebra.key in ("qosc", "uq"):
        pc = positivity_check(rep, bad_polynomial(rep.algebra), tol=args.tol)
        result["bad_polynomial_positivity"] = pc
        ok = ok and pc["passed"]
    result["passed"] = ok
    table = [{"check": x["relation"], "residual": x["residual"], "passed": x["passed"]} for x in rr.relations]
    table += [{"check": "adjoint " + x["generator"], "residual": x["residual"], "passed": x["passed"]} for x in rr.adjointness]
    table.append({"check": "well_behaved", "residual": None, "passed": wb["passed"]})
    table.append({"check": "covariance", "residual": cv["shift_relation_residual"], "passed": cv["passed"]})
    if "bad_polynomial_positivity" in result:
        table.append({"check": "bad polynomial >= 0", "residual": result["bad_polynomial_positivity"]["min_eigenvalue"],
                      "passed": result["bad_polynomial_positivity"]["passed"]})
    return result, table, ok


def cmd_sos(args):
    alg = _make_algebra(args)
    try:
        verdict = sos_membership(alg, args.target, args.degree, window=args.window)
    except ValueError as exc:
        raise CliDomainError(str(exc)) from None
    data = verdict.to_json()
    table = [{"kind": "certificate", **c} for c in data["certificate"]]
    table += [{"kind": "witness", "t": w["point"].get("t"), "s": w["point"].get("s"), "reason": w["reason"]}
              for w in data["witnesses"]]
    if not table:
        table = [{"kind": data["status"]}]
    return data, table, True


def cmd_covariance(args):
    rep = _build_rep(args)
    cv = covariance_check(rep, tol=args.tol)
    return {"representation": rep.family, **cv}, [cv], cv["passed"]


COMMANDS = {
    "list-algebras": cmd_list_algebras,
    "spectrum": cmd_spectrum,
    "orbits": cmd_orbits,
    "classify": cmd_classify,
    "induce": cmd_induce,
    "verify": cmd_verify,
    "sos": cmd_sos,
    "covariance": cmd_covariance,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="write output to this file instead of stdout")
    common.add_argument("--tol", type=float, default=1e-10)
    common.add_argument("--truncation", type=int, default=64)

    params = argparse.ArgumentParser(add_help=False)
    params.add_argument("--algebra", choices=sorted(PRESETS), required=True)
    params.add_argument("--q", type=_rational)
    params.add_argument("--r", type=_rational)

    reps = argparse.ArgumentParser(add_help=False)
    reps.add_argument("--rep", choices=PRESET_NAMES)
    reps.add_argument("--gamma", type=_rational)
    reps.add_argument("--phi", type=float)
    reps.add_argument("--l", type=_rational)
    reps.add_argument("--omega", type=int, choices=(1, -1), default=1)

    parser = argparse.ArgumentParser(prog="orbitkit", description="Orbit-method toolkit for Z-graded *-algebras")
    parser.add_argument("--version", action="version", version=f"orbitkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("list-algebras", parents=[common], help="list the preset algebras")
    p = sub.add_parser("spectrum", parents=[common, params], help="positive spectrum and its verification table")
    p.add_argument("--depth", type=int, default=25)
    p.add_argument("--cutoff", type=int, default=10)
    p = sub.add_parser("orbits", parents=[common, params], help="section points and their orbits")
    p.add_argument("--max-radius", type=int, default=40)
    p.add_argument("--max-n", type=int, default=12)
    p = sub.add_parser("classify", parents=[common, params], help="irreducible well-behaved representations")
    p.add_argument("--max-l", type=_rational, default=Fraction(3))
    p = sub.add_parser("induce", parents=[common, params, reps], help="matrices of an induced representation")
    p.add_argument("--character")
    p.add_argument("--golden", action="store_true", help="use the closed-form preset instead of induction")
    sub.add_parser("verify", parents=[common, params, reps], help="relation, well-behavedness and covariance checks")
    p = sub.add_parser("sos", parents=[common, params], help="graded sum-of-squares decision")
    p.add_argument("--target", required=True)
    p.add_argument("--degree", type=int, default=4)
    p.add_argument("--window", type=int, default=2)
    sub.add_parser("covariance", parents=[common, params, reps], help="polar decomposition and shift relation")
    return parser


def _to_csv(table: list) -> str:
    buf = io.StringIO()
    cols = []
    for row in table:
        for k in row:
            if k not in cols:
                cols.append(k)
    writer = csv.DictWriter(buf, fieldnames=cols, lineterminator="\n")
    writer.writeheader()
    for row in table:
        writer.writerow({k: _csv_cell(row.get(k)) for k in cols})
    return buf.getvalue()


def _csv_cell(v):
    v = _clean(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True)
    return "" if v is None else v


def run(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)  # exits with code 2 on usage errors
    if not hasattr(args, "truncation"):
        args.truncation = 64
    try:
        result, table, ok = COMMANDS[args.command](args)
    except (CliDomainError, DomainError) as exc:
        print(f"orbitkit: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    result = _clean(result)
    payload = json.dumps(result, sort_keys=True, separators=(",", ":"))
    manifest = {
        "subcommand": args.command,
        "algebra": getattr(args, "algebra", None),
        "parameters": _clean({k: getattr(args, k) for k in ("q", "r", "gamma", "phi", "l", "omega") if getattr(args, k, None) is not None}),
        "truncation": args.truncation,
        "tol": args.tol,
        "version": __version__,
        "warnings": _warnings({}, argv),
        "output_sha256": hashlib.sha256(payload.encode()).hexdigest(),
    }
    if args.format == "json":
        text = json.dumps({"manifest": manifest, "result": result}, sort_keys=True, indent=2) + "\n"
    else:
        text = _to_csv(table)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_VERIFY


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
