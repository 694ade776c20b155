"""Command-line entry point.

One executable with five subcommand groups (field, hecke, measure,
kloosterman, equidist), machine-readable output (JSON by default, CSV
for tabular results), and fixed exit codes: 0 success, 1 domain error
with a single-line JSON object on stderr, 2 usage error.

Global flags come before the group name:

    heckedist --field "Q(sqrt 5)" kloosterman eval --c 2,0 --r 1,0 --rp 1,0
    heckedist hecke verify-relation --p 2 --k 1 --m 1
    heckedist measure phi --p 2:0 --spoly 1
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from . import fields
from . import hecke
from . import measures
from . import kloosterman as kl
from . import equidist

DOMAIN_ERRORS = (fields.FieldError, hecke.HeckeError, measures.MeasureError,
                 kl.KloostermanError, equidist.EquidistError, ValueError,
                 OSError, KeyError)


# -- parsing helpers ---------------------------------------------------------------


def _parse_rat(s: str) -> Fraction:
    return Fraction(s.strip())


def parse_element(field: fields.NumberField, s: str) -> fields.FieldElement:
    """Element syntax: 'a' or 'a,b' with rational coordinates in the 1, w basis."""
    parts = [p for p in s.split(",") if p.strip() != ""]
    if len(parts) == 1:
        return field.element(_parse_rat(parts[0]))
    if len(parts) == 2 and field.degree == 2:
        return field.element(_parse_rat(parts[0]), _parse_rat(parts[1]))
    raise ValueError("bad element %r for degree-%d field" % (s, field.degree))


def parse_interval(s: str) -> Tuple[float, float]:
    sep = ":" if ":" in s else ","
    parts = s.split(sep)
    if len(parts) != 2:
        raise ValueError("interval must look like a:b, got %r" % s)
    return (float(parts[0]), float(parts[1]))


def parse_box(spec: str) -> measures.Box:
    """JSON box spec: {"dim":2,"q":[1],"e":{"2":[0.3,1.2]},"xi":[0,0],"t":4.0}."""
    if spec.startswith("@"):
        with open(spec[1:]) as fh:
            spec = fh.read()
    raw = json.loads(spec)
    e_windows = tuple(sorted(
        (int(j), (float(w[0]), float(w[1]))) for j, w in raw.get("e", {}).items()))
    return measures.Box(int(raw["dim"]), tuple(int(j) for j in raw.get("q", ())),
                        e_windows, tuple(int(x) for x in raw["xi"]),
                        float(raw.get("t", 0.0)))


def _level_ideal(field: fields.NumberField, level: Optional[str]) -> fields.Ideal:
    if level is None or level.strip() in ("1", ""):
        return fields.Ideal.unit_ideal(field)
    return fields.Ideal.principal(parse_element(field, level))


def load_character(field: fields.NumberField, modulus: fields.Ideal,
                   path: Optional[str]) -> kl.DirichletCharacter:
    """Character file: JSON list of [unit representative, order, exponent]."""
    if path is None:
        return kl.DirichletCharacter.trivial(field, modulus)
    with open(path) as fh:
        entries = json.load(fh)
    ring = fields.ResidueRing(modulus)
    phases = {}
    for rep, order, exponent in entries:
        x = ring.reduce(parse_element(field, str(rep)))
        phases[x.coords()] = Fraction(int(exponent), int(order))
    return kl.DirichletCharacter(field, modulus, phases)


def _frac_repr(q: Fraction):
    return int(q) if q.denominator == 1 else "%d/%d" % (q.numerator, q.denominator)


def _elt_str(e: fields.FieldElement) -> str:
    """Comma-coordinate form accepted back by parse_element."""
    return ",".join(str(x) for x in e.coords())


def _complex_repr(z: complex) -> Dict:
    return {"re": z.real, "im": z.imag, "abs": abs(z)}


def _emit(args, payload: Dict, rows: Optional[Tuple[List[str], List[list]]] = None) -> None:
    """JSON payload to stdout/--out; CSV rows instead when --format csv."""
    if args.format == "csv":
        if rows is None:
            raise ValueError("this subcommand has no CSV form; use --format json")
        header, data = rows
        out = sys.stdout if args.out is None else open(args.out, "w", newline="")
        try:
            w = csv.writer(out)
            w.writerow(header)
            w.writerows(data)
        finally:
            if args.out is not None:
                out.close()
        return
    text = json.dumps(payload, indent=2, sort_keys=False)
    if args.out is None:
        print(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")


# -- field group -------------------------------------------------------------------


def cmd_field_info(args) -> int:
    field = fields.make_field(args.field)
    payload = {"spec": args.field, "degree": field.degree, "disc": field.disc}
    if field.degree == 2:
        payload.update({"m": field.m, "t": field.t, "c": field.c,
                        "omega_embeddings": list(field.omega().embed())})
        ug = field.unit_group()
        payload["fundamental_unit"] = [str(x) for x in ug.fundamental.coords()]
        payload["fundamental_unit_norm"] = ug.fundamental_norm
        payload["regulator"] = ug.regulator
    _emit(args, payload)
    return 0


def cmd_field_factor(args) -> int:
    field = fields.make_field(args.field)
    primes = fields.factor_rational_prime(field, args.p)
    data = [{"label": pr.label, "p": pr.p, "e": pr.e, "f": pr.f,
             "norm": pr.absolute_norm(),
             "generator": None if pr.generator is None else str(pr.generator)}
            for pr in primes]
    _emit(args, {"p": args.p, "primes": data},
          rows=(["label", "p", "e", "f", "norm"],
                [[d["label"], d["p"], d["e"], d["f"], d["norm"]] for d in data]))
    return 0


def cmd_field_unit(args) -> int:
    field = fields.make_field(args.field)
    if field.degree == 1:
        _emit(args, {"fundamental_unit": None, "regulator": 0.0})
        return 0
    ug = field.unit_group()
    _emit(args, {"fundamental_unit": [str(x) for x in ug.fundamental.coords()],
                 "norm": ug.fundamental_norm, "regulator": ug.regulator,
                 "embeddings": list(ug.fundamental.embed())})
    return 0


# -- hecke group -------------------------------------------------------------------


def _prime_norm(field: fields.NumberField, label: str) -> int:
    if ":" in label:
        return fields.prime_by_label(field, label).absolute_norm()
    p = int(label)
    if field.degree == 1:
        return p
    return fields.prime_by_label(field, "%d:0" % p).absolute_norm()


def cmd_hecke_verify(args) -> int:
    field = fields.make_field(args.field)
    label = args.p if ":" in args.p else "%s:0" % args.p
    norm = _prime_norm(field, args.p)
    brute_p = None
    if field.degree == 1 and not args.no_brute:
        brute_p = int(args.p.split(":")[0])
    coeffs = hecke.verify_relation(label, norm, args.k, args.m, brute_p=brute_p)
    payload = {key: int(val) for key, val in
               sorted(coeffs.items(), key=lambda kv: -int(kv[0][1:]))}
    _emit(args, payload)
    return 0


def cmd_hecke_spoly(args) -> int:
    field = fields.make_field(args.field)
    norm = _prime_norm(field, args.p)
    coeffs = hecke.s_poly(norm, 2 * args.k)
    _emit(args, {"p": args.p, "norm": norm, "two_k": 2 * args.k,
                 "coeffs": [_frac_repr(c) for c in coeffs],
                 "basis": "lambda^{2m}, m = 0..k"})
    return 0


def cmd_hecke_eigenvalue(args) -> int:
    field = fields.make_field(args.field)
    norm = _prime_norm(field, args.p)
    if args.nu is not None:
        nu = complex(args.nu.replace("i", "j"))
        lam = hecke.lambda_from_nu(norm, nu)
        payload = {"norm": norm, "nu": _complex_repr(nu), "lam": lam}
    else:
        lam = float(args.lam)
        nu = hecke.nu_from_lambda(norm, lam)
        payload = {"norm": norm, "lam": lam, "nu": _complex_repr(complex(nu))}
    _emit(args, payload)
    return 0


# -- measure group -----------------------------------------------------------------


def cmd_measure_eval(args) -> int:
    a_raw, b_raw = args.interval.split(":") if ":" in args.interval \
        else args.interval.split(",")
    if args.kind.startswith("npl"):
        mu = measures.nu_measure(args.kind)
        lo = complex(a_raw.replace("i", "j"))
        hi = complex(b_raw.replace("i", "j"))
        mv = mu.interval(lo, hi)
        payload = {"kind": args.kind, "interval": [str(lo), str(hi)],
                   "value": mv.value, "error": mv.error}
    else:
        mu = measures.spectral_measure(args.kind)
        interval = (float(a_raw), float(b_raw))
        mv = measures.measure_interval(mu, interval)
        payload = {"kind": args.kind, "interval": list(interval),
                   "value": mv.value, "error": mv.error}
    _emit(args, payload)
    return 0


def cmd_measure_phi(args) -> int:
    field = fields.make_field(args.field)
    norm = _prime_norm(field, args.p)
    mu = measures.SatoTateMeasure(norm)
    if args.spoly is not None:
        val = mu.polynomial(hecke.s_poly(norm, 2 * args.spoly))
        payload = {"p": args.p, "norm": norm, "spoly_k": args.spoly,
                   "value": float(val), "exact": _frac_repr(val)}
    elif args.interval is not None:
        a, b = parse_interval(args.interval)
        mv = mu.mass(a, b)
        payload = {"p": args.p, "norm": norm, "interval": [a, b],
                   "value": mv.value, "error": mv.error}
    else:
        raise ValueError("need --interval or --spoly")
    _emit(args, payload)
    return 0


def cmd_measure_box(args) -> int:
    box = parse_box(args.spec)
    mv = measures.box_measure(box, args.family)
    per = []
    for j in range(1, box.dim + 1):
        xi = box.xi[j - 1]
        mu = measures.pl_measure(xi) if args.family == "pl" else measures.v1_measure(xi)
        per.append(measures.measure_interval(mu, box.interval(j)).value)
    _emit(args, {"family": args.family, "t": box.t, "value": mv.value,
                 "error": mv.error, "per_coordinate": per})
    return 0


# -- kloosterman group ---------------------------------------------------------------


def cmd_kl_eval(args) -> int:
    field = fields.make_field(args.field)
    c = parse_element(field, args.c)
    r = parse_element(field, args.r)
    rp = parse_element(field, args.rp)
    modulus = fields.Ideal.principal(c) if args.level is None \
        else _level_ideal(field, args.level)
    chi = load_character(field, modulus, args.chi)
    q = kl.KloostermanQuery(c, r, rp, chi)
    value = kl.evaluate(q)
    _emit(args, {"c": _elt_str(c), "r": _elt_str(r), "rp": _elt_str(rp),
                 "norm_c": int(abs(c.norm())), "value": _complex_repr(value),
                 "symmetry_deviation": kl.symmetry_check(q)})
    return 0


def cmd_kl_scan(args) -> int:
    field = fields.make_field(args.field)
    level = _level_ideal(field, args.level)
    chi = load_character(field, level, args.chi)
    r = parse_element(field, args.r) if args.r else \
        fields.inverse_different(field).basis_elements()[-1]
    rp = parse_element(field, args.rp) if args.rp else r
    res = kl.weil_scan(field, r, rp, chi=chi, max_norm=args.max_norm,
                       eps=args.eps, threads=args.threads)
    rows = [[_elt_str(row.c), row.norm, row.abs_k, row.ratio] for row in res.rows]
    _emit(args, {"r": _elt_str(r), "rp": _elt_str(rp), "eps": res.eps,
                 "s_primes": list(res.s_labels), "running_max": res.running_max,
                 "rows": [{"c": a, "norm": b, "abs_k": x, "ratio": y}
                          for a, b, x, y in rows]},
          rows=(["c", "norm", "abs_k", "ratio"], rows))
    return 0


def cmd_kl_delta(args) -> int:
    field = fields.make_field(args.field)
    r = parse_element(field, args.r)
    rp = parse_element(field, args.rp)
    xi = tuple(int(x) for x in args.xi.split(","))
    modulus = _level_ideal(field, args.level)
    chi = load_character(field, modulus, args.chi)
    val = kl.delta_term(r, rp, xi, chi)
    _emit(args, {"r": _elt_str(r), "rp": _elt_str(rp), "xi": list(xi),
                 "value": _complex_repr(val)})
    return 0


# -- equidist group -------------------------------------------------------------------


def cmd_eq_synth(args) -> int:
    field = fields.make_field(args.field)
    box = parse_box(args.box)
    labels = [s.strip() for s in args.primes.split(",") if s.strip()]
    seed = args.seed if args.seed is not None else 0
    ds = equidist.synthesize(field, labels, box, args.count, seed)
    if args.out is None:
        raise ValueError("synth requires --out for the dataset file")
    if args.format == "csv":
        ds.to_csv(args.out)
    else:
        ds.to_jsonl(args.out)
    print(json.dumps({"records": len(ds.records), "out": args.out,
                      "seed": seed, "labels": labels}))
    return 0


def cmd_eq_tau(args) -> int:
    td = equidist.tau_source(args.upto)
    if args.out is not None:
        td.dataset.to_jsonl(args.out)
    if args.tau_out is not None:
        with open(args.tau_out, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "tau"])
            for n in range(1, len(td.tau)):
                w.writerow([n, td.tau[n]])
    rec = td.dataset.records[0]
    print(json.dumps({
        "upto": args.upto,
        "primes": len(rec.lambda_p),
        "tau2": td.tau[2], "tau3": td.tau[3], "tau4": td.tau[4],
        "lambda_2": rec.lambda_p["2:0"],
        "tp2_2": _frac_repr(td.tp2_eigenvalues["2:0"]),
        "out": args.out, "tau_out": args.tau_out,
    }))
    return 0


def cmd_eq_run(args) -> int:
    field = fields.make_field(args.field)
    box = parse_box(args.box)
    if args.data.endswith(".csv"):
        ds = equidist.Dataset.from_csv(args.data, args.field)
    else:
        ds = equidist.Dataset.from_jsonl(args.data, args.field)
    j_windows = {k: (float(v[0]), float(v[1]))
                 for k, v in json.loads(args.intervals).items()}
    t_grid = [float(x) for x in args.t_grid.split(",")]
    if args.calibrate:
        full_j = {}
        for label in j_windows:
            np_ = fields.prime_by_label(field, label).absolute_norm()
            full_j[label] = (0.0, 2.0 * math.sqrt(np_))
        pred = equidist.predict(field, args.covolume, box, max(t_grid), full_j)
        total = ds.total_weight()
        if total > 0:
            ds = ds.scaled(pred.product / total)
    rep = equidist.run_report(ds, box, t_grid, j_windows, args.covolume, field)
    if args.out is not None:
        rep.to_csv(args.out)
    print(json.dumps(rep.summary()))
    return 0


def cmd_eq_index(args) -> int:
    field = fields.make_field(args.field)
    level = _level_ideal(field, args.level)
    idx = equidist.level_index(field, level)
    _emit(args, {"level_norm": int(level.norm()), "index": _frac_repr(idx),
                 "index_float": float(idx)})
    return 0


def cmd_eq_predict(args) -> int:
    field = fields.make_field(args.field)
    box = parse_box(args.box)
    j_windows = {k: (float(v[0]), float(v[1]))
                 for k, v in json.loads(args.intervals).items()}
    pred = equidist.predict(field, args.covolume, box, args.t, j_windows)
    _emit(args, {"constant": pred.constant, "pl_factor": pred.pl_factor,
                 "phi_factor": pred.phi_factor, "product": pred.product,
                 "v1": pred.v1})
    return 0


# -- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="heckedist",
        description="Hecke eigenvalue distribution toolkit: exact local Hecke "
                    "algebra, spectral and Sato-Tate measures, Kloosterman sums, "
                    "and equidistribution reports.")
    ap.add_argument("--field", default="Q", help='field spec: "Q" or "Q(sqrt m)"')
    ap.add_argument("--level", default=None, help="level element (principal ideal)")
    ap.add_argument("--out", default=None, help="write output to this path")
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--threads", type=int, default=1)
    # the same flags are accepted after the subcommand; SUPPRESS keeps the
    # subparser from clobbering values parsed at the top level
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=argparse.SUPPRESS)
    common.add_argument("--level", default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--format", choices=("json", "csv"), default=argparse.SUPPRESS)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    groups = ap.add_subparsers(dest="group", required=True)

    g = groups.add_parser("field", help="number field data").add_subparsers(
        dest="cmd", required=True)
    sp = g.add_parser("info", parents=[common]); sp.set_defaults(func=cmd_field_info)
    sp = g.add_parser("factor", parents=[common])
    sp.add_argument("--p", type=int, required=True)
    sp.set_defaults(func=cmd_field_factor)
    sp = g.add_parser("unit", parents=[common]); sp.set_defaults(func=cmd_field_unit)

    g = groups.add_parser("hecke", help="local Hecke algebra").add_subparsers(
        dest="cmd", required=True)
    sp = g.add_parser("verify-relation", parents=[common])
    sp.add_argument("--p", required=True, help="prime label p or p:i")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--no-brute", action="store_true",
                    help="skip the coset brute-force cross-check")
    sp.set_defaults(func=cmd_hecke_verify)
    sp = g.add_parser("spoly", parents=[common])
    sp.add_argument("--p", required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.set_defaults(func=cmd_hecke_spoly)
    sp = g.add_parser("eigenvalue", parents=[common])
    sp.add_argument("--p", required=True)
    sp.add_argument("--nu", default=None)
    sp.add_argument("--lam", default=None)
    sp.set_defaults(func=cmd_hecke_eigenvalue)

    g = groups.add_parser("measure", help="spectral and Sato-Tate measures") \
        .add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("eval", parents=[common])
    sp.add_argument("--kind", required=True,
                    help="pl0 | pl1 | v10 | v11 | npl0 | npl1")
    sp.add_argument("--interval", required=True, help="a:b")
    sp.set_defaults(func=cmd_measure_eval)
    sp = g.add_parser("phi", parents=[common])
    sp.add_argument("--p", required=True)
    sp.add_argument("--interval", default=None, help="a:b")
    sp.add_argument("--spoly", type=int, default=None, help="index k of S_{p,2k}")
    sp.set_defaults(func=cmd_measure_phi)
    sp = g.add_parser("box", parents=[common])
    sp.add_argument("--spec", required=True, help="JSON box spec or @file")
    sp.add_argument("--family", choices=("pl", "v1"), default="pl")
    sp.set_defaults(func=cmd_measure_box)

    g = groups.add_parser("kloosterman", help="twisted Kloosterman sums") \
        .add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("eval", parents=[common])
    sp.add_argument("--c", required=True)
    sp.add_argument("--r", required=True)
    sp.add_argument("--rp", required=True)
    sp.add_argument("--chi", default=None, help="character file (JSON)")
    sp.set_defaults(func=cmd_kl_eval)
    sp = g.add_parser("scan", parents=[common])
    sp.add_argument("--max-norm", type=int, required=True)
    sp.add_argument("--eps", type=float, default=0.1)
    sp.add_argument("--r", default=None)
    sp.add_argument("--rp", default=None)
    sp.add_argument("--chi", default=None)
    sp.set_defaults(func=cmd_kl_scan)
    sp = g.add_parser("delta", parents=[common])
    sp.add_argument("--r", required=True)
    sp.add_argument("--rp", required=True)
    sp.add_argument("--xi", required=True, help="comma parity vector, e.g. 0,0")
    sp.add_argument("--chi", default=None)
    sp.set_defaults(func=cmd_kl_delta)

    g = groups.add_parser("equidist", help="datasets, predictions, reports") \
        .add_subparsers(dest="cmd", required=True)
    sp = g.add_parser("synth", parents=[common])
    sp.add_argument("--box", required=True)
    sp.add_argument("--primes", required=True, help="comma prime labels")
    sp.add_argument("--count", type=int, required=True)
    sp.set_defaults(func=cmd_eq_synth)
    sp = g.add_parser("tau", parents=[common])
    sp.add_argument("--upto", type=int, required=True)
    sp.add_argument("--tau-out", default=None, help="CSV of n,tau(n)")
    sp.set_defaults(func=cmd_eq_tau)
    sp = g.add_parser("run", parents=[common])
    sp.add_argument("--data", required=True, help="dataset file (.jsonl or .csv)")
    sp.add_argument("--box", required=True)
    sp.add_argument("--intervals", required=True, help='JSON {"2:0":[0,1],...}')
    sp.add_argument("--covolume", type=float, default=1.0)
    sp.add_argument("--t-grid", required=True, help="comma thresholds")
    sp.add_argument("--calibrate", action="store_true",
                    help="scale weights so total = prediction at t_max, full J")
    sp.set_defaults(func=cmd_eq_run)
    sp = g.add_parser("index", parents=[common])
    sp.set_defaults(func=cmd_eq_index)
    sp = g.add_parser("predict", parents=[common])
    sp.add_argument("--box", required=True)
    sp.add_argument("--intervals", required=True)
    sp.add_argument("--covolume", type=float, default=1.0)
    sp.add_argument("--t", type=float, required=True)
    sp.set_defaults(func=cmd_eq_predict)
    return ap


def main(argv: Optional[Sequence[str]] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        # argparse exits itself on usage errors and --help; fold into a code
        return int(exc.code or 0)
    if not hasattr(args, "func"):
        ap.print_usage(sys.stderr)
        return 2
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        sys.stderr.write(json.dumps(
            {"error": exc.__class__.__name__, "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
