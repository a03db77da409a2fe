"""Command-line entry point: compute fusion/exchange/K-matrices and 6j tables,
run the identity-verification suites, emit machine-readable reports.

Exit codes: 0 all identities hold exactly; 1 mathematical failure; 2 invalid
usage/config; 3 non-generic lambda encountered (retries exhausted).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import linalg
from .exchange import (
    Report,
    asymptotic_alcove,
    asymptotic_leading,
    closed_form_gln,
    exchange_matrix,
    fusion_matrix,
    hecke_report,
    kmat,
    kprime,
    ktilde,
    r00_cross_check,
    r00_scalar_check,
    two_point,
    verify_cocycle,
    verify_qdyb,
)
from .gauge import (
    closed_form_hecke,
    conjugation_identity_check,
    d_operator,
    exact_one_form,
    exact_two_form,
    example_hecke,
    gauge_sequence_report,
    random_one_form,
)
from .lam import SampledLambda, SymbolicLambda
from .liealg import AlgebraSpec, irrep_sl2, tensor, vector_rep_gln
from .dynrep import (
    verify_antipode,
    verify_coproduct_compat,
    verify_product_relation,
    verify_rll,
)
from .scalars import (
    NonGenericLambda,
    QParam,
    RatFunc,
    SamplePoint,
    classical_q,
    random_regular_point,
    scalar_to_str,
)
from .sixj import pentagon_residuals, sixj_table

ALL_SUITES = [
    "cocycle", "qdyb", "hecke", "abrr-agreement", "closed-form", "k-matrix",
    "two-point", "sixj", "gauge", "rll", "product", "coproduct", "antipode",
    "asymptotics", "r00",
]


class ConfigError(ValueError):
    pass


def parse_q(text: str) -> QParam:
    if text == "classical":
        return classical_q()
    try:
        return QParam.from_q(Fraction(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad q value {text!r}: {exc}") from exc


def build_reps(algebra: str, qp: QParam, reps: list):
    if algebra == "sl2":
        spins = [Fraction(r) for r in (reps or ["1/2", "1/2"])]
        return [irrep_sl2(s, qp) for s in spins]
    n = int(algebra[2:])
    if reps and any(r != "vector" for r in reps):
        raise ConfigError(f"{algebra} supports the vector representation only")
    count = max(2, len(reps) if reps else 2)
    return [vector_rep_gln(n, qp) for _ in range(count)]


def sample_handles(spec: AlgebraSpec, count: int, seed: int, bits: int):
    out = []
    for k in range(count):
        pt = random_regular_point(spec.qp, spec.ncoords, seed=seed + k, bits=bits)
        out.append(SampledLambda(spec, pt))
    return out


def matrix_json(M, basis) -> dict:
    ent = []
    for row in M:
        out = []
        for x in row:
            out.append(x.to_json() if isinstance(x, RatFunc) else scalar_to_str(x))
        ent.append(out)
    return {"rows": len(M), "cols": len(M[0]) if M else 0, "basis": basis, "entries": ent}


def pretty_matrix(M) -> str:
    lines = []
    for row in M:
        cells = []
        for x in row:
            if isinstance(x, RatFunc):
                cells.append("ratfunc" if not x.is_zero() else "0")
            else:
                cells.append(scalar_to_str(x))
        lines.append("  [" + ", ".join(cells) + "]")
    return "\n".join(lines)


def _emit(args, payload: dict, csv_rows=None):
    if args.format == "csv" and csv_rows is not None:
        buf = io.StringIO()
        w = csv.writer(buf)
        for row in csv_rows:
            w.writerow(row)
        text = buf.getvalue()
    elif args.format == "pretty":
        text = json.dumps(payload, indent=2, sort_keys=True)
    else:
        text = json.dumps(payload, sort_keys=True, separators=(",", ":"))
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def config_dict(args) -> dict:
    return {
        "algebra": args.algebra,
        "q": args.q,
        "reps": list(args.reps or []),
        "symbolic": bool(getattr(args, "symbolic", False)),
        "samples": getattr(args, "samples", None),
        "seed": args.seed,
        "bitsize": args.bitsize,
    }


def cmd_compute(args) -> int:
    qp = parse_q(args.q)
    reps = build_reps(args.algebra, qp, args.reps)
    spec = reps[0].spec
    cfg = {"command": "compute", "object": args.object, **config_dict(args)}
    basis2 = [f"{i},{j}" for i in range(reps[0].dim) for j in range(reps[-1].dim)]

    if args.object == "sixj-table":
        if spec.kind != "sl2":
            raise ConfigError("sixj-table needs --algebra sl2")
        tab = sixj_table(qp, Fraction(args.max_spin))
        rows = [("a", "b", "n", "c", "k", "j", "value")]
        jrows = []
        for (a, b, n, c, k, j, v) in tab.rows():
            rows.append(tuple(str(x) for x in (a, b, n, c, k, j, v)))
            jrows.append({"a": str(a), "b": str(b), "n": str(n), "c": str(c),
                          "k": str(k), "j": str(j), "value": scalar_to_str(v)})
        _emit(args, {"config": cfg, "table": jrows}, csv_rows=rows)
        return 0

    W, V = reps[0], reps[1] if len(reps) > 1 else reps[0]
    results = []
    if args.symbolic:
        if spec.kind == "gln" and spec.n > 2:
            raise ConfigError("symbolic mode supports sl2 and gl2 only")
        lams = [SymbolicLambda(spec)]
    else:
        lams = sample_handles(spec, args.samples, args.seed, args.bitsize)
    for lam in lams:
        if args.object == "fusion":
            M = fusion_matrix(W, V, lam, args.method)
            basis = basis2
        elif args.object == "exchange":
            M = exchange_matrix(W, V, lam, args.method)
            basis = basis2
        elif args.object == "kmatrix":
            M = kmat(W, lam, args.method)
            basis = [str(i) for i in range(W.dim)]
        elif args.object == "twopoint":
            M = two_point(W, lam)
            basis = [str(i) for i in range(W.dim)]
        else:
            raise ConfigError(f"unknown object {args.object!r}")
        entry = {"matrix": matrix_json(M, basis)}
        if isinstance(lam, SampledLambda):
            entry["lambda"] = lam.point.to_json()
        else:
            entry["lambda"] = "symbolic"
        results.append(entry)
    _emit(args, {"config": cfg, "results": results})
    return 0


def _suite_runners(args, qp, reps, lams):
    spec = reps[0].spec
    trip = (reps + [reps[-1], reps[-1]])[:3]
    pair = (reps + [reps[-1]])[:2]

    def suite_cocycle():
        return [verify_cocycle(trip[0], trip[1], trip[2], lams, args.method)]

    def suite_qdyb():
        return [verify_qdyb(trip[0], trip[1], trip[2], lams, args.method)]

    def suite_hecke():
        if spec.kind != "gln":
            raise ConfigError("hecke suite applies to gl_N vector pairs")
        out = []
        for lam in lams:
            R = exchange_matrix(pair[0], pair[1], lam, args.method)
            out.append(hecke_report(R, pair[0], qp))
        return out

    def suite_abrr():
        if qp.classical:
            raise ConfigError("abrr-agreement applies to the trigonometric case")
        rep = Report("abrr-agreement", {"reps": [r.name for r in pair]})
        for idx, lam in enumerate(lams):
            A = fusion_matrix(pair[0], pair[1], lam, "verma")
            B = fusion_matrix(pair[0], pair[1], lam, "abrr")
            if not linalg.mat_eq(A, B):
                rep.fail(sample=idx)
        return [rep]

    def suite_closed_form():
        if spec.kind != "gln":
            raise ConfigError("closed-form suite applies to gl_N")
        rep = Report("closed-form", {"N": spec.n})
        cfJ = closed_form_gln(spec.n, qp, "J")
        cfR = closed_form_gln(spec.n, qp, "R")
        for idx, lam in enumerate(lams):
            pt = lam.point
            if not linalg.mat_eq(fusion_matrix(pair[0], pair[1], lam, args.method), cfJ.matrix(pt)):
                rep.fail(sample=idx, object="J")
            if not linalg.mat_eq(exchange_matrix(pair[0], pair[1], lam, args.method), cfR.matrix(pt)):
                rep.fail(sample=idx, object="R")
        return [rep]

    def suite_kmatrix():
        rep = Report("k-matrix", {"V": reps[0].name})
        for idx, lam in enumerate(lams):
            K = kmat(reps[0], lam, args.method)
            Kp = kprime(reps[0], lam, args.method)
            if not linalg.mat_eq(K, Kp):
                rep.fail(sample=idx, identity="K == K'")
            B = two_point(reps[0], lam)
            if not linalg.mat_eq(B, Kp):
                rep.fail(sample=idx, identity="B == <v, K' v*>")
            if linalg.mat_det(B) == 0:
                rep.fail(sample=idx, identity="det B != 0")
        return [rep]

    def suite_twopoint():
        rep = Report("two-point", {"V": reps[0].name})
        for idx, lam in enumerate(lams):
            B = two_point(reps[0], lam)
            if linalg.mat_det(B) == 0:
                rep.fail(sample=idx, identity="det B != 0")
        return [rep]

    def suite_sixj():
        if spec.kind != "sl2":
            raise ConfigError("sixj suite needs sl2")
        rep = Report("sixj", {"max_spin": str(args.max_spin)})
        tf = sixj_table(qp, Fraction(args.max_spin), "fusion")
        to = sixj_table(qp, Fraction(args.max_spin), "oracle")
        for key in sorted(set(tf.values) | set(to.values)):
            if tf.get(*key) != to.get(*key):
                rep.fail(key=[str(x) for x in key], fusion=str(tf.get(*key)),
                         oracle=str(to.get(*key)))
        for bad in pentagon_residuals(qp, Fraction(args.max_spin)):
            rep.fail(pentagon=[str(x) for x in bad[0]])
        return [rep]

    def suite_gauge():
        import random as _random

        N = spec.n if spec.kind == "gln" else 2
        rep = Report("gauge", {"N": N})
        rng = _random.Random(args.seed)
        for t in range(30):
            xi = random_one_form(N, qp, rng)
            if not d_operator(d_operator(xi)).is_trivial():
                rep.fail(identity="d^2 = 0", form=t)
        xi = exact_one_form(N, qp)
        phi = exact_two_form(N, qp)
        dxi = d_operator(xi)
        if not all(dxi.value(k) == phi.value(k) for k, _ in phi.values):
            rep.fail(identity="d xi* == phi*")
        _, _, ok = gauge_sequence_report(N, qp)
        if not ok:
            rep.fail(identity="three-step gauge sequence")
        R0 = example_hecke(N, qp)
        from .gauge import apply_gauge

        c = Fraction(3)
        R3 = apply_gauge(R0, ("III", c))
        if (R3.hq, R3.hp) != (c * R0.hq, c * R0.hp):
            rep.fail(identity="type III Hecke parameters")
        # gauge forms live on the N-coordinate torus; draw matching points
        pts = [random_regular_point(qp, N, seed=args.seed + k, bits=args.bitsize)
               for k in range(min(args.samples, 20))]
        conj = conjugation_identity_check(closed_form_hecke(N, qp), xi, pts)
        if not conj["pass"]:
            rep.fail(identity="conjugation == type I by d xi", detail=conj["failures"][:1])
        return [rep]

    def suite_rll():
        return [verify_rll(trip[0], trip[1], trip[2], lams, args.method)]

    def suite_product():
        return [verify_product_relation(trip[0], trip[1], trip[2], lams, args.method)]

    def suite_coproduct():
        return [verify_coproduct_compat(trip[0], trip[1], trip[2], lams, args.method)]

    def suite_antipode():
        return [verify_antipode(pair[0], pair[1], lams, args.method)]

    def suite_asymptotics():
        if qp.classical:
            return [asymptotic_leading(pair[0], pair[1])]
        if abs(qp.q) >= 1:
            raise ConfigError("trigonometric asymptotics need |q| < 1")
        return [
            asymptotic_alcove(pair[0], pair[1], "positive", range(5, 21), args.method),
            asymptotic_alcove(pair[0], pair[1], "negative", range(5, 21), args.method),
        ]

    def suite_r00():
        out = [r00_scalar_check(pair[0], pair[1], lams, args.method)]
        if spec.kind == "sl2":
            W2 = tensor(pair[1], pair[1])
            out.append(r00_cross_check(pair[0], pair[1], W2, lams, args.method))
        return out

    return {
        "cocycle": suite_cocycle,
        "qdyb": suite_qdyb,
        "hecke": suite_hecke,
        "abrr-agreement": suite_abrr,
        "closed-form": suite_closed_form,
        "k-matrix": suite_kmatrix,
        "two-point": suite_twopoint,
        "sixj": suite_sixj,
        "gauge": suite_gauge,
        "rll": suite_rll,
        "product": suite_product,
        "coproduct": suite_coproduct,
        "antipode": suite_antipode,
        "asymptotics": suite_asymptotics,
        "r00": suite_r00,
    }


def cmd_verify(args) -> int:
    qp = parse_q(args.q)
    reps = build_reps(args.algebra, qp, args.reps)
    spec = reps[0].spec
    lams = sample_handles(spec, args.samples, args.seed, args.bitsize)
    suites = args.suites or ALL_SUITES
    for s in suites:
        if s not in ALL_SUITES:
            raise ConfigError(f"unknown suite {s!r}")
    workers = int(os.environ.get("DYNRX_THREADS", "1"))
    runners = _suite_runners(args, qp, reps, lams)
    reports = []
    all_pass = True

    def run_one(name):
        return [r.to_json() for r in runners[name]()]

    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run_one, suites))
    else:
        results = [run_one(s) for s in suites]
    for chunk in results:
        for rj in chunk:
            reports.append(rj)
            all_pass = all_pass and rj["pass"]
    payload = {"config": {"command": "verify", "suites": suites, **config_dict(args)},
               "reports": reports, "pass": all_pass}
    _emit(args, payload)
    return 0 if all_pass else 1


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynrx",
                                description="exact fusion/exchange matrices and identity suites")
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("compute", "verify"):
        sp = sub.add_parser(name)
        sp.add_argument("--algebra", default="sl2", choices=["sl2", "gl2", "gl3", "gl4"])
        sp.add_argument("--q", default="4", help='rational q (e.g. "4", "1/4") or "classical"')
        sp.add_argument("--reps", nargs="*", default=None,
                        help='sl2 spins like 1/2 1, or "vector" for gl_N')
        sp.add_argument("--samples", type=int, default=5)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--bitsize", type=int, default=16)
        sp.add_argument("--method", default="verma", choices=["verma", "abrr"])
        sp.add_argument("--max-spin", default="1")
        sp.add_argument("--output", default=None)
        sp.add_argument("--format", default="json", choices=["json", "csv", "pretty"])
    sub.choices["compute"].add_argument(
        "--object", default="fusion",
        choices=["fusion", "exchange", "kmatrix", "twopoint", "sixj-table"])
    sub.choices["compute"].add_argument("--symbolic", action="store_true")
    sub.choices["verify"].add_argument("--suites", nargs="+", default=None)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        if args.command == "compute":
            return cmd_compute(args)
        return cmd_verify(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NonGenericLambda as exc:
        print(f"non-generic lambda: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
