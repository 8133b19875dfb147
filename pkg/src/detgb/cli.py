"""Command-line front end: gen, gb, predict, verify, bench, hilbert."""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import analytics
from .engine import GroebnerBasis, detgb, lazard_oracle, normal_form, revlex_failures, spair_check
from .ff import DEFAULT_PRIME, FieldSpec
from .gncomplex import GNData, LinearMatrix
from .ring import divides, enumerate_degree, grevlex_key
from .stats import to_csv

EXIT_OK, EXIT_VERIFY, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write the whole file or nothing: temp file in the target directory, then rename."""
    if str(path) == "-":
        sys.stdout.write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def load_instance(path: str) -> tuple[LinearMatrix, int]:
    obj = _load_json(path)
    try:
        return LinearMatrix.from_json(obj), int(obj.get("seed", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed instance {path}: {exc}") from exc


def load_basis(path: str) -> GroebnerBasis:
    obj = _load_json(path)
    try:
        return GroebnerBasis.from_json(obj)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"malformed basis {path}: {exc}") from exc


def threads() -> int:
    try:
        return max(1, int(os.environ.get("DETGB_THREADS", "1")))
    except ValueError:
        return 1


def parse_seeds(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if "-" in part[1:]:
            lo, hi = part.split("-", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError("empty seed list")
    return out


def write_counterexample(directory: str, m: LinearMatrix, seed: int, degrees: list[int], pivots) -> Path:
    """Store an instance whose Macaulay pivots are not a leftmost segment."""
    path = Path(directory) / f"revlex_counterexample_n{m.n}_s{seed}.json"
    obj = {"instance": {**m.to_json(), "seed": seed}, "degrees": degrees, "pivots": {str(d): pivots[d] for d in degrees}}
    atomic_write(path, json.dumps(obj, indent=1) + "\n")
    return path


# ------------------------------------------------------------------ commands


def cmd_gen(args) -> int:
    FieldSpec(args.p)
    if args.n < 2:
        raise UsageError("n must be at least 2")
    m = LinearMatrix.random(args.n, args.p, args.seed)
    atomic_write(args.out, json.dumps({**m.to_json(), "seed": args.seed}) + "\n")
    return EXIT_OK


def run_gb(m: LinearMatrix, seed: int, engine: str, structured: bool, z_source: str, run_id: str):
    """Basis and stats records for one instance."""
    if engine == "lazard":
        return lazard_oracle(GNData(m).generators, 2 * m.n - 3), [], None
    res = detgb(m, structured=structured, z_source=_z_source(z_source, m.n))
    for s in res.stats:
        s.run_id, s.seed = run_id, seed
    return res.basis, res.stats, res


def _z_source(z: str, n: int) -> str:
    if z == "auto":
        return "gn" if n <= 7 else "rankprofile"
    return z


def cmd_gb(args) -> int:
    m, seed = load_instance(args.inp)
    if m.n < 3:
        raise UsageError("the engine needs n >= 3")
    run_id = args.run_id or Path(args.inp).stem
    basis, stats, res = run_gb(m, seed, args.engine, args.structured == "on", args.z_source, run_id)
    atomic_write(args.out, json.dumps(basis.to_json(m.n)) + "\n")
    if args.stats:
        atomic_write(args.stats, to_csv(stats))
    if res is not None and args.artifacts:
        bad = revlex_failures(res.ideal, lambda d: analytics.hf_ideal(m.n, 1, d))
        if bad:
            path = write_counterexample(args.artifacts, m, seed, bad, res.ideal.pivots)
            print(f"conjecture counterexample: degrees {bad} -> {path}", file=sys.stderr)
    return EXIT_OK


def predict_table(n: int, omega: float) -> dict:
    model = analytics.cost_model(n, omega)
    rows = [
        {"degree": n - 1, "h": analytics.hf_ideal(n, 1, n - 1), "new": n * n, "alpha": None, "beta": None, "gamma": None}
    ]
    for t in model.terms:
        rows.append(
            {
                "degree": t.degree,
                "h": analytics.hf_ideal(n, 1, t.degree),
                "new": t.split.alpha,
                "alpha": t.split.alpha,
                "beta": t.split.beta,
                "gamma": t.split.gamma,
                "trsm": t.trsm,
                "update": t.update,
            }
        )
    return {
        "n": n,
        "omega": omega,
        "rows": rows,
        "gb_size": analytics.gb_size(n),
        "gb_degrees": analytics.gb_degree_counts(n),
        "f_omega": model.total,
        "dense_direct": analytics.dense_coeff_count(n, "direct"),
        "dense_printed": analytics.dense_coeff_count(n, "printed"),
    }


def _num(x) -> str:
    if x is None:
        return "-"
    if isinstance(x, float) and not x.is_integer():
        return f"{x:.6g}"
    return str(int(x)) if float(x).is_integer() else str(x)


def format_predict(tab: dict) -> str:
    head = ["degree", "h_d", "new_lm", "alpha", "beta", "gamma", "trsm", "update"]
    keys = ["degree", "h", "new", "alpha", "beta", "gamma", "trsm", "update"]
    cells = [head] + [[_num(r.get(k)) for k in keys] for r in tab["rows"]]
    widths = [max(len(c[i]) for c in cells) for i in range(len(head))]
    lines = ["  ".join(c[i].rjust(widths[i]) for i in range(len(head))) for c in cells]
    degs = ", ".join(f"{d}:{c}" for d, c in tab["gb_degrees"].items())
    lines += [
        f"gb total {tab['gb_size']}  degrees {{{degs}}}",
        f"f_{_num(tab['omega'])}({tab['n']}) = {_num(tab['f_omega'])}",
        f"dense coefficients: direct {tab['dense_direct']}  printed-formula {_num(tab['dense_printed'])}",
    ]
    return "\n".join(lines) + "\n"


def cmd_predict(args) -> int:
    if args.n < 3:
        raise UsageError("n must be at least 3")
    if not 2 <= args.omega <= 3:
        raise UsageError("omega must lie in [2, 3]")
    tab = predict_table(args.n, args.omega)
    sys.stdout.write(format_predict(tab))
    if args.out:
        atomic_write(args.out, json.dumps(tab, default=_num, indent=1) + "\n")
    return EXIT_OK


def verify_basis(m: LinearMatrix, basis: GroebnerBasis, spairs: bool = False) -> dict:
    """Checks (a) cofactor membership, (b) staircase counts, (c) reduced and monic, (d) revlex."""
    n = m.n
    polys = basis.elements()
    lms = [f.lm() for f in polys]
    report = {"membership": [], "staircase": [], "reduced": [], "revlex": [], "spairs": None}
    for idx, g in enumerate(GNData(m).generators):
        if not normal_form(g, polys).is_zero():
            report["membership"].append(idx)
    for d in range(2 * n - 2):
        mons = enumerate_degree(d, 4)
        inlm = [any(divides(t, u) for t in lms) for u in mons]
        std = inlm.count(False)
        want = analytics.hf_quotient(n, 1, d)
        if std != want:
            report["staircase"].append((d, std, want))
        h = len(mons) - std
        if inlm != [True] * h + [False] * std:
            report["revlex"].append(d)
    for i, f in enumerate(polys):
        if f.lc() != 1:
            report["reduced"].append((i, "not monic"))
        if any(divides(t, f.lm()) for j, t in enumerate(lms) if j != i):
            report["reduced"].append((i, "leading monomial not minimal"))
        for mon, _ in f.terms[1:]:
            if any(divides(t, mon) for t in lms):
                report["reduced"].append((i, "tail not reduced"))
                break
    if spairs:
        report["spairs"] = spair_check(polys)
    report["ok"] = not (report["membership"] or report["staircase"] or report["reduced"] or report["spairs"])
    return report


def cmd_verify(args) -> int:
    m, _ = load_instance(args.inp)
    basis = load_basis(args.gb)
    if basis.p != m.p:
        raise UsageError(f"field mismatch: instance p={m.p}, basis p={basis.p}")
    if args.spairs and m.n > 4:
        raise UsageError("the S-pair check is limited to n <= 4")
    rep = verify_basis(m, basis, args.spairs)
    print(f"(a) cofactor normal forms: {'ok' if not rep['membership'] else 'FAIL ' + str(rep['membership'])}")
    print(f"(b) staircase counts:      {'ok' if not rep['staircase'] else 'FAIL ' + str(rep['staircase'])}")
    print(f"(c) reduced and monic:     {'ok' if not rep['reduced'] else 'FAIL ' + str(rep['reduced'][:5])}")
    rl = "ok" if not rep["revlex"] else f"not a leftmost segment in degrees {rep['revlex']} (conjecture)"
    print(f"(d) revlex staircase:      {rl}")
    if rep["spairs"] is not None:
        print(f"    S-pairs:               {'ok' if not rep['spairs'] else 'FAIL ' + str(rep['spairs'][:5])}")
    print("verification passed" if rep["ok"] else "verification FAILED")
    return EXIT_OK if rep["ok"] else EXIT_VERIFY


def _bench_cell(job):
    n, p, seed, structured, z_source = job
    m = LinearMatrix.random(n, p, seed)
    _, stats, res = run_gb(m, seed, "detgb", structured, z_source, f"n{n}-s{seed}")
    bad = revlex_failures(res.ideal, lambda d: analytics.hf_ideal(n, 1, d))
    return n, seed, stats, bad, {d: res.ideal.pivots[d] for d in bad}


def fit_slope(ns, values) -> float:
    return float(np.polyfit(np.log(np.asarray(ns, float)), np.log(np.asarray(values, float)), 1)[0])


def bench_summary(stats, lo: int = 6, hi: int = 12) -> dict:
    """Total ideal-stage mul_count per n (mean over seeds) and its log-log slope."""
    per: dict[int, dict[int, int]] = {}
    for s in stats:
        if s.stage == "ideal":
            per.setdefault(s.n, {}).setdefault(s.seed, 0)
            per[s.n][s.seed] += s.mul_count
    totals = {n: sum(v.values()) / len(v) for n, v in sorted(per.items())}
    window = [n for n in totals if lo <= n <= hi]
    if len(window) < 2:
        window = list(totals)
    slope = fit_slope(window, [totals[n] for n in window]) if len(window) >= 2 else float("nan")
    return {"totals": totals, "window": window, "slope": slope}


def cmd_bench(args) -> int:
    if not 3 <= args.nmin <= args.nmax:
        raise UsageError("need 3 <= nmin <= nmax")
    FieldSpec(args.p)
    seeds = parse_seeds(args.seeds)
    jobs = [(n, args.p, s, args.structured == "on", args.z_source) for n in range(args.nmin, args.nmax + 1) for s in seeds]
    workers = min(threads(), len(jobs))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_bench_cell, jobs))
    else:
        results = [_bench_cell(j) for j in jobs]
    stats = [s for r in results for s in r[2]]
    atomic_write(args.out, to_csv(stats))
    for n, seed, _, bad, piv in results:
        if bad:
            path = write_counterexample(args.artifacts or ".", LinearMatrix.random(n, args.p, seed), seed, bad, piv)
            print(f"conjecture counterexample: n={n} seed={seed} degrees {bad} -> {path}", file=sys.stderr)
    summ = bench_summary(stats)
    for n, t in summ["totals"].items():
        print(f"n={n:3d}  ideal mul_count {t:.0f}")
    lo, hi = min(summ["window"]), max(summ["window"])
    print(f"log-log slope over n in [{lo}, {hi}]: {summ['slope']:.3f}")
    return EXIT_OK


def cmd_hilbert(args) -> int:
    if args.n < 3 or args.D < 1:
        raise UsageError("need n >= 3 and D >= 1")
    dmax = args.dmax if args.dmax is not None else 2 * args.D * args.n
    print(f"{'d':>4} {'hf_ideal':>10} {'hf_quotient':>12}")
    for d in range(args.dmin, dmax + 1):
        print(f"{d:>4} {analytics.hf_ideal(args.n, args.D, d):>10} {analytics.hf_quotient(args.n, args.D, d):>12}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="detgb", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="random n x n matrix of linear forms")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--p", type=int, default=DEFAULT_PRIME)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-")
    g.set_defaults(func=cmd_gen)

    g = sub.add_parser("gb", help="reduced grevlex basis of the (n-1)-minors")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--engine", choices=["detgb", "lazard"], default="detgb")
    g.add_argument("--structured", choices=["on", "off"], default="on")
    g.add_argument("--z-source", choices=["gn", "rankprofile", "auto"], default="gn")
    g.add_argument("--out", default="-")
    g.add_argument("--stats")
    g.add_argument("--run-id")
    g.add_argument("--artifacts", help="directory for revlex counterexamples")
    g.set_defaults(func=cmd_gb)

    g = sub.add_parser("predict", help="closed-form sizes and cost model")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--omega", type=float, default=3.0)
    g.add_argument("--out", help="optional JSON copy of the table")
    g.set_defaults(func=cmd_predict)

    g = sub.add_parser("verify", help="check a basis against its instance")
    g.add_argument("--in", dest="inp", required=True)
    g.add_argument("--gb", required=True)
    g.add_argument("--spairs", action="store_true", help="also run the Buchberger S-pair test (n <= 4)")
    g.set_defaults(func=cmd_verify)

    g = sub.add_parser("bench", help="operation counts over a range of n and seeds")
    g.add_argument("--nmin", type=int, required=True)
    g.add_argument("--nmax", type=int, required=True)
    g.add_argument("--p", type=int, default=DEFAULT_PRIME)
    g.add_argument("--seeds", default="1,2,3")
    g.add_argument("--structured", choices=["on", "off"], default="on")
    g.add_argument("--z-source", choices=["gn", "rankprofile", "auto"], default="auto")
    g.add_argument("--out", required=True, help="CSV path")
    g.add_argument("--artifacts", help="directory for revlex counterexamples")
    g.set_defaults(func=cmd_bench)

    g = sub.add_parser("hilbert", help="Hilbert function of the ideal and the quotient")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--D", type=int, default=1)
    g.add_argument("--dmin", type=int, default=0)
    g.add_argument("--dmax", type=int)
    g.set_defaults(func=cmd_hilbert)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
