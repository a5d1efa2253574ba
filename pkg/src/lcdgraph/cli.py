"""Command-line front end: generate graphs, evaluate the closed-form
oracles, and run the reproducible experiments.

Every command accepts ``--seed``; when omitted one is drawn from OS entropy
and recorded in the run manifest, so every run is replayable.  Commands that
write files also write ``<out>.manifest.json`` with sha256 digests of the
outputs; ``lcdgraph replay --manifest <file>`` re-executes the recorded
command and verifies byte-identical outputs.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import secrets
import sys
import tempfile
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analysis import (
    concentration_experiment,
    corollary_experiment,
    degree_histogram,
    degree_rows_to_distribution,
    empirical_fraction,
    hill_exponent,
    power_law_exponent,
    sum_s1,
    sum_s2_bound,
    timed_report,
    tv_distance,
    write_region_csv,
)
from .errors import DomainError
from .io import write_graph
from .lcd import enumerate_pairings, pairing_to_graph
from .oracles import (
    DkQuery,
    cond_prob_degree,
    count_ns,
    expected_count,
    lemma2_approx,
    mode_s01,
    mode_s02,
    prob_dk,
    ratio_f,
    tail_bound,
)
from .processes import (
    ProcessParams,
    batch_total_degrees,
    generate,
    replicate_rng,
)
from .regions import (
    BUILTIN_SYSTEMS,
    RegionSystem,
    combined_max_alpha,
    region_max_alpha,
)

THREADS_ENV = "LCDGRAPH_THREADS"


def _fmt(x) -> str:
    """Numeric formatting for stdout: rationals as p/q, floats via the
    shortest round-trip representation (15+ significant digits)."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, float):
        return str(x)
    return str(x)


def _sha256(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def _resolve_seed(args) -> int:
    if args.seed is None:
        args.seed = secrets.randbits(63)
    return args.seed


def _resolve_threads(args) -> int:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get(THREADS_ENV)
    return int(env) if env else 1


def _write_manifest(args, out_path: Path, outputs, started: float) -> Path:
    """Record the resolved invocation next to its outputs."""
    argv = [args.subcommand]
    if getattr(args, "experiment_name", None):
        argv.append(args.experiment_name)
    for key, val in sorted(vars(args).items()):
        if key in ("subcommand", "func", "experiment_name", "manifest") or val is None:
            continue
        argv.extend([f"--{key.replace('_', '-')}", str(val)])
    manifest = {
        "argv": argv,
        "parameters": {
            k: v
            for k, v in sorted(vars(args).items())
            if k not in ("func", "manifest") and v is not None
        },
        "seed": getattr(args, "seed", None),
        "version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
        "wall_clock_seconds": time.time() - started,
        "outputs": {p.name: _sha256(p) for p in outputs},
    }
    path = out_path.with_name(out_path.name + ".manifest.json")
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True, default=str) + "\n")
    return path


# ---------------------------------------------------------------------------
# subcommands


def cmd_enumerate(args) -> int:
    started = time.time()
    out = Path(args.out)
    rows = 0
    with open(out, "w") as fh:
        fh.write("pairing,total_degrees\n")
        for p in enumerate_pairings(args.n):
            g = pairing_to_graph(p)
            pairs = ";".join(f"{a}-{b}" for a, b in p.pairs())
            degs = ";".join(str(int(x)) for x in g.total_degrees)
            fh.write(f"{pairs},{degs}\n")
            rows += 1
    _write_manifest(args, out, [out], started)
    print(f"wrote {rows} pairings to {out}")
    return 0


def cmd_generate(args) -> int:
    started = time.time()
    _resolve_seed(args)
    params = ProcessParams(
        n=args.n, m=args.m, variant=args.variant, master_seed=args.seed
    )
    g = generate(params, replicate=args.replicate)
    out = Path(args.out)
    write_graph(g, out)
    header = out.with_name(out.name + ".header.json")
    _write_manifest(args, out, [out, header], started)
    print(f"wrote {g.n_edges} edges to {out} (seed {args.seed})")
    return 0


def cmd_oracle(args) -> int:
    name = args.formula
    if name == "prob-dk":
        print(prob_dk(DkQuery(args.n, args.k, args.s)).format())
    elif name == "count-ns":
        print(count_ns(DkQuery(args.n, args.k, args.s)))
    elif name == "ratio-f":
        print(_fmt(ratio_f(args.n, args.k, args.s)))
    elif name == "mode-s01":
        print(mode_s01(args.n, args.k))
    elif name == "mode-s02":
        print(mode_s02(args.n, args.k))
    elif name == "tail-bound":
        print(_fmt(tail_bound(args.n, args.l)))
    elif name == "cond-prob":
        print(cond_prob_degree(args.n, args.k, args.s, args.d).format())
    elif name == "expected-count":
        print(_fmt(expected_count(args.n, args.m, args.d)))
    elif name == "lemma2-approx":
        print(_fmt(lemma2_approx(args.n, args.k, args.d)))
    else:  # pragma: no cover - argparse restricts choices
        raise DomainError(f"unknown formula {name!r}")
    return 0


def _finish_experiment(args, report, extra_outputs=(), started=0.0) -> int:
    report.wall_clock_seconds = time.time() - started
    out = Path(args.out)
    json_path = report.write_json(out)
    csv_path = report.write_csv(out.with_suffix(".csv"))
    outputs = [json_path, csv_path, *extra_outputs]
    _write_manifest(args, out, outputs, started)
    for v in report.verdicts:
        status = "PASS" if v["passed"] else "FAIL"
        print(f"{status} {v['name']}: {v['detail']}")
    return 0 if report.all_passed else 1


def _exp_fraction(args, threads) -> int:
    started = time.time()
    params = ProcessParams(args.n, args.m, "sequential", args.seed)
    degree = args.d + args.m  # total degree of an in-degree-d vertex
    res = empirical_fraction(
        params, degree, "total_degree", args.replicates, threads=threads
    )
    target = expected_count(args.n, args.m, args.d) / args.n
    report = timed_report(
        "fraction",
        {"n": args.n, "m": args.m, "d": args.d, "degree": degree, "seed": args.seed,
         "replicates": args.replicates},
    )
    report.replicates = [
        {"replicate": i, "fraction": f} for i, f in enumerate(res.fractions)
    ]
    report.aggregates = {"mean": res.mean, "std": res.std, "target": target}
    rel = abs(res.mean - target) / target if target else float("inf")
    report.add_verdict(
        "fraction_within_5pct",
        rel <= 0.05,
        f"mean={res.mean:.6g} target={target:.6g} rel_err={rel:.3%}",
    )
    return _finish_experiment(args, report, started=started)


def _exp_gamma(args, threads) -> int:
    started = time.time()
    params = ProcessParams(args.n, args.m, "sequential", args.seed)
    g = generate(params)
    hist_in = degree_histogram(g, "in_degree")
    hist_tot = degree_histogram(g, "total_degree")
    fit_in = power_law_exponent(hist_in, args.dlo, args.dhi)
    fit_tot = power_law_exponent(hist_tot, args.dlo, args.dhi)
    hill = hill_exponent(hist_in, args.dlo)
    report = timed_report(
        "gamma",
        {"n": args.n, "m": args.m, "dlo": args.dlo, "dhi": args.dhi, "seed": args.seed},
    )
    report.aggregates = {
        "gamma_in": fit_in.gamma,
        "stderr_in": fit_in.stderr,
        "gamma_total": fit_tot.gamma,
        "stderr_total": fit_tot.stderr,
        "gamma_hill_in": hill,
    }
    report.add_verdict(
        "gamma_in_band",
        2.8 <= fit_in.gamma <= 3.2,
        f"in-degree fit gamma={fit_in.gamma:.4f} (se {fit_in.stderr:.4f}); "
        f"total-degree fit gamma={fit_tot.gamma:.4f}; Hill {hill:.4f}",
    )
    return _finish_experiment(args, report, started=started)


def _exp_concentration(args, threads) -> int:
    started = time.time()
    params = ProcessParams(args.n, args.m, "sequential", args.seed)
    res = concentration_experiment(
        params, args.d, args.replicates, threads=threads
    )
    report = timed_report(
        "concentration",
        {"n": args.n, "m": args.m, "d": args.d, "seed": args.seed,
         "replicates": args.replicates, "expectation_proxy": "replicate grand mean"},
    )
    report.aggregates = {
        "threshold": res.threshold,
        "mean_count": res.mean_count,
        "std_count": res.std_count,
        "exceedance_rate": res.exceedance_rate,
    }
    report.add_verdict(
        "exceedance_below_0.05",
        res.exceedance_rate <= 0.05,
        f"rate={res.exceedance_rate:.4f} threshold={res.threshold:.1f} "
        f"std={res.std_count:.1f}",
    )
    return _finish_experiment(args, report, started=started)


def _exp_sums(args, threads) -> int:
    started = time.time()
    s1 = sum_s1(args.n, args.d, args.beta, alpha=args.alpha)
    s2 = sum_s2_bound(args.n, args.m, max(args.d, 1), args.beta)
    report = timed_report(
        "sums",
        {"n": args.n, "m": args.m, "d": args.d, "beta": args.beta, "alpha": args.alpha},
    )
    report.aggregates = {
        "s1_value": s1.value,
        "s1_case": s1.case,
        "s1_claimed_order": s1.claimed_order,
        "s1_ratio": s1.ratio,
        "s2_bound_primary": s2.bound_primary,
        "s2_bound_final": s2.bound_final,
    }
    report.add_verdict(
        "s1_ratio_in_band",
        0.1 <= s1.ratio <= 10.0,
        f"case {s1.case}: ratio={s1.ratio:.4g}",
    )
    report.add_verdict(
        "s2_bound_chain",
        s2.bound_primary <= s2.bound_final or s2.bound_final == 0.0,
        f"primary={s2.bound_primary:.4g} final={s2.bound_final:.4g}",
    )
    return _finish_experiment(args, report, started=started)


def _exp_corollary(args, threads) -> int:
    started = time.time()
    n_grid = [int(x) for x in args.n_grid.split(",")]
    res = corollary_experiment(
        n_grid, args.m, args.exponent, args.replicates, args.seed
    )
    report = timed_report(
        "corollary",
        {"n_grid": n_grid, "m": args.m, "exponent": args.exponent, "seed": args.seed,
         "replicates": args.replicates},
    )
    report.replicates = [
        {"n": n, "d": d, "fraction": f}
        for n, d, f in zip(res.n_grid, res.d_values, res.fractions)
    ]
    report.aggregates = {"decreasing": res.decreasing}
    report.add_verdict(
        "fractions_decreasing",
        res.decreasing,
        "fractions " + ", ".join(f"{f:.3e}" for f in res.fractions),
    )
    return _finish_experiment(args, report, started=started)


def _exp_region(args, threads) -> int:
    started = time.time()
    if args.inequalities:
        lines = Path(args.inequalities).read_text().splitlines()
        system = RegionSystem.from_lines(lines, label="custom")
        result = region_max_alpha(system)
    elif args.system == "combined":
        result = combined_max_alpha()
    else:
        result = region_max_alpha(BUILTIN_SYSTEMS[args.system])
    report = timed_report(
        "region", {"system": args.system, "inequalities": args.inequalities}
    )
    attained = "attained" if result.attained else "sup, not attained"
    report.aggregates = {
        "sup_alpha": str(result.sup_alpha),
        "attained": result.attained,
        "witness_beta": str(result.witness_beta),
        "beta_interval": [str(x) for x in result.beta_interval],
    }
    out = Path(args.out)
    poly = write_region_csv(result.vertices, out.with_suffix(".vertices.csv"))
    report.add_verdict(
        "region_solved",
        True,
        f"sup alpha = {_fmt(result.sup_alpha)} ({attained}), "
        f"witness beta = {_fmt(result.witness_beta)}",
    )
    print(f"sup alpha = {_fmt(result.sup_alpha)}")
    return _finish_experiment(args, report, extra_outputs=[poly], started=started)


def _exp_equivalence(args, threads) -> int:
    started = time.time()
    rng = {v: replicate_rng(args.seed, i) for i, v in
           enumerate(("sequential", "urn", "pairing"))}
    dists = {
        v: degree_rows_to_distribution(
            batch_total_degrees(v, args.n, args.m, args.samples, rng[v])
        )
        for v in rng
    }
    report = timed_report(
        "equivalence",
        {"n": args.n, "m": args.m, "samples": args.samples, "seed": args.seed},
    )
    pairs = [("sequential", "pairing"), ("sequential", "urn"), ("urn", "pairing")]
    for a, b in pairs:
        tv = tv_distance(dists[a], dists[b])
        report.aggregates[f"tv_{a}_{b}"] = tv
        report.add_verdict(f"tv_{a}_{b}_below_0.01", tv <= 0.01, f"tv={tv:.5f}")
    return _finish_experiment(args, report, started=started)


_EXPERIMENTS = {
    "fraction": _exp_fraction,
    "gamma": _exp_gamma,
    "concentration": _exp_concentration,
    "sums": _exp_sums,
    "corollary": _exp_corollary,
    "region": _exp_region,
    "equivalence": _exp_equivalence,
}


def cmd_experiment(args) -> int:
    _resolve_seed(args)
    threads = _resolve_threads(args)
    return _EXPERIMENTS[args.experiment_name](args, threads)


def cmd_replay(args) -> int:
    """Re-run a manifest's command into a scratch directory and verify the
    recorded output digests byte-for-byte."""
    manifest = json.loads(Path(args.manifest).read_text())
    argv = list(manifest["argv"])
    with tempfile.TemporaryDirectory() as tmp:
        # redirect --out into the scratch directory, keeping file names
        for i, tok in enumerate(argv):
            if tok == "--out":
                argv[i + 1] = str(Path(tmp) / Path(argv[i + 1]).name)
        code = main(argv)
        ok = True
        for name, digest in manifest["outputs"].items():
            replayed = Path(tmp) / name
            actual = _sha256(replayed) if replayed.exists() else None
            match = actual == digest
            ok = ok and match
            print(f"{'PASS' if match else 'FAIL'} {name}")
        if code not in (0, 1):
            ok = False
    print("replay " + ("PASS" if ok else "FAIL"))
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# argument parsing


def _add_common(p, seed=True, out=True, threads=False):
    if seed:
        p.add_argument("--seed", type=int, default=None,
                       help="master seed; drawn from entropy when omitted")
    if out:
        p.add_argument("--out", required=True, help="output file path")
    if threads:
        p.add_argument("--threads", type=int, default=None,
                       help=f"worker threads (default ${THREADS_ENV} or 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lcdgraph",
        description="Preferential-attachment graphs via chord diagrams: "
        "generators, exact oracles, experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("enumerate", help="list all pairings of 2n points")
    p.add_argument("--n", type=int, required=True)
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("generate", help="generate one graph")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--variant", choices=("sequential", "urn", "pairing"),
                   default="sequential")
    p.add_argument("--replicate", type=int, default=0)
    p.add_argument("--format", choices=("csv",), default="csv")
    _add_common(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("oracle", help="evaluate one closed-form quantity")
    p.add_argument("formula", choices=(
        "prob-dk", "count-ns", "ratio-f", "mode-s01", "mode-s02",
        "tail-bound", "cond-prob", "expected-count", "lemma2-approx"))
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--s", type=int, default=0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--l", type=int, default=1)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("experiment", help="run a named experiment")
    exp = p.add_subparsers(dest="experiment_name", required=True)

    e = exp.add_parser("fraction")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--replicates", type=int, default=50)
    _add_common(e, threads=True)

    e = exp.add_parser("gamma")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--dlo", type=int, default=5)
    e.add_argument("--dhi", type=int, default=50)
    _add_common(e, threads=True)

    e = exp.add_parser("concentration")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--replicates", type=int, default=200)
    _add_common(e, threads=True)

    e = exp.add_parser("sums")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--d", type=int, required=True)
    e.add_argument("--beta", type=float, required=True)
    e.add_argument("--alpha", type=float, default=None)
    _add_common(e, threads=True)

    e = exp.add_parser("corollary")
    e.add_argument("--n-grid", default="10000,100000,1000000")
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--exponent", type=float, default=0.25)
    e.add_argument("--replicates", type=int, default=8)
    _add_common(e, threads=True)

    e = exp.add_parser("region")
    e.add_argument("--system", default="theorem1",
                   choices=tuple(BUILTIN_SYSTEMS) + ("combined",))
    e.add_argument("--inequalities", default=None,
                   help="file with one 'a b cmp c' inequality per line")
    _add_common(e, threads=True)

    e = exp.add_parser("equivalence")
    e.add_argument("--n", type=int, required=True)
    e.add_argument("--m", type=int, default=1)
    e.add_argument("--samples", type=int, default=10**6)
    _add_common(e, threads=True)

    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("replay", help="re-run a manifest and verify digests")
    p.add_argument("--manifest", required=True)
    p.set_defaults(func=cmd_replay)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
