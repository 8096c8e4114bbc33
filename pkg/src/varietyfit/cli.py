"""Command-line driver: data -> fit -> {sample, singular-filter, compare, export}.

Every successful command writes a JSON manifest beside its output recording
the command, all flags, timings, and a result summary, so any published
number can be replayed. Randomized commands require an explicit --seed.

Exit codes: 0 success, 2 input or usage errors, 3 budget or convergence
failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .cloud import (
    CloudFormatError,
    PointCloud,
    load_cloud,
    normalize_to_unit_cube,
    save_cloud,
)
from .datasets import gen_noisy_line, gen_sphere_plane, gen_sphere_plane_singular
from .fitting import RationalizationError, fit_map, rationalize
from .modelio import ModelFile, export_singular_script, load_model, save_model
from .sampling import ProposalBudgetError, SamplerConfig, direct_sample, rejection_sample
from .singular import singularity_filter
from .transport import EXACT_SIZE_CAP, wasserstein_exact, wasserstein_sinkhorn

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _manifest_path(output) -> Path:
    out = Path(output)
    if out.is_dir():
        return out / "manifest.json"
    return out.with_name(out.name + ".manifest.json")


def _write_manifest(output, args, results, started, t0) -> None:
    doc = {
        "command": args.command,
        "arguments": {
            k: v for k, v in vars(args).items() if k not in ("func", "command")
        },
        "seed": getattr(args, "seed", None),
        "started_utc": started,
        "duration_s": time.perf_counter() - t0,
        "results": results,
    }
    path = _manifest_path(output)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, default=str)
        fh.write("\n")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _generate(kind, m, seed, sigma, plane_fraction) -> PointCloud:
    if kind == "sphere-plane":
        return gen_sphere_plane(m, plane_fraction, seed=seed, noise_sigma=sigma)
    if kind == "sphere-plane-singular":
        return gen_sphere_plane_singular(m, seed=seed)
    if kind == "noisy-line":
        return gen_noisy_line(m, sigma, seed=seed)
    raise ValueError(f"unknown generator kind {kind!r}")


def cmd_gen(args) -> int:
    started, t0 = _now(), time.perf_counter()
    cloud = _generate(args.kind, args.m, args.seed, args.sigma, args.plane_fraction)
    save_cloud(cloud, args.output)
    print(f"wrote {cloud.m} x {cloud.dim} cloud to {args.output}")
    _write_manifest(
        args.output, args, {"m": cloud.m, "dim": cloud.dim}, started, t0
    )
    return EXIT_OK


def cmd_fit(args) -> int:
    started, t0 = _now(), time.perf_counter()
    cloud = load_cloud(args.input, header=args.header)
    record = None
    if args.normalize:
        cloud = normalize_to_unit_cube(cloud)
        record = cloud.normalization
    fit = fit_map(cloud, args.degree, multiplicity_tol=args.multiplicity_tol)
    model = ModelFile.from_fit(
        fit, intersected=args.intersected, seed=args.seed, normalization=record
    )
    save_model(model, args.output)
    print(
        f"lambda={fit.lam:.6e} kernel_dim={fit.kernel_dim} "
        f"trace={fit.trace:.6e} residual={fit.residual:.3e}"
    )
    _write_manifest(
        args.output,
        args,
        {
            "lambda": fit.lam,
            "kernel_dim": fit.kernel_dim,
            "trace": fit.trace,
            "residual": fit.residual,
            "m": fit.m,
        },
        started,
        t0,
    )
    return EXIT_OK


def cmd_sample(args) -> int:
    started, t0 = _now(), time.perf_counter()
    model = load_model(args.model)
    f = model.polynomial()
    cfg = SamplerConfig(
        seed=args.seed,
        target_m=args.m,
        eta=args.eta,
        max_proposals=args.max_proposals,
    )
    sampler = direct_sample if args.method == "direct" else rejection_sample
    cloud, stats = sampler(f, cfg, full_output=True)
    save_cloud(cloud, args.output)
    print(
        f"wrote {cloud.m} points to {args.output} "
        f"(acceptance rate {stats['acceptance_rate']:.3g})"
    )
    _write_manifest(args.output, args, stats, started, t0)
    return EXIT_OK


def cmd_singular(args) -> int:
    started, t0 = _now(), time.perf_counter()
    model = load_model(args.model)
    cloud = load_cloud(args.input, header=args.header)
    if args.eta is not None and args.epsilon <= args.eta:
        print(
            f"warning: epsilon={args.epsilon} <= eta={args.eta}; the filter "
            "guarantee needs epsilon > eta",
            file=sys.stderr,
        )
    report = singularity_filter(model.polynomial(), cloud, args.epsilon)
    save_cloud(report.accepted, args.output)
    if args.norms_output:
        np.savetxt(args.norms_output, report.gradient_norms, fmt="%.17g")
    print(f"accepted {report.accepted_count} of {cloud.m} points")
    q = np.percentile(report.gradient_norms, [1, 5, 25, 50, 75, 95, 99])
    _write_manifest(
        args.output,
        args,
        {
            "accepted_count": report.accepted_count,
            "input_count": cloud.m,
            "gradient_norm_percentiles": {
                p: float(v) for p, v in zip([1, 5, 25, 50, 75, 95, 99], q)
            },
        },
        started,
        t0,
    )
    return EXIT_OK


def _compare(a: PointCloud, b: PointCloud, method: str, reg):
    if method == "auto":
        method = (
            "exact" if a.m == b.m and a.m <= EXACT_SIZE_CAP else "sinkhorn"
        )
    if method == "exact":
        return wasserstein_exact(a, b)
    if reg is None:
        sq = ((a.points[:, None, :] - b.points[None, :, :]) ** 2).sum(axis=-1)
        reg = 0.002 * float(np.median(sq))
    return wasserstein_sinkhorn(a, b, reg=reg)


def cmd_compare(args) -> int:
    started, t0 = _now(), time.perf_counter()
    a = load_cloud(args.input_a, header=args.header)
    b = load_cloud(args.input_b, header=args.header)
    plan = _compare(a, b, args.method, args.reg)
    if plan.method == "sinkhorn" and not plan.converged:
        print(
            f"error: sinkhorn did not converge in {plan.iterations} iterations "
            f"(marginal error {plan.marginal_error:.3e})",
            file=sys.stderr,
        )
        return EXIT_BUDGET
    print(f"wasserstein {plan.cost:.6f} ({plan.method})")
    results = {
        "distance": plan.cost,
        "method": plan.method,
        "iterations": plan.iterations,
        "marginal_error": plan.marginal_error,
    }
    with open(args.output, "w", encoding="utf-8") as fh:
        json.dump(results, fh, indent=2)
        fh.write("\n")
    _write_manifest(args.output, args, results, started, t0)
    return EXIT_OK


def cmd_export_algebra(args) -> int:
    started, t0 = _now(), time.perf_counter()
    model = load_model(args.model)
    poly = model.polynomial().normalized()
    rational = rationalize(
        poly, max_denominator=args.max_denominator, drop_tol=args.drop_tol
    )
    script = export_singular_script(rational)
    with open(args.output, "w", encoding="utf-8") as fh:
        fh.write(script)
    print(f"wrote algebra script to {args.output}")
    _write_manifest(
        args.output, args, {"scale": rational.scale}, started, t0
    )
    return EXIT_OK


def cmd_pipeline(args) -> int:
    started, t0 = _now(), time.perf_counter()
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    degrees = [int(d) for d in args.degrees.split(",")]

    cloud = _generate(args.kind, args.m, args.seed, args.sigma, args.plane_fraction)
    save_cloud(cloud, outdir / "omega.csv")
    if args.reference:
        reference = load_cloud(args.reference, header=args.header)
    elif args.sigma > 0:
        reference = _generate(args.kind, args.m, args.seed, 0.0, args.plane_fraction)
    else:
        reference = cloud
    save_cloud(reference, outdir / "reference.csv")

    rows = []
    for degree in degrees:
        fit = fit_map(cloud, degree)
        model = ModelFile.from_fit(fit, seed=args.seed)
        save_model(model, outdir / f"model_D{degree}.json")
        cfg = SamplerConfig(
            seed=args.seed + 1000 * degree,
            target_m=args.m,
            eta=args.eta,
            max_proposals=args.max_proposals,
        )
        f = model.polynomial()
        resampled, stats = direct_sample(f, cfg, full_output=True)
        save_cloud(resampled, outdir / f"resampled_D{degree}.csv")
        report = singularity_filter(f, resampled, args.epsilon)
        if report.accepted_count:
            save_cloud(report.accepted, outdir / f"singular_D{degree}.csv")
        plan = _compare(reference, resampled, args.compare_method, args.reg)
        rows.append(
            {
                "D": degree,
                "lambda": fit.lam,
                "kernel_dim": fit.kernel_dim,
                "wasserstein": plan.cost,
                "singular_count": report.accepted_count,
                "acceptance_rate": stats["acceptance_rate"],
            }
        )
        print(
            f"D={degree}: lambda={fit.lam:.3e} kernel_dim={fit.kernel_dim} "
            f"W={plan.cost:.4f} singular={report.accepted_count}"
        )

    header = ["D", "lambda", "kernel_dim", "wasserstein", "singular_count", "acceptance_rate"]
    with open(outdir / "distances.csv", "w", encoding="utf-8") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(f"{row[k]:.17g}" if isinstance(row[k], float) else str(row[k]) for k in header) + "\n")
    _write_manifest(outdir, args, {"table": rows}, started, t0)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="varietyfit",
        description="Fit an algebraic variety to a point cloud and analyze it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a benchmark point cloud")
    p.add_argument(
        "kind", choices=["sphere-plane", "sphere-plane-singular", "noisy-line"]
    )
    p.add_argument("--m", type=int, required=True, help="number of points")
    p.add_argument("--sigma", type=float, default=0.0, help="noise std dev")
    p.add_argument("--plane-fraction", type=float, default=0.5)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("fit", help="fit a polynomial model to a cloud")
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--degree", "-D", type=int, required=True)
    p.add_argument("--intersected", action="store_true")
    p.add_argument("--multiplicity-tol", type=float, default=None)
    p.add_argument("--normalize", action="store_true", help="min-max map into [0,1]^n first")
    p.add_argument("--header", action="store_true", help="input CSV has a header row")
    p.add_argument("--seed", type=int, default=None, help="provenance seed stored in the model")
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("sample", help="sample a cloud from a fitted model")
    p.add_argument("--model", required=True)
    p.add_argument("--method", choices=["direct", "rejection"], default="direct")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--eta", type=float, default=1e-3)
    p.add_argument("--max-proposals", type=int, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("singular", help="filter a cloud to near-singular points")
    p.add_argument("--model", required=True)
    p.add_argument("--input", "-i", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--eta", type=float, default=None, help="eta used to draw the input cloud")
    p.add_argument("--header", action="store_true")
    p.add_argument("--norms-output", default=None)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("compare", help="Wasserstein distance between two clouds")
    p.add_argument("--input-a", required=True)
    p.add_argument("--input-b", required=True)
    p.add_argument("--method", choices=["exact", "sinkhorn", "auto"], default="auto")
    p.add_argument("--reg", type=float, default=None)
    p.add_argument("--header", action="store_true")
    p.add_argument("--output", "-o", required=True, help="metrics JSON path")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("export-algebra", help="emit a computer-algebra script for a model")
    p.add_argument("--model", required=True)
    p.add_argument("--max-denominator", type=int, default=64)
    p.add_argument("--drop-tol", type=float, default=1e-6)
    p.add_argument("--output", "-o", required=True)
    p.set_defaults(func=cmd_export_algebra)

    p = sub.add_parser(
        "pipeline", help="gen -> fit -> sample -> singular -> compare, per degree"
    )
    p.add_argument("--kind", default="sphere-plane",
                   choices=["sphere-plane", "sphere-plane-singular", "noisy-line"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--plane-fraction", type=float, default=0.5)
    p.add_argument("--degrees", default="1,2,3", help="comma-separated degree sweep")
    p.add_argument("--eta", type=float, default=1e-3)
    p.add_argument("--epsilon", type=float, default=0.02)
    p.add_argument("--max-proposals", type=int, default=None)
    p.add_argument("--compare-method", choices=["exact", "sinkhorn", "auto"], default="auto")
    p.add_argument("--reg", type=float, default=None)
    p.add_argument("--reference", default=None, help="reference cloud CSV (default: noise-free regeneration)")
    p.add_argument("--header", action="store_true")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--outdir", required=True)
    p.set_defaults(func=cmd_pipeline)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ProposalBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (CloudFormatError, RationalizationError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
