"""Command-line front end: denoising runs, parameter sweeps, noise table.

All numeric results are emitted as CSV/JSON files; plotting is left to
downstream tools.  Outputs are deterministic for a fixed spec and seed.
"""

import argparse
import concurrent.futures
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import imaging, metrics, solvers
from .optics import AmplifierNoiseModel, REFERENCE_NOISE_TABLE

TRACE_SCHEMA = "# opticaltv-trace csv-schema=1"
SWEEP_SCHEMA = "# opticaltv-sweep csv-schema=1"

_DEFAULTS = {
    "input": None,
    "algo": "admm",
    "noisy": False,
    "gamma": 10.0,
    "gamma1": 0.1,
    "gamma2": 1.0,
    "lam": 0.03,
    "iters": 50,
    "patch": 16,
    "sigma": 10.0 / 255.0,
    "seed": 0,
    "reps": 1,
    "out": "out",
    "grid": None,
    "workers": 4,
    "noise_figure": 2.0,
    "frequency": 1.94e14,
    "bandwidth": 1.0e10,
    "sim_scale": 1000.0,
}


def _resolve_spec(args):
    """Merge defaults, config file values, and explicit flags (flags win)."""
    spec = dict(_DEFAULTS)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path) as f:
            file_values = json.load(f)
        unknown = set(file_values) - set(spec)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        spec.update(file_values)
    for key in spec:
        value = getattr(args, key, None)
        if value is not None:
            spec[key] = value
    return spec


def _noise_model(spec):
    return AmplifierNoiseModel(
        noise_figure=spec["noise_figure"],
        frequency=spec["frequency"],
        bandwidth=spec["bandwidth"],
        sim_scale=spec["sim_scale"],
    )


def _solver_config(spec, noisy, seed):
    return solvers.SolverConfig(
        lam=spec["lam"],
        gamma=spec["gamma"],
        gamma1=spec["gamma1"],
        gamma2=spec["gamma2"],
        iterations=spec["iters"],
        noise_enabled=noisy,
        noise_model=_noise_model(spec),
        seed=seed,
    )


def _degrade_rng(seed):
    # separate stream from the per-patch solver streams
    return np.random.default_rng(np.random.SeedSequence([int(seed), 2**31]))


def _fmt(value):
    if isinstance(value, float) and math.isinf(value):
        return "exact"
    return repr(float(value))


def _write_trace_csv(path, traces):
    """Aggregate per-patch traces into one per-iteration CSV."""
    iters = len(traces[0].objective)
    obj = np.sum([t.objective for t in traces], axis=0)
    have_metrics = bool(traces[0].psnr)
    psnr_mean = np.mean([t.psnr for t in traces], axis=0) if have_metrics else None
    ssim_mean = np.mean([t.ssim for t in traces], axis=0) if have_metrics else None
    with open(path, "w", newline="") as f:
        f.write(TRACE_SCHEMA + "\n")
        f.write("iteration,objective,psnr,ssim\n")
        for k in range(iters):
            p = _fmt(psnr_mean[k]) if have_metrics else ""
            s = _fmt(ssim_mean[k]) if have_metrics else ""
            f.write(f"{k + 1},{_fmt(obj[k])},{p},{s}\n")


def _patch_report(original, image, patch_size):
    ref = imaging.patchify(original, patch_size).patches
    got = imaging.patchify(image, patch_size).patches
    ps = [metrics.psnr(r, g) for r, g in zip(ref, got)]
    ss = [metrics.ssim(r, g, global_window=True) for r, g in zip(ref, got)]
    return metrics.aggregate_report(ps, ss)


def _echo_config(outdir, spec, command):
    echo = dict(spec, command=command)
    with open(outdir / "config.json", "w") as f:
        json.dump(echo, f, indent=2, sort_keys=True)
        f.write("\n")


def _run_once(original, spec, algo, noisy, seed):
    """One degrade-and-restore cycle; returns (observed, restored, traces)."""
    observed = imaging.degrade(original, spec["sigma"], rng=_degrade_rng(seed))
    cfg = _solver_config(spec, noisy, seed)
    restored, traces = imaging.restore_image(
        observed, algo, cfg, patch_size=spec["patch"], reference=original
    )
    return observed, restored, traces


def cmd_denoise(args):
    spec = _resolve_spec(args)
    if not spec["input"]:
        raise ValueError("--input is required")
    original = imaging.load_image(spec["input"])
    outdir = Path(spec["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    _echo_config(outdir, spec, "denoise")
    start = time.perf_counter()
    rep_summaries = []
    for rep in range(spec["reps"]):
        seed = spec["seed"] + rep
        suffix = f"_r{rep}" if spec["reps"] > 1 else ""
        observed, restored, traces = _run_once(
            original, spec, spec["algo"], spec["noisy"], seed
        )
        imaging.save_image(observed, outdir / f"observed{suffix}.pgm")
        imaging.save_image(restored, outdir / f"restored{suffix}.pgm")
        _write_trace_csv(outdir / f"trace{suffix}.csv", traces)
        obs_rep = _patch_report(original, observed, spec["patch"])
        res_rep = _patch_report(original, restored, spec["patch"])
        rep_summaries.append({
            "seed": seed,
            "observed_psnr": obs_rep.mean_psnr,
            "observed_ssim": obs_rep.mean_ssim,
            "restored_psnr": res_rep.mean_psnr,
            "restored_ssim": res_rep.mean_ssim,
        })
    summary = {
        "algorithm": spec["algo"],
        "noisy": bool(spec["noisy"]),
        "reps": rep_summaries,
        "mean_observed_psnr": float(np.mean([r["observed_psnr"] for r in rep_summaries])),
        "mean_restored_psnr": float(np.mean([r["restored_psnr"] for r in rep_summaries])),
        "mean_observed_ssim": float(np.mean([r["observed_ssim"] for r in rep_summaries])),
        "mean_restored_ssim": float(np.mean([r["restored_ssim"] for r in rep_summaries])),
        "runtime_seconds": time.perf_counter() - start,
    }
    with open(outdir / "summary.json", "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


def _sweep_cell(original, spec, algo, param, noisy, rep):
    seed = spec["seed"] + rep
    cell_spec = dict(spec)
    if algo == "admm":
        cell_spec["gamma"] = param
    else:
        cell_spec["gamma2"] = param
    _, restored, traces = _run_once(original, cell_spec, algo, noisy, seed)
    rows = []
    obj = np.sum([t.objective for t in traces], axis=0)
    psnr_mean = np.mean([t.psnr for t in traces], axis=0)
    ssim_mean = np.mean([t.ssim for t in traces], axis=0)
    mode = "noisy" if noisy else "noiseless"
    for k in range(len(obj)):
        rows.append((algo, param, mode, seed, k + 1,
                     _fmt(obj[k]), _fmt(psnr_mean[k]), _fmt(ssim_mean[k])))
    return rows


def cmd_sweep(args):
    spec = _resolve_spec(args)
    if not spec["input"]:
        raise ValueError("--input is required")
    if spec["grid"]:
        grid = [float(v) for v in str(spec["grid"]).split(",")]
    else:
        grid = [0.1, 0.5, 1.0, 5.0, 10.0] if spec["algo"] == "admm" else [0.5, 1.0, 5.0]
    original = imaging.load_image(spec["input"])
    outdir = Path(spec["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    _echo_config(outdir, dict(spec, grid=grid), "sweep")
    cells = [
        (param, noisy, rep)
        for param in grid
        for noisy in (False, True)
        for rep in range(spec["reps"])
    ]
    results = {}
    with concurrent.futures.ThreadPoolExecutor(max_workers=spec["workers"]) as pool:
        futures = {
            pool.submit(_sweep_cell, original, spec, spec["algo"], param, noisy, rep):
            (param, noisy, rep)
            for param, noisy, rep in cells
        }
        for fut in concurrent.futures.as_completed(futures):
            results[futures[fut]] = fut.result()
    with open(outdir / "sweep.csv", "w", newline="") as f:
        f.write(SWEEP_SCHEMA + "\n")
        f.write("algorithm,parameter,mode,seed,iteration,objective,psnr,ssim\n")
        for key in cells:  # deterministic order regardless of completion order
            for row in results[key]:
                f.write(",".join(str(v) for v in row) + "\n")
    # pivoted summary: final-iteration metrics averaged over seeds
    with open(outdir / "summary.csv", "w", newline="") as f:
        f.write(SWEEP_SCHEMA + "\n")
        f.write("algorithm,parameter,mode,mean_final_psnr,mean_final_ssim\n")
        for param in grid:
            for noisy in (False, True):
                mode = "noisy" if noisy else "noiseless"
                finals_p, finals_s = [], []
                for rep in range(spec["reps"]):
                    last = results[(param, noisy, rep)][-1]
                    finals_p.append(float(last[6]) if last[6] != "exact" else math.inf)
                    finals_s.append(float(last[7]))
                f.write(
                    f"{spec['algo']},{param},{mode},"
                    f"{_fmt(np.mean(finals_p))},{_fmt(np.mean(finals_s))}\n"
                )
    return 0


def cmd_noise_table(args):
    spec = _resolve_spec(args)
    model = _noise_model(spec)
    print("gain  computed_power  reference_power  relative_error")
    for gain, reference in REFERENCE_NOISE_TABLE:
        computed = model.ase_noise_power(gain)
        rel = abs(computed - reference) / reference
        print(f"{gain:4d}  {computed:.6e}    {reference:.6e}     {rel:.4%}")
    return 0


def cmd_compare(args):
    spec = _resolve_spec(args)
    if not spec["input"]:
        raise ValueError("--input is required")
    original = imaging.load_image(spec["input"])
    outdir = Path(spec["out"])
    outdir.mkdir(parents=True, exist_ok=True)
    _echo_config(outdir, spec, "compare")
    seed = spec["seed"]
    observed = imaging.degrade(original, spec["sigma"], rng=_degrade_rng(seed))
    imaging.save_image(observed, outdir / "observed.pgm")
    obs_rep = _patch_report(original, observed, spec["patch"])
    summary = {
        "observed": {"psnr": obs_rep.mean_psnr, "ssim": obs_rep.mean_ssim},
    }
    for algo in ("admm", "pds"):
        for noisy in (False, True):
            cfg = _solver_config(spec, noisy, seed)
            restored, traces = imaging.restore_image(
                observed, algo, cfg, patch_size=spec["patch"], reference=original
            )
            mode = "noisy" if noisy else "noiseless"
            name = f"{algo}_{mode}"
            imaging.save_image(restored, outdir / f"restored_{name}.pgm")
            _write_trace_csv(outdir / f"trace_{name}.csv", traces)
            rep = _patch_report(original, restored, spec["patch"])
            summary[name] = {"psnr": rep.mean_psnr, "ssim": rep.mean_ssim}
    with open(outdir / "summary.json", "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
    return 0


def _add_common_flags(p, with_image_flags=True):
    p.add_argument("--config", help="JSON config file; flags override its values")
    if with_image_flags:
        p.add_argument("--input", help="input image (.pgm or .png, 8-bit grayscale)")
        p.add_argument("--algo", choices=["admm", "pds"])
        p.add_argument("--noisy", action="store_const", const=True, default=None,
                       help="simulate optical-amplifier noise")
        p.add_argument("--gamma", type=float, help="ADMM step size")
        p.add_argument("--gamma1", type=float, help="PDS primal step size")
        p.add_argument("--gamma2", type=float, help="PDS dual step size")
        p.add_argument("--lambda", dest="lam", type=float, help="regularization weight")
        p.add_argument("--iters", type=int, help="iteration count")
        p.add_argument("--patch", type=int, help="patch size (must divide dimensions)")
        p.add_argument("--sigma", type=float, help="observation noise std")
        p.add_argument("--seed", type=int, help="base RNG seed")
        p.add_argument("--reps", type=int, help="number of seeds to run")
        p.add_argument("--out", help="output directory")
    p.add_argument("--noise-figure", dest="noise_figure", type=float)
    p.add_argument("--frequency", type=float)
    p.add_argument("--bandwidth", type=float)
    p.add_argument("--sim-scale", dest="sim_scale", type=float)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="opticaltv",
        description="TV-regularized image restoration with optical-circuit noise simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("denoise", help="restore one degraded image")
    _add_common_flags(p)
    p.set_defaults(func=cmd_denoise)

    p = sub.add_parser("sweep", help="parameter sweep crossed with noiseless/noisy")
    _add_common_flags(p)
    p.add_argument("--grid", help="comma-separated parameter values "
                                  "(gamma for admm, gamma2 for pds)")
    p.add_argument("--workers", type=int, help="concurrent sweep cells")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("noise-table", help="print the amplifier ASE noise table")
    _add_common_flags(p, with_image_flags=False)
    p.set_defaults(func=cmd_noise_table)

    p = sub.add_parser("compare", help="run ADMM and PDS on one input")
    _add_common_flags(p)
    p.set_defaults(func=cmd_compare)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:
        print(f"opticaltv: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
