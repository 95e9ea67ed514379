"""Command-line front end.

    flowspec ingest      frames dir -> binary dataset + manifest
    flowspec pca         dataset -> PCA model, coordinates CSV, SVG scatter
    flowspec dmap        dataset -> diffusion model, coordinates CSV, SVG scatter
    flowspec stability   dataset -> repeated-run subspace-distance report
    flowspec decay       PCA + diffusion models -> normalized spectra CSV + SVG
    flowspec reconstruct PCA model + coordinates -> PGM frames

Every command records its fully resolved configuration (seeds, bandwidth,
oversampling, ...) in a <command>_run.json log so outputs are reproducible
from the log alone.  Outputs never embed timestamps.  Exit codes: 0 success,
1 usage error, 2 data error.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import dataset as ds
from . import diffusion, ingestion, pca, subspace, svgplot
from .linalg import ConvergenceError
from .rsvd import RsvdConfig

DMAP_N_CAP = 5000


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # spec'd exit codes: argparse defaults to 2 for usage errors, we use 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _epsilon_arg(text):
    if text == "auto":
        return "auto"
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"epsilon must be 'auto' or a number, got {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("epsilon must be positive")
    return value


def build_parser():
    parser = _Parser(prog="flowspec",
                     description="Frame-sequence dimensionality reduction toolchain")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=True):
        p.add_argument("--input", required=True, type=Path, help="input directory")
        p.add_argument("--output", required=output, type=Path, help="output directory")
        p.add_argument("--force", action="store_true",
                       help="overwrite existing outputs")

    p = sub.add_parser("ingest", help="decode PGM frames into a dataset")
    common(p)
    p.add_argument("--downsample", type=int, default=1, metavar="N",
                   help="block-average factor (default 1)")

    p = sub.add_parser("pca", help="fit PCA and export coordinates")
    common(p)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--method", choices=["exact", "stochastic"], default="stochastic")
    p.add_argument("--oversampling", type=int, default=10)
    p.add_argument("--power-iterations", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spectrum", type=int, default=100, metavar="N",
                   help="singular values to export for decay studies (default 100)")

    p = sub.add_parser("dmap", help="fit a diffusion map and export coordinates")
    common(p)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--t", type=int, default=2)
    p.add_argument("--epsilon", type=_epsilon_arg, default="auto")

    p = sub.add_parser("stability", help="repeated-run subspace stability study")
    common(p)
    p.add_argument("--q", type=int, default=3)
    p.add_argument("--runs", type=int, default=5)
    p.add_argument("--oversampling", type=int, default=10)
    p.add_argument("--power-iterations", type=int, default=0)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("decay", help="compare PCA and diffusion eigenvalue decay")
    common(p)
    p.add_argument("--decay-count", type=int, default=100)

    p = sub.add_parser("reconstruct", help="back-project coordinates to PGM frames")
    common(p)
    p.add_argument("--coords", type=Path, default=None,
                   help="coordinates CSV (default <input>/pca_coords.csv)")
    return parser


def _prepare_outputs(outdir, names, force):
    outdir.mkdir(parents=True, exist_ok=True)
    if not force:
        clashes = [n for n in names if (outdir / n).exists()]
        if clashes:
            raise FileExistsError(
                f"output file(s) already exist in {outdir}: {clashes}; "
                "pass --force to overwrite")
    return outdir


def _write_run_log(outdir, command, resolved):
    with open(outdir / f"{command}_run.json", "w") as fh:
        json.dump(resolved, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(row + "\n")


def _coords_rows(names, coords):
    rows = []
    for i in range(coords.shape[0]):
        label = names[i] if i < len(names) else str(i)
        rows.append(label + "," + ",".join(repr(float(c)) for c in coords[i]))
    return rows


def _load_dataset(indir):
    path = indir / "dataset.bin"
    if not path.exists():
        raise FileNotFoundError(
            f"{path} not found; run `flowspec ingest` first")
    return ds.read_dataset(path)


def cmd_ingest(args):
    seq = ingestion.load_frame_dir(args.input, downsample_factor=args.downsample)
    data = ingestion.assemble(seq)
    outdir = _prepare_outputs(args.output, ["dataset.bin", "dataset.bin.json"],
                              args.force)
    manifest = ds.write_dataset(outdir / "dataset.bin", data, seq.width,
                                seq.height, seq.source_names,
                                downsample_factor=args.downsample)
    _write_run_log(outdir, "ingest", {
        "input": str(args.input), "downsample": args.downsample,
        "p": manifest["p"], "n": manifest["n"],
        "width": manifest["width"], "height": manifest["height"],
        "sha256": manifest["sha256"],
    })
    print(f"ingested {manifest['n']} frames, p={manifest['p']}")
    return 0


def cmd_pca(args):
    data, manifest = _load_dataset(args.input)
    cfg = RsvdConfig(target_rank=args.q, oversampling=args.oversampling,
                     power_iterations=args.power_iterations, seed=args.seed)
    model = pca.fit(data, q=args.q, method=args.method,
                    cfg=cfg if args.method == "stochastic" else None)
    spectrum = pca.singular_spectrum(
        data, args.spectrum, method=args.method,
        cfg=cfg if args.method == "stochastic" else None)
    outdir = _prepare_outputs(
        args.output,
        ["pca_model.bin", "pca_model.bin.json", "pca_coords.csv",
         "pca_eigenvalues.csv", "pca_scatter.svg"],
        args.force)
    pca.save_model(model, outdir / "pca_model.bin")
    coords = pca.transform(model, data).T  # n x q
    header = "frame," + ",".join(f"c{i + 1}" for i in range(args.q))
    _write_csv(outdir / "pca_coords.csv", header,
               _coords_rows(manifest.get("frames", []), coords))
    _write_csv(outdir / "pca_eigenvalues.csv", "index,value",
               [f"{i},{float(v)!r}" for i, v in enumerate(spectrum)])
    shades = coords[:, 2] if args.q >= 3 else None
    svg = svgplot.scatter_svg(coords[:, 0].tolist(), coords[:, 1].tolist(),
                              None if shades is None else shades.tolist(),
                              title="PCA coordinates")
    (outdir / "pca_scatter.svg").write_text(svg)
    _write_run_log(outdir, "pca", {
        "input": str(args.input), "q": args.q, "method": args.method,
        "oversampling": args.oversampling,
        "power_iterations": args.power_iterations,
        "seed": args.seed if args.method == "stochastic" else None,
        "n": model.n_samples, "p": model.p,
        "sigma": [float(s) for s in model.sigma],
    })
    print(f"pca fit ({args.method}) q={args.q} on {model.n_samples} frames")
    return 0


def cmd_dmap(args):
    data, manifest = _load_dataset(args.input)
    n = data.shape[1]
    if n > DMAP_N_CAP:
        raise ValueError(f"dataset has n={n} frames, above the dmap cap {DMAP_N_CAP}")
    epsilon = None if args.epsilon == "auto" else args.epsilon
    model = diffusion.fit(data, epsilon=epsilon, t=args.t)
    emb = diffusion.embed(model, q=args.q, t=args.t)
    outdir = _prepare_outputs(
        args.output,
        ["dmap_model.bin", "dmap_model.bin.json", "dmap_eigenvalues.csv",
         "dmap_coords.csv", "dmap_scatter.svg"],
        args.force)
    diffusion.save_model(model, outdir / "dmap_model.bin")
    _write_csv(outdir / "dmap_eigenvalues.csv", "index,value",
               [f"{i},{float(v)!r}" for i, v in enumerate(model.eigenvalues)])
    header = "frame," + ",".join(f"c{i + 1}" for i in range(args.q))
    _write_csv(outdir / "dmap_coords.csv", header,
               _coords_rows(manifest.get("frames", []), emb.coords))
    shades = emb.coords[:, 2] if args.q >= 3 else None
    svg = svgplot.scatter_svg(emb.coords[:, 0].tolist(), emb.coords[:, 1].tolist(),
                              None if shades is None else shades.tolist(),
                              title=f"Diffusion map (t={args.t})")
    (outdir / "dmap_scatter.svg").write_text(svg)
    _write_run_log(outdir, "dmap", {
        "input": str(args.input), "q": args.q, "t": args.t,
        "epsilon_arg": "auto" if args.epsilon == "auto" else args.epsilon,
        "epsilon": model.epsilon, "n": n,
    })
    print(f"dmap fit t={args.t} q={args.q} epsilon={model.epsilon:.6g}")
    return 0


def cmd_stability(args):
    data, _ = _load_dataset(args.input)
    cfg = RsvdConfig(target_rank=args.q, oversampling=args.oversampling,
                     power_iterations=args.power_iterations, seed=args.seed)
    report = subspace.stability_study(data, q=args.q, runs=args.runs, cfg=cfg)
    outdir = _prepare_outputs(args.output, ["stability_report.json"], args.force)
    (outdir / "stability_report.json").write_text(report.to_json())
    label = args.input.name or "dataset"
    csv_path = outdir / "stability.csv"
    new_file = not csv_path.exists()
    with open(csv_path, "a", newline="") as fh:
        if new_file:
            fh.write("group,mean,std\n")
        fh.write(report.csv_row(label) + "\n")
    _write_run_log(outdir, "stability", {
        "input": str(args.input), "q": args.q, "runs": args.runs,
        "oversampling": args.oversampling,
        "power_iterations": args.power_iterations,
        "seeds": report.seeds,
    })
    print(f"stability mean={report.mean:.4f} std={report.std_dev:.4f} "
          f"over {args.runs} runs")
    return 0


def cmd_decay(args):
    spectrum_path = args.input / "pca_eigenvalues.csv"
    dmap_path = args.input / "dmap_model.bin"
    if not spectrum_path.exists():
        raise FileNotFoundError(
            f"{spectrum_path} not found; run `flowspec pca` on this directory first")
    if not dmap_path.exists():
        raise FileNotFoundError(
            f"{dmap_path} not found; run `flowspec dmap` on this directory first")
    sigma = np.array([float(line.split(",")[1])
                      for line in spectrum_path.read_text().splitlines()[1:]])
    dmap_model = diffusion.load_model(dmap_path)
    count = args.decay_count
    pca_curve = diffusion.eigen_decay(sigma, count)
    dmap_curve = dmap_model.decay(count)
    outdir = _prepare_outputs(args.output, ["decay.csv", "decay.svg"], args.force)
    rows = [f"{i},{float(v)!r},pca" for i, v in enumerate(pca_curve)]
    rows += [f"{i},{float(v)!r},diffusion" for i, v in enumerate(dmap_curve)]
    _write_csv(outdir / "decay.csv", "index,relative_value,method", rows)
    svg = svgplot.line_chart_svg(
        [("pca", pca_curve.tolist()), ("diffusion", dmap_curve.tolist())],
        title="Eigenvalue decay (normalized)", xlabel="index",
        ylabel="relative value")
    (outdir / "decay.svg").write_text(svg)
    _write_run_log(outdir, "decay", {
        "input": str(args.input), "decay_count": count,
        "pca_values": len(pca_curve), "diffusion_values": len(dmap_curve),
    })
    print(f"decay curves written ({len(pca_curve)} pca, {len(dmap_curve)} diffusion)")
    return 0


def _read_coords_csv(path):
    lines = Path(path).read_text().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty coordinates file")
    rows = []
    for line in lines[1:]:
        parts = line.split(",")
        rows.append([float(x) for x in parts[1:]])
    return np.array(rows)


def cmd_reconstruct(args):
    pca_path = args.input / "pca_model.bin"
    if not pca_path.exists():
        raise FileNotFoundError(
            f"{pca_path} not found; run `flowspec pca` on this directory first")
    model = pca.load_model(pca_path)
    coords_path = args.coords or (args.input / "pca_coords.csv")
    coords = _read_coords_csv(coords_path)
    if coords.ndim != 2 or coords.shape[1] != model.q:
        raise ValueError(
            f"coordinates have {coords.shape[1] if coords.ndim == 2 else '?'} "
            f"columns, model expects q={model.q}")
    with open(str(pca_path) + ".json") as fh:
        meta = json.load(fh)
    manifest_path = args.input / "dataset.bin.json"
    if manifest_path.exists():
        with open(manifest_path) as fh:
            dm = json.load(fh)
        width, height = dm["width"], dm["height"]
    else:
        raise FileNotFoundError(
            f"{manifest_path} not found; frame dimensions unknown")
    if width * height != meta["p"]:
        raise ValueError(
            f"model p={meta['p']} does not match frame size {width}x{height}")
    names = [f"recon_{i:04d}.pgm" for i in range(coords.shape[0])]
    outdir = _prepare_outputs(args.output, names, args.force)
    clamped = 0
    for i, name in enumerate(names):
        frame = pca.reconstruct(model, coords[i]).reshape((height, width))
        clamped += int(((frame < 0.0) | (frame > 1.0)).sum())
        ingestion.write_pgm(outdir / name, frame)
    _write_run_log(outdir, "reconstruct", {
        "input": str(args.input), "coords": str(coords_path),
        "frames": len(names), "clamped_values": clamped,
    })
    print(f"reconstructed {len(names)} frames, {clamped} values clamped")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "pca": cmd_pca,
    "dmap": cmd_dmap,
    "stability": cmd_stability,
    "decay": cmd_decay,
    "reconstruct": cmd_reconstruct,
}

_DATA_ERRORS = (FileNotFoundError, FileExistsError, ValueError, OSError,
                ConvergenceError, ingestion.PgmError)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"flowspec: error: {exc}", file=sys.stderr)
        return 1
    try:
        return _COMMANDS[args.command](args)
    except _DATA_ERRORS as exc:
        print(f"flowspec {args.command}: {exc}", file=sys.stderr)
        return 2


def entry():
    sys.exit(main())


if __name__ == "__main__":
    entry()
