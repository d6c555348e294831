"""Command-line pipeline: ``gen`` -> ``train`` -> ``analyze``.

Exit codes: 0 success, 1 domain or data error, 2 usage error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, datagen, index, io, som, umatrix
from .errors import CsstError

LOGGER = logging.getLogger("csst")


def _sha256(path: Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _write_manifest(path: Path, command: str, params: dict, inputs: Sequence[Path], outputs: Sequence[Path], **extra):
    # basenames only, so runs in different directories stay byte-identical
    doc = {
        "command": command,
        "version": __version__,
        "parameters": params,
        "inputs": {Path(p).name: _sha256(p) for p in inputs},
        "outputs": {Path(p).name: _sha256(p) for p in outputs},
    }
    doc.update(extra)
    io.atomic_write(path, json.dumps(doc, indent=2, sort_keys=True) + "\n")


def _manifest_path_for(out: Path) -> Path:
    return out.with_name(out.stem + ".manifest.json")


def cmd_gen(args: argparse.Namespace) -> int:
    out = Path(args.out)
    if args.kind == "peaks":
        ds = datagen.gen_peaks(args.n)
        params = {"kind": "peaks", "n": args.n}
    else:
        ds = datagen.gen_gaussian_pair(args.n, args.sep, args.bridge, args.seed)
        params = {"kind": "gauss", "n": args.n, "sep": args.sep, "bridge": args.bridge, "seed": args.seed}
    io.write_dataset_csv(ds, out)
    _write_manifest(_manifest_path_for(out), "gen", params, [], [out], n_points=ds.n_points, dim=ds.dim)
    print(f"wrote {ds.n_points} points of dimension {ds.dim} to {out}")
    return 0


def _schedule_from_args(args: argparse.Namespace) -> som.TrainSchedule:
    base = som.default_schedule(args.rows, args.cols)
    return som.TrainSchedule(
        rough_epochs=args.rough_epochs if args.rough_epochs is not None else base.rough_epochs,
        fine_epochs=args.fine_epochs if args.fine_epochs is not None else base.fine_epochs,
        sigma_start=args.sigma_start if args.sigma_start is not None else base.sigma_start,
        sigma_mid=args.sigma_mid if args.sigma_mid is not None else base.sigma_mid,
        sigma_end=args.sigma_end if args.sigma_end is not None else base.sigma_end,
    )


def cmd_train(args: argparse.Namespace) -> int:
    data_path = Path(args.data)
    out_dir = Path(args.out_dir)
    ds = io.read_dataset_csv(data_path)
    schedule = _schedule_from_args(args)

    init = som.init_codebook_linear(ds, args.rows, args.cols)
    qe_before = som.quantization_error(init, ds)
    trained = som.train_batch(init, ds, schedule)
    qe_after = som.quantization_error(trained, ds)
    LOGGER.info("quantization error %.6g -> %.6g", qe_before, qe_after)

    outputs = [out_dir / "codebook.json"]
    io.write_codebook_json(trained, outputs[0])
    if args.rows >= 2 and args.cols >= 2:
        u = umatrix.compute_umatrix(trained)
        outputs += [out_dir / "umatrix.csv", out_dir / "umatrix.pgm"]
        io.write_grid_csv(u, outputs[1])
        io.write_pgm_heatmap(u, outputs[2])

    params = {
        "seed": args.seed,
        "rows": args.rows,
        "cols": args.cols,
        "init": "linear",
        "rough_epochs": schedule.rough_epochs,
        "fine_epochs": schedule.fine_epochs,
        "sigma_start": schedule.sigma_start,
        "sigma_mid": schedule.sigma_mid,
        "sigma_end": schedule.sigma_end,
    }
    _write_manifest(
        out_dir / "train_manifest.json", "train", params, [data_path], outputs,
        quantization_error_before=qe_before, quantization_error_after=qe_after,
    )
    print(f"trained {args.rows}x{args.cols} map: quantization error {qe_before:.6g} -> {qe_after:.6g}")
    return 0


def _parse_regions(text: str) -> list[int]:
    try:
        regions = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"regions must be comma-separated integers, got {text!r}") from None
    if not regions:
        raise argparse.ArgumentTypeError("empty region list")
    if len(set(regions)) != len(regions):
        raise argparse.ArgumentTypeError(f"duplicate region indices in {text!r}")
    return regions


def cmd_analyze(args: argparse.Namespace) -> int:
    data_path = Path(args.data)
    cb_path = Path(args.codebook)
    out_dir = Path(args.out_dir)
    ds = io.read_dataset_csv(data_path)
    codebook = io.read_codebook_json(cb_path)
    assignment = som.assign_all(codebook, ds)

    if args.regions is not None:
        regions = args.regions
        selection = "manual"
        bad = [j for j in regions if not 0 <= j < codebook.n_neurons]
        if bad:
            raise CsstError(f"region indices {bad} outside [0, {codebook.n_neurons})")
    else:
        regions = index.select_regions(assignment, args.m)
        selection = "top-hits"

    euclid = index.euclidean_matrix(codebook, regions)
    csst = index.csst_matrix(ds, assignment, codebook, regions, args.k, args.min_support)

    outputs = [out_dir / name for name in ("euclid.csv", "csst.csv", "euclid.pgm", "csst.pgm")]
    io.write_matrix_csv(io.MatrixFile(regions, euclid), outputs[0])
    io.write_matrix_csv(io.MatrixFile(regions, csst), outputs[1])
    io.write_pgm_heatmap(euclid, outputs[2])
    io.write_pgm_heatmap(np.nan_to_num(csst, nan=0.0), outputs[3])

    n_absent = int(np.isnan(csst).sum() // 2)
    params = {
        "seed": args.seed,
        "k": args.k,
        "min_support": args.min_support,
        "m": len(regions),
        "selection": selection,
        "regions": regions,
    }
    _write_manifest(
        out_dir / "analyze_manifest.json", "analyze", params, [data_path, cb_path], outputs,
        region_hits=[int(assignment.hits_of[j]) for j in regions], absent_pairs=n_absent,
    )
    print(f"analyzed {len(regions)} regions (k={args.k}); {n_absent} pairs below min support")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="csst", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a dataset")
    gen_sub = gen.add_subparsers(dest="kind", required=True)
    peaks = gen_sub.add_parser("peaks", help="peaks surface sampled on an n x n grid")
    peaks.add_argument("--n", type=int, default=49)
    peaks.add_argument("--seed", type=int, default=0, help="recorded only; the surface is not random")
    peaks.add_argument("--out", required=True)
    gauss = gen_sub.add_parser("gauss", help="two Gaussian clusters with a bridge")
    gauss.add_argument("--n", type=int, default=500, help="points per cluster")
    gauss.add_argument("--sep", type=float, default=10.0)
    gauss.add_argument("--bridge", type=float, default=0.0)
    gauss.add_argument("--seed", type=int, default=0)
    gauss.add_argument("--out", required=True)
    for p in (peaks, gauss):
        p.set_defaults(func=cmd_gen)

    train = sub.add_parser("train", help="train a SOM and write codebook + U-matrix")
    train.add_argument("--data", required=True)
    train.add_argument("--out-dir", required=True)
    train.add_argument("--rows", type=int, default=30)
    train.add_argument("--cols", type=int, default=30)
    train.add_argument("--rough-epochs", type=int)
    train.add_argument("--fine-epochs", type=int)
    train.add_argument("--sigma-start", type=float)
    train.add_argument("--sigma-mid", type=float)
    train.add_argument("--sigma-end", type=float)
    train.add_argument("--seed", type=int, default=0, help="recorded only; linear init is deterministic")
    train.set_defaults(func=cmd_train)

    analyze = sub.add_parser("analyze", help="Euclidean and CSST matrices over selected regions")
    analyze.add_argument("--data", required=True)
    analyze.add_argument("--codebook", required=True)
    analyze.add_argument("--out-dir", required=True)
    analyze.add_argument("--m", type=int, default=16, help="number of auto-selected regions")
    analyze.add_argument("--regions", type=_parse_regions, help="comma-separated neuron indices")
    analyze.add_argument("--k", type=int, default=index.DEFAULT_K)
    analyze.add_argument("--min-support", type=int, default=index.DEFAULT_MIN_SUPPORT)
    analyze.add_argument("--seed", type=int, default=0, help="recorded only")
    analyze.set_defaults(func=cmd_analyze)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except (CsstError, OSError) as exc:
        print(f"csst: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
