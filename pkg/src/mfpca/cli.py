"""
Command-line front end for the reconstruction experiment and timing
benchmark.

Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 memory
guard tripped.
"""

import argparse
import os
import sys

from . import experiment, imaging, pca, plots
from .kernels import KernelKind

_METHOD_TOKENS = {k.value: k for k in KernelKind}


def build_parser():
    p = argparse.ArgumentParser(
        prog="mfpca",
        description=(
            "Robust PCA image reconstruction with multiplication-free "
            "l1-norm kernels: corrupt an image N ways, fit K principal "
            "components per kernel, reconstruct, and score PSNR."
        ),
    )
    p.add_argument(
        "--input",
        nargs="+",
        required=True,
        metavar="PATH",
        help="clean input image(s), PGM (or 8-bit grayscale PNG with Pillow)",
    )
    p.add_argument(
        "--methods",
        default="l2,mf,min1,min2",
        help="comma list from {l2, mf, min1, min2} (default: all)",
    )
    p.add_argument(
        "--noise",
        choices=[imaging.NoiseModel.TILE_OCCLUSION, imaging.NoiseModel.SALT_PEPPER],
        default=imaging.NoiseModel.TILE_OCCLUSION,
    )
    p.add_argument("--density", type=float, default=0.1, help="salt-pepper density")
    p.add_argument("--tiles", type=int, default=3, help="occluded tile count")
    p.add_argument("--tile-size", type=int, default=32, help="tile side in pixels")
    p.add_argument("--n", type=int, default=10, help="corrupted copies per seed")
    p.add_argument("--k", type=int, default=2, help="principal components")
    p.add_argument(
        "--mean",
        choices=[m.value for m in pca.MeanMode],
        default=pca.MeanMode.BEST_OF_THREE.value,
        help="centering vector choice ('best' picks by PSNR against the clean image)",
    )
    p.add_argument(
        "--index",
        default="0",
        help="which corrupted copy to reconstruct (0-based), or 'best'",
    )
    p.add_argument(
        "--seeds",
        default="0",
        help="comma list of 64-bit seeds; one experiment row per seed",
    )
    p.add_argument("--out-dir", default="out", help="reconstructed images + figures")
    p.add_argument("--csv", default=None, help="CSV path (default: <out-dir>/results.csv)")
    p.add_argument(
        "--max-dim",
        type=int,
        default=None,
        help="integer-downscale inputs so the longer side is at most this",
    )
    p.add_argument(
        "--timing",
        default=None,
        metavar="SIZES",
        help="run the timing benchmark at these comma-separated square sizes "
        "instead of the reconstruction experiment",
    )
    p.add_argument(
        "--timing-reps", type=int, default=3, help="runs per timing median"
    )
    p.add_argument(
        "--no-figures",
        action="store_true",
        help="skip rendering report figures next to the CSV",
    )
    p.add_argument("--quiet", action="store_true")
    return p


def parse_config(args):
    methods = []
    for tok in args.methods.split(","):
        tok = tok.strip()
        if tok not in _METHOD_TOKENS:
            raise ValueError("unknown method %r" % tok)
        methods.append(_METHOD_TOKENS[tok])
    seeds = tuple(int(s) for s in args.seeds.split(",") if s.strip())
    index = None if args.index == "best" else int(args.index)
    tiles_total = 16
    if args.noise == imaging.NoiseModel.TILE_OCCLUSION:
        # tile grid is derived from the image at run time; tiles_total is
        # validated there
        tiles_total = max(16, args.tiles)
    noise = imaging.NoiseSpec(
        model=args.noise,
        tiles_total=tiles_total,
        tiles_corrupted=args.tiles,
        tile_size=args.tile_size,
        density=args.density,
    )
    return experiment.ExperimentConfig(
        inputs=tuple(args.input),
        n_copies=args.n,
        k_components=args.k,
        noise=noise,
        methods=tuple(methods),
        mean_mode=pca.MeanMode(args.mean),
        seeds=seeds,
        out_dir=args.out_dir,
        reconstruct_index=index,
        max_dim=args.max_dim,
    )


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config = parse_config(args)
    except (ValueError, KeyError) as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2

    csv_path = args.csv or os.path.join(args.out_dir, "results.csv")
    log = (lambda msg: None) if args.quiet else (lambda msg: print(msg, flush=True))

    try:
        os.makedirs(args.out_dir, exist_ok=True)
        if args.timing is not None:
            sizes = [int(s) for s in args.timing.split(",") if s.strip()]
            if not sizes:
                print("configuration error: empty --timing list", file=sys.stderr)
                return 2
            rows = experiment.run_timing(config, sizes, reps=args.timing_reps)
            experiment.write_timing_csv(rows, csv_path)
            log("wrote %s" % csv_path)
            if not args.no_figures:
                for path in plots.render_report_figures(args.out_dir, timing_rows=rows):
                    log("wrote %s" % path)
        else:
            results = experiment.run_reconstruction(config, progress=log)
            experiment.write_results_csv(results, csv_path)
            log("wrote %s" % csv_path)
            if not args.no_figures:
                for path in plots.render_report_figures(args.out_dir, results=results):
                    log("wrote %s" % path)
    except experiment.MemoryGuardError as exc:
        print("memory guard: %s" % exc, file=sys.stderr)
        return 4
    except OSError as exc:
        print("I/O error: %s" % exc, file=sys.stderr)
        return 3
    except ValueError as exc:
        print("configuration error: %s" % exc, file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
