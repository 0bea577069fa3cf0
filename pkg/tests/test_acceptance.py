"""
Acceptance gate: one test per criterion, each printing a PASS/FAIL line
with the measured margin.  Run with `pytest tests/test_acceptance.py -s`
to see the lines as they complete; the denoising criteria dominate the
runtime (several minutes at image scale).
"""

import numpy as np

from mfpca import experiment, imaging
from mfpca.covariance import (
    hadamard,
    is_psd,
    mf_covariance,
    min_kernel_matrix,
    multiplication_count,
)
from mfpca.eigen import jacobi_eigen
from mfpca.kernels import KernelKind, mf_dot, min_dot_matched, min_dot_signed
from mfpca.pca import MeanMode


def report(num, ok, detail):
    print("ACCEPTANCE %d %s: %s" % (num, "PASS" if ok else "FAIL", detail))
    assert ok, detail


def test_criterion_1_min_kernel_covariances_are_psd():
    rng = np.random.default_rng(2024)
    worst = np.inf
    for _ in range(200):
        X = rng.uniform(-10, 10, size=(rng.integers(1, 21), rng.integers(1, 21)))
        for kind in (KernelKind.MIN_SIGNED, KernelKind.MIN_MATCHED):
            ok, lam_min = is_psd(mf_covariance(X, kind), tol=1e-8)
            worst = min(worst, lam_min)
            if not ok:
                report(1, False, "%s covariance has lambda_min %g" % (kind, lam_min))
    report(1, True, "200 random matrices, both min kernels PSD (worst lambda_min %.3g)" % worst)


def test_criterion_2_additive_kernel_counterexample():
    X = np.array([[1.0, -1.0], [2.0, -2.0]])
    A = mf_covariance(X, KernelKind.MF_ADD)
    matches = np.allclose(A, [[4.0, 6.0], [6.0, 8.0]])
    lam_min = jacobi_eigen(A).eigenvalues[-1]
    ok = matches and lam_min < -0.1
    report(2, ok, "A=%s lambda_min=%.4f (expect ~%.4f)" % (A.tolist(), lam_min, 6 - np.sqrt(40)))


def test_criterion_3_norm_induction():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        x = rng.uniform(-100, 100, size=rng.integers(1, 65))
        l1 = float(np.abs(x).sum())
        for got, want in (
            (mf_dot(x, x), 2 * l1),
            (min_dot_signed(x, x), l1),
            (min_dot_matched(x, x), l1),
        ):
            rel = abs(got - want) / max(1e-300, abs(want))
            worst = max(worst, rel)
            if rel > 1e-12:
                report(3, False, "relative error %g" % rel)
    report(3, True, "1000 vectors, norms induced to 1e-12 (worst rel %.2g)" % worst)


def test_criterion_4_psd_kernel_building_blocks():
    rng = np.random.default_rng(11)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        G1, G2 = rng.normal(size=(n, n)), rng.normal(size=(n, n))
        ok, lam = is_psd(hadamard(G1 @ G1.T, G2 @ G2.T), tol=1e-8)
        if not ok:
            report(4, False, "Schur product lambda_min %g" % lam)
    for _ in range(100):
        x = rng.uniform(0.01, 10, size=rng.integers(1, 13))
        ok, lam = is_psd(min_kernel_matrix(x, signed=False), tol=1e-8)
        if not ok:
            report(4, False, "unsigned min-kernel lambda_min %g" % lam)
    for _ in range(100):
        x = rng.uniform(-10, 10, size=rng.integers(1, 13))
        ok, lam = is_psd(min_kernel_matrix(x, signed=True), tol=1e-8)
        if not ok:
            report(4, False, "signed min-kernel lambda_min %g" % lam)
    report(4, True, "Schur products and min-kernels PSD (100 cases each)")


def test_criterion_5_eigensolver_oracle_equivalence():
    rng = np.random.default_rng(13)
    worst_val, worst_orth, worst_rec, worst_tr = 0.0, 0.0, 0.0, 0.0
    for _ in range(200):
        n = int(rng.integers(1, 13))
        G = rng.normal(size=(n, n))
        A = (G + G.T) / 2
        d = jacobi_eigen(A.copy())
        ref = np.sort(np.linalg.eigvalsh(A))[::-1]
        scale = max(1.0, float(np.abs(ref).max()))
        worst_val = max(worst_val, float(np.abs(d.eigenvalues - ref).max()) / scale)
        V = d.eigenvectors
        worst_orth = max(worst_orth, float(np.abs(V.T @ V - np.eye(n)).max()))
        rec = V @ np.diag(d.eigenvalues) @ V.T
        worst_rec = max(
            worst_rec, float(np.abs(A - rec).max()) / max(1.0, np.abs(A).max())
        )
        worst_tr = max(
            worst_tr,
            abs(float(np.trace(A)) - float(d.eigenvalues.sum()))
            / max(1.0, abs(np.trace(A))),
        )
    ok = worst_val <= 1e-9 and worst_orth <= 1e-10 and worst_rec <= 1e-9 and worst_tr <= 1e-10
    report(
        5,
        ok,
        "200 matrices: eigval rel %.2g, orth %.2g, recon %.2g, trace %.2g"
        % (worst_val, worst_orth, worst_rec, worst_tr),
    )


def _denoising_means(fixture_images, tmp_path, noise, methods, seeds):
    config = experiment.ExperimentConfig(
        inputs=tuple(fixture_images),
        n_copies=10,
        k_components=2,
        noise=noise,
        methods=methods,
        mean_mode=MeanMode.BEST_OF_THREE,
        seeds=seeds,
        out_dir=str(tmp_path),
        reconstruct_index=0,
    )
    results = experiment.run_reconstruction(config)
    means = {}
    for m in methods:
        vals = [
            imaging.cap_psnr(r.psnr_reconstructed_db) for r in results if r.method == m
        ]
        means[m] = float(np.mean(vals))
    return means


SEEDS = tuple(range(10))


def test_criterion_6_occlusion_denoising_improvement(fixture_images, tmp_path):
    noise = imaging.NoiseSpec(model=imaging.NoiseModel.TILE_OCCLUSION)
    methods = (KernelKind.L2, KernelKind.MIN_SIGNED, KernelKind.MIN_MATCHED)
    means = _denoising_means(fixture_images, tmp_path, noise, methods, SEEDS)
    gap1 = means[KernelKind.MIN_SIGNED] - means[KernelKind.L2]
    gap2 = means[KernelKind.MIN_MATCHED] - means[KernelKind.L2]
    ok = gap1 >= 0.5 and gap2 >= 0.5
    report(
        6,
        ok,
        "occlusion mean PSNR l2=%.3f min1=%.3f (+%.2f) min2=%.3f (+%.2f); need +0.5 dB"
        % (
            means[KernelKind.L2],
            means[KernelKind.MIN_SIGNED],
            gap1,
            means[KernelKind.MIN_MATCHED],
            gap2,
        ),
    )


def test_criterion_7_salt_pepper_denoising_improvement(fixture_images, tmp_path):
    noise = imaging.NoiseSpec(model=imaging.NoiseModel.SALT_PEPPER, density=0.1)
    methods = (KernelKind.L2, KernelKind.MF_ADD, KernelKind.MIN_SIGNED)
    means = _denoising_means(fixture_images, tmp_path, noise, methods, SEEDS)
    gap_min = means[KernelKind.MIN_SIGNED] - means[KernelKind.L2]
    gap_mf = means[KernelKind.MF_ADD] - means[KernelKind.L2]
    ok = gap_min >= 1.0 and gap_mf >= -0.5
    report(
        7,
        ok,
        "salt-pepper mean PSNR l2=%.3f min1=%.3f (+%.2f, need >= 1.0) "
        "mf=%.3f (%+.2f, need >= -0.5)"
        % (
            means[KernelKind.L2],
            means[KernelKind.MIN_SIGNED],
            gap_min,
            means[KernelKind.MF_ADD],
            gap_mf,
        ),
    )


def test_criterion_8_timing_comparability(fixture_images, tmp_path):
    config = experiment.ExperimentConfig(
        inputs=(fixture_images[0],),
        methods=tuple(KernelKind),
        seeds=(0,),
        out_dir=str(tmp_path),
    )
    rows = experiment.run_timing(config, [128], reps=3)
    totals = {r["method"]: r["total_seconds"] for r in rows}
    ratios = {
        m: totals[m] / totals["l2"] for m in ("mf", "min1", "min2")
    }
    ratio_ok = all(0.3 <= r <= 3.0 for r in ratios.values())
    counts_ok = all(
        multiplication_count(s * s, 10, kind) == 0
        for s in (32, 48, 64, 80, 96, 112, 128)
        for kind in (KernelKind.MF_ADD, KernelKind.MIN_SIGNED, KernelKind.MIN_MATCHED)
    )
    report(
        8,
        ratio_ok and counts_ok,
        "128x128 MF/L2 time ratios %s (band [0.3, 3]); MF mult counts all zero: %s"
        % ({k: round(v, 2) for k, v in ratios.items()}, counts_ok),
    )


def test_criterion_9_pipeline_exactness(fixture_images, tmp_path):
    # density-0 noise is the identity
    clean = np.full((32, 32), 0.5)
    spec = imaging.NoiseSpec(model=imaging.NoiseModel.SALT_PEPPER, density=0.0)
    identity_ok = np.array_equal(
        imaging.salt_pepper(clean, spec, imaging.make_rng(0)), clean
    )

    # clean data, K = rank: every method reconstructs exactly
    config = experiment.ExperimentConfig(
        inputs=(fixture_images[0],),
        n_copies=4,
        k_components=4,
        noise=spec,
        methods=tuple(KernelKind),
        mean_mode=MeanMode.BEST_OF_THREE,
        seeds=(0,),
        out_dir=str(tmp_path / "a"),
        max_dim=64,
    )
    results = experiment.run_reconstruction(config)
    min_psnr = min(imaging.cap_psnr(r.psnr_reconstructed_db) for r in results)
    exact_ok = min_psnr >= 100.0

    # identical config + seed: CSV byte-identical apart from the
    # wall-clock columns
    results2 = experiment.run_reconstruction(
        experiment.ExperimentConfig(
            inputs=config.inputs,
            n_copies=4,
            k_components=4,
            noise=spec,
            methods=config.methods,
            mean_mode=MeanMode.BEST_OF_THREE,
            seeds=(0,),
            out_dir=str(tmp_path / "b"),
            max_dim=64,
        )
    )
    csv1 = _mask_timing(experiment.write_results_csv(results, str(tmp_path / "r1.csv")))
    csv2 = _mask_timing(experiment.write_results_csv(results2, str(tmp_path / "r2.csv")))
    determinism_ok = csv1 == csv2

    ok = identity_ok and exact_ok and determinism_ok
    report(
        9,
        ok,
        "density-0 identity %s; clean K=rank min PSNR %.1f dB (need >= 100); "
        "CSV deterministic %s" % (identity_ok, min_psnr, determinism_ok),
    )


def _mask_timing(text):
    out = []
    for line in text.strip().split("\n"):
        if line.startswith("#") or line.startswith("image,"):
            out.append(line)
            continue
        cells = line.split(",")
        cells[8] = cells[9] = "T"
        out.append(",".join(cells))
    return "\n".join(out)
