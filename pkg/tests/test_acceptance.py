"""Acceptance suite: the headline regressions and property gates.

Each test enforces one acceptance criterion at its stated tolerance and
prints one ``[PASS]``/``[FAIL]`` line (run with ``pytest -s`` to see the
lines as they happen).
"""

import time

import numpy as np

from mjlscert import (
    OptimizerConfig,
    SimConfig,
    VerdictKind,
    WeightSet,
    build_affine_family,
    complex_weighted_certificate,
    embed_complex_weights,
    expm,
    instability_verdict,
    kron,
    kron_sum,
    lift_matrix,
    lift_vector,
    lifted_certificate,
    make_basis,
    moment_ode_reference,
    mu_and_gradient,
    optimize_skew_weights,
    pad_weights,
    simulate,
    spectral_abscissa,
    sweep_weight_orders,
    weighted_certificate,
)

from conftest import random_skew, random_skew_hermitian, random_system


def _report(num, passed, detail):
    print(f"[{'PASS' if passed else 'FAIL'}] acceptance criterion {num}: {detail}")
    assert passed, f"acceptance criterion {num}: {detail}"


def test_criterion_01_rotation_certificate_abscissa(rotation_system):
    start = time.perf_counter()
    mu = spectral_abscissa(lifted_certificate(rotation_system, 1)).mu
    elapsed = time.perf_counter() - start
    ok = abs(mu - (-1.0)) <= 1e-8 and elapsed < 1.0
    _report(1, ok, f"rotation-pair certificate mu = {mu:.2e} vs -1 (|err| <= 1e-8), "
                   f"{elapsed:.3f} s < 1 s")


def test_criterion_02_cross_weights_certify_instability(
    rotation_system, rotation_cross_weights
):
    mu = spectral_abscissa(
        weighted_certificate(rotation_system, 1, rotation_cross_weights)
    ).mu
    verdict = instability_verdict(rotation_system, 1, rotation_cross_weights, eps=1e-9)
    ok = abs(mu) <= 1e-8 and verdict.kind is VerdictKind.NOT_PTH_MEAN_STABLE
    _report(2, ok, f"cross-weighted certificate mu = {mu:.2e} (|mu| <= 1e-8), "
                   f"verdict = {verdict.kind.value}")


def test_criterion_03_coupled_system_unweighted(coupled_system):
    mu = spectral_abscissa(lifted_certificate(coupled_system, 1)).mu
    verdict = instability_verdict(coupled_system, 1, WeightSet.trivial(2), eps=1e-9)
    ok = abs(mu - (-0.07)) <= 0.005 and verdict.kind is VerdictKind.INCONCLUSIVE
    _report(3, ok, f"coupled-pair certificate mu = {mu:.4f} within -0.07 +/- 0.005, "
                   f"verdict = {verdict.kind.value}")


def test_criterion_04_coupled_system_weight_search(coupled_system):
    start = time.perf_counter()
    cfg = OptimizerConfig(restarts=20, seed=0)
    result = optimize_skew_weights(coupled_system, 1, 2, cfg)
    verdict = instability_verdict(coupled_system, 1, result.best_weights, eps=1e-9)
    elapsed = time.perf_counter() - start
    ok = (
        result.best_mu >= 0.25
        and verdict.kind is VerdictKind.NOT_PTH_MEAN_STABLE
        and elapsed < 60.0
    )
    _report(4, ok, f"best weighted abscissa = {result.best_mu:.4f} >= 0.25 over 20 restarts, "
                   f"verdict = {verdict.kind.value}, {elapsed:.1f} s < 60 s")


def test_criterion_05_kronecker_identity_suite():
    rng = np.random.default_rng(90105)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        na, ma = int(rng.integers(1, 5)), int(rng.integers(1, 5))
        a = rng.standard_normal((na, na))
        b = rng.standard_normal((ma, ma))
        lhs = expm(kron_sum(a, b))
        rhs = kron(expm(a), expm(b))
        worst = max(worst, np.abs(lhs - rhs).max() / (1.0 + np.abs(rhs).max()))

        norm_err = abs(
            np.linalg.norm(kron(a, b), 2) - np.linalg.norm(a, 2) * np.linalg.norm(b, 2)
        ) / max(1.0, np.linalg.norm(a, 2) * np.linalg.norm(b, 2))
        worst = max(worst, norm_err)

        c = rng.standard_normal((na, int(rng.integers(1, 5))))
        d = rng.standard_normal((ma, int(rng.integers(1, 5))))
        ab = rng.standard_normal((c.shape[1], na))
        cd = rng.standard_normal((d.shape[1], ma))
        mixed = np.abs(
            kron(c.T @ ab.T, d.T @ cd.T) - kron(c.T, d.T) @ kron(ab.T, cd.T)
        ).max()
        worst = max(worst, mixed / max(1.0, np.abs(kron(c.T @ ab.T, d.T @ cd.T)).max()))
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-10 and elapsed < 5.0
    _report(5, ok, f"Kronecker identities on 100 random instances, worst relative "
                   f"deviation {worst:.2e} <= 1e-10, {elapsed:.2f} s < 5 s")


def test_criterion_06_lift_suite():
    rng = np.random.default_rng(90106)
    worst_norm = worst_scale = worst_flow = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 4))
        p = int(rng.integers(1, 4))
        basis = make_basis(n, p)
        a = rng.standard_normal((n, n))
        x0 = rng.standard_normal(n) * rng.uniform(0.2, 2.0)
        t = float(rng.uniform(0.0, 2.0))

        lifted = lift_vector(basis, x0)
        target = np.linalg.norm(x0) ** p
        worst_norm = max(worst_norm, abs(np.linalg.norm(lifted) - target) / max(1e-30, target))

        c = float(rng.uniform(-3.0, 3.0))
        scale_dev = np.abs(lift_matrix(basis, c * a) - c * lift_matrix(basis, a)).max()
        worst_scale = max(worst_scale, scale_dev / max(1.0, np.abs(lift_matrix(basis, a)).max()))

        lhs = lift_vector(basis, expm(a * t) @ x0)
        rhs = expm(lift_matrix(basis, a) * t) @ lifted
        worst_flow = max(worst_flow, np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max()))
    ok = worst_norm <= 1e-12 and worst_scale <= 1e-12 and worst_flow <= 1e-8
    _report(6, ok, f"lift identities on 50 random draws: norm {worst_norm:.2e} <= 1e-12, "
                   f"scaling {worst_scale:.2e} <= 1e-12, flow {worst_flow:.2e} <= 1e-8")


def test_criterion_07_padding_monotonicity(coupled_system):
    rng = np.random.default_rng(90107)
    min_gap = np.inf
    for _ in range(20):
        n = int(rng.integers(1, 3))
        num_modes = int(rng.integers(1, 4))
        m = int(rng.integers(2, 4))
        system = random_system(rng, n, num_modes)
        ws = WeightSet.skew(
            [random_skew(rng, m, scale=float(rng.uniform(0.2, 3.0))) for _ in range(num_modes)]
        )
        mu = spectral_abscissa(weighted_certificate(system, 1, ws)).mu
        mu_padded = spectral_abscissa(
            weighted_certificate(system, 1, pad_weights(ws, m + 1))
        ).mu
        min_gap = min(min_gap, mu_padded - mu)

    cfg = OptimizerConfig(restarts=5, seed=0)
    rows = sweep_weight_orders(coupled_system, 1, [1, 2, 3], cfg)
    sweep_vals = [result.best_mu for _, result, _ in rows]
    sweep_ok = all(b >= a - 1e-9 for a, b in zip(sweep_vals, sweep_vals[1:]))
    ok = min_gap >= -1e-9 and sweep_ok
    _report(7, ok, f"padding never lowered mu (min gap {min_gap:.2e} >= -1e-9); sweep over "
                   f"m=1,2,3 gave {[f'{v:.4f}' for v in sweep_vals]} (nondecreasing)")


def test_criterion_08_complex_embedding_dominance():
    rng = np.random.default_rng(90108)
    min_gap = np.inf
    for _ in range(20):
        n = int(rng.integers(1, 3))
        num_modes = int(rng.integers(1, 4))
        m = int(rng.integers(1, 4))
        system = random_system(rng, n, num_modes)
        vs = [random_skew_hermitian(rng, m) for _ in range(num_modes)]
        mu_complex = spectral_abscissa(complex_weighted_certificate(system, vs)).mu
        mu_real = spectral_abscissa(
            weighted_certificate(system, 1, embed_complex_weights(vs))
        ).mu
        min_gap = min(min_gap, mu_real - mu_complex)
    ok = min_gap >= -1e-9
    _report(8, ok, f"real embedding dominated the complex certificate on 20 skew-Hermitian "
                   f"draws (min gap {min_gap:.2e} >= -1e-9)")


def test_criterion_09_monte_carlo_oracle(rotation_system):
    rng = np.random.default_rng(90109)
    start = time.perf_counter()
    worst_sigma = 0.0
    for trial in range(10):
        n = int(rng.integers(1, 4))
        num_modes = int(rng.integers(1, 4))
        p = int(rng.integers(1, 3))
        system = random_system(rng, n, num_modes)
        x0 = rng.standard_normal(n)
        mode0 = int(rng.integers(num_modes))
        dist = np.zeros(num_modes)
        dist[mode0] = 1.0
        times = np.linspace(0.25, 2.0, 6)
        cfg = SimConfig(
            horizon=2.0,
            sample_times=times,
            trials=10_000,
            x0=x0,
            initial_mode_distribution=dist,
            p=p,
            seed=91000 + trial,
        )
        stats = simulate(system, cfg)
        reference = moment_ode_reference(system, p, x0, mode0, times)
        # 1e-10 floor absorbs float roundoff on zero-variance components
        sigmas = np.abs(stats.lifted_moment - reference) / (4.0 * stats.lifted_stderr + 1e-10)
        worst_sigma = max(worst_sigma, float(sigmas.max()))

    conserve_cfg = SimConfig(
        horizon=8.0,
        sample_times=np.linspace(0.0, 8.0, 9),
        trials=2000,
        x0=[1.0, 0.0],
        p=1,
        seed=91999,
    )
    conserve = simulate(rotation_system, conserve_cfg, collect_per_trial=True)
    conserve_dev = float(np.abs(conserve.per_trial_norm_p - 1.0).max())
    elapsed = time.perf_counter() - start
    ok = worst_sigma <= 1.0 and conserve_dev <= 1e-10 and elapsed < 120.0
    _report(9, ok, f"lifted moment within 4 stderr on 10 systems x 1e4 trials (worst "
                   f"{worst_sigma:.2f} of bound); per-path norm deviation {conserve_dev:.1e}"
                   f" <= 1e-10; {elapsed:.1f} s < 120 s")


def test_criterion_10_gradient_check(coupled_system):
    rng = np.random.default_rng(90110)
    family = build_affine_family(coupled_system, 1, 2)
    step = 1e-6
    checked = 0
    attempts = 0
    worst = 0.0
    while checked < 50:
        attempts += 1
        assert attempts < 5000, "could not find 50 certified-smooth points"
        values = rng.uniform(-8.0, 8.0, size=family.num_params)
        mu, grad, smooth = mu_and_gradient(family, values)
        if not smooth:
            continue
        for k in range(family.num_params):
            bump = np.zeros(family.num_params)
            bump[k] = step
            fd = (
                mu_and_gradient(family, values + bump)[0]
                - mu_and_gradient(family, values - bump)[0]
            ) / (2.0 * step)
            worst = max(worst, abs(grad[k] - fd) / (1.0 + abs(grad[k])))
        checked += 1
    ok = worst <= 1e-4
    _report(10, ok, f"analytic gradient vs central differences at 50 smooth points: "
                    f"worst relative deviation {worst:.2e} <= 1e-4")
