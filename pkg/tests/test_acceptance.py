"""Acceptance criteria, one test per criterion, each at its stated tolerance.

Every test prints a pass/fail line through ``acceptance_report``; the lines are
collected into the "acceptance criteria" section of the pytest summary.
"""

import math
import time

import numpy as np

from wehrl_jcm.core import BlochVector, ModelConfig, bloch_grid
from wehrl_jcm.entropies import LN2, binary_entropy, von_neumann
from wehrl_jcm.sweep import figure_preset, run_sweep, write_output
from wehrl_jcm.wehrl import (
    LN_2PI,
    LN_4PI,
    OMEGA,
    RHO,
    XI_MAX,
    WehrlMethod,
    rescale_w_phi,
    rescaled_z_half_pi,
    w_phi,
    w_theta,
    w_theta_info_form,
    z_phi,
    z_theta,
    z_theta_half_pi,
)

from conftest import random_bloch_vectors

CLOSED, SERIES, QUAD = WehrlMethod.CLOSED_FORM, WehrlMethod.SERIES, WehrlMethod.QUADRATURE


def _zero_eps_phi(v):
    """A meridian on which b cos(phi) + c sin(phi) vanishes."""
    return math.atan2(-v.b, v.c) % (2 * math.pi)


def test_1_oracle_equivalence(acceptance_report):
    started = time.perf_counter()
    worst = {}
    for v in random_bloch_vectors(200, seed=2024):
        phi0 = _zero_eps_phi(v)
        pairs = {
            "W_theta": (w_theta(v.h), w_theta(v.h, QUAD)),
            "W_phi": (w_phi(v.b, v.c), w_phi(v.b, v.c, QUAD)),
            "Z_theta=0": (z_theta(v, 0.0, CLOSED), z_theta(v, 0.0, QUAD)),
            "Z_theta=pi": (z_theta(v, math.pi, CLOSED), z_theta(v, math.pi, QUAD)),
            "Z_theta=pi/2": (z_theta_half_pi(v.b, v.c), z_theta(v, math.pi / 2, QUAD)),
            "Z_phi|eps=0": (z_phi(v, phi0, CLOSED), z_phi(v, phi0, QUAD)),
        }
        for name, (closed, quad) in pairs.items():
            worst[name] = max(worst.get(name, 0.0), abs(closed - quad))
    elapsed = time.perf_counter() - started
    ok = max(worst.values()) < 1e-8 and elapsed < 5.0
    detail = ", ".join(f"{k} {e:.1e}" for k, e in worst.items()) + f"; {elapsed:.2f} s"
    assert acceptance_report("1 oracle equivalence (200 vectors, 1e-8, <5 s)", ok, detail)


def test_2_series_agreement(acceptance_report):
    started = time.perf_counter()
    worst_17 = 0.0
    for xi in np.linspace(0.0, XI_MAX, 100):
        b = math.sqrt(xi / XI_MAX)
        worst_17 = max(worst_17, abs(w_phi(b, 0.0, SERIES) - w_phi(b, 0.0)))
    rng = np.random.default_rng(77)
    worst_theta = worst_phi = 0.0
    n_theta = n_phi = 0
    for v in random_bloch_vectors(150, seed=78):
        theta = float(rng.uniform(0.0, math.pi))
        if abs(v.h * math.cos(theta)) + math.sin(theta) * math.sqrt(v.transverse_sq) <= 0.9:
            worst_theta = max(worst_theta, abs(z_theta(v, theta, SERIES) - z_theta(v, theta, QUAD)))
            n_theta += 1
        phi = float(rng.uniform(0.0, 2 * math.pi))
        if math.hypot(v.h, v.b * math.cos(phi) + v.c * math.sin(phi)) <= 0.9:
            worst_phi = max(worst_phi, abs(z_phi(v, phi, SERIES) - z_phi(v, phi, QUAD)))
            n_phi += 1
    elapsed = time.perf_counter() - started
    ok = worst_17 < 1e-10 and worst_theta < 1e-6 and worst_phi < 1e-6 and elapsed < 10.0
    detail = (
        f"W_phi series {worst_17:.1e}; Z_theta series {worst_theta:.1e} ({n_theta} pts); "
        f"Z_phi series {worst_phi:.1e} ({n_phi} pts); {elapsed:.2f} s"
    )
    assert acceptance_report("2 series vs closed form / quadrature", ok, detail)


def test_3_published_constants(acceptance_report):
    omega_quad = LN_2PI - w_phi(1.0, 0.0, QUAD)
    rho_quad = 0.5 * LN_4PI - z_theta(BlochVector(1.0, 0.0, 0.0), math.pi / 2, QUAD)
    checks = [
        abs(OMEGA - 0.1697) <= 5e-4,
        abs(omega_quad - 0.1697) <= 5e-4,
        round(OMEGA, 2) == round(omega_quad, 2) == 0.17,
        abs(RHO - 0.1534) <= 5e-4,
        abs(rho_quad - 0.1534) <= 5e-4,
        round(RHO, 2) == round(rho_quad, 2) == 0.15,
    ]
    detail = f"omega {OMEGA:.6f} / {omega_quad:.6f}, rho {RHO:.6f} / {rho_quad:.6f}"
    assert acceptance_report("3 constants 0.17 and 0.15 (two routes each)", all(checks), detail)


def test_4_identities(acceptance_report):
    worst_sum = 0.0
    for cfg in figure_preset("fig1").configs:
        b, c, h = bloch_grid(cfg)
        for bi, ci, hi in zip(b, c, h):
            v = BlochVector(bi, ci, hi)
            lhs = z_theta(v, 0.0, CLOSED) + z_theta(v, math.pi, CLOSED)
            worst_sum = max(worst_sum, abs(lhs - binary_entropy(hi) - LN_2PI))
    worst_limit = 0.0
    for h in np.arange(1, 10) / 10:
        v = BlochVector(0.0, 0.0, float(h))
        limit = (LN_2PI + w_theta_info_form(float(h))) / (2 * math.pi)
        worst_limit = max(worst_limit, abs(limit - z_phi(v, 0.0, QUAD)))
    ok = worst_sum < 1e-10 and worst_limit < 1e-8
    detail = f"Z0+Zpi identity {worst_sum:.1e} over fig1; reduced Z_phi vs quadrature {worst_limit:.1e}"
    assert acceptance_report("4 identity suite", ok, detail)


def test_5_bounds(acceptance_report):
    started = time.perf_counter()
    ok = True
    spot = 0.0
    notes = []
    rng = np.random.default_rng(5)
    for vartheta in (0.0, math.pi / 4):
        cfg = ModelConfig.uniform(5.0, vartheta)
        b, c, h = bloch_grid(cfg)
        wt, wp = w_theta(h), w_phi(b, c)
        gamma = von_neumann(np.minimum(np.sqrt(b * b + c * c + h * h), 1.0))
        Hs = np.concatenate([binary_entropy(x) for x in (b, c, h)])
        ok &= bool(wt.min() >= 0.5 - 1e-10 and wt.max() <= LN2 + 1e-10)
        ok &= bool(wp.min() >= LN_2PI - OMEGA - 1e-10 and wp.max() <= LN_2PI + 1e-10)
        ok &= bool(gamma.min() >= 0 and gamma.max() <= LN2 + 1e-10 and Hs.min() >= 0 and Hs.max() <= LN2 + 1e-10)
        for i in rng.choice(len(cfg.t_grid), size=10, replace=False):
            spot = max(spot, abs(wt[i] - w_theta(h[i], QUAD)), abs(wp[i] - w_phi(b[i], c[i], QUAD)))
        notes.append(f"vartheta={vartheta:.4f}: W_theta [{wt.min():.4f},{wt.max():.4f}] W_phi [{wp.min():.4f},{wp.max():.4f}]")
    elapsed = time.perf_counter() - started
    ok &= spot < 1e-8 and elapsed < 30.0
    detail = "; ".join(notes) + f"; 20 quadrature spot checks {spot:.1e}; {elapsed:.2f} s"
    assert acceptance_report("5 bounds over alpha=5 sweeps", ok, detail)


def test_6_physics(acceptance_report):
    cfg = ModelConfig.uniform(5.0, 0.0)
    t = np.array(cfg.t_grid)
    b, c, h = bloch_grid(cfg)
    H_b_err = float(np.abs(binary_entropy(b) - LN2).max())
    collapse = float(np.abs(h[(t >= 10) & (t <= 25)]).max())
    idx = np.flatnonzero((t >= 28) & (t <= 35))
    peaks = [abs(h[i]) for i in idx if abs(h[i]) >= abs(h[i - 1]) and abs(h[i]) >= abs(h[i + 1])]
    revival = max(peaks) if peaks else 0.0
    _, _, h4 = bloch_grid(ModelConfig.uniform(5.0, math.pi / 4))
    trap = float(np.abs(h4).max())
    H_h_err = float(np.abs(binary_entropy(h4) - LN2).max())
    parts = [
        ("H(b)=ln2 for vartheta=0", H_b_err < 1e-12, f"{H_b_err:.1e}"),
        ("collapse |h|<0.1 on [10,25]", collapse < 0.1, f"{collapse:.3f}"),
        ("revival peak >0.3 on [28,35]", revival > 0.3, f"{revival:.3f}"),
        ("trapping max|h|<1e-3 for vartheta=pi/4", trap < 1e-3, f"{trap:.4f}"),
        ("H(h)=ln2 within 1e-6 for vartheta=pi/4", H_h_err < 1e-6, f"{H_h_err:.1e}"),
    ]
    for label, ok, value in parts:
        acceptance_report(f"6 {label}", ok, value)
    failed = [label for label, ok, _ in parts if not ok]
    assert not failed, f"failed: {failed}"


def test_7_qualitative_reports(acceptance_report):
    lines = []
    ok = True
    for vartheta in (0.0, math.pi / 4):
        cfg = ModelConfig.uniform(5.0, vartheta)
        t = np.array(cfg.t_grid)
        b, c, h = bloch_grid(cfg)
        window = (t >= 10) & (t <= 25)
        gamma = von_neumann(np.minimum(np.sqrt(b * b + c * c + h * h), 1.0))
        w_dev = float(np.abs(rescale_w_phi(w_phi(b, c)) - gamma)[window].max())
        z_dev = float(np.abs(rescaled_z_half_pi(b, c) - gamma)[window].max())
        ok &= math.isfinite(w_dev) and math.isfinite(z_dev) and w_dev < 0.15 and z_dev < 0.15
        lines.append(f"vartheta={vartheta:.4f}: max|W-gamma| {w_dev:.4f}, max|Zhat-gamma| {z_dev:.4f}")
    endpoints = (
        rescale_w_phi(w_phi(0.0, 0.0)) == LN2
        and rescale_w_phi(w_phi(1.0, 0.0)) == 0.0
        and rescaled_z_half_pi(0.0, 0.0) == LN2
        and rescaled_z_half_pi(0.6, 0.8) == 0.0
    )
    ok &= endpoints
    print("\n".join(lines))
    detail = "; ".join(lines) + f"; endpoints exact: {endpoints}"
    assert acceptance_report("7 collapse-window deviations < 0.15, endpoints exact", ok, detail)


def _preset_csvs(tmp_path, threads, tag):
    out = {}
    for name in ("fig1", "fig2", "fig3"):
        preset = figure_preset(name)
        for label, cfg in preset.panels:
            result = run_sweep(
                cfg, preset.quantities, z_thetas=preset.z_thetas, z_phis=preset.z_phis, threads=threads
            )
            target = tmp_path / f"{tag}_{name}_{label}.csv"
            write_output(result, "csv", target)
            out[(name, label)] = target.read_bytes()
    return out


def test_8_determinism_and_performance(acceptance_report, tmp_path):
    started = time.perf_counter()
    first = _preset_csvs(tmp_path, 1, "a")
    elapsed = time.perf_counter() - started
    second = _preset_csvs(tmp_path, 1, "b")
    threaded = _preset_csvs(tmp_path, 4, "c")
    identical = first == second == threaded
    ok = identical and elapsed < 60.0
    detail = f"single-threaded presets {elapsed:.2f} s; byte-identical across runs/threads: {identical}"
    assert acceptance_report("8 determinism and preset runtime", ok, detail)
