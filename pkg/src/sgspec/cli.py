"""Command line front end.

    sgspec analyze -i <gen.json|catalog:id?params> --checks <list> \
        --t <comma list> --tol <f> --format json|csv -o <path> --seed <n>

Loads a generator (dense JSON file, catalog file, or inline catalog URI),
runs the requested verification scenarios, and emits a machine-readable
report; optional matplotlib figures are rendered next to it.  Exit codes:
0 all verdicts pass, 1 at least one check failed, 2 configuration error,
3 numerical failure.  The environment variable SGSPEC_THREADS caps the
number of checks run in parallel.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from . import figures
from .errors import ConfigError, NumericalError, PeriodError, SgspecError
from .hardy import DiscFunction, hardy_projection_check, verify_hardy_spectrum
from .mapping import (DEFAULT_INTERSECTION_GRID, eigenspace_intersection_check,
                      eigenspace_union_check, point_mapping_check,
                      residual_mapping_check)
from .operators import mat_inf
from .periodic import (build_projection_family, detect_period,
                       projection_family_checks)
from .quadrature import QuadratureConfig, verify_rescale_identities
from .report import FORMATS, emit_report
from .serialize import load_generator_source
from .spectra import decomposition_check, point_spectrum, resolvent_map_check, spectrum_report

CHECK_IDS = ("analyze-spectrum", "verify-identities", "periodic-projections",
             "point-mapping", "residual-mapping", "resolvent-mapping",
             "eigenspaces", "hardy")

#: Rescale-identity check runs at these shifts.
IDENTITY_LAMBDAS = (0.0 + 0.0j, 1.0 + 0.0j, 0.3 + 0.1j)


@dataclass
class ScenarioConfig:
    generator_source: str
    checks: List[str]
    t_values: List[float] = field(default_factory=lambda: [1.0])
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    tol: float = 1e-8
    fmt: str = "json"
    out_path: Optional[str] = None
    seed: int = 0
    evaluator_source: Optional[str] = None
    figures_dir: Optional[str] = None

    def __post_init__(self):
        if not self.checks:
            raise ConfigError("at least one check must be requested")
        unknown = [c for c in self.checks if c not in CHECK_IDS]
        if unknown:
            raise ConfigError(f"unknown checks {unknown}; known: {list(CHECK_IDS)}")
        if any(t < 0 for t in self.t_values):
            raise ConfigError("all t values must be >= 0")
        if self.fmt not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}")
        if not self.tol > 0:
            raise ConfigError("tol must be > 0")


class _Context:
    def __init__(self, cfg: ScenarioConfig):
        self.cfg = cfg
        spec, S = load_generator_source(cfg.generator_source)
        self.spec = spec
        if cfg.evaluator_source is not None:
            _, S = load_generator_source(cfg.evaluator_source)
        self.S = S
        self.A = spec.matrix
        self.rng = np.random.default_rng(cfg.seed)

    def figure(self, check_id: str) -> Optional[str]:
        if self.cfg.figures_dir is None:
            return None
        return figures.figure_path(self.cfg.figures_dir, check_id)


def _verdict(ok: bool) -> str:
    return "pass" if ok else "fail"


# ---------------------------------------------------------------------------
# Check implementations
# ---------------------------------------------------------------------------

def _check_analyze_spectrum(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    rep = spectrum_report(ctx.A, cfg.tol)
    dec = decomposition_check(ctx.A, cfg.tol)
    scale = max(1.0, mat_inf(ctx.A))
    collapse = rep.collapse_defect()
    ok = collapse <= cfg.tol * scale and dec.passed
    path = ctx.figure("analyze-spectrum")
    if path:
        figures.spectrum_figure(path, rep.point_values(), "point spectrum")
    return [{
        "id": "analyze-spectrum", "t": None, "verdict": _verdict(ok),
        "metric": "collapse_defect", "value": collapse,
        "spectrum": rep.to_json(),
        "decomposition": {
            "algebraic_vs_union": dec.algebraic_vs_union,
            "full_vs_algebraic": dec.full_vs_algebraic,
            "topological_empty": dec.topological_empty,
        },
        **({"figure": path} if path else {}),
    }]


def _check_verify_identities(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    A = ctx.A
    x = np.ones(ctx.S.dim, dtype=complex)
    entries = []
    rows_all = []
    for t in cfg.t_values:
        rows = []
        worst = 0.0
        failed = []
        for lam in IDENTITY_LAMBDAS:
            r1, r2 = verify_rescale_identities(ctx.S, A, lam, t, x, cfg.quadrature)
            rows.append({"lambda": [lam.real, lam.imag],
                         "residual_outer": r1, "residual_inner": r2})
            worst = max(worst, r1, r2)
            if r1 > cfg.tol:
                failed.append(f"outer identity (operator outside the integral) at lambda={lam}")
            if r2 > cfg.tol:
                failed.append(f"inner identity (operator inside the integrand) at lambda={lam}")
        entries.append({
            "id": "verify-identities", "t": float(t), "verdict": _verdict(not failed),
            "metric": "max_residual", "value": worst,
            "residuals": rows, **({"failed": failed} if failed else {}),
        })
        for row in rows:
            label = f"t={t:g}, lam={row['lambda'][0]:g}{row['lambda'][1]:+g}i"
            rows_all.append((label, max(row["residual_outer"], row["residual_inner"])))
    path = ctx.figure("verify-identities")
    if path:
        figures.residual_figure(path, [lbl for lbl, _ in rows_all],
                                [v for _, v in rows_all], cfg.tol,
                                "orbit identity residuals")
        for e in entries:
            e["figure"] = path
    return entries


def _candidate_period_multiple(A: np.ndarray, tol: float) -> Optional[float]:
    """t0 with T(t0) = I inferred from the eigenvalue lattice, or None."""
    eigs = np.linalg.eigvals(A)
    scale = max(1.0, mat_inf(A))
    if np.max(np.abs(eigs.real)) > tol * scale:
        return None
    freqs = sorted(abs(b) for b in eigs.imag if abs(b) > tol * scale)
    if not freqs:
        return 0.0  # nilpotent-or-zero; only a trivial period can exist
    # approximate positive real gcd of the frequencies
    g = freqs[0]
    for b in freqs[1:]:
        a = b
        while a > 1e-9 * scale:
            g, a = a, math.fmod(g, a)
            if a < 1e-9 * scale:
                break
    if g <= 1e-9 * scale:
        return None
    return 2.0 * math.pi / g


def _check_periodic_projections(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    A = ctx.A
    entry = {"id": "periodic-projections", "t": None, "metric": "family_defect"}
    path = ctx.figure("periodic-projections")
    t0 = _candidate_period_multiple(A, cfg.tol)
    if t0 == 0.0:
        defect = mat_inf(ctx.S.matrix_at(1.0) - np.eye(ctx.S.dim))
        if defect <= cfg.tol:
            entry.update({"verdict": "pass", "value": defect,
                          "detail": "trivial semigroup: family is {P_0 = I}"})
            if path:
                figures.projection_figure(path, [0], [ctx.S.dim], "projection ranks")
                entry["figure"] = path
        else:
            entry.update({"verdict": "fail", "value": defect,
                          "detail": "flow is not periodic (nilpotent-type generator)"})
        return [entry]
    if t0 is None:
        entry.update({"verdict": "fail", "value": float("inf"),
                      "detail": "no period multiple found from the eigenvalue lattice"})
        return [entry]
    try:
        rho = detect_period(ctx.S, t0, k_max=16, tol=cfg.tol)
    except PeriodError as exc:
        entry.update({"verdict": "fail", "value": float("inf"), "detail": str(exc)})
        return [entry]
    if rho == 0.0:
        entry.update({"verdict": "pass", "value": 0.0,
                      "detail": "trivial semigroup: family is {P_0 = I}"})
        return [entry]
    fam = build_projection_family(ctx.S, rho, cfg.quadrature, tol=cfg.tol)
    rep = projection_family_checks(fam, A, ctx.S, tol=cfg.tol)
    worst = max(rep.idempotence_defect, rep.annihilation_defect,
                rep.resolution_defect, rep.semigroup_action_defect)
    entry.update({
        "verdict": _verdict(rep.passed), "value": worst, "period": rho,
        "n_range": list(fam.n_range),
        **({"failed": rep.failures} if rep.failures else {}),
    })
    if path:
        ns = [n for n, _, _ in fam.entries]
        ranks = [rep.range_kernel_dims[n][0] for n in ns]
        figures.projection_figure(path, ns, ranks, f"projection ranks (period {rho:.4g})")
        entry["figure"] = path
    return [entry]


def _mapping_entries(report, check_id: str, ctx: _Context) -> List[dict]:
    data = report.to_json()
    entries = []
    for block in data["per_t"]:
        entries.append({
            "id": check_id, "t": block["t"], "verdict": block["verdict"],
            "metric": "hausdorff", "value": block["hausdorff"],
            "lhs": block["lhs"], "rhs": block["rhs"],
        })
    path = ctx.figure(check_id)
    if path:
        figures.mapping_figure(path, data["per_t"], check_id)
        for e in entries:
            e["figure"] = path
    return entries


def _check_point_mapping(ctx: _Context) -> List[dict]:
    rep = point_mapping_check(ctx.A, ctx.S, ctx.cfg.t_values, ctx.cfg.tol)
    return _mapping_entries(rep, "point-mapping", ctx)


def _check_residual_mapping(ctx: _Context) -> List[dict]:
    rep = residual_mapping_check(ctx.A, ctx.S, ctx.cfg.t_values, ctx.cfg.tol)
    return _mapping_entries(rep, "residual-mapping", ctx)


def _check_resolvent_mapping(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    lam = mat_inf(ctx.A) + 1.0
    rep = resolvent_map_check(ctx.A, lam, cfg.tol)
    worst_angle = max(rep.kernel_angles) if rep.kernel_angles else 0.0
    entry = {
        "id": "resolvent-mapping", "t": None, "verdict": _verdict(rep.passed),
        "metric": "hausdorff", "value": rep.hausdorff,
        "lambda": [rep.lam.real, rep.lam.imag], "max_kernel_angle": worst_angle,
    }
    path = ctx.figure("resolvent-mapping")
    if path:
        eye = np.eye(ctx.A.shape[0], dtype=complex)
        R = np.linalg.solve(rep.lam * eye - ctx.A, eye)
        figures.spectrum_figure(path, [p.value for p in point_spectrum(R, cfg.tol)],
                                "resolvent point spectrum")
        entry["figure"] = path
    return [entry]


def _check_eigenspaces(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    entries = []
    t_union = next((t for t in cfg.t_values if t > 0), 1.0)
    for p in point_spectrum(ctx.A, cfg.tol):
        inter = eigenspace_intersection_check(ctx.A, ctx.S, p.value,
                                              DEFAULT_INTERSECTION_GRID, cfg.tol)
        union = eigenspace_union_check(ctx.A, ctx.S, p.value, t_union, tol=cfg.tol)
        for rep, variant in ((inter, "intersection"), (union, "union")):
            entries.append({
                "id": "eigenspaces", "t": None, "variant": f"{variant}@{p.value:.6g}",
                "verdict": _verdict(rep.passed), "metric": "max_angle",
                "value": rep.max_angle,
                "dims": [rep.dim_generator_side, rep.dim_semigroup_side],
            })
    path = ctx.figure("eigenspaces")
    if path:
        labels = [e["variant"] for e in entries]
        vals = [e["value"] for e in entries]
        figures.residual_figure(path, labels, vals, cfg.tol, "eigenspace principal angles")
        for e in entries:
            e["figure"] = path
    return entries


def _check_hardy(ctx: _Context) -> List[dict]:
    cfg = ctx.cfg
    if ctx.spec.kind == "catalog" and ctx.spec.catalog_id == "disc_rotation":
        N = int(ctx.spec.params["degree"])
    else:
        N = 8
    spec_rep = verify_hardy_spectrum(N, cfg.tol)
    worst = spec_rep.spectrum_defect
    proj_defect = 0.0
    for _ in range(5):
        coeffs = ctx.rng.standard_normal(N + 1) + 1j * ctx.rng.standard_normal(N + 1)
        g = DiscFunction(N, coeffs)
        n = int(ctx.rng.integers(0, N + 1))
        rep = hardy_projection_check(N, n, g, cfg.quadrature, tol=1e-10)
        proj_defect = max(proj_defect, rep.defect)
    ok = spec_rep.passed and proj_defect <= 1e-10
    entry = {
        "id": "hardy", "t": None, "verdict": _verdict(ok),
        "metric": "max_defect", "value": max(worst, proj_defect),
        "degree": N, "label": spec_rep.label,
        "spectrum_defect": spec_rep.spectrum_defect,
        "projection_defect": proj_defect,
    }
    path = ctx.figure("hardy")
    if path:
        figures.spectrum_figure(path, spec_rep.computed,
                                f"disc-rotation spectrum (N={N})")
        entry["figure"] = path
    return [entry]


_CHECKS = {
    "analyze-spectrum": _check_analyze_spectrum,
    "verify-identities": _check_verify_identities,
    "periodic-projections": _check_periodic_projections,
    "point-mapping": _check_point_mapping,
    "residual-mapping": _check_residual_mapping,
    "resolvent-mapping": _check_resolvent_mapping,
    "eigenspaces": _check_eigenspaces,
    "hardy": _check_hardy,
}


def run_scenario(cfg: ScenarioConfig) -> int:
    """Execute the requested checks and emit the report; returns the exit code."""
    ctx = _Context(cfg)
    threads = int(os.environ.get("SGSPEC_THREADS", "1") or "1")
    entries: List[dict] = []
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            futures = [(check, pool.submit(_CHECKS[check], ctx)) for check in cfg.checks]
            for _, fut in futures:
                entries.extend(fut.result())
    else:
        for check in cfg.checks:
            entries.extend(_CHECKS[check](ctx))

    data = emit_report(entries, cfg.fmt, cfg.out_path)
    if cfg.out_path is None:
        sys.stdout.write(data.decode("utf-8"))
    return 0 if all(e["verdict"] == "pass" for e in entries) else 1


def _parse_args(argv) -> ScenarioConfig:
    parser = argparse.ArgumentParser(prog="sgspec")
    sub = parser.add_subparsers(dest="command", required=True)
    an = sub.add_parser("analyze", help="run verification checks on a generator")
    an.add_argument("-i", "--input", required=True,
                    help="generator JSON file or inline catalog:id?key=value")
    an.add_argument("--checks", default="analyze-spectrum",
                    help=f"comma list from {','.join(CHECK_IDS)}, or 'all'")
    an.add_argument("--t", default="1", help="comma list of evaluation times")
    an.add_argument("--tol", type=float, default=1e-8)
    an.add_argument("--format", dest="fmt", default="json", choices=FORMATS)
    an.add_argument("-o", "--output", default=None, help="report path (stdout if omitted)")
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--evaluator", default=None,
                    help="override evaluator source (for generator/evaluator mismatch tests)")
    an.add_argument("--figures", default=None, help="directory for rendered figures")
    an.add_argument("--orbit-nodes", type=int, default=512)
    an.add_argument("--orbit-scheme", default="simpson")
    an.add_argument("--contour-nodes", type=int, default=64)
    an.add_argument("--contour-radius", type=float, default=0.5)

    ns = parser.parse_args(argv)
    checks = list(CHECK_IDS) if ns.checks.strip() == "all" else \
        [c.strip() for c in ns.checks.split(",") if c.strip()]
    try:
        t_values = [float(t) for t in ns.t.split(",") if t.strip()]
        quad = QuadratureConfig(orbit_nodes=ns.orbit_nodes, orbit_scheme=ns.orbit_scheme,
                                contour_nodes=ns.contour_nodes,
                                contour_radius=ns.contour_radius, tol=ns.tol)
    except ValueError as exc:
        raise ConfigError(str(exc))
    return ScenarioConfig(
        generator_source=ns.input, checks=checks, t_values=t_values,
        quadrature=quad, tol=ns.tol, fmt=ns.fmt, out_path=ns.output,
        seed=ns.seed, evaluator_source=ns.evaluator, figures_dir=ns.figures,
    )


def main(argv=None) -> int:
    try:
        cfg = _parse_args(argv if argv is not None else sys.argv[1:])
        code = run_scenario(cfg)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except SgspecError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return code


if __name__ == "__main__":
    sys.exit(main())
