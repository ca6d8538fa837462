"""Command-line workflows: generate instances, solve, sweep, verify, embed."""

from __future__ import annotations

import csv
import json
import sys

import click
import numpy as np

from . import embedding as emb_mod
from . import oracle as oracle_mod
from .errors import SpectraplexError
from .generators import generate_layer
from .graphs import (
    MultiplexSpec,
    assemble_supra_laplacian,
    layer_from_dict,
    layer_to_dict,
    load_multiplex,
    save_multiplex,
)
from .optimize import ObjectiveKind, SolverOptions, solve
from .spectral import spectral_bounds, threshold_report
from .sweep import correlate_centralities, sweep_budget

_OBJECTIVES = click.Choice(["lambda2", "lambdan", "width"])


def _write_json(data, out):
    text = json.dumps(data, indent=2)
    if out is None:
        click.echo(text)
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _result_to_dict(result, embedding_file=None):
    d = {
        "objective": result.objective.value,
        "budget": result.weights.budget,
        "weights": [float(w) for w in result.weights.weights],
        "objective_value": result.objective_value,
        "lambda2": result.lambda2,
        "lambda_n": result.lambda_n,
        "mu": result.shift_mu,
        "xi": result.dual.xi,
        "duality_gap": result.duality_gap,
        "status": result.status,
        "solver_iterations": result.solver_iterations,
        "eig_head": None,
        "eig_tail": None,
        "embedding_file": embedding_file,
    }
    return d


@click.group()
def main():
    """Design interlayer weights of a two-layer multiplex for extremal
    Laplacian spectral properties."""


@main.command()
@click.option("--model", type=click.Choice(["ba", "er", "geo", "ws",
                                            "barabasi_albert", "erdos_renyi",
                                            "geometric", "watts_strogatz"]),
              default=None, help="Random layer model.")
@click.option("--n", type=int, default=None, help="Nodes per layer.")
@click.option("--m", type=int, default=None, help="BA attachment count.")
@click.option("--p", type=float, default=None, help="ER/WS probability.")
@click.option("--r", type=float, default=None, help="Geometric radius.")
@click.option("--k", type=int, default=None, help="WS ring degree.")
@click.option("--seed", type=int, default=0)
@click.option("--seed2", type=int, default=None,
              help="Also generate a second layer with this seed and emit a multiplex.")
@click.option("--layer1", type=click.Path(exists=True), default=None,
              help="Combine an existing layer JSON instead of generating.")
@click.option("--layer2", type=click.Path(exists=True), default=None)
@click.option("--out", type=click.Path(), required=True)
def gen(model, n, m, p, r, k, seed, seed2, layer1, layer2, out):
    """Generate a layer JSON, a two-layer multiplex, or pair existing layers."""
    if layer1 and layer2:
        with open(layer1) as fh:
            l1 = layer_from_dict(json.load(fh))
        with open(layer2) as fh:
            l2 = layer_from_dict(json.load(fh))
        save_multiplex(MultiplexSpec(l1, l2), out)
        click.echo(f"wrote multiplex {out}")
        return
    if model is None or n is None:
        raise click.UsageError("need --model and --n (or --layer1/--layer2)")
    params = {key: val for key, val in (("m", m), ("p", p), ("r", r), ("k", k))
              if val is not None}
    try:
        first = generate_layer(model, n, seed, **params)
        if seed2 is not None:
            second = generate_layer(model, n, seed2, **params)
            save_multiplex(MultiplexSpec(first, second), out)
            click.echo(f"wrote multiplex {out}")
        else:
            with open(out, "w") as fh:
                json.dump(layer_to_dict(first), fh, indent=2)
            click.echo(f"wrote layer {out}")
    except SpectraplexError as exc:
        raise click.ClickException(str(exc))


@main.command("solve")
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--objective", type=_OBJECTIVES, required=True)
@click.option("--budget", type=float, required=True)
@click.option("--tol", type=float, default=1e-6, help="Certified gap tolerance.")
@click.option("--out", type=click.Path(), default=None)
@click.option("--embed-out", type=click.Path(), default=None,
              help="Also export the certificate embedding as CSV.")
def solve_cmd(multiplex_path, objective, budget, tol, out, embed_out):
    """Solve one design problem at one budget with a certified gap."""
    spec = load_multiplex(multiplex_path)
    try:
        result = solve(spec, objective, budget, SolverOptions(gap_tol=tol))
    except SpectraplexError as exc:
        raise click.ClickException(str(exc))
    vals = np.linalg.eigvalsh(assemble_supra_laplacian(spec, result.weights.weights))
    d = _result_to_dict(result, embedding_file=embed_out)
    d["eig_head"] = [float(v) for v in vals[:4]]
    d["eig_tail"] = [float(v) for v in vals[-4:]]
    if embed_out:
        realization = emb_mod.embedding_from_result(result)
        _write_embedding_csv(realization, spec, embed_out)
    _write_json(d, out)


def _write_embedding_csv(realization, spec, out):
    N = spec.num_nodes_per_layer
    pts = realization.points
    with open(out, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["node", "layer"] + [f"x{i+1}" for i in range(pts.shape[1])])
        for node in range(pts.shape[0]):
            layer = 1 if node < N else 2
            writer.writerow([node, layer] + [float(v) for v in pts[node]])


@main.command()
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--objective", type=_OBJECTIVES, required=True)
@click.option("--cmin", type=float, required=True)
@click.option("--cmax", type=float, required=True)
@click.option("--points", type=int, required=True)
@click.option("--log", is_flag=True, help="Geometric budget grid.")
@click.option("--tol", type=float, default=1e-6)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
def sweep(multiplex_path, objective, cmin, cmax, points, log, tol, out, fmt):
    """Sweep budgets, recording objective curves, multiplicities, embedding
    dimensions and detected regime transitions."""
    spec = load_multiplex(multiplex_path)
    result = sweep_budget(spec, objective, cmin, cmax, points,
                          SolverOptions(gap_tol=tol), log=log)
    if fmt == "csv":
        text = result.to_csv(out)
        if text is not None:
            click.echo(text, nl=False)
    else:
        text = result.to_json(out)
        if text is not None:
            click.echo(text)
    for t in result.transitions:
        click.echo(
            f"# transition at c={t.budget:.6g}: multiplicity {t.before} -> {t.after}",
            err=True,
        )


@main.command()
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), default=None)
def threshold(multiplex_path, out):
    """Analytic thresholds: the uniform-optimality budget c* and, when the
    nodal-line theorem applies, the spectral-radius budget c1*."""
    spec = load_multiplex(multiplex_path)
    report = threshold_report(spec)
    data = {
        "c_star": report.c_star,
        "c1_star": report.c1_star,
        "c1_star_reason": report.c1_star_reason,
        "q_matrix": None if report.q_matrix is None else report.q_matrix.tolist(),
    }
    _write_json(data, out)


@main.command()
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--objective", type=_OBJECTIVES, default="lambda2")
@click.option("--budget", type=float, required=True)
@click.option("--scaled", is_flag=True, help="Solve the scaled realization problem instead.")
@click.option("--which", type=click.Choice(["auto", "u", "v"]), default="auto")
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv")
def embed(multiplex_path, objective, budget, scaled, which, out, fmt):
    """Export a node realization (from a dual certificate or the scaled
    problem) as CSV or JSON rows (node, layer, x1..xd)."""
    spec = load_multiplex(multiplex_path)
    try:
        if scaled:
            realization = emb_mod.scaled_embedding(spec, budget).embedding
        else:
            result = solve(spec, objective, budget)
            realization = emb_mod.embedding_from_result(result, which)
    except SpectraplexError as exc:
        raise click.ClickException(str(exc))
    if fmt == "csv":
        if out is None:
            N = spec.num_nodes_per_layer
            writer = csv.writer(sys.stdout)
            writer.writerow(["node", "layer"] +
                            [f"x{i+1}" for i in range(realization.points.shape[1])])
            for node in range(realization.points.shape[0]):
                writer.writerow([node, 1 if node < N else 2] +
                                [float(v) for v in realization.points[node]])
        else:
            _write_embedding_csv(realization, spec, out)
    else:
        N = spec.num_nodes_per_layer
        data = {
            "source": realization.source,
            "effective_dimension": realization.effective_dimension,
            "points": [
                {"node": i, "layer": 1 if i < N else 2,
                 "coords": [float(v) for v in realization.points[i]]}
                for i in range(realization.points.shape[0])
            ],
        }
        _write_json(data, out)


@main.command()
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--objective", type=_OBJECTIVES, required=True)
@click.option("--budget", type=float, required=True)
@click.option("--tol", type=float, default=1e-6)
@click.option("--seed", type=int, default=0, help="Seed for the projection trials.")
@click.option("--out", type=click.Path(), default=None)
def verify(multiplex_path, objective, budget, tol, seed, out):
    """Solve and run the verification battery: certified gap, KKT residuals,
    closed-form bounds and embedding projection.  Exit code 1 on failure."""
    spec = load_multiplex(multiplex_path)
    result = solve(spec, objective, budget, SolverOptions(gap_tol=tol))
    checks = {}
    checks["status_optimal"] = result.status == "optimal"
    checks["certified_gap"] = result.duality_gap <= tol
    kkt = oracle_mod.kkt_check(spec, budget, result)
    checks["kkt_complementarity"] = all(v <= 1e-6 * max(1.0, abs(result.objective_value))
                                        for v in kkt.complementarity.values())
    checks["kkt_active_slack"] = kkt.active_slack_max <= 1e-6
    bounds = spectral_bounds(spec, budget)
    checks["lambda2_bounds"] = result.lambda2 <= min(
        bounds.lambda2_linear_cap, bounds.lambda2_ave_cap) + 1e-6
    checks["lambdan_bound"] = result.lambda_n >= bounds.lambdan_lower - 1e-6
    checks["width_bound"] = (result.lambda_n - result.lambda2) >= bounds.width_lower - 1e-6
    try:
        realization = emb_mod.embedding_from_result(result)
        kind = ObjectiveKind.from_name(objective)
        lam = result.lambda_n if kind is ObjectiveKind.MIN_LAMBDA_N else result.lambda2
        L = assemble_supra_laplacian(spec, result.weights.weights)
        resid = emb_mod.projection_residual(realization, L, lam, seed=seed)
        checks["projection_residual"] = resid <= 1e-5
    except SpectraplexError as exc:
        checks["projection_residual"] = False
        click.echo(f"embedding failed: {exc}", err=True)
    for name, ok in checks.items():
        click.echo(f"{'PASS' if ok else 'FAIL'} {name}")
    report = {
        "checks": checks,
        "duality_gap": result.duality_gap,
        "objective_value": result.objective_value,
        "kkt_active_slack_max": kkt.active_slack_max,
    }
    if out:
        _write_json(report, out)
    if not all(checks.values()):
        sys.exit(1)


@main.command()
@click.option("--multiplex", "multiplex_path", type=click.Path(exists=True), required=True)
@click.option("--objective", type=_OBJECTIVES, required=True)
@click.option("--budget", type=float, required=True)
@click.option("--out", type=click.Path(), default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json")
def correlate(multiplex_path, objective, budget, out, fmt):
    """Correlate optimal weights with per-layer centrality measures."""
    spec = load_multiplex(multiplex_path)
    result = solve(spec, objective, budget)
    table = correlate_centralities(spec, result)
    if fmt == "json":
        _write_json(table.as_dict(), out)
    else:
        rows = [["measure", "layer", "pearson_r"]] + [
            [measure, layer, "" if r is None else r] for measure, layer, r in table.rows
        ]
        if out is None:
            writer = csv.writer(sys.stdout)
            writer.writerows(rows)
        else:
            with open(out, "w", newline="") as fh:
                csv.writer(fh).writerows(rows)


if __name__ == "__main__":
    main()
