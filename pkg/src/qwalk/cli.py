"""``qwalk`` command line: spectra, Q-graph closed forms, PST certificates, PGST search, time evolution.

Every command prints one JSON report envelope to stdout. Exit codes: 0 success (a verdict was
reached, positive or negative), 2 input error, 3 precondition violation, 4 PGST search failure.
"""

from __future__ import annotations

import hashlib
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

import click
import numpy as np

from . import __version__
from .arithmetic import INTEGER_TOL
from .errors import InputError, PreconditionError
from .graph_core import Graph, from_json, generate, parse_generator_spec, q_graph, signless_laplacian, to_json
from .qgraph_forms import closed_form_spectrum, edge_support_check, merged_values
from .spectra import CLUSTER_TOL, COSPECTRAL_TOL, SUPPORT_TOL, decompose
from .transfer import PGSTFailure, certify_pst, qgraph_no_pst_verdict, search_pgst_time
from .walk import default_step, fidelity_scan, write_scan_csv

EXIT_INPUT, EXIT_PRECONDITION, EXIT_SEARCH = 2, 3, 4


class SearchFailed(Exception):
    def __init__(self, report: str):
        self.report = report


def _load_graph(gen: str | None, file: str | None) -> Graph:
    if (gen is None) == (file is None):
        raise InputError("give exactly one of --gen FAMILY:PARAM or --file PATH")
    if gen is not None:
        return generate(*parse_generator_spec(gen))
    path = Path(file)
    if not path.is_file():
        raise InputError(f"graph file not found: {file}")
    return from_json(path.read_text())


def _vertex(g: Graph, token: str, label: str) -> int:
    if label == "bits":
        return g.vertex_index(token)
    try:
        x = int(token)
    except ValueError:
        raise InputError(f"vertex must be an integer index, got {token!r}") from None
    if not 0 <= x < g.n:
        raise InputError(f"vertex {x} out of range for n={g.n}")
    return x


def _envelope(ctx: click.Context, command: str, g: Graph, payload: dict) -> str:
    obj = ctx.obj
    report = {
        "command": command,
        "input_digest": hashlib.sha256(to_json(g).encode()).hexdigest(),
        "tolerances": obj["tolerances"],
        "payload": payload,
        "version": __version__,
    }
    if obj["timestamp"]:
        report["timestamp"] = datetime.now(timezone.utc).isoformat()
    return json.dumps(report, sort_keys=True, indent=2)


def graph_source(fn):
    fn = click.option("--gen", help="Generator spec FAMILY:PARAM, e.g. hypercube:3.")(fn)
    fn = click.option("--file", "file", help="Graph JSON file {\"n\": int, \"edges\": [[u, v], ...]}.")(fn)
    return fn


def vertex_pair(fn):
    fn = click.argument("v")(fn)
    fn = click.argument("u")(fn)
    fn = click.option(
        "--label", type=click.Choice(["index", "bits"]), default="index", show_default=True,
        help="Address vertices by index or by bit-string label (hypercube families).",
    )(fn)
    return fn


@click.group()
@click.version_option(__version__)
@click.option("--cluster-tol", type=float, default=CLUSTER_TOL, show_default=True)
@click.option("--support-tol", type=float, default=SUPPORT_TOL, show_default=True)
@click.option("--cospectral-tol", type=float, default=COSPECTRAL_TOL, show_default=True)
@click.option("--integer-tol", type=float, default=INTEGER_TOL, show_default=True)
@click.option("--timestamp", is_flag=True, help="Add a wall-clock timestamp (breaks byte-identical output).")
@click.pass_context
def cli(ctx, cluster_tol, support_tol, cospectral_tol, integer_tol, timestamp):
    """Signless-Laplacian quantum walks on graphs and their Q-graphs."""
    ctx.obj = {
        "tolerances": {
            "cluster_tol": cluster_tol,
            "support_tol": support_tol,
            "cospectral_tol": cospectral_tol,
            "integer_tol": integer_tol,
        },
        "timestamp": timestamp,
    }


@cli.command()
@graph_source
@click.option("--projectors", is_flag=True, help="Include the eigenprojectors (row-major).")
@click.pass_context
def spectrum(ctx, gen, file, projectors):
    """Signless-Laplacian eigenvalues, multiplicities and integer-snap flags."""
    g = _load_graph(gen, file)
    sd = decompose(signless_laplacian(g), ctx.obj["tolerances"]["cluster_tol"])
    payload = {"n": g.n, "m": g.m, "decomposition": sd.to_dict(projectors)}
    click.echo(_envelope(ctx, "spectrum", g, payload))


@cli.command()
@graph_source
@click.option("--closed-form", "mode", flag_value="closed-form", help="Closed-form spectrum only.")
@click.option("--numeric", "mode", flag_value="numeric", help="Dense eigensolver on the Q-graph only.")
@click.option("--both", "mode", flag_value="both", default=True, help="Both, with their deviation (default).")
@click.option("--projectors", is_flag=True)
@click.pass_context
def qgraph(ctx, gen, file, mode, projectors):
    """Signless-Laplacian spectrum of the Q-graph of a regular graph."""
    g = _load_graph(gen, file)
    tol = ctx.obj["tolerances"]["cluster_tol"]
    payload: dict = {"n": g.n, "m": g.m, "mode": mode}
    cf = None
    if mode in ("closed-form", "both"):
        cf = closed_form_spectrum(g, decompose(signless_laplacian(g), tol))
        payload["closed_form"] = cf.to_dict(projectors)
        payload["kernel_dimension"] = int(cf.kernel_basis.shape[1])
        hits = edge_support_check(g, cf.base)
        payload["edge_support_nonempty"] = all(hits)
    if mode in ("numeric", "both"):
        Q = signless_laplacian(q_graph(g).graph)
        num = decompose(Q, tol)
        payload["numeric"] = num.to_dict(projectors)
        if cf is not None:
            raw = np.sort(np.linalg.eigvalsh(Q.astype(float)))[::-1]
            payload["max_eigenvalue_deviation"] = float(np.abs(cf.raw_values - raw).max())
            merged = merged_values(cf)
            if len(merged) == len(num.eigenvalues):
                payload["max_projector_deviation"] = max(
                    float(np.abs(p - f).max()) for (_, _, p), f in zip(merged, num.projectors)
                )
            else:
                payload["max_projector_deviation"] = None
    click.echo(_envelope(ctx, "qgraph", g, payload))


@cli.command()
@graph_source
@vertex_pair
@click.option("--qgraph", "with_qgraph", is_flag=True, help="Also report the no-PST verdict for the Q-graph.")
@click.pass_context
def pst(ctx, gen, file, label, u, v, with_qgraph):
    """Certify or refute perfect state transfer between U and V."""
    g = _load_graph(gen, file)
    a, b = _vertex(g, u, label), _vertex(g, v, label)
    if a == b:
        raise InputError("U and V must differ")
    tols = ctx.obj["tolerances"]
    sd = decompose(signless_laplacian(g), tols["cluster_tol"])
    cert = certify_pst(
        sd, a, b,
        support_tol=tols["support_tol"], cospectral_tol=tols["cospectral_tol"], integer_tol=tols["integer_tol"],
    )
    payload = {"certificate": cert.to_dict()}
    if with_qgraph:
        payload["qgraph_verdict"] = qgraph_no_pst_verdict(g, sd, pairs=[(a, b)]).to_dict()
    click.echo(_envelope(ctx, "pst", g, payload))


@cli.command()
@graph_source
@vertex_pair
@click.option("--epsilon", type=float, default=0.01, show_default=True)
@click.option("--alpha-max", type=int, default=10**6, show_default=True)
@click.pass_context
def pgst(ctx, gen, file, label, u, v, epsilon, alpha_max):
    """Search a pretty-good-state-transfer time between original vertices U, V of the Q-graph."""
    g = _load_graph(gen, file)
    a, b = _vertex(g, u, label), _vertex(g, v, label)
    tols = ctx.obj["tolerances"]
    sd = decompose(signless_laplacian(g), tols["cluster_tol"])
    workers = int(os.environ.get("QWALK_THREADS", "1") or 1)
    result = search_pgst_time(g, a, b, epsilon, alpha_max, base=sd, workers=workers, support_tol=tols["support_tol"])
    if isinstance(result, PGSTFailure):
        raise SearchFailed(_envelope(ctx, "pgst", g, result.to_dict()))
    click.echo(_envelope(ctx, "pgst", g, {"found": True, "witness": result.to_dict()}))


@cli.command()
@graph_source
@vertex_pair
@click.option("--t-max", type=float, required=True)
@click.option("--step", type=float, default=None, help="Grid step (default 1e-3 * 2 pi / q_max).")
@click.option("--out", type=click.Path(dir_okay=False), default="evolve.csv", show_default=True, help="CSV path.")
@click.option("--qgraph", "on_qgraph", is_flag=True, help="Evolve on the Q-graph (U, V index its vertices).")
@click.pass_context
def evolve(ctx, gen, file, label, u, v, t_max, step, out, on_qgraph):
    """Sample the transfer fidelity U -> V over [0, T_MAX] and write it as CSV."""
    g = _load_graph(gen, file)
    tol = ctx.obj["tolerances"]["cluster_tol"]
    if on_qgraph:
        spec = closed_form_spectrum(g, decompose(signless_laplacian(g), tol))
        sd = spec.as_decomposition()
        qg = q_graph(g)
        a = _vertex(qg.graph, u, "index")
        b = _vertex(qg.graph, v, "index")
        names = [qg.role_name(a), qg.role_name(b)]
    else:
        sd = decompose(signless_laplacian(g), tol)
        a, b = _vertex(g, u, label), _vertex(g, v, label)
        names = [str(a), str(b)]
    scan = fidelity_scan(sd, a, b, t_max, step)
    write_scan_csv(scan, out)
    payload = {
        "u": a,
        "v": b,
        "vertex_names": names,
        "on_qgraph": on_qgraph,
        "t_max": t_max,
        "step": step if step is not None else default_step(sd),
        "csv": str(out),
        "peak": scan.to_dict(),
    }
    click.echo(_envelope(ctx, "evolve", g, payload))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, prog_name="qwalk", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return EXIT_INPUT
    except click.Abort:
        return 1
    except InputError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INPUT
    except PreconditionError as exc:
        click.echo(f"precondition violated: {exc}", err=True)
        return EXIT_PRECONDITION
    except SearchFailed as exc:
        click.echo(exc.report)
        return EXIT_SEARCH
    return 0


if __name__ == "__main__":
    sys.exit(main())
