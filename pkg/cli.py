import json
import logging
import math
from contextlib import contextmanager
from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler

from config import sim_config
from dataset import resolve_dataset
from exceptions import InvalidRange, QMinSearchError
from experiment import ExperimentConfig, ExperimentWorkflow
from groverlong import grover_long_search, make_params
from metrics import complexity_curve, curve_to_csv
from minsearch import SearchParams
from oraclesynth import plan_report, synthesize_oracle
from simcore import dump_statevector
from verification import SUITES, assert_all_passed, run_suite

logger = logging.getLogger(__name__)

app = typer.Typer(
    help="Exact-phase quantum minimum search simulator: experiments, oracle synthesis, complexity tables, verification.",
    add_completion=False,
    no_args_is_help=True,
)


def _configure_logging(level: str) -> None:
    # stdout carries JSON/CSV only; log records go to stderr
    logging.basicConfig(
        level=level.upper(),
        format="%(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


@contextmanager
def _domain_errors():
    """Turn domain and validation errors into error JSON on stdout plus the matching exit code."""
    try:
        yield
    except QMinSearchError as e:
        logger.error(e.message)
        typer.echo(json.dumps(e.to_dict(), indent=2, default=str))
        raise typer.Exit(code=e.exit_code)
    except ValidationError as e:
        logger.error(f"Invalid parameters: {e.error_count()} error(s)")
        payload = {
            "error": "ValidationError",
            "message": "Invalid parameters",
            "details": [{"loc": list(err["loc"]), "msg": err["msg"]} for err in e.errors()],
        }
        typer.echo(json.dumps(payload, indent=2, default=str))
        raise typer.Exit(code=2)


@app.callback()
def main(
    log_level: str = typer.Option(sim_config.log_level, "--log-level", help="Logging level (records go to stderr)."),
):
    _configure_logging(log_level)


@app.command()
def run(
    algorithm: str = typer.Option("oqmsa", "--algorithm", help="oqmsa, dha or both."),
    dataset: str = typer.Option(..., "--dataset", help="CSV/JSON path, table-a, table-b or full:<n>."),
    trials: int = typer.Option(1000, "--trials"),
    seed: int = typer.Option(sim_config.default_seed, "--seed"),
    n_qubits: Optional[int] = typer.Option(None, "--n-qubits", help="Code width; inferred from the data when omitted."),
    jobs: int = typer.Option(sim_config.jobs, "--jobs", help="Worker processes; results do not depend on it."),
    lam: float = typer.Option(6 / 5, "--lambda", help="Growth factor of the iteration schedule."),
    ratio_threshold: float = typer.Option(1 / 9, "--ratio-threshold"),
    clamp_policy: str = typer.Option("clamp", "--clamp-policy", help="clamp or error."),
    tmax_variant: str = typer.Option("alg1", "--tmax-variant", help="alg1 or eq5."),
    engine: str = typer.Option("auto", "--engine", help="statevector, subspace or auto."),
    output: Optional[Path] = typer.Option(None, "--output", help="Write the report here instead of stdout."),
    traces: Optional[Path] = typer.Option(None, "--traces", help="JSON-lines file with one trace per trial."),
):
    """Run seeded minimum-search trials and print the experiment report."""
    with _domain_errors():
        params = SearchParams(
            lam=lam,
            ratio_threshold=ratio_threshold,
            seed=seed,
            clamp_policy=clamp_policy,
            tmax_variant=tmax_variant,
            engine=engine,
        )
        config = ExperimentConfig(
            algorithm=algorithm,
            dataset=dataset,
            trials=trials,
            seed=seed,
            params=params,
            n_qubits=n_qubits,
            jobs=jobs,
        )
        workflow = ExperimentWorkflow(config)
        report = workflow.run()
        if traces is not None:
            workflow.write_traces(traces)

    text = report.model_dump_json(indent=2)
    if output is not None:
        output.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Report written to {output}")
    else:
        typer.echo(text)


@app.command()
def synth(
    d: int = typer.Option(..., "--d", help="Threshold d'; codes <= d' are marked."),
    n: int = typer.Option(..., "--n", help="Number of qubits."),
    phi: float = typer.Option(math.pi, "--phi", help="Oracle phase in radians."),
):
    """Decompose the threshold oracle into multi-controlled phase blocks."""
    with _domain_errors():
        plan = synthesize_oracle(d, n, phi)
    typer.echo(json.dumps(plan_report(plan), indent=2))


@app.command()
def complexity(
    n_from: int = typer.Option(4, "--from", help="Smallest qubit count."),
    n_to: int = typer.Option(20, "--to", help="Largest qubit count."),
    m0: str = typer.Option("half", "--m0", help="Initial marked count: half (N/2) or one."),
    fmt: str = typer.Option("csv", "--format", help="csv or json."),
    output: Optional[Path] = typer.Option(None, "--output"),
):
    """Tabulate the analytic iteration total against the DHA bound for N = 2**n."""
    with _domain_errors():
        if fmt not in ("csv", "json"):
            raise InvalidRange(f"Unknown format {fmt!r}; choose csv or json", format=fmt)
        rows = complexity_curve(n_from, n_to, m0)

    if fmt == "csv":
        text = curve_to_csv(rows)
    else:
        text = json.dumps([row.model_dump() for row in rows], indent=2) + "\n"

    if output is not None:
        output.write_text(text, encoding="utf-8")
        logger.info(f"Wrote {len(rows)} row(s) to {output}")
    else:
        typer.echo(text, nl=False)


@app.command()
def verify(
    suite: str = typer.Argument("all", help=f"One of: {', '.join(SUITES)}."),
    samples: int = typer.Option(10_000, "--samples", help="Random configurations for the engine cross-check."),
    seed: int = typer.Option(0, "--seed"),
):
    """Run the property suites; exit 1 with the first counterexample on failure."""
    with _domain_errors():
        results = run_suite(suite, samples=samples, seed=seed)
        assert_all_passed(results)
    summary = {
        "suite": suite,
        "passed": True,
        "properties": [{"name": r.name, "checked": r.checked, "failed": r.failed} for r in results],
    }
    typer.echo(json.dumps(summary, indent=2))


@app.command()
def state(
    dataset: str = typer.Option(..., "--dataset"),
    d: int = typer.Option(..., "--d", help="Threshold d'."),
    t: int = typer.Option(1, "--t", help="Grover-Long iterations."),
    n_qubits: Optional[int] = typer.Option(None, "--n-qubits"),
):
    """Dump the statevector after t Grover-Long iterations as [re, im] pairs."""
    with _domain_errors():
        data = resolve_dataset(dataset, n_qubits=n_qubits)
        params = make_params(t, d + 1, data.n_codes)
        outcome = grover_long_search(data, d, t, params, "statevector")
        logger.info(f"phi={params.phi:.6f} clamped={params.clamped} marked probability={outcome.marked_probability():.6f}")
    typer.echo(dump_statevector(outcome.state))


if __name__ == "__main__":
    app()
