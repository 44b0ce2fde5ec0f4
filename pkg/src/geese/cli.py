"""Command-line front end: geese plan | simulate | catalog | serve.

All outputs are canonical JSON (or trace CSV) and byte-identical across
repeated runs with the same inputs and seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .catalog import CatalogError, default_catalog, load_catalog
from .planner import (
    Infeasibility,
    OracleRefusal,
    build_model,
    canonical_json,
    oracle_enumerate,
    plan_from_document,
    solve,
)
from .scenario import ScenarioError, load_scenario
from .simulator import (
    DEFAULT_N_JOBS,
    DEFAULT_PER_JOB_WORK_MS,
    collab_config,
    export_traces_csv,
    run_monte_carlo,
    simulate_collaborative,
    simulate_delivery,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="geese",
        description="Plan and simulate UAV-delivered edge cloudlet deployments.",
    )
    parser.add_argument("--version", action="version", version=f"geese {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--catalog", help="catalog JSON path (default: embedded)")
        p.add_argument("--seed", type=int, help="override the scenario seed")
        p.add_argument("--format", choices=["json", "csv"], default="json")

    p_cat = sub.add_parser("catalog", help="print or validate a catalog")
    common(p_cat)

    p_plan = sub.add_parser("plan", help="solve a scenario's allocation problem")
    common(p_plan)
    p_plan.add_argument("scenario", help="scenario JSON path")
    p_plan.add_argument(
        "--verify",
        action="store_true",
        help="cross-check the optimum against the exhaustive oracle",
    )
    p_plan.add_argument(
        "--max-oracle-candidates",
        type=int,
        default=10**8,
        help="candidate-vector budget for --verify",
    )

    p_sim = sub.add_parser("simulate", help="run a seeded simulation")
    common(p_sim)
    p_sim.add_argument("scenario", nargs="?", help="scenario JSON path")
    mode = p_sim.add_mutually_exclusive_group(required=True)
    mode.add_argument("--collab", action="store_true")
    mode.add_argument("--delivery", action="store_true")
    p_sim.add_argument("--regime", default="surface")
    p_sim.add_argument("--role", default="workers", choices=["master", "workers"])
    p_sim.add_argument("--jobs", type=int, default=DEFAULT_N_JOBS)
    p_sim.add_argument("--workers", type=int, default=3)
    p_sim.add_argument("--per-job-work-ms", type=float, default=DEFAULT_PER_JOB_WORK_MS)
    p_sim.add_argument("--reps", type=int, default=1)
    p_sim.add_argument("--plan", dest="plan_path", help="plan document for --delivery")
    p_sim.add_argument(
        "--plan-inline",
        action="store_true",
        help="solve the scenario and simulate the resulting plan",
    )
    p_sim.add_argument("--out", help="write the trace CSV to this path")

    p_srv = sub.add_parser("serve", help="run the operator console HTTP service")
    common(p_srv)
    p_srv.add_argument("--bind", default="127.0.0.1:8472")
    p_srv.add_argument("--state-dir", help="run-record directory (or GEESE_STATE_DIR)")
    return parser


def _load_cli_catalog(args):
    if args.catalog:
        return load_catalog(args.catalog)
    return default_catalog()


def _cmd_catalog(args) -> int:
    catalog = _load_cli_catalog(args)
    sys.stdout.write(canonical_json(catalog.to_document()))
    return EXIT_OK


def _cmd_plan(args) -> int:
    catalog_override = load_catalog(args.catalog) if args.catalog else None
    request, catalog, _seed, _doc = load_scenario(args.scenario, catalog_override)
    model = build_model(request, catalog)
    result = solve(model)
    doc = result.to_document()
    if args.verify:
        try:
            oracle = oracle_enumerate(model, max_candidates=args.max_oracle_candidates)
            if isinstance(result, Infeasibility):
                agreed = isinstance(oracle, Infeasibility)
                doc["verify"] = {"oracle": "infeasible-equal" if agreed else "mismatch"}
            elif isinstance(oracle, Infeasibility):
                doc["verify"] = {"oracle": "mismatch"}
            else:
                cost_equal = oracle.total_cost == result.total_cost
                same = oracle.to_document()["assignments"] == doc["assignments"]
                doc["verify"] = {
                    "oracle": "cost-equal" if cost_equal else "mismatch",
                    "assignments_identical": same,
                    "oracle_cost": oracle.total_cost,
                }
        except OracleRefusal as exc:
            doc["verify"] = {"oracle": "refused", "search_space": exc.size}
    sys.stdout.write(canonical_json(doc))
    return EXIT_INFEASIBLE if isinstance(result, Infeasibility) else EXIT_OK


def _cmd_simulate(args) -> int:
    catalog_override = load_catalog(args.catalog) if args.catalog else None
    request = catalog = None
    seed = 0
    if args.scenario:
        request, catalog, seed, _doc = load_scenario(args.scenario, catalog_override)
    elif catalog_override is not None:
        catalog = catalog_override
    else:
        catalog = default_catalog()
    if args.seed is not None:
        seed = args.seed

    if args.collab:
        config = collab_config(
            regime=args.regime,
            role=args.role,
            n_workers=args.workers,
            n_jobs=args.jobs,
            per_job_work_ms=args.per_job_work_ms,
            seed=seed,
            calibration=catalog.calibration,
        )
        if args.reps > 1:
            mc = run_monte_carlo(config, args.reps)
            sys.stdout.write(canonical_json(mc.to_document()))
            return EXIT_OK
        report = simulate_collaborative(config)
    else:
        if request is None:
            sys.stderr.write("error: --delivery requires a scenario file\n")
            return EXIT_ERROR
        if args.plan_path:
            plan_doc = json.loads(Path(args.plan_path).read_text())
            plan = plan_from_document(plan_doc)
        elif args.plan_inline:
            result = solve(build_model(request, catalog))
            if isinstance(result, Infeasibility):
                sys.stdout.write(canonical_json(result.to_document()))
                return EXIT_INFEASIBLE
            plan = result
        else:
            sys.stderr.write(
                "error: --delivery requires --plan PATH or --plan-inline\n"
            )
            return EXIT_ERROR
        report = simulate_delivery(plan, request, catalog)

    csv_text = export_traces_csv(report)
    if args.out:
        Path(args.out).write_text(csv_text)
    if args.format == "csv":
        sys.stdout.write(csv_text)
    else:
        doc = report.to_document()
        sys.stdout.write(canonical_json(doc))
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    host, _, port = args.bind.rpartition(":")
    state_dir = args.state_dir or os.environ.get("GEESE_STATE_DIR", "./geese-state")
    catalog = _load_cli_catalog(args)
    app = create_app(catalog=catalog, state_dir=state_dir)
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port))
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "catalog": _cmd_catalog,
        "plan": _cmd_plan,
        "simulate": _cmd_simulate,
        "serve": _cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (CatalogError, ScenarioError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
