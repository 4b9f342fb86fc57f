"""Command-line front end.

Subcommands chain the library into reproducible workflows: build an operator
event family and certify its graph constants, audit a graph-state paradox,
run the prepare-and-measure simulator, and analyze count tables or the
bundled reference dataset into witness reports with plot data and figures.

Exit codes: 0 success, 2 partial/uncertified results, 1 error.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys
from pathlib import Path

import numpy as np

from . import analysis, exclusivity, fixtures, graphstate, independence
from . import linalg, mabk, serialize, theta
from .experiment import NoiseModel, simulate_counts, standard_plan
from .pauli import PauliString


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _out_dir(args, required: bool = True) -> Path | None:
    target = args.out or os.environ.get("CTXCERT_OUTDIR")
    if target is None:
        if required:
            raise ValueError("no output location: pass --out or set CTXCERT_OUTDIR")
        return None
    path = Path(target)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _config(args, **extra) -> dict:
    # Presentation-only switches stay out of the hash: it tracks everything
    # that can change report content.
    cfg = {k: v for k, v in vars(args).items()
           if k not in ("func", "out", "no_figures") and v is not None}
    cfg.update(extra)
    return cfg


def cmd_mabk(args) -> int:
    n = args.n
    if n < 3 or n > 7 or n % 2 == 0:
        raise ValueError(f"--n must be an odd integer in [3, 7], got {n}")
    out = _out_dir(args)
    family = mabk.mu_family(n)
    graph = exclusivity.build_graph(family, tol=args.exclusivity_tol)
    serialize.write_json(serialize.family_to_dict(family), out / "family.json")
    serialize.write_json(serialize.graph_to_dict(graph), out / "graph.json")

    cert = mabk.concentration_certificate(family)
    flip = PauliString("Z" + "I" * (n - 1)).matrix() @ mabk.ghz_state(n)
    kernel_fidelity = 0.0
    if len(cert.kernel) == 1:
        kernel_fidelity = float(abs(np.vdot(cert.null_ket, flip)))

    assignment, classical_value = mabk.best_classical_assignment(n)
    seed_set = mabk.classical_witness_events(family, assignment)
    alpha_cert = independence.independence_number(
        graph, budget_seconds=args.budget, initial_set=seed_set)

    partial = not alpha_cert.certified
    if graph.n_vertices > 512:
        partial = True
        theta_payload = {"converged": False,
                         "skipped": "vertex count above the SDP solver cap"}
    else:
        reduction = theta.parity_class_reduction(family, graph) if n >= 5 else None
        try:
            theta_cert = theta.lovasz_theta(graph, tol=args.tol,
                                            reduction=reduction)
            theta_payload = {
                "theta": theta_cert.theta,
                "primal_value": theta_cert.primal_value,
                "dual_bound": theta_cert.dual_bound,
                "gap": theta_cert.gap,
                "iterations": theta_cert.iterations,
                "converged": True,
            }
        except theta.ThetaConvergenceError as exc:
            partial = True
            theta_payload = {
                "theta": 0.5 * (exc.primal + exc.dual),
                "primal_value": exc.primal,
                "dual_bound": exc.dual,
                "converged": False,
            }

    payload = {
        "n": n,
        "n_events": family.n_events,
        "n_contexts": len(family.contexts),
        "classical_bound_formula": 2 ** ((n - 3) // 2) + 2 ** (n - 2),
        "quantum_bound_formula": 2 ** (n - 1),
        "best_classical_operator_value": classical_value,
        "concentration": {
            "rank": cert.rank,
            "ambient_dim": cert.ambient_dim,
            "kernel_dim": len(cert.kernel),
            "kernel_fidelity_flipped_state": kernel_fidelity,
            "gram_deviation": cert.gram_deviation,
        },
        "alpha": {
            "alpha": alpha_cert.alpha,
            "witness_set": alpha_cert.witness_set,
            "certified": alpha_cert.certified,
            "upper_bound": alpha_cert.upper_bound,
        },
        "theta": theta_payload,
        "graph": {"n_vertices": graph.n_vertices, "n_edges": graph.n_edges},
        "config_hash": serialize.config_hash(_config(args)),
    }
    serialize.write_json(payload, out / "certificate.json")
    theta_text = (f"theta {theta_payload['theta']:.6f}"
                  if "theta" in theta_payload else "theta skipped")
    print(f"family: {family.n_events} events in dimension {family.ambient_dim}; "
          f"rank {cert.rank}; alpha {alpha_cert.alpha}"
          f"{'' if alpha_cert.certified else ' (uncertified)'}; {theta_text}")
    return 2 if partial else 0


def cmd_graphstate(args) -> int:
    if args.graph:
        spec = serialize.graphspec_from_dict(serialize.read_json(args.graph))
    elif args.star:
        spec = graphstate.star_graph(args.star)
    elif args.wheel:
        spec = graphstate.wheel_graph(args.wheel)
    else:
        raise ValueError("supply --graph FILE, --star N, or --wheel N")
    out = _out_dir(args)

    bundle = graphstate.paradox_bundle(spec)
    state = graphstate.graph_state(spec)
    flip, modified = graphstate.modified_state(spec)
    lhv = graphstate.lhv_satisfiability(bundle.operators)
    family = graphstate.paradox_event_family(spec)
    rank = linalg.numeric_rank(list(family.rays))
    graph = exclusivity.build_graph(family)
    serialize.write_json(serialize.family_to_dict(family), out / "family.json")
    serialize.write_json(serialize.graph_to_dict(graph), out / "graph.json")

    payload = {
        "n": spec.n,
        "universal_vertex": spec.universal_vertex,
        "operators": [str(op) for op in bundle.operators],
        "exponent_recipe_consistent": bundle.formula_consistent,
        "expectations_graph_state": [
            graphstate.expectation(op, state) for op in bundle.operators],
        "flip_vector": [int(b) for b in flip],
        "expectations_modified_state": [
            graphstate.expectation(op, modified) for op in bundle.operators],
        "lhv": {
            "feasible": lhv.feasible,
            "n_symbols": lhv.n_symbols,
            "max_satisfied": lhv.max_satisfied,
            "n_operators": lhv.n_operators,
        },
        "event_family": {
            "n_events": family.n_events,
            "n_contexts": len(family.contexts),
            "rank": rank,
            "expected_rank": 2 ** spec.n - 1,
        },
        "exclusivity_graph": {"n_vertices": graph.n_vertices,
                              "n_edges": graph.n_edges},
        "config_hash": serialize.config_hash(_config(args)),
    }
    serialize.write_json(payload, out / "paradox.json")
    verdict = "infeasible" if not lhv.feasible else "FEASIBLE (no paradox)"
    print(f"paradox on {spec.n} qubits: {len(bundle.operators)} operators, "
          f"assignment search {verdict}, event rank {rank}")
    return 0 if not lhv.feasible and rank == 2 ** spec.n - 1 else 2


def cmd_exclusivity(args) -> int:
    family = serialize.family_from_dict(serialize.read_json(args.family))
    graph = exclusivity.build_graph(family, tol=args.tol)
    serialize.write_json(serialize.graph_to_dict(graph), Path(args.out))
    print(f"{graph.n_vertices} vertices, {graph.n_edges} edges -> {args.out}")
    return 0


def cmd_alpha(args) -> int:
    graph = serialize.load_graph(args.graph)
    cert = independence.independence_number(graph, budget_seconds=args.budget)
    payload = {
        "alpha": cert.alpha,
        "witness_set": cert.witness_set,
        "certified": cert.certified,
        "upper_bound": cert.upper_bound,
        "nodes_explored": cert.nodes_explored,
        "config_hash": serialize.config_hash(_config(args)),
    }
    if args.out:
        serialize.write_json(payload, Path(args.out))
    print(f"alpha = {cert.alpha} "
          f"({'certified' if cert.certified else 'lower bound, budget exhausted'})")
    return 0 if cert.certified else 2


def cmd_theta(args) -> int:
    graph = serialize.load_graph(args.graph)
    try:
        cert = theta.lovasz_theta(graph, tol=args.tol)
    except theta.ThetaConvergenceError as exc:
        print(f"theta in [{exc.primal:.8f}, {exc.dual:.8f}] (not converged)")
        return 2
    payload = {
        "theta": cert.theta,
        "primal_value": cert.primal_value,
        "dual_bound": cert.dual_bound,
        "gap": cert.gap,
        "iterations": cert.iterations,
        "config_hash": serialize.config_hash(_config(args)),
    }
    if args.out:
        serialize.write_json(payload, Path(args.out))
    print(f"theta = {cert.theta:.8f} (gap {cert.gap:.2e})")
    return 0


def _realization(n: int) -> tuple[np.ndarray, np.ndarray, list[tuple[int, int]], list[list[int]]]:
    """Rays, input state, edges, and contexts of the dimension-reduced
    realization used by the simulator."""
    if n == 3:
        data = fixtures.load_reference()
        return data.rays, data.state, data.edges, data.contexts
    family = mabk.mu_family(n)
    graph = exclusivity.build_graph(family)
    cert = mabk.concentration_certificate(family)
    state = linalg.fix_global_phase(
        mabk.ghz_state(n) @ cert.isometry.conj())
    return cert.compressed_rays, state, list(graph.edges), family.contexts


def cmd_simulate(args) -> int:
    if args.n % 2 == 0 or args.n < 3 or args.n > 7:
        raise ValueError(f"--n must be an odd integer in [3, 7], got {args.n}")
    rays, state, edges, _ = _realization(args.n)
    if args.noiseless:
        noise = NoiseModel(seed=args.seed)
    else:
        noise = NoiseModel(visibility=args.visibility, dark_rate=args.dark,
                           prep_angle_jitter=args.jitter, seed=args.seed)
    if args.plan:
        from .experiment import plan_from_specs

        specs = serialize.read_json(args.plan)
        plan = plan_from_specs(specs, rays, state)
    else:
        plan = standard_plan(rays, state, edges)
    table = simulate_counts(plan, shots=args.shots, noise=noise)
    serialize.counts_to_csv(table, Path(args.out))
    print(f"{len(plan)} settings x {args.shots} shots -> {args.out}")
    return 0


def _write_plot_data(out: Path, bundle, contexts, factors, stderrs) -> tuple[list, list]:
    vertex_rows = []
    ctx_of = {v: c + 1 for c, ctx in enumerate(contexts) for v in ctx}
    for k in sorted(bundle.p_vertex):
        vertex_rows.append({
            "vertex": k + 1,
            "context": ctx_of.get(k, 0),
            "p": bundle.p_vertex[k],
            "stderr": stderrs.get(f"p_vertex:{k + 1}", 0.0),
        })
    with open(out / "plot_vertices.csv", "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=["vertex", "context", "p", "stderr"])
        writer.writeheader()
        writer.writerows(vertex_rows)

    signaling_rows = []
    for idx, ((i, j), value) in enumerate(sorted(factors.eps_prime.items()), start=1):
        signaling_rows.append({
            "index": idx,
            "i": i + 1,
            "j": j + 1,
            "eps_prime": value,
            "stderr": stderrs.get(f"eps_prime:{i + 1}:{j + 1}", 0.0),
        })
    with open(out / "plot_signaling.csv", "w", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["index", "i", "j", "eps_prime", "stderr"])
        writer.writeheader()
        writer.writerows(signaling_rows)
    return vertex_rows, signaling_rows


def cmd_analyze(args) -> int:
    inputs = [bool(args.counts), bool(args.fixture), bool(args.bundle)]
    if sum(inputs) != 1:
        raise ValueError("supply exactly one of --counts FILE, --bundle FILE, "
                         "or --fixture paper")
    out = _out_dir(args)

    checksums = {}
    table = None
    if args.fixture:
        if args.fixture != "paper":
            raise ValueError(f"unknown fixture {args.fixture!r} (available: paper)")
        checksums = fixtures.fixture_checksums()
        table = fixtures.reference_count_table()
        data = fixtures.load_reference()
        bundle = analysis.ProbabilityBundle(
            {k: v[0] for k, v in data.p_vertex.items()},
            {k: v[0] for k, v in data.p_cond1.items()},
            {k: v[0] for k, v in data.p_cond0.items()},
            provenance="fixture")
        edges, contexts = data.edges, data.contexts
        n = 3
    else:
        if args.counts:
            table = serialize.counts_from_csv(args.counts)
            bundle = analysis.bundle_from_counts(table)
        else:
            bundle = serialize.bundle_from_dict(serialize.read_json(args.bundle))
        n = args.n
        _, _, edges, contexts = _realization(n)
        if len(bundle.p_vertex) != 2 ** (2 * n - 2):
            raise ValueError(
                f"input has {len(bundle.p_vertex)} vertex settings but "
                f"--n {n} implies {2 ** (2 * n - 2)}")
    graph = (serialize.load_graph(args.graph) if args.graph
             else exclusivity.ExclusivityGraph(len(bundle.p_vertex), tuple(edges)))
    classical = 2 ** ((n - 3) // 2) + 2 ** (n - 2)
    quantum = 2 ** (n - 1)

    pipeline = analysis.WitnessPipeline(
        graph=graph, contexts=contexts, classical_bound=classical,
        quantum_bound=quantum, per_vertex=True, per_edge_signaling=True)
    if table is not None:
        resample = analysis.resample_errors(table, pipeline,
                                            n_groups=args.groups, seed=args.seed)
    else:
        # Probability-bundle ingestion carries no counts to resample.
        resample = analysis.ResampleResult(stderr={"mu": 0.0}, mean={},
                                           n_groups=0)
    report = analysis.witness_report(bundle, graph, classical, quantum,
                                     stderr=resample.stderr["mu"])
    hardy = analysis.hardy_report(bundle, contexts)
    factors = analysis.signaling_factors(bundle, graph)

    witness_payload = {
        key: (value if np.isfinite(value) else None)
        for key, value in report.as_dict().items()
    }
    payload = {
        "witness": witness_payload,
        "hardy": {
            "context_sums": list(hardy.context_sums),
            "context_stderr": [
                resample.stderr.get(f"context_sum_{c + 1}", 0.0)
                for c in range(len(contexts))],
            "p_success": hardy.p_success,
        },
        "signaling": {
            "mean_abs_eps_prime": factors.mean_abs_eps_prime(),
            "stderr": resample.stderr.get("mean_abs_eps_prime", 0.0),
            "n_directed_edges": len(factors.eps_prime),
        },
        "resampling": {
            "n_groups": resample.n_groups,
            "seed": args.seed,
            "shots_nominal": table.shots_nominal if table else None,
            "normalization": table.normalization if table else None,
        },
        "provenance": bundle.provenance,
        "fixture_checksums": checksums,
        "config_hash": serialize.config_hash(_config(args)),
    }
    serialize.write_json(payload, out / "witness.json")
    vertex_rows, signaling_rows = _write_plot_data(
        out, bundle, contexts, factors, resample.stderr)

    if not args.no_figures:
        from . import report as figures

        figures.render_vertex_probabilities(
            vertex_rows, out / "fig_probabilities.png",
            classical_bound=classical, quantum_bound=quantum)
        figures.render_signaling(signaling_rows, out / "fig_signaling.png")

    print(f"mu = {report.mu:.4f} +- {report.stderr:.4f} "
          f"({report.sigma_deviation:.1f} sigma above {classical}); "
          f"mean |eps'| = {100 * factors.mean_abs_eps_prime():.2f}%")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ctxcert",
                     description="exclusivity-graph contextuality toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mabk", help="build an event family and certify its "
                                    "graph constants and rank")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-7,
                   help="duality-gap tolerance for the SDP")
    p.add_argument("--exclusivity-tol", type=float, default=1e-8)
    p.add_argument("--budget", type=float, default=60.0,
                   help="seconds for the exact independence search")
    p.add_argument("--out")
    p.set_defaults(func=cmd_mabk)

    p = sub.add_parser("graphstate", help="audit the parity paradox of a "
                                          "graph state")
    p.add_argument("--graph", help="GraphSpec JSON: {n, edges, universal?}")
    p.add_argument("--star", type=int, help="use the star graph on N vertices")
    p.add_argument("--wheel", type=int, help="use the wheel graph on N vertices")
    p.add_argument("--out")
    p.set_defaults(func=cmd_graphstate)

    p = sub.add_parser("exclusivity", help="derive the exclusivity graph of "
                                           "a projector family")
    p.add_argument("--family", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_exclusivity)

    p = sub.add_parser("alpha", help="exact independence number")
    p.add_argument("--graph", required=True)
    p.add_argument("--budget", type=float, default=60.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_alpha)

    p = sub.add_parser("theta", help="Lovasz number with certified gap")
    p.add_argument("--graph", required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--out")
    p.set_defaults(func=cmd_theta)

    p = sub.add_parser("simulate", help="run the prepare-and-measure simulator")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--visibility", type=float, default=1.0)
    p.add_argument("--dark", type=float, default=0.0)
    p.add_argument("--jitter", type=float, default=0.0)
    p.add_argument("--plan", help="JSON plan overriding the standard settings")
    p.add_argument("--out", required=True, help="output counts CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("analyze", help="witness report from counts or the "
                                       "bundled reference dataset")
    p.add_argument("--counts", help="counts CSV from the simulator")
    p.add_argument("--bundle", help="ProbabilityBundle JSON")
    p.add_argument("--fixture", help="named embedded dataset: paper")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--graph", help="override the exclusivity graph (JSON)")
    p.add_argument("--groups", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-figures", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_analyze)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, FileNotFoundError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
