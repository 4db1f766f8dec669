"""Command-line harness.

    sspflow solve INSTANCE [--z Z] [--out trace.csv]
    sspflow costfn INSTANCE [--out costfn.csv]
    sspflow generate --model smoothed|perturbed --shape bipartite|erdos|layered
                     --n N --m M --seed S [--phi PHI] [--cost-spec FILE] [--out FILE]
    sspflow lowerbound --n N --m M --phi PHI --seed S [--out FILE] [--verify]
    sspflow experiment --models LIST --ns LIST --ms LIST --phis LIST
                       --trials T --seed S --out results.csv [--timings]
    sspflow verify INSTANCE [--out lemmas.csv]
    sspflow reconstruct-check INSTANCE [--max-cases N]

Exit codes: 0 success, 1 input error, 2 infeasible demand,
3 internal invariant violation.

All commands are deterministic under fixed seeds. The experiment
runtime column stays empty unless --timings is given, keeping default
output byte-identical across reruns.
"""

from __future__ import annotations

import argparse
import math
import sys
import time

from . import dimacs, generators, lowerbound
from .analysis import (
    check_lemmas,
    check_reconstruction,
    harvest_reconstruction_cases,
)
from .errors import (
    AuxiliaryArc,
    BadParams,
    FlowError,
    InfeasibleFlow,
    InfeasibleShape,
    InternalInvariantError,
    InvalidInterval,
    InvariantError,
    IterationCapExceeded,
    LemmaViolation,
    NoPath,
    ParseError,
    PredictionMismatch,
)
from .network import FlowNetwork, TransformedNetwork, as_transformed, transform
from .solver import (
    Outcome,
    cost_function,
    cost_function_csv_rows,
    run_ssp,
    solve,
    trace_csv_rows,
)

_INPUT_ERRORS = (
    ParseError,
    InvariantError,
    InvalidInterval,
    InfeasibleShape,
    BadParams,
    AuxiliaryArc,
    InfeasibleFlow,
    FileNotFoundError,
    IsADirectoryError,
)
_INFEASIBLE_ERRORS = (NoPath,)
_INTERNAL_ERRORS = (
    InternalInvariantError,
    IterationCapExceeded,
    PredictionMismatch,
    LemmaViolation,
)


def load_instance(path: str) -> TransformedNetwork:
    """Read a DIMACS file and bring it into single source/sink form."""
    with open(path, "r", encoding="utf-8") as fh:
        net = dimacs.read_instance(fh.read())
    supplies = [v for v, b in net.balance.items() if b > 0]
    demands = [v for v, b in net.balance.items() if b < 0]
    if len(supplies) == 1 and len(demands) == 1:
        return as_transformed(net, supplies[0], demands[0])
    return transform(net)


def _write_lines(path: str | None, lines: list[str]) -> None:
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _flow_cost(instance: TransformedNetwork, values) -> float:
    return math.fsum(f * e.cost for f, e in zip(values, instance.base.edges))


# ---------------------------------------------------------------------------
# Subcommands

def cmd_solve(args) -> int:
    instance = load_instance(args.instance)
    trace = solve(
        instance,
        z=args.z,
        retain_flows=args.retain_flows,
        record_distances=False,
        iteration_cap=args.iteration_cap,
    )
    if args.out:
        _write_lines(args.out, trace_csv_rows(trace))
    final = trace.final_flow
    print(
        f"{trace.outcome.value} steps={len(trace.steps)} value={final.value!r} "
        f"cost={_flow_cost(instance, final.values)!r}"
    )
    if trace.outcome is Outcome.MAX_FLOW_BELOW_Z:
        target = args.z if args.z is not None else instance.z
        print(
            f"no flow of value {target!r}: maximum is {final.value!r}",
            file=sys.stderr,
        )
        return 2
    return 0


def cmd_costfn(args) -> int:
    instance = load_instance(args.instance)
    cf = cost_function(instance)
    _write_lines(args.out, cost_function_csv_rows(cf))
    return 0


def cmd_generate(args) -> int:
    if args.model == "smoothed":
        topo = generators.random_topology(args.n, args.m, args.shape, args.seed)
        if args.cost_spec:
            with open(args.cost_spec, "r", encoding="utf-8") as fh:
                spec = generators.parse_cost_spec(fh.read())
        elif args.preset == "adversarial":
            spec = generators.adversarial_spec(topo, args.phi)
        else:
            spec = generators.SmoothedCostSpec(args.phi)
        net = generators.sample_costs(topo, spec, args.seed)
    elif args.model == "perturbed":
        topo = generators.random_topology(args.n, args.m, args.shape, args.seed)
        net, _scale = generators.perturbed_integer(topo, int(args.phi), args.seed)
    else:  # lowerbound
        built = lowerbound.build_worstcase(args.n, args.m, args.phi, args.seed)
        net = built.instance.base
    _write_lines(args.out, dimacs.write_instance(net).splitlines())
    return 0


def cmd_lowerbound(args) -> int:
    built = lowerbound.build_worstcase(args.n, args.m, args.phi, args.seed)
    instance = built.instance
    print(
        f"stage={'full' if isinstance(built, lowerbound.HardInstance) else built.stage} "
        f"nodes={instance.n} edges={instance.m} z={instance.z!r} "
        f"predicted_steps={built.predicted_steps}"
    )
    if args.out:
        _write_lines(args.out, dimacs.write_instance(instance.base).splitlines())
    if args.verify:
        if isinstance(built, lowerbound.HardInstance):
            report = lowerbound.verify_count(built.params, args.seed)
            print(
                f"verified: {report.observed_steps} augmentations over "
                f"{report.phases_checked} phases (seed {report.seed_used})"
            )
        else:
            trace = run_ssp(instance, record_distances=False)
            if len(trace.steps) != built.predicted_steps:
                raise PredictionMismatch(
                    f"observed {len(trace.steps)} augmentations, "
                    f"predicted {built.predicted_steps}"
                )
            print(f"verified: {len(trace.steps)} augmentations")
    return 0


def _trial_seed(base: int, cell_index: int, trial: int) -> int:
    # Stable arithmetic derivation so any (cell, trial) can be rerun alone.
    return (base * 1000003 + cell_index) * 100003 + trial


def _experiment_instance(model, shape, n, m, phi, seed):
    if model == "lowerbound":
        return lowerbound.build_worstcase(n, m, phi, seed).instance
    topo = generators.random_topology(n, m, shape, seed)
    if model == "perturbed":
        net, _scale = generators.perturbed_integer(topo, int(phi), seed)
    else:
        spec = generators.adversarial_spec(topo, phi)
        net = generators.sample_costs(topo, spec, seed)
    return transform(net)


def cmd_experiment(args) -> int:
    models = args.models.split(",")
    ns = [int(x) for x in args.ns.split(",")]
    ms = [int(x) for x in args.ms.split(",")]
    phis = [float(x) for x in args.phis.split(",")]
    cells = [
        (model, n, m, phi)
        for model in models
        for n in ns
        for m in ms
        for phi in phis
    ]
    failures = 0
    out = open(args.out, "w", encoding="utf-8") if args.out else sys.stdout
    try:
        out.write("cell,trial,steps,runtime,bound_2mnphi_plus_2n,ratio\n")
        out.flush()
        for cell_index, (model, n, m, phi) in enumerate(cells):
            cell = f"model={model};shape={args.shape};n={n};m={m};phi={phi:g}"
            steps_seen = []
            bound = None
            for trial in range(args.trials):
                seed = _trial_seed(args.seed, cell_index, trial)
                started = time.perf_counter()
                try:
                    instance = _experiment_instance(
                        model, args.shape, n, m, phi, seed
                    )
                    trace = run_ssp(instance, record_distances=False)
                except FlowError as exc:
                    failures += 1
                    out.write(f"{cell},{trial},error:{type(exc).__name__},,,\n")
                    out.flush()
                    continue
                elapsed = time.perf_counter() - started
                phi_eff = generators.effective_phi(
                    "perturbed" if model == "perturbed" else model, phi
                )
                bound = 2 * instance.m * instance.n * phi_eff + 2 * instance.n
                steps = len(trace.steps)
                steps_seen.append(steps)
                runtime = f"{elapsed:.6f}" if args.timings else ""
                out.write(
                    f"{cell},{trial},{steps},{runtime},{bound!r},{steps / bound!r}\n"
                )
                out.flush()
            if steps_seen and bound is not None:
                mean = math.fsum(steps_seen) / len(steps_seen)
                out.write(f"{cell},mean,{mean!r},,{bound!r},{mean / bound!r}\n")
                out.flush()
    finally:
        if out is not sys.stdout:
            out.close()
    return 3 if failures else 0


def cmd_verify(args) -> int:
    instance = load_instance(args.instance)
    trace = solve(instance, retain_flows=True, record_distances=True)
    report = check_lemmas(trace)
    print(report.as_text())
    if args.out:
        _write_lines(args.out, report.as_csv_rows())
    return 0 if report.all_passed else 3


def cmd_reconstruct_check(args) -> int:
    instance = load_instance(args.instance)
    trace = solve(instance, retain_flows=True, record_distances=False)
    cases = harvest_reconstruction_cases(trace)[: args.max_cases]
    if not cases:
        print("no reconstructable steps harvested")
        return 0
    results = check_reconstruction(instance, cases)
    bad = [case for case, ok in results if not ok]
    print(f"{len(results) - len(bad)}/{len(results)} reconstructions exact")
    if bad:
        first = bad[0]
        print(
            f"first mismatch: arc {first.arc} threshold {first.threshold!r} "
            f"(step {first.step_index})",
            file=sys.stderr,
        )
        return 3
    return 0


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sspflow",
        description="Successive-shortest-path min-cost flow laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance, emit the step trace")
    p.add_argument("instance")
    p.add_argument("--z", type=float, default=None, help="target value override")
    p.add_argument("--out", default=None, help="trace CSV path")
    p.add_argument("--retain-flows", action="store_true")
    p.add_argument("--iteration-cap", type=int, default=None)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("costfn", help="value-vs-cost profile as CSV")
    p.add_argument("instance")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_costfn)

    p = sub.add_parser("generate", help="write a seeded instance file")
    p.add_argument("--model", choices=["smoothed", "perturbed", "lowerbound"],
                   default="smoothed")
    p.add_argument("--shape", choices=["bipartite", "erdos", "layered"],
                   default="bipartite")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--phi", type=float, default=1.0,
                   help="density bound; integer cost bound C for --model perturbed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cost-spec", default=None,
                   help="interval spec file (smoothed model)")
    p.add_argument("--preset", choices=["uniform", "adversarial"],
                   default="uniform")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_generate)

    p = sub.add_parser("lowerbound", help="exponential-family instance")
    p.add_argument("--n", type=int, required=True, help="seed gadget side size")
    p.add_argument("--m", type=int, required=True, help="seed gadget edge count")
    p.add_argument("--phi", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None)
    p.add_argument("--verify", action="store_true",
                   help="solve and check the predicted behavior")
    p.set_defaults(fn=cmd_lowerbound)

    p = sub.add_parser("experiment", help="step-count grid experiment")
    p.add_argument("--models", default="smoothed",
                   help="comma list: smoothed,perturbed,lowerbound")
    p.add_argument("--shape", choices=["bipartite", "erdos", "layered"],
                   default="bipartite")
    p.add_argument("--ns", required=True, help="comma list of n")
    p.add_argument("--ms", required=True, help="comma list of m")
    p.add_argument("--phis", required=True,
                   help="comma list of phi (C for perturbed)")
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="results CSV (default stdout)")
    p.add_argument("--timings", action="store_true",
                   help="fill the runtime column (breaks byte-determinism)")
    p.set_defaults(fn=cmd_experiment)

    p = sub.add_parser("verify", help="run the lemma suite on an instance")
    p.add_argument("instance")
    p.add_argument("--out", default=None, help="lemma report CSV path")
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("reconstruct-check",
                       help="harvest and check flow reconstructions")
    p.add_argument("instance")
    p.add_argument("--max-cases", type=int, default=50)
    p.set_defaults(fn=cmd_reconstruct_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _INFEASIBLE_ERRORS as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 2
    except _INTERNAL_ERRORS as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
