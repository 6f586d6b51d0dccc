"""Command-line interface: run benchmarks, solve small pairs exactly, generate data.

Exit status is 0 on success and 2 on any input problem (unreadable files,
malformed graphs or cost tables, invalid parameter combinations).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ._seeds import derive_seed
from .exact import exact_ged
from .experiment import (
    ALGORITHMS,
    AlgorithmSpec,
    RunConfig,
    run_experiment,
)
from .io import (
    GraphFormatError,
    format_text_graph,
    generate_synthetic,
    load_cost_table,
    parse_gxl_subset,
    parse_text_dataset,
)
from .model import DUMMY, EditCostModel, LabeledGraph


def parse_costs(text: str) -> EditCostModel:
    """Parse a --costs value: ``constant:<sub,del,ins>`` or ``table:<file>``."""
    kind, _, rest = text.partition(":")
    if kind == "constant":
        parts = rest.split(",")
        if len(parts) != 3:
            raise ValueError(
                f"constant costs need three comma-separated numbers, got {rest!r}"
            )
        try:
            sub, delete, insert = (float(p) for p in parts)
        except ValueError:
            raise ValueError(f"constant costs must be numeric, got {rest!r}") from None
        return EditCostModel.constant(sub, delete, insert)
    if kind == "table":
        if not rest:
            raise ValueError("table costs need a file path, e.g. table:costs.json")
        return load_cost_table(rest)
    raise ValueError(
        f"costs must look like constant:<sub,del,ins> or table:<file>, got {text!r}"
    )


def _parse_file(path: Path, fmt: str) -> list[LabeledGraph]:
    data = path.read_bytes()
    try:
        if fmt == "gxl":
            return [parse_gxl_subset(data)]
        return parse_text_dataset(data)
    except GraphFormatError as exc:
        raise GraphFormatError(f"{path}: {exc}") from exc


def load_dataset(path: str | Path, fmt: str) -> list[LabeledGraph]:
    """Read graphs from one file or from every matching file in a directory."""
    path = Path(path)
    suffix = ".gxl" if fmt == "gxl" else ".txt"
    if path.is_dir():
        files = sorted(p for p in path.iterdir() if p.suffix == suffix and p.is_file())
        if not files:
            raise ValueError(f"no {suffix} files found in {path}")
        graphs: list[LabeledGraph] = []
        for file in files:
            graphs.extend(_parse_file(file, fmt))
    else:
        graphs = _parse_file(path, fmt)
    if not graphs:
        raise ValueError(f"no graphs found in {path}")
    seen: set[str] = set()
    for g in graphs:
        if g.graph_id in seen:
            raise ValueError(f"duplicate graph id {g.graph_id!r} in {path}")
        seen.add(g.graph_id)
    return graphs


def _load_single(path: str, fmt: str) -> LabeledGraph:
    graphs = _parse_file(Path(path), fmt)
    if len(graphs) != 1:
        raise ValueError(f"{path}: expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ged",
        description="Upper bounds for graph edit distance via local search.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser(
        "run", help="run an algorithm over all graph pairs and write CSV"
    )
    run.add_argument("--dataset", required=True, help="graph file or directory")
    run.add_argument("--format", choices=("text", "gxl"), default="text")
    run.add_argument("--algorithm", choices=ALGORITHMS, default="k-refine")
    run.add_argument("--K", type=int, default=2, help="largest swap size (k-refine)")
    run.add_argument("--kappa", type=int, default=40, help="initial maps per round")
    run.add_argument(
        "--rho", type=float, default=1.0, help="fraction of searches carried out"
    )
    run.add_argument(
        "--loops", type=int, default=0, help="score-guided restart rounds"
    )
    run.add_argument(
        "--eta", type=float, default=0.5, help="quality weighting in score updates"
    )
    run.add_argument("--beam", type=int, default=5, help="beam width (bp-beam)")
    run.add_argument(
        "--orderings", type=int, default=20, help="orderings tried by ibp-beam"
    )
    run.add_argument(
        "--epsilon", type=float, default=1e-3, help="ipfp convergence threshold"
    )
    run.add_argument(
        "--max-iters", type=int, default=100, help="ipfp iteration cap"
    )
    run.add_argument(
        "--init",
        choices=("random", "node-lsape", "mixed"),
        default="random",
        help="how initial maps are drawn",
    )
    run.add_argument("--costs", default="constant:1,1,1")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--workers", type=int, default=1)
    run.add_argument(
        "--deterministic",
        action="store_true",
        help="report seconds as 0 so repeated runs are byte-identical",
    )
    run.add_argument("--out", help="CSV output path (default: stdout)")

    exact = sub.add_parser(
        "exact", help="exact distance of one small pair by enumeration"
    )
    exact.add_argument("--g", required=True, help="file holding the first graph")
    exact.add_argument("--h", required=True, help="file holding the second graph")
    exact.add_argument("--format", choices=("text", "gxl"), default="text")
    exact.add_argument("--costs", default="constant:1,1,1")

    gen = sub.add_parser("gen", help="generate random labeled graphs")
    gen.add_argument(
        "--out", required=True, help="output .txt file, or a directory for one file each"
    )
    gen.add_argument("--count", type=int, default=10)
    gen.add_argument("--nodes", type=int, default=10)
    gen.add_argument("--density", type=float, default=0.3)
    gen.add_argument("--alphabet", type=int, default=3)
    gen.add_argument("--seed", type=int, default=0)
    return parser


def cmd_run(args: argparse.Namespace) -> int:
    graphs = load_dataset(args.dataset, args.format)
    costs = parse_costs(args.costs)
    if args.workers < 1:
        raise ValueError(f"workers must be at least 1, got {args.workers}")
    spec = AlgorithmSpec(
        name=args.algorithm,
        max_swap_size=args.K,
        beam_width=args.beam,
        num_orderings=args.orderings,
        epsilon=args.epsilon,
        max_iterations=args.max_iters,
    )
    config = RunConfig(
        algorithm=spec,
        kappa=args.kappa,
        rho=args.rho,
        loops=args.loops,
        eta=args.eta,
        init_strategy=args.init,
    )
    report = run_experiment(
        graphs,
        [config],
        costs,
        seed=args.seed,
        workers=args.workers,
        deterministic=args.deterministic,
    )
    if args.out:
        report.to_csv(args.out)
    else:
        sys.stdout.write(report.csv_text())
    return 0


def cmd_exact(args: argparse.Namespace) -> int:
    g = _load_single(args.g, args.format)
    h = _load_single(args.h, args.format)
    costs = parse_costs(args.costs)
    value, witness = exact_ged(g, h, costs)
    print(f"exact {value!r}")
    for i, k in witness.assignments():
        left = "-" if i == DUMMY else str(i)
        right = "-" if k == DUMMY else str(k)
        print(f"{left} -> {right}")
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.count < 1:
        raise ValueError(f"count must be at least 1, got {args.count}")
    graphs = [
        generate_synthetic(
            args.nodes,
            args.density,
            args.alphabet,
            seed=derive_seed(args.seed, index),
            graph_id=f"g{index:03d}",
        )
        for index in range(args.count)
    ]
    out = Path(args.out)
    if out.suffix == ".txt":
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text("".join(format_text_graph(g) for g in graphs), encoding="utf-8")
    else:
        out.mkdir(parents=True, exist_ok=True)
        for g in graphs:
            (out / f"{g.graph_id}.txt").write_text(
                format_text_graph(g), encoding="utf-8"
            )
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {"run": cmd_run, "exact": cmd_exact, "gen": cmd_gen}
    try:
        return handlers[args.command](args)
    except (GraphFormatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
