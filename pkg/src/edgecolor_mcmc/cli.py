"""Command line: ``sample``, ``enumerate``, ``path`` and ``latin``.

Exit status is 0 on success, 1 when an internal check fails (a ratio bound is
breached, a plan does not replay, an output fails validation) and 2 for bad
input.  All randomness comes from ``--seed``; chain ``i`` of ``--chains N``
uses the ``i``-th child stream of that seed.
"""
from __future__ import annotations

import argparse
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .coloring import ContractError, initial_coloring, is_proper
from .diameter import PlanError, transform_plan
from .graph import BipartiteGraph, Coloring, InputError, check_coloring, read_coloring, read_graph
from .latin import (
    LatinSquare,
    format_latin,
    read_latin,
    rectangle_to_graph,
    sample_completion,
)
from .metropolis import BoundViolation, ChainStats, run_chain
from .oracle import enumerate_colorings
from .regular import assert_regular, is_regular
from .rng import make_rng, split_seeds


class InvariantError(RuntimeError):
    """An output failed its validator; reported with exit status 1."""


@dataclass(frozen=True)
class RunConfig:
    command: str
    graph: str | None = None
    coloring: str | None = None
    coloring2: str | None = None
    rectangle: str | None = None
    k: int | None = None
    steps: int = 10_000
    thin: int = 1
    seed: int | None = 0
    chains: int = 1
    kernel: str = "auto"
    out: str | None = None
    limit: int | None = None
    force_large: bool = False

    @classmethod
    def from_args(cls, ns: argparse.Namespace) -> RunConfig:
        return cls(**{k: v for k, v in vars(ns).items() if k in cls.__dataclass_fields__})


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--graph", help="graph file ('p bipartite' format)")
    common.add_argument("--coloring", help="coloring file ('c <edge> <color>' lines)")
    common.add_argument("--coloring2", help="second coloring file, for path")
    common.add_argument("--rectangle", help="Latin rectangle file, for latin")
    common.add_argument("--k", type=int, help="number of colors")
    common.add_argument("--steps", type=int, default=10_000)
    common.add_argument("--thin", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--chains", type=int, default=1)
    common.add_argument("--kernel", choices=("general", "regular", "auto"), default="auto")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--limit", type=int, help="stop enumerating after this many colorings")
    common.add_argument("--force-large", action="store_true", help="allow enumeration of large graphs")

    p = argparse.ArgumentParser(prog="edgecolor-mcmc", description="Sample edge colorings of bipartite graphs.")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("sample", parents=[common], help="run the Metropolis chain")
    sub.add_parser("enumerate", parents=[common], help="count proper colorings by brute force")
    sub.add_parser("path", parents=[common], help="build a move sequence between two colorings")
    sub.add_parser("latin", parents=[common], help="complete a Latin rectangle by sampling")
    return p


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def _load_graph(cfg: RunConfig) -> tuple[BipartiteGraph, int]:
    graph = read_graph(_need(cfg.graph, "--graph"))
    k = _need(cfg.k, "--k")
    if k < 0:
        raise InputError("--k must be non-negative")
    if k < graph.max_degree:
        raise InputError(f"infeasible color count: k={k} < max degree {graph.max_degree}")
    return graph, k


def _load_proper(path: str, graph: BipartiteGraph, k: int) -> Coloring:
    col = read_coloring(path, graph, k)
    check_coloring(graph, col)
    if not is_proper(graph, col.colors):
        raise InputError(f"{path} is not a proper coloring")
    return col


def _kernel_name(cfg: RunConfig, graph: BipartiteGraph, k: int) -> str:
    if cfg.kernel == "auto":
        return "regular" if is_regular(graph, k) else "general"
    if cfg.kernel == "regular":
        assert_regular(graph, k)
    return cfg.kernel


def _emit(cfg: RunConfig, text: str) -> None:
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        sys.stdout.write(text)


def _chain(args) -> tuple[list[Coloring], ChainStats]:
    graph, k, start, steps, thin, seed, kernel = args
    samples, stats = run_chain(graph, k, start, steps, thin, make_rng(seed), kernel=kernel)
    return samples[1:], stats


def cmd_sample(cfg: RunConfig) -> int:
    graph, k = _load_graph(cfg)
    if cfg.steps < 0 or cfg.thin < 1 or cfg.chains < 1:
        raise InputError("need --steps >= 0, --thin >= 1 and --chains >= 1")
    kernel = _kernel_name(cfg, graph, k)
    start = _load_proper(cfg.coloring, graph, k) if cfg.coloring else initial_coloring(graph, k)
    jobs = [(graph, k, start, cfg.steps, cfg.thin, s, kernel) for s in split_seeds(cfg.seed, cfg.chains)]
    if cfg.chains == 1:
        results = [_chain(jobs[0])]
    else:
        with ProcessPoolExecutor(max_workers=cfg.chains) as pool:
            results = list(pool.map(_chain, jobs))
    stats = ChainStats()
    hist: Counter[str] = Counter()
    lines = []
    for i, (samples, st) in enumerate(results):
        stats = stats.merge(st)
        for s in samples:
            if not is_proper(graph, s.colors):
                raise InvariantError(f"chain {i} produced an improper coloring {s.key()}")
            hist[s.key()] += 1
            lines.append(f"sample {i} {s.key()}")
    lines += [f"histogram {hist[key]} {key}" for key in sorted(hist)]
    lines.append(f"kernel {kernel}")
    lines.append(f"chains {cfg.chains}")
    lines.append(f"states_seen {len(hist)}")
    _emit(cfg, "\n".join(lines) + "\n" + stats.format())
    return 0


def cmd_enumerate(cfg: RunConfig) -> int:
    graph, k = _load_graph(cfg)
    sols = enumerate_colorings(graph, k, limit=cfg.limit, force=cfg.force_large)
    for c in sols:
        if not is_proper(graph, c.colors):
            raise InvariantError(f"enumeration produced an improper coloring {c.key()}")
    if sols.overflowed:
        print(f"more than {cfg.limit}")
    else:
        print(sols.count)
    if cfg.out:
        Path(cfg.out).write_text(sols.export())
    return 0


def cmd_path(cfg: RunConfig) -> int:
    graph, k = _load_graph(cfg)
    a = _load_proper(_need(cfg.coloring, "--coloring"), graph, k)
    b = _load_proper(_need(cfg.coloring2, "--coloring2"), graph, k)
    kernel = _kernel_name(cfg, graph, k)
    plan = transform_plan(graph, k, a, b, kernel=kernel)
    plan.verify()
    if len(plan) > plan.bound:
        raise InvariantError(f"plan has {len(plan)} moves, above the bound {plan.bound}")
    _emit(cfg, f"moves {len(plan)}\nbound {plan.bound}\n" + plan.export())
    return 0


def cmd_latin(cfg: RunConfig) -> int:
    R = read_latin(_need(cfg.rectangle, "--rectangle"))
    if cfg.steps < 0:
        raise InputError("--steps must be non-negative")
    kernel = "general" if cfg.kernel == "general" else "regular"
    if R.k:
        rectangle_to_graph(R)
    square = sample_completion(R, cfg.steps, make_rng(cfg.seed), kernel=kernel)
    LatinSquare(square.n, square.rows)
    if square.rows[: R.r] != R.rows:
        raise InvariantError("completion does not extend the rectangle")
    _emit(cfg, format_latin(square))
    return 0


COMMANDS = {"sample": cmd_sample, "enumerate": cmd_enumerate, "path": cmd_path, "latin": cmd_latin}


def main(argv: list[str] | None = None) -> int:
    try:
        ns = _parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    cfg = RunConfig.from_args(ns)
    try:
        return COMMANDS[cfg.command](cfg)
    except (InputError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (InvariantError, BoundViolation, PlanError, ContractError) as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
