"""Metropolis-Hastings over way classes, targeting the uniform distribution.

The ratio of a step is ``P(reverse class | y) / P(forward class | x)``; the
target is uniform so nothing else enters.  Acceptance compares the exact ratio
against a uniform integer of ``UNIFORM_BITS`` bits, so the acceptance
probability is off by less than ``2**-128``.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .chain import GeneralKernel, Way, WayClass, kernel_for
from .graph import BipartiteGraph, Coloring
from .rng import UNIFORM_BITS, uniform_bits


class BoundViolation(RuntimeError):
    """An observed inverse acceptance ratio exceeded its theoretical bound."""


def general_bound(n_vertices: int) -> int:
    return 96 * n_vertices**2 * (n_vertices - 1)


def regular_bound(n_vertices: int) -> int:
    return 16 * n_vertices * (n_vertices - 1)


def ratio_bound(graph: BipartiteGraph, kernel: str) -> int:
    n = graph.active_vertex_count()
    return regular_bound(n) if kernel == "regular" else general_bound(n)


class MHStep:
    def __init__(self, kernel: GeneralKernel, source: Coloring, target: Coloring, way: Way,
                 wclass: WayClass, way_prob: Fraction, forward_prob: Fraction,
                 reverse_prob: Fraction, accepted: bool) -> None:
        self.kernel = kernel
        self.source = source
        self.target = target
        self.way = way
        self.wclass = wclass
        self.way_prob = way_prob
        self.forward_prob = forward_prob
        self.reverse_prob = reverse_prob
        self.ratio = reverse_prob / forward_prob
        self.accepted = accepted
        self._reverse: Way | None = None

    @property
    def reverse(self) -> Way:
        """The reverse way from ``target``, built on first access."""
        if self._reverse is None:
            self._reverse = self.kernel.reverse_way(self.source, self.way, self.target)
        return self._reverse

    @property
    def inverse_ratio(self) -> Fraction:
        return 1 / self.ratio

    @property
    def state(self) -> Coloring:
        return self.target if self.accepted else self.source


def accept(ratio: Fraction, rng: random.Random) -> bool:
    if ratio >= 1:
        return True
    return uniform_bits(rng) * ratio.denominator < ratio.numerator << UNIFORM_BITS


def mh_step(graph: BipartiteGraph, k: int, current: Coloring, rng: random.Random,
            kernel: str = "general") -> MHStep:
    return _step(kernel_for(graph, k, kernel), current, rng)


def _step(ker: GeneralKernel, current: Coloring, rng: random.Random) -> MHStep:
    prop, wc = ker.sample(current, rng)
    x, y = current.colors, prop.target.colors
    if wc.case == "lazy":
        fwd = rev = ker.case_probability("lazy")
    else:
        fwd = ker.class_probability(x, wc)
        rev = ker.class_probability(y, wc.reverse(x))
    if fwd <= 0:
        raise RuntimeError(f"sampled way {prop.way} has zero class probability")
    ratio = rev / fwd
    return MHStep(ker, current, prop.target, prop.way, wc, prop.probability, fwd, rev, accept(ratio, rng))


@dataclass
class ChainStats:
    steps: int = 0
    acceptances: int = 0
    self_loops: int = 0
    max_inverse_ratio: Fraction = Fraction(1)
    max_ratio: Fraction = Fraction(1)
    proposals: dict = field(default_factory=dict)
    accepted_by_case: dict = field(default_factory=dict)

    @property
    def acceptance_rate(self) -> float:
        return self.acceptances / self.steps if self.steps else 0.0

    def add(self, step: MHStep) -> None:
        self.steps += 1
        case = step.wclass.case
        self.proposals[case] = self.proposals.get(case, 0) + 1
        if step.accepted:
            self.acceptances += 1
            self.accepted_by_case[case] = self.accepted_by_case.get(case, 0) + 1
        if step.state == step.source:
            self.self_loops += 1
        if step.inverse_ratio > self.max_inverse_ratio:
            self.max_inverse_ratio = step.inverse_ratio
        if step.ratio > self.max_ratio:
            self.max_ratio = step.ratio

    def merge(self, other: ChainStats) -> ChainStats:
        out = ChainStats(
            self.steps + other.steps,
            self.acceptances + other.acceptances,
            self.self_loops + other.self_loops,
            max(self.max_inverse_ratio, other.max_inverse_ratio),
            max(self.max_ratio, other.max_ratio),
        )
        for src in (self.proposals, other.proposals):
            for key, n in src.items():
                out.proposals[key] = out.proposals.get(key, 0) + n
        for src in (self.accepted_by_case, other.accepted_by_case):
            for key, n in src.items():
                out.accepted_by_case[key] = out.accepted_by_case.get(key, 0) + n
        return out

    def format(self) -> str:
        m = self.max_inverse_ratio
        lines = [
            f"steps {self.steps}",
            f"acceptances {self.acceptances}",
            f"acceptance_rate {self.acceptance_rate:.6f}",
            f"self_loops {self.self_loops}",
            f"max_inverse_ratio {m.numerator}/{m.denominator}",
            f"max_inverse_ratio_decimal {float(m):.6g}",
        ]
        for case in sorted(self.proposals):
            lines.append(f"proposals_{case} {self.proposals[case]}")
            lines.append(f"accepted_{case} {self.accepted_by_case.get(case, 0)}")
        return "\n".join(lines) + "\n"


def run_chain(graph: BipartiteGraph, k: int, start: Coloring, steps: int, thin: int,
              rng: random.Random, kernel: str = "general", check_bounds: bool = True,
              ) -> tuple[list[Coloring], ChainStats]:
    if steps < 0 or thin < 1:
        raise ValueError("need steps >= 0 and thin >= 1")
    ker = kernel_for(graph, k, kernel)
    bound = ratio_bound(graph, kernel)
    stats = ChainStats()
    samples = [start]
    state = start
    for i in range(1, steps + 1):
        step = _step(ker, state, rng)
        stats.add(step)
        if check_bounds and (step.inverse_ratio > bound or step.ratio > bound):
            raise BoundViolation(
                f"step {i}: inverse ratio {step.inverse_ratio} (ratio {step.ratio}) exceeds {bound}; "
                f"way {step.way} from {state.key()}"
            )
        state = step.state
        if i % thin == 0:
            samples.append(state)
    return samples, stats
