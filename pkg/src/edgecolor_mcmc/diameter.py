"""Constructive paths between proper colorings.

``transform_plan`` fixes the color classes of the target one color at a time
(large milestones).  Within a color ``c`` it walks each component of the
symmetric difference of the current and target ``c`` classes (small
milestones), using ``component_steps``: single-edge recolorings and
two-color flips that keep the coloring almost proper.  Every such step is
then packaged as one chain move ``repair . f . repair^-1`` and checked with
``way_probability``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .chain import GeneralKernel, Way, WayClass, kernel_for
from .coloring import ContractError, deficiencies, flip, is_proper
from .graph import BipartiteGraph, Coloring, InputError, check_coloring


class PlanError(RuntimeError):
    """No chain move realizes a step of the construction."""


@dataclass(frozen=True)
class Step:
    """One elementary change: recolor an edge, or swap two colors along a path or cycle."""

    kind: str  # "recolor" | "flip"
    edges: tuple[int, ...]
    colors: tuple[int, int]  # recolor: (old, new); flip: the two swapped colors
    third: int | None = None  # for a flip, the color that is not c'
    state: tuple[int, ...] = ()

    def apply(self, cols: Sequence[int]) -> tuple[int, ...]:
        if self.kind == "recolor":
            (e,) = self.edges
            if cols[e] != self.colors[0]:
                raise ContractError(f"edge {e} has color {cols[e]}, expected {self.colors[0]}")
            out = list(cols)
            out[e] = self.colors[1]
            return tuple(out)
        return flip(cols, self.edges, *self.colors)


@dataclass(frozen=True)
class Walk:
    """An oriented component: vertices ``v_1 ..`` and the edges between them."""

    vertices: tuple[int, ...]
    edges: tuple[int, ...]
    cycle: bool


def _component_shape(graph: BipartiteGraph, N: Sequence[int]) -> tuple[dict[int, list[int]], bool]:
    inc: dict[int, list[int]] = {}
    for e in N:
        for v in graph.edges[e]:
            inc.setdefault(v, []).append(e)
    if any(len(es) > 2 for es in inc.values()):
        raise ContractError("component has a vertex of degree above 2")
    seen = {N[0]}
    stack = [N[0]]
    while stack:
        e = stack.pop()
        for v in graph.edges[e]:
            for f in inc[v]:
                if f not in seen:
                    seen.add(f)
                    stack.append(f)
    if len(seen) != len(N):
        raise ContractError("component is not connected")
    return inc, all(len(es) == 2 for es in inc.values())


def _orient(graph: BipartiteGraph, inc, v1: int, e1: int, s: int) -> Walk:
    verts, edges = [v1], [e1]
    v = graph.other(e1, v1)
    while len(edges) < s:
        verts.append(v)
        nxt = [f for f in inc[v] if f != edges[-1]]
        if not nxt:
            break
        edges.append(nxt[0])
        v = graph.other(nxt[0], v)
    verts.append(v)
    return Walk(tuple(verts), tuple(edges), verts[0] == verts[-1])


def _colors_at(graph: BipartiteGraph, cols, v: int) -> set[int]:
    return {cols[e] for e in graph.adjacency[v]}


def starts(graph: BipartiteGraph, L: Coloring, N: Sequence[int], c: int,
           avoid: Iterable[int] = ()) -> list[tuple[Walk, int]]:
    """Admissible (orientation, c') pairs for walking ``N``, preferred one first."""
    N = list(N)
    if not N:
        raise ContractError("empty component")
    avoid = set(avoid)
    cols = L.colors
    inc, cycle = _component_shape(graph, N)
    s = len(N)
    out: list[tuple[Walk, int]] = []
    if cycle:
        for v in sorted(inc):
            e1 = next(e for e in inc[v] if cols[e] != c)
            out.append((_orient(graph, inc, v, e1, s), cols[e1]))
        # opening the cycle at a c edge, as if it were a path, needs a free color at v_1
        for v in sorted(inc):
            e1 = next(e for e in inc[v] if cols[e] == c)
            present = _colors_at(graph, cols, v)
            for cp in range(L.k):
                if cp != c and cp not in present and cp not in avoid:
                    out.append((_orient(graph, inc, v, e1, s), cp))
    else:
        ends = sorted(v for v, es in inc.items() if len(es) == 1)
        open_ends = [v for v in ends if cols[inc[v][0]] != c]
        if open_ends:
            for v in open_ends:
                out.append((_orient(graph, inc, v, inc[v][0], s), cols[inc[v][0]]))
        else:
            for v in ends:
                present = _colors_at(graph, cols, v)
                for cp in range(L.k):
                    if cp != c and cp not in present and cp not in avoid:
                        out.append((_orient(graph, inc, v, inc[v][0], s), cp))
    for walk, _ in out:
        _check_alternation(cols, walk, c)
    return out


def _check_alternation(cols, walk: Walk, c: int) -> None:
    flags = [cols[e] == c for e in walk.edges]
    for i in range(1, len(flags)):
        if flags[i] == flags[i - 1]:
            raise ContractError(f"component is not alternately {c} and non-{c} at edge {walk.edges[i]}")
    if walk.cycle and flags[0] == flags[-1]:
        raise ContractError("cycle is not alternating")


def _alternating_component(graph: BipartiteGraph, cols, e: int, a: int, b: int,
                           exclude: int | None = None, from_vertex: int | None = None) -> tuple[int, ...]:
    """The maximal ``(a, b)`` alternating path or cycle through ``e``, avoiding ``exclude``.

    With ``from_vertex`` the path is not extended beyond that endpoint of ``e``.
    """
    path = [e]
    used = {e}
    closed = False
    for side, v in enumerate(graph.edges[e]):
        if v == from_vertex:
            continue
        last = e
        while True:
            want = b if cols[last] == a else a
            nxt = [f for f in graph.adjacency[v] if cols[f] == want and f != exclude and f != last]
            if not nxt:
                break
            if len(nxt) > 1:
                raise ContractError(f"alternating path is ambiguous at vertex {v}")
            f = nxt[0]
            if f in used:
                closed = True
                break
            used.add(f)
            if side == 0:
                path.insert(0, f)
            else:
                path.append(f)
            last = f
            v = graph.other(f, v)
        if closed:
            break
    return tuple(path)



def _no_hook(ctx, step, before, after):
    return (ctx,)


def _flip_candidates(ker: GeneralKernel, cols, u: int, cp: int, cpp: int,
                     direct: tuple[int, ...] | None) -> list[tuple[int, ...]]:
    """Edge sets of (c', c'') flips anchored at ``u``; the path that skips the previous edge first."""
    graph = ker.graph
    out = [direct] if direct else []
    for g in graph.adjacency[u]:
        if cols[g] == cp:
            out.append(ker.action_edges(cols, ("trail", u, g), cpp)[0])
    if any(cols[f] == cpp for f in graph.adjacency[u]):
        for f in graph.adjacency[u]:
            if cols[f] == cp:
                out.append(ker.action_edges(cols, ("path", u, f), cpp)[0])
    seen, uniq = set(), []
    for edges in out:
        key = frozenset(edges)
        if key not in seen:
            seen.add(key)
            uniq.append(tuple(edges))
    return uniq


def _walk_component(graph: BipartiteGraph, k: int, L: tuple[int, ...], walk: Walk, c: int, cp: int,
                    avoid: set[int], hook, ctx, budget: list[int]):
    """Depth-first search for a step sequence along ``walk``; returns (steps, ctx) or None."""
    ker = kernel_for(graph, k, "general")
    E, V = walk.edges, walk.vertices
    s = len(E)
    limit = step_bound(s)

    def candidates(cols, l):
        if l == 0:
            e = E[0]
            return [(Step("recolor", (e,), (cp, c) if cols[e] == cp else (c, cp)), 1)]
        if l < s:
            e = E[l]
            col = cols[e]
            if col == c:
                return [(Step("recolor", (e,), (c, cp)), l + 1)]
            if col == cp:
                return [(Step("recolor", (e,), (cp, c)), l + 1)]
            if col in avoid:
                return []
            try:
                direct = _alternating_component(graph, cols, e, cp, col, exclude=E[l - 1])
            except ContractError:
                direct = None
            cands = _flip_candidates(ker, cols, V[l], cp, col, direct)
            if not deficiencies(graph, cols, k):
                # in a proper coloring the whole (c', c'') component is a Kempe flip
                whole = _alternating_component(graph, cols, e, cp, col)
                if frozenset(whole) not in {frozenset(x) for x in cands}:
                    cands.append(whole)
            return [(Step("flip", edges, (cp, col), col), l) for edges in cands]
        out = []
        for d in deficiencies(graph, cols, k) or ():
            if d.repeated_color == c:
                continue
            present = _colors_at(graph, cols, d.vertex)
            for cpp in range(k):
                if cpp in present or cpp in avoid or cpp in (c, d.repeated_color):
                    continue
                for g in d.edges:
                    edges = ker.action_edges(cols, ("trail", d.vertex, g), cpp)[0]
                    out.append((Step("flip", edges, (d.repeated_color, cpp), cpp), s))
        return out

    def dfs(cols, l, steps, ctx):
        if l == s and is_proper(graph, cols):
            return steps, ctx
        if len(steps) >= limit:
            return None
        budget[0] -= 1
        if budget[0] < 0:
            return None
        for step, nl in candidates(cols, l):
            new = step.apply(cols)
            if step.kind == "flip" and l < s and new[E[l]] != cp:
                continue
            defs = deficiencies(graph, new, k)
            if defs is None or len(defs) > 2:
                continue
            done = Step(step.kind, step.edges, step.colors, step.third, new)
            for nctx in hook(ctx, done, cols, new):
                got = dfs(new, nl, steps + [done], nctx)
                if got is not None:
                    return got
        return None

    return dfs(L, 0, [], ctx)


def _search(graph: BipartiteGraph, L: Coloring, N: Sequence[int], c: int, avoid: Iterable[int],
            start: tuple[Walk, int] | None, hook, ctx):
    if L.k < 3:
        raise ContractError("component walks need at least three colors")
    avoid = set(avoid)
    if c in avoid:
        raise ContractError(f"color {c} is marked as fixed")
    options = [start] if start is not None else starts(graph, L, N, c, avoid)
    if not options:
        raise ContractError("no admissible start: every free color is present at both path ends")
    for walk, cp in options:
        if cp in avoid or cp == c:
            raise ContractError(f"c' = {cp} is not usable")
        _check_path_ends(graph, L, walk, c)
        got = _walk_component(graph, L.k, L.colors, walk, c, cp, avoid, hook, ctx, [20_000])
        if got is not None:
            steps, out = got
            final = steps[-1].state
            changed = {e for e in range(len(final)) if (final[e] == c) != (L.colors[e] == c)}
            if changed != set(N):
                raise ContractError("component walk changed the color class outside the component")
            return steps, out, cp
    return None


def component_steps(graph: BipartiteGraph, L: Coloring, N: Sequence[int], c: int,
                    avoid: Iterable[int] = (), start: tuple[Walk, int] | None = None) -> list[Step]:
    """Elementary steps turning ``L`` into a coloring whose ``c`` class differs from L's exactly on ``N``.

    ``avoid`` lists colors that must not be used (classes already fixed).
    Each step's ``state`` is an almost coloring with at most two deficient
    vertices and there are at most ``step_bound(len(N))`` steps.
    """
    got = _search(graph, L, N, c, avoid, start, _no_hook, None)
    if got is None:
        raise ContractError(f"no step sequence within {step_bound(len(N))} steps for component {sorted(N)}")
    return got[0]


def _check_path_ends(graph: BipartiteGraph, L: Coloring, walk: Walk, c: int) -> None:
    if walk.cycle:
        return
    cols = L.colors
    for v, e in ((walk.vertices[0], walk.edges[0]), (walk.vertices[-1], walk.edges[-1])):
        if cols[e] == c:
            if graph.degree(v) >= L.k:
                raise ContractError(f"path end {v} has a {c} end edge but full degree")
        elif any(cols[f] == c for f in graph.adjacency[v]):
            raise ContractError(f"path can be extended with a {c} edge at vertex {v}")


# -- packaging steps as chain moves ----------------------------------------------


@dataclass
class TransformPlan:
    graph: BipartiteGraph
    k: int
    kernel: str
    source: Coloring
    target: Coloring
    moves: list[Way] = field(default_factory=list)
    states: list[Coloring] = field(default_factory=list)
    milestones: list[tuple[str, int, int]] = field(default_factory=list)
    probabilities: list[Fraction] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.moves)

    @property
    def bound(self) -> int:
        return (3 if self.kernel == "regular" else 6) * self.graph.n_edges

    def export(self) -> str:
        """One move per line; milestone markers ``# large <color> <moves so far>`` in between."""
        marks: dict[int, list[str]] = {}
        for kind, color, at in self.milestones:
            marks.setdefault(at, []).append(f"# {kind} {color} {at}")
        lines = [f"plan {self.kernel} {len(self.moves)}"]
        for i, way in enumerate(self.moves):
            lines += marks.get(i, [])
            lines.append(way.serialize())
        lines += marks.get(len(self.moves), [])
        return "\n".join(lines) + "\n"

    def verify(self) -> None:
        ker = kernel_for(self.graph, self.k, self.kernel)
        cur = self.source
        for i, way in enumerate(self.moves):
            p = ker.way_probability(cur, way)
            if p <= 0:
                raise PlanError(f"move {i} has probability 0")
            cur = ker.apply_way(cur, way)
            if cur != self.states[i]:
                raise PlanError(f"move {i} does not reach the recorded state")
        if cur != self.target:
            raise PlanError("plan does not end at the target")


def replay_plan(graph: BipartiteGraph, k: int, source: Coloring, text: str) -> list[Coloring]:
    """Apply an exported plan and return the visited colorings."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    if not lines or not lines[0].startswith("plan "):
        raise InputError("plan text must start with 'plan <kernel> <moves>'")
    _, name, count = lines[0].split()
    ways = [Way.parse(ln) for ln in lines[1:]]
    if len(ways) != int(count):
        raise InputError(f"plan announces {count} moves, found {len(ways)}")
    ker = kernel_for(graph, k, name)
    out = [source]
    for w in ways:
        if ker.way_probability(out[-1], w) <= 0:
            raise PlanError(f"move {w} has probability 0")
        out.append(ker.apply_way(out[-1], w))
    return out


def _move_classes(graph: BipartiteGraph, step: Step, c: int, cp: int, before, after):
    """Chain move classes that can carry ``step``: (case, colors, c'', kempe)."""
    if step.kind == "recolor":
        return [("two", tuple(sorted((c, cp))), None, False)]
    out = [("three", tuple(sorted((c, cp, step.third))), step.third, False)]
    if is_proper(graph, before) and is_proper(graph, after):
        out.append(("two", tuple(sorted(step.colors)), None, True))
    return out


def _realize(ker: GeneralKernel, graph: BipartiteGraph, cur: Coloring, N: list[int], c: int,
             fixed: set[int], start: tuple[Walk, int] | None = None) -> list[tuple[Way, tuple[int, ...]]]:
    """Chain moves for one component: the component walk, each step wrapped in repairs."""
    cps: dict[str, int] = {}

    def hook(ctx, step, before, after):
        X, moves = ctx
        cp = cps["cp"]
        for case, colors, cpp, kempe in _move_classes(graph, step, c, cp, before, after):
            if not ker.case_probability(case):
                continue
            if kempe:
                if X != before:
                    continue
                classes = [WayClass(case, colors, None, True, after, after, after)]
            else:
                try:
                    ys = ker.repair_distribution(after, c, cp)
                except ContractError:
                    continue
                classes = [WayClass(case, colors, cpp, False, before, after, y) for y in sorted(ys)]
            for wc in classes:
                ch = ker.ways_in_class(X, wc)
                if ch is None:
                    continue
                way = Way(ker.name, ch)
                out, prob = ker.replay(X, way)
                if out.y == wc.y and prob > 0:
                    yield wc.y, moves + [(way, wc.y)]

    options = [start] if start is not None else starts(graph, cur, N, c, fixed)
    for opt in options:
        cps["cp"] = opt[1]
        got = _search(graph, cur, N, c, fixed, opt, hook, (cur.colors, []))
        if got is not None:
            return got[1][1]
    raise PlanError(f"no chain realization for the component {sorted(N)} in color {c}")


def component_moves(graph: BipartiteGraph, L: Coloring, N: Sequence[int], c: int,
                    kernel: str = "general", avoid: Iterable[int] = (),
                    start: tuple[Walk, int] | None = None) -> list[tuple[Way, Fraction, Coloring]]:
    """The component walk as chain moves from proper ``L``: (way, way probability, proper state) per move."""
    ker = kernel_for(graph, L.k, kernel)
    out = []
    cur = L
    for way, y in _realize(ker, graph, L, list(N), c, set(avoid), start):
        out.append((way, ker.way_probability(cur, way), Coloring(y, L.k)))
        cur = out[-1][2]
    return out


def _components(graph: BipartiteGraph, diff: set[int]) -> list[list[int]]:
    """Connected pieces of an edge set, ordered by smallest vertex."""
    seen: set[int] = set()
    comps = []
    for e in sorted(diff):
        if e in seen:
            continue
        comp, stack = [], [e]
        seen.add(e)
        while stack:
            f = stack.pop()
            comp.append(f)
            for v in graph.edges[f]:
                for g in graph.adjacency[v]:
                    if g in diff and g not in seen:
                        seen.add(g)
                        stack.append(g)
        comps.append(comp)
    comps.sort(key=lambda es: min(min(graph.edges[f]) for f in es))
    return comps


def _flip_stage(ker: GeneralKernel, graph: BipartiteGraph, cur: Coloring, target: Coloring,
                a: int, b: int) -> list[tuple[Way, tuple[int, ...]]]:
    """Flip every maximal (a, b) component on which ``cur`` and ``target`` disagree."""
    moves = []
    x = cur.colors
    H = ker.subgraph(x, a, b)
    for comp in sorted(H.components, key=lambda cm: min(cm.vertices)):
        if all(x[e] == target.colors[e] for e in comp.edges):
            continue
        A = flip(x, comp.edges, a, b)
        wc = WayClass("two", (a, b), None, True, A, A, A)
        ch = ker.ways_in_class(x, wc)
        if ch is None:
            raise PlanError(f"cannot flip the component at vertex {min(comp.vertices)}")
        way = Way(ker.name, ch)
        out, prob = ker.replay(x, way)
        if out.y != A or prob <= 0:
            raise PlanError("component flip does not replay")
        moves.append((way, A))
        x = A
        H = ker.subgraph(x, a, b)
    return moves


def transform_plan(graph: BipartiteGraph, k: int, C1: Coloring, C2: Coloring,
                   kernel: str = "general") -> TransformPlan:
    for C in (C1, C2):
        check_coloring(graph, C)
        if C.k != k:
            raise InputError(f"coloring uses k={C.k}, expected {k}")
        if not is_proper(graph, C.colors):
            raise InputError("both colorings must be proper")
    ker = kernel_for(graph, k, kernel)
    plan = TransformPlan(graph, k, ker.name, C1, C2)

    def add(moves) -> None:
        for way, y in moves:
            plan.moves.append(way)
            plan.states.append(Coloring(y, k))
        nonlocal cur
        if moves:
            cur = plan.states[-1]

    cur = C1
    order = sorted(set(C2.colors))
    fixed: set[int] = set()
    if k <= 2:
        if k == 2:
            add(_flip_stage(ker, graph, cur, C2, 0, 1))
    else:
        for i, ci in enumerate(order):
            rest = order[i:]
            free_cols = {cur.colors[e] for e in range(graph.n_edges) if cur.colors[e] not in fixed}
            if len(rest) <= 2 and free_cols <= set(rest):
                if len(rest) == 2:
                    add(_flip_stage(ker, graph, cur, C2, rest[0], rest[1]))
                break
            diff = {e for e in range(graph.n_edges) if (cur.colors[e] == ci) != (C2.colors[e] == ci)}
            for j, N in enumerate(_components(graph, diff)):
                add(_realize(ker, graph, cur, N, ci, fixed))
                plan.milestones.append(("small", ci, len(plan.moves)))
            fixed.add(ci)
            plan.milestones.append(("large", ci, len(plan.moves)))
    if cur != C2:
        raise PlanError("construction did not reach the target coloring")
    return plan


def step_bound(s: int) -> int:
    return math.ceil(3 * s / 2)
