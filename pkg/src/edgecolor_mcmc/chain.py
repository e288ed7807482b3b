"""The proposal kernel on proper edge k-colorings of a bipartite graph.

A proposal runs in stages.  From the current proper coloring ``x`` it picks a
case (lazy, two colors, three colors) and the colors, flips a selection of
alternating subpaths (giving ``A``, possibly with deficient vertices), applies
one perturbation ``f`` (giving ``B``) and repairs every deficiency by flipping
alternating paths (giving the proposed coloring ``y``).

Every random decision goes through a driver, so the same code samples,
replays a recorded :class:`Way`, and enumerates all ways exhaustively.

Metropolis-Hastings uses *way classes*: the class of a way is its case, its
colors and the three intermediate colorings ``(A, B, y)``.  The reverse class
from ``y`` is ``(B, A, x)``, which makes the forward/reverse map an involution.
Class probabilities are computed exactly by summing over all ways in the class.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import comb, lcm
from typing import Iterator, Sequence

from .coloring import ContractError, Deficiency, alternating_walk, deficiencies, flip, is_proper
from .graph import BipartiteGraph, Coloring, InputError, check_coloring
from .twocolor import AnchoredPairMenu, SubpathMenu, anchored_pair_edges, two_color_subgraph

ONE = Fraction(1)
HALF = Fraction(1, 2)
QUARTER = Fraction(1, 4)


class WayError(ContractError):
    """A recorded way cannot be replayed from the given coloring."""


class ReverseError(RuntimeError):
    """The reverse-way bijection failed; this is an internal invariant violation."""


# -- ways ----------------------------------------------------------------------


def _fmt_value(v) -> str:
    if isinstance(v, tuple):
        return ",".join(str(x) for x in v)
    return str(v)


def _parse_value(text: str):
    if "," in text:
        return tuple(int(x) for x in text.split(","))
    if text.lstrip("-").isdigit():
        return int(text)
    return text


@dataclass(frozen=True)
class Way:
    """Every random choice of one proposal, in the order it was made."""

    kernel: str
    choices: tuple[tuple[str, object], ...]

    def _get(self, tag: str, default=None):
        for t, v in self.choices:
            if t == tag:
                return v
        return default

    @property
    def kind(self) -> str:
        return self._get("case")

    @property
    def is_lazy(self) -> bool:
        return self.kind == "lazy"

    @property
    def colors(self) -> tuple[int, ...] | None:
        """``(c, c')`` for two-color ways, ``(c, c', c'')`` for three-color ways."""
        cols = self._get("colors")
        if cols is None:
            return None
        if self.kind == "two":
            return cols
        d = self._get("distinguished")
        rest = tuple(c for c in cols if c != d)
        return rest + (d,)

    @property
    def selection(self) -> tuple[str, int] | None:
        sub = self._get("subcase")
        if sub == "b" and self._get("subpath") is not None:
            return ("subpath", self._get("subpath"))
        if sub == "c" and self._get("pair") is not None:
            return ("pair", self._get("pair"))
        return None

    @property
    def repair_picks(self) -> list[tuple[int, int]]:
        return [v for t, v in self.choices if t == "repair"]

    @property
    def action(self) -> tuple[tuple[str, object], ...]:
        """The perturbation choices between selection and repair."""
        skip = {"case", "colors", "distinguished", "subcase", "subpath", "pair", "repair"}
        return tuple((t, v) for t, v in self.choices if t not in skip)

    def serialize(self) -> str:
        return self.kernel + ":" + ";".join(f"{t}={_fmt_value(v)}" for t, v in self.choices)

    @classmethod
    def parse(cls, text: str) -> Way:
        text = text.strip()
        kernel, _, body = text.partition(":")
        if kernel not in ("general", "regular"):
            raise InputError(f"unknown kernel in way {text!r}")
        choices = []
        for part in filter(None, body.split(";")):
            tag, eq, val = part.partition("=")
            if not eq:
                raise InputError(f"malformed way entry {part!r}")
            choices.append((tag, _parse_value(val)))
        return cls(kernel, tuple(choices))

    def __str__(self) -> str:
        return self.serialize()


@dataclass(frozen=True)
class Proposal:
    source: Coloring
    target: Coloring
    way: Way
    probability: Fraction


@dataclass(frozen=True)
class WayClass:
    """Case, colors and the stage colorings ``(A, B, y)`` of a proposal."""

    case: str
    colors: tuple[int, ...] = ()
    distinguished: int | None = None
    kempe: bool = False
    A: tuple[int, ...] | None = None
    B: tuple[int, ...] | None = None
    y: tuple[int, ...] | None = None

    def reverse(self, x: tuple[int, ...]) -> WayClass:
        if self.case == "lazy":
            return self
        if self.kempe:
            return WayClass(self.case, self.colors, self.distinguished, True, x, x, x)
        return WayClass(self.case, self.colors, self.distinguished, False, self.B, self.A, x)


@dataclass
class Outcome:
    y: tuple[int, ...]
    wclass: WayClass


# -- drivers -------------------------------------------------------------------


@dataclass(frozen=True)
class FOption:
    """One leaf of the perturbation stage: its choices, weight and action."""

    choices: tuple[tuple[str, object], ...]
    weight: Fraction
    action: tuple


class Driver:
    def __init__(self) -> None:
        self.record: list[tuple[str, object]] = []
        self.prob = ONE

    def choose(self, tag: str, options: Sequence, weights: Sequence[Fraction] | None = None):
        i = self._index(tag, options, weights)
        v = options[i]
        self.record.append((tag, v))
        self.prob *= weights[i] if weights is not None else Fraction(1, len(options))
        return v

    def choose_option(self, options: Sequence[FOption]) -> FOption:
        i = self._option_index(options)
        o = options[i]
        self.record.extend(o.choices)
        self.prob *= o.weight
        return o

    def _index(self, tag, options, weights) -> int:
        raise NotImplementedError

    def _option_index(self, options) -> int:
        raise NotImplementedError


class RandomDriver(Driver):
    def __init__(self, rng: random.Random) -> None:
        super().__init__()
        self.rng = rng

    def _pick_weighted(self, weights) -> int:
        den = lcm(*(w.denominator for w in weights))
        r = self.rng.randrange(den)
        acc = 0
        for i, w in enumerate(weights):
            acc += w.numerator * (den // w.denominator)
            if r < acc:
                return i
        raise ContractError("weights do not sum to one")

    def _index(self, tag, options, weights) -> int:
        if weights is None:
            return self.rng.randrange(len(options))
        return self._pick_weighted(weights)

    def _option_index(self, options) -> int:
        if len(options) == 1:
            return 0
        return self._pick_weighted([o.weight for o in options])


class ReplayDriver(Driver):
    def __init__(self, choices: Sequence[tuple[str, object]]) -> None:
        super().__init__()
        self.script = list(choices)
        self.pos = 0

    def _index(self, tag, options, weights) -> int:
        if self.pos >= len(self.script):
            raise WayError(f"way does not apply: ran out of choices at {tag!r}")
        t, v = self.script[self.pos]
        if t != tag:
            raise WayError(f"way does not apply: expected {tag!r}, found {t!r}")
        self.pos += 1
        try:
            if isinstance(options, range):
                if v not in options:
                    raise ValueError
                return v - options.start
            return list(options).index(v)
        except (ValueError, TypeError):
            raise WayError(f"way does not apply: {tag}={v!r} is not available") from None

    def _option_index(self, options) -> int:
        for i, o in enumerate(options):
            n = len(o.choices)
            if tuple(self.script[self.pos:self.pos + n]) == o.choices:
                self.pos += n
                return i
        raise WayError(f"way does not apply: no perturbation matches at position {self.pos}")

    def finish(self) -> None:
        if self.pos != len(self.script):
            raise WayError("way does not apply: unused trailing choices")


class EnumDriver(Driver):
    """Follows a prefix of option indices, then takes index 0, noting branch sizes."""

    def __init__(self, prefix: Sequence[int]) -> None:
        super().__init__()
        self.prefix = list(prefix)
        self.taken: list[int] = []
        self.sizes: list[int] = []

    def _next(self, n: int) -> int:
        d = len(self.taken)
        i = self.prefix[d] if d < len(self.prefix) else 0
        self.taken.append(i)
        self.sizes.append(n)
        return i

    def _index(self, tag, options, weights) -> int:
        return self._next(len(options))

    def _option_index(self, options) -> int:
        return self._next(len(options))

    def successor(self) -> list[int] | None:
        for d in range(len(self.taken) - 1, -1, -1):
            if self.taken[d] + 1 < self.sizes[d]:
                return self.taken[:d] + [self.taken[d] + 1]
        return None


# -- kernels -------------------------------------------------------------------


def _other(c: int, c1: int, c2: int) -> int:
    return c2 if c == c1 else c1


class GeneralKernel:
    """The kernel for arbitrary bipartite graphs."""

    name = "general"
    subcases = ("a", "b", "c")
    subcase_weight = Fraction(1, 3)

    def __init__(self, graph: BipartiteGraph, k: int) -> None:
        if k < graph.max_degree:
            raise InputError(f"infeasible color count: k={k} < max degree {graph.max_degree}")
        self.graph = graph
        self.k = k
        self.pairs = list(combinations(range(k), 2))
        self.triples = list(combinations(range(k), 3))
        if k >= 3:
            self.cases, self.case_weights = ("lazy", "two", "three"), (HALF, QUARTER, QUARTER)
        elif k == 2:
            self.cases, self.case_weights = ("lazy", "two"), (Fraction(3, 4), QUARTER)
        else:
            self.cases, self.case_weights = ("lazy",), (ONE,)
        self._subcase_weights = (self.subcase_weight,) * len(self.subcases)
        self._stay_cache: dict = {}
        self._defs_cache: dict = {}
        self._h_cache: dict = {}
        self._menu_cache: dict = {}
        self._opt_cache: dict = {}
        self._eff_cache: dict = {}

    # ---- shared helpers

    def case_probability(self, case: str) -> Fraction:
        return self.case_weights[self.cases.index(case)] if case in self.cases else Fraction(0)

    def color_probability(self, case: str) -> Fraction:
        if case == "two":
            return Fraction(1, len(self.pairs))
        return Fraction(1, 3 * len(self.triples))

    def _defs(self, cols) -> list[Deficiency] | None:
        got = self._defs_cache.get(cols, False)
        if got is False:
            got = deficiencies(self.graph, cols, self.k)
            if len(self._defs_cache) > 50_000:
                self._defs_cache.clear()
            self._defs_cache[cols] = got
        return got

    def _memo(self, table: dict, key, fn):
        got = table.get(key)
        if got is None:
            got = fn()
            if len(table) > 20_000:
                table.clear()
            table[key] = got
        return got

    def subgraph(self, cols, c: int, cp: int):
        key = (cols, c, cp)
        got = self._h_cache.get(key)
        if got is None:
            got = two_color_subgraph(self.graph, cols, c, cp)
            if len(self._h_cache) > 20_000:
                self._h_cache.clear()
            self._h_cache[key] = got
        return got

    def h_type(self, cols, c: int, cp: int) -> list[Deficiency] | None:
        """Deficiencies if ``cols`` is proper or almost with only (c, c')-type ones, else None."""
        defs = self._defs(cols)
        if defs is None or len(defs) > 2:
            return None
        for d in defs:
            if d.repeated_color == c:
                if cp not in d.missing_colors:
                    return None
            elif d.repeated_color == cp:
                if c not in d.missing_colors:
                    return None
            else:
                return None
        return defs

    def h_edges_at(self, cols, v: int, c: int, cp: int) -> list[int]:
        return [e for e in self.graph.adjacency[v] if cols[e] == c or cols[e] == cp]

    def edge_of_color(self, cols, v: int, col: int) -> int | None:
        for e in self.graph.adjacency[v]:
            if cols[e] == col:
                return e
        return None

    # ---- menus

    def single_menu(self, case: str, H) -> SubpathMenu:
        return SubpathMenu(H, "all" if case == "two" else "three")

    def pair_menu(self, case: str, H) -> AnchoredPairMenu:
        return AnchoredPairMenu(H, shared_interior=True)

    def menu(self, case: str, subcase: str, H):
        key = (id(H), case, subcase)
        hit = self._menu_cache.get(key)
        if hit is None or hit[0] is not H:
            hit = (H, self._build_menu(case, subcase, H))
            self._memo(self._menu_cache, key, lambda: hit)
            self._menu_cache[key] = hit
        return hit[1]

    def _build_menu(self, case: str, subcase: str, H):
        if subcase == "b":
            return self.single_menu(case, H)
        return self.pair_menu(case, H)

    @staticmethod
    def entry_edges(subcase: str, entry) -> tuple[int, ...]:
        if subcase == "b":
            return entry.edges
        return anchored_pair_edges(entry)

    def deficiency_free_entries(self, subcase: str, menu) -> int:
        """Entries of a three-color selection menu whose flip creates no deficiency."""
        H = menu.H
        if subcase == "b":
            if menu.mode == "even":
                return 0
            return sum(1 for comp in H.components if comp.kind == "cycle")
        if not menu.shared:
            return 0
        return sum(comp.n - 2 for comp in H.components if comp.kind == "path" and comp.n >= 3)

    # ---- the transition

    def run(self, x: tuple[int, ...], drv: Driver) -> Outcome:
        case = drv.choose("case", self.cases, self.case_weights)
        if case == "lazy":
            return Outcome(x, WayClass("lazy"))
        if case == "two":
            c, cp = drv.choose("colors", self.pairs)
            cpp = None
        else:
            triple = drv.choose("colors", self.triples)
            cpp = drv.choose("distinguished", triple)
            c, cp = (t for t in triple if t != cpp)
        H = self.subgraph(x, c, cp)
        sub = drv.choose("subcase", self.subcases, self._subcase_weights)
        edges: tuple[int, ...] = ()
        if sub != "a":
            menu = self.menu(case, sub, H)
            if len(menu):
                tag = "subpath" if sub == "b" else "pair"
                i = drv.choose(tag, range(len(menu)))
                edges = self.entry_edges(sub, menu[i])
        A = flip(x, edges, c, cp) if edges else x
        kempe = False
        if edges and not self._defs(A):
            if case == "two":
                kempe = True
            else:
                A = x  # a deficiency-free selection does nothing here
        colors = (c, cp) if case == "two" else tuple(sorted((c, cp, cpp)))
        if kempe:
            B = A
        else:
            opts = self.options_at(case, c, cp, cpp, A)
            opt = drv.choose_option(opts)
            B = self.resolve(case, c, cp, cpp, A, opt.action)
        y = self.repair(B, c, cp, drv)
        return Outcome(y, WayClass(case, colors, cpp, kempe, A, B, y))

    def repair(self, cols, c: int, cp: int, drv: Driver) -> tuple[int, ...]:
        for _ in range(4):
            defs = self._defs(cols)
            if defs is None:
                raise ContractError("repair reached a coloring that is not almost proper")
            if not defs:
                return cols
            d = defs[0]
            v, e = drv.choose("repair", ((d.vertex, d.edges[0]), (d.vertex, d.edges[1])))
            partner = _other(d.repeated_color, c, cp)
            walk, _ = alternating_walk(self.graph, cols, v, e, d.repeated_color, partner)
            cols = flip(cols, walk, d.repeated_color, partner)
        raise ContractError("deficiencies persisted after four repair walks")

    def repair_distribution(self, cols, c: int, cp: int) -> dict[tuple[int, ...], Fraction]:
        out: dict[tuple[int, ...], Fraction] = {}
        stack = [(cols, ONE, 0)]
        while stack:
            cur, p, depth = stack.pop()
            defs = self._defs(cur)
            if defs is None or depth > 4:
                raise ContractError("repair reached a coloring that is not almost proper")
            if not defs:
                out[cur] = out.get(cur, Fraction(0)) + p
                continue
            d = defs[0]
            partner = _other(d.repeated_color, c, cp)
            for e in d.edges:
                walk, _ = alternating_walk(self.graph, cur, d.vertex, e, d.repeated_color, partner)
                stack.append((flip(cur, walk, d.repeated_color, partner), p * HALF, depth + 1))
        return out

    # ---- perturbation options

    def qualifying(self, cols, defs, c: int, cp: int, cpp: int) -> list[int]:
        bad = {d.vertex for d in defs}
        out = []
        for v in self.graph.vertices:
            if v in bad:
                continue
            has_cpp = has_h = False
            for e in self.graph.adjacency[v]:
                col = cols[e]
                if col == cpp:
                    has_cpp = True
                elif col == c or col == cp:
                    has_h = True
            if has_cpp and has_h:
                out.append(v)
        return out

    def options_at(self, case: str, c: int, cp: int, cpp: int | None, S) -> list[FOption]:
        return self._memo(self._opt_cache, (case, c, cp, cpp, S), lambda: self._options(case, c, cp, cpp, S))

    def _options(self, case, c, cp, cpp, S) -> list[FOption]:
        defs = self._defs(S)
        if defs is None:
            raise ContractError("perturbation stage reached an invalid coloring")
        if case == "two":
            return self._two_options(S, defs, c, cp)
        return self._three_options(S, defs, c, cp, cpp)

    def _two_options(self, S, defs, c, cp) -> list[FOption]:
        if defs:
            w = Fraction(1, 2 * len(defs))
            return [
                FOption((("vertex", d.vertex), ("edge", e)), w, ("toggle", e))
                for d in defs
                for e in d.edges
            ]
        hedges = [e for e, col in enumerate(S) if col == c or col == cp]
        opts = [FOption((("free", "nothing"),), HALF, ("nothing",))]
        if not hedges:
            opts.append(FOption((("free", "flip"),), HALF, ("nothing",)))
        else:
            w = HALF / len(hedges)
            opts += [FOption((("free", "flip"), ("edge", e)), w, ("toggle", e)) for e in hedges]
        return opts

    def _iv_options(self, S, defs, c, cp, cpp, scale: Fraction, prefix) -> list[FOption]:
        Q = self.qualifying(S, defs, c, cp, cpp)
        if not Q:
            return [FOption(prefix, scale, ("nothing",))]
        opts = []
        for u in Q:
            fs = self.h_edges_at(S, u, c, cp)
            w = scale / (len(Q) * len(fs))
            for f in fs:
                opts.append(FOption(prefix + (("vertex", u), ("f_edge", f)), w, ("path", u, f)))
        return opts

    def _three_options(self, S, defs, c, cp, cpp) -> list[FOption]:
        if len(defs) == 2:
            return [
                FOption((("vertex", d.vertex), ("edge", g)), QUARTER, ("trail", d.vertex, g))
                for d in defs
                for g in d.edges
            ]
        if len(defs) == 1:
            d = defs[0]
            opts = [
                FOption((("pivot_kind", "deficient"), ("vertex", d.vertex), ("edge", g)), QUARTER,
                        ("trail", d.vertex, g))
                for g in d.edges
            ]
            return opts + self._iv_options(S, defs, c, cp, cpp, HALF, (("pivot_kind", "other"),))
        return self._iv_options(S, defs, c, cp, cpp, ONE, ())

    def action_edges(self, S, action, cpp) -> tuple[tuple[int, ...], int, int] | None:
        """Edges flipped by an action and the two colors swapped, or None for nothing."""
        kind = action[0]
        if kind == "nothing":
            return None
        if kind == "toggle":
            return None  # handled by the caller
        if kind == "trail":
            _, v, g = action
            ct = S[g]
            fwd, end = alternating_walk(self.graph, S, v, g, ct, cpp)
            edges = list(fwd)
            if end != v:
                e = next((x for x in self.graph.adjacency[v] if S[x] == cpp and x not in fwd), None)
                if e is not None:
                    back, _ = alternating_walk(self.graph, S, v, e, cpp, ct, blocked=fwd)
                    edges += back
            return tuple(edges), ct, cpp
        if kind == "path":
            _, u, f = action
            e = self.edge_of_color(S, u, cpp)
            ct = S[f]
            walk, _ = alternating_walk(self.graph, S, u, e, cpp, ct, blocked=(f,))
            return tuple(walk), ct, cpp
        raise ContractError(f"unknown action {action!r}")

    def raw_outcome(self, case, c, cp, cpp, S, action) -> tuple[int, ...]:
        kind = action[0]
        if kind == "nothing":
            return S
        if kind == "toggle":
            e = action[1]
            return flip(S, (e,), c, cp)
        edges, a, b = self.action_edges(S, action, cpp)
        return flip(S, edges, a, b)

    @staticmethod
    def action_anchor(action) -> int | None:
        if action[0] in ("trail", "path", "cycle", "kempe"):
            return action[1]
        return None

    def _reaches(self, case, c, cp, cpp, S, target, touched: set[int]) -> bool:
        """Whether some perturbation option at ``S`` has raw outcome ``target``."""
        for o in self.options_at(case, c, cp, cpp, S):
            act = o.action
            if act[0] == "nothing":
                continue
            if act[0] == "toggle":
                if act[1] not in touched:
                    continue
            elif self.action_anchor(act) not in touched:
                continue
            if self.raw_outcome(case, c, cp, cpp, S, act) == target:
                return True
        return False

    def effective(self, case, c, cp, cpp, A, B) -> bool:
        """An option ``A -> B`` takes effect iff ``B`` is repairable and some option maps it back."""
        return self._memo(self._eff_cache, (case, c, cp, cpp, A, B), lambda: self._effective(case, c, cp, cpp, A, B))

    def _effective(self, case, c, cp, cpp, A, B) -> bool:
        if B == A or self.h_type(B, c, cp) is None:
            return False
        diff = [e for e in range(len(A)) if A[e] != B[e]]
        touched_edges = set(diff)
        if case == "two":
            return self._reaches(case, c, cp, cpp, B, A, touched_edges)
        verts = set()
        for e in diff:
            verts.update(self.graph.edges[e])
        return self._reaches(case, c, cp, cpp, B, A, verts)

    def resolve(self, case, c, cp, cpp, A, action) -> tuple[int, ...]:
        B = self.raw_outcome(case, c, cp, cpp, A, action)
        if B == A:
            return A
        return B if self.effective(case, c, cp, cpp, A, B) else A

    # ---- class probabilities

    def selection_probability(self, case: str, H, x, A) -> Fraction:
        w = self.subcase_weight
        c, cp = H.colors
        if A == x:
            p = w
            for sub in self.subcases[1:]:
                menu = self.menu(case, sub, H)
                n = len(menu)
                if n == 0:
                    p += w
                elif case == "three":
                    p += w * Fraction(self.deficiency_free_entries(sub, menu), n)
            return p
        diff = []
        for e in range(len(x)):
            if x[e] != A[e]:
                if x[e] not in (c, cp) or A[e] != _other(x[e], c, cp):
                    return Fraction(0)
                diff.append(e)
        p = Fraction(0)
        for sub in self.subcases[1:]:
            menu = self.menu(case, sub, H)
            n = len(menu)
            if n:
                hits = len(menu.lookup(diff))
                if hits:
                    p += w * Fraction(hits, n)
        return p

    def perturbation_probability(self, case, c, cp, cpp, A, B) -> Fraction:
        if B == A:
            key = (case, c, cp, cpp, A)
            got = self._stay_cache.get(key)
            if got is None:
                got = sum(
                    (o.weight for o in self.options_at(case, c, cp, cpp, A)
                     if self.resolve(case, c, cp, cpp, A, o.action) == A),
                    Fraction(0),
                )
                if len(self._stay_cache) > 200_000:
                    self._stay_cache.clear()
                self._stay_cache[key] = got
            return got
        diff = [e for e in range(len(A)) if A[e] != B[e]]
        verts = set()
        for e in diff:
            verts.update(self.graph.edges[e])
        total = Fraction(0)
        effective = None
        for o in self.options_at(case, c, cp, cpp, A):
            act = o.action
            if act[0] == "nothing":
                continue
            if act[0] == "toggle":
                if len(diff) != 1 or act[1] != diff[0]:
                    continue
            elif self.action_anchor(act) not in verts:
                continue
            if self.raw_outcome(case, c, cp, cpp, A, act) != B:
                continue
            if effective is None:
                effective = self.effective(case, c, cp, cpp, A, B)
            if effective:
                total += o.weight
        return total

    def class_probability(self, x: tuple[int, ...], wc: WayClass) -> Fraction:
        if wc.case == "lazy":
            return self.case_probability("lazy")
        p = self.case_probability(wc.case)
        if not p:
            return p
        p *= self.color_probability(wc.case)
        if wc.case == "two":
            c, cp = wc.colors
            cpp = None
        else:
            cpp = wc.distinguished
            c, cp = (t for t in wc.colors if t != cpp)
        H = self.subgraph(x, c, cp)
        A, B, y = wc.A, wc.B, wc.y
        if wc.kempe:
            if wc.case != "two" or A == x or not (A == B == y) or not is_proper(self.graph, A):
                return Fraction(0)
            return p * self.selection_probability(wc.case, H, x, A)
        if A != x and self.h_type(A, c, cp) in (None, []):
            return Fraction(0)
        ps = self.selection_probability(wc.case, H, x, A)
        if not ps:
            return ps
        pf = self.perturbation_probability(wc.case, c, cp, cpp, A, B)
        if not pf:
            return pf
        pr = self.repair_distribution(B, c, cp).get(y, Fraction(0))
        return p * ps * pf * pr

    # ---- public operations on colorings

    def _check(self, coloring: Coloring) -> tuple[int, ...]:
        check_coloring(self.graph, coloring)
        if coloring.k != self.k:
            raise InputError(f"coloring uses k={coloring.k}, kernel has k={self.k}")
        if not is_proper(self.graph, coloring.colors):
            raise ContractError("the current coloring must be proper")
        return coloring.colors

    def propose(self, current: Coloring, rng: random.Random) -> Proposal:
        return self.sample(current, rng)[0]

    def sample(self, current: Coloring, rng: random.Random) -> tuple[Proposal, WayClass]:
        x = self._check(current)
        drv = RandomDriver(rng)
        out = self.run(x, drv)
        prop = Proposal(current, Coloring(out.y, self.k), Way(self.name, tuple(drv.record)), drv.prob)
        return prop, out.wclass

    def replay(self, x: tuple[int, ...], way: Way) -> tuple[Outcome, Fraction]:
        if way.kernel != self.name:
            raise WayError(f"way does not apply: it belongs to the {way.kernel} kernel")
        drv = ReplayDriver(way.choices)
        out = self.run(x, drv)
        drv.finish()
        return out, drv.prob

    def way_probability(self, source: Coloring, way: Way) -> Fraction:
        return self.replay(self._check(source), way)[1]

    def apply_way(self, source: Coloring, way: Way) -> Coloring:
        return Coloring(self.replay(self._check(source), way)[0].y, self.k)

    def way_class(self, source: Coloring, way: Way) -> WayClass:
        return self.replay(self._check(source), way)[0].wclass

    def reverse_way(self, source: Coloring, way: Way, target: Coloring) -> Way:
        x = self._check(source)
        out, _ = self.replay(x, way)
        if out.y != target.colors:
            raise WayError("way does not apply: it does not lead to the given target")
        if way.is_lazy:
            return way
        rc = out.wclass.reverse(x)
        choices = self.ways_in_class(out.y, rc)
        if choices is None:
            raise ReverseError(f"no reverse way from the target for {way}")
        rev = Way(self.name, choices)
        back, prob = self.replay(out.y, rev)
        if back.y != x or back.wclass != rc or prob <= 0:
            raise ReverseError(f"reverse way {rev} does not reproduce the source")
        return rev

    def ways_in_class(self, x: tuple[int, ...], wc: WayClass):
        """Choices of one (canonical) way from ``x`` in class ``wc``, or None."""
        ch: list[tuple[str, object]] = [("case", wc.case)]
        if wc.case == "lazy":
            return tuple(ch)
        if wc.case == "two":
            c, cp = wc.colors
            cpp = None
            ch.append(("colors", wc.colors))
        else:
            cpp = wc.distinguished
            c, cp = (t for t in wc.colors if t != cpp)
            ch += [("colors", wc.colors), ("distinguished", cpp)]
        H = self.subgraph(x, c, cp)
        A = wc.A
        if A == x:
            ch.append(("subcase", "a"))
        else:
            diff = [e for e in range(len(x)) if x[e] != A[e]]
            for sub in self.subcases[1:]:
                menu = self.menu(wc.case, sub, H)
                hits = menu.lookup(diff) if len(menu) else []
                if hits:
                    ch += [("subcase", sub), ("subpath" if sub == "b" else "pair", hits[0])]
                    break
            else:
                return None
        if not wc.kempe:
            for o in self.options_at(wc.case, c, cp, cpp, A):
                if self.resolve(wc.case, c, cp, cpp, A, o.action) == wc.B:
                    ch += list(o.choices)
                    break
            else:
                return None
        picks = self._repair_picks(wc.B, wc.y, c, cp)
        if picks is None:
            return None
        ch += [("repair", p) for p in picks]
        return tuple(ch)

    def _repair_picks(self, B, y, c, cp):
        stack = [(B, [])]
        while stack:
            cur, picks = stack.pop()
            defs = self._defs(cur)
            if defs is None or len(picks) > 4:
                continue
            if not defs:
                if cur == y:
                    return picks
                continue
            d = defs[0]
            partner = _other(d.repeated_color, c, cp)
            for e in reversed(d.edges):
                walk, _ = alternating_walk(self.graph, cur, d.vertex, e, d.repeated_color, partner)
                stack.append((flip(cur, walk, d.repeated_color, partner), picks + [(d.vertex, e)]))
        return None

    def enumerate_ways(self, source: Coloring) -> Iterator[tuple[Way, Fraction, Coloring]]:
        """Every way from ``source`` with its probability and result."""
        x = self._check(source)
        prefix: list[int] | None = []
        while prefix is not None:
            drv = EnumDriver(prefix)
            out = self.run(x, drv)
            yield Way(self.name, tuple(drv.record)), drv.prob, Coloring(out.y, self.k)
            prefix = drv.successor()


@lru_cache(maxsize=64)
def kernel_for(graph: BipartiteGraph, k: int, name: str = "general"):
    if name == "general":
        return GeneralKernel(graph, k)
    if name == "regular":
        from .regular import RegularKernel

        return RegularKernel(graph, k)
    raise InputError(f"unknown kernel {name!r}")


def propose(graph: BipartiteGraph, k: int, current: Coloring, rng: random.Random) -> Proposal:
    return kernel_for(graph, k).propose(current, rng)


def way_probability(graph: BipartiteGraph, k: int, source: Coloring, way: Way) -> Fraction:
    return kernel_for(graph, k, way.kernel).way_probability(source, way)


def apply_way(graph: BipartiteGraph, k: int, source: Coloring, way: Way) -> Coloring:
    return kernel_for(graph, k, way.kernel).apply_way(source, way)


def reverse_way(graph: BipartiteGraph, k: int, source: Coloring, way: Way, target: Coloring) -> Way:
    return kernel_for(graph, k, way.kernel).reverse_way(source, way, target)


def enumerate_ways(graph: BipartiteGraph, k: int, source: Coloring, kernel: str = "general"):
    return kernel_for(graph, k, kernel).enumerate_ways(source)
