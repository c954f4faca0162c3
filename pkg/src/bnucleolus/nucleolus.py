"""Nucleolus computation by the Kopelowitz sequence of linear programs.

Each round maximises the smallest excess over the coalitions that are still
free, then fixes every coalition whose excess equals that optimum at *all*
optimal solutions.  Rounds stop once the fixed equalities (plus efficiency)
pin a single allocation.

Running the scheme over a restricted coalition family gives the nucleolus
whenever the family is a characterization set; the bipartite ``b <= 2``
families used here are size-bounded supersets of such sets.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import bmatching
from .bmatching import RefusalError
from .exact_lp import (
    Constraint,
    LpModel,
    RowSpace,
    max_over_optimal_face,
    solve,
    solve_equalities,
)
from .game import Allocation, Coalition, Game, proper_coalitions
from .graph import GameGraph
from .rational import format_rational

log = logging.getLogger(__name__)

BRUTE_FORCE_PLAYER_CAP = 16
_EPS = "eps"
_ZERO = Fraction(0)


class SchemeError(RuntimeError):
    """The coalition family cannot pin down a unique allocation."""


class PreconditionError(ValueError):
    pass


@dataclass(frozen=True)
class CoalitionFamily:
    masks: tuple[int, ...]
    player_count: int
    provenance: str

    @classmethod
    def full(cls, n: int) -> "CoalitionFamily":
        return cls(tuple(proper_coalitions(n)), n, "full")

    @classmethod
    def size_bounded(cls, n: int, max_size: int, provenance: str | None = None) -> "CoalitionFamily":
        return cls(tuple(proper_coalitions(n, max_size)), n,
                   provenance or f"size_bounded({max_size})")

    @classmethod
    def of(cls, masks: Iterable[int | Coalition], n: int, provenance: str = "custom") -> "CoalitionFamily":
        out: list[int] = []
        seen: set[int] = set()
        full = (1 << n) - 1
        for c in masks:
            mask = c.mask if isinstance(c, Coalition) else c
            if not 0 < mask < full:
                raise ValueError(f"coalition {mask} is empty or the grand coalition")
            if mask not in seen:
                seen.add(mask)
                out.append(mask)
        return cls(tuple(out), n, provenance)

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self):
        return iter(self.masks)


@dataclass(frozen=True)
class SchemeRound:
    epsilon: Fraction
    fixed: tuple[Coalition, ...]
    point: Allocation


@dataclass(frozen=True)
class SchemeTrace:
    rounds: tuple[SchemeRound, ...]
    final: Allocation

    def report(self, game: Game | None = None) -> str:
        """One line per round: index, epsilon as p/q, fixed coalitions by member names."""

        def label(c: Coalition) -> str:
            if game is not None:
                return "{" + ",".join(game.names(c)) + "}"
            return "{" + ",".join(map(str, c.members)) + "}"

        lines = []
        for k, r in enumerate(self.rounds, 1):
            fixed = " ".join(label(c) for c in r.fixed)
            lines.append(f"round {k}\teps={format_rational(r.epsilon)}\t"
                         f"fixed={len(r.fixed)}\t{fixed}")
        lines.append(f"final\t{self.final.format()}")
        return "\n".join(lines)


def _xvar(i: int) -> str:
    return f"x{i}"


def _coeffs(mask: int) -> dict[str, int]:
    out = {}
    i = 0
    while mask:
        if mask & 1:
            out[_xvar(i)] = 1
        mask >>= 1
        i += 1
    return out


def _indicator(mask: int, n: int) -> list[Fraction]:
    return [Fraction(mask >> i & 1) for i in range(n)]


class _Scheme:
    def __init__(self, game: Game, family: Sequence[int], probe_all: bool):
        self.game = game
        self.n = game.n
        self.variables = tuple(_xvar(i) for i in range(self.n)) + (_EPS,)
        self.unfixed = list(family)
        self.fixed: list[tuple[int, Fraction]] = []  # (mask, epsilon of its round)
        self.probe_all = probe_all
        self.space = RowSpace(self.n)
        self.space.add([Fraction(1)] * self.n)
        self.base = [Constraint({v: 1 for v in self.variables[:-1]}, "==", game.grand_value)]
        self.base += [Constraint({_xvar(i): 1}, ">=", game.value(1 << i)) for i in range(self.n)]

    def model(self) -> LpModel:
        cons = list(self.base)
        for mask, eps in self.fixed:
            cons.append(Constraint(_coeffs(mask), "==", self.game.value(mask) + eps))
        for mask in self.unfixed:
            c = _coeffs(mask)
            c[_EPS] = -1
            cons.append(Constraint(c, ">=", self.game.value(mask)))
        return LpModel(self.variables, {_EPS: 1}, tuple(cons))

    def slack(self, mask: int, point, eps: Fraction) -> Fraction:
        total = sum((point[_xvar(i)] for i in range(self.n) if mask >> i & 1), _ZERO)
        return total - self.game.value(mask) - eps

    def _face(self, model: LpModel, eps: Fraction) -> LpModel:
        return model.with_constraint(Constraint({_EPS: 1}, "==", eps))

    def fix_round(self, model: LpModel, out) -> list[int]:
        eps = out.value
        offset = len(self.base) + len(self.fixed)
        if self.probe_all:
            return [mask for mask in self.unfixed
                    if max_over_optimal_face(model, _coeffs(mask), eps)
                    == self.game.value(mask) + eps]

        tight = [(k, mask) for k, mask in enumerate(self.unfixed)
                 if self.slack(mask, out.point, eps) == 0]
        # positive multiplier: tight at every optimum (complementary slackness)
        fixed = [mask for k, mask in tight if out.duals[offset + k] > 0]
        undecided = [mask for k, mask in tight if out.duals[offset + k] == 0]
        space = RowSpace(self.n)
        for vec in self.space._rows:
            space.add(vec[1])
        for mask in fixed:
            space.add(_indicator(mask, self.n))

        def absorb(candidates: list[int]) -> list[int]:
            # x(S) is constant on the optimal face when 1_S lies in the span of
            # the face's equalities; tight at one optimum then means tight at all
            rest = []
            for m in candidates:
                if space.contains(_indicator(m, self.n)):
                    fixed.append(m)
                else:
                    rest.append(m)
            return rest

        undecided = absorb(undecided)
        if undecided and space.rank < self.n:
            face = self._face(model, eps)
            agg: dict[str, int] = {}
            for mask in undecided:
                for v in _coeffs(mask):
                    agg[v] = agg.get(v, 0) + 1
            probe = solve(face.with_objective(agg))
            undecided = [m for m in undecided if self.slack(m, probe.point, eps) == 0]
        while undecided:
            if space.rank == self.n:
                # the optimal face is a single point, so everything tight there is fixed
                fixed.extend(undecided)
                break
            mask = undecided.pop(0)
            probe = solve(self._face(model, eps).with_objective(_coeffs(mask)))
            undecided = [m for m in undecided if self.slack(m, probe.point, eps) == 0]
            if probe.value == self.game.value(mask) + eps:
                fixed.append(mask)
                if space.add(_indicator(mask, self.n)):
                    undecided = absorb(undecided)
        return fixed

    def run(self) -> SchemeTrace:
        rounds = []
        while self.space.rank < self.n:
            if not self.unfixed:
                raise SchemeError(
                    f"coalition family exhausted with {self.n - self.space.rank} "
                    "free dimensions left")
            model = self.model()
            out = solve(model)
            if not out.optimal:
                raise SchemeError(f"round {len(rounds) + 1} LP is {out.status}")
            fixed = self.fix_round(model, out)
            if not fixed:
                raise SchemeError("no coalition became tight; LP engine inconsistency")
            eps = out.value
            fixed_set = set(fixed)
            self.unfixed = [m for m in self.unfixed if m not in fixed_set]
            fixed_sorted = sorted(fixed_set)
            for mask in fixed_sorted:
                self.fixed.append((mask, eps))
                self.space.add(_indicator(mask, self.n))
            point = Allocation(self.game.players,
                               tuple(out.point[_xvar(i)] for i in range(self.n)))
            rounds.append(SchemeRound(eps, tuple(Coalition(m, self.n) for m in fixed_sorted), point))
            log.debug("round %d: eps=%s fixed=%d rank=%d", len(rounds), eps,
                      len(fixed_sorted), self.space.rank)

        eqs = [({v: 1 for v in self.variables[:-1]}, self.game.grand_value)]
        eqs += [(_coeffs(mask), self.game.value(mask) + eps) for mask, eps in self.fixed]
        sol = solve_equalities(self.variables[:-1], eqs)
        final = Allocation(self.game.players, tuple(sol[_xvar(i)] for i in range(self.n)))
        return SchemeTrace(tuple(rounds), final)


def kopelowitz(game: Game, family: Iterable[int | Coalition] | CoalitionFamily | None = None,
               *, probe_all: bool = False) -> SchemeTrace:
    """Run the Kopelowitz scheme over ``family`` (default: all proper coalitions).

    Individual rationality and efficiency are hard constraints of every round.
    With ``probe_all`` every free coalition gets its own optimal-face probe;
    by default probes are skipped where dual multipliers, slack at a known
    optimal point, or a zero-dimensional face already decide the question.
    Both routes fix exactly the same coalitions.
    """
    n = game.n
    if n == 1:
        return SchemeTrace((), Allocation(game.players, (game.grand_value,)))
    if family is None:
        family = CoalitionFamily.full(n)
    if not isinstance(family, CoalitionFamily):
        family = CoalitionFamily.of(family, n)
    if not len(family):
        raise ValueError("coalition family must be nonempty")
    return _Scheme(game, family.masks, probe_all).run()


def nucleolus_bruteforce(game: Game, cap: int = BRUTE_FORCE_PLAYER_CAP) -> Allocation:
    if game.n > cap:
        raise RefusalError(f"{game.n} players exceeds the brute-force cap of {cap}")
    return kopelowitz(game).final


def _b2_bipartition(graph: GameGraph) -> tuple[int, ...]:
    """Colouring that puts as few b=2 vertices as possible on colour 1 (side B).

    Components without side labels may be flipped freely; labelled ones are
    taken as given.
    """
    colour = graph.bipartition()
    if colour is None:
        raise PreconditionError("graph is not bipartite")
    colour = list(colour)
    adj = graph.adjacency()
    seen = [False] * graph.n
    for start in range(graph.n):
        if seen[start]:
            continue
        comp, stack = [start], [start]
        seen[start] = True
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if not seen[y]:
                    seen[y] = True
                    comp.append(y)
                    stack.append(y)
        if any(graph.sides[x] != "-" for x in comp):
            continue

        def twos_on_b(flip: int) -> int:
            return sum(1 for x in comp if colour[x] ^ flip == 1 and graph.b[x] == 2)

        if twos_on_b(1) < twos_on_b(0):
            for x in comp:
                colour[x] ^= 1
    return tuple(colour)


def charset_i_family(graph: GameGraph, k: int | None = None) -> tuple[CoalitionFamily, int]:
    """Size-bounded family for simple bipartite games with b <= 2.

    At most ``k`` vertices of side B may have b = 2 (side A is unrestricted
    within b <= 2).  Every component of a b-matching is then a path or cycle
    with at most 2k+3 vertices, so the family is all coalitions of at most
    2k+3 players.  Returns the family and the k used; ``k=None`` takes the
    smallest admissible value.
    """
    if not graph.simple:
        raise PreconditionError("charset-i needs a simple b-matching game")
    if any(c not in (1, 2) for c in graph.b):
        raise PreconditionError("charset-i needs 1 <= b <= 2")
    colour = _b2_bipartition(graph)
    twos = sum(1 for i in range(graph.n) if colour[i] == 1 and graph.b[i] == 2)
    if k is None:
        k = twos
    if twos > k:
        raise PreconditionError(f"side B has {twos} vertices with b=2, more than k={k}")
    size = 2 * k + 3
    return CoalitionFamily.size_bounded(graph.n, size, f"charset_i({k})"), k


def nucleolus_charset_i(graph: GameGraph, k: int | None = None) -> Allocation:
    family, _ = charset_i_family(graph, k)
    return kopelowitz(Game.from_graph(graph), family).final


def _check_charset_ii(graph: GameGraph) -> None:
    if graph.simple:
        raise PreconditionError("charset-ii needs a non-simple game")
    if any(c != 2 for c in graph.b):
        raise PreconditionError("charset-ii needs b == 2 everywhere")
    if any(e.mult_allowed is not None and e.mult_allowed < 2 for e in graph.edges):
        raise PreconditionError("charset-ii needs every edge usable twice")
    if not graph.is_bipartite():
        raise PreconditionError("charset-ii needs a bipartite graph")


def charset_ii_family(graph: GameGraph) -> CoalitionFamily:
    """All singletons and pairs (adjacent or not)."""
    _check_charset_ii(graph)
    return CoalitionFamily.size_bounded(graph.n, 2, "charset_ii")


def nucleolus_charset_ii(graph: GameGraph) -> Allocation:
    family = charset_ii_family(graph)
    game = Game.from_graph(graph, bmatching.nonsimple2_value_fast)
    return kopelowitz(game, family).final


def is_nucleolus(game: Game, candidate: Allocation, cap: int = BRUTE_FORCE_PLAYER_CAP) -> bool:
    """Exact test of ``candidate`` against the brute-force nucleolus (cached on the game)."""
    if candidate.players != game.players:
        raise ValueError("candidate is over a different player set")
    cached = getattr(game, "_nucleolus", None)
    if cached is None:
        cached = nucleolus_bruteforce(game, cap)
        game._nucleolus = cached
    return cached.values == candidate.values


@dataclass(frozen=True)
class DualCore:
    """Optimal vertex cover dual and the allocation derived from it."""

    raw: Allocation  # optimal solution of min 2.x s.t. x_u + x_v >= w(uv), x >= 0
    allocation: Allocation  # 2 * raw, which sums to the grand value


def dual_core_solution(graph: GameGraph) -> DualCore:
    if graph.simple or any(c != 2 for c in graph.b):
        raise PreconditionError("dual core allocation needs a non-simple game with b == 2")
    names = tuple(_xvar(i) for i in range(graph.n))
    cons = []
    for e in graph.edges:
        if e.u != e.v:
            cons.append(Constraint({names[e.u]: 1, names[e.v]: 1}, ">=", e.weight))
    model = LpModel(names, {v: 2 for v in names}, tuple(cons), "min", frozenset(names))
    out = solve(model)
    raw = Allocation(graph.names, tuple(out.point[v] for v in names))
    return DualCore(raw, Allocation(graph.names, tuple(2 * v for v in raw.values)))


def dual_core_allocation(graph: GameGraph) -> Allocation:
    """A core allocation of a non-simple 2-matching game (any graph)."""
    return dual_core_solution(graph).allocation
