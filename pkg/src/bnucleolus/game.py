"""Players, coalitions, allocations and excesses of a TU game."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from .rational import format_rational, parse_rational

_ZERO = Fraction(0)


@dataclass(frozen=True, order=True)
class Coalition:
    """A set of players, identified by its bitmask over player indices.

    Ordering is by bitmask value, which is the canonical tie order used
    throughout the package.
    """

    mask: int
    player_count: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.player_count:
            raise ValueError(f"mask {self.mask} has bits outside {self.player_count} players")

    @classmethod
    def of(cls, members: Iterable[int], player_count: int) -> "Coalition":
        mask = 0
        for i in members:
            if not 0 <= i < player_count:
                raise ValueError(f"unknown player index {i}")
            mask |= 1 << i
        return cls(mask, player_count)

    @classmethod
    def grand(cls, player_count: int) -> "Coalition":
        return cls((1 << player_count) - 1, player_count)

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.player_count) if self.mask >> i & 1)

    @property
    def is_proper(self) -> bool:
        """Nonempty and not the grand coalition."""
        return 0 < self.mask < (1 << self.player_count) - 1

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def __contains__(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def __or__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask | other.mask, self.player_count)

    def __and__(self, other: "Coalition") -> "Coalition":
        return Coalition(self.mask & other.mask, self.player_count)


@dataclass(frozen=True)
class Allocation:
    """Payoff per player.  Efficiency and rationality are checked, not assumed."""

    players: tuple[str, ...]
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.players) != len(self.values):
            raise ValueError("one value per player required")
        object.__setattr__(self, "values", tuple(Fraction(v) for v in self.values))

    @classmethod
    def from_mapping(cls, players: Sequence[str], mapping: Mapping[str, Fraction]) -> "Allocation":
        missing = [p for p in players if p not in mapping]
        if missing:
            raise KeyError(f"allocation lacks players {missing}")
        extra = set(mapping) - set(players)
        if extra:
            raise KeyError(f"unknown players {sorted(extra)}")
        return cls(tuple(players), tuple(mapping[p] for p in players))

    @classmethod
    def uniform(cls, players: Sequence[str], value: Fraction) -> "Allocation":
        return cls(tuple(players), (Fraction(value),) * len(players))

    def __getitem__(self, player: str | int) -> Fraction:
        if isinstance(player, int):
            return self.values[player]
        return self.values[self.players.index(player)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.players, self.values))

    def total(self) -> Fraction:
        return sum(self.values, _ZERO)

    def of(self, coalition: Coalition | int) -> Fraction:
        """x(S)."""
        mask = coalition.mask if isinstance(coalition, Coalition) else coalition
        total = _ZERO
        i = 0
        while mask:
            if mask & 1:
                total += self.values[i]
            mask >>= 1
            i += 1
        return total

    def format(self) -> str:
        return " ".join(f"{p}={format_rational(v)}" for p, v in zip(self.players, self.values))


class Game:
    """A cooperative game (N, v) with a memoised value oracle.

    ``oracle`` takes a coalition bitmask and must be deterministic and pure.
    """

    def __init__(self, players: Sequence[str], oracle: Callable[[int], Fraction]):
        self.players = tuple(players)
        self.n = len(self.players)
        self._oracle = oracle
        self._cache: dict[int, Fraction] = {0: _ZERO}
        self.graph = None

    @classmethod
    def from_graph(cls, graph, oracle: Callable | None = None) -> "Game":
        """The b-matching game on ``graph``; ``oracle(graph, mask)`` defaults to bmatching.value."""
        from . import bmatching
        fn = oracle or bmatching.value
        game = cls(graph.names, lambda mask: fn(graph, mask))
        game.graph = graph
        return game

    @classmethod
    def from_table(cls, players: Sequence[str], table: Mapping[int, Fraction]) -> "Game":
        return cls(players, lambda mask: Fraction(table.get(mask, 0)))

    def value(self, coalition: Coalition | int) -> Fraction:
        mask = coalition.mask if isinstance(coalition, Coalition) else coalition
        hit = self._cache.get(mask)
        if hit is None:
            hit = self._cache[mask] = Fraction(self._oracle(mask))
        return hit

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def grand_value(self) -> Fraction:
        return self.value(self.full_mask)

    def coalition(self, members: Iterable[str | int]) -> Coalition:
        idx = [m if isinstance(m, int) else self.players.index(m) for m in members]
        return Coalition.of(idx, self.n)

    def names(self, coalition: Coalition | int) -> list[str]:
        mask = coalition.mask if isinstance(coalition, Coalition) else coalition
        return [p for i, p in enumerate(self.players) if mask >> i & 1]


def proper_coalitions(n: int, max_size: int | None = None) -> Iterator[int]:
    """Bitmasks of all nonempty proper coalitions, smallest first by size then mask."""
    top = n - 1 if max_size is None else min(max_size, n - 1)
    for size in range(1, top + 1):
        masks = sorted(sum(1 << i for i in c) for c in combinations(range(n), size))
        yield from masks


def excess(game: Game, coalition: Coalition | int, allocation: Allocation) -> Fraction:
    """e(S, x) = x(S) - v(S)."""
    mask = coalition.mask if isinstance(coalition, Coalition) else coalition
    if mask >> game.n:
        raise ValueError(f"coalition mentions a player index >= {game.n}")
    return allocation.of(mask) - game.value(mask)


@dataclass(frozen=True)
class ExcessVector:
    entries: tuple[tuple[Coalition, Fraction], ...]

    @property
    def values(self) -> tuple[Fraction, ...]:
        return tuple(e for _, e in self.entries)

    def minimum(self) -> Fraction:
        return self.entries[0][1]

    def __len__(self) -> int:
        return len(self.entries)


def excess_vector(game: Game, allocation: Allocation,
                  family: Iterable[Coalition | int]) -> ExcessVector:
    """Excesses over ``family``, non-decreasing, ties in canonical bitmask order."""
    pairs = []
    for c in family:
        coal = c if isinstance(c, Coalition) else Coalition(c, game.n)
        pairs.append((coal, excess(game, coal, allocation)))
    if not pairs:
        raise ValueError("family must be nonempty")
    pairs.sort(key=lambda p: (p[1], p[0].mask))
    return ExcessVector(tuple(pairs))


def lex_compare(a: ExcessVector | Sequence[Fraction], b: ExcessVector | Sequence[Fraction]) -> int:
    """-1, 0 or 1 as ``a`` is lexicographically below, equal to or above ``b``."""
    va = a.values if isinstance(a, ExcessVector) else tuple(a)
    vb = b.values if isinstance(b, ExcessVector) else tuple(b)
    if len(va) != len(vb):
        raise ValueError(f"excess vectors differ in length ({len(va)} vs {len(vb)})")
    for x, y in zip(va, vb):
        if x != y:
            return -1 if x < y else 1
    return 0


def is_imputation(game: Game, allocation: Allocation) -> bool:
    if allocation.total() != game.grand_value:
        return False
    return all(allocation.values[i] >= game.value(1 << i) for i in range(game.n))


def core_check(game: Game, allocation: Allocation,
               family: Iterable[Coalition | int] | None = None) -> Coalition | None:
    """First coalition (canonical order) with negative excess, or None when x passes.

    ``family`` defaults to every proper coalition.
    """
    if family is None:
        masks = range(1, game.full_mask)
    else:
        masks = sorted(c.mask if isinstance(c, Coalition) else c for c in family)
    for mask in masks:
        if allocation.of(mask) < game.value(mask):
            return Coalition(mask, game.n)
    return None


def parse_allocation(text: str, players: Sequence[str], source: str = "<allocation>") -> Allocation:
    """``name value`` per line (value as ``p`` or ``p/q``); ``#`` starts a comment."""
    values: dict[str, Fraction] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.replace("=", " ").split()
        if len(tokens) != 2:
            raise ValueError(f"{source}:{lineno}: expected 'name value'")
        name, val = tokens
        if name not in players:
            raise ValueError(f"{source}:{lineno}: unknown player {name!r}")
        if name in values:
            raise ValueError(f"{source}:{lineno}: duplicate entry for {name!r}")
        try:
            values[name] = parse_rational(val)
        except ValueError as exc:
            raise ValueError(f"{source}:{lineno}: {exc}") from None
    missing = [p for p in players if p not in values]
    if missing:
        raise ValueError(f"{source}: no value for {missing}")
    return Allocation(tuple(players), tuple(values[p] for p in players))


def dump_allocation(allocation: Allocation) -> str:
    return "".join(f"{p} {format_rational(v)}\n" for p, v in zip(allocation.players, allocation.values))
