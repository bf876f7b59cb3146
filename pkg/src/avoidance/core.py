"""Game model for avoidance positional games.

The board is the integer range 0..n-1 and a point set is any frozenset of
board points. A game designates certain point sets as *lines*; two players
alternate claiming unclaimed points and the first player whose claimed set
contains a line loses immediately. A full board with no contained line is
a draw.

Line families are held either explicitly (a list of sets) or implicitly
(an analytic membership predicate, used where the family is too large to
enumerate). Automorphisms are permutations of the board that map lines to
lines; a game is transitive when the group generated by its shipped
generators has a single point orbit.

Positions, games and permutations are immutable values; every operation
here is a pure function, so concurrent use needs no coordination.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, Iterator, Mapping, Optional


class GameError(Exception):
    """Base class for errors raised by this package."""


class IllegalMoveError(GameError):
    """A move on a claimed point, or a point off the board."""


class LinePreservationError(GameError):
    """A supplied generator maps some line to a non-line."""

    def __init__(self, message: str, perm: "Permutation", witness: frozenset):
        super().__init__(message)
        self.perm = perm
        self.witness = witness


class SearchCapExceeded(GameError):
    """A bounded search hit its cap; the result is inconclusive, not negative."""


class StrategyInvariantError(GameError):
    """A scripted strategy reached a state its contract rules out (a bug)."""


class Player(Enum):
    ONE = 1
    TWO = 2

    @property
    def other(self) -> "Player":
        return Player.TWO if self is Player.ONE else Player.ONE


class Winner(Enum):
    PI_WIN = "PIWin"
    PII_WIN = "PIIWin"
    DRAW = "Draw"


@dataclass(frozen=True)
class Outcome:
    """Result of a completed or solved game.

    ``loss_time`` is the 1-based index of the move on which the loser first
    contained a line; it is present exactly when the game is not a draw and
    its parity identifies the loser (odd = Player I, even = Player II).
    """

    winner: Winner
    loss_time: Optional[int] = None

    def __post_init__(self):
        if self.winner is Winner.DRAW:
            if self.loss_time is not None:
                raise ValueError("a drawn game has no loss_time")
            return
        if self.loss_time is None:
            raise ValueError("a decided game needs a loss_time")
        loser_is_one = self.winner is Winner.PII_WIN
        if loser_is_one != (self.loss_time % 2 == 1):
            raise ValueError(
                f"loss_time {self.loss_time} has the wrong parity for {self.winner.value}"
            )


@dataclass(frozen=True)
class Permutation:
    """A bijection on 0..n-1, stored as its image tuple."""

    image: tuple[int, ...]

    def __post_init__(self):
        n = len(self.image)
        if sorted(self.image) != list(range(n)):
            raise ValueError("image is not a bijection on [0, n)")

    @property
    def n(self) -> int:
        return len(self.image)

    def __call__(self, x: int) -> int:
        return self.image[x]

    def apply_set(self, s: Iterable[int]) -> frozenset:
        return frozenset(self.image[x] for x in s)

    def compose(self, other: "Permutation") -> "Permutation":
        """self after other: (self.compose(other))(x) == self(other(x))."""
        return Permutation(tuple(self.image[y] for y in other.image))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.image)
        for i, j in enumerate(self.image):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.image))

    def is_fpf_involution(self) -> bool:
        return all(self.image[x] != x and self.image[self.image[x]] == x
                   for x in range(len(self.image)))

    @staticmethod
    def identity(n: int) -> "Permutation":
        return Permutation(tuple(range(n)))

    @staticmethod
    def cycle(n: int, shift: int = 1) -> "Permutation":
        return Permutation(tuple((i + shift) % n for i in range(n)))

    @staticmethod
    def from_mapping(n: int, pairs: Mapping[int, int]) -> "Permutation":
        img = list(range(n))
        for a, b in pairs.items():
            img[a] = b
        return Permutation(tuple(img))


def mask_of(points: Iterable[int]) -> int:
    m = 0
    for p in points:
        m |= 1 << p
    return m


def set_of(mask: int) -> frozenset:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return frozenset(out)


class LineStore:
    """Interface shared by explicit and implicit line families."""

    n: int
    min_line_size: int

    def contains_mask(self, mask: int) -> bool:
        raise NotImplementedError

    def contains(self, s: Iterable[int]) -> bool:
        return self.contains_mask(mask_of(s))

    def loses_after(self, mask: int, point: int) -> bool:
        """Did adding ``point`` (already set in ``mask``) complete a line?"""
        return self.contains_mask(mask)

    def is_line(self, s: Iterable[int]) -> bool:
        raise NotImplementedError

    def check_preserved(self, perm: Permutation) -> None:
        """Raise LinePreservationError if ``perm`` maps some line off the family."""
        raise NotImplementedError


class ExplicitLines(LineStore):
    def __init__(self, n: int, lines: Iterable[Iterable[int]]):
        self.n = n
        line_sets = [frozenset(l) for l in lines]
        seen = set()
        for l in line_sets:
            if not l:
                raise ValueError("empty line")
            if not all(0 <= x < n for x in l):
                raise ValueError("line point off the board")
            if l in seen:
                raise ValueError(f"duplicate line {sorted(l)}")
            seen.add(l)
        self.lines = tuple(line_sets)
        self._line_set = seen
        self.masks = tuple(mask_of(l) for l in line_sets)
        self.min_line_size = min((len(l) for l in line_sets), default=n + 1)
        # lines through each point, for the incremental loss check
        self._by_point: list[tuple[int, ...]] = [() for _ in range(n)]
        per_point: list[list[int]] = [[] for _ in range(n)]
        for lm, l in zip(self.masks, line_sets):
            for x in l:
                per_point[x].append(lm)
        self._by_point = [tuple(v) for v in per_point]

    def contains_mask(self, mask: int) -> bool:
        return any(mask & lm == lm for lm in self.masks)

    def loses_after(self, mask: int, point: int) -> bool:
        return any(mask & lm == lm for lm in self._by_point[point])

    def is_line(self, s: Iterable[int]) -> bool:
        return frozenset(s) in self._line_set

    def check_preserved(self, perm: Permutation) -> None:
        for l in self.lines:
            if perm.apply_set(l) not in self._line_set:
                raise LinePreservationError(
                    f"generator maps line {sorted(l)} to non-line "
                    f"{sorted(perm.apply_set(l))}", perm, l)


class ImplicitLines(LineStore):
    """Line family given by predicates instead of an enumeration.

    ``contains_fn`` must answer containment for arbitrary point sets; it is
    cross-checked against k-subset enumeration at desk sizes by the test
    suite before being trusted. ``w_iter``/``w_member``, when present,
    describe the complementary family of allowed sets used for generator
    validation.
    """

    def __init__(self, n: int, k: int,
                 is_line_fn: Callable[[frozenset], bool],
                 contains_fn: Callable[[frozenset], bool],
                 spec: tuple[str, dict],
                 w_iter: Optional[Callable[[], Iterator[frozenset]]] = None,
                 w_member: Optional[Callable[[frozenset], bool]] = None):
        self.n = n
        self.min_line_size = k
        self.k = k
        self._is_line = is_line_fn
        self._contains = contains_fn
        self.spec = spec
        self._w_iter = w_iter
        self._w_member = w_member

    def contains_mask(self, mask: int) -> bool:
        return self._contains(set_of(mask))

    def contains(self, s: Iterable[int]) -> bool:
        return self._contains(frozenset(s))

    def loses_after(self, mask: int, point: int) -> bool:
        return self._contains(set_of(mask))

    def is_line(self, s: Iterable[int]) -> bool:
        return self._is_line(frozenset(s))

    def check_preserved(self, perm: Permutation) -> None:
        if self._w_iter is None or self._w_member is None:
            raise GameError("implicit store lacks an allowed-set enumeration")
        # The line family is determined by the allowed family inside the
        # size-k level, and perm permutes that level; preserving one is
        # preserving the other.
        for w in self._w_iter():
            if not self._w_member(perm.apply_set(w)):
                raise LinePreservationError(
                    f"generator maps allowed set {sorted(w)} out of the family",
                    perm, w)


@dataclass(frozen=True)
class Game:
    n: int
    lines: LineStore
    generators: tuple[Permutation, ...]
    name: str
    meta: Mapping[str, object] = field(default_factory=dict)

    def contains_line(self, s: Iterable[int]) -> bool:
        return self.lines.contains(s)

    def loses_after(self, mask: int, point: int) -> bool:
        return self.lines.loses_after(mask, point)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1


@dataclass(frozen=True)
class Position:
    """Claimed point sets for both players plus the side to move."""

    a: frozenset
    b: frozenset
    to_move: Player

    def __post_init__(self):
        if self.a & self.b:
            raise ValueError("player point sets overlap")
        diff = len(self.a) - len(self.b)
        want = 0 if self.to_move is Player.ONE else 1
        if diff != want:
            raise ValueError(f"|a|-|b|={diff} inconsistent with {self.to_move} to move")

    @staticmethod
    def initial() -> "Position":
        return Position(frozenset(), frozenset(), Player.ONE)

    def claimed(self) -> frozenset:
        return self.a | self.b


def contains_line(game: Game, s: Iterable[int]) -> bool:
    """True iff some line of the game is a subset of ``s``."""
    return game.contains_line(s)


def apply_move(game: Game, pos: Position, x: int) -> tuple[Position, bool]:
    """Claim ``x`` for the side to move.

    Returns the new position and whether the mover's new set contains a
    line (the mover has just lost). Losing moves are legal; only claimed or
    out-of-range points are rejected.
    """
    if not 0 <= x < game.n:
        raise IllegalMoveError(f"point {x} off the board [0, {game.n})")
    if x in pos.a or x in pos.b:
        raise IllegalMoveError(f"point {x} already claimed")
    if pos.to_move is Player.ONE:
        new = Position(pos.a | {x}, pos.b, Player.TWO)
        lost = game.contains_line(new.a)
    else:
        new = Position(pos.a, pos.b | {x}, Player.ONE)
        lost = game.contains_line(new.b)
    return new, lost


def orbit(generators: Iterable[Permutation], x: int) -> frozenset:
    """Closure of {x} under the generators and their inverses."""
    gens = list(generators)
    if gens:
        sizes = {g.n for g in gens}
        if len(sizes) != 1:
            raise ValueError("generators act on different board sizes")
    maps = [g.image for g in gens] + [g.inverse().image for g in gens]
    seen = {x}
    queue = deque([x])
    while queue:
        y = queue.popleft()
        for img in maps:
            z = img[y]
            if z not in seen:
                seen.add(z)
                queue.append(z)
    return frozenset(seen)


def check_line_preservation(game: Game) -> None:
    """Validate every shipped generator; raises LinePreservationError."""
    for g in game.generators:
        if g.n != game.n:
            raise LinePreservationError(
                f"generator size {g.n} != board size {game.n}", g, frozenset())
        game.lines.check_preserved(g)


def is_transitive(game: Game) -> bool:
    """Single point orbit under the (validated) shipped generators."""
    check_line_preservation(game)
    if not game.generators:
        return game.n == 1
    return len(orbit(game.generators, 0)) == game.n


def find_fpf_involution(game: Game, cap: int = 10**6) -> Optional[Permutation]:
    """Search the generated group for a fixed-point-free involution.

    Breadth-first enumeration from the identity, multiplying by the shipped
    generators; visits at most ``cap`` group elements. Returns the first
    such element found, None if the whole group was enumerated without one,
    and raises SearchCapExceeded when the cap was hit (inconclusive, as
    opposed to a definite no).
    """
    ident = tuple(range(game.n))
    seen = {ident}
    queue = deque([ident])
    gen_images = [g.image for g in game.generators]
    while queue:
        cur = queue.popleft()
        for img in gen_images:
            nxt = tuple(img[c] for c in cur)
            if nxt in seen:
                continue
            if len(seen) >= cap:
                raise SearchCapExceeded(
                    f"group enumeration exceeded cap {cap}; result inconclusive")
            seen.add(nxt)
            p = Permutation(nxt)
            if p.is_fpf_involution():
                return p
            queue.append(nxt)
    return None
