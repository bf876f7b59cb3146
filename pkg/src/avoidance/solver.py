"""Exact solvers and strategy verification.

State is a pair of point bitmasks; the side to move is implied by the
cardinalities, so the transposition key is just (mover's set, waiter's
set). A move that completes a line in the mover's set loses for the mover
on the spot; a full board with no contained line is a draw. Search is
three-valued (win / draw / loss from the mover's seat) with an early exit
on the first winning move.

``verify_strategy`` plays a scripted strategy against every adversary
reply (or a seeded random sample), memoizing on (position, strategy
state); only passing subtrees are cached so a failure always carries a
replayable history.

Subtrees may be searched concurrently against a shared write-once table
without changing any result; the implementation here is single-threaded
and deterministic.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .core import (
    Game,
    GameError,
    IllegalMoveError,
    Outcome,
    Player,
    SearchCapExceeded,
    Winner,
    is_transitive,
    set_of,
)

WIN, DRAW, LOSS = 1, 0, -1


@dataclass
class SolveReport:
    outcome: Outcome
    principal_variation: tuple
    states_visited: int
    table_size: int

    def to_json(self) -> dict:
        return {
            "outcome": self.outcome.winner.value,
            "loss_time": self.outcome.loss_time,
            "pv": [sorted(m) if isinstance(m, (set, frozenset)) else m
                   for m in self.principal_variation],
            "states": self.states_visited,
            "table": self.table_size,
        }


def _iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def solve(game: Game, cap: int = 16, use_table: bool = True,
          move_order: str = "ascending", root_symmetry: bool = False) -> SolveReport:
    """Exact outcome of the single-point avoidance game under optimal play.

    ``root_symmetry`` restricts the first move to point 0; this is exact
    for transitive games (verified before use) since the automorphism
    group then carries any opening move to any other.
    """
    if game.n > cap:
        raise SearchCapExceeded(
            f"board size {game.n} exceeds solve cap {cap}; raise cap explicitly")
    if root_symmetry and not is_transitive(game):
        raise GameError("root_symmetry requires a transitive game")
    full = game.full_mask
    n = game.n
    loses_after = game.loses_after
    minline = game.lines.min_line_size
    table: dict = {}
    stats = {"visited": 0}
    descending = move_order == "descending"

    def moves_of(unclaimed: int) -> list:
        out = list(_iter_bits(unclaimed))
        return out[::-1] if descending else out

    def search(mine: int, theirs: int) -> int:
        key = mine | (theirs << n)
        if use_table:
            hit = table.get(key)
            if hit is not None:
                return hit
        stats["visited"] += 1
        unclaimed = full & ~(mine | theirs)
        if unclaimed == 0:
            return DRAW
        best = LOSS
        cnt = bin(mine).count("1") + 1
        for x in moves_of(unclaimed):
            nm = mine | (1 << x)
            if cnt >= minline and loses_after(nm, x):
                val = LOSS
            else:
                val = -search(theirs, nm)
            if val > best:
                best = val
                if best == WIN:
                    break
        if use_table:
            table[key] = best
        return best

    if root_symmetry and game.n > 0:
        first = 1 << 0
        if 1 >= minline and loses_after(first, 0):
            root_val = LOSS
        else:
            root_val = -search(0, first)
        stats["visited"] += 1
    else:
        root_val = search(0, 0)

    pv = _principal_variation(game, search, root_val,
                              force_first=0 if root_symmetry else None,
                              move_order=move_order)
    outcome = _outcome_from_pv(game, pv)
    got = {Winner.PI_WIN: WIN, Winner.DRAW: DRAW, Winner.PII_WIN: LOSS}[outcome.winner]
    if got != root_val:
        raise GameError("principal variation does not replay to the solved value")
    return SolveReport(outcome, tuple(pv), stats["visited"], len(table))


def _principal_variation(game, search, root_val, force_first, move_order) -> list:
    full = game.full_mask
    minline = game.lines.min_line_size
    loses_after = game.loses_after
    descending = move_order == "descending"
    pv: list = []
    mine, theirs = 0, 0
    want = root_val
    while True:
        unclaimed = full & ~(mine | theirs)
        if unclaimed == 0:
            return pv
        options = list(_iter_bits(unclaimed))
        if descending:
            options.reverse()
        if force_first is not None and not pv:
            options = [force_first]
        cnt = bin(mine).count("1") + 1
        for x in options:
            nm = mine | (1 << x)
            if cnt >= minline and loses_after(nm, x):
                val = LOSS
                terminal = True
            else:
                val = -search(theirs, nm)
                terminal = False
            if val == want:
                pv.append(x)
                if terminal:
                    return pv
                mine, theirs = theirs, nm
                want = -want
                break
        else:
            raise GameError("no move matches the solved value")


def _outcome_from_pv(game: Game, pv: list) -> Outcome:
    a = b = 0
    for i, move in enumerate(pv):
        bits = move if isinstance(move, int) else None
        if i % 2 == 0:
            a |= (1 << bits) if bits is not None else _mask(move)
            if game.lines.contains_mask(a):
                return Outcome(Winner.PII_WIN, i + 1)
        else:
            b |= (1 << bits) if bits is not None else _mask(move)
            if game.lines.contains_mask(b):
                return Outcome(Winner.PI_WIN, i + 1)
    return Outcome(Winner.DRAW)


def _mask(points) -> int:
    v = 0
    for p in points:
        v |= 1 << p
    return v


def earliest_forced_loss(game: Game, cap: int = 16) -> int:
    """Index of Player II's losing move when Player I hurries the loss.

    Player I minimises and Player II maximises the index of the move on
    which Player II first contains a line; positions where Player II
    escapes entirely (a draw, or Player I containing a line) count as
    infinitely late. Requires the game to be a first-player win.
    """
    base = solve(game, cap=cap)
    if base.outcome.winner is not Winner.PI_WIN:
        raise GameError("earliest_forced_loss needs a first-player-win game")
    full = game.full_mask
    n = game.n
    minline = game.lines.min_line_size
    loses_after = game.loses_after
    INF = float("inf")
    table: dict = {}

    def search(a: int, b: int):
        key = a | (b << n)
        hit = table.get(key)
        if hit is not None:
            return hit
        depth = bin(a).count("1") + bin(b).count("1")
        unclaimed = full & ~(a | b)
        if unclaimed == 0:
            val = INF
        elif depth % 2 == 0:  # Player I to move, minimising
            val = INF
            for x in _iter_bits(unclaimed):
                na = a | (1 << x)
                if bin(na).count("1") >= minline and loses_after(na, x):
                    continue  # suicide never hurries Player II's loss
                val = min(val, search(na, b))
        else:
            val = 0
            for x in _iter_bits(unclaimed):
                nb = b | (1 << x)
                if bin(nb).count("1") >= minline and loses_after(nb, x):
                    cand = depth + 1
                else:
                    cand = search(a, nb)
                val = max(val, cand)
        table[key] = val
        return val

    value = search(0, 0)
    if value == INF:
        raise GameError("delay search disagrees with the solver (bug)")
    return int(value)


def solve_plus(game: Game, cap: int = 8) -> SolveReport:
    """Exact outcome of the variant where a move claims any nonempty set.

    Positions are (current player's points, other player's points); the
    same table entry serves both seats. Moves are enumerated smallest set
    first.
    """
    if game.n > cap:
        raise SearchCapExceeded(
            f"board size {game.n} exceeds plus-solve cap {cap}; raise cap explicitly")
    full = game.full_mask
    contains = game.lines.contains_mask
    table: dict = {}
    stats = {"visited": 0}
    n = game.n

    def submasks(mask: int) -> list:
        subs = []
        s = mask
        while s:
            subs.append(s)
            s = (s - 1) & mask
        subs.sort(key=lambda v: (bin(v).count("1"), v))
        return subs

    def search(cur: int, other: int) -> int:
        key = cur | (other << n)
        hit = table.get(key)
        if hit is not None:
            return hit
        stats["visited"] += 1
        unclaimed = full & ~(cur | other)
        if unclaimed == 0:
            return DRAW
        best = LOSS
        for u in submasks(unclaimed):
            nc = cur | u
            val = LOSS if contains(nc) else -search(other, nc)
            if val > best:
                best = val
                if best == WIN:
                    break
        table[key] = best
        return best

    root = search(0, 0)
    pv: list = []
    cur, other, want = 0, 0, root
    while True:
        unclaimed = full & ~(cur | other)
        if unclaimed == 0:
            break
        for u in submasks(unclaimed):
            nc = cur | u
            terminal = contains(nc)
            val = LOSS if terminal else -search(other, nc)
            if val == want:
                pv.append(frozenset(set_of(u)))
                cur, other, want = other, nc, -want
                break
        else:
            raise GameError("no plus move matches the solved value")
        if terminal:
            break
    outcome = _outcome_from_pv(game, pv)
    return SolveReport(outcome, tuple(pv), stats["visited"], len(table))


# ---------------------------------------------------------------------------
# strategy verification

class Goal(Enum):
    WIN = "win"
    NEVER_LOSE = "neverlose"


@dataclass
class VerifyReport:
    verdict: str                       # "pass" or "counterexample"
    counterexample: Optional[tuple]    # move history replaying to the violation
    leaves: int
    mode: str
    seed: Optional[int] = None
    samples: Optional[int] = None

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        doc = {"verdict": self.verdict, "leaves": self.leaves, "mode": self.mode}
        if self.counterexample is not None:
            doc["counterexample"] = list(self.counterexample)
        if self.seed is not None:
            doc["seed"] = self.seed
            doc["samples"] = self.samples
        return doc


def verify_strategy(game: Game, strategy, owner: Player, goal: Goal,
                    mode: str = "exhaustive", samples: int = 100_000,
                    seed: int = 0) -> VerifyReport:
    """Check a win or never-lose guarantee against adversary play.

    Exhaustive mode forces the strategy's moves and branches over every
    adversary reply, merging on (position, strategy state). Sampled mode
    plays ``samples`` seeded random play-outs. The counterexample history,
    when present, replays to the failure: the owner contains a line first,
    the adversary survives to a draw under a win goal, or the final entry
    is an illegal move the strategy emitted.
    """
    if strategy.role is not owner:
        raise GameError(f"strategy {strategy.name} plays {strategy.role}, not {owner}")
    if strategy.n != game.n:
        raise GameError("strategy board size differs from the game")
    if mode == "exhaustive":
        return _verify_exhaustive(game, strategy, owner, goal)
    if mode == "sampled":
        return _verify_sampled(game, strategy, owner, goal, samples, seed)
    raise GameError(f"unknown mode {mode!r}")


def _step(game: Game, a: int, b: int, x: int, mover: Player):
    bit = 1 << x
    if not 0 <= x < game.n or (a | b) & bit:
        raise IllegalMoveError(f"illegal move {x}")
    if mover is Player.ONE:
        a |= bit
        lost = bin(a).count("1") >= game.lines.min_line_size and game.loses_after(a, x)
    else:
        b |= bit
        lost = bin(b).count("1") >= game.lines.min_line_size and game.loses_after(b, x)
    return a, b, lost


def _mover(a: int, b: int) -> Player:
    return Player.ONE if bin(a).count("1") == bin(b).count("1") else Player.TWO


def _verify_exhaustive(game: Game, strategy, owner: Player, goal: Goal) -> VerifyReport:
    full = game.full_mask
    memo: set = set()
    stats = {"leaves": 0}

    def owner_step(a: int, b: int, strat):
        """Play the forced owner move. Returns (a, b, status, move).

        status: "continue", "owner_lost", "draw_end", or "illegal".
        """
        try:
            x = strat.choose(a, b)
        except IllegalMoveError:
            return a, b, "illegal", -1
        try:
            a, b, lost = _step(game, a, b, x, owner)
        except IllegalMoveError:
            return a, b, "illegal", x
        if lost:
            return a, b, "owner_lost", x
        if (a | b) == full:
            return a, b, "draw_end", x
        return a, b, "continue", x

    def explore(a: int, b: int, strat) -> Optional[list]:
        """Adversary to move, game not over. None = subtree passes."""
        key = (a, b, strat.key())
        if key in memo:
            return None
        unclaimed = full & ~(a | b)
        for q in _iter_bits(unclaimed):
            s2 = strat.clone()
            s2.observe(a, b, q)
            a2, b2, lost = _step(game, a, b, q, owner.other)
            if lost:
                stats["leaves"] += 1
                continue  # adversary contained a line first: fine for both goals
            if (a2 | b2) == full:
                stats["leaves"] += 1
                if goal is Goal.WIN:
                    return [q]  # adversary escaped with a draw
                continue
            a3, b3, status, x = owner_step(a2, b2, s2)
            if status == "illegal":
                return [q, x]
            if status == "owner_lost":
                return [q, x]
            if status == "draw_end":
                stats["leaves"] += 1
                if goal is Goal.WIN:
                    return [q, x]
                continue
            sub = explore(a3, b3, s2)
            if sub is not None:
                return [q, x] + sub
        memo.add(key)
        return None

    strat = strategy.clone()
    strat.reset()
    prefix: list = []
    a = b = 0
    if owner is Player.ONE:
        a, b, status, x = owner_step(a, b, strat)
        prefix = [x]
        if status == "illegal":
            return VerifyReport("counterexample", (x,), 0, "exhaustive")
        if status == "owner_lost":
            return VerifyReport("counterexample", (x,), 1, "exhaustive")
        if status == "draw_end":
            stats["leaves"] += 1
            if goal is Goal.WIN:
                return VerifyReport("counterexample", (x,), 1, "exhaustive")
            return VerifyReport("pass", None, 1, "exhaustive")
    cx = explore(a, b, strat)
    if cx is not None:
        return VerifyReport("counterexample", tuple(prefix + cx),
                            stats["leaves"], "exhaustive")
    return VerifyReport("pass", None, stats["leaves"], "exhaustive")


def _verify_sampled(game: Game, strategy, owner: Player, goal: Goal,
                    samples: int, seed: int) -> VerifyReport:
    full = game.full_mask
    rng = random.Random(seed)
    leaves = 0
    for _ in range(samples):
        strat = strategy.clone()
        strat.reset()
        a = b = 0
        history: list = []
        failed = None
        while True:
            mover = _mover(a, b)
            if mover is owner:
                x = -1
                try:
                    x = strat.choose(a, b)
                    a, b, lost = _step(game, a, b, x, owner)
                except IllegalMoveError:
                    failed = history + [x]
                    break
                history.append(x)
                if lost:
                    failed = history
                    break
            else:
                unclaimed = full & ~(a | b)
                q = rng.choice(list(_iter_bits(unclaimed)))
                strat.observe(a, b, q)
                a, b, lost = _step(game, a, b, q, owner.other)
                history.append(q)
                if lost:
                    break  # adversary lost: play-out passes
            if (a | b) == full:
                if goal is Goal.WIN and not lost:
                    failed = history
                break
        leaves += 1
        if failed is not None:
            return VerifyReport("counterexample", tuple(failed), leaves,
                                "sampled", seed=seed, samples=samples)
    return VerifyReport("pass", None, leaves, "sampled", seed=seed, samples=samples)
