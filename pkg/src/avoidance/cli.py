"""Command-line workbench.

Commands: gen, check-transitive, solve, solve-plus, verify-strategy,
verify-lemma, play, catalog. Reports are single JSON documents on stdout.
Exit status: 0 = verified / succeeded, 1 = refuted (counterexample or
failing suite), 2 = usage error or refusal.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from . import pairset
from .core import (Game, GameError, IllegalMoveError, Player, Position,
                   apply_move, is_transitive, orbit)
from .constructions import CATALOG, game_from_json, game_to_json, parse_game_spec
from .solver import Goal, earliest_forced_loss, solve, solve_plus, verify_strategy
from .strategies import STRATEGY_NAMES, strategy_for


def _load_game(args) -> Game:
    if getattr(args, "game_file", None):
        with open(args.game_file, "r", encoding="utf-8") as fh:
            return game_from_json(json.load(fh))
    if getattr(args, "game", None):
        return parse_game_spec(args.game)
    raise GameError("provide --game or --game-file")


def _emit(doc: dict) -> None:
    print(json.dumps(doc, indent=2, sort_keys=True))


def cmd_gen(args) -> int:
    if "(" in args.construction:
        game = parse_game_spec(args.construction)
    else:
        entry = CATALOG.get(args.construction)
        if entry is None:
            raise GameError(f"unknown construction {args.construction!r}")
        params = []
        for pname in entry["params"]:
            val = getattr(args, pname if pname != "base" else "base", None)
            if val is None:
                raise GameError(f"construction {args.construction} needs --{pname}")
            params.append(parse_game_spec(val) if pname == "base" else val)
        if entry["factory"] is None:
            from .constructions import disjoint_copies, superset_lines
            fac = disjoint_copies if args.construction == "copies" else superset_lines
            game = fac(*params)
        else:
            game = entry["factory"](*params)
    doc = game_to_json(game)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2, sort_keys=True)
        print(f"wrote {args.out}")
    else:
        _emit(doc)
    return 0


def cmd_check_transitive(args) -> int:
    game = _load_game(args)
    try:
        transitive = is_transitive(game)
        preserved = True
        detail = None
    except GameError as exc:
        transitive, preserved, detail = False, False, str(exc)
    orb = sorted(orbit(game.generators, 0)) if preserved else []
    _emit({
        "game": game.name,
        "n": game.n,
        "lines_preserved": preserved,
        "line_violation": detail,
        "orbit_of_0": orb,
        "transitive": transitive,
    })
    return 0 if transitive else 1


def cmd_solve(args) -> int:
    game = _load_game(args)
    report = solve(game, cap=args.cap, root_symmetry=args.root_symmetry)
    _emit({"game": game.name, **report.to_json()})
    return 0


def cmd_solve_plus(args) -> int:
    game = _load_game(args)
    report = solve_plus(game, cap=args.cap)
    _emit({"game": game.name, **report.to_json()})
    return 0


def cmd_verify_strategy(args) -> int:
    game = _load_game(args)
    strat = strategy_for(game, args.strategy)
    goal = Goal.WIN if args.goal == "win" else Goal.NEVER_LOSE
    report = verify_strategy(game, strat, strat.role, goal, mode=args.mode,
                             samples=args.samples, seed=args.seed)
    _emit({"game": game.name, "strategy": strat.name, "goal": goal.value,
           **report.to_json()})
    return 0 if report.passed else 1


def cmd_verify_lemma(args) -> int:
    kwargs = {}
    if args.suite == "key-lemma" and args.max_free_pairs is not None:
        kwargs["max_free_pairs"] = args.max_free_pairs
    if args.suite == "all":
        reports = [pairset.run_suite(name, args.m, **({} if name != "key-lemma" else kwargs))
                   for name in pairset.SUITES]
    else:
        reports = [pairset.run_suite(args.suite, args.m, **kwargs)]
    _emit({"reports": [r.to_json() for r in reports]})
    return 0 if all(r.passed for r in reports) else 1


def cmd_earliest_loss(args) -> int:
    game = _load_game(args)
    value = earliest_forced_loss(game, cap=args.cap)
    _emit({"game": game.name, "earliest_forced_loss": value})
    return 0


def cmd_catalog(args) -> int:
    _emit({
        "constructions": {
            name: {"params": entry["params"], "ranges": entry["ranges"]}
            for name, entry in CATALOG.items()
        },
        "strategies": list(STRATEGY_NAMES),
        "lemma_suites": sorted(pairset.SUITES),
    })
    return 0


def cmd_play(args) -> int:
    game = _load_game(args)
    opponent = None
    if args.strategy and args.strategy != "solver":
        opponent = strategy_for(game, args.strategy)
        opponent.reset()
    human = Player.ONE if args.side == "1" else Player.TWO
    if opponent is not None and opponent.role is human:
        print(f"strategy {opponent.name} plays side {opponent.role.name}; "
              f"pick the other side", file=sys.stderr)
        return 2
    pos = Position.initial()
    print(f"playing {game.name}: you are Player {'I' if human is Player.ONE else 'II'}; "
          f"enter a point 0..{game.n - 1}, or q to quit")
    masks = lambda s: sorted(s)
    while True:
        if len(pos.claimed()) == game.n:
            print("board full: draw")
            return 0
        print(f"PI={masks(pos.a)} PII={masks(pos.b)}  {pos.to_move.name} to move")
        if pos.to_move is human:
            line = sys.stdin.readline()
            if not line or line.strip().lower() in ("q", "quit"):
                print("bye")
                return 0
            try:
                x = int(line.strip())
            except ValueError:
                print("enter a point index")
                continue
            try:
                newpos, lost = apply_move(game, pos, x)
            except IllegalMoveError as exc:
                print(f"illegal: {exc}")
                continue
        else:
            if opponent is not None:
                a_mask = sum(1 << p for p in pos.a)
                b_mask = sum(1 << p for p in pos.b)
                x = opponent.choose(a_mask, b_mask)
            else:
                x = _solver_move(game, pos, args.cap)
            print(f"opponent plays {x}")
            newpos, lost = apply_move(game, pos, x)
        if opponent is not None and pos.to_move is human:
            a_mask = sum(1 << p for p in pos.a)
            b_mask = sum(1 << p for p in pos.b)
            opponent.observe(a_mask, b_mask, x)
        if lost:
            loser = pos.to_move
            print(f"PI={masks(newpos.a)} PII={masks(newpos.b)}")
            print(f"Player {'I' if loser is Player.ONE else 'II'} completed a line "
                  f"and loses on move {len(newpos.claimed())}")
            return 0
        pos = newpos


def _solver_move(game: Game, pos: Position, cap: int) -> int:
    """Best move for the side to move, by exact search from this position."""
    from .solver import LOSS, WIN, _iter_bits
    if game.n > cap:
        raise GameError(f"solver opponent needs n <= {cap}")
    full = game.full_mask
    minline = game.lines.min_line_size
    table: dict = {}

    def search(mine: int, theirs: int) -> int:
        key = mine | (theirs << game.n)
        hit = table.get(key)
        if hit is not None:
            return hit
        unclaimed = full & ~(mine | theirs)
        if unclaimed == 0:
            return 0
        best = LOSS
        cnt = bin(mine).count("1") + 1
        for x in _iter_bits(unclaimed):
            nm = mine | (1 << x)
            if cnt >= minline and game.loses_after(nm, x):
                val = LOSS
            else:
                val = -search(theirs, nm)
            if val > best:
                best = val
                if best == WIN:
                    break
        table[key] = best
        return best

    mine = sum(1 << p for p in (pos.a if pos.to_move is Player.ONE else pos.b))
    theirs = sum(1 << p for p in (pos.b if pos.to_move is Player.ONE else pos.a))
    best_x, best_val = None, -2
    cnt = bin(mine).count("1") + 1
    for x in _iter_bits(full & ~(mine | theirs)):
        nm = mine | (1 << x)
        if cnt >= minline and game.loses_after(nm, x):
            val = LOSS
        else:
            val = -search(theirs, nm)
        if val > best_val:
            best_x, best_val = x, val
    return best_x


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="avoidance",
                                 description="transitive avoidance game workbench")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_game_args(p):
        p.add_argument("--game", help="game spec, e.g. pairs(3) or copies(pairs(3),3)")
        p.add_argument("--game-file", help="path to a game JSON document")

    g = sub.add_parser("gen", help="build a game and emit its JSON")
    g.add_argument("construction", help="construction name or full spec string")
    for flag in ("p", "q", "a", "b", "d", "n", "c", "r", "k"):
        g.add_argument(f"--{flag}", type=int)
    g.add_argument("--base", help="base game spec for copies/superset")
    g.add_argument("--out", help="write JSON here instead of stdout")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("check-transitive", help="orbit and line-preservation checks")
    add_game_args(c)
    c.set_defaults(func=cmd_check_transitive)

    s = sub.add_parser("solve", help="exact outcome")
    add_game_args(s)
    s.add_argument("--cap", type=int, default=16)
    s.add_argument("--root-symmetry", action="store_true",
                   help="restrict the opening move to point 0 (transitive games)")
    s.set_defaults(func=cmd_solve)

    sp = sub.add_parser("solve-plus", help="exact outcome of the any-set-per-move variant")
    add_game_args(sp)
    sp.add_argument("--cap", type=int, default=8)
    sp.set_defaults(func=cmd_solve_plus)

    v = sub.add_parser("verify-strategy", help="exhaustive or sampled strategy check")
    add_game_args(v)
    v.add_argument("--strategy", required=True)
    v.add_argument("--goal", choices=("win", "neverlose"), required=True)
    v.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    v.add_argument("--samples", type=int, default=100_000)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify_strategy)

    l = sub.add_parser("verify-lemma", help="exhaustive pair-set suites")
    l.add_argument("suite", choices=sorted(pairset.SUITES) + ["all"])
    l.add_argument("--m", type=int, required=True)
    l.add_argument("--max-free-pairs", type=int,
                   help="restrict key-lemma enumeration (recorded in the report)")
    l.set_defaults(func=cmd_verify_lemma)

    e = sub.add_parser("earliest-loss", help="forced loss time in a first-player win")
    add_game_args(e)
    e.add_argument("--cap", type=int, default=16)
    e.set_defaults(func=cmd_earliest_loss)

    p = sub.add_parser("play", help="interactive demo against a strategy or the solver")
    add_game_args(p)
    p.add_argument("--strategy", default="solver",
                   help="opponent: a strategy name or 'solver'")
    p.add_argument("--side", choices=("1", "2"), default="1", help="your seat")
    p.add_argument("--cap", type=int, default=16)
    p.set_defaults(func=cmd_play)

    cat = sub.add_parser("catalog", help="list constructions, strategies, suites")
    cat.set_defaults(func=cmd_catalog)
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except (GameError, pairset.PairSetError, ValueError, OSError,
            json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
