import pytest

from avoidance.core import (ExplicitLines, Game, GameError, Permutation,
                            Player, SearchCapExceeded, Winner)
from avoidance import constructions as C
from avoidance.solver import (Goal, earliest_forced_loss, solve, solve_plus,
                              verify_strategy)
from avoidance.strategies import LowestFreeStrategy, pairs_strategy

from oracles import ref_solve, ref_solve_plus

VAL = {Winner.PI_WIN: 1, Winner.DRAW: 0, Winner.PII_WIN: -1}


@pytest.mark.parametrize("spec,winner", [
    ("torus(3,1)", Winner.DRAW),
    ("pairs(3)", Winner.PI_WIN),
    ("cycle(4)", Winner.PII_WIN),
    ("odd_composite(3,3)", Winner.PI_WIN),
    ("matching(2)", Winner.DRAW),
])
def test_solve_known_outcomes(spec, winner):
    g = C.parse_game_spec(spec)
    r = solve(g)
    assert r.outcome.winner is winner


@pytest.mark.parametrize("spec", ["cycle(4)", "cycle(5)", "complete(4)",
                                  "torus(3,1)", "pairs(3)", "matching(2)",
                                  "torus(2,2)"])
def test_solve_matches_plain_recursion(spec):
    g = C.parse_game_spec(spec)
    assert VAL[solve(g).outcome.winner] == ref_solve(g)


def test_solve_cap_refusal():
    with pytest.raises(SearchCapExceeded):
        solve(C.parse_game_spec("copies(pairs(3),3)"))
    solve(C.pairs_game(3), cap=6)


def test_solve_pv_replays_to_outcome():
    for spec in ["pairs(3)", "cycle(4)", "torus(3,2)", "odd_composite(3,3)"]:
        g = C.parse_game_spec(spec)
        r = solve(g)
        a, b = set(), set()
        loss = None
        for i, x in enumerate(r.principal_variation):
            (a if i % 2 == 0 else b).add(x)
            side = a if i % 2 == 0 else b
            if g.contains_line(side):
                loss = i + 1
                break
        assert loss == r.outcome.loss_time


def test_solve_table_on_off_and_order_invariance():
    for spec in ["pairs(3)", "cycle(5)", "torus(3,2)", "odd_composite(3,3)",
                 "complete(4)", "matching(2)"]:
        g = C.parse_game_spec(spec)
        base = solve(g).outcome.winner
        assert solve(g, use_table=False).outcome.winner is base
        assert solve(g, move_order="descending").outcome.winner is base


def test_solve_generator_relabelling_invariance():
    import random as _random
    rng = _random.Random(13)
    for spec in ["pairs(3)", "torus(3,2)", "cycle(6)"]:
        g = C.parse_game_spec(spec)
        base = solve(g).outcome.winner
        for _ in range(3):
            perm = rng.choice(g.generators)
            for _ in range(rng.randrange(1, 4)):
                perm = perm.compose(rng.choice(g.generators))
            relabelled = Game(g.n, ExplicitLines(
                g.n, [perm.apply_set(l) for l in g.lines.lines]), (), "relabel")
            assert solve(relabelled).outcome.winner is base


def test_solve_root_symmetry_agrees():
    for spec in ["pairs(3)", "torus(3,2)", "cycle(6)"]:
        g = C.parse_game_spec(spec)
        assert solve(g, root_symmetry=True).outcome.winner is solve(g).outcome.winner
    nontransitive = Game(4, ExplicitLines(4, [[0, 1]]), (), "lopsided")
    with pytest.raises(GameError):
        solve(nontransitive, root_symmetry=True)


def test_earliest_forced_loss_values():
    assert earliest_forced_loss(C.pairs_game(3)) == 6
    assert earliest_forced_loss(C.odd_composite(3, 3)) == 8
    with pytest.raises(GameError):
        earliest_forced_loss(C.torus(3, 1))


def test_earliest_forced_loss_affine_11():
    # lines have size 5 and the board has 11 points, so the second player's
    # fifth move (move 10) is both the earliest possible and his last
    assert earliest_forced_loss(C.affine_game(11)) == 10


def test_solver_agrees_with_bin_strategy_at_n12():
    assert solve(C.even_general(2, 3), cap=16).outcome.winner is Winner.PI_WIN


def test_solve_plus_examples():
    tri = Game(3, ExplicitLines(3, [[0, 1, 2]]), (Permutation.cycle(3),), "tri3")
    assert solve_plus(tri).outcome.winner is Winner.DRAW
    assert VAL[solve_plus(tri).outcome.winner] == ref_solve_plus(tri)
    r = solve_plus(C.pairs_game(3))
    assert r.outcome.winner is not Winner.PI_WIN
    assert r.outcome.winner is Winner.PII_WIN   # exact value, frozen
    for k in (4, 5):
        g = C.cycle_game(k)
        assert VAL[solve_plus(g).outcome.winner] == ref_solve_plus(g)


def test_solve_plus_pv_replays():
    g = C.cycle_game(4)
    r = solve_plus(g)
    a, b = set(), set()
    loss = None
    for i, mv in enumerate(r.principal_variation):
        side = a if i % 2 == 0 else b
        side.update(mv)
        if g.contains_line(side):
            loss = i + 1
            break
    assert loss == r.outcome.loss_time


def test_solve_plus_cap_refusal():
    with pytest.raises(SearchCapExceeded):
        solve_plus(C.torus(3, 2))


def test_verify_strategy_counterexample_replays():
    g = C.pairs_game(3)
    r = verify_strategy(g, LowestFreeStrategy(6), Player.ONE, Goal.WIN)
    assert not r.passed
    a, b = set(), set()
    history = r.counterexample
    broke = None
    for i, x in enumerate(history):
        side = a if i % 2 == 0 else b
        side.add(x)
        if g.contains_line(side):
            broke = ("loss", i % 2)
            break
    # the naive first player completed a line himself, or survived to a draw
    assert broke == ("loss", 0) or (broke is None and len(a) + len(b) <= 6)


def test_verify_strategy_role_mismatch():
    with pytest.raises(GameError):
        verify_strategy(C.pairs_game(3), pairs_strategy(3), Player.TWO, Goal.WIN)


def test_verify_strategy_sampled_reproducible():
    g = C.pairs_game(3)
    r1 = verify_strategy(g, pairs_strategy(3), Player.ONE, Goal.WIN,
                         mode="sampled", samples=200, seed=42)
    r2 = verify_strategy(g, pairs_strategy(3), Player.ONE, Goal.WIN,
                         mode="sampled", samples=200, seed=42)
    assert r1.passed and r2.passed
    assert r1.to_json() == r2.to_json()
    assert r1.seed == 42 and r1.samples == 200


def test_win_pass_implies_solver_pi_win():
    for spec, strat in [("pairs(3)", pairs_strategy(3))]:
        g = C.parse_game_spec(spec)
        r = verify_strategy(g, strat, Player.ONE, Goal.WIN)
        assert r.passed
        assert solve(g).outcome.winner is Winner.PI_WIN
