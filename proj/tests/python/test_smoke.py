import json
import math
import os
import subprocess

import pytest

import ewgame


def test_negneg_converges_to_theta2_pair():
    game = ewgame.SymmetricGame.from_epsilons(-2.0, -1.0)
    init = ewgame.DynState.from_probabilities(0.6, 0.3)
    pred = ewgame.classify(game, init, 0.5)
    assert pred["row"] == "r1"
    out = ewgame.simulate(game, init, 0.5)
    assert out["verdict"] == "PureNE(theta2,theta2)"
    assert out["agreement"] == "Match"


def test_step_matches_hand_computation():
    game = ewgame.SymmetricGame.from_epsilons(-1.0, 3.0)
    nxt = ewgame.ew_step(game, ewgame.DynState(0.0, 0.0), 1.0)
    # Delta = 0.5 * (-1) + 0.5 * 3 = 1 for both players.
    assert nxt.u1 == pytest.approx(1.0, abs=1e-15)
    assert nxt.p11 == pytest.approx(math.e / (1.0 + math.e), abs=1e-15)


def test_mixed_equilibrium_and_ce():
    game = ewgame.SymmetricGame.from_epsilons(-1.0, 3.0)
    assert ewgame.symmetric_mixed_equilibrium(game) == pytest.approx((0.75, 0.25))
    closed, brute = ewgame.ce_membership(game, 0.0, 0.5, 0.5, 0.0)
    assert closed and brute


def test_oscillation_construction_alternates():
    game, init, eta = ewgame.construct_oscillation(1.0, "identical")
    s1 = ewgame.ew_step(game, init, eta)
    s2 = ewgame.ew_step(game, s1, eta)
    assert abs(s2.u1 - init.u1) < 1e-9
    assert abs(s1.u1 - init.u1) > 0.1


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        ewgame.SymmetricGame(float("nan"), 0.0, 0.0, 0.0)
    with pytest.raises(ValueError):
        ewgame.classify(ewgame.SymmetricGame(1.0, 1.0, 2.0, 2.0), ewgame.DynState(0.0, 0.0), 0.5)


def test_bank_reduction_sign_regime():
    game = ewgame.bank_reduced_game(0.3, 0.1, 0.4, 0.8)
    assert game.eps1 > 0 and game.eps2 > 0


@pytest.mark.skipif("EWGAME_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_classify_round_trip():
    proc = subprocess.run(
        [os.environ["EWGAME_CLI"], "classify", "--game", "0,2,0,1", "--init", "0.6,0.3", "--eta", "0.5"],
        capture_output=True,
        text=True,
        check=True,
    )
    out = json.loads(proc.stdout)
    assert out["row"] == "r1"
    assert out["expected_pair"] == "(theta2,theta2)"


@pytest.mark.skipif("EWGAME_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_usage_error_exit_code():
    proc = subprocess.run([os.environ["EWGAME_CLI"], "classify", "--game", "1,2"], capture_output=True, text=True)
    assert proc.returncode == 2
