"""Distributed Nash equilibrium seeking with preconditioned proximal-point steps.

Submodules
----------
game_model      games, cost oracles, feasible sets, brute-force NE oracle
network         graphs and doubly stochastic weights
operators       estimate-space operators and residuals
inner_solver    local proximal best responses
ppp_solver      the distributed iteration and a pseudogradient baseline
monotonicity    sampled checks of the monotonicity conditions C1-C10
"""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from ppnash.game_model import Game, GameError, brute_force_ne, quadratic_game, random_quadratic_game
from ppnash.example_games import make_example_game
from ppnash.network import Network, NetworkError, metropolis_weights
from ppnash.ppp_solver import SolverConfig, ppp_step, run
from ppnash.kernels import BACKEND

__all__ = [
    "BACKEND", "Game", "GameError", "Network", "NetworkError", "SolverConfig", "__version__",
    "brute_force_ne", "make_example_game", "metropolis_weights", "ppp_step", "quadratic_game",
    "random_quadratic_game", "run",
]
