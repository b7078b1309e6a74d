# Solvers package
from .chain import ChainSolveResult, FeasibleSets, compute_feasible_sets, solve_chain, to_poset_game
from .factory import SolverFactory
from .poset_game import PosetGame, poset_game_value, verify_backward_induction
from .problem import ChainProblem
from .single import SingleSolveResult, best_contraction, membership_M_eps, solve_single, sweep_single

__all__ = [
    'ChainProblem',
    'ChainSolveResult',
    'FeasibleSets',
    'PosetGame',
    'SingleSolveResult',
    'SolverFactory',
    'best_contraction',
    'compute_feasible_sets',
    'membership_M_eps',
    'poset_game_value',
    'solve_chain',
    'solve_single',
    'sweep_single',
    'to_poset_game',
    'verify_backward_induction',
]
