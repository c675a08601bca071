"""M-best MAP inference for pairwise discrete MRFs via spanning-tree
inequality Lagrangian relaxation."""
from .exceptions import BudgetExhaustedError, InvalidInputError, InvalidStateError, ModelFormatError
from .model import FractionalPrimal, MrfModel, energy, load_model, save_model
from .solver import SolveResult, SolverConfig, solve_mbest
from .treebp import tree_map

__all__ = [
    "BudgetExhaustedError", "FractionalPrimal", "InvalidInputError", "InvalidStateError",
    "ModelFormatError", "MrfModel", "SolveResult", "SolverConfig", "energy", "load_model",
    "save_model", "solve_mbest", "tree_map",
]
