"""Ground states, cat-state analytics and thermal crossover for a two-mode bosonic Josephson junction."""

from bjjcat.errors import ConvergenceError, ValidityError
from bjjcat.model import (
    FockAmplitudes,
    ModelParams,
    TridiagonalOperator,
    build_hamiltonian,
    energy_expectation,
    fidelity_noon,
    imbalance_distribution,
)
from bjjcat.solver import EigenResult, dense_oracle, doublet_splitting, ground_state, spectrum

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "EigenResult",
    "FockAmplitudes",
    "ModelParams",
    "TridiagonalOperator",
    "ValidityError",
    "build_hamiltonian",
    "dense_oracle",
    "doublet_splitting",
    "energy_expectation",
    "fidelity_noon",
    "ground_state",
    "imbalance_distribution",
    "spectrum",
]
