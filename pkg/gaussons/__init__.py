"""
gaussons: Gaussons of the logarithmic Schrodinger equation with a harmonic potential

    i u_t + 1/2 Lap u = V(x) u + lam u ln|u|^2,   V(x) = -omega^2 |x|^2 / 2

Key Features:
- Closed-form Gaussons, masses and energies in every regime
- Gaussian-ansatz dynamics: the tau ODE, its first integral and phase portraits
- Spectral Strang split-step evolution with a conservation auditor
- Exact invariances (size gauge, Galilean boost, translation, tensorization)
  and commutation checks against the solver
- Nehari functional and the Gaussian witnesses of vanishing mass
- Reproducible experiment commands writing CSV, summaries and plots
"""

__version__ = "0.1.0"

# Experiment orchestration
from gaussons.experiments import ExperimentRunner, COMMANDS
from gaussons.config import load_config

# Core data models
from gaussons.models.data_models import (
    PhysParams,
    PotentialSign,
    Regime,
    Branch,
    Grid,
    WaveField,
    GaussonSpec,
    TauState,
    GaussianAnsatz,
    TrajectoryKind,
    TrajectoryClass,
    SolverConfig,
    ExperimentConfig,
    ExperimentReport,
)

# Closed forms and dynamics
from gaussons.physics.gaussons import (
    gausson_k,
    make_gausson,
    gausson_field,
    gausson_mass,
    gausson_energy,
)
from gaussons.physics.tau_dynamics import (
    integrate_tau,
    classify_trajectory,
    phase_portrait,
)
from gaussons.physics.nehari import nehari, delta_nu_scan

# Solver, transforms and checks
from gaussons.impl.split_step import StrangSplittingSolver
from gaussons.impl.conservation_auditor import ConservationAuditor
from gaussons.impl.transforms import (
    SizeTransform,
    GalileanTransform,
    TranslationTransform,
)
from gaussons.simulation.invariance_engine import InvarianceContext

__all__ = [
    # Orchestration
    "ExperimentRunner",
    "COMMANDS",
    "load_config",
    # Data Models
    "PhysParams",
    "PotentialSign",
    "Regime",
    "Branch",
    "Grid",
    "WaveField",
    "GaussonSpec",
    "TauState",
    "GaussianAnsatz",
    "TrajectoryKind",
    "TrajectoryClass",
    "SolverConfig",
    "ExperimentConfig",
    "ExperimentReport",
    # Physics
    "gausson_k",
    "make_gausson",
    "gausson_field",
    "gausson_mass",
    "gausson_energy",
    "integrate_tau",
    "classify_trajectory",
    "phase_portrait",
    "nehari",
    "delta_nu_scan",
    # Solver and invariances
    "StrangSplittingSolver",
    "ConservationAuditor",
    "SizeTransform",
    "GalileanTransform",
    "TranslationTransform",
    "InvarianceContext",
]
