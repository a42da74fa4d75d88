"""Discrete-time quantum walks of one and two photons on a disordered coupler mesh."""

from .calibration import (SBendGeometry, mz_output, path_lengthening, phase_from_deformation,
                          phase_from_mz_measurement, sbend_curve)
from .disorder import DisorderSpec, extend_phase_map, generate_phase_map
from .ensemble import EnsembleSummary, run_ensemble
from .errors import ConfigError, DomainError, MeshWalkError, NumericalError, ResourceError
from .lattice import (PhaseMap, WalkConfig, WalkUnitary, build_step_layer, build_walk_unitary,
                      coupler_matrix, evolve_single)
from .metrics import (ScalingFit, marginal, mean_position_variance, relative_distance_distribution,
                      scaling_fit, similarity, variance_R)
from .two_particle import (ExchangeSymmetry, JointDistribution, joint_distribution,
                           oracle_joint_distribution, sweep_exchange_phase)

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "DisorderSpec", "DomainError", "EnsembleSummary", "ExchangeSymmetry",
    "JointDistribution", "MeshWalkError", "NumericalError", "PhaseMap", "ResourceError",
    "SBendGeometry", "ScalingFit", "WalkConfig", "WalkUnitary", "build_step_layer",
    "build_walk_unitary", "coupler_matrix", "evolve_single", "extend_phase_map",
    "generate_phase_map", "joint_distribution", "marginal", "mean_position_variance",
    "mz_output", "oracle_joint_distribution", "path_lengthening", "phase_from_deformation",
    "phase_from_mz_measurement", "relative_distance_distribution", "run_ensemble",
    "sbend_curve", "scaling_fit", "similarity", "sweep_exchange_phase", "variance_R",
]
