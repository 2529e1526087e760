"""Ground-state energy table auditing and candidate generation.

The library has three legs: a monotonicity audit that certifies non-minimal
entries in tables of putative N-body ground-state energies and derives
sharper upper bounds from the remaining rows; a multistart Riemannian
projected-gradient optimizer that produces such tables for log, power-law,
Coulomb, and Lennard-Jones pair interactions on the unit sphere, an embedded
torus, or free 3-space; and large-N asymptotic models to compare tables
against.  The ``gsaudit`` command line exposes all three.
"""

from .geometry import (
    Configuration,
    DomainSpec,
    StepTooLargeError,
    chordal_distance,
    embed,
    free3,
    random_configuration,
    retract,
    sphere,
    tangent_project,
    torus,
)
from .potentials import (
    CoincidentPointsError,
    PotentialSpec,
    coulomb,
    energy_gradient,
    lennard_jones,
    log_coulomb,
    pair_energy,
    riesz,
    total_energy,
)
from .audit import (
    AuditReport,
    EnergyTable,
    ImprovedBound,
    TableMetadata,
    Violation,
    brute_force_monotonicity_check,
    improved_upper_bound,
    monotonicity_audit,
    pair_specific,
    table_digest,
)
from .optimizer import OptimizerSettings, RunResult, build_table, local_minimize, multistart
from .asymptotics import (
    AsymptoticModel,
    compute_b_coefficient,
    log_sphere_model,
    model_energy,
    pair_specific_model,
    residuals,
    thomson_sphere_model,
    zeta_alternating,
)
from .cli import parse_table, write_table

__all__ = [
    "AsymptoticModel",
    "AuditReport",
    "CoincidentPointsError",
    "Configuration",
    "DomainSpec",
    "EnergyTable",
    "ImprovedBound",
    "OptimizerSettings",
    "PotentialSpec",
    "RunResult",
    "StepTooLargeError",
    "TableMetadata",
    "Violation",
    "brute_force_monotonicity_check",
    "build_table",
    "chordal_distance",
    "compute_b_coefficient",
    "coulomb",
    "embed",
    "energy_gradient",
    "free3",
    "improved_upper_bound",
    "lennard_jones",
    "local_minimize",
    "log_coulomb",
    "log_sphere_model",
    "model_energy",
    "monotonicity_audit",
    "multistart",
    "pair_energy",
    "pair_specific",
    "pair_specific_model",
    "parse_table",
    "random_configuration",
    "residuals",
    "retract",
    "riesz",
    "sphere",
    "table_digest",
    "tangent_project",
    "thomson_sphere_model",
    "torus",
    "total_energy",
    "write_table",
    "zeta_alternating",
]

__version__ = "0.1.0"


def fixture_path(name: str):
    """Path to a bundled fixture table (see gsaudit/fixtures/)."""
    from importlib.resources import files

    return files("gsaudit.fixtures").joinpath(name)
