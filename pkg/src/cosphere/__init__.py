"""Numerical contact geometry on cosphere bundles.

Builds cosphere bundles of embedded manifolds, lifts Lie group actions to
them, evaluates contact momentum maps, and verifies the reduction
correspondence between the quotient construction downstairs and the
cosphere bundle of the quotient manifold.
"""

from .manifolds import Euclidean, Sphere, Torus, ProductManifold
from .forms import OneFormField, d_eval, d_frame, contact_volume, reeb_vector
from .bundles import (
    CotangentPoint,
    CospherePoint,
    CotangentBundle,
    CosphereBundle,
    Section,
    section_factor,
    liouville_form,
    induced_contact_form,
)
from .scenarios import ReductionScenario, make_scenario, scenario_names
from .reduction import run_scenario_suite, VerificationReport
from .cli import RunConfig, run_verify

__version__ = "0.1.0"

__all__ = [
    "Euclidean",
    "Sphere",
    "Torus",
    "ProductManifold",
    "OneFormField",
    "d_eval",
    "d_frame",
    "contact_volume",
    "reeb_vector",
    "CotangentPoint",
    "CospherePoint",
    "CotangentBundle",
    "CosphereBundle",
    "Section",
    "section_factor",
    "liouville_form",
    "induced_contact_form",
    "ReductionScenario",
    "make_scenario",
    "scenario_names",
    "run_scenario_suite",
    "VerificationReport",
    "RunConfig",
    "run_verify",
]
