"""Finsler geometry on Lie algebroids.

Thin wrapper over the C++ core: symbolic expressions over base/fiber
coordinates, scenario loading, and the verification commands that compute
sprays, horizontal endomorphisms, distinguished connections, torsions and
curvatures, and check their defining identities at sample points.
"""

from fla._core import (  # noqa: F401
    EvaluationDomainError,
    Expr,
    ExprParseError,
    Report,
    Scenario,
    ScenarioFileError,
    SingularMetricError,
    __version__,
    commands,
    fd_oracle,
    load_scenario,
    parse,
    parse_scenario,
    run,
)

__all__ = [
    "EvaluationDomainError",
    "Expr",
    "ExprParseError",
    "Report",
    "Scenario",
    "ScenarioFileError",
    "SingularMetricError",
    "__version__",
    "commands",
    "fd_oracle",
    "load_scenario",
    "parse",
    "parse_scenario",
    "run",
]
