"""Exception hierarchy shared by all equiflow modules.

Two failure families matter to callers: validation failures (bad scenes,
bad configs) and numerical-budget failures (not enough precision bits or
quadrature refinement budget). The CLI maps the former to exit code 1 and
the latter to exit code 2.
"""

from __future__ import annotations


class EquiflowError(Exception):
    """Base class for all equiflow errors."""


class ValidationError(EquiflowError):
    """Invalid user input: scene files, configs, malformed arguments."""


class SceneError(ValidationError):
    """A scene description failed schema or geometric validation."""


class ConfigError(ValidationError):
    """An experiment configuration is inconsistent or out of range."""


class BudgetError(EquiflowError):
    """Base class for numerical-budget exhaustion."""


class PrecisionExhausted(BudgetError):
    """The fixed-point bit budget cannot support the requested computation.

    Signals that the caller must supply more fractional bits (see the
    EQUIFLOW_PRECISION_BITS environment variable).
    """


class NonconvergentQuadrature(BudgetError):
    """Adaptive quadrature exhausted its refinement budget above tolerance."""


class InsufficientConvergents(EquiflowError):
    """A slope does not store enough convergents for the requested operation."""


class UnresolvedTangency(EquiflowError):
    """Two primitive boundaries overlap along a curve; the boundary of the
    boolean expression cannot be split into finitely many pieces."""


class UnsupportedProfile(EquiflowError):
    """A boundary piece admits no analytic degeneracy classification."""


class DegenerateDirectionWarning(UserWarning):
    """The flow direction matches a degenerate boundary direction of the
    target set, so bounded-error regimes cannot be expected."""
