"""Exception hierarchy shared by all thetasurf modules.

``ThetasurfError`` splits into two branches that the CLI maps to exit
codes: ``InputError`` (bad user data, exit 2) and ``NumericalError``
(a computation that could not meet its contract, exit 3).
"""


class ThetasurfError(Exception):
    pass


class InputError(ThetasurfError):
    pass


class NumericalError(ThetasurfError):
    pass


# --- theta kernel ---

class NonPositiveDefinite(InputError):
    """Re(B) is not positive definite."""


class ToleranceTooTight(NumericalError):
    """Requested tolerance needs a lattice truncation beyond the cap."""


# --- tropical ---

class RankDeficient(InputError):
    """Cycle-basis rows are linearly dependent."""


class NotInVoronoiCell(InputError):
    """Some lattice point is strictly closer than the origin."""


# --- symbolic ---

class VariableDivides(InputError):
    """Chosen dehomogenization variable divides the quartic."""


class UnsupportedFieldExtension(NumericalError):
    """Denominator roots need a field beyond Q, Q(i) or one real Q(sqrt d)."""


class NotUnitCommensurable(InputError):
    """Log coefficients of a coordinate are not rational multiples of one unit."""


class EliminationOverflow(NumericalError):
    """Resultant elimination exceeded the degree cap."""


class NotImplicitizable(NumericalError):
    """Eliminant vanished identically (or no certified factor survived)."""


# --- numeric ---

class DegenerateFiber(InputError):
    """Leading y-coefficient vanishes at this x."""


class BranchCollision(NumericalError):
    """Two tracked roots approached within the safety margin."""


class QuadratureStall(NumericalError):
    """Adaptive quadrature error estimate plateaued above tolerance."""


class SingularAlpha(NumericalError):
    """The alpha-period block is not invertible."""


class ParabolicPoint(NumericalError):
    """Second fundamental form is degenerate at this point."""


# --- tetrahedral families ---

class DegenerateConfiguration(InputError):
    """The linear system for the line pair is singular."""


# --- export ---

class MemoryCap(InputError):
    """Requested grid exceeds the memory cap."""


class EmptySurface(NumericalError):
    """Grid has no sign change at the requested level."""
