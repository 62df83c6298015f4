"""Exception types raised by the fractalspline package."""


class FractalSplineError(Exception):
    """Base class for all library errors."""


# ---- data validation ---------------------------------------------------------

class NonIncreasingKnots(FractalSplineError):
    """Knot abscissae are not strictly increasing."""


class TooFewPoints(FractalSplineError):
    """Fewer than three interpolation points were supplied."""


class NonFiniteValue(FractalSplineError):
    """An abscissa, ordinate, or derivative is NaN or infinite."""


class DerivativesAlreadyPresent(FractalSplineError):
    """Derivative estimation requested for data that already carries slopes."""


class MissingDerivatives(FractalSplineError):
    """Operation needs knot derivatives but the data set has none."""


# ---- model construction and evaluation ---------------------------------------

class ContractivityViolation(FractalSplineError):
    """A vertical scale exceeds its per-interval contraction cap."""


class NonPositiveU(FractalSplineError):
    """A primary shape parameter is zero or negative."""


class NegativeV(FractalSplineError):
    """A tension shape parameter is negative."""


class OutOfDomain(FractalSplineError):
    """Evaluation abscissa lies outside the interpolation domain."""


class DepthTooLarge(FractalSplineError):
    """Requested sampling depth would exceed the configured point budget."""


# ---- constraint machinery -----------------------------------------------------

class NonPositiveData(FractalSplineError):
    """Positivity bounds requested for data with a non-positive ordinate."""


class AlphaOnBoundary(FractalSplineError):
    """A scale sits on (or beyond) the edge of its admissible range, so a
    threshold denominator vanishes."""


class DataOutsideRectangle(FractalSplineError):
    """A data point lies outside the requested containment rectangle."""


class DataNotAboveLine(FractalSplineError):
    """A data point does not lie strictly above the requested line."""


class DataNotBelowLine(FractalSplineError):
    """A data point does not lie strictly below the requested line."""


# ---- scenarios and file I/O ----------------------------------------------------

class UnknownScenario(FractalSplineError):
    """No bundled scenario with the requested name."""


class ExpectationFailed(FractalSplineError):
    """A scenario's verified margin disagrees with its recorded outcome."""


class DataFileError(FractalSplineError):
    """A data or model file could not be parsed."""
