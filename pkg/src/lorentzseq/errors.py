"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so each class carries the code it
should produce.
"""


class LorentzError(Exception):
    exit_code = 1


class InvalidArgument(LorentzError, ValueError):
    exit_code = 2


class UnsupportedPair(LorentzError, ValueError):
    """The requested space pair is outside what the catalog handles."""

    exit_code = 2


class UnsupportedStudy(LorentzError, ValueError):
    exit_code = 2


class HypothesisViolation(LorentzError):
    """Inputs fall outside the hypotheses of the construction being run."""

    exit_code = 3


class Infeasible(HypothesisViolation):
    exit_code = 3


class DivergentSeries(HypothesisViolation):
    exit_code = 3


class TruncationTooSmall(LorentzError):
    """Not enough admissible indices below the truncation length.

    This says the truncation must grow; it never refutes a theorem.
    """

    exit_code = 3


class CoverRefuted(LorentzError):
    """A sampled point lies outside every ball of a proposed cover."""

    exit_code = 3

    def __init__(self, message, sample=None, distance=None, radius=None):
        super().__init__(message)
        self.sample = sample
        self.distance = distance
        self.radius = radius


class InvariantBreach(LorentzError, AssertionError):
    exit_code = 4
