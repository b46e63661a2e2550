"""Exception types shared across the package."""


class DiracTomoError(Exception):
    """Base class for all library errors."""


class NonUnitary(DiracTomoError):
    """A matrix required to be unitary failed the unitarity check."""


class UnsupportedRep(DiracTomoError):
    """Operation only defined for the built-in representations."""


class NonRealCovariant(DiracTomoError):
    """A bilinear covariant came out with a large imaginary part."""


class DegenerateAnchor(DiracTomoError):
    """Anchor spinor is Dirac-orthogonal to the state being reconstructed."""


class BadAxis(DiracTomoError):
    """Rotation/boost axis is not a unit vector."""


class NotConnected(DiracTomoError):
    """Matrix is not in the restricted Lorentz group."""


class Singular(DiracTomoError):
    """Matrix expected to be invertible is singular."""


class GridMismatch(DiracTomoError):
    """Direction samples do not cover the quadrature scheme's nodes."""


class MissingFrame(DiracTomoError):
    """A protocol frame is absent from the dataset."""


class InconsistentInput(DiracTomoError):
    """Input covariants violate the Fierz structure beyond tolerance."""


class NoValidCandidate(DiracTomoError):
    """No reconstruction candidate reproduces the measured marginals."""


class NegativeWeight(DiracTomoError):
    """A marginal probability is negative beyond tolerance."""
