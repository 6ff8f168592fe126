"""Exception types shared across the package."""


class YMBVError(Exception):
    """Base class for all package errors."""


class Inconsistent(YMBVError):
    """An affine system reduced to 0 = c with c != 0."""


class NotFound(YMBVError):
    """The candidate search of ``find_instance`` found no assignment."""


class ChecksumMismatch(YMBVError):
    """A shipped fixture does not match its recorded checksum."""


class ZeroMomentum(YMBVError):
    """An operation that needs k != 0 received k = 0."""


class OnShellPole(YMBVError):
    """The propagator was applied at k^2 = 0."""


class DegenerateKinematics(OnShellPole):
    """An internal line of a tree is on shell."""


class NonUnique(YMBVError):
    """A solve that should be unique left free parameters."""

    def __init__(self, msg, free=()):
        super().__init__(msg)
        self.free = list(free)


class LetterBudgetExceeded(YMBVError):
    """A cobar element exceeds the configured letter budget."""


class NotADerivation(YMBVError):
    """A commutator failed the derivation spot-check."""


class DecorationCapExceeded(YMBVError):
    """A momentum decoration exceeded the configured total degree."""
