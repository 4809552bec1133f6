"""Exception types raised by equirot."""


class EquirotError(ValueError):
    """Base class for all equirot errors."""


class NotSpecialUnitary(EquirotError):
    """A matrix or quaternion fails the SU(d) unitarity/determinant check."""


class BadSchmidtPair(EquirotError):
    """Schmidt coefficients violate 0 <= l1 <= l0, l0^2 + l1^2 = 1."""


class DimensionMismatch(EquirotError):
    pass


class AxisUndefined(EquirotError):
    """A rotation axis was requested from a zero vector."""


class NotOnCircle(EquirotError):
    pass


class NotOrthonormal(EquirotError):
    pass


class BadProbability(EquirotError):
    pass


class AmountOutOfRange(EquirotError):
    pass


class NotUnitalMixture(EquirotError):
    """Kraus operators cannot be written as a mixture of unitaries."""


class ConfigError(EquirotError):
    """Invalid campaign configuration (unknown command, malformed operator, bad ranges)."""


class NotNormalized(EquirotError):
    pass
