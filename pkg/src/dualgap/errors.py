"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its stable contract (2 schema, 3 physics domain, 4 numerical).
"""


class DualGapError(Exception):
    exit_code = 1


class SchemaError(DualGapError):
    """Malformed or incomplete design file."""

    exit_code = 2

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class PhysicsError(DualGapError, ValueError):
    """Input outside the physical domain of an operation."""

    exit_code = 3


class NonPositiveGap(PhysicsError):
    pass


class GapClosed(PhysicsError):
    pass


class NonPositiveCapacitance(PhysicsError):
    pass


class DimpleViolation(PhysicsError):
    pass


class PullIn(PhysicsError):
    """No stable equilibrium exists at the requested bias."""


class WrongLayerCount(PhysicsError):
    pass


class SpanMismatch(PhysicsError):
    pass


class NumericalError(DualGapError):
    exit_code = 4


class NoConvergence(NumericalError):
    pass


class SingularSystem(NumericalError):
    """Stiffness matrix lost positive definiteness (buckled beam)."""

    def __init__(self, message, critical_axial_force=None):
        self.critical_axial_force = critical_axial_force
        super().__init__(message)


class TooFewElements(NumericalError, ValueError):
    pass


class MeshMisaligned(NumericalError, ValueError):
    pass
