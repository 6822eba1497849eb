"""Shared constants, materials, geometry and unit conversions.

All quantities are SI internally. The ``um``/``pF``/``GPa`` helpers are only
meant to be used at the I/O boundary (design files, CSV, CLI).
"""
from dataclasses import dataclass

# Pinned to the four-digit value used in the device's hand calculations
# rather than CODATA 8.8541878128e-12.
VACUUM_PERMITTIVITY = 8.854e-12

UM = 1e-6
PF = 1e-12
GPA = 1e9
MPA = 1e6


def um(value):
    return value * UM


def to_um(value):
    return value / UM


def to_pF(value):
    return value / PF


@dataclass(frozen=True)
class PhysicalConstants:
    vacuum_permittivity: float = VACUUM_PERMITTIVITY

    def __post_init__(self):
        if not self.vacuum_permittivity > 0:
            raise ValueError("vacuum_permittivity must be positive")


@dataclass(frozen=True)
class Material:
    """Effective structural material of the (composite) membrane.

    ``residual_stress`` is the mid-plane stress (negative = compressive).
    ``stress_gradient`` is the through-thickness gradient d(sigma)/dz in Pa/m,
    positive when the top fiber is more tensile than the bottom one.
    """

    name: str
    youngs_modulus: float
    residual_stress: float = 0.0
    stress_gradient: float = 0.0
    relative_permittivity: float = 1.0

    def __post_init__(self):
        if not self.youngs_modulus > 0:
            raise ValueError(f"youngs_modulus must be > 0, got {self.youngs_modulus}")
        if not self.relative_permittivity >= 1:
            raise ValueError("relative_permittivity must be >= 1")


@dataclass(frozen=True)
class BeamGeometry:
    length: float
    width: float
    thickness: float

    def __post_init__(self):
        for name in ("length", "width", "thickness"):
            if not getattr(self, name) > 0:
                raise ValueError(f"beam {name} must be > 0")

    @property
    def second_moment(self):
        return second_moment(self)

    @property
    def cross_section(self):
        return self.width * self.thickness


@dataclass(frozen=True)
class PlateRegion:
    """Parallel-plate region: overlap length and width, and its air gap."""

    length: float
    width: float
    gap: float

    def __post_init__(self):
        for name in ("length", "width", "gap"):
            if not getattr(self, name) > 0:
                raise ValueError(f"region {name} must be > 0")

    @property
    def area(self):
        return region_area(self)


def region_area(region):
    return region.length * region.width


def second_moment(beam):
    """Second moment of area of the rectangular section, w*t^3/12."""
    return beam.width * beam.thickness ** 3 / 12.0


# Reference material for the SiO2/Au membrane when only a stiffness order of
# magnitude is needed; the device's own spring constant is set directly.
SILICON_DIOXIDE = Material(name="SiO2", youngs_modulus=70e9, relative_permittivity=3.9)
