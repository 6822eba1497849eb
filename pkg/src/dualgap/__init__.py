"""Design analysis for electrostatic dual-gap MEMS tunable capacitors."""

__version__ = "0.1.0"
