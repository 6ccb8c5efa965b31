"""Spin network simulator package."""

__version__ = "1.0.0"
__description__ = (
    "Simulator for unitary-designed quantum spin networks in the "
    "single-excitation subspace"
)
