"""
Spectrum package
"""

from .triads import (
    Triad,
    TriadVerdict,
    triad_from_points,
    triads_at,
    near_equilateral,
    is_essential,
    classify_triad,
    equivalent_triads,
)
from .critical import SpectrumEntry, SpectrumReport, critical_spectrum, covering_spectrum

__all__ = [
    'Triad', 'TriadVerdict', 'triad_from_points', 'triads_at', 'near_equilateral',
    'is_essential', 'classify_triad', 'equivalent_triads',
    'SpectrumEntry', 'SpectrumReport', 'critical_spectrum', 'covering_spectrum',
]
