"""
Homotopy engine package
"""

from .words import Word, invert, free_reduce, cyclic_reduce, cyclic_canonical
from .smith import smith_normal_form, invariant_factors, left_kernel, lattice_contains, lattice_equal
from .presentation import (
    Presentation,
    SimplifiedPresentation,
    rips_adjacency,
    rips_presentation,
    simplify,
)
from .abelian import AbelianGroup, H1Class
from .coset_enumeration import CosetTable, subgroup_index
from .homotopy import (
    Verdict,
    RipsGroup,
    HomotopyEngine,
    IndexLoopSearch,
    build_rips_group,
    h1_class,
    loop_indices,
    snap_indices,
    theta,
)

__all__ = [
    'Word', 'invert', 'free_reduce', 'cyclic_reduce', 'cyclic_canonical',
    'smith_normal_form', 'invariant_factors', 'left_kernel', 'lattice_contains', 'lattice_equal',
    'Presentation', 'SimplifiedPresentation', 'rips_adjacency', 'rips_presentation', 'simplify',
    'AbelianGroup', 'H1Class', 'CosetTable', 'subgroup_index',
    'Verdict', 'RipsGroup', 'HomotopyEngine', 'IndexLoopSearch', 'build_rips_group',
    'h1_class', 'loop_indices', 'snap_indices', 'theta',
]
