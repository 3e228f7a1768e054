"""monarb: depth-bounded monochromatic domination in edge-colored tournaments.

Library layout:

- :mod:`monarb.core` -- tournament / coloring model and domination primitives
- :mod:`monarb.constructions` -- named colorings, products, partition colorings
- :mod:`monarb.search` -- exact minimization over colorings
- :mod:`monarb.enumeration` -- canonical forms and isomorph-free generation
- :mod:`monarb.experiments` -- seeded Monte Carlo probes
- :mod:`monarb.cli` -- the ``monarb`` command
"""

from .core import (
    Arborescence,
    ColoredTournament,
    Digraph,
    DominationResult,
    KColoring,
    Tournament,
    arborescence_witness,
    directed_girth,
    dominated_set,
    domination_sum,
    edge_count,
    edge_index,
    failure_digraph,
    induced_colored,
    induced_subtournament,
    max_domination,
    min_out_degree,
    mono_reach_set,
)
from .errors import CapacityError, CheckFailure, InvalidInputError

__all__ = [
    "Arborescence",
    "CapacityError",
    "CheckFailure",
    "ColoredTournament",
    "Digraph",
    "DominationResult",
    "InvalidInputError",
    "KColoring",
    "Tournament",
    "arborescence_witness",
    "directed_girth",
    "dominated_set",
    "domination_sum",
    "edge_count",
    "edge_index",
    "failure_digraph",
    "induced_colored",
    "induced_subtournament",
    "max_domination",
    "min_out_degree",
    "mono_reach_set",
]

__version__ = "0.1.0"
