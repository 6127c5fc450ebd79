"""Toolkit for CLTTF Artin and Coxeter groups.

Decides isomorphism of the groups from their labelled defining graphs,
synthesizes generating sets of their automorphism groups, and checks the
supporting structural facts (dihedral normal forms, link girth,
minimal-circuit and chunk rigidity) on finite desk-scale instances.
"""

__version__ = "0.1.0"

from .defgraph import (  # noqa: F401
    ClttfError,
    DomainError,
    GraphParseError,
    LabelledGraph,
    graph_from_edges,
    load_graph,
    parse_graph,
    validate,
)
