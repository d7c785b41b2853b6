"""Finite relational structures, quantifier-free definitions, and
locally expressible graph classes decided by expansion search."""

from .classes import (LocalClass, enumerate_members, everything, intersect,
                      is_local_up_to, minimal_bounds_relative,
                      preimage_bounds, union_classes)
from .errors import (InputError, LogicInvariantError, ResourceLimitError,
                     SearchBudgetExceeded)
from .expressions import (Certificate, LocalExpression, count_certificates,
                          decide, decide_with_stats, disjoint_union,
                          identity_expression, pullback, render_snp,
                          subgraph_closure, transform, validate, verify)
from .logic import (FALSE, TRUE, And, Atom, Bottom, Eq, Formula,
                    FunctorTable, Not, Or, QfDefinition, Top,
                    UniversalSentence, apply_definition,
                    characteristic_formula, compose, conj, disj, evaluate,
                    formula_arity, identity_definition,
                    is_logically_injective, is_satisfiable,
                    logically_equivalent, reduct, synthesize_definition,
                    validate_formula, weak_extension)
from .structures import (DIGRAPH_SIGNATURE, GRAPH_SIGNATURE, Embedding,
                         Signature, Structure, are_isomorphic,
                         canonical_form, canonical_key, complete_graph,
                         cycle_graph, digraph, embeds, empty_graph,
                         enumerate_embeddings, enumerate_structures, graph,
                         graph_edges, induced_substructure, is_embedding,
                         is_free, path_graph)

from .catalog import (builtin, catalog_names, csp_expression,
                      m_partition_expression)

__all__ = [name for name in dir() if not name.startswith("_")]
