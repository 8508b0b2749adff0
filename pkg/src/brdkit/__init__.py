"""Executable finite shadows of big Ramsey degree machinery for scattered chains."""
from __future__ import annotations

__version__ = "0.1.0"

from . import branch_calculus, chain_terms, monomorphic, piggyback, pq_category, ramsey_harness
from .branch_calculus import EmbType, IndexSet, SigmaEmbedding, enumerate_types, g_hat, tp, type_stabilization
from .chain_terms import (
    OMEGA_OMEGA,
    Term,
    branches,
    cnf_spectrum_finite,
    format_term,
    hausdorff_rank,
    parse_chain_term,
    parse_cnf,
    truncate,
)
from .errors import BrdError
from .monomorphic import FiniteStructure, Partition, minimal_mono_decomposition
from .pq_category import EmbeddingGerm, PartialMapQ, phi_decode, psi_encode
from .piggyback import FiniteCategory, Witness, verify_witness
from .ramsey_harness import ArrowQuery, DegreeBound, holds_arrow, min_t

__all__ = [
    "__version__",
    "branch_calculus",
    "chain_terms",
    "monomorphic",
    "piggyback",
    "pq_category",
    "ramsey_harness",
    "EmbType",
    "IndexSet",
    "SigmaEmbedding",
    "enumerate_types",
    "g_hat",
    "tp",
    "type_stabilization",
    "OMEGA_OMEGA",
    "Term",
    "branches",
    "cnf_spectrum_finite",
    "format_term",
    "hausdorff_rank",
    "parse_chain_term",
    "parse_cnf",
    "truncate",
    "BrdError",
    "FiniteStructure",
    "Partition",
    "minimal_mono_decomposition",
    "EmbeddingGerm",
    "PartialMapQ",
    "phi_decode",
    "psi_encode",
    "FiniteCategory",
    "Witness",
    "verify_witness",
    "ArrowQuery",
    "DegreeBound",
    "holds_arrow",
    "min_t",
]
