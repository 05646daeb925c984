"""Quadratic forms: local symbols over Q, residue chains, representation."""

from .certificates import Certificate, verify
from .forms import QuadForm, rational_form
from .generic import generic_value_refute
from .local import INF, hilbert_symbol, is_local_square, local_isotropic
from .rational import is_isotropic_Q, rational_witness
from .springer import Decision, certify_anisotropic, represents, residue_chain, springer_split
from .symbols import solve_prescribed_symbols
from .witness import find_isotropic_vector

__all__ = [
    "Certificate", "Decision", "INF", "QuadForm", "certify_anisotropic", "find_isotropic_vector",
    "generic_value_refute", "hilbert_symbol", "is_isotropic_Q", "is_local_square", "local_isotropic",
    "rational_form", "rational_witness", "represents", "residue_chain", "solve_prescribed_symbols",
    "springer_split", "verify",
]
