"""Exact linking-matrix Kirby calculus with characteristic sublinks.

Modules: ``core_link`` (framed links, signature), ``homology`` (Smith normal
form), ``spin`` (characteristic sublinks), ``moves`` and ``script`` (the move
engine and its text format), ``lens`` (even chains for lens spaces) and
``obstruct`` (10/8 certificates).
"""

from .core_link import FillingInvariants, FramedLink, determinant, l_n_trace, signature
from .homology import HomologyProfile, boundary_fingerprint, smith_normal_form
from .lens import EvenChain, chain_link, even_chain, lens_filling_invariants
from .moves import CalculusState, blow_down, blow_up, blow_up_across, remove_torus_component, run_script, slide
from .obstruct import (
    GluedInvariants,
    ObstructionCertificate,
    cable_decomposition,
    furuta_violated,
    glue_to_trace,
    min_odd_n,
    obstruct_knot_surgery,
)
from .spin import CharSublink, characteristic_sublinks, empty_is_characteristic, is_characteristic

__version__ = "0.1.0"

__all__ = [
    "CalculusState",
    "CharSublink",
    "EvenChain",
    "FillingInvariants",
    "FramedLink",
    "GluedInvariants",
    "HomologyProfile",
    "ObstructionCertificate",
    "blow_down",
    "blow_up",
    "blow_up_across",
    "boundary_fingerprint",
    "cable_decomposition",
    "chain_link",
    "characteristic_sublinks",
    "determinant",
    "empty_is_characteristic",
    "even_chain",
    "furuta_violated",
    "glue_to_trace",
    "is_characteristic",
    "l_n_trace",
    "lens_filling_invariants",
    "min_odd_n",
    "obstruct_knot_surgery",
    "remove_torus_component",
    "run_script",
    "signature",
    "slide",
    "smith_normal_form",
]
