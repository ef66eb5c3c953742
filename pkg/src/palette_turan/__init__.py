"""Palettes, star admissibility and the exact bound chain for uniform Turán densities of stars."""

__version__ = "0.1.0"

from .palette import Palette, density, good_pairs, minimality_reduce, remove_color, verify_claim1
from .hypergraph import ThreeGraph, contains_copy, rodl_construct, star
from .admit import AdmissionCertificate, Verdict, check_certificate, decide_admission
from .digraph import (ColorDigraph, Digraph, build_digraph, max_transitive_tournament,
                      star_admission, tt_to_certificate, verify_lemma4)
from .bounds import (chain_verify, final_identity, refined_threshold, star_palette,
                     star_palette_density, thresholds, verify_claim3, verify_claim4, verify_lemma3)
from .search import exhaustive_best, local_search
