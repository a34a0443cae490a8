"""Generalized torsion certificates for finitely presented groups."""

from .abelian import abelianize, image, smith_normal_form, torsion_order
from .certificates import (
    GtCertificate,
    NontrivialityEvidence,
    build_fibonacci_certificate,
    build_klein_certificate,
    build_rss_certificate,
    build_torus_bundle_certificate,
    claim_decomposition,
    verify,
)
from .classify import classify_circle_bundle, classify_sol, classify_torus_bundle
from .coset_enum import enumerate_cosets, evaluate, order_of
from .presentations import Presentation, fibonacci, klein_bottle, parse_presentation, rss, torus_bundle
from .word_problem import TrivialityProof, check_proof, klein_eval, tb_eval
from .words import Alphabet, Word, commutator, conjugate, parse_word, reduce

__version__ = "0.1.0"
