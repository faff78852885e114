"""Principal polarizations on squares of CM elliptic curves.

Class groups of imaginary quadratic orders, reduction of unimodular Hermitian
forms over them, the field-of-moduli and field-of-definition tests, and a
numerical check of curve equations through theta constants.
"""

from .quadorder import class_group, order, scan_discriminants
from .hermitian import HermitianForm, reduce, is_congruent
from .classify import enumerate_polarizations, automorphism_group
from .moduli import field_of_moduli_is_Q, field_of_definition_is_Q

__version__ = "0.1.0"

__all__ = [
    "HermitianForm",
    "automorphism_group",
    "class_group",
    "enumerate_polarizations",
    "field_of_definition_is_Q",
    "field_of_moduli_is_Q",
    "is_congruent",
    "order",
    "reduce",
    "scan_discriminants",
]
