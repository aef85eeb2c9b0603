"""Dilations of functions on sets: constructions, verifiers and classifiers."""

from .dilation1 import (DilationQuadruple, defect_dilation, defect_of_dilation, equivalence_to_defect_model,
                        halmos_dilate, is_coinvariant, shift_criterion, standard_dilation, unitary_dilation,
                        verify_power_dilation)
from .endo import DefectSpace, FinFunc, all_minimal_defects, defect_space, minimal_defect
from .errors import DilatkError
from .report import VerificationReport
from .symset import Component, Elem, Subset, SymSet, TailAffineMap, Translate, Periodic
from .wold import classify_orbits, is_shift, wold_decompose

__version__ = "0.1.0"

__all__ = [
    "Component", "DefectSpace", "DilationQuadruple", "DilatkError", "Elem", "FinFunc", "Periodic",
    "Subset", "SymSet", "TailAffineMap", "Translate", "VerificationReport", "all_minimal_defects",
    "classify_orbits", "defect_dilation", "defect_of_dilation", "defect_space", "equivalence_to_defect_model",
    "halmos_dilate", "is_coinvariant", "is_shift", "minimal_defect", "shift_criterion", "standard_dilation",
    "unitary_dilation", "verify_power_dilation", "wold_decompose",
]
