"""Marked-group engines with exact word problems."""
from .abelian import AbelianGroup, cyclic_group, free_abelian
from .base import MarkedGroup, ball_enumerate, conjugate, evaluate_word, sphere_bfs
from .cosets import (CosetTable, CosetTableGroup, FinitePresentation, burnside_group,
                     coset_enumerate)
from .free import FreeGroup
from .freeproduct import FreeProduct, free_product_normal_form
from .groupfile import load_group, parse_group
from .hnn import BrittonForm, HnGroup, britton_reduce, conjugation_certificates, has_pinch
from .lamplighter import Lamplighter
from .metabelian import (MetabelianizedGroup, fox_derivative, metabelian_is_trivial,
                         schreier_is_trivial)

__all__ = [
    "AbelianGroup", "BrittonForm", "CosetTable", "CosetTableGroup", "FinitePresentation",
    "FreeGroup", "FreeProduct", "HnGroup", "Lamplighter", "MarkedGroup", "MetabelianizedGroup",
    "ball_enumerate", "britton_reduce", "burnside_group", "conjugate", "conjugation_certificates",
    "coset_enumerate", "cyclic_group", "evaluate_word", "fox_derivative", "free_abelian",
    "free_product_normal_form", "has_pinch", "load_group", "metabelian_is_trivial",
    "parse_group", "schreier_is_trivial", "sphere_bfs",
]
