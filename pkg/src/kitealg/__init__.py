"""Kite pseudo effect algebras over po-groups, with desk-scale verification tools."""

from kitealg.verdict import Verdict
from kitealg.pogroup import parse_group, IntegerGroup, VectorGroup, LexProduct, DirectProduct
from kitealg.indexsys import IndexSystem
from kitealg.kite import KiteAlgebra, KiteElement, LOWER, UPPER
from kitealg.poloop import PoLoop, LoopElement

__all__ = [
    "Verdict",
    "parse_group",
    "IntegerGroup",
    "VectorGroup",
    "LexProduct",
    "DirectProduct",
    "IndexSystem",
    "KiteAlgebra",
    "KiteElement",
    "LOWER",
    "UPPER",
    "PoLoop",
    "LoopElement",
]
