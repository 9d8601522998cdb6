"""
Group Data

Class structure, character tables, Brauer characters and quotient links.
"""

from .loader import dump_group, dumps_group, load_group, load_group_file
from .table import (
    BrauerCharacter,
    BrauerTable,
    Character,
    ConjClass,
    GroupData,
    PublishedCell,
    QuotientLink,
    brauer_from_ordinary_difference,
    fused_partition,
    p_regular_classes,
)
from .validation import element_mu_values, validate_group, validate_quotient_link

__all__ = [
    "BrauerCharacter",
    "BrauerTable",
    "Character",
    "ConjClass",
    "GroupData",
    "PublishedCell",
    "QuotientLink",
    "brauer_from_ordinary_difference",
    "dump_group",
    "dumps_group",
    "element_mu_values",
    "fused_partition",
    "load_group",
    "load_group_file",
    "p_regular_classes",
    "validate_group",
    "validate_quotient_link",
]
