"""Group-theoretic and group-algebra invariants of finite p-groups.

The package realizes finitely presented p-groups as multiplication tables,
computes series and subgroup invariants on the group side, computes the
matching ideals of the modular group algebra F_pG, and uses both to tell a
catalog of 2-group families apart.
"""

from .presentation import Presentation, parse_presentation, render_presentation
from .groups import FiniteGroup, Subgroup, realize
from .catalog import build_group, fingerprint, separation_report, verify_table

__version__ = "0.1.0"

__all__ = [
    "Presentation",
    "parse_presentation",
    "render_presentation",
    "FiniteGroup",
    "Subgroup",
    "realize",
    "build_group",
    "fingerprint",
    "separation_report",
    "verify_table",
]
