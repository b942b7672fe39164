"""Shared group construction for the test modules."""

from __future__ import annotations

from functools import lru_cache

from mipkit.catalog import build_group, family, family_ids
from mipkit.groups import realize
from mipkit.presentation import parse_presentation

STANDARD = ("D", "Q", "S", "M2", "C")

EXTRASPECIAL_27 = "<x,y,z| x^3, y^3, z^3, x^-1*y^-1*x*y=z, x*z=z*x, y*z=z*y>"
EXTRASPECIAL_243 = ("<x,y,u,v,z| x^3, y^3, u^3, v^3, z^3, x^-1*y^-1*x*y=z, u^-1*v^-1*u*v=z, "
                    "x*u=u*x, x*v=v*x, y*u=u*y, y*v=v*y, x*z=z*x, y*z=z*y, u*z=z*u, v*z=z*v>")
KLEIN = "<a,b| a^2, b^2, a*b=b*a>"


@lru_cache(maxsize=96)
def group(fid, m):
    return build_group(fid, m)


@lru_cache(maxsize=None)
def from_text(text):
    return realize(parse_presentation(text))


def catalog(max_m, min_m=None, standard=True):
    """``(family, m)`` pairs of every catalog group with ``min_m <= m <= max_m``."""
    ids = family_ids(None) + (list(STANDARD) if standard else [])
    out = []
    for fid in ids:
        spec = family(fid)
        lo = spec.min_m if min_m is None else max(spec.min_m, min_m)
        for m in range(lo, max_m + 1):
            if spec.admissible(m):
                out.append((fid, m))
    return out
