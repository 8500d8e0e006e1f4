from __future__ import annotations

import math
from functools import lru_cache

import pytest

from sphtile.catalog import build, catalog_ids
from sphtile.geometry import family_point

PI = math.pi


@lru_cache(maxsize=None)
def built(fid_text: str):
    return build(fid_text)


def point_for(fid):
    return family_point(fid.angle_family, fid.c)


@pytest.fixture(scope="session")
def catalog():
    """(id string, tiling, angles) for every catalog entry with c <= 4."""
    return [(str(fid), built(str(fid)), point_for(fid)) for fid in catalog_ids(4)]
