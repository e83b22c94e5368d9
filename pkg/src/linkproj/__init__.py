"""Canonical decomposition of link projections on the sphere.

The pipeline: parse a projection, enumerate its Haseman circles, build
and minimize a Conway family, assemble twisted band diagrams and jewels,
code arborescent components as weighted planar trees, and analyze flypes
and alternating criteria on the trees.
"""

from __future__ import annotations

__version__ = "0.1.0"
