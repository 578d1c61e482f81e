"""Weighted flexible DP-coloring workbench for plane graphs without 4-cycles
and without intersecting triangles."""

from __future__ import annotations

__version__ = "0.1.0"
