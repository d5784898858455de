from __future__ import annotations

from . import config, protocols, types

__all__ = ["protocols", "types", "config"]
