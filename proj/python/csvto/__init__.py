"""Constrained Stein variational trajectory optimization.

The heavy lifting lives in the compiled ``_csvto`` extension; this package
re-exports its public surface.
"""

from _csvto import *  # noqa: F401,F403
import _csvto as _core

__all__ = [name for name in dir(_core) if not name.startswith("_")]
