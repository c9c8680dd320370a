"""HTTP facade over the calculus core.

The FastAPI app in :mod:`sascalc.service.app` is the package's service
surface; the CLI drives it in-process by default and over the network when
pointed at a running server.
"""

from .app import app

__all__ = ["app"]
