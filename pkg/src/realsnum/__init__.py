"""Signed counts of real polynomials with prescribed real branch points."""

__version__ = "0.1.0"

from .partitions import TypeList  # noqa: E402

__all__ = ["TypeList", "__version__"]
