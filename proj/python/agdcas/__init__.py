"""Python access to the agdcas computer-algebra core."""

from fractions import Fraction

from ._core import (
    __version__,
    bracket,
    density,
    flow,
    structure_names,
    verify,
)
from ._core import central_charge as _central_charge


def central_charge(name, N=0, m=1):
    """Central charge of the Virasoro element of a W algebra, as a Fraction."""
    return Fraction(_central_charge(name, N=N, m=m))


__all__ = [
    "__version__",
    "bracket",
    "central_charge",
    "density",
    "flow",
    "structure_names",
    "verify",
]
