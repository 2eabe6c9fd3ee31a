"""Even/odd kernel decomposition, DCT spectra and propagation."""

from ._core import (
    EimError,
    dct_basis,
    decompose,
    dihedral_average,
    layer_spectrum,
    load_tensor,
    lorentz_gamma,
    mix,
    project,
    propagate,
    reconstruct,
    save_tensor,
    standard_kernel,
    sweep,
    truncate,
)

__all__ = [
    "EimError",
    "dct_basis",
    "decompose",
    "dihedral_average",
    "layer_spectrum",
    "load_tensor",
    "lorentz_gamma",
    "mix",
    "project",
    "propagate",
    "reconstruct",
    "save_tensor",
    "standard_kernel",
    "sweep",
    "truncate",
]
