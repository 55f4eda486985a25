"""Adaptive CP-rank tensor completion (sandwich sampling).

Thin python surface over the C++ core: densely complete a couple of frontal
slices, recover the first two factor matrices by simultaneous
diagonalization, then solve for the third factor from a handful of
QR-selected fibers.
"""

from tensorsandwich._core import (
    add_noise_snr,
    coherence,
    complete,
    cp_to_dense,
    generate_synthetic,
    khatri_rao,
    kruskal_rank_at_least_2,
    masked_als,
    relative_error,
    subspace_coherence,
    unfold3,
)

__all__ = [
    "add_noise_snr",
    "coherence",
    "complete",
    "cp_to_dense",
    "generate_synthetic",
    "khatri_rao",
    "kruskal_rank_at_least_2",
    "masked_als",
    "relative_error",
    "subspace_coherence",
    "unfold3",
]

__version__ = "0.1.0"
