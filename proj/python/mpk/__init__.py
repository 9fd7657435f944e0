"""Uncertainty constants of metaplectic transformations.

The heavy lifting lives in the C++ extension `_mpk`; this package re-exports
its functions.  Matrices are numpy arrays; a symplectic matrix is 2n x 2n with
the upper-right block as block 12.
"""

from ._mpk import (  # noqa: F401
    MpkError,
    __version__,
    apply_free_factor,
    canonical_phase,
    factor_abc,
    factor_free,
    factor_two_free,
    fourier_gaussian,
    gaussian_variance,
    grid_fourier,
    ground_energy,
    is_symplectic,
    make_lambda_plq,
    make_xi_abc,
    mu_of_symplectic,
    optimizer_family,
    psi_word,
    sample_gaussian,
    schatten_norm,
    selftest,
    selftest_groups,
    symplectic_form,
    variance_grid,
    wigner_grid,
    word_variance_product,
)
