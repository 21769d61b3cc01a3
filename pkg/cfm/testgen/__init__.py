"""Test instances with certified exact solutions"""
from .certify import (
    ExactInstance,
    KKTReport,
    SmoothedCertificate,
    certify,
    certify_basis_pursuit,
    certify_dantzig,
    certify_lasso,
    certify_smoothed,
    certify_smoothed_dantzig,
    support_of,
)
from .exact import (
    gen_basis_pursuit_exact,
    gen_dantzig_exact,
    gen_lasso_exact,
    generate,
    high_accuracy_solve,
    mu_sweep,
    perturbation,
    plateau_mu,
    smoothed_dantzig_certificate,
)
from .signals import add_noise, gen_gaussian_matrix, gen_low_rank, gen_partial_dct_rows, gen_sampling, gen_sparse_signal
