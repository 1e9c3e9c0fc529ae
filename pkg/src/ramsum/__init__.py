"""ramsum: exact arithmetic for multiple Ramanujan sums, their finite
Fourier and Dirichlet-series identities, and Smith-type hyperdeterminants."""

from .arithfn import (
    ArithFn,
    a_gamma_fn,
    builtin,
    chain_gamma_convolve,
    dilate,
    dirichlet,
    eps_fn,
    gamma_convolve,
    mu_fn,
    one_fn,
    phi_fn,
    pointwise_mul,
    pow_fn,
    restrict_gamma,
)
from .core import (
    Factorization,
    divisors,
    euler_phi,
    factorize,
    gamma_root,
    gcd_many,
    is_gamma_power,
    lcm_many,
    mobius,
)
from .dseries import (
    TruncatedMDS,
    VerificationReport,
    diagonal,
    embed,
    finite_series,
    from_multisum,
    mds_mul,
    mds_mul_many,
    tensor_first_mismatch,
    verify_double_series,
    verify_f_gcd_series,
    verify_f_gcd_series_single,
    verify_gen_ramanujan_series,
    verify_multivariable_L,
    verify_phi_series,
    verify_prop_gamma_chain,
)
from .errors import ArityError, ResourceLimitError
from .fourier import (
    EvenCoeffTable,
    PeriodicCoeffTable,
    c_interval_sum,
    c_interval_sum_closed,
    even_coeffs,
    ffc_of_S,
    general_even_coeffs,
    periodic_coeffs,
    ramanujan_c,
    ramanujan_c_expsum,
    reconstruct_even,
    reconstruct_periodic,
    table_to_json_dict,
)
from .hyperdet import (
    FactorClosedSet,
    Hypermatrix,
    build_S_hypermatrix,
    cayley_product,
    det_gauss,
    even_hyperdet_check,
    factor_closure,
    hyperdet,
    hyperdet_full,
    hyperdet_permsum,
    hypermatrix_to_json_dict,
    is_factor_closed,
    iterate_ac,
    iterate_ac_closed,
    permute_axes,
    permute_order,
    signature_preimage,
    smith_hyperdet_check,
)
from .multisum import (
    MultiSumSpec,
    WeightFn,
    degeneracy_check,
    eval_multisum,
    eval_multisum_bruteforce,
    eval_multisum_euler,
    f_of_gcd,
    f_of_gcd_spec,
    gen_ramanujan,
    sigma_multi,
    transpose_data,
)
from .rational import fmt_exact, parse_exact

__version__ = "0.1.0"
