"""horolab: exact and high-precision verification of Bernoulli distribution
relations, horospherical divisor maps on GL2(Z/N), free-Lie monodromy
residues at torsion parameters, and polylogarithm regulator values."""

__version__ = "0.1.0"

from .errors import (
    ConsistencyError,
    ModulusMismatchError,
    PrecisionError,
    SchemaError,
)
from .exact import (
    PowerSeries,
    RationalPolynomial,
    bernoulli_number,
    bernoulli_polynomial,
    distribution_relation_check,
    format_rational,
    parse_rational,
    periodic_bernoulli,
    residue_generating_series,
)
from .freelie import (
    GroupWord,
    HallWord,
    LieElement,
    ad_series,
    apply_monodromy,
    bch,
    bracket,
    generator,
    hall_basis,
    hall_word,
    log_of_word,
    phi_zero,
    witt_number,
)
from .modular import (
    CyclotomicCombo,
    Divisor,
    IsomFunction,
    ModMatrix,
    PolylogCombo,
    TorsionPoint,
    act,
    coset_representatives,
    cyclotomic_coefficients,
    horospherical,
    horospherical_value,
    indicator_at_infinity,
    kernel_basis,
    parabolic_elements,
    polylog_coefficients,
    residue_closed_form,
    residue_consistency_check,
    residue_zero_divisor,
    surjectivity_report,
    vanishes_at_infinity,
)
from .regulator import (
    BigComplex,
    embeddings,
    evaluate_polylog_combo,
    hurwitz_zeta,
    kernel_relation_residual,
    li_at_root_of_unity,
    twist_projection,
    verify_polylog_collapse,
    zeta_value,
)
from .residues import (
    MONODROMY_IDENTITIES,
    QuotientTag,
    ReducedCoords,
    SymTensor,
    commutator_log,
    invariant_log_generator,
    log_module_coords,
    module_generator_presentation,
    module_monomial_apply,
    mu_dual,
    pr_project,
    quotient_reduce,
    reduced_coords,
    reduced_generator_series,
    residue_at_torsion,
    scale_module_monomials,
    verify_exp_splitting,
    verify_monodromy_identity,
)
