"""Hecke eigenvalue distributions over totally real fields.

Exact local Hecke-algebra arithmetic, spectral and Sato-Tate measures,
Kloosterman sums with characters, and an equidistribution test harness,
for Q and real quadratic fields at desk scale.
"""

from heckedist.fields import (
    FieldError,
    FieldElement,
    Ideal,
    NotInvertibleError,
    NumberField,
    PrimeIdeal,
    ResidueRing,
    UnitGroupData,
    element_valuation,
    factor_rational_prime,
    ideal_prime_factorization,
    ideal_valuation,
    inverse_different,
    make_field,
    prime_by_label,
    unit_square_class,
)
from heckedist.hecke import (
    GlobalHeckeOperator,
    HeckeEigenvalue,
    HeckeError,
    LocalHeckeElement,
    SatakeParam,
    SymLaurentPoly,
    brute_force_convolution,
    convolve_det_p_square,
    coset_representatives,
    expected_coset_count,
    from_sym_laurent,
    global_eigenvalue,
    lambda_from_nu,
    nu_from_lambda,
    nu_strip_height,
    s_poly,
    s_poly_eval,
    satake_from_lambda,
    verify_relation,
)
from heckedist.measures import (
    Box,
    MeasureError,
    MeasureValue,
    NuMeasure,
    SatoTateMeasure,
    SpectralMeasure,
    box_measure,
    half_line_measure,
    measure_interval,
    npl_consistency,
    nu_measure,
    phi,
    pl_atoms_in,
    pl_measure,
    spectral_measure,
    v1_atoms_in,
    v1_measure,
)
from heckedist.kloosterman import (
    DirichletCharacter,
    KloostermanError,
    KloostermanQuery,
    WeilRow,
    WeilScanResult,
    delta_term,
    evaluate,
    rational_kloosterman,
    symmetry_check,
    twisted_multiplicativity_gap,
    weil_scan,
)
from heckedist.equidist import (
    Dataset,
    EigenRecord,
    EquidistError,
    Prediction,
    Report,
    ReportRow,
    TauData,
    count,
    level_index,
    predict,
    run_report,
    synthesize,
    tau_source,
    tau_table,
    verify_tau_identities,
)

__version__ = "0.1.0"

__all__ = [
    "Box",
    "Dataset",
    "DirichletCharacter",
    "EigenRecord",
    "EquidistError",
    "FieldElement",
    "FieldError",
    "GlobalHeckeOperator",
    "HeckeEigenvalue",
    "HeckeError",
    "Ideal",
    "KloostermanError",
    "KloostermanQuery",
    "LocalHeckeElement",
    "MeasureError",
    "MeasureValue",
    "NotInvertibleError",
    "NuMeasure",
    "NumberField",
    "Prediction",
    "PrimeIdeal",
    "Report",
    "ReportRow",
    "ResidueRing",
    "SatakeParam",
    "SatoTateMeasure",
    "SpectralMeasure",
    "SymLaurentPoly",
    "TauData",
    "UnitGroupData",
    "WeilRow",
    "WeilScanResult",
    "box_measure",
    "brute_force_convolution",
    "convolve_det_p_square",
    "coset_representatives",
    "count",
    "delta_term",
    "element_valuation",
    "evaluate",
    "expected_coset_count",
    "factor_rational_prime",
    "from_sym_laurent",
    "global_eigenvalue",
    "half_line_measure",
    "ideal_prime_factorization",
    "ideal_valuation",
    "inverse_different",
    "lambda_from_nu",
    "level_index",
    "make_field",
    "measure_interval",
    "npl_consistency",
    "nu_from_lambda",
    "nu_measure",
    "nu_strip_height",
    "phi",
    "pl_atoms_in",
    "pl_measure",
    "predict",
    "prime_by_label",
    "rational_kloosterman",
    "run_report",
    "s_poly",
    "s_poly_eval",
    "satake_from_lambda",
    "spectral_measure",
    "symmetry_check",
    "synthesize",
    "tau_source",
    "tau_table",
    "twisted_multiplicativity_gap",
    "unit_square_class",
    "v1_atoms_in",
    "v1_measure",
    "verify_relation",
    "verify_tau_identities",
    "weil_scan",
]
