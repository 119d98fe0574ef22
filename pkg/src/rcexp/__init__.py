"""Linear codes and the random coding exponent on additive channels over F_q.

Submodules:

``field``         prime-field scalars, words, matrices
``typeclasses``   types of words, entropy, divergence, type-class sizes
``codes``         linear codes, type spectra, A-goodness, compatible pairs
``ensemble``      companion-matrix ensembles, balancedness, bad-code census
``exponent``      additive channels, E_r and the bounds built from it
``decoder``       minimum-entropy syndrome decoding and its error probability
``kernels``       compiled or numpy sweep kernels (``kernels.BACKEND``)
"""
from rcexp.codes import LinearCode, Spectrum, dual, is_a_good, is_compatible_pair, spectrum
from rcexp.decoder import (
    build_representatives,
    decode,
    exact_error_probability,
    permuted_failure_average,
    simulate_error_probability,
)
from rcexp.ensemble import (
    MonicPolynomial,
    build_ensemble,
    census_bad_codes,
    companion_matrix,
    find_primitive_poly,
    verify_balanced,
)
from rcexp.exponent import AdditiveChannel, exponent_over_types, random_coding_exponent
from rcexp.field import FieldMatrix, Word
from rcexp.typeclasses import Distribution, TypeVector

__version__ = "0.1.0"

__all__ = [
    "AdditiveChannel",
    "Distribution",
    "FieldMatrix",
    "LinearCode",
    "MonicPolynomial",
    "Spectrum",
    "TypeVector",
    "Word",
    "build_ensemble",
    "build_representatives",
    "census_bad_codes",
    "companion_matrix",
    "decode",
    "dual",
    "exact_error_probability",
    "exponent_over_types",
    "find_primitive_poly",
    "is_a_good",
    "is_compatible_pair",
    "permuted_failure_average",
    "random_coding_exponent",
    "simulate_error_probability",
    "spectrum",
    "verify_balanced",
]
