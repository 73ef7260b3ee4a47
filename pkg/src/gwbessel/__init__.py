"""Large-order Bessel functions J_nu(x) from Meissel, Debye, Watson and epsilon
expansions, an arbitrary-precision oracle to check them against, and a pulsar
gravitational-wave Fourier-transform sum that consumes them."""

__version__ = "0.1.0"

from .core import (BesselError, BesselQuery, CapExceeded, ExpansionResult, InvalidInput, Method,
                   NoMethodApplicable, OracleMismatch, OutOfRange, OutOfValidity, PoleInParameters,
                   PrecisionConfig, PrecisionLossWarning, Regime, RegimeTag, TruncationWarning, UnderflowWarning,
                   WrongRegime, reduced_phase)
from .debye import debye_above, debye_below
from .evaluator import DispatchPolicy, besselj, classify, eval_J, run_method
from .meissel import meissel_first, meissel_first_terms, meissel_second, meissel_second_terms, meissel_third
from .oracle import (OracleValue, backward_recurrence_J, exact_J, exact_J_fractional_small, exact_K_third,
                     oracle_feasible)
from .transition import WatsonBound, epsilon_expansion, watson_above, watson_below

__all__ = [
    "BesselError", "BesselQuery", "CapExceeded", "ExpansionResult", "InvalidInput", "Method",
    "NoMethodApplicable", "OracleMismatch", "OutOfRange", "OutOfValidity", "PoleInParameters",
    "PrecisionConfig", "PrecisionLossWarning", "Regime", "RegimeTag", "TruncationWarning", "UnderflowWarning",
    "WrongRegime", "reduced_phase", "debye_above", "debye_below", "DispatchPolicy", "besselj", "classify",
    "eval_J", "run_method", "meissel_first", "meissel_first_terms", "meissel_second", "meissel_second_terms",
    "meissel_third", "OracleValue", "backward_recurrence_J", "exact_J", "exact_J_fractional_small",
    "exact_K_third", "oracle_feasible", "WatsonBound", "epsilon_expansion", "watson_above", "watson_below",
]
