"""Special L-values of CM eta products: exact q-series, Grossencharacters,
period integrals, hypergeometric closed forms and Eisenstein CM values."""

from .qseries import EtaQuotient, QSeries
from .heckechar import Field, GrossCharSpec, coefficients
from .lvalues import LValueResult, Route, lvalue

__all__ = ["EtaQuotient", "QSeries", "Field", "GrossCharSpec", "coefficients", "LValueResult", "Route",
           "lvalue"]
__version__ = "0.1.0"
