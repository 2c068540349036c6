"""Hidden-variable models of bipartite experiments over finite spaces."""

from .canonical import IntervalHVModel, IsoMap, canonicalize, check_interval_properties, kernel_atoms
from .measure import Event, FiniteSpace, Partition, ProbTable, ValidationError, conditional, marginal, product
from .models import EmpiricalModel, HVModel, RestrictionSpec, realizes, restrict
from .properties import PROPERTIES, check_all
from .solver import chsh_value, solve_local

__version__ = "0.1.0"
