"""Over-relaxation kinetic scheme for 1-D scalar transport."""
from .boundary import BoundaryClosure, RightStrategy
from .kinetic_core import (relax_exact, relax_instant, relax_over, relax_project,
                           reversibility_defect, step, step_s1, step_s2, transport_quarter)
from .lattice import LatticeState, Relaxation, Scheme, SchemeConfig
from .problems import FluxModel, ProblemSetup, exact_solution, initial_state, linear_flux

__version__ = "0.1.0"
