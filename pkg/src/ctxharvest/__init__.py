"""Contextuality, magic and entanglement harvested by Unruh-DeWitt detectors.

Submodules:

- ``numkernel``: complex error functions and adaptive quadrature
- ``matcore``: partial transpose, partial trace, Jacobi eigensolver
- ``fieldprop``: smeared Wightman, Hadamard, causal and Green's functions
- ``udwstate``: second-order detector density matrices
- ``ctxscen``: pentagram scenarios and empirical models
- ``lpcf``: contextual fraction by linear programming
- ``measures``: mana, negativity, inequality value, genuine-harvesting test
- ``sweep`` and ``cli``: parameter sweeps and the command line
"""

import logging

from . import ctxscen, fieldprop, lpcf, matcore, measures, numkernel, sweep, udwstate
from ._accel import backend
from .ctxscen import EmpiricalModel, Scenario, build_pentagram, empirical_model
from .errors import (AccuracyError, ConfigError, CtxHarvestError, DomainError, LpError,
                     NumericalError, NumericalOverflow, PreconditionError, ScenarioError)
from .fieldprop import DetectorParams, GaussTerm, Kind, Method, SignPair
from .lpcf import contextual_fraction, delta_cf, delta_cf_perturbative, solve_ncf
from .matcore import BipartiteShape
from .measures import (HarvestVerdict, InequalityCoeffs, derive_inequality_coeffs,
                       harvest_verdict, mana, mana_closed_form, negativity, negativity_closed)
from .sweep import SweepConfig, SweepRow, emit_csv, preset, run_sweep
from .udwstate import UdwSystem, assemble_qubit_qutrit, assemble_single_qutrit

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"
