"""deltakit: exact certificates for delta-invariant lower bounds.

Every number is a ``fractions.Fraction``; floats are rejected at the door.
The modules build on each other in order:

exact      polynomials in (u, v), affine forms, piecewise functions, integration
lattice    curve lattices, nefness, Zariski decomposition and its oracle
sweep      parametric Zariski chambers of Q(u) - vC
invariants S_X, S(V;C), F_p, S(W;p), the delta chain and cross checks
okounkov   bodies and barycenters as independent oracles
scenario   JSON scenarios, the bundled corpus, the runner and reports
"""

from .errors import (
    DegenerateFamily,
    DeltaKitError,
    Discontinuity,
    DiscontinuousVolume,
    InvalidScenario,
    InvariantViolation,
    NegativeOrdIntegrand,
    NotNefInput,
    NotPseudoeffective,
    ZeroArea,
)
from .exact import AffineForm, PiecewiseFn, Poly, format_rational, integrate_interval, integrate_piecewise, integrate_strip, parse_rational
from .invariants import (
    Chamber1D,
    DeltaLevel,
    PointSpec,
    Refinement,
    ThreefoldModel,
    base_term,
    cross_checks,
    delta_chain,
    f_point,
    s_curve,
    s_divisor,
    s_point,
    surface_sweeps,
    vol_family,
)
from .lattice import CurveLattice, DivClass, ZariskiPair
from .okounkov import OkounkovBody2D, area, barycenter, body2d, check_bounds
from .scenario import Report, Scenario, bundled, parse_scenario, run, scale_scenario, serialize_scenario
from .sweep import SupportCell, SweepResult, cell_pc, cell_psquare, sweep

__version__ = "0.1.0"
