"""Analytic band edges of the elliptic quasi-exactly solvable potential
V(x) = [b^2/4 - m(1-m) a(a+1)] sn^2/dn^2 - b (a + 1/2) cn/dn^2,
with independent numerical cross-checks."""

__version__ = "0.1.0"

from .closed_form import closed_form_edges, closed_form_energies
from .elliptic import complete_elliptic_k, ellipj, half_angle_factors, jacobi_point
from .errors import ConditioningError, ConsistencyError, DomainError, DomainSizeError, NotAnOracleError, QESBandError
from .numeric_spectra import FloquetSpec, bound_states_line, floquet_edges
from .potentials import PotentialParams, assemble_psi, gauge_factor, v_companion, v_dsg, v_dshg, v_elliptic, v_hyperbolic
from .qes_core import BandEdgeSolution, Sector, SectorTag, count_nodes, enumerate_sectors, solve_band_edges
from .sl2 import sl2_verify
from .transforms import CompanionParams, companion_edges, limit_edges, to_companion
