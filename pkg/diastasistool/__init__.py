"""
isort:skip_file
"""

from .GRat import GRat as GRat
from .HermSeries import HermSeries as HermSeries
from .RationalFunction import RationalFunction as RationalFunction
from .CalabiAnalysis import Diastasis as Diastasis
from .CalabiAnalysis import dual_diastasis as dual_diastasis
from .CalabiAnalysis import projective_witness as projective_witness
from .CalabiAnalysis import scan_forbidden as scan_forbidden
from .CartanDomain import CartanDomain as CartanDomain
from .CartanDomain import ProductDomain as ProductDomain
from .CartanDomain import parse_domain as parse_domain
from .CHMetrics import CHDomain as CHDomain
from .CHMetrics import PotentialKind as PotentialKind
from .CHMetrics import ch_potential as ch_potential
from .Inducibility import decide as decide
from .Inducibility import dual_refutation as dual_refutation
from .FlagManifold import PaintedDiagram as PaintedDiagram
from .FlagManifold import flag_dual_verdict as flag_dual_verdict
from .Curvature import ricci_series as ricci_series
from .Curvature import u21_report as u21_report
from .VerificationSuite import run_suite as run_suite
