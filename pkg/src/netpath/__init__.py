"""Path-based inconsistency assessment for network meta-analysis."""

from .distributions import chi2_sf, normal_sf_two_sided
from .errors import NetpathError
from .flow import EvidenceFlow, evidence_flow
from .independence import ReductionResult, independent_subsystem, ref_reduce
from .inconsistency import (
    InconsistencyReport,
    NetpathMatrix,
    Status,
    ZTestResult,
    all_comparisons,
    enumerate_loops,
    loop_test,
    netpath_matrix,
    q_path,
    q_path_pinv,
    side_split,
)
from .network import DirectComparison, EvidenceNetwork, build_network, pool_pairwise
from .nma import HatRow, LaplacianSystem, hat_row, laplacian_pinv, nma_estimate
from .paths import EvidencePath, PathSystem, build_path_system, enumerate_paths, path_effect, path_variance

__version__ = "0.1.0"
