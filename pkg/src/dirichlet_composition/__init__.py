"""Composition operators with linear-fractional symbols on the Dirichlet space.

Modules:

* ``mobius``: linear-fractional maps, automorphism form, classification, fixed points
* ``kernel``: reproducing kernels and the normalised-kernel difference ratio
* ``oracle``: Taylor-series model of the space, used as an independent check
* ``compactness``: boundary scans, case analysis and compactness decisions for C_phi - C_psi
* ``commutator``: adjoints and the commutator [C*_psi, C_phi]
* ``mapspec`` / ``cli``: textual map specifications and the command-line front end
"""

__version__ = "0.1.0"

from .errors import *  # noqa: F401,F403
from .mobius import (  # noqa: F401
    IDENTITY,
    MapClassification,
    MobiusMap,
    apply,
    classify,
    compose,
    fixed_points,
    inverse,
    is_self_map,
    krein_adjoint,
    maps_equal,
    same_fixed_points,
    to_automorphism_form,
)
from .kernel import KernelPoint, diff_ratio, kernel_eval, kernel_norm_sq  # noqa: F401
from .oracle import TaylorSeries, dirichlet_inner, dirichlet_norm_estimate, series_from_samples  # noqa: F401
from .compactness import (  # noqa: F401
    BoundaryScanReport,
    CaseTag,
    CompactnessVerdict,
    RadiusLadder,
    ScanConfig,
    ScanVerdict,
    boundary_scan,
    classify_case,
    log_ratio_lemma_check,
    ratio_limit_check,
)
from .commutator import (  # noqa: F401
    adjoint_apply,
    commutator_apply,
    commutator_compact_decision,
    commute_check,
    difference_pair,
    essentially_normal,
)
from .mapspec import parse_map  # noqa: F401
