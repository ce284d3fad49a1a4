"""Hypersurface support for modules over quantum complete intersections.

Two independent routes decide whether a finite-dimensional module is
supported at a point of projective space: Tor over the hypersurface
``Q/(f)`` computed from a Tate complex, and the fiber of Ext under the
degree-2 cohomological operators.
"""

from .cohomology import (
    annihilator_window,
    cohomological_operators,
    ext_module,
    ext_supported_points,
    fiber_supported_at,
    minimal_resolution,
    poincare_betti,
    zero_locus,
)
from .errors import HypSupportError, ValidationError
from .fields import Field, field_create
from .io import Problem, load_problem
from .qci import (
    ModuleRep,
    QciAlgebra,
    algebra_create,
    corpus_generate,
    free_module,
    module_is_free,
    module_validate,
    regular_module,
    syzygy,
    trivial_module,
)
from .suites import (
    SuiteReport,
    suite_detection,
    suite_rank_variety,
    suite_representative_independence,
    suite_route_agreement,
)
from .tate import (
    ProjPoint,
    SupportReport,
    bounding_cocycle_reduced,
    enumerate_points,
    hypersurface_poly,
    make_point,
    support_enumerate,
    supported_at,
    tate_complex,
    tor_dims,
)

__version__ = "0.1.0"

__all__ = [
    "Field",
    "HypSupportError",
    "ModuleRep",
    "Problem",
    "ProjPoint",
    "QciAlgebra",
    "SuiteReport",
    "SupportReport",
    "ValidationError",
    "algebra_create",
    "annihilator_window",
    "bounding_cocycle_reduced",
    "cohomological_operators",
    "corpus_generate",
    "enumerate_points",
    "ext_module",
    "ext_supported_points",
    "fiber_supported_at",
    "field_create",
    "free_module",
    "hypersurface_poly",
    "load_problem",
    "make_point",
    "minimal_resolution",
    "module_is_free",
    "module_validate",
    "poincare_betti",
    "regular_module",
    "suite_detection",
    "suite_rank_variety",
    "suite_representative_independence",
    "suite_route_agreement",
    "support_enumerate",
    "supported_at",
    "syzygy",
    "tate_complex",
    "tor_dims",
    "trivial_module",
    "zero_locus",
]
