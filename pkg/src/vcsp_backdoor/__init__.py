"""Strong backdoors into tractable valued CSP classes.

The package covers exact VCSP instances and costs (:mod:`.model`,
:mod:`.costs`), constraint languages (:mod:`.languages`), polynomial base
solvers (:mod:`.solvers`), backdoor detection and use
(:mod:`.backdoor`), the backdoor-preserving transforms for scattered
classes (:mod:`.transform`), a JSON file format (:mod:`.fileformat`),
seeded generators (:mod:`.generators`) and a command line front end
(:mod:`.cli`).
"""

from ._backend import available_backends, backend_name, set_backend
from .backdoor import (
    SearchStats,
    detect_backdoor_branching,
    detect_backdoor_exhaustive,
    is_backdoor,
    is_minimal_backdoor,
    solve_with_backdoor,
)
from .costs import INF, format_cost, parse_cost, to_cost
from .fileformat import emit_instance, load_instance, parse_instance
from .generators import generate
from .languages import (
    FiniteLanguage,
    LanguageFamily,
    MinClosedCrisp,
    SubmodularBoolean,
    closure_under_partial_assignments,
    instance_in_language,
)
from .model import (
    CostFunction,
    Instance,
    ValuedConstraint,
    apply_assignment,
    connected_components,
    evaluate,
)
from .solvers import (
    Solution,
    brute_force_solve,
    solve_min_closed,
    solve_scattered,
    solve_submodular_boolean,
)
from .transform import compute_type, finitize, pipeline_solve, replace_cost_function, vcsp_to_csp

__version__ = "0.1.0"
