"""Verified trilinear-form computations for GL2 over Q_p at finite precision.

The package builds models of induced representations on coset tables, the
torus-equivariant functional behind the invariant trilinear form, and an
independent projective-line kernel integral, and certifies the test-vector
statements by exhaustive finite computation.
"""

from .context import PadicContext
from .errors import (
    BoundaryCharacterError,
    BudgetError,
    ConfigurationError,
    Gl2TripleError,
    InvariantError,
    MathCheckError,
    PrecisionError,
    UnsupportedOperation,
)
from .local_field import LocalFieldElem, abs_norm, additive_char, arith
from .characters import BorelChar, MultChar, UnitCharacter, conductor, eval_char
from .gl2 import (
    GL2Elem,
    SubgroupSpec,
    enumerate_cosets,
    is_member,
    iwasawa,
    shell_depth,
    support_identity_check,
)
from .reps import (
    InducedVector,
    RepSpec,
    closed_form_gamma,
    eigenspace_dim,
    minimal_triple_search,
    new_vector,
    special_project,
    twist_and_classify,
)
from .kirillov import (
    KirillovVector,
    SupercuspidalStub,
    borel_act,
    ell_equal_conductor,
    pairing_Phi,
)
from .tree import OrientedPath, Vertex, act as tree_act, covering_ok, standard_path, to_dot
from .trilinear import (
    PhiFunctional,
    TrilinearContext,
    build_context,
    build_h_and_H,
    dual_pairing,
    verify_lambda12,
)
from .descent import EllValueLedger, epsilon_obstruction, solve_band
from .kernel import kernel_oracle
from .theorems import verify_theorem

__version__ = "0.1.0"
