"""Exact Hopf-algebraic moment/cumulant and Wick polynomial calculus."""

from .algebra import EMPTY, LinComb, Multiset, parse_helem, render_latex, render_text, to_rational
from .cumulants import (
    MomentSpec,
    cumulants,
    moment_functional,
    moments_from_cumulants,
    verify_characterization,
    wick,
    wick_expansion,
    wick_inverse,
    wick_product,
)
from .distributions import DistributionSpec, SampleTable, moments_from_distribution, moments_from_samples
from .errors import (
    EnumerationGuardError,
    HopfError,
    MissingValueError,
    ParseError,
    PreconditionError,
    TruncationError,
    ValidationError,
)
from .forest import Forest, forest_antipode, forest_coproduct, lift_character, wick_via_antipode
from .hopf import (
    EPSILON,
    Functional,
    convolve,
    coproduct,
    deformed_coproduct,
    deformed_product,
    exp_star,
    log_star,
    neumann_inverse,
    phi,
)
from .trees import (
    DecTree,
    TreeCharacter,
    TreeForest,
    centering_character,
    corolla_embed,
    corolla_restrict,
    deformed_tree_product,
    extraction_contraction,
    parse_tree,
    psi_lambda,
    tree_char_convolve,
    tree_char_inverse,
)

__version__ = "0.1.0"
