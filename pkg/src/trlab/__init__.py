"""Exact analytic rank, partition rank, bias and Gowers norms over prime fields."""

from .errors import BudgetExceeded, ConstructionError, InputError, InvariantViolation, TrlError
from .fields import FieldSpec
from .linalg import Subspace, kernel, orth_complement, rank, rref
from .tensor import Tensor, contract, dot, flatten, from_lex_index, lex_index, pure_to_tensor
from .analytic import ExactBias, arank, bias_char_oracle, bias_exact
from .prank import (
    DegeneracyCertificate, PartitionCertificate, Rank1Term, degeneracy_to_prank, is_k_degenerate,
    min_degeneracy, prank_exact,
)
from .poly import Polynomial, derivative_tensor, gowers_norm, inverse_witness, rank_upper_construct, taylor_split
from .additive import (
    LSystem, PointSet, SignedCombination, bogolyubov, find_subspace_in, find_system, lsystem_intersect,
    sumset, system_constrain,
)
from .forcing import (
    ForcingFamily, QMultiset, focusondeg, forcing_check, mainlemma_construct, mainlemma_d1, near_annihilators,
    paper_constants,
)
from .census import CensusRecord, RunConfig, census_run, census_summarize
from .verify import verify_suite

__version__ = "0.1.0"
