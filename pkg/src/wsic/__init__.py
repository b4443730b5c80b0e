"""Weakly secure linear index codes for two-sender unicast broadcast problems.

Model two-sender instances (side-information digraph, sender partition,
eavesdropper sets), compose weakly secure linear codes from sub-problem
codes, verify decodability and weak security exactly over GF(q), search
for optimal codes at desk scale, and certify optimality.
"""

from importlib import resources
from pathlib import Path

from .codec import (
    LinearCode,
    SymbolicCodeword,
    assemble,
    pad_add,
    security_oracle,
    slice_codeword,
    verify_decodability,
    verify_weak_security,
)
from .construct import (
    SubCodeBundle,
    best_construction,
    construct_general,
    construct_iib,
    construct_iicd,
    construct_iie,
    construct_naive,
    make_bundle,
)
from .errors import WsicError
from .gf import FieldOrder, MatrixGF, ff_inv, in_extended_rowspace, rref
from .interaction import CaseLabel, InteractionDigraph, classify, interaction_digraph
from .model import (
    EavesdropperSpec,
    FittingMatrix,
    SenderPartition,
    SideInfoDigraph,
    SingleSenderInstance,
    TwoSenderInstance,
    fitting_matrix,
    parse_instance,
    sub_instance,
    tilde_split,
)
from .search import (
    OptimalityCertificate,
    SearchResult,
    certify_optimality,
    optimal_suicp,
    two_sender_bruteforce,
)

__version__ = "0.1.0"


def fixture_path(name: str) -> Path:
    """Path of a packaged example document (ex1.json, ex2.json, ex3.json, ...)."""
    return Path(str(resources.files("wsic") / "fixtures" / name))
