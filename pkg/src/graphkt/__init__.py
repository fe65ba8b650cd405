"""Graded K-theory and K-homology of relative Cuntz-Krieger algebras of finite graphs."""

__version__ = "0.1.0"

from graphkt.graph import (  # noqa: E402
    Edge,
    Graph,
    GraphError,
    KTheoryProblem,
    RelativeSet,
    add_tail,
    cuntz_graph,
    make_problem,
    parse_document,
    parse_graph,
    regular_vertices,
)
from graphkt.intmat import (  # noqa: E402
    AbelianGroup,
    IntMatrix,
    SmithDecomposition,
    cokernel,
    determinantal_divisors,
    kernel_basis,
    smith_normal_form,
    transpose,
)
from graphkt.invariants import (  # noqa: E402
    classical_k_homology,
    classical_k_theory,
    duality_report,
    exact_sequence_report,
    graded_k_homology,
    graded_k_theory,
    tail_invariance_report,
)
from graphkt.tails import TailSweepConfig, sweep  # noqa: E402
