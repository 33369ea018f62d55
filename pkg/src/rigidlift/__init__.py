"""rigidlift: divisors, partial orientations and rigidity of cyclic
bijections on multigraphs."""

from .errors import RigidliftError
from .multigraph import (
    Arch,
    EdgePath,
    Multigraph,
    build_graph,
    connectivity_profile,
    cycle_through_edges,
    find_arches,
    fundamental_cycles,
    genus,
    series_classes,
    spanning_tree_count,
    whitney_move,
)
from .divisor import (
    Classification,
    Divisor,
    DivisorClass,
    abel_jacobi,
    canonical_divisor,
    classify_gminus1,
    divisor,
    enumerate_picard,
    is_effective_class,
    laplacian_fire,
    linearly_equivalent,
    q_reduce,
    theta_divisor,
)
from .homology import (
    Cochain,
    CycleLattice,
    h_edge,
    iota,
    iota_inverse,
    lattice_equivalent,
    lattice_for,
    p_vertex,
    project,
)
from .orientation import (
    AcyclicWitness,
    EdgeState,
    NotPartiallyOrientable,
    OrientationMove,
    PartialOrientation,
    SourcelessWitness,
    apply_move,
    base_orientation,
    chern_class,
    cut_reversal,
    cycle_reversal,
    dual_orientation,
    edge_slide,
    effectiveness_certificate,
    extend_to_nonspecial,
    is_acyclic,
    is_sourceless,
    lift_divisor_to_orientation,
    torsor_act,
)
from .orcyc import (
    MatroidLift,
    NotLiftable,
    OrCycMorphism,
    compose,
    compute_signs,
    diagram_defect,
    identity_morphism,
    inverse_morphism,
    is_rigid,
    lift_matroid_isomorphism,
    lift_to_graph_isomorphism,
    lowering_divisor,
    make_morphism,
    nonrigidity_witness,
    pushforward_cochain,
    pushforward_class,
    pushforward_orientation,
    rigidity_divisor,
    theta_preserved,
    validate_cyclic_bijection,
)
from .graphio import (
    format_divisor,
    format_orientation,
    load_fixture,
    load_graph,
    load_morphism,
    parse_divisor,
    parse_graph,
    parse_orientation,
)

__version__ = "0.1.0"
