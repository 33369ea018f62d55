#!/usr/bin/env python3
"""Survey the agreement of the four rigidity characterisations.

Enumerates all 2-connected, 2-edge-connected multigraphs up to isomorphism
within the given size bounds, samples valid morphisms across them, and
checks that the four predicates (zero rigidity divisor, commuting diagram on
full orientations, theta preservation, degree-1 image preservation) agree on
every sampled morphism.
"""

import argparse
import sys
import time

sys.path.insert(0, "tests")

from helpers import enumerate_small_graphs, sample_morphisms  # noqa: E402

from rigidlift.orcyc import (  # noqa: E402
    diagram_defect,
    is_rigid,
    s1_image_preserved,
    theta_preserved,
)
from rigidlift.orientation import base_orientation  # noqa: E402


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-vertices", type=int, default=5)
    parser.add_argument("--max-edges", type=int, default=8)
    parser.add_argument("--morphisms", type=int, default=1000)
    args = parser.parse_args()

    start = time.perf_counter()
    graphs = enumerate_small_graphs(
        max_vertices=args.max_vertices, max_edges=args.max_edges, min_genus=2
    )
    print(f"{len(graphs)} graphs enumerated "
          f"({time.perf_counter() - start:.1f}s)")

    morphisms = sample_morphisms(graphs, args.morphisms)
    print(f"{len(morphisms)} morphisms sampled")

    rigid = 0
    disagreements = []
    for i, m in enumerate(morphisms, 1):
        flags = (
            is_rigid(m),
            diagram_defect(m, base_orientation(m.source)).is_zero,
            theta_preserved(m),
            s1_image_preserved(m),
        )
        if len(set(flags)) != 1:
            disagreements.append((m, flags))
        elif flags[0]:
            rigid += 1
        if i % 200 == 0:
            print(f"  {i} checked ({time.perf_counter() - start:.1f}s)")

    print(f"done in {time.perf_counter() - start:.1f}s: "
          f"{rigid} rigid, {len(morphisms) - rigid - len(disagreements)} "
          f"non-rigid, {len(disagreements)} disagreements")
    for m, flags in disagreements[:10]:
        print(f"  DISAGREEMENT {m}: {flags}")
    return 1 if disagreements else 0


if __name__ == "__main__":
    sys.exit(main())
