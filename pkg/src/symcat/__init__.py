"""Finite-category, group-equivariance and persistence tooling for symmetry-aware learning.

Submodules:

- ``fincat``: finite categories, functors, natural transformations, the truncated Hyp category
- ``symgrp``: finite groups, actions, representations, orbits, intertwiners
- ``enriched``: representation-enriched objects and morphisms
- ``equinet``: equivariant dense layers, weight tying, invariance fitting, adversarial checks
- ``optdyn``: fixed-point iteration, flows, convergence detection
- ``pinn``: a small physics-informed network for 1-D Poisson problems
- ``topo``: filtrations, persistence, bottleneck distance
- ``sobj``: simplicial objects and nerves
- ``documents`` / ``cli``: JSON documents and the ``symcat`` command
"""

__version__ = "0.1.0"
