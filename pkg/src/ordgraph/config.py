"""Tunable size guards and defaults.

Tests may monkeypatch these; library code reads them at call time unless an
explicit argument overrides them.
"""

# Hard cap on graph size; counting and repair are O(n^3)-class at worst.
MAX_GRAPH_VERTICES = 100_000

# Generic copy counting enumerates O(n^v(f)) candidate tuples.
MAX_PATTERN_VERTICES = 8

# Exhaustive homomorphism search / core search guards.
MAX_HOM_VERTICES = 12
MAX_CORE_VERTICES = 10

# Unspecified absolute constants; they only gate advisory checks.
SEQUENCE_REMOVAL_CONSTANT = 1  # c_k in the sequence-hitting count bound
INTERVAL_PARTITION_CONSTANT = 1  # c_3/64 analogue used by interval partition
SOLUTION_FREE_CONSTANT = 1  # c_k in the solution-free set size target
