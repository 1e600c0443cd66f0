"""Bound evaluators, combinatorial constructions, nets and verification suites."""
