"""
Tests for gate evaluation, trajectories and gate chains.
"""
