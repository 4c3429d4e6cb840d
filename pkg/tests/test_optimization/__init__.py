"""
Tests for pulse-sequence search and sweeps.
"""
