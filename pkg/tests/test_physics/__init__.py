"""
Tests for normal modes and equilibrium crystals.
"""
