"""
Tests for the Fermi-Hubbard gate budget.
"""
