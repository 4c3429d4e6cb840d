"""
Tests for the donor-gate scaling study.
"""
