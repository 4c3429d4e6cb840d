"""
Tests for the command line and run artifacts.
"""
