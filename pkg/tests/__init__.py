"""Test package for fpcensus."""
