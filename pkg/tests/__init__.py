"""Test suite for the VQE expressibility lab."""
