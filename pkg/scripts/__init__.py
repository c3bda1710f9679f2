"""Standalone data-generation scripts."""
