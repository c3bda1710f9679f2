"""VQE expressibility lab - statevector VQE for H2 with covering-number bounds of ansatz templates."""

__version__ = "1.0.0"
