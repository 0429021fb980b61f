"""Maxwell equations on U(2) and their conformal symmetry."""
