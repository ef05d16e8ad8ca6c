"""spindrive: laser-driven spin dynamics through an effective magnetic
operator, with cross-validated Schrodinger-picture propagation."""

__version__ = "0.1.0"
