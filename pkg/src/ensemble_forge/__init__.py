"""ensemble-forge: classical random matrix ensembles from matrix-factorization
coordinate systems on symmetric spaces, with root-system joint densities and a
numerical verification layer for the underlying Lie-algebra machinery."""

from .matcore import DenseMatrix, FieldTag, RngState

__version__ = "0.1.0"

__all__ = ["DenseMatrix", "FieldTag", "RngState", "__version__"]
