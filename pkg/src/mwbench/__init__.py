"""mwbench: a workbench for canonical heights on elliptic curves,
Mordell-Weil lattices, packing and covering certificates, exact degree
calculus, and the staged point-counting pipeline they feed."""

from .elliptic import (
    ECPoint,
    EllipticCurveQ,
    HeightValue,
    INFINITY,
    add,
    canonical_height,
    is_torsion,
    multiply,
    naive_height,
    negate,
    nt_pairing,
    point,
    subtract,
)
from .errors import (
    CertificateError,
    DiagnosticError,
    InputError,
    ResourceError,
    WorkbenchError,
)
from .lattice import MWLattice, cosine, enumerate_ball, height, lattice_from_curve, norm, pairing

__all__ = [
    "ECPoint",
    "EllipticCurveQ",
    "HeightValue",
    "INFINITY",
    "MWLattice",
    "add",
    "canonical_height",
    "cosine",
    "enumerate_ball",
    "height",
    "is_torsion",
    "lattice_from_curve",
    "multiply",
    "naive_height",
    "negate",
    "norm",
    "nt_pairing",
    "pairing",
    "point",
    "subtract",
    "CertificateError",
    "DiagnosticError",
    "InputError",
    "ResourceError",
    "WorkbenchError",
]

__version__ = "0.1.0"
