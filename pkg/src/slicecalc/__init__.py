"""Slice-hyperholomorphic functional calculi for quaternionic matrices and paravector operators."""

__version__ = "0.1.0"

from .algebra import E0, E1, E2, E3, H, CliffordElement, Paravector, Quaternion, clifford  # noqa: E402
from .calculus import CalculusReport, apply, apply_all, hinf_calculus, omega_calculus  # noqa: E402
from .cliffordop import ParavectorOperator, clifford_calculus, clifford_s_spectrum, dirac_demo  # noqa: E402
from .errors import SliceCalcError  # noqa: E402
from .qmatrix import AlgebraMatrix, QMatrix  # noqa: E402
from .slicefn import SliceFunction, catalog  # noqa: E402
from .spectrum import SSpectrum, s_spectrum  # noqa: E402

__all__ = [
    "AlgebraMatrix", "CalculusReport", "CliffordElement", "E0", "E1", "E2", "E3", "H", "Paravector",
    "ParavectorOperator", "QMatrix", "Quaternion", "SSpectrum", "SliceCalcError", "SliceFunction", "apply",
    "apply_all", "catalog", "clifford", "clifford_calculus", "clifford_s_spectrum", "dirac_demo",
    "hinf_calculus", "omega_calculus", "s_spectrum",
]
