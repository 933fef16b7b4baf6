"""Exact construction and integrality certification of hypergeometric mirror maps."""

__version__ = "0.1.0"

from .padic import INF, harmonic, theta, vp_int, vp_rat
from .series import TruncSeries, LogSeries
from .report import CertReport
from .coefficients import HyperSpec, ZudilinData, bN, bbN, bVec, bbVec, hN, zudilin_data
from .maps import MirrorInstance, build_bold_q, build_qLN, build_qN, build_q_tilde
from .certify import certify_theorem, empirical_max_root, omega_cap, xi

__all__ = [
    "INF", "harmonic", "theta", "vp_int", "vp_rat",
    "TruncSeries", "LogSeries", "CertReport",
    "HyperSpec", "ZudilinData", "bN", "bbN", "bVec", "bbVec", "hN", "zudilin_data",
    "MirrorInstance", "build_bold_q", "build_qLN", "build_qN", "build_q_tilde",
    "certify_theorem", "empirical_max_root", "omega_cap", "xi",
]
