"""Independent reference engines for the spectral pipeline."""
from .ed import DiscretizedBath, ed_hamiltonian, ed_simulate
from .hilbert import pv_hilbert
from .volterra import MemoryKernel, volterra_solve

__all__ = [
    "DiscretizedBath",
    "MemoryKernel",
    "ed_hamiltonian",
    "ed_simulate",
    "pv_hilbert",
    "volterra_solve",
]
