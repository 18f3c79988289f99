"""Hamiltonian spectral estimation from sampled evolution signals.

Three signal sources (classical Monte Carlo imaginary-time sampling for
stoquastic Hamiltonians, simulated overlap-test real-time sampling, and
a dequantized decaying signal for general local Hamiltonians) feed a
common ESPRIT/matrix-pencil post-processing stage with checkable
recovery-bound predicates.
"""

__version__ = "0.1.0"
