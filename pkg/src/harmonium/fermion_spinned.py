"""Closed-shell spinned harmonium: 2N fermions, every spatial orbital doubly occupied.

The one-body density is block diagonal in spin with two equal blocks.  Each
block has the spinless form with the Gaussian reduction done over all 2N
particles but only N Hermite terms, and carries trace 1/2.
"""
from __future__ import annotations

from dataclasses import dataclass

from .fermion_spinless import OneBodyKernel, assemble_kernel, kernel_params
from .model import Frequencies


@dataclass(frozen=True)
class SpinnedKernelParams:
    a: float
    b_2n: float
    c_tilde: float
    a_prime: float
    beta_sq_2n: float
    n_pairs: int


@dataclass(frozen=True)
class SpinBlockKernel:
    """Spin-up block of the one-body density; the spin-down block is identical."""

    up_block: OneBodyKernel
    n_pairs: int

    @property
    def down_block(self) -> OneBodyKernel:
        return self.up_block

    def __call__(self, r, rp):
        return self.up_block(r, rp)

    def total_trace(self) -> float:
        return 2.0 * self.up_block.integrated_trace()

    def trace_of_square(self) -> float:
        """Tr[rho^2] of the full spin-resolved density (two equal blocks)."""
        return 2.0 * self.up_block.trace_of_square()


def spinned_kernel_params(freqs: Frequencies, n_pairs: int) -> SpinnedKernelParams:
    """Kernel parameters for 2N particles; ``freqs`` must come from n_total = 2N."""
    p = kernel_params(freqs, 2 * n_pairs)
    return SpinnedKernelParams(
        a=p.a, b_2n=p.b_n, c_tilde=p.c_n, a_prime=p.a_n, beta_sq_2n=p.beta_sq, n_pairs=n_pairs
    )


def _block_norm(n_pairs: int):
    # (1/(2 pi)) N^{-1/2} sqrt(2 omega mu / ((2N-1) omega + mu)) times the sqrt(pi) of the u integral
    def norm(ar, w, mu, denom):
        return 1 / (2 * ar.sqrt(ar.pi * n_pairs)) * ar.sqrt(2 * w * mu / denom)

    return norm


def spinned_block(freqs: Frequencies, n_pairs: int) -> SpinBlockKernel:
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    block = assemble_kernel(freqs, 2 * n_pairs, n_pairs, 0.5, _block_norm(n_pairs))
    return SpinBlockKernel(block, n_pairs)


def spinned_purity(freqs: Frequencies, n_pairs: int) -> float:
    """2N Tr[rho^2] with rho the full spin-resolved density."""
    return 2 * n_pairs * spinned_block(freqs, n_pairs).trace_of_square()


def spinned_linear_entropy(freqs: Frequencies, n_pairs: int) -> float:
    return 1.0 - spinned_purity(freqs, n_pairs)
