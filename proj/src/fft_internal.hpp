#pragma once

#include <Eigen/Dense>
#include <complex>

namespace metaplectic::detail {

/// Unnormalized forward DFT / normalized (1/n) inverse DFT, any length.
void fft_inplace(Eigen::VectorXcd& v, bool inverse);

/// Forward 2-D DFT on row-major data (n0 slow, n1 fast); inverse divides by n0*n1.
void fft2_inplace(Eigen::VectorXcd& v, int n0, int n1, bool inverse);

/// out[k] = sum_{j=0}^{N-1} in[j] * exp(-i * theta * j * k) for k = 0..N-1,
/// evaluated in O(N log N) by Bluestein's chirp decomposition
/// jk = (j^2 + k^2 - (k-j)^2) / 2. Exact for any real theta (no grid
/// commensurability requirement).
Eigen::VectorXcd quadratic_phase_sum(const Eigen::VectorXcd& in, double theta);

}  // namespace metaplectic::detail
