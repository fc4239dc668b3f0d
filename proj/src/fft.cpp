#include "fft_internal.hpp"

#include <fftw3.h>

#include <cmath>

namespace metaplectic::detail {

namespace {

fftw_complex* as_fftw(Eigen::VectorXcd& v) { return reinterpret_cast<fftw_complex*>(v.data()); }

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

}  // namespace

void fft_inplace(Eigen::VectorXcd& v, bool inverse) {
    const int n = static_cast<int>(v.size());
    if (n == 0) return;
    fftw_plan plan = fftw_plan_dft_1d(n, as_fftw(v), as_fftw(v),
                                      inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    if (inverse) v /= static_cast<double>(n);
}

void fft2_inplace(Eigen::VectorXcd& v, int n0, int n1, bool inverse) {
    if (v.size() == 0) return;
    fftw_plan plan = fftw_plan_dft_2d(n0, n1, as_fftw(v), as_fftw(v),
                                      inverse ? FFTW_BACKWARD : FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
    if (inverse) v /= static_cast<double>(n0) * static_cast<double>(n1);
}

Eigen::VectorXcd quadratic_phase_sum(const Eigen::VectorXcd& in, double theta) {
    using std::polar;
    const Eigen::Index n = in.size();
    if (n == 0) return in;

    const std::size_t m = next_pow2(2 * static_cast<std::size_t>(n) - 1);

    // a_j = in_j e^{-i theta j^2/2}, padded; b_l = e^{+i theta l^2/2} wrapped so
    // that circular convolution reproduces the linear one on [0, n).
    Eigen::VectorXcd a = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
    Eigen::VectorXcd b = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(m));
    for (Eigen::Index j = 0; j < n; ++j) {
        const double half = 0.5 * theta * static_cast<double>(j) * static_cast<double>(j);
        a[j] = in[j] * polar(1.0, -half);
        const std::complex<double> chirp = polar(1.0, half);
        b[j] = chirp;
        if (j > 0) b[static_cast<Eigen::Index>(m) - j] = chirp;
    }

    fft_inplace(a, false);
    fft_inplace(b, false);
    a.array() *= b.array();
    fft_inplace(a, true);

    Eigen::VectorXcd out(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double half = 0.5 * theta * static_cast<double>(k) * static_cast<double>(k);
        out[k] = a[k] * polar(1.0, -half);
    }
    return out;
}

}  // namespace metaplectic::detail
