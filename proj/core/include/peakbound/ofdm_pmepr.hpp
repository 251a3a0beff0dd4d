#pragma once

// Deterministic signal analysis: PAPR of a discrete waveform, the baseband
// OFDM envelope s_b(t) = (1/sqrt(n)) sum_k x_k e^{2 pi i k t / n}, PMEPR via
// grid oversampling (a lower approximation converging from below), the DFT
// peak lower bound, and post-rotation peak norms.

#include <complex>
#include <stdexcept>
#include <vector>

namespace peakbound {

using RealCodeword = std::vector<double>;
using ComplexCodeword = std::vector<std::complex<double>>;

/// n x n real orthogonal (or complex unitary) rotation. Columns checked
/// orthonormal to 1e-10 on construction.
class OrthogonalRotation {
  public:
    explicit OrthogonalRotation(std::vector<std::vector<std::complex<double>>> rows);

    /// Normalized Hadamard matrix (n a power of two).
    static OrthogonalRotation hadamard(int n);
    static OrthogonalRotation identity(int n);

    int dim() const { return static_cast<int>(rows_.size()); }
    ComplexCodeword apply(const ComplexCodeword& x) const;
    ComplexCodeword apply(const RealCodeword& x) const;

  private:
    std::vector<std::vector<std::complex<double>>> rows_;
};

/// max |x_j|^2 / ((1/n) sum |x_j|^2). Always >= 1. Throws on the zero vector.
double papr(const RealCodeword& x);
double papr(const ComplexCodeword& x);

/// Baseband envelope at (possibly fractional) time t in [0, n).
std::complex<double> baseband_envelope(const ComplexCodeword& x, double t);

struct PmeprOptions {
    bool refine = false;      // golden-section polish around the grid maximizer
    double refine_tol = 1e-10; // in t
};

/// PMEPR over the oversampled grid t in {j/L}. Converges to the
/// continuous-time PMEPR from below as L grows.
double pmepr(const ComplexCodeword& x, int oversampling, const PmeprOptions& opts = {});

/// ||F x||_inf^2 / ((1/n)||x||_2^2) with F the unitary DFT matrix; a lower
/// bound on pmepr(x, L) for every L.
double dft_peak_lower_bound(const ComplexCodeword& x);

/// max coordinate magnitude of U x.
double rotated_peak(const RealCodeword& x, const OrthogonalRotation& U);
double rotated_peak(const ComplexCodeword& x, const OrthogonalRotation& U);

} // namespace peakbound
