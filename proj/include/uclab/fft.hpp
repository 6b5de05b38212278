#pragma once

#include <complex>
#include <span>

namespace uclab::fft {

/// In-place unnormalized DFT over a dim-dimensional cube of `points` per axis,
/// row-major with the last axis fastest. Sign -1 for forward, +1 for inverse.
void transform(std::span<std::complex<double>> data, int dim, int points, int sign);

inline void forward(std::span<std::complex<double>> data, int dim, int points) {
  transform(data, dim, points, -1);
}

inline void inverse(std::span<std::complex<double>> data, int dim, int points) {
  transform(data, dim, points, +1);
}

}  // namespace uclab::fft
