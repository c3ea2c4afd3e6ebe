#pragma once

#include <complex>
#include <vector>

namespace horizonwave::detail {

/// In-place multi-dimensional complex DFT of `data` laid out row-major with
/// shape `shape`. Forward: unnormalized exp(-i k x). Backward: exp(+i k x),
/// also unnormalized. Safe to call concurrently; plans are cached per shape.
void fft_forward(std::vector<std::complex<double>>& data, const std::vector<int>& shape);
void fft_backward(std::vector<std::complex<double>>& data, const std::vector<int>& shape);

}  // namespace horizonwave::detail
