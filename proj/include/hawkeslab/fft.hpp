#pragma once

#include <cstddef>
#include <vector>

namespace hawkeslab {

/// Linear convolution out[k] = sum_i a[i] * b[k-i], length a.size()+b.size()-1.
/// Uses FFTW above a size threshold, direct summation below. Thread-safe.
std::vector<double> convolve_full(const std::vector<double>& a, const std::vector<double>& b);

/// Causal correlation out[i] = sum_{d=0..i} kernel[d] * x[i-d], length x.size().
std::vector<double> convolve_causal(const std::vector<double>& x, const std::vector<double>& kernel);

}  // namespace hawkeslab
