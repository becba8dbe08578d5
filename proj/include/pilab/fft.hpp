#pragma once
// Thin FFTW wrapper: cached plans, in-place c2c transforms, batched variant.
// Plans use FFTW_ESTIMATE so planning is deterministic run to run.

#include <complex>
#include <vector>

namespace pilab {

// Unnormalized DFT: out[k] = sum_j in[j] e^{-2 pi i j k / n} (sign = -1),
// sign = +1 for the unnormalized inverse.
void fft_raw(std::complex<double>* data, int n, int sign);

// Batched: `count` transforms of length n, consecutive in memory (dist = n).
void fft_raw_many(std::complex<double>* data, int n, int count, int sign);

}  // namespace pilab
