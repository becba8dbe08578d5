#include "pilab/fft.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>

namespace pilab {

namespace {

std::mutex plan_mutex;

// FFTW plans are reusable across arrays via fftw_execute_dft as long as
// alignment matches; we plan once per (n, sign, count) on a scratch buffer.
struct PlanCache {
  std::map<std::tuple<int, int, int>, fftw_plan> plans;
  fftw_complex* scratch = nullptr;
  size_t scratch_len = 0;

  fftw_plan get(int n, int count, int sign) {
    auto key = std::make_tuple(n, count, sign);
    auto it = plans.find(key);
    if (it != plans.end()) return it->second;
    size_t need = static_cast<size_t>(n) * count;
    if (need > scratch_len) {
      if (scratch) fftw_free(scratch);
      scratch = fftw_alloc_complex(need);
      scratch_len = need;
    }
    // FFTW_UNALIGNED so the plan accepts caller buffers of any alignment
    // (we execute on std::vector storage, not fftw_malloc'd arrays).
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p;
    if (count == 1) {
      p = fftw_plan_dft_1d(n, scratch, scratch, sign, flags);
    } else {
      int dims[1] = {n};
      p = fftw_plan_many_dft(1, dims, count, scratch, nullptr, 1, n, scratch,
                             nullptr, 1, n, sign, flags);
    }
    plans[key] = p;
    return p;
  }
};

PlanCache& cache() {
  static PlanCache c;
  return c;
}

}  // namespace

void fft_raw(std::complex<double>* data, int n, int sign) {
  fft_raw_many(data, n, 1, sign);
}

void fft_raw_many(std::complex<double>* data, int n, int count, int sign) {
  std::lock_guard<std::mutex> lock(plan_mutex);
  fftw_plan p = cache().get(n, count, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  fftw_execute_dft(p, reinterpret_cast<fftw_complex*>(data),
                   reinterpret_cast<fftw_complex*>(data));
}

}  // namespace pilab
