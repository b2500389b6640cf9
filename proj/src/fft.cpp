#include "fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <memory>
#include <mutex>

#include "actimetry/errors.hpp"

namespace actimetry::detail {

namespace {

// FFTW's planner is not thread safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_buffer(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (!p) throw InternalError("fftw_malloc failed");
  return std::unique_ptr<T[], FftwFree>(p);
}

class Plan {
 public:
  explicit Plan(fftw_plan p) : plan_(p) {
    if (!plan_) throw InternalError("FFTW plan creation failed");
  }
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  Plan(const Plan&) = delete;
  Plan& operator=(const Plan&) = delete;
  void execute() const { fftw_execute(plan_); }

 private:
  fftw_plan plan_;
};

}  // namespace

std::vector<std::complex<double>> real_forward_fft(std::span<const double> x, std::size_t length) {
  if (length < x.size() || length == 0) throw InternalError("real_forward_fft: bad transform length");
  const std::size_t bins = length / 2 + 1;
  auto in = fftw_buffer<double>(length);
  auto out = fftw_buffer<fftw_complex>(bins);

  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_r2c_1d(static_cast<int>(length), in.get(), out.get(), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  std::copy(x.begin(), x.end(), in.get());
  std::fill(in.get() + x.size(), in.get() + length, 0.0);
  plan.execute();

  std::vector<std::complex<double>> result(bins);
  for (std::size_t k = 0; k < bins; ++k) result[k] = {out[k][0], out[k][1]};
  return result;
}

std::vector<double> half_spectrum_inverse_fft(std::span<const std::complex<double>> half, std::size_t length) {
  const std::size_t bins = length / 2 + 1;
  if (half.size() != bins) throw InternalError("half_spectrum_inverse_fft: bin count mismatch");
  auto in = fftw_buffer<fftw_complex>(bins);
  auto out = fftw_buffer<double>(length);

  fftw_plan raw;
  {
    std::lock_guard lock(planner_mutex());
    raw = fftw_plan_dft_c2r_1d(static_cast<int>(length), in.get(), out.get(), FFTW_ESTIMATE);
  }
  Plan plan(raw);
  for (std::size_t k = 0; k < bins; ++k) {
    in[k][0] = half[k].real();
    in[k][1] = half[k].imag();
  }
  plan.execute();
  return std::vector<double>(out.get(), out.get() + length);
}

}  // namespace actimetry::detail
