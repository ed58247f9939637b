#pragma once

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <mutex>
#include <vector>

namespace paultrap {

namespace detail {
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace detail

/// In-place forward/backward complex DFT of a fixed buffer (unnormalized, as
/// FFTW). Plans use FFTW_ESTIMATE so the chosen algorithm, and hence every
/// result bit, is the same on every run.
class FftBuffer {
 public:
  explicit FftBuffer(std::size_t n) : data_(n) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    auto* p = reinterpret_cast<fftw_complex*>(data_.data());
    const int len = static_cast<int>(n);
    forward_ = fftw_plan_dft_1d(len, p, p, FFTW_FORWARD, FFTW_ESTIMATE);
    backward_ = fftw_plan_dft_1d(len, p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }

  FftBuffer(const FftBuffer&) = delete;
  FftBuffer& operator=(const FftBuffer&) = delete;

  ~FftBuffer() {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(backward_);
  }

  std::vector<std::complex<double>>& data() noexcept { return data_; }
  const std::vector<std::complex<double>>& data() const noexcept { return data_; }

  void forward() noexcept { fftw_execute(forward_); }
  void backward() noexcept { fftw_execute(backward_); }

 private:
  std::vector<std::complex<double>> data_;
  fftw_plan forward_ = nullptr;
  fftw_plan backward_ = nullptr;
};

}  // namespace paultrap
