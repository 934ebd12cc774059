#include "qimpact/fft.hpp"

#include <mutex>

namespace qimpact {

namespace {
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Dst1::Dst1(int n) : n_(n) {
  buf_ = fftw_alloc_real(n);
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_r2r_1d(n, buf_, buf_, FFTW_RODFT00, FFTW_ESTIMATE);
}

Dst1::~Dst1() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(plan_);
  fftw_free(buf_);
}

void Dst1::execute() { fftw_execute(plan_); }

std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in) {
  const int n = static_cast<int>(in.size());
  fftw_complex* buf = fftw_alloc_complex(n);
  for (int i = 0; i < n; ++i) {
    buf[i][0] = in[i].real();
    buf[i][1] = in[i].imag();
  }
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::vector<std::complex<double>> out(n);
  for (int i = 0; i < n; ++i) out[i] = {buf[i][0], buf[i][1]};
  {
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_destroy_plan(plan);
    fftw_free(buf);
  }
  return out;
}

}  // namespace qimpact
