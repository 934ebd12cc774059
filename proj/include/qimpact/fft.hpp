#ifndef QIMPACT_FFT_HPP
#define QIMPACT_FFT_HPP

#include <complex>
#include <vector>

#include <fftw3.h>

namespace qimpact {

/// DST-I (FFTW RODFT00) of n interior samples, with an owned work buffer.
/// The raw transform is unnormalized: applying it twice multiplies by
/// 2(n+1). Plan creation is serialized internally; execution is not, so
/// give each worker its own instance.
class Dst1 {
 public:
  explicit Dst1(int n);
  ~Dst1();
  Dst1(const Dst1&) = delete;
  Dst1& operator=(const Dst1&) = delete;

  int size() const { return n_; }
  double* buffer() { return buf_; }
  void execute();

 private:
  int n_;
  double* buf_;
  fftw_plan plan_;
};

/// Complex DFT, forward (negative exponent). Convenience wrapper for the
/// diagnostics and Wigner paths; not meant for inner loops.
std::vector<std::complex<double>> fft_forward(const std::vector<std::complex<double>>& in);

}  // namespace qimpact

#endif
