#include "qoz/fft.hpp"

#include <fftw3.h>

#include <mutex>
#include <stdexcept>

namespace qoz {
namespace {
// FFTW plan creation mutates global state; execution does not.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

struct Fft::Impl {
  std::size_t n = 0;
  fftw_complex* in = nullptr;
  fftw_complex* out = nullptr;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;

  ~Impl() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
    if (in) fftw_free(in);
    if (out) fftw_free(out);
  }
};

Fft::Fft(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
Fft::~Fft() = default;
Fft::Fft(Fft&&) noexcept = default;
Fft& Fft::operator=(Fft&&) noexcept = default;

Fft Fft::make_1d(int n) {
  auto impl = std::make_unique<Impl>();
  impl->n = static_cast<std::size_t>(n);
  impl->in = fftw_alloc_complex(impl->n);
  impl->out = fftw_alloc_complex(impl->n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl->fwd = fftw_plan_dft_1d(n, impl->in, impl->out, FFTW_FORWARD, FFTW_ESTIMATE);
  impl->bwd = fftw_plan_dft_1d(n, impl->in, impl->out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return Fft(std::move(impl));
}

Fft Fft::make_2d(int n0, int n1) {
  auto impl = std::make_unique<Impl>();
  impl->n = static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1);
  impl->in = fftw_alloc_complex(impl->n);
  impl->out = fftw_alloc_complex(impl->n);
  std::lock_guard<std::mutex> lock(planner_mutex());
  impl->fwd = fftw_plan_dft_2d(n0, n1, impl->in, impl->out, FFTW_FORWARD, FFTW_ESTIMATE);
  impl->bwd = fftw_plan_dft_2d(n0, n1, impl->in, impl->out, FFTW_BACKWARD, FFTW_ESTIMATE);
  return Fft(std::move(impl));
}

std::size_t Fft::size() const { return impl_->n; }

namespace {
void run(fftw_plan plan, fftw_complex* ibuf, fftw_complex* obuf, std::size_t n,
         const std::vector<Complex>& in, std::vector<Complex>& out) {
  if (in.size() != n) throw std::invalid_argument("Fft: input size mismatch");
  out.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    ibuf[i][0] = in[i].real();
    ibuf[i][1] = in[i].imag();
  }
  fftw_execute(plan);
  for (std::size_t i = 0; i < n; ++i) out[i] = Complex(obuf[i][0], obuf[i][1]);
}
}  // namespace

void Fft::forward(const std::vector<Complex>& in, std::vector<Complex>& out) {
  run(impl_->fwd, impl_->in, impl_->out, impl_->n, in, out);
}

void Fft::backward(const std::vector<Complex>& in, std::vector<Complex>& out) {
  run(impl_->bwd, impl_->in, impl_->out, impl_->n, in, out);
}

}  // namespace qoz
