#include "hypolab/spectral.hpp"

#include <stdexcept>

#include "fftw_handle.hpp"

namespace hypolab {
namespace detail {

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

ThetaTransforms::ThetaTransforms(int n_theta, int howmany) : n(n_theta), count(howmany) {
  const int half = n / 2 + 1;
  FftwBuffer<double> re(static_cast<std::size_t>(n) * howmany);
  FftwBuffer<std::complex<double>> co(static_cast<std::size_t>(half) * howmany);
  int dims[1] = {n};
  std::lock_guard lock(fftw_planner_mutex());
  r2c.reset(fftw_plan_many_dft_r2c(1, dims, howmany, re.data(), nullptr, 1, n, co.as_fftw(),
                                   nullptr, 1, half, FFTW_ESTIMATE));
  c2r.reset(fftw_plan_many_dft_c2r(1, dims, howmany, co.as_fftw(), nullptr, 1, half, re.data(),
                                   nullptr, 1, n, FFTW_ESTIMATE));
  if (!r2c || !c2r) throw std::runtime_error("FFTW failed to create θ plans");
}

void ThetaTransforms::forward(double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(r2c.get(), in, reinterpret_cast<fftw_complex*>(out));
}

void ThetaTransforms::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(c2r.get(), reinterpret_cast<fftw_complex*>(in), out);
}

SpatialTransforms::SpatialTransforms(int nx, int nt) : n_x(nx), n_theta(nt) {
  const int half = n_x / 2 + 1;
  const std::size_t real_size = static_cast<std::size_t>(n_x) * n_x * n_theta;
  const std::size_t complex_size = static_cast<std::size_t>(n_x) * half * n_theta;
  FftwBuffer<double> re(real_size);
  FftwBuffer<std::complex<double>> co(complex_size);
  int dims[2] = {n_x, n_x};
  int real_embed[2] = {n_x, n_x};
  int complex_embed[2] = {n_x, half};
  std::lock_guard lock(fftw_planner_mutex());
  r2c.reset(fftw_plan_many_dft_r2c(2, dims, n_theta, re.data(), real_embed, n_theta, 1,
                                   co.as_fftw(), complex_embed, n_theta, 1, FFTW_ESTIMATE));
  c2r.reset(fftw_plan_many_dft_c2r(2, dims, n_theta, co.as_fftw(), complex_embed, n_theta, 1,
                                   re.data(), real_embed, n_theta, 1, FFTW_ESTIMATE));
  if (!r2c || !c2r) throw std::runtime_error("FFTW failed to create spatial plans");
}

void SpatialTransforms::forward(double* in, std::complex<double>* out) const {
  fftw_execute_dft_r2c(r2c.get(), in, reinterpret_cast<fftw_complex*>(out));
}

void SpatialTransforms::inverse(std::complex<double>* in, double* out) const {
  fftw_execute_dft_c2r(c2r.get(), reinterpret_cast<fftw_complex*>(in), out);
}

}  // namespace detail

namespace {

struct FullTransform {
  explicit FullTransform(const GridSpec& g)
      : buffer(g.size()) {
    std::lock_guard lock(detail::fftw_planner_mutex());
    fwd.reset(fftw_plan_dft_3d(g.n_x(), g.n_x(), g.n_theta(), buffer.as_fftw(), buffer.as_fftw(),
                               FFTW_FORWARD, FFTW_ESTIMATE));
    bwd.reset(fftw_plan_dft_3d(g.n_x(), g.n_x(), g.n_theta(), buffer.as_fftw(), buffer.as_fftw(),
                               FFTW_BACKWARD, FFTW_ESTIMATE));
    if (!fwd || !bwd) throw std::runtime_error("FFTW failed to create 3D plans");
  }
  detail::FftwBuffer<std::complex<double>> buffer;
  detail::FftwPlan fwd;
  detail::FftwPlan bwd;
};

}  // namespace

SpectralField transform_forward(const DensityField& f) {
  const GridSpec& g = f.grid();
  if (f.values().size() != g.size()) throw std::invalid_argument("field dimensions do not match grid");
  FullTransform t(g);
  auto v = f.values();
  for (std::size_t i = 0; i < v.size(); ++i) t.buffer[i] = v[i];
  fftw_execute(t.fwd.get());
  SpectralField out(g);
  const double scale = 1.0 / static_cast<double>(g.size());
  auto c = out.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = t.buffer[i] * scale;
  return out;
}

DensityField transform_inverse(const SpectralField& coefficients) {
  const GridSpec& g = coefficients.grid();
  if (coefficients.coefficients().size() != g.size()) {
    throw std::invalid_argument("coefficient dimensions do not match grid");
  }
  FullTransform t(g);
  auto c = coefficients.coefficients();
  for (std::size_t i = 0; i < c.size(); ++i) t.buffer[i] = c[i];
  fftw_execute(t.bwd.get());
  DensityField out(g);
  auto v = out.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = t.buffer[i].real();
  return out;
}

}  // namespace hypolab
