#pragma once

// Thin RAII layer over FFTW. Plan creation is serialized through a process-wide
// mutex; plan execution with the new-array interface is thread-safe.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>

namespace hypolab::detail {

std::mutex& fftw_planner_mutex();

struct FftwPlanDeleter {
  void operator()(fftw_plan_s* p) const noexcept {
    if (p != nullptr) {
      std::lock_guard lock(fftw_planner_mutex());
      fftw_destroy_plan(p);
    }
  }
};
using FftwPlan = std::unique_ptr<fftw_plan_s, FftwPlanDeleter>;

struct FftwFree {
  void operator()(void* p) const noexcept { fftw_free(p); }
};

/// 16-byte (SIMD) aligned buffer so that every plan may be reused with any
/// buffer of the same kind.
template <class T>
class FftwBuffer {
 public:
  FftwBuffer() = default;
  explicit FftwBuffer(std::size_t n)
      : data_(static_cast<T*>(fftw_malloc(sizeof(T) * (n == 0 ? 1 : n)))), size_(n) {
    if (!data_) throw std::bad_alloc();
    for (std::size_t i = 0; i < n; ++i) data_.get()[i] = T{};
  }

  T* data() noexcept { return data_.get(); }
  const T* data() const noexcept { return data_.get(); }
  std::size_t size() const noexcept { return size_; }
  T& operator[](std::size_t i) noexcept { return data_.get()[i]; }
  const T& operator[](std::size_t i) const noexcept { return data_.get()[i]; }

  fftw_complex* as_fftw() noexcept
    requires std::is_same_v<T, std::complex<double>>
  {
    return reinterpret_cast<fftw_complex*>(data_.get());
  }

 private:
  std::unique_ptr<T, FftwFree> data_;
  std::size_t size_ = 0;
};

/// Batched 1D real transforms along the contiguous θ axis of a density field:
/// `howmany` profiles of length n, input stride 1, distance n; output distance n/2+1.
struct ThetaTransforms {
  ThetaTransforms(int n_theta, int howmany);
  void forward(double* in, std::complex<double>* out) const;
  void inverse(std::complex<double>* in, double* out) const;  // destroys `in`

  int n;
  int count;
  FftwPlan r2c;
  FftwPlan c2r;
};

/// Batched 2D real transforms over (x1, x2) for each θ slice of a density
/// field: input stride n_theta, distance 1; output laid out as
/// [k1][k2 < n_x/2+1][θ].
struct SpatialTransforms {
  SpatialTransforms(int n_x, int n_theta);
  void forward(double* in, std::complex<double>* out) const;
  void inverse(std::complex<double>* in, double* out) const;  // destroys `in`

  int n_x;
  int n_theta;
  FftwPlan r2c;
  FftwPlan c2r;
};

}  // namespace hypolab::detail
