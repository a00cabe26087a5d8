#pragma once

#include <complex>
#include <memory>
#include <utility>
#include <vector>

#include "css_peaks/grid.hpp"

namespace css {

namespace fft {

using Complex = std::complex<double>;

// FFTW-allocated buffer (SIMD aligned), freed on destruction.
template <class T>
class Buffer {
 public:
  explicit Buffer(std::size_t count);
  ~Buffer();
  Buffer(const Buffer&) = delete;
  Buffer& operator=(const Buffer&) = delete;
  Buffer(Buffer&& other) noexcept : data_(other.data_), size_(other.size_) {
    other.data_ = nullptr;
    other.size_ = 0;
  }
  Buffer& operator=(Buffer&& other) noexcept;

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  T& operator[](std::size_t k) { return data_[k]; }
  const T& operator[](std::size_t k) const { return data_[k]; }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

using RealBuffer = Buffer<double>;
using ComplexBuffer = Buffer<Complex>;

// Real-to-complex / complex-to-real plan pair for an m x m grid.  Plans are
// created once per size under a global lock and executed lock-free.
class Plan2D {
 public:
  explicit Plan2D(int m);
  ~Plan2D();
  Plan2D(const Plan2D&) = delete;
  Plan2D& operator=(const Plan2D&) = delete;

  int size() const { return m_; }
  std::size_t spectrum_size() const {
    return static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_ / 2 + 1);
  }
  std::size_t real_size() const { return static_cast<std::size_t>(m_) * static_cast<std::size_t>(m_); }

  /// Unnormalized forward transform.
  void forward(RealBuffer& in, ComplexBuffer& out) const;
  /// Unnormalized inverse transform; destroys `in`.
  void inverse(ComplexBuffer& in, RealBuffer& out) const;

 private:
  int m_;
  void* forward_ = nullptr;
  void* inverse_ = nullptr;
};

/// Cached plan for an m x m real transform.
std::shared_ptr<const Plan2D> plan(int m);

/// Number of threads used by subsequently created plans.
void set_threads(int threads);

/// Angular wavenumber of index `idx` on an m-point periodic grid of period `period`.
double wavenumber(int idx, int m, double period);

}  // namespace fft

/// Spectral gradient (ik multiplication, Nyquist derivative set to zero).
std::pair<ScalarField, ScalarField> spectral_gradient(const ScalarField& f);

/// Spectral Laplacian (-|k|^2 multiplication).
ScalarField spectral_laplacian(const ScalarField& f);

/// h^2 sum of |∇f|^2 evaluated in Fourier space with the Laplacian's symbol,
/// so that it is the exact quadratic form of -Δ.
double dirichlet_integral(const ScalarField& f);

/// Solves (-a Δ + b) x = f spectrally; requires a >= 0, b > 0.
ScalarField solve_screened(const ScalarField& f, double a, double b);

}  // namespace css
