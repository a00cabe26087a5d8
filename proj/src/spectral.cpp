#include "css_peaks/spectral.hpp"

#include <cstring>
#include <map>
#include <mutex>
#include <numbers>

#include <fftw3.h>

#include "css_peaks/error.hpp"

namespace css {

namespace fft {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int& thread_count() {
  static int threads = 1;
  return threads;
}

bool& threads_initialized() {
  static bool init = false;
  return init;
}

}  // namespace

template <class T>
Buffer<T>::Buffer(std::size_t count) : size_(count) {
  data_ = static_cast<T*>(fftw_malloc(sizeof(T) * count));
  if (data_ == nullptr && count > 0) throw std::bad_alloc();
}

template <class T>
Buffer<T>::~Buffer() {
  if (data_ != nullptr) fftw_free(data_);
}

template <class T>
Buffer<T>& Buffer<T>::operator=(Buffer&& other) noexcept {
  if (this != &other) {
    if (data_ != nullptr) fftw_free(data_);
    data_ = other.data_;
    size_ = other.size_;
    other.data_ = nullptr;
    other.size_ = 0;
  }
  return *this;
}

template class Buffer<double>;
template class Buffer<Complex>;

Plan2D::Plan2D(int m) : m_(m) {
  RealBuffer real(real_size());
  ComplexBuffer spec(spectrum_size());
  std::lock_guard lock(planner_mutex());
  if (thread_count() > 1) {
    if (!threads_initialized()) {
      fftw_init_threads();
      threads_initialized() = true;
    }
    fftw_plan_with_nthreads(thread_count());
  }
  // FFTW_ESTIMATE keeps plans (and hence results) reproducible run to run.
  forward_ = fftw_plan_dft_r2c_2d(m, m, real.data(), reinterpret_cast<fftw_complex*>(spec.data()),
                                  FFTW_ESTIMATE);
  inverse_ = fftw_plan_dft_c2r_2d(m, m, reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                  FFTW_ESTIMATE);
  if (forward_ == nullptr || inverse_ == nullptr) throw Error("FFTW planning failed");
}

Plan2D::~Plan2D() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_));
}

void Plan2D::forward(RealBuffer& in, ComplexBuffer& out) const {
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_), in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void Plan2D::inverse(ComplexBuffer& in, RealBuffer& out) const {
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_), reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
}

std::shared_ptr<const Plan2D> plan(int m) {
  static std::mutex cache_mutex;
  static std::map<int, std::shared_ptr<const Plan2D>> cache;
  std::lock_guard lock(cache_mutex);
  auto it = cache.find(m);
  if (it != cache.end()) return it->second;
  auto created = std::make_shared<const Plan2D>(m);
  cache.emplace(m, created);
  return created;
}

void set_threads(int threads) {
  std::lock_guard lock(planner_mutex());
  thread_count() = threads < 1 ? 1 : threads;
}

double wavenumber(int idx, int m, double period) {
  const int freq = idx <= m / 2 ? idx : idx - m;
  return 2.0 * std::numbers::pi * freq / period;
}

}  // namespace fft

namespace {

using fft::Complex;

struct Transformed {
  std::shared_ptr<const fft::Plan2D> plan;
  fft::ComplexBuffer spec;
};

Transformed transform(const ScalarField& f) {
  auto p = fft::plan(f.n());
  fft::RealBuffer in(p->real_size());
  std::memcpy(in.data(), f.values().data(), sizeof(double) * p->real_size());
  fft::ComplexBuffer out(p->spectrum_size());
  p->forward(in, out);
  return {std::move(p), std::move(out)};
}

ScalarField back(const Grid2D& grid, const fft::Plan2D& plan, fft::ComplexBuffer& spec) {
  fft::RealBuffer out(plan.real_size());
  plan.inverse(spec, out);
  ScalarField result(grid);
  const double scale = 1.0 / static_cast<double>(plan.real_size());
  for (std::size_t k = 0; k < plan.real_size(); ++k) result[k] = out[k] * scale;
  return result;
}

// Visits every half-spectrum entry with its (k1, k2) and Nyquist flags.
template <class Fn>
void for_each_mode(const Grid2D& grid, Fn&& fn) {
  const int n = grid.n;
  const int half = n / 2 + 1;
  const double period = 2.0 * grid.L;
  for (int j = 0; j < n; ++j) {
    const double k2 = fft::wavenumber(j, n, period);
    const bool nyq2 = (j == n / 2);
    for (int i = 0; i < half; ++i) {
      const double k1 = fft::wavenumber(i, n, period);
      const bool nyq1 = (i == n / 2);
      fn(static_cast<std::size_t>(j) * half + i, k1, k2, nyq1, nyq2, i);
    }
  }
}

}  // namespace

std::pair<ScalarField, ScalarField> spectral_gradient(const ScalarField& f) {
  auto t = transform(f);
  fft::ComplexBuffer d1(t.spec.size());
  fft::ComplexBuffer d2(t.spec.size());
  const Complex I(0.0, 1.0);
  for_each_mode(f.grid(), [&](std::size_t idx, double k1, double k2, bool nyq1, bool nyq2, int) {
    d1[idx] = nyq1 ? Complex(0.0) : I * k1 * t.spec[idx];
    d2[idx] = nyq2 ? Complex(0.0) : I * k2 * t.spec[idx];
  });
  return {back(f.grid(), *t.plan, d1), back(f.grid(), *t.plan, d2)};
}

ScalarField spectral_laplacian(const ScalarField& f) {
  auto t = transform(f);
  for_each_mode(f.grid(), [&](std::size_t idx, double k1, double k2, bool, bool, int) {
    t.spec[idx] *= -(k1 * k1 + k2 * k2);
  });
  return back(f.grid(), *t.plan, t.spec);
}

double dirichlet_integral(const ScalarField& f) {
  auto t = transform(f);
  const int n = f.n();
  double acc = 0.0;
  for_each_mode(f.grid(), [&](std::size_t idx, double k1, double k2, bool, bool, int i) {
    // Columns other than 0 and n/2 stand for a conjugate pair.
    const double weight = (i == 0 || i == n / 2) ? 1.0 : 2.0;
    acc += weight * (k1 * k1 + k2 * k2) * std::norm(t.spec[idx]);
  });
  return acc * f.grid().cell_area() / static_cast<double>(f.size());
}

ScalarField solve_screened(const ScalarField& f, double a, double b) {
  if (!(a >= 0.0) || !(b > 0.0)) throw PreconditionError("solve_screened: need a >= 0, b > 0");
  auto t = transform(f);
  for_each_mode(f.grid(), [&](std::size_t idx, double k1, double k2, bool, bool, int) {
    t.spec[idx] /= a * (k1 * k1 + k2 * k2) + b;
  });
  return back(f.grid(), *t.plan, t.spec);
}

}  // namespace css
