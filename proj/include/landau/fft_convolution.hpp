#pragma once

// Free-space (zero-padded, non-circular) discrete convolution on an N^3 grid
// through real-to-complex FFTs of size (2N)^3. Backed by FFTW.

#include <fftw3.h>

#include <complex>
#include <cstddef>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <utility>

#include "landau/kernel.hpp"

namespace landau {

/// Owning buffer allocated with fftw_malloc so every array handed to the
/// new-array execute functions shares the planner's alignment.
template <class T>
class FftwArray {
 public:
  FftwArray() = default;
  explicit FftwArray(std::size_t count)
      : data_(static_cast<T*>(fftw_malloc(sizeof(T) * count))), size_(count) {
    if (!data_) throw std::bad_alloc();
    for (std::size_t i = 0; i < count; ++i) data_[i] = T{};
  }
  FftwArray(FftwArray&& other) noexcept : data_(std::exchange(other.data_, nullptr)), size_(std::exchange(other.size_, 0)) {}
  FftwArray& operator=(FftwArray&& other) noexcept {
    if (this != &other) {
      release();
      data_ = std::exchange(other.data_, nullptr);
      size_ = std::exchange(other.size_, 0);
    }
    return *this;
  }
  FftwArray(const FftwArray&) = delete;
  FftwArray& operator=(const FftwArray&) = delete;
  ~FftwArray() { release(); }

  T* data() { return data_; }
  const T* data() const { return data_; }
  std::size_t size() const { return size_; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

 private:
  void release() {
    if (data_) fftw_free(data_);
    data_ = nullptr;
  }
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

namespace detail {
// The FFTW planner is not thread-safe; execution with new arrays is.
inline std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}
struct PlanDeleter {
  void operator()(fftw_plan_s* p) const {
    std::lock_guard lock(fftw_planner_mutex());
    fftw_destroy_plan(p);
  }
};
using PlanHandle = std::unique_ptr<fftw_plan_s, PlanDeleter>;
}  // namespace detail

class FreeSpaceConvolver {
 public:
  using Spectrum = FftwArray<std::complex<double>>;

  explicit FreeSpaceConvolver(int cells) : cells_(cells) {
    const int m = extent();
    FftwArray<double> real(real_size());
    Spectrum complex(spectrum_size());
    auto* c = reinterpret_cast<fftw_complex*>(complex.data());
    std::lock_guard lock(detail::fftw_planner_mutex());
    forward_.reset(fftw_plan_dft_r2c_3d(m, m, m, real.data(), c, FFTW_ESTIMATE));
    backward_.reset(fftw_plan_dft_c2r_3d(m, m, m, c, real.data(), FFTW_ESTIMATE));
    if (!forward_ || !backward_) throw std::runtime_error("FFTW planning failed");
  }

  int cells() const { return cells_; }
  int extent() const { return 2 * cells_; }
  std::size_t real_size() const {
    const auto m = static_cast<std::size_t>(extent());
    return m * m * m;
  }
  std::size_t spectrum_size() const {
    const auto m = static_cast<std::size_t>(extent());
    return m * m * (m / 2 + 1);
  }

  Spectrum transform_lattice(const KernelLattice& lattice) const {
    if (lattice.cells() != cells_) throw std::invalid_argument("kernel lattice does not match convolver size");
    FftwArray<double> real(real_size());
    for (std::size_t i = 0; i < lattice.size(); ++i) real[i] = lattice[i];
    return forward(real);
  }

  /// Zero-pads an N^3 field (x fastest) into the (2N)^3 box and transforms it.
  Spectrum transform_field(std::span<const double> field) const {
    const auto n = static_cast<std::size_t>(cells_);
    if (field.size() != n * n * n) throw std::invalid_argument("field does not match convolver size");
    const auto m = static_cast<std::size_t>(extent());
    FftwArray<double> real(real_size());
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) real[i + m * (j + m * k)] = field[i + n * (j + n * k)];
    return forward(real);
  }

  /// out[v] = scale * sum_w kernel(v - w) field(w), restricted to the N^3 box.
  void convolve(const Spectrum& field, const Spectrum& kernel, std::span<double> out, double scale) const {
    const auto n = static_cast<std::size_t>(cells_);
    if (out.size() != n * n * n) throw std::invalid_argument("output does not match convolver size");
    Spectrum product(spectrum_size());
    for (std::size_t i = 0; i < product.size(); ++i) product[i] = field[i] * kernel[i];
    FftwArray<double> real(real_size());
    fftw_execute_dft_c2r(backward_.get(), reinterpret_cast<fftw_complex*>(product.data()), real.data());
    const auto m = static_cast<std::size_t>(extent());
    const double norm = scale / static_cast<double>(real_size());
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) out[i + n * (j + n * k)] = real[i + m * (j + m * k)] * norm;
  }

 private:
  Spectrum forward(FftwArray<double>& real) const {
    Spectrum out(spectrum_size());
    fftw_execute_dft_r2c(forward_.get(), real.data(), reinterpret_cast<fftw_complex*>(out.data()));
    return out;
  }

  int cells_;
  detail::PlanHandle forward_;
  detail::PlanHandle backward_;
};

}  // namespace landau
