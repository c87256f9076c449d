#include "ncpa/grid_kernels.hpp"

#include <omp.h>

#include <array>
#include <exception>
#include <mutex>

#include "ncpa/errors.hpp"

namespace ncpa {

namespace {

constexpr std::size_t kMaxDim = 8;

bool nested() { return omp_in_parallel() != 0; }

// OpenMP regions must not leak exceptions; the first one is rethrown after
// the loop.
class ExceptionSlot {
 public:
  template <class Body>
  void run(Body&& body) {
    try {
      body();
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
  }
  void rethrow() const {
    if (error_) std::rethrow_exception(error_);
  }

 private:
  std::mutex mutex_;
  std::exception_ptr error_;
};

void check_dim(const GridSpec& grid) {
  if (grid.dimension() > kMaxDim) throw InvalidArgument("grid dimension too large");
}

}  // namespace

std::vector<double> sample_serial(const Callback& f, const GridSpec& grid) {
  check_dim(grid);
  std::vector<double> values(grid.size());
  std::array<double, kMaxDim> y{};
  const std::span<double> view(y.data(), grid.dimension());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, view);
    values[k] = f(view);
  }
  return values;
}

std::vector<double> sample_parallel(const Callback& f, const GridSpec& grid) {
  check_dim(grid);
  std::vector<double> values(grid.size());
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
  ExceptionSlot slot;
#pragma omp parallel
  {
    std::array<double, kMaxDim> y{};
    const std::span<double> view(y.data(), grid.dimension());
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      slot.run([&] {
        grid.point(static_cast<std::size_t>(k), view);
        values[static_cast<std::size_t>(k)] = f(view);
      });
    }
  }
  slot.rethrow();
  return values;
}

std::vector<double> sample(const Callback& f, const GridSpec& grid, Execution exec) {
  if (exec == Execution::serial || nested()) return sample_serial(f, grid);
  return sample_parallel(f, grid);
}

void add_shifted_quadratic_serial(std::span<const double> base, const GridSpec& grid,
                                  double s, PointView x, std::span<double> out) {
  check_dim(grid);
  std::array<double, kMaxDim> y{};
  const std::span<double> view(y.data(), grid.dimension());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    grid.point(k, view);
    double sq = 0.0;
    for (std::size_t d = 0; d < view.size(); ++d) sq += (view[d] - x[d]) * (view[d] - x[d]);
    out[k] = base[k] + 0.5 * s * sq;
  }
}

void add_shifted_quadratic_parallel(std::span<const double> base, const GridSpec& grid,
                                    double s, PointView x, std::span<double> out) {
  check_dim(grid);
  const auto n = static_cast<std::ptrdiff_t>(grid.size());
#pragma omp parallel
  {
    std::array<double, kMaxDim> y{};
    const std::span<double> view(y.data(), grid.dimension());
#pragma omp for schedule(static)
    for (std::ptrdiff_t k = 0; k < n; ++k) {
      const auto i = static_cast<std::size_t>(k);
      grid.point(i, view);
      double sq = 0.0;
      for (std::size_t d = 0; d < view.size(); ++d) sq += (view[d] - x[d]) * (view[d] - x[d]);
      out[i] = base[i] + 0.5 * s * sq;
    }
  }
}

void add_shifted_quadratic(std::span<const double> base, const GridSpec& grid, double s,
                           PointView x, std::span<double> out, Execution exec) {
  if (base.size() != grid.size() || out.size() != grid.size()) {
    throw InvalidArgument("sample count does not match grid");
  }
  if (exec == Execution::serial || nested()) {
    add_shifted_quadratic_serial(base, grid, s, x, out);
  } else {
    add_shifted_quadratic_parallel(base, grid, s, x, out);
  }
}

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    Execution exec) {
  if (exec == Execution::serial || nested()) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  ExceptionSlot slot;
  const auto count = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    slot.run([&] { body(static_cast<std::size_t>(i)); });
  }
  slot.rethrow();
}

}  // namespace ncpa
