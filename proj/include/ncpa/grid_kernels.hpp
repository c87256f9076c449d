#ifndef NCPA_GRID_KERNELS_HPP_
#define NCPA_GRID_KERNELS_HPP_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "ncpa/funcspace.hpp"

namespace ncpa {

// Every data-parallel loop in the library goes through these kernels. The
// serial variants are the reference: the OpenMP variants must reproduce them
// bit for bit, since each element is computed independently.
enum class Execution { serial, parallel };

std::vector<double> sample_serial(const Callback& f, const GridSpec& grid);
std::vector<double> sample_parallel(const Callback& f, const GridSpec& grid);
std::vector<double> sample(const Callback& f, const GridSpec& grid,
                           Execution exec = Execution::parallel);

// out[k] = base[k] + (s/2)|y_k - x|^2 over the grid points y_k.
void add_shifted_quadratic_serial(std::span<const double> base, const GridSpec& grid,
                                  double s, PointView x, std::span<double> out);
void add_shifted_quadratic_parallel(std::span<const double> base, const GridSpec& grid,
                                    double s, PointView x, std::span<double> out);
void add_shifted_quadratic(std::span<const double> base, const GridSpec& grid, double s,
                           PointView x, std::span<double> out,
                           Execution exec = Execution::parallel);

// Runs body(i) for i in [0, n). Inside an enclosing parallel region it runs
// serially.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body,
                    Execution exec = Execution::parallel);

}  // namespace ncpa

#endif  // NCPA_GRID_KERNELS_HPP_
