#ifndef NCPA_RANDOM_HPP_
#define NCPA_RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace ncpa {

// mt19937_64 is fully specified by the standard; the distributions below are
// written out so sample streams do not depend on the standard library vendor.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * n) % n; }

  // Uniform on the open simplex interior (flat Dirichlet).
  std::vector<double> simplex(std::size_t m) {
    std::vector<double> w(m);
    double sum = 0.0;
    for (auto& x : w) {
      x = -std::log(1.0 - uniform() * (1.0 - 0x1.0p-53));
      sum += x;
    }
    for (auto& x : w) x /= sum;
    return w;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ncpa

#endif  // NCPA_RANDOM_HPP_
