#ifndef FLA_SAMPLING_HPP
#define FLA_SAMPLING_HPP

#include <cstdint>
#include <vector>

#include "fla/expr.hpp"

namespace fla {

/// Deterministic sample-point generation. Base coordinates are drawn from a
/// uniform box [-box, box]^m, fiber coordinates from a uniform direction
/// scaled to |y| in [y_min, y_max], so the zero section is always avoided.
struct SampleSpec {
  std::uint64_t seed{42};
  int count{8};
  double box{1.0};
  double y_min{0.5};
  double y_max{2.0};
};

/// Portable 64-bit generator (splitmix64): the uniform doubles are identical
/// across platforms and standard libraries, which keeps reports reproducible.
class SampleRng {
 public:
  explicit SampleRng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

 private:
  std::uint64_t state_;
};

std::vector<Point> sample_points(Dims dims, const SampleSpec& spec);

/// Base-only points (y empty); used for checks on objects that live on the
/// base coordinates alone.
std::vector<Point> sample_base_points(int m, const SampleSpec& spec);

}  // namespace fla

#endif  // FLA_SAMPLING_HPP
