#include "fla/sampling.hpp"

#include <cmath>

namespace fla {

std::vector<Point> sample_points(Dims dims, const SampleSpec& spec) {
  SampleRng rng(spec.seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    Point p;
    p.x.resize(static_cast<std::size_t>(dims.m));
    p.y.resize(static_cast<std::size_t>(dims.n));
    for (auto& xi : p.x) xi = rng.uniform(-spec.box, spec.box);
    double norm = 0.0;
    do {
      norm = 0.0;
      for (auto& ya : p.y) {
        ya = rng.uniform(-1.0, 1.0);
        norm += ya * ya;
      }
      norm = std::sqrt(norm);
    } while (norm < 1e-3);
    const double radius = rng.uniform(spec.y_min, spec.y_max);
    for (auto& ya : p.y) ya *= radius / norm;
    pts.push_back(std::move(p));
  }
  return pts;
}

std::vector<Point> sample_base_points(int m, const SampleSpec& spec) {
  SampleRng rng(spec.seed);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(spec.count));
  for (int k = 0; k < spec.count; ++k) {
    Point p;
    p.x.resize(static_cast<std::size_t>(m));
    for (auto& xi : p.x) xi = rng.uniform(-spec.box, spec.box);
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace fla
