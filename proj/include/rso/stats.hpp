#pragma once
#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace rso {

struct Interval95 {
  double lo = 0, hi = 0;
};

// Wilson score interval, z = 1.96 unless told otherwise
inline Interval95 wilson(long successes, long n, double z = 1.96) {
  if (n <= 0) return {0.0, 1.0};
  double p = double(successes) / double(n), z2 = z * z, nn = double(n);
  double den = 1 + z2 / nn;
  double c = (p + z2 / (2 * nn)) / den;
  double h = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / den;
  return {std::max(0.0, c - h), std::min(1.0, c + h)};
}

struct LineFit {
  double slope = 0, intercept = 0;
};

inline LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  double n = double(x.size()), sx = 0, sy = 0;
  for (size_t i = 0; i < x.size(); ++i) sx += x[i], sy += y[i];
  double mx = sx / n, my = sy / n, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  return f;
}

}  // namespace rso
