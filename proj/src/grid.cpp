#include "zenoest/grid.hpp"

#include <cmath>

#include "zenoest/errors.hpp"

namespace zenoest {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

std::vector<double> open_grid(double lo, double hi, std::size_t n) {
  if (n == 0 || !(hi > lo)) {
    throw InvalidParameter("open_grid: need n > 0 and hi > lo");
  }
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(n);
  }
  return out;
}

std::vector<std::size_t> local_maxima(const std::vector<double>& values) {
  std::vector<std::size_t> peaks;
  const std::size_t n = values.size();
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    const bool left = i == 0 || values[i - 1] < values[i];
    const bool right = j + 1 == n || values[j + 1] < values[j];
    if (left && right) peaks.push_back(i);
    i = j + 1;
  }
  return peaks;
}

double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int iter = 0; iter < 200 && (b - a) > rel_tol * 0.5 * std::abs(a + b); ++iter) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace zenoest
