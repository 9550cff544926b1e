#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace zenoest {

/// n points from lo to hi inclusive.
std::vector<double> linspace(double lo, double hi, std::size_t n);

/// τ_i = lo + (hi - lo)(i + 1)/n for i = 0..n-1; lo itself is excluded.
std::vector<double> open_grid(double lo, double hi, std::size_t n);

/// Local maxima of a sampled curve, endpoints included. A run of equal
/// values counts once, reported at its first index.
std::vector<std::size_t> local_maxima(const std::vector<double>& values);

/// Golden-section search for a maximum of f on [lo, hi]; stops when the
/// bracket is narrower than rel_tol times its midpoint.
double golden_section_max(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol);

}  // namespace zenoest
