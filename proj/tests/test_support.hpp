#pragma once

// Oracles and helpers shared by the test suites. Nothing here calls into the
// library: reference values come from mpmath (see reference/gen_reference.py)
// or from brute-force summation in long double.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace hyprec::oracle {

struct Reference {
  const char* family;
  int k;
  std::vector<double> params;
  long double value;
};

inline const std::vector<Reference>& references() {
  static const std::vector<Reference> table = {
#include "reference_values.inc"
  };
  return table;
}

inline double rel_diff(double x, double y) {
  const double scale = std::max({std::fabs(x), std::fabs(y), 1e-300});
  return std::fabs(x - y) / scale;
}

// Direct partial sum of pFq(upper; lower | z) with products of Pochhammer
// factors recomputed from scratch for every term.
inline long double naive_pfq(const std::vector<long double>& upper, const std::vector<long double>& lower,
                             long double z, int terms) {
  long double sum = 0;
  for (int m = 0; m < terms; ++m) {
    long double t = 1;
    for (int i = 0; i < m; ++i) {
      for (long double a : upper) t *= a + i;
      for (long double b : lower) t /= b + i;
      t *= z / (i + 1);
    }
    sum += t;
    if (t == 0 && m > 0) break;
  }
  return sum;
}

// Alternating 2F1(a, b; c | -1): partial sums smoothed by repeated averaging
// of neighbours (the Euler transform in its simplest form).
inline long double alternating_2f1(long double a, long double b, long double c, int terms = 80, int passes = 40) {
  std::vector<long double> partial;
  long double t = 1, s = 0;
  for (int m = 0; m < terms; ++m) {
    s += t;
    partial.push_back(s);
    t *= -(a + m) * (b + m) / ((c + m) * (m + 1));
  }
  for (int p = 0; p < passes && partial.size() > 1; ++p) {
    for (std::size_t i = 0; i + 1 < partial.size(); ++i) partial[i] = (partial[i] + partial[i + 1]) / 2;
    partial.pop_back();
  }
  return partial.back();
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240601);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng()); }

}  // namespace hyprec::oracle
