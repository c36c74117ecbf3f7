#pragma once

#include <cmath>
#include <vector>

namespace freepoints::internal {

using Poly = std::vector<long double>;

inline long double Evaluate(Poly const& p, long double t) {
  long double v = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) v = v * t + *it;
  return v;
}

inline Poly Derivative(Poly const& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long double>(k));
  return d;
}

inline void Trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

// Approximate real roots in [a, b], ascending.
inline std::vector<long double> RealRoots(Poly p, long double a, long double b) {
  Trim(p);
  if (p.size() <= 1) return {};
  if (p.size() == 2) {
    long double const r = -p[0] / p[1];
    if (r >= a && r <= b) return {r};
    return {};
  }
  std::vector<long double> points{a};
  for (long double c : RealRoots(Derivative(p), a, b)) points.push_back(c);
  points.push_back(b);
  std::vector<long double> roots;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    long double lo = points[i];
    long double hi = points[i + 1];
    long double flo = Evaluate(p, lo);
    long double const fhi = Evaluate(p, hi);
    if (flo == 0) {
      roots.push_back(lo);
      continue;
    }
    if ((flo < 0) == (fhi < 0) || fhi == 0) continue;
    for (int it = 0; it < 200 && hi - lo > 0; ++it) {
      long double const mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      long double const fm = Evaluate(p, mid);
      if ((fm < 0) == (flo < 0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    roots.push_back(lo);
  }
  if (Evaluate(p, b) == 0) roots.push_back(b);
  return roots;
}

}  // namespace freepoints::internal
