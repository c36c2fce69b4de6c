#pragma once

#include <cmath>

namespace oracle {

/// Riemann zeta for s > 1: direct sum plus Euler-Maclaurin tail.
inline double zeta(double s) {
    const int N = 100000;
    double sum = 0;
    for (int k = N; k >= 1; --k) sum += std::pow(k, -s);
    const double n = N;
    return sum + std::pow(n, 1 - s) / (s - 1) - 0.5 * std::pow(n, -s) + s / 12.0 * std::pow(n, -s - 1);
}

/// sum_{k>=1} (-1)^{k+1} / k^2, paired terms summed backward.
inline double eta2() {
    double sum = 0;
    for (int k = 2000000; k >= 1; --k) sum += ((k % 2) ? 1.0 : -1.0) / (double(k) * k);
    return sum;
}

inline double pi() { return std::acos(-1.0); }

}  // namespace oracle
