#pragma once

#include <cmath>

#include "stacksort/polynomial.hpp"

namespace stacksort {

namespace detail {

inline double horner(const std::vector<double>& coeffs, double x) {
    double v = 0;
    for (std::size_t i = coeffs.size(); i-- > 0;) v = v * x + coeffs[i];
    return v;
}

inline std::vector<double> to_double_coeffs(const MultiPoly& p) {
    auto dense = p.dense_univariate();
    return std::vector<double>(dense.begin(), dense.end());
}

}  // namespace detail

// Smallest positive real root of a univariate polynomial with p(0) > 0,
// located by a sign-change scan over (0, 1], then bisection and Newton
// polishing.  For the denominators in this pipeline the series has
// non-negative coefficients, so this root is the dominant singularity.
inline double min_positive_root(const MultiPoly& p, double tol = 1e-12) {
    std::vector<double> c = detail::to_double_coeffs(p);
    std::vector<double> dc(c.size() > 1 ? c.size() - 1 : 0);
    for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = c[i] * static_cast<double>(i);
    if (c.empty() || c[0] <= 0) throw std::invalid_argument("need p(0) > 0");

    const int grid = 1 << 14;
    double lo = 0, hi = 0;
    bool found = false;
    double prev = c[0];
    for (int i = 1; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double v = detail::horner(c, x);
        if (v == 0) { lo = hi = x; found = true; break; }
        if (prev > 0 && v < 0) {
            lo = static_cast<double>(i - 1) / grid;
            hi = x;
            found = true;
            break;
        }
        prev = v;
    }
    if (!found) throw std::domain_error("no sign change in (0, 1]: " + p.to_string());

    for (int it = 0; it < 200 && hi - lo > tol / 4; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = detail::horner(c, mid);
        if (v == 0) { lo = hi = mid; break; }
        (v > 0 ? lo : hi) = mid;
    }
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
        double f = detail::horner(c, root);
        double df = detail::horner(dc, root);
        if (df == 0) break;
        double next = root - f / df;
        if (next <= lo || next >= hi) break;  // keep the bracket
        root = next;
    }
    return root;
}

// Growth extracted from a univariate generating function: lambda_min is
// the dominant root of the denominator, [x^n] grows like lambda_min^{-n},
// and an object worth `letters_per_element` letters contributes
// b = lambda_min^{-letters_per_element} per element.  For weighted
// functions the per-element exponent is the weight sum per element.
struct GrowthReport {
    double lambda_min;
    double per_string_growth;   // lambda_min^{-1}
    double per_element_growth;  // b = lambda_min^{-letters_per_element}
};

inline GrowthReport growth_per_element(const RationalGF& gf, int letters_per_element) {
    if (letters_per_element < 1) throw std::invalid_argument("need letters_per_element >= 1");
    double lambda = min_positive_root(gf.den);
    return {lambda, 1.0 / lambda, std::pow(lambda, -letters_per_element)};
}

// The coefficient of log2(n) in the stack lower bound when a group of
// `ell` stacks generates O(b^n) permutations.
struct BoundReport {
    int group_size;
    double growth;
    double constant;  // ell / log2(b)
};

inline BoundReport bound_constant(int ell, double b) {
    if (ell < 1 || b <= 1) throw std::invalid_argument("need ell >= 1 and b > 1");
    return {ell, b, static_cast<double>(ell) / std::log2(b)};
}

}  // namespace stacksort
