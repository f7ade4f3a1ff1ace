#pragma once

#include <cmath>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "stacksort/core.hpp"

namespace stacksort {

using Exponents = std::vector<int>;

// Per-letter integer weights alpha_1..alpha_{k+1} for the substitution
// x_i -> x^{alpha_i}; all positive.
using WeightAssignment = std::vector<int>;

namespace detail {

inline long long checked_add(long long a, long long b) {
    long long r;
    if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

inline long long checked_mul(long long a, long long b) {
    long long r;
    if (__builtin_mul_overflow(a, b, &r)) throw std::overflow_error("integer overflow");
    return r;
}

inline long long gcd_ll(long long a, long long b) {
    a = std::abs(a);
    b = std::abs(b);
    while (b) {
        long long t = a % b;
        a = b;
        b = t;
    }
    return a;
}

}  // namespace detail

// Sparse multivariate polynomial with exact integer coefficients.  Terms
// map exponent vectors (one entry per variable) to nonzero coefficients;
// the map order doubles as the canonical serialization order.
struct MultiPoly {
    int arity = 1;
    std::map<Exponents, long long> terms;

    static MultiPoly zero(int arity) { return MultiPoly{arity, {}}; }

    static MultiPoly constant(int arity, long long c) {
        MultiPoly p{arity, {}};
        if (c != 0) p.terms.emplace(Exponents(arity, 0), c);
        return p;
    }

    static MultiPoly monomial(Exponents e, long long c) {
        MultiPoly p{static_cast<int>(e.size()), {}};
        if (c != 0) p.terms.emplace(std::move(e), c);
        return p;
    }

    static MultiPoly variable(int arity, int var) {
        Exponents e(arity, 0);
        e.at(var) = 1;
        return monomial(std::move(e), 1);
    }

    bool is_zero() const { return terms.empty(); }

    long long coeff(const Exponents& e) const {
        auto it = terms.find(e);
        return it == terms.end() ? 0 : it->second;
    }

    long long constant_term() const { return coeff(Exponents(arity, 0)); }

    void add_term(const Exponents& e, long long c) {
        if (c == 0) return;
        auto [it, fresh] = terms.emplace(e, c);
        if (!fresh) {
            it->second = detail::checked_add(it->second, c);
            if (it->second == 0) terms.erase(it);
        }
    }

    MultiPoly& operator+=(const MultiPoly& o) {
        if (arity != o.arity) throw std::invalid_argument("arity mismatch");
        for (const auto& [e, c] : o.terms) add_term(e, c);
        return *this;
    }

    MultiPoly& operator-=(const MultiPoly& o) {
        if (arity != o.arity) throw std::invalid_argument("arity mismatch");
        for (const auto& [e, c] : o.terms) add_term(e, -c);
        return *this;
    }

    friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
    friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }

    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
        if (a.arity != b.arity) throw std::invalid_argument("arity mismatch");
        MultiPoly prod = zero(a.arity);
        Exponents e(a.arity);
        for (const auto& [ea, ca] : a.terms)
            for (const auto& [eb, cb] : b.terms) {
                for (int i = 0; i < a.arity; ++i) e[i] = ea[i] + eb[i];
                prod.add_term(e, detail::checked_mul(ca, cb));
            }
        return prod;
    }

    friend MultiPoly operator*(long long c, const MultiPoly& p) {
        MultiPoly r = zero(p.arity);
        for (const auto& [e, pc] : p.terms) r.add_term(e, detail::checked_mul(c, pc));
        return r;
    }

    friend MultiPoly operator-(const MultiPoly& p) { return -1 * p; }

    friend bool operator==(const MultiPoly&, const MultiPoly&) = default;

    int total_degree() const {
        int d = 0;
        for (const auto& [e, c] : terms) {
            int t = 0;
            for (int x : e) t += x;
            d = std::max(d, t);
        }
        return d;
    }

    double evaluate(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != arity) throw std::invalid_argument("arity mismatch");
        double sum = 0;
        for (const auto& [e, c] : terms) {
            double t = static_cast<double>(c);
            for (int i = 0; i < arity; ++i)
                for (int j = 0; j < e[i]; ++j) t *= x[i];
            sum += t;
        }
        return sum;
    }

    MultiPoly partial(int var) const {
        MultiPoly d = zero(arity);
        for (const auto& [e, c] : terms) {
            if (e[var] == 0) continue;
            Exponents de = e;
            --de[var];
            d.add_term(de, detail::checked_mul(c, e[var]));
        }
        return d;
    }

    // x_i -> y^{alpha_i}: collapses to a univariate polynomial.
    MultiPoly substitute_powers(const WeightAssignment& alpha) const {
        if (static_cast<int>(alpha.size()) != arity)
            throw std::invalid_argument("one weight per variable required");
        for (int a : alpha)
            if (a < 1) throw std::invalid_argument("weights must be positive");
        MultiPoly r = zero(1);
        for (const auto& [e, c] : terms) {
            long long deg = 0;
            for (int i = 0; i < arity; ++i) deg += static_cast<long long>(e[i]) * alpha[i];
            r.add_term({static_cast<int>(deg)}, c);
        }
        return r;
    }

    // Identifies variables: old variable i becomes new variable var_map[i].
    MultiPoly merge_variables(const std::vector<int>& var_map, int new_arity) const {
        if (static_cast<int>(var_map.size()) != arity)
            throw std::invalid_argument("one image per variable required");
        MultiPoly r = zero(new_arity);
        Exponents e(new_arity);
        for (const auto& [old_e, c] : terms) {
            std::fill(e.begin(), e.end(), 0);
            for (int i = 0; i < arity; ++i) e.at(var_map[i]) += old_e[i];
            r.add_term(e, c);
        }
        return r;
    }

    // Dense coefficient vector; univariate polynomials only.
    std::vector<long long> dense_univariate() const {
        if (arity != 1) throw std::invalid_argument("not univariate");
        std::vector<long long> c(total_degree() + 1, 0);
        for (const auto& [e, v] : terms) c[e[0]] = v;
        return c;
    }

    std::string to_string() const {
        if (terms.empty()) return "0";
        std::string s;
        for (const auto& [e, c] : terms) {
            if (!s.empty()) s += c >= 0 ? " + " : " - ";
            else if (c < 0) s += "-";
            long long a = std::abs(c);
            bool has_var = false;
            for (int x : e) has_var = has_var || x > 0;
            if (a != 1 || !has_var) s += std::to_string(a);
            for (int i = 0; i < arity; ++i) {
                if (e[i] == 0) continue;
                s += "x" + std::to_string(i + 1);
                if (e[i] > 1) s += "^" + std::to_string(e[i]);
            }
        }
        return s;
    }
};

// Ratio of two integer polynomials; the denominator keeps a nonzero
// constant term so the power series is well defined.
struct RationalGF {
    MultiPoly num, den;
    friend bool operator==(const RationalGF&, const RationalGF&) = default;
};

// Exact power-series coefficients [x^0 .. x^cap] of num/den; requires the
// denominator constant term to be +-1 so the recurrence stays integral.
inline std::vector<long long> series_univariate(const RationalGF& gf, int cap) {
    if (gf.num.arity != 1 || gf.den.arity != 1)
        throw std::invalid_argument("univariate series of a multivariate function");
    if (cap < 0) throw std::invalid_argument("negative cap");
    long long d0 = gf.den.constant_term();
    if (d0 != 1 && d0 != -1)
        throw std::invalid_argument("denominator constant term must be +-1");
    std::vector<long long> den = gf.den.dense_univariate();
    std::vector<long long> num = gf.num.dense_univariate();
    if (d0 == -1) {
        for (auto& c : den) c = -c;
        for (auto& c : num) c = -c;
    }
    std::vector<long long> a(cap + 1, 0);
    for (int t = 0; t <= cap; ++t) {
        long long v = t < static_cast<int>(num.size()) ? num[t] : 0;
        for (int j = 1; j <= t && j < static_cast<int>(den.size()); ++j)
            v = detail::checked_add(v, -detail::checked_mul(den[j], a[t - j]));
        a[t] = v;
    }
    return a;
}

// Truncated multivariate series up to the given total degree, as a
// polynomial.  Same +-1 requirement on the denominator constant.
inline MultiPoly series_multivariate(const RationalGF& gf, int total_degree_cap) {
    if (gf.num.arity != gf.den.arity) throw std::invalid_argument("arity mismatch");
    if (total_degree_cap < 0) throw std::invalid_argument("negative cap");
    long long d0 = gf.den.constant_term();
    if (d0 != 1 && d0 != -1)
        throw std::invalid_argument("denominator constant term must be +-1");
    const int arity = gf.den.arity;
    auto degree_of = [](const Exponents& e) {
        int t = 0;
        for (int x : e) t += x;
        return t;
    };

    // Split numerator and (denominator - 1) into homogeneous slices.
    std::vector<MultiPoly> num_slice(total_degree_cap + 1, MultiPoly::zero(arity));
    std::vector<MultiPoly> d_slice(total_degree_cap + 1, MultiPoly::zero(arity));
    for (const auto& [e, c] : gf.num.terms) {
        int t = degree_of(e);
        if (t <= total_degree_cap) num_slice[t].add_term(e, d0 == -1 ? -c : c);
    }
    for (const auto& [e, c] : gf.den.terms) {
        int t = degree_of(e);
        if (t == 0) continue;
        if (t <= total_degree_cap) d_slice[t].add_term(e, d0 == -1 ? -c : c);
    }

    // a_t = num_t - sum_{s >= 1} d_s * a_{t-s}, degree by degree.
    std::vector<MultiPoly> a(total_degree_cap + 1, MultiPoly::zero(arity));
    MultiPoly series = MultiPoly::zero(arity);
    for (int t = 0; t <= total_degree_cap; ++t) {
        MultiPoly v = num_slice[t];
        for (int s = 1; s <= t; ++s) {
            if (d_slice[s].is_zero() || a[t - s].is_zero()) continue;
            v -= d_slice[s] * a[t - s];
        }
        a[t] = std::move(v);
        series += a[t];
    }
    return series;
}

}  // namespace stacksort
