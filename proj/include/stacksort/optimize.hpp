#pragma once

#include <cmath>
#include <utility>

#include "stacksort/asymptotics.hpp"
#include "stacksort/polynomial.hpp"

namespace stacksort {

// Outcome of weight optimization on a denominator variety: the interior
// stationary point of prod x_i^{m_i} on {den = 0}, with the objective
// reported as the growth rate beta = 1 / prod x_i^{m_i}.
struct OptimizationResult {
    std::vector<double> point;
    std::vector<int> multiplicity;
    double objective;              // beta
    double constraint_residual;    // |den(x*)|
    double stationarity_residual;  // inf-norm of m_i/x_i + lambda * den_i
    double multiplier;
};

namespace detail {

// Solve a small dense linear system in place; returns false if singular.
inline bool solve_dense(std::vector<std::vector<double>>& a, std::vector<double>& b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int pivot = col;
        for (int row = col + 1; row < n; ++row)
            if (std::fabs(a[row][col]) > std::fabs(a[pivot][col])) pivot = row;
        if (std::fabs(a[pivot][col]) < 1e-300) return false;
        std::swap(a[col], a[pivot]);
        std::swap(b[col], b[pivot]);
        for (int row = 0; row < n; ++row) {
            if (row == col) continue;
            double f = a[row][col] / a[col][col];
            if (f == 0) continue;
            for (int j = col; j < n; ++j) a[row][j] -= f * a[col][j];
            b[row] -= f * b[col];
        }
    }
    for (int i = 0; i < n; ++i) b[i] /= a[i][i];
    return true;
}

// First zero of den along the ray t * dir inside the unit box, if any.
inline bool ray_crossing(const MultiPoly& den, const std::vector<double>& dir, double& t_out) {
    double t_max = 1e306;
    for (double d : dir) t_max = std::min(t_max, 1.0 / d);
    const int steps = 2048;
    std::vector<double> x(dir.size());
    double prev = den.evaluate(std::span<const double>(x));  // den(0)
    for (int i = 1; i <= steps; ++i) {
        double t = t_max * i / (steps + 1);
        for (std::size_t j = 0; j < dir.size(); ++j) x[j] = t * dir[j];
        double v = den.evaluate(x);
        if ((prev > 0 && v <= 0) || (prev < 0 && v >= 0)) {
            double lo = t_max * (i - 1) / (steps + 1), hi = t;
            for (int it = 0; it < 100; ++it) {
                double mid = 0.5 * (lo + hi);
                for (std::size_t j = 0; j < dir.size(); ++j) x[j] = mid * dir[j];
                double vm = den.evaluate(x);
                if ((vm > 0) == (prev > 0)) lo = mid; else hi = mid;
            }
            t_out = 0.5 * (lo + hi);
            return true;
        }
        prev = v;
    }
    return false;
}

}  // namespace detail

// Finds the stationary point of the Lagrange system for the product
// prod x_i^{m_i} on the variety {den = 0} inside (0,1)^d, and reports
// the growth rate beta = 1 / prod x_i^{m_i} there.  Stationarity is
// solved in log form, m_i / x_i + lambda * den_i = 0, by damped Newton
// from several deterministic starts on the variety; ray-grid refinement
// supplies extra starts when Newton stalls.  Among converged interior
// points the smallest beta wins (ties: lexicographically smallest point).
inline OptimizationResult optimize_weights(const MultiPoly& den,
                                           std::vector<int> multiplicity = {},
                                           double tol = 1e-10) {
    const int d = den.arity;
    if (multiplicity.empty()) multiplicity.assign(d, 1);
    if (static_cast<int>(multiplicity.size()) != d)
        throw std::invalid_argument("one multiplicity per variable required");
    for (int m : multiplicity)
        if (m < 1) throw std::invalid_argument("multiplicities must be positive");

    std::vector<MultiPoly> grad;
    std::vector<std::vector<MultiPoly>> hess(d);
    for (int i = 0; i < d; ++i) grad.push_back(den.partial(i));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) hess[i].push_back(grad[i].partial(j));

    auto objective_log = [&](const std::vector<double>& x) {
        double s = 0;
        for (int i = 0; i < d; ++i) s += multiplicity[i] * std::log(x[i]);
        return s;  // log prod x_i^{m_i}
    };

    struct Candidate {
        std::vector<double> point;
        double lambda;
        double g_res, st_res;
    };
    std::vector<Candidate> found;

    auto residuals = [&](const std::vector<double>& x, double lambda, double& g_res,
                         double& st_res) {
        g_res = std::fabs(den.evaluate(x));
        st_res = 0;
        for (int i = 0; i < d; ++i) {
            double gi = grad[i].evaluate(x);
            st_res = std::max(st_res, std::fabs(multiplicity[i] / x[i] + lambda * gi));
        }
    };

    auto try_newton = [&](std::vector<double> x) {
        for (double v : x)
            if (!(v > 0)) return;
        // Least-squares multiplier for the start.
        double num = 0, denom = 0;
        for (int i = 0; i < d; ++i) {
            double gi = grad[i].evaluate(x);
            num += (multiplicity[i] / x[i]) * gi;
            denom += gi * gi;
        }
        if (denom == 0) return;
        double lambda = -num / denom;

        auto eval_F = [&](const std::vector<double>& p, double lam, std::vector<double>& F) {
            F[0] = den.evaluate(p);
            for (int i = 0; i < d; ++i)
                F[i + 1] = multiplicity[i] / p[i] + lam * grad[i].evaluate(p);
        };
        std::vector<double> F(d + 1), Fnew(d + 1);
        auto norm = [](const std::vector<double>& v) {
            double n = 0;
            for (double e : v) n = std::max(n, std::fabs(e));
            return n;
        };

        for (int it = 0; it < 200; ++it) {
            eval_F(x, lambda, F);
            if (norm(F) < 1e-13) break;
            std::vector<std::vector<double>> J(d + 1, std::vector<double>(d + 1, 0));
            for (int j = 0; j < d; ++j) J[0][j] = grad[j].evaluate(x);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) {
                    J[i + 1][j] = lambda * hess[i][j].evaluate(x);
                    if (i == j) J[i + 1][j] -= multiplicity[i] / (x[i] * x[i]);
                }
                J[i + 1][d] = grad[i].evaluate(x);
            }
            std::vector<double> step(F);
            for (auto& v : step) v = -v;
            if (!detail::solve_dense(J, step)) return;
            double alpha = 1.0;
            double base = norm(F);
            bool moved = false;
            for (int h = 0; h < 40; ++h, alpha *= 0.5) {
                std::vector<double> xn(d);
                bool positive = true;
                for (int i = 0; i < d; ++i) {
                    xn[i] = x[i] + alpha * step[i];
                    positive = positive && xn[i] > 1e-12 && xn[i] < 4.0;
                }
                if (!positive) continue;
                double ln = lambda + alpha * step[d];
                eval_F(xn, ln, Fnew);
                if (norm(Fnew) < base) {
                    x = std::move(xn);
                    lambda = ln;
                    moved = true;
                    break;
                }
            }
            if (!moved) return;
        }
        double g_res, st_res;
        residuals(x, lambda, g_res, st_res);
        if (g_res > tol || st_res > 1e-8) return;
        for (double v : x)
            if (!(v > 0 && v < 1)) return;
        found.push_back({std::move(x), lambda, g_res, st_res});
    };

    // Start points: crossings of den along deterministic rays through the
    // positive box, densest near the uniform diagonal.
    std::vector<std::vector<double>> directions;
    directions.emplace_back(d, 1.0);
    for (int j = 0; j < d; ++j)
        for (double scale : {0.8, 1.25, 0.55, 1.8}) {
            std::vector<double> u(d, 1.0);
            u[j] = scale;
            directions.push_back(std::move(u));
        }
    if (d == 2) {
        for (int i = 1; i <= 16; ++i)
            directions.push_back({1.0, static_cast<double>(i) / 6.0});
    }
    if (d == 3) {
        for (int i = 1; i <= 6; ++i)
            for (int j = 1; j <= 6; ++j)
                directions.push_back({1.0, i / 3.0, j / 3.0});
    }
    for (const auto& u : directions) {
        double t;
        if (detail::ray_crossing(den, u, t)) {
            std::vector<double> x(d);
            for (int i = 0; i < d; ++i) x[i] = t * u[i];
            try_newton(std::move(x));
        }
    }
    if (found.empty()) throw std::domain_error("no interior stationary point found");

    // De-duplicate and select: smallest beta, i.e. largest product.
    const Candidate* best = nullptr;
    for (const auto& c : found) {
        if (!best) { best = &c; continue; }
        double diff = objective_log(c.point) - objective_log(best->point);
        if (diff > 1e-12 || (std::fabs(diff) <= 1e-12 && c.point < best->point)) best = &c;
    }
    OptimizationResult r;
    r.point = best->point;
    r.objective = std::exp(-objective_log(best->point));
    r.multiplicity = std::move(multiplicity);
    r.constraint_residual = best->g_res;
    r.stationarity_residual = best->st_res;
    r.multiplier = best->lambda;
    return r;
}

// Best rational approximation p/q to a positive real with q bounded,
// via continued-fraction convergents and semiconvergents.
inline std::pair<long long, long long> best_rational(double value, long long max_denominator) {
    if (!(value > 0) || max_denominator < 1) throw std::invalid_argument("bad arguments");
    long long p_prev = 1, q_prev = 0;  // h_{-1}/k_{-1}
    long long p = static_cast<long long>(std::floor(value)), q = 1;
    double frac = value - std::floor(value);
    while (frac > 1e-12) {
        double inv = 1.0 / frac;
        long long a = static_cast<long long>(std::floor(inv));
        frac = inv - std::floor(inv);
        long long pn = a * p + p_prev, qn = a * q + q_prev;
        if (qn > max_denominator) {
            // Largest semiconvergent still inside the bound; it beats the
            // last convergent only past the halfway term (ties decided by
            // the actual error).
            long long take = (max_denominator - q_prev) / q;
            if (take >= 1) {
                long long sp = take * p + p_prev, sq = take * q + q_prev;
                bool use = take * 2 > a;
                if (take * 2 == a)
                    use = std::fabs(value - static_cast<double>(sp) / static_cast<double>(sq)) <
                          std::fabs(value - static_cast<double>(p) / static_cast<double>(q));
                if (use) return {sp, sq};
            }
            return {p, q};
        }
        p_prev = std::exchange(p, pn);
        q_prev = std::exchange(q, qn);
    }
    return {p, q};
}

// Integer weights alpha_i <= max_weight approximating the log-ratios
// log x_i / log x_1: alpha_1 runs over 1..max_weight (covering every
// convergent denominator in range) and each alpha_i is the nearest
// integer to ratio * alpha_1.  The assignment with the smallest worst
// ratio error wins; smaller weights break ties.
inline WeightAssignment rationalize_weights(const std::vector<double>& point, int max_weight) {
    if (point.empty()) throw std::invalid_argument("empty point");
    if (max_weight < 1) throw std::invalid_argument("need max_weight >= 1");
    for (double v : point)
        if (!(v > 0 && v < 1)) throw std::invalid_argument("coordinates must lie in (0, 1)");
    const int d = static_cast<int>(point.size());
    std::vector<double> ratio(d);
    for (int i = 0; i < d; ++i) ratio[i] = std::log(point[i]) / std::log(point[0]);

    WeightAssignment best;
    double best_err = 0;
    for (int q = 1; q <= max_weight; ++q) {
        WeightAssignment alpha(d);
        bool ok = true;
        double err = 0;
        for (int i = 0; i < d; ++i) {
            long long a = std::llround(ratio[i] * q);
            if (a < 1) a = 1;
            if (a > max_weight) { ok = false; break; }
            alpha[i] = static_cast<int>(a);
            err = std::max(err, std::fabs(ratio[i] - static_cast<double>(a) / q));
        }
        if (!ok) continue;
        if (best.empty() || err < best_err - 1e-15) {
            best = std::move(alpha);
            best_err = err;
        }
    }
    if (best.empty()) throw std::domain_error("no weights within max_weight");
    return best;
}

}  // namespace stacksort
