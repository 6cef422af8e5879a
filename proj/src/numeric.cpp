#include "junction/numeric.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>
#include <stdexcept>

namespace junction {

namespace {

GaussRule compute_gauss(int n) {
    // Newton iteration on Legendre polynomials, symmetric nodes.
    GaussRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double p0 = 0.0, p1 = 0.0;
        for (int it = 0; it < 100; ++it) {
            p0 = 1.0;
            p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            const double dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        p0 = 1.0;
        p1 = x;
        for (int k = 2; k <= n; ++k) {
            const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        const double dp = n * (x * p1 - p0) / (x * x - 1.0);
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_gauss(n)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    const GaussRule& rule = gauss_legendre(n);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return half * sum;
}

double panel_integrate(const std::function<double(double)>& f, double a, double b,
                       int panels, int points_per_panel) {
    double sum = 0.0;
    const double dx = (b - a) / panels;
    for (int p = 0; p < panels; ++p)
        sum += gauss_integrate(f, a + p * dx, a + (p + 1) * dx, points_per_panel);
    return sum;
}

const TriangleRule& triangle_rule_midpoint3() {
    static TriangleRule rule = [] {
        TriangleRule r;
        r.barycentric.resize(3, 3);
        r.barycentric << 0.5, 0.5, 0.0,
                         0.0, 0.5, 0.5,
                         0.5, 0.0, 0.5;
        r.weights = Eigen::Vector3d::Constant(1.0 / 3.0);
        return r;
    }();
    return rule;
}

const TriangleRule& triangle_rule_7point() {
    static TriangleRule rule = [] {
        TriangleRule r;
        r.barycentric.resize(7, 3);
        r.weights.resize(7);
        const double a1 = 0.0597158717897698;
        const double b1 = 0.4701420641051151;
        const double a2 = 0.7974269853530873;
        const double b2 = 0.1012865073234563;
        r.barycentric.row(0) << 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0;
        r.barycentric.row(1) << a1, b1, b1;
        r.barycentric.row(2) << b1, a1, b1;
        r.barycentric.row(3) << b1, b1, a1;
        r.barycentric.row(4) << a2, b2, b2;
        r.barycentric.row(5) << b2, a2, b2;
        r.barycentric.row(6) << b2, b2, a2;
        r.weights << 0.225,
            0.1323941527885062, 0.1323941527885062, 0.1323941527885062,
            0.1259391805448271, 0.1259391805448271, 0.1259391805448271;
        return r;
    }();
    return rule;
}

double quintic_step(double t) {
    if (t <= 0.0) return 0.0;
    if (t >= 1.0) return 1.0;
    return t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double quintic_step_d1(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 30.0 * t * t * (1.0 - t) * (1.0 - t);
}

double quintic_step_d2(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return 60.0 * t * (1.0 - t) * (1.0 - 2.0 * t);
}

double RadialCutoff::value(double r) const {
    return 1.0 - quintic_step((r - r_on) / (r_off - r_on));
}

double RadialCutoff::d1(double r) const {
    const double w = r_off - r_on;
    return -quintic_step_d1((r - r_on) / w) / w;
}

double RadialCutoff::d2(double r) const {
    const double w = r_off - r_on;
    return -quintic_step_d2((r - r_on) / w) / (w * w);
}

RateFit fit_rate(const std::vector<std::pair<double, double>>& h_err) {
    if (h_err.size() < 3) throw std::invalid_argument("fit_rate: need at least 3 points");
    RateFit fit;
    for (const auto& [h, e] : h_err) {
        if (!(h > 0.0)) throw std::invalid_argument("fit_rate: h must be positive");
        if (!(e > 0.0)) {
            fit.exact = true;
            return fit;
        }
    }
    const int n = static_cast<int>(h_err.size());
    Eigen::MatrixX2d X(n, 2);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = std::log(h_err[i].first);
        X(i, 1) = 1.0;
        y[i] = std::log(h_err[i].second);
    }
    const Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * y);
    fit.slope = beta[0];
    fit.intercept = beta[1];
    fit.residual = std::sqrt((X * beta - y).squaredNorm() / n);
    return fit;
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string format_double(double v) {
    char buf[40];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

}  // namespace junction
