#include "sampleahead/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <vector>

#include "sampleahead/errors.hpp"

namespace sampleahead {

namespace {

RotationMatrix multiply(const RotationMatrix& a, const RotationMatrix& b) {
    RotationMatrix c{};
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double acc = 0.0;
            for (int k = 0; k < 3; ++k) acc += a[i * 3 + k] * b[k * 3 + j];
            c[i * 3 + j] = acc;
        }
    }
    return c;
}

RotationMatrix rot_z(double rad) {
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0};
}

RotationMatrix rot_x(double rad) {
    const double c = std::cos(rad);
    const double s = std::sin(rad);
    return {1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c};
}

constexpr double kDeg = std::numbers::pi / 180.0;

}  // namespace

RotationMatrix rotation_from_angles(double azimuth_deg, double elevation_deg, double in_plane_deg) {
    return multiply(rot_z(in_plane_deg * kDeg), multiply(rot_x(elevation_deg * kDeg), rot_z(azimuth_deg * kDeg)));
}

void check_rotation(const RotationMatrix& r, double tolerance) {
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += r[k * 3 + i] * r[k * 3 + j];
            if (!(std::abs(dot - (i == j ? 1.0 : 0.0)) <= tolerance)) {
                throw ContractError("matrix is not orthonormal");
            }
        }
    }
    const double det = r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6]) +
                       r[2] * (r[3] * r[7] - r[4] * r[6]);
    if (!(std::abs(det - 1.0) <= tolerance)) throw ContractError("matrix has determinant != 1");
}

double geodesic_distance(const RotationMatrix& r, const RotationMatrix& r_prime) {
    check_rotation(r);
    check_rotation(r_prime);
    // M = R^T R'; cos from the trace, sin from the skew part (acos alone loses precision near 0)
    std::array<double, 9> m{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) m[3 * i + j] += r[3 * k + i] * r_prime[3 * k + j];
    const double c = (m[0] + m[4] + m[8] - 1.0) / 2.0;
    const double s = 0.5 * std::hypot(m[7] - m[5], m[2] - m[6], m[3] - m[1]);
    return std::atan2(s, c) / kDeg;
}

double acc_threshold(std::span<const double> rhos, double threshold_deg) {
    if (rhos.empty()) throw ContractError("acc_threshold of an empty list");
    const auto hits = std::count_if(rhos.begin(), rhos.end(), [&](double r) { return r <= threshold_deg; });
    return static_cast<double>(hits) / static_cast<double>(rhos.size());
}

double med_err(std::span<const double> rhos) {
    if (rhos.empty()) throw ContractError("median of an empty list");
    std::vector<double> v(rhos.begin(), rhos.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

namespace {

double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) return h;
    }
    return h;
}

}  // namespace

double incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw ContractError("incomplete beta needs positive shape parameters");
    if (!(x >= 0.0 && x <= 1.0)) throw ContractError("incomplete beta argument outside [0, 1]");
    if (x == 0.0 || x == 1.0) return x;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided(double t, double dof) {
    if (!(dof > 0.0)) throw ContractError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    return incomplete_beta(dof / 2.0, 0.5, dof / (dof + t * t));
}

PairedTTest paired_t_test(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ContractError("paired t-test needs equal-length samples");
    const std::size_t n = xs.size();
    if (n < 2) throw ContractError("paired t-test needs at least 2 pairs");
    double mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean += xs[i] - ys[i];
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = (xs[i] - ys[i]) - mean;
        ss += e * e;
    }
    const double var = ss / static_cast<double>(n - 1);
    if (!(var > 0.0)) throw DegenerateError("paired differences have zero variance");
    const double t = mean / std::sqrt(var / static_cast<double>(n));
    return PairedTTest{t, student_t_two_sided(t, static_cast<double>(n - 1)), n, mean};
}

}  // namespace sampleahead
