#pragma once

#include <array>
#include <cstddef>
#include <span>

namespace sampleahead {

/// 3x3 rotation, row-major.
using RotationMatrix = std::array<double, 9>;

/// R = Rz(in_plane) * Rx(elevation) * Rz(azimuth), angles in degrees.
[[nodiscard]] RotationMatrix rotation_from_angles(double azimuth_deg, double elevation_deg, double in_plane_deg);

/// Throws ContractError unless R^T R = I and det R = 1 within `tolerance`.
void check_rotation(const RotationMatrix& r, double tolerance = 1e-6);

/// Angle of the relative rotation R^T R', in degrees:
/// arccos((trace(R^T R') - 1) / 2), which equals ||log(R^T R')||_F / sqrt(2).
[[nodiscard]] double geodesic_distance(const RotationMatrix& r, const RotationMatrix& r_prime);

/// Fraction of errors with rho <= threshold (inclusive).
[[nodiscard]] double acc_threshold(std::span<const double> rhos, double threshold_deg = 30.0);

/// Median; the mean of the two central values for even counts.
[[nodiscard]] double med_err(std::span<const double> rhos);

struct PairedTTest {
    double t = 0.0;
    double p_value = 1.0;
    std::size_t n = 0;
    double mean_difference = 0.0;
};

/// Two-sided paired t-test on d_i = xs_i - ys_i with n - 1 degrees of
/// freedom. Throws DegenerateError when the differences have zero variance.
[[nodiscard]] PairedTTest paired_t_test(std::span<const double> xs, std::span<const double> ys);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
[[nodiscard]] double incomplete_beta(double a, double b, double x);

/// Two-sided tail probability P(|T| >= |t|) for Student's t.
[[nodiscard]] double student_t_two_sided(double t, double dof);

}  // namespace sampleahead
