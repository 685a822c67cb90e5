#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace acb {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

constexpr double kPi = std::numbers::pi;

constexpr double deg_to_rad(double deg) { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) { return rad * 180.0 / kPi; }

enum class Digit { Thumb = 0, Index, Middle, Ring, Little };
constexpr std::size_t kDigitCount = 5;

const char* to_string(Digit d);
Digit digit_from_string(const std::string& s);

/// Raised when a model document or model data does not satisfy the schema
/// or its structural invariants.
class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an excursion model or other pure function.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// NaN or infinite values inside the torque field.
class SolverFault : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Joint angle per global DoF index, radians.
class Posture {
public:
    Posture() = default;
    explicit Posture(std::size_t dof_count, double value = 0.0) : angles_(dof_count, value) {}
    explicit Posture(std::vector<double> angles) : angles_(std::move(angles)) {}

    double& operator[](std::size_t i) { return angles_[i]; }
    double operator[](std::size_t i) const { return angles_[i]; }
    std::size_t size() const { return angles_.size(); }
    const std::vector<double>& values() const { return angles_; }
    std::vector<double>& values() { return angles_; }

    bool operator==(const Posture&) const = default;

private:
    std::vector<double> angles_;
};

/// Activation per muscle index, each in [0, 1].
class ActivationPattern {
public:
    ActivationPattern() = default;
    explicit ActivationPattern(std::size_t muscle_count, double value = 0.0)
        : values_(muscle_count, value) {}
    explicit ActivationPattern(std::vector<double> values) : values_(std::move(values)) {}

    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool operator==(const ActivationPattern&) const = default;

private:
    std::vector<double> values_;
};

}  // namespace acb
