#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace twistorlab {

using Complex = std::complex<double>;
using Mask = std::uint64_t;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr Complex kI{0.0, 1.0};

/// Deterministic generator used everywhere randomness is needed.
using Rng = std::mt19937_64;

/// Violated call contract (bad dimensions, degrees, or tags).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Point left the chart box, typically while stenciling a derivative.
struct ChartError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Numerical construction failed (singular matrix, indefinite metric, ...).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Knobs for finite differencing and comparison tolerances.
///
/// Derivatives of fields that already contain a differentiation level use a
/// larger step: truncation error of the outer stencil then dominates the
/// noise amplified from the inner one.  step_for_level(0) applies to closed
/// form evaluators, deeper levels escalate geometrically.
struct NumericConfig {
    double fd_step = 1e-3;      // first derivatives of closed-form fields
    double nested_step = 5e-3;  // first FD layer on derived fields
    int stencil_order = 4;      // central stencil order: 2, 4 or 6
    bool use_analytic = true;   // honor analytic partials when present
    double tol = 1e-9;          // default comparison tolerance

    double step_for_level(int level) const {
        if (level <= 0) return fd_step;
        double s = nested_step;
        for (int l = 1; l < level; ++l) s *= 4.0;
        return s;
    }
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractError(what);
}

}  // namespace twistorlab
