#pragma once

#include <twistorlab/fields.hpp>

#include <array>

namespace twistorlab {

/// Left multiplication by i, j, k on H^k in real coordinates
/// (q0, q1, q2, q3) per quaternionic block, columns are images of basis
/// vectors. They satisfy I J = K and square to minus the identity.
MatrixXd quaternion_i(int k);
MatrixXd quaternion_j(int k);
MatrixXd quaternion_k(int k);

/// A hypercomplex chart: a box in H^k carrying the triple (I, J, K) and a
/// conformally flat metric g = conf * delta. `conf` is real valued and
/// positive on the chart and carries analytic partials.
struct HypercomplexModel {
    Chart chart;
    int k = 1;
    MatrixXd I, J, K;
    ScalarField conf;
};

/// Flat torus fundamental domain: conf = 1, so all fundamental forms are
/// constant and closed.
HypercomplexModel build_flat_torus(int k);

/// Chart of a Hopf-type quotient of H^k minus the origin: conf = |q|^-2 on a
/// box bounded away from zero.
HypercomplexModel build_hopf_chart(int k);

/// a I + b J + c K; squares to -(a^2+b^2+c^2) Id.
MatrixXd structure_from_abc(const HypercomplexModel& model, double a, double b, double c);

/// Fundamental two-form of the structure A: omega_A(u, v) = g(A u, v), i.e.
/// the coefficient matrix is conf * A^T.
FormField fundamental_form(const HypercomplexModel& model, const MatrixXd& structure);

/// The three fundamental forms (omega_I, omega_J, omega_K) in that order.
std::array<FormField, 3> fundamental_forms(const HypercomplexModel& model);

}  // namespace twistorlab
