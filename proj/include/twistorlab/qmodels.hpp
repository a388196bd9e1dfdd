#pragma once

#include <twistorlab/fields.hpp>

#include <string>

namespace twistorlab {

/// Stereographic parametrization of the unit two-sphere by an affine chart:
/// zeta -> (a, b, c) = ((1 - |zeta|^2), 2 Re zeta, 2 Im zeta) / (1 + |zeta|^2).
/// zeta = 0, 1, i land on the three coordinate poles (1,0,0), (0,1,0), (0,0,1).
Eigen::Vector3d twistor_sphere_map(Complex zeta);

/// Wirtinger derivatives of the sphere map with respect to zeta and zetabar.
Eigen::Vector3cd twistor_sphere_map_dz(Complex zeta);
Eigen::Vector3cd twistor_sphere_map_dzbar(Complex zeta);

/// Coefficients (s1, s2, s3) of the vertical (2,0)-leak of the sphere map;
/// they equal the zetabar-Wirtinger of (a, b, c).
Eigen::Vector3cd sigma_coefficients(Complex zeta);
Eigen::Vector3cd sigma_coefficients_dz(Complex zeta);
Eigen::Vector3cd sigma_coefficients_dzbar(Complex zeta);

/// Hermitian metric g_{i jbar}(w) on a chart of a complex n-fold, given in
/// the holomorphic coordinates w^j = x^{2j} + i x^{2j+1}. `partial` holds
/// analytic real-axis derivatives of the matrix and may be empty.
struct HermitianMetricField {
    Chart chart;
    int n = 0;
    std::function<MatrixXcd(const VectorXd&)> value;
    std::function<MatrixXcd(int, const VectorXd&)> partial;
};

/// Real-axis derivative of the metric matrix: analytic when available,
/// otherwise a central stencil at cfg.fd_step.
MatrixXcd metric_partial(const HermitianMetricField& g, int axis, const VectorXd& p,
                         const NumericConfig& cfg);

/// Fundamental form omega = i sum g_{i jbar} dw^i ^ dwbar^j as a field.
FormField metric_form(const HermitianMetricField& g);

/// A complex model base: chart, Hermitian metric, its fundamental form.
struct QModel {
    std::string name;
    HermitianMetricField metric;
    FormField omega;
    int n = 0;
};

/// Fubini-Study chart |zeta| <= 1.5 with omega = i dz^dzbar / (1+|z|^2)^2.
QModel qmodel_p1();

/// Product of two Fubini-Study charts.
QModel qmodel_p1xp1();

/// Calabi-style metric on a chart of the degree-`twist` ruled surface:
/// potential s log(1+|z|^2) + log(1 + (1+|z|^2)^twist |w|^2), s > 0.
QModel qmodel_hirzebruch(int twist, double s);

/// Flat C^n chart with omega = i sum dw^j ^ dwbar^j.
QModel qmodel_affine(int n);

/// Map from a model chart to the affine twistor-sphere chart, with optional
/// analytic Wirtinger derivatives (component j differentiates along w^j).
struct MapToP1 {
    int n = 0;
    std::function<Complex(const VectorXd&)> eval;
    std::function<VectorXcd(const VectorXd&)> wirtinger_z;
    std::function<VectorXcd(const VectorXd&)> wirtinger_zbar;
    bool holomorphic = true;
};

MapToP1 map_identity();
MapToP1 map_square();                  // zeta = (w^1)^2
MapToP1 map_projection(int n, int j);  // zeta = w^j on an n-dim model
MapToP1 map_z1sq_plus_z2();            // zeta = (w^1)^2 + w^2 on a 2-dim model
MapToP1 map_conj();                    // zeta = conj(w^1); not holomorphic

/// Wirtinger derivatives of the map, analytic when present, else stencils.
VectorXcd map_wirtinger_z(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg);
VectorXcd map_wirtinger_zbar(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg);

/// Largest |dh/dwbar^j|: zero exactly when h is holomorphic at p.
double cr_residual(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg);

/// Pullback of the Fubini-Study form along h:
/// i dh ^ conj(dh) / (1 + |h|^2)^2 with dh the full first differential.
FormField pullback_fs(const MapToP1& h, const Chart& chart);

/// Residual | dF . J_src - J_dst(F(p)) . dF | of the holomorphy equation for
/// a smooth map between almost-complex charts; dF is a stencil Jacobian.
double check_holomorphic(const std::function<VectorXd(const VectorXd&)>& map,
                         const std::function<MatrixXd(const VectorXd&)>& j_src,
                         const std::function<MatrixXd(const VectorXd&)>& j_dst,
                         const VectorXd& p, const NumericConfig& cfg);

}  // namespace twistorlab
