#include <twistorlab/hypercomplex.hpp>

namespace twistorlab {

namespace {

MatrixXd block_repeat(const Eigen::Matrix4d& block, int k) {
    MatrixXd m = MatrixXd::Zero(4 * k, 4 * k);
    for (int b = 0; b < k; ++b) m.block<4, 4>(4 * b, 4 * b) = block;
    return m;
}

}  // namespace

MatrixXd quaternion_i(int k) {
    Eigen::Matrix4d b;
    b << 0, -1, 0, 0,
         1,  0, 0, 0,
         0,  0, 0, -1,
         0,  0, 1,  0;
    return block_repeat(b, k);
}

MatrixXd quaternion_j(int k) {
    Eigen::Matrix4d b;
    b << 0,  0, -1, 0,
         0,  0,  0, 1,
         1,  0,  0, 0,
         0, -1,  0, 0;
    return block_repeat(b, k);
}

MatrixXd quaternion_k(int k) {
    Eigen::Matrix4d b;
    b << 0,  0, 0, -1,
         0,  0, -1, 0,
         0,  1, 0,  0,
         1,  0, 0,  0;
    return block_repeat(b, k);
}

HypercomplexModel build_flat_torus(int k) {
    require(k >= 1, "flat torus needs k >= 1");
    HypercomplexModel m;
    m.chart = Chart::box(4 * k, 0.5);
    m.k = k;
    m.I = quaternion_i(k);
    m.J = quaternion_j(k);
    m.K = quaternion_k(k);
    m.conf = sf_constant(m.chart, Complex{1.0, 0.0});
    return m;
}

HypercomplexModel build_hopf_chart(int k) {
    require(k >= 1, "hopf chart needs k >= 1");
    HypercomplexModel m;
    m.k = k;
    m.chart.dim = 4 * k;
    m.chart.lo = VectorXd::Constant(4 * k, 0.3);
    m.chart.hi = VectorXd::Constant(4 * k, 1.3);
    m.I = quaternion_i(k);
    m.J = quaternion_j(k);
    m.K = quaternion_k(k);
    ScalarField conf;
    conf.chart = m.chart;
    conf.eval = [](const VectorXd& q) { return Complex{1.0 / q.squaredNorm(), 0.0}; };
    conf.partial_fn = [](int axis, const VectorXd& q) {
        const double r2 = q.squaredNorm();
        return Complex{-2.0 * q[axis] / (r2 * r2), 0.0};
    };
    m.conf = conf;
    return m;
}

MatrixXd structure_from_abc(const HypercomplexModel& model, double a, double b, double c) {
    return a * model.I + b * model.J + c * model.K;
}

FormField fundamental_form(const HypercomplexModel& model, const MatrixXd& structure) {
    require(structure.rows() == model.chart.dim && structure.cols() == model.chart.dim,
            "fundamental_form: structure size mismatch");
    const AlternatingForm shape =
        AlternatingForm::from_antisymmetric(structure.transpose().cast<Complex>().eval());
    return ff_scale(model.conf, ff_constant(model.chart, shape));
}

std::array<FormField, 3> fundamental_forms(const HypercomplexModel& model) {
    return {fundamental_form(model, model.I), fundamental_form(model, model.J),
            fundamental_form(model, model.K)};
}

}  // namespace twistorlab
