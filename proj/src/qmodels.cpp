#include <twistorlab/exterior.hpp>
#include <twistorlab/qmodels.hpp>

#include <cmath>

namespace twistorlab {

namespace {

double abs2(Complex z) { return std::norm(z); }

Complex coord(const VectorXd& p, int j) { return Complex{p[2 * j], p[2 * j + 1]}; }

Complex fd_scalar(const std::function<Complex(const VectorXd&)>& fn, int axis,
                  const VectorXd& p, const NumericConfig& cfg) {
    const double h = cfg.fd_step;
    Complex acc{0.0, 0.0};
    for (const auto& [offset, weight] : central_stencil(cfg.stencil_order)) {
        VectorXd q = p;
        q[axis] += offset * h;
        acc += fn(q) * (weight / h);
    }
    return acc;
}

AlternatingForm holomorphic_covector(int dim, int j) {
    return AlternatingForm::covector(dim, 2 * j) +
           AlternatingForm::covector(dim, 2 * j + 1) * kI;
}

}  // namespace

Eigen::Vector3d twistor_sphere_map(Complex zeta) {
    const double u = 1.0 + abs2(zeta);
    return {(1.0 - abs2(zeta)) / u, 2.0 * zeta.real() / u, 2.0 * zeta.imag() / u};
}

Eigen::Vector3cd twistor_sphere_map_dz(Complex zeta) {
    const Complex zb = std::conj(zeta);
    const double u = 1.0 + abs2(zeta);
    const double u2 = u * u;
    return {-2.0 * zb / u2, (1.0 - zb * zb) / u2, -kI * (1.0 + zb * zb) / u2};
}

Eigen::Vector3cd twistor_sphere_map_dzbar(Complex zeta) {
    const double u = 1.0 + abs2(zeta);
    const double u2 = u * u;
    return {-2.0 * zeta / u2, (1.0 - zeta * zeta) / u2, kI * (1.0 + zeta * zeta) / u2};
}

Eigen::Vector3cd sigma_coefficients(Complex zeta) { return twistor_sphere_map_dzbar(zeta); }

Eigen::Vector3cd sigma_coefficients_dz(Complex zeta) {
    const Complex zb = std::conj(zeta);
    const double u = 1.0 + abs2(zeta);
    const double u3 = u * u * u;
    return {-2.0 * (1.0 - zeta * zb) / u3, -2.0 * (zeta + zb) / u3,
            2.0 * kI * (zeta - zb) / u3};
}

Eigen::Vector3cd sigma_coefficients_dzbar(Complex zeta) {
    const double u = 1.0 + abs2(zeta);
    const double u3 = u * u * u;
    return {4.0 * zeta * zeta / u3, -2.0 * zeta * (1.0 - zeta * zeta) / u3,
            -2.0 * kI * zeta * (1.0 + zeta * zeta) / u3};
}

MatrixXcd metric_partial(const HermitianMetricField& g, int axis, const VectorXd& p,
                         const NumericConfig& cfg) {
    if (g.partial && cfg.use_analytic) return g.partial(axis, p);
    const double h = cfg.fd_step;
    MatrixXcd acc = MatrixXcd::Zero(g.n, g.n);
    for (const auto& [offset, weight] : central_stencil(cfg.stencil_order)) {
        VectorXd q = p;
        q[axis] += offset * h;
        acc += g.value(q) * (weight / h);
    }
    return acc;
}

FormField metric_form(const HermitianMetricField& g) {
    FormField f;
    f.chart = g.chart;
    f.degree = 2;
    const ComplexFrame frame = standard_frame(g.n);
    f.eval = [g, frame](const VectorXd& p) { return form_from_hermitian(g.value(p), frame); };
    if (g.partial)
        f.partial_fn = [g, frame](int axis, const VectorXd& p) {
            return form_from_hermitian(g.partial(axis, p), frame);
        };
    return f;
}

namespace {

QModel finish_model(std::string name, HermitianMetricField metric) {
    QModel q;
    q.name = std::move(name);
    q.n = metric.n;
    q.omega = metric_form(metric);
    q.metric = std::move(metric);
    return q;
}

}  // namespace

QModel qmodel_p1() {
    HermitianMetricField g;
    g.chart = Chart::box(2, 1.5);
    g.n = 1;
    g.value = [](const VectorXd& p) {
        const double u = 1.0 + p.squaredNorm();
        return (MatrixXcd(1, 1) << Complex{1.0 / (u * u), 0.0}).finished();
    };
    g.partial = [](int axis, const VectorXd& p) {
        const double u = 1.0 + p.squaredNorm();
        return (MatrixXcd(1, 1) << Complex{-4.0 * p[axis] / (u * u * u), 0.0}).finished();
    };
    return finish_model("p1", std::move(g));
}

QModel qmodel_p1xp1() {
    HermitianMetricField g;
    g.chart = Chart::box(4, 1.5);
    g.n = 2;
    auto u_of = [](const VectorXd& p, int j) {
        return 1.0 + p[2 * j] * p[2 * j] + p[2 * j + 1] * p[2 * j + 1];
    };
    g.value = [u_of](const VectorXd& p) {
        MatrixXcd m = MatrixXcd::Zero(2, 2);
        for (int j = 0; j < 2; ++j) {
            const double u = u_of(p, j);
            m(j, j) = Complex{1.0 / (u * u), 0.0};
        }
        return m;
    };
    g.partial = [u_of](int axis, const VectorXd& p) {
        MatrixXcd m = MatrixXcd::Zero(2, 2);
        const int j = axis / 2;
        const double u = u_of(p, j);
        m(j, j) = Complex{-4.0 * p[axis] / (u * u * u), 0.0};
        return m;
    };
    return finish_model("p1xp1", std::move(g));
}

QModel qmodel_hirzebruch(int twist, double s) {
    require(twist >= 0, "hirzebruch: twist must be nonnegative");
    require(s > 0.0, "hirzebruch: the potential weight s must be positive");
    HermitianMetricField g;
    g.chart = Chart::box(4, 1.2);
    g.n = 2;
    const double m = twist;
    g.value = [m, s](const VectorXd& p) {
        const Complex z = coord(p, 0), w = coord(p, 1);
        const double A = 1.0 + abs2(z);
        const double Am = std::pow(A, m);
        const double B = 1.0 + Am * abs2(w);
        MatrixXcd h(2, 2);
        h(0, 0) = s / (A * A) + m * abs2(w) * std::pow(A, m - 2.0) * (B + m * abs2(z)) / (B * B);
        h(0, 1) = m * std::pow(A, m - 1.0) * std::conj(z) * w / (B * B);
        h(1, 0) = std::conj(h(0, 1));
        h(1, 1) = Am / (B * B);
        return h;
    };
    QModel q = finish_model("hirzebruch", std::move(g));
    // reject a bad potential early: spot-check positivity on the chart
    Rng rng(7u);
    for (int trial = 0; trial < 16; ++trial) {
        const VectorXd p = q.metric.chart.sample(rng, 0.05);
        if (!hermitian_is_positive_definite(q.metric.value(p)))
            throw NumericalError("hirzebruch metric is not positive definite on the chart");
    }
    return q;
}

QModel qmodel_affine(int n) {
    require(n >= 1, "affine model needs n >= 1");
    HermitianMetricField g;
    g.chart = Chart::box(2 * n, 1.5);
    g.n = n;
    g.value = [n](const VectorXd&) { return MatrixXcd::Identity(n, n).eval(); };
    g.partial = [n](int, const VectorXd&) { return MatrixXcd::Zero(n, n).eval(); };
    QModel q = finish_model("affine", std::move(g));
    q.omega.depends = 0;
    return q;
}

MapToP1 map_identity() {
    MapToP1 h;
    h.n = 1;
    h.eval = [](const VectorXd& p) { return coord(p, 0); };
    h.wirtinger_z = [](const VectorXd&) {
        return (VectorXcd(1) << Complex{1.0, 0.0}).finished();
    };
    h.wirtinger_zbar = [](const VectorXd&) { return VectorXcd::Zero(1).eval(); };
    return h;
}

MapToP1 map_square() {
    MapToP1 h;
    h.n = 1;
    h.eval = [](const VectorXd& p) {
        const Complex z = coord(p, 0);
        return z * z;
    };
    h.wirtinger_z = [](const VectorXd& p) {
        return (VectorXcd(1) << 2.0 * coord(p, 0)).finished();
    };
    h.wirtinger_zbar = [](const VectorXd&) { return VectorXcd::Zero(1).eval(); };
    return h;
}

MapToP1 map_projection(int n, int j) {
    require(j >= 0 && j < n, "map_projection: index out of range");
    MapToP1 h;
    h.n = n;
    h.eval = [j](const VectorXd& p) { return coord(p, j); };
    h.wirtinger_z = [n, j](const VectorXd&) {
        VectorXcd v = VectorXcd::Zero(n);
        v[j] = Complex{1.0, 0.0};
        return v;
    };
    h.wirtinger_zbar = [n](const VectorXd&) { return VectorXcd::Zero(n).eval(); };
    return h;
}

MapToP1 map_z1sq_plus_z2() {
    MapToP1 h;
    h.n = 2;
    h.eval = [](const VectorXd& p) {
        const Complex z1 = coord(p, 0);
        return z1 * z1 + coord(p, 1);
    };
    h.wirtinger_z = [](const VectorXd& p) {
        return (VectorXcd(2) << 2.0 * coord(p, 0), Complex{1.0, 0.0}).finished();
    };
    h.wirtinger_zbar = [](const VectorXd&) { return VectorXcd::Zero(2).eval(); };
    return h;
}

MapToP1 map_conj() {
    MapToP1 h;
    h.n = 1;
    h.eval = [](const VectorXd& p) { return std::conj(coord(p, 0)); };
    h.wirtinger_z = [](const VectorXd&) { return VectorXcd::Zero(1).eval(); };
    h.wirtinger_zbar = [](const VectorXd&) {
        return (VectorXcd(1) << Complex{1.0, 0.0}).finished();
    };
    h.holomorphic = false;
    return h;
}

VectorXcd map_wirtinger_z(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg) {
    if (h.wirtinger_z && cfg.use_analytic) return h.wirtinger_z(p);
    VectorXcd v(h.n);
    for (int j = 0; j < h.n; ++j)
        v[j] = 0.5 * (fd_scalar(h.eval, 2 * j, p, cfg) -
                      kI * fd_scalar(h.eval, 2 * j + 1, p, cfg));
    return v;
}

VectorXcd map_wirtinger_zbar(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg) {
    if (h.wirtinger_zbar && cfg.use_analytic) return h.wirtinger_zbar(p);
    VectorXcd v(h.n);
    for (int j = 0; j < h.n; ++j)
        v[j] = 0.5 * (fd_scalar(h.eval, 2 * j, p, cfg) +
                      kI * fd_scalar(h.eval, 2 * j + 1, p, cfg));
    return v;
}

double cr_residual(const MapToP1& h, const VectorXd& p, const NumericConfig& cfg) {
    return map_wirtinger_zbar(h, p, cfg).cwiseAbs().maxCoeff();
}

FormField pullback_fs(const MapToP1& h, const Chart& chart) {
    require(chart.dim == 2 * h.n, "pullback_fs: chart dimension must match the map domain");
    FormField f;
    f.chart = chart;
    f.degree = 2;
    const int dim = chart.dim;
    f.eval = [h, dim](const VectorXd& p) {
        NumericConfig cfg;  // analytic Wirtingers are present on all shipped maps
        const VectorXcd wz = map_wirtinger_z(h, p, cfg);
        const VectorXcd wzb = map_wirtinger_zbar(h, p, cfg);
        AlternatingForm dh(dim, 1);
        for (int j = 0; j < h.n; ++j) {
            dh += holomorphic_covector(dim, j) * wz[j];
            dh += holomorphic_covector(dim, j).conjugate() * wzb[j];
        }
        const double u = 1.0 + abs2(h.eval(p));
        return wedge(dh, dh.conjugate()) * (kI / (u * u));
    };
    return f;
}

double check_holomorphic(const std::function<VectorXd(const VectorXd&)>& map,
                         const std::function<MatrixXd(const VectorXd&)>& j_src,
                         const std::function<MatrixXd(const VectorXd&)>& j_dst,
                         const VectorXd& p, const NumericConfig& cfg) {
    const VectorXd f0 = map(p);
    const int rows = static_cast<int>(f0.size());
    const int cols = static_cast<int>(p.size());
    MatrixXd df = MatrixXd::Zero(rows, cols);
    const double h = cfg.fd_step;
    for (int a = 0; a < cols; ++a) {
        VectorXd col = VectorXd::Zero(rows);
        for (const auto& [offset, weight] : central_stencil(cfg.stencil_order)) {
            VectorXd q = p;
            q[a] += offset * h;
            col += map(q) * (weight / h);
        }
        df.col(a) = col;
    }
    return (df * j_src(p) - j_dst(f0) * df).cwiseAbs().maxCoeff();
}

}  // namespace twistorlab
