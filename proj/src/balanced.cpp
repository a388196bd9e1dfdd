#include <twistorlab/balanced.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace twistorlab {

namespace {

double factorial_d(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

Mask q_axes_mask(const TwistorProduct& x) {
    Mask m = 0;
    for (int a = 4 * x.k; a < x.dim(); ++a) m |= Mask{1} << a;
    return m;
}

/// Strictly increasing frame monomial that omits dz^k and dzbar^l.
Mask hat_mask(int n, int k, int l) {
    Mask m = 0;
    for (int a = 0; a < n; ++a)
        if (a != k) m |= Mask{1} << a;
    for (int b = 0; b < n; ++b)
        if (b != l) m |= Mask{1} << (n + b);
    return m;
}

/// phi^(n-1)/(n-1)! carries the cofactor entry on the (k, l) hatted monomial
/// times this phase: i^(n-1) (-1)^((n-1)(n-2)/2 + k + l).
Complex hat_phase(int n, int k, int l) {
    Complex ph{1.0, 0.0};
    for (int t = 0; t + 1 < n; ++t) ph *= kI;
    const int parity = ((n - 1) * (n - 2) / 2 + k + l) & 1;
    return parity ? -ph : ph;
}

FormField ff_power(const FormField& f, int p) {
    require(p >= 0, "ff_power: negative exponent");
    if (p == 0) return ff_constant(f.chart, AlternatingForm::scalar(f.chart.dim, Complex{1.0, 0.0}));
    FormField out = f;
    for (int i = 1; i < p; ++i) out = ff_wedge(out, f);
    return out;
}

/// d/dw^j (barred: d/dwbar^j) of the metric matrix, from the real-axis pair.
MatrixXcd metric_wirtinger(const HermitianMetricField& g, int j, const VectorXd& p,
                           const NumericConfig& cfg, bool barred) {
    const MatrixXcd dx = metric_partial(g, 2 * j, p, cfg);
    const MatrixXcd dy = metric_partial(g, 2 * j + 1, p, cfg);
    if (barred) return 0.5 * (dx + kI * dy);
    return 0.5 * (dx - kI * dy);
}

/// Lowered torsion tensor at a point: low[i](j, l) = d_i g_{j lbar} - d_j g_{i lbar}.
std::vector<MatrixXcd> lowered_torsion_at(const HermitianMetricField& g, const VectorXd& p,
                                          const NumericConfig& cfg) {
    const int m = g.n;
    std::vector<MatrixXcd> dg(m);
    for (int j = 0; j < m; ++j) dg[j] = metric_wirtinger(g, j, p, cfg, false);
    std::vector<MatrixXcd> low(m, MatrixXcd::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l) low[i](j, l) = dg[i](j, l) - dg[j](i, l);
    return low;
}

/// tr_{omega_Q}(chi) for the Q-axes content of a (1,1) form on the product.
double pullback_q_trace(const QModel& q, int m_axes, const AlternatingForm& form_at,
                        const VectorXd& p) {
    Mask qm = 0;
    for (int a = m_axes; a < m_axes + 2 * q.n; ++a) qm |= Mask{1} << a;
    const MatrixXcd chi = hermitian_from_11(form_at.restrict_to(qm, true), standard_frame(q.n));
    const MatrixXcd gq = q.metric.value(p.segment(m_axes, 2 * q.n));
    return ((hermitian_inverse(gq) * chi).trace()).real();
}

}  // namespace

AlternatingForm michelsohn_forward(const AlternatingForm& phi, int n) {
    require(n >= 2, "michelsohn_forward: complex dimension must be at least 2");
    require(phi.dimension() == 2 * n && phi.degree() == 2,
            "michelsohn_forward: expected a two-form on a chart of real dimension 2n");
    const ComplexFrame frame = standard_frame(n);
    const MatrixXcd h = hermitian_from_11(phi, frame);
    const double scale = std::max(1.0, phi.max_abs());
    require((phi - form_from_hermitian(h, frame)).max_abs() <= 1e-10 * scale,
            "michelsohn_forward: input is not of type (1,1)");
    if (!hermitian_is_positive_definite(h))
        throw ContractError("michelsohn_forward: input is not positive definite (smallest eigenvalue " +
                            std::to_string(hermitian_min_eigenvalue(h)) + ")");
    return wedge_power(phi, n - 1) * Complex{1.0 / factorial_d(n - 1), 0.0};
}

AlternatingForm michelsohn_inverse(const AlternatingForm& psi, int n) {
    require(n >= 2, "michelsohn_inverse: complex dimension must be at least 2");
    require(psi.dimension() == 2 * n && psi.degree() == 2 * n - 2,
            "michelsohn_inverse: expected a (2n-2)-form on a chart of real dimension 2n");
    const ComplexFrame frame = standard_frame(n);
    const AlternatingForm framed = to_frame(psi, frame);
    MatrixXcd m(n, n);
    AlternatingForm rebuilt(2 * n, 2 * n - 2);
    for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
            const Mask mono = hat_mask(n, k, l);
            m(k, l) = framed.coefficient(mono) / hat_phase(n, k, l);
            rebuilt.add_term(mono, framed.coefficient(mono));
        }
    const double scale = std::max(1.0, framed.max_abs());
    require((framed - rebuilt).max_abs() <= 1e-8 * scale,
            "michelsohn_inverse: input is not of type (n-1, n-1)");
    require(is_hermitian(m, 1e-8 * scale),
            "michelsohn_inverse: hatted coefficient matrix is not hermitian");
    if (!hermitian_is_positive_definite(m))
        throw NumericalError("michelsohn_inverse: coefficient matrix is singular or not positive "
                             "definite (smallest eigenvalue " +
                             std::to_string(hermitian_min_eigenvalue(m)) + ")");
    const double det = hermitian_determinant(m);
    const double root = std::pow(det, 1.0 / (n - 1));
    const MatrixXcd xi = root * m.inverse().transpose();
    return form_from_hermitian(xi, frame);
}

AlternatingForm combine_xi_tilde(double a, double b, const AlternatingForm& phi,
                                 const AlternatingForm& theta, int n, int r) {
    require(a > 0.0 && b > 0.0, "combine_xi_tilde: the coefficients A and B must be positive");
    require(n >= 1 && r >= 1, "combine_xi_tilde: factor dimensions must be positive");
    require(phi.dimension() == theta.dimension(),
            "combine_xi_tilde: the factors must live on a common chart");
    require(phi.degree() == 2 && theta.degree() == 2,
            "combine_xi_tilde: both inputs must be two-forms");
    require(wedge_power(phi, n).max_abs() > 0.0,
            "combine_xi_tilde: phi is degenerate for factor dimension n");
    require(wedge_power(theta, r).max_abs() > 0.0,
            "combine_xi_tilde: theta is degenerate for factor dimension r");
    const double alpha = factorial_d(n - 1) * factorial_d(r) * a;
    const double beta = factorial_d(r - 1) * factorial_d(n) * b;
    const double nr = n + r - 1.0;
    const double u = std::pow(alpha, -(r - 1.0) / nr) * std::pow(beta, r / nr);
    const double v = std::pow(alpha, n / nr) * std::pow(beta, -(n - 1.0) / nr);
    return phi * Complex{u, 0.0} + theta * Complex{v, 0.0};
}

ChernTorsionData chern_torsion(const HermitianMetricField& g, const VectorXd& p,
                               const NumericConfig& cfg) {
    const int m = g.n;
    require(m >= 1 && p.size() == g.chart.dim, "chern_torsion: point does not match the chart");
    ChernTorsionData out;
    out.point = p;
    out.g = g.value(p);
    require(is_hermitian(out.g, 1e-8), "chern_torsion: metric matrix is not hermitian");
    if (!hermitian_is_positive_definite(out.g))
        throw NumericalError("chern_torsion: metric is singular or not positive definite");
    out.g_inv = hermitian_inverse(out.g);

    std::vector<MatrixXcd> dg(m);
    for (int j = 0; j < m; ++j) dg[j] = metric_wirtinger(g, j, p, cfg, false);
    out.christoffel.assign(m, MatrixXcd::Zero(m, m));
    out.torsion.assign(m, MatrixXcd::Zero(m, m));
    out.lowered.assign(m, MatrixXcd::Zero(m, m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                Complex acc = 0.0;
                for (int q = 0; q < m; ++q) acc += out.g_inv(q, k) * dg[i](j, q);
                out.christoffel[i](j, k) = acc;
            }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k) {
                out.torsion[i](j, k) = out.christoffel[i](j, k) - out.christoffel[j](i, k);
                out.lowered[i](j, k) = dg[i](j, k) - dg[j](i, k);
            }

    Complex quad = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int pp = 0; pp < m; ++pp)
                for (int q = 0; q < m; ++q)
                    for (int k = 0; k < m; ++k)
                        for (int l = 0; l < m; ++l)
                            quad += out.g_inv(j, i) * out.g_inv(q, pp) * out.g_inv(l, k) *
                                    out.lowered[i](pp, l) * std::conj(out.lowered[j](q, k));
    VectorXcd ttrace = VectorXcd::Zero(m);
    for (int i = 0; i < m; ++i)
        for (int pp = 0; pp < m; ++pp) ttrace[i] += out.torsion[i](pp, pp);
    Complex tracepart = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) tracepart += ttrace[i] * std::conj(ttrace[j]) * out.g_inv(j, i);
    out.psi = (tracepart - 0.5 * quad).real();

    // dbarT[k][i](j, l) = d_{wbar^k} T_{ij lbar}, one stencil layer over the
    // analytic (or stenciled) first derivatives of the metric
    const auto taps = central_stencil(cfg.stencil_order);
    const double step = cfg.step_for_level(1);
    std::vector<std::vector<MatrixXcd>> dbar_t(m, std::vector<MatrixXcd>(m, MatrixXcd::Zero(m, m)));
    for (int kk = 0; kk < m; ++kk) {
        std::vector<MatrixXcd> dx(m, MatrixXcd::Zero(m, m)), dy(m, MatrixXcd::Zero(m, m));
        for (const auto& [off, w] : taps) {
            VectorXd q = p;
            q[2 * kk] += off * step;
            auto low = lowered_torsion_at(g, q, cfg);
            for (int i = 0; i < m; ++i) dx[i] += low[i] * (w / step);
            q = p;
            q[2 * kk + 1] += off * step;
            low = lowered_torsion_at(g, q, cfg);
            for (int i = 0; i < m; ++i) dy[i] += low[i] * (w / step);
        }
        for (int i = 0; i < m; ++i) dbar_t[kk][i] = 0.5 * (dx[i] + kI * dy[i]);
    }
    Complex phi = 0.0;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int k = 0; k < m; ++k)
                for (int l = 0; l < m; ++l) {
                    const Complex anti = dbar_t[k][i](j, l) - dbar_t[l][i](j, k);
                    phi += 0.5 * out.g_inv(k, i) * out.g_inv(l, j) * anti;
                }
    out.phi = phi.real();
    return out;
}

TorsionFormResiduals torsion_form_residuals(const HermitianMetricField& g, const VectorXd& p,
                                            const NumericConfig& cfg) {
    const int m = g.n;
    const int dim = 2 * m;
    const ChernTorsionData t = chern_torsion(g, p, cfg);
    FormField omega = metric_form(g);
    auto split = dolbeault_split_q(omega, cfg);
    const AlternatingForm dw = split.first.eval(p);
    const AlternatingForm dbw = split.second.eval(p);

    auto dz = [dim](int j) {
        return AlternatingForm::covector(dim, 2 * j) + AlternatingForm::covector(dim, 2 * j + 1) * kI;
    };
    AlternatingForm asm_d(dim, 3), asm_db(dim, 3);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            for (int l = 0; l < m; ++l) {
                asm_d += wedge(wedge(dz(i), dz(j)), dz(l).conjugate()) *
                         (kI * 0.5 * t.lowered[i](j, l));
                asm_db += wedge(wedge(dz(i), dz(j).conjugate()), dz(l).conjugate()) *
                          (kI * 0.5 * std::conj(t.lowered[l](j, i)));
            }
    TorsionFormResiduals out;
    const double scale = std::max(1.0, std::max(dw.max_abs(), dbw.max_abs()));
    out.d_form = (dw - asm_d).max_abs() / scale;
    out.dbar_form = (dbw - asm_db).max_abs() / scale;

    const AlternatingForm omega_p = omega.eval(p);
    const AlternatingForm top = wedge_power(omega_p, m);
    const double top_scale = std::max(1.0, top.max_abs());
    if (m > 2) {
        const AlternatingForm lhs = wedge(wedge(dw, dbw), wedge_power(omega_p, m - 3)) * kI;
        const AlternatingForm rhs = top * Complex{t.psi / (m * (m - 1.0) * (m - 2.0)), 0.0};
        out.wedge_identity = (lhs - rhs).max_abs() / top_scale;
    }
    const FormField ddbar = dolbeault_split_q(split.second, cfg).first;
    const AlternatingForm lhs_pp = wedge(ddbar.eval(p) * kI, wedge_power(omega_p, m - 2));
    const AlternatingForm rhs_pp = top * Complex{t.phi / (m * (m - 1.0)), 0.0};
    out.ddbar_identity = (lhs_pp - rhs_pp).max_abs() / top_scale;
    return out;
}

double trace_wedge_residual(const MatrixXcd& g, const MatrixXcd& chi) {
    const int m = static_cast<int>(g.rows());
    require(g.cols() == m && chi.rows() == m && chi.cols() == m,
            "trace_wedge_residual: square matrices of one size expected");
    const ComplexFrame frame = standard_frame(m);
    const AlternatingForm omega = form_from_hermitian(g, frame);
    const AlternatingForm chif = form_from_hermitian(chi, frame);
    const Complex tr = (hermitian_inverse(g) * chi).trace();
    const AlternatingForm lhs = wedge_power(omega, m) * tr;
    const AlternatingForm rhs = wedge(chif, wedge_power(omega, m - 1)) * Complex{double(m), 0.0};
    return (lhs - rhs).max_abs() / std::max(1.0, lhs.max_abs());
}

HyperkahlerBalanced balanced_hk(const TwistorProduct& x, double t, int points, Rng& rng,
                                const NumericConfig& cfg) {
    require(t > 0.0, "balanced_hk: the scale t must be positive");
    require(points > 0, "balanced_hk: need at least one sample point");
    require(x.m.conf.depends == 0, "balanced_hk: the construction needs the flat fiber model");
    {
        FormField dq = exterior_d(omega_q_field(x), cfg);
        if (dq.eval(x.chart.center()).max_abs() > 1e-8)
            throw ContractError("balanced_hk: omega_Q must be closed");
    }
    HyperkahlerBalanced out;
    out.omega = ff_add(omega_m_field(x), ff_scale(omega_q_field(x), Complex{t, 0.0}));
    FormField dpow = exterior_d(ff_power(out.omega, x.n + x.r - 1), cfg);
    FormField domega = exterior_d(out.omega, cfg);
    out.points = points;
    out.d_omega_floor = std::numeric_limits<double>::infinity();
    out.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
    for (int s = 0; s < points; ++s) {
        const VectorXd p = x.chart.sample(rng, 0.05);
        out.d_power_residual = std::max(out.d_power_residual, dpow.eval(p).max_abs());
        out.d_omega_floor = std::min(out.d_omega_floor, domega.eval(p).max_abs());
        const auto pos = is_positive_pp(out.omega.eval(p), structure_at(x, p), true, rng);
        if (!pos.positive)
            throw NumericalError("balanced_hk: omega is not strictly positive at a sampled point");
        out.min_metric_eigenvalue = std::min(out.min_metric_eigenvalue, pos.worst_value);
    }
    return out;
}

SubmersionBalanced balanced_submersion(const TwistorProduct& x, double gamma, int points,
                                       Rng& rng, const NumericConfig& cfg, bool auto_raise) {
    require(gamma > 0.0, "balanced_submersion: gamma must be positive");
    require(points > 0, "balanced_submersion: need at least one sample point");
    require(x.m.conf.depends == 0,
            "balanced_submersion: the explicit assembly needs the flat fiber model");
    const int n = x.n, r = x.r, top = n + r - 1;

    std::vector<VectorXd> pts;
    pts.push_back(x.chart.center());
    for (int s = 1; s < points; ++s) pts.push_back(x.chart.sample(rng, 0.05));
    for (const VectorXd& p : pts) {
        const double dh = map_wirtinger_z(x.h, p.segment(4 * x.k, 2 * n), cfg).norm();
        if (dh < 1e-8)
            throw ContractError("balanced_submersion: h is critical on the sample region; "
                                "use the cutoff correction path (critical_cutoff_xi)");
    }

    // torsion scalars of the fiber metric in untwisted coordinates; the flat
    // model makes them exactly zero, kept in the scalar for shape
    HermitianMetricField gm;
    gm.chart = x.m.chart;
    gm.n = r;
    const ScalarField conf = x.m.conf;
    gm.value = [conf, r](const VectorXd& q) {
        return MatrixXcd(MatrixXcd::Identity(r, r) * (0.5 * conf.eval(q)));
    };
    if (conf.partial_fn)
        gm.partial = [conf, r](int axis, const VectorXd& q) {
            return MatrixXcd(MatrixXcd::Identity(r, r) * (0.5 * conf.partial_fn(axis, q)));
        };
    const ChernTorsionData t0 = chern_torsion(gm, x.m.chart.center(), cfg);
    const double scalar_corr = (t0.phi + (r > 2 ? t0.psi : 0.0)) / r;

    double gma = gamma;
    while (auto_raise && gma + scalar_corr < 0.1) gma *= 2.0;
    if (gma + scalar_corr < 0.1)
        throw NumericalError("balanced_submersion: gamma too small, the leading scalar is " +
                             std::to_string(gma + scalar_corr));
    const double a_scalar = gma + scalar_corr;

    const FormField wm = omega_m_field(x);
    const FormField wq = omega_q_field(x);
    const FormField pb = pullback_field(x);
    const FormField wq_n1 = ff_power(wq, n - 1);
    SubmersionBalanced out;
    out.gamma = gma;
    out.min_scalar = a_scalar;
    out.power = ff_add(ff_scale(ff_wedge(ff_power(wm, r), wq_n1), Complex{gma, 0.0}),
                       ff_scale(ff_wedge(ff_wedge(pb, ff_power(wm, r - 1)), wq_n1), Complex{2.0, 0.0}));

    FormField metric;
    metric.chart = x.chart;
    metric.degree = 2;
    {
        const QModel qmod = x.q;
        const int m_axes = 4 * x.k;
        const FormField wm_c = wm, wq_c = wq, pb_c = pb;
        const int nn = n, rr = r;
        const double a_c = a_scalar;
        metric.eval = [qmod, m_axes, wm_c, wq_c, pb_c, nn, rr, a_c](const VectorXd& p) {
            const double tr = pullback_q_trace(qmod, m_axes, pb_c.eval(p), p);
            return combine_xi_tilde(a_c, 2.0 * tr / nn, wq_c.eval(p), wm_c.eval(p), nn, rr);
        };
    }
    out.metric = metric;

    FormField dpow = exterior_d(out.power, cfg);
    const double nfact = factorial_d(top);
    out.min_trace = std::numeric_limits<double>::infinity();
    out.min_metric_eigenvalue = std::numeric_limits<double>::infinity();
    for (const VectorXd& p : pts) {
        const AlternatingForm xi = metric.eval(p);
        const AlternatingForm pw = out.power.eval(p);
        const double scale = std::max(1.0, pw.max_abs());
        out.identity_residual = std::max(
            out.identity_residual,
            (wedge_power(xi, top) * Complex{1.0 / nfact, 0.0} - pw).max_abs() / scale);
        out.d_power_residual = std::max(out.d_power_residual, dpow.eval(p).max_abs() / scale);
        out.min_trace = std::min(out.min_trace, pullback_q_trace(x.q, 4 * x.k, pb.eval(p), p));
        const MatrixXd j = structure_at(x, p);
        const auto pos = is_positive_pp(xi, j, true, rng);
        if (!pos.positive)
            throw NumericalError("balanced_submersion: the metric is not strictly positive at a sample");
        out.min_metric_eigenvalue = std::min(out.min_metric_eigenvalue, pos.worst_value);
        const auto pos_pw = is_positive_pp(pw, j, true, rng);
        if (!pos_pw.positive)
            throw NumericalError("balanced_submersion: the closed power form is not strictly positive at a sample");
    }
    out.points = static_cast<int>(pts.size());
    return out;
}

CutoffXi critical_cutoff_xi(const TwistorProduct& x, int slice_axis, double t,
                            const VectorXd& p, const NumericConfig& cfg) {
    require(slice_axis >= 0 && slice_axis < x.n, "critical_cutoff_xi: slice axis out of range");
    require(t >= 0.0, "critical_cutoff_xi: the exponent t must be nonnegative");
    require(p.size() == x.chart.dim, "critical_cutoff_xi: point does not match the chart");
    const int a0 = 4 * x.k + 2 * slice_axis;
    const int a1 = a0 + 1;
    require(std::abs(p[a0]) <= 1e-12 && std::abs(p[a1]) <= 1e-12,
            "critical_cutoff_xi: the expansion point must lie on the critical slice {z = 0}");
    const int r = x.r;
    const FormField wm_r1 = ff_power(omega_m_field(x), r - 1);

    ScalarField v;
    v.chart = x.chart;
    v.eval = [a0, a1, t](const VectorXd& q) {
        return Complex{std::pow(1.0 + q[a0] * q[a0] + q[a1] * q[a1], t), 0.0};
    };
    v.partial_fn = [a0, a1, t](int axis, const VectorXd& q) {
        if (axis != a0 && axis != a1) return Complex{0.0, 0.0};
        const double base = 1.0 + q[a0] * q[a0] + q[a1] * q[a1];
        return Complex{t * std::pow(base, t - 1.0) * 2.0 * q[axis], 0.0};
    };
    v.depends = (Mask{1} << a0) | (Mask{1} << a1);
    const FormField pot = ff_scale(v, wm_r1);

    auto j_at = [&x](const VectorXd& q) { return structure_at(x, q); };
    const Mask j_dep = q_axes_mask(x);
    const FormField dbar1 = dolbeault_split_total(pot, j_at, cfg, j_dep).second;
    const FormField ddbar = dolbeault_split_total(dbar1, j_at, cfg, j_dep).first;

    CutoffXi out{AlternatingForm(x.dim(), 2 * r), AlternatingForm(x.dim(), 2 * r), 0.0, 0.0};
    out.direct = ddbar.eval(p) * kI;

    const AlternatingForm wr1 = wm_r1.eval(p);
    const AlternatingForm dz1 = AlternatingForm::covector(x.dim(), a0) +
                                AlternatingForm::covector(x.dim(), a1) * kI;
    AlternatingForm expansion = wedge(wr1, wedge(dz1, dz1.conjugate())) * (kI * t) +
                                wedge(pullback_field(x).eval(p), wr1) * Complex{2.0, 0.0};
    if (x.m.conf.depends != 0) {
        const FormField dbm = dolbeault_split_m(wm_r1, j_at, cfg, j_dep).second;
        const FormField dm_dbm = dolbeault_split_m(dbm, j_at, cfg, j_dep).first;
        expansion += dm_dbm.eval(p) * kI;
    }
    out.expansion = expansion;
    out.residual = (out.direct - out.expansion).max_abs() / std::max(1.0, out.direct.max_abs());

    const AlternatingForm wq_n1 = wedge_power(omega_q_field(x).eval(p), x.n - 1);
    const AlternatingForm w = wedge(out.direct, wq_n1);
    const MatrixXd j = structure_at(x, p);
    const ComplexFrame frame =
        product_frame(j.topLeftCorner(4 * x.k, 4 * x.k), standard_structure(x.n));
    const int m = r + x.n;
    std::vector<std::vector<int>> basis;
    for (int d = 0; d < r; ++d) {
        std::vector<int> tuple;
        for (int a = 0; a < m; ++a)
            if (a != d) tuple.push_back(a);
        basis.push_back(tuple);
    }
    out.e_margin = hermitian_min_eigenvalue(hermitian_gram(w, frame, basis));
    return out;
}

Lemma2Result lemma2_search_c(const std::vector<MatrixXcd>& h,
                             const std::vector<MatrixXcd>& h_prime, int e_rank) {
    require(!h.empty() && h.size() == h_prime.size(),
            "lemma2_search_c: matched nonempty sample lists expected");
    const int dim = static_cast<int>(h[0].rows());
    require(e_rank > 0 && e_rank < dim, "lemma2_search_c: the E block must be a proper split");
    const int f = dim - e_rank;
    double bound = 1.0;
    for (std::size_t s = 0; s < h.size(); ++s) {
        const MatrixXcd& hs = h[s];
        const MatrixXcd& ps = h_prime[s];
        require(hs.rows() == dim && hs.cols() == dim && ps.rows() == dim && ps.cols() == dim,
                "lemma2_search_c: inconsistent matrix sizes");
        require(is_hermitian(hs, 1e-10) && is_hermitian(ps, 1e-10),
                "lemma2_search_c: hermitian inputs expected");
        const MatrixXcd he = hs.topLeftCorner(e_rank, e_rank);
        if (!hermitian_is_positive_definite(he))
            throw ContractError("lemma2_search_c: H is not positive definite on the E block at sample " +
                                std::to_string(s));
        const double pscale = std::max(1.0, ps.cwiseAbs().maxCoeff());
        if (ps.topRows(e_rank).cwiseAbs().maxCoeff() > 1e-12 * pscale)
            throw ContractError("lemma2_search_c: H' must vanish on the E block at sample " +
                                std::to_string(s));
        const MatrixXcd kf = ps.bottomRightCorner(f, f);
        if (!hermitian_is_positive_definite(kf))
            throw ContractError("lemma2_search_c: H' is not positive definite on the F block at sample " +
                                std::to_string(s));
        // Schur estimate in the frame where H|E and H'|F are identities
        const Eigen::LLT<MatrixXcd> le(he), lf(kf);
        const MatrixXcd se = MatrixXcd(le.matrixL()).adjoint().inverse();
        const MatrixXcd sf = MatrixXcd(lf.matrixL()).adjoint().inverse();
        const MatrixXcd cross = se.adjoint() * hs.topRightCorner(e_rank, f) * sf;
        const MatrixXcd hff = sf.adjoint() * hs.bottomRightCorner(f, f) * sf;
        bound = std::max(bound, cross.squaredNorm() +
                                    std::max(0.0, -hermitian_min_eigenvalue(hff)));
    }
    double c = 1.0;
    auto all_pd = [&](double cc) {
        for (std::size_t s = 0; s < h.size(); ++s)
            if (!hermitian_is_positive_definite(h[s] + cc * h_prime[s])) return false;
        return true;
    };
    while (!all_pd(c)) {
        c *= 2.0;
        if (c > 1e18)
            throw NumericalError("lemma2_search_c: no finite doubling constant certifies the sum");
    }
    return {c, bound};
}

WitnessSample witness_coefficient(const TwistorProduct& x, const FormField& omega_x,
                                  const VectorXd& p, const NumericConfig& cfg) {
    require(x.m.conf.depends == 0,
            "nonkahler witness: the closed-form vertical derivative needs the flat fiber model");
    require(p.size() == x.chart.dim, "nonkahler witness: point does not match the chart");
    WitnessSample out;
    out.point = p;
    const AlternatingForm xi = omega_x.eval(p);
    {
        Rng probe(0x5eedu);
        const auto pos = is_positive_pp(xi, structure_at(x, p), true, probe);
        require(pos.positive, "nonkahler witness: omega_X must be strictly positive at the point");
    }
    const AlternatingForm w =
        wedge(wedge(pullback_field(x).eval(p), omega_m_field(x).eval(p)),
              wedge_power(xi, x.n + x.r - 2)) *
        Complex{2.0, 0.0};
    const AlternatingForm vol =
        wedge_power(xi, x.n + x.r) * Complex{1.0 / factorial_d(x.n + x.r), 0.0};
    out.coefficient = (w.top_coefficient() / vol.top_coefficient()).real();
    out.dh_norm = map_wirtinger_z(x.h, p.segment(4 * x.k, 2 * x.n), cfg).norm();
    return out;
}

WitnessReport nonkahler_witness(const TwistorProduct& x, const FormField& omega_x, int points,
                                Rng& rng, const NumericConfig& cfg, double tol) {
    require(points > 0, "nonkahler_witness: need at least one sample point");
    WitnessReport out;
    out.min_coefficient = std::numeric_limits<double>::infinity();
    for (int s = 0; s < points; ++s) {
        const VectorXd p = x.chart.sample(rng, 0.02);
        WitnessSample ws = witness_coefficient(x, omega_x, p, cfg);
        out.min_coefficient = std::min(out.min_coefficient, ws.coefficient);
        if (ws.coefficient < -tol) out.violations.push_back(p);
        out.samples.push_back(std::move(ws));
    }
    return out;
}

}  // namespace twistorlab
