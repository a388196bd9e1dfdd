#include <twistorlab/twistor_product.hpp>

#include <cmath>

namespace twistorlab {

namespace {

Mask q_block_mask(const TwistorProduct& x) {
    Mask m = 0;
    for (int a = 4 * x.k; a < x.dim(); ++a) m |= Mask{1} << a;
    return m;
}

VectorXd q_slot(const TwistorProduct& x, const VectorXd& p) {
    return p.segment(4 * x.k, 2 * x.n);
}

// d/d(real axis t) of h on the Q slot: t even is the x axis of w^{t/2}.
Complex map_axis_derivative(const MapToP1& h, const VectorXd& q, int t) {
    NumericConfig cfg;
    const VectorXcd wz = map_wirtinger_z(h, q, cfg);
    const VectorXcd wzb = map_wirtinger_zbar(h, q, cfg);
    const int j = t / 2;
    if (t % 2 == 0) return wz[j] + wzb[j];
    return kI * (wz[j] - wzb[j]);
}

// Chain rule for F(h(q)) with F given by its two Wirtinger derivatives.
template <typename DzFn, typename DzbFn>
Complex chained_partial(const MapToP1& h, const VectorXd& q, int t, int component,
                        DzFn&& dz, DzbFn&& dzb) {
    const Complex zeta = h.eval(q);
    const Complex dh = map_axis_derivative(h, q, t);
    return dz(zeta)[component] * dh + dzb(zeta)[component] * std::conj(dh);
}

ScalarField sphere_component_field(const TwistorProduct& x, int component, bool sigma) {
    ScalarField f;
    f.chart = x.chart;
    const MapToP1 h = x.h;
    const int off = 4 * x.k;
    const int qdim = 2 * x.n;
    if (sigma) {
        f.eval = [h, off, qdim, component](const VectorXd& p) {
            return sigma_coefficients(h.eval(p.segment(off, qdim)))[component];
        };
        f.partial_fn = [h, off, qdim, component](int axis, const VectorXd& p) {
            if (axis < off) return Complex{0.0, 0.0};
            return chained_partial(h, p.segment(off, qdim), axis - off, component,
                                   sigma_coefficients_dz, sigma_coefficients_dzbar);
        };
    } else {
        f.eval = [h, off, qdim, component](const VectorXd& p) {
            return Complex{twistor_sphere_map(h.eval(p.segment(off, qdim)))[component], 0.0};
        };
        f.partial_fn = [h, off, qdim, component](int axis, const VectorXd& p) {
            if (axis < off) return Complex{0.0, 0.0};
            return chained_partial(h, p.segment(off, qdim), axis - off, component,
                                   twistor_sphere_map_dz, twistor_sphere_map_dzbar);
        };
    }
    Mask dep = 0;
    for (int a = off; a < off + qdim; ++a) dep |= Mask{1} << a;
    f.depends = dep;
    return f;
}

FormField rotated_fundamental_field(const TwistorProduct& x, bool sigma) {
    const std::array<FormField, 3> base = fundamental_forms(x.m);
    FormField acc;
    for (int c = 0; c < 3; ++c) {
        const FormField lifted = ff_lift(base[c], x.chart, 0);
        const FormField term = ff_scale(sphere_component_field(x, c, sigma), lifted);
        acc = (c == 0) ? term : ff_add(acc, term);
    }
    return acc;
}

AlternatingForm q_holomorphic_covector(const TwistorProduct& x, int j) {
    const int off = 4 * x.k;
    return AlternatingForm::covector(x.dim(), off + 2 * j) +
           AlternatingForm::covector(x.dim(), off + 2 * j + 1) * kI;
}

}  // namespace

TwistorProduct make_twistor_product(HypercomplexModel m, QModel q, MapToP1 h) {
    require(h.n == q.n, "twistor product: map domain must match the Q model");
    TwistorProduct x;
    x.k = m.k;
    x.r = 2 * m.k;
    x.n = q.n;
    x.chart = Chart::product(m.chart, q.metric.chart);
    x.m = std::move(m);
    x.q = std::move(q);
    x.h = std::move(h);
    return x;
}

Complex zeta_at(const TwistorProduct& x, const VectorXd& p) {
    return x.h.eval(q_slot(x, p));
}

MatrixXd structure_at(const TwistorProduct& x, const VectorXd& p) {
    const Eigen::Vector3d abc = twistor_sphere_map(zeta_at(x, p));
    MatrixXd j = MatrixXd::Zero(x.dim(), x.dim());
    j.topLeftCorner(4 * x.k, 4 * x.k) = abc[0] * x.m.I + abc[1] * x.m.J + abc[2] * x.m.K;
    j.bottomRightCorner(2 * x.n, 2 * x.n) = standard_structure(x.n);
    return j;
}

double structure_square_residual(const TwistorProduct& x, const VectorXd& p) {
    const MatrixXd j = structure_at(x, p);
    return (j * j + MatrixXd::Identity(x.dim(), x.dim())).cwiseAbs().maxCoeff();
}

std::array<ScalarField, 3> abc_fields(const TwistorProduct& x) {
    return {sphere_component_field(x, 0, false), sphere_component_field(x, 1, false),
            sphere_component_field(x, 2, false)};
}

std::array<ScalarField, 3> sigma_fields(const TwistorProduct& x) {
    return {sphere_component_field(x, 0, true), sphere_component_field(x, 1, true),
            sphere_component_field(x, 2, true)};
}

FormField omega_m_field(const TwistorProduct& x) { return rotated_fundamental_field(x, false); }

FormField sigma_m_field(const TwistorProduct& x) { return rotated_fundamental_field(x, true); }

FormField omega_q_field(const TwistorProduct& x) {
    return ff_lift(x.q.omega, x.chart, 4 * x.k);
}

FormField pullback_field(const TwistorProduct& x) {
    return ff_lift(pullback_fs(x.h, x.q.metric.chart), x.chart, 4 * x.k);
}

std::vector<AlternatingForm> one_zero_coframe(const TwistorProduct& x, const VectorXd& p) {
    const Complex zeta = zeta_at(x, p);
    const int dim = x.dim();
    std::vector<AlternatingForm> rows;
    rows.reserve(x.r + x.n);
    for (int b = 0; b < x.k; ++b) {
        const AlternatingForm alpha = AlternatingForm::covector(dim, 4 * b) +
                                      AlternatingForm::covector(dim, 4 * b + 1) * kI;
        const AlternatingForm eta = AlternatingForm::covector(dim, 4 * b + 2) +
                                    AlternatingForm::covector(dim, 4 * b + 3) * kI;
        rows.push_back(alpha + eta.conjugate() * (kI * zeta));
        rows.push_back(eta - alpha.conjugate() * (kI * zeta));
    }
    for (int j = 0; j < x.n; ++j) rows.push_back(q_holomorphic_covector(x, j));
    return rows;
}

double nijenhuis_residual(const TwistorProduct& x, const VectorXd& p,
                          const NumericConfig& cfg) {
    const int dim = x.dim();
    const MatrixXd j0 = structure_at(x, p);
    std::vector<MatrixXd> dj(dim, MatrixXd::Zero(dim, dim));
    const auto taps = central_stencil(cfg.stencil_order);
    for (int a = 0; a < dim; ++a) {
        for (const auto& [offset, weight] : taps) {
            VectorXd q = p;
            q[a] += offset * cfg.fd_step;
            if (!x.chart.contains(q))
                throw ChartError("nijenhuis stencil left the chart box");
            dj[a] += structure_at(x, q) * (weight / cfg.fd_step);
        }
    }
    // directional derivative of the structure along its own column a
    std::vector<MatrixXd> along(dim, MatrixXd::Zero(dim, dim));
    for (int a = 0; a < dim; ++a)
        for (int s = 0; s < dim; ++s)
            if (j0(s, a) != 0.0) along[a] += j0(s, a) * dj[s];
    double worst = 0.0;
    for (int a = 0; a < dim; ++a)
        for (int b = a + 1; b < dim; ++b) {
            const VectorXd n = along[a] * j0.col(b) - along[b] * j0.col(a) +
                               j0 * (dj[b] * j0.col(a) - dj[a] * j0.col(b));
            worst = std::max(worst, n.cwiseAbs().maxCoeff());
        }
    return worst;
}

std::vector<std::string> lemma_identity_ids(int r) {
    std::vector<std::string> ids{"0120q", "1002q", "1111q"};
    if (r > 2) {
        ids.push_back("11n1q");
        ids.push_back("fq");
    }
    ids.push_back("f1q");
    ids.push_back("f2q");
    if (r > 2) {
        ids.push_back("f3q");
        ids.push_back("f4q");
    }
    return ids;
}

namespace {

struct LemmaContext {
    const TwistorProduct& x;
    NumericConfig cfg;
    FormField omega_m, sigma_m, pullback;
    FormField del_q, delbar_q;            // first-level Q split of omega_m
    std::vector<FormField> omega_pow;     // omega_m^0 .. omega_m^(r-1)
    std::function<MatrixXd(const VectorXd&)> j_at;
    Mask j_dep;

    explicit LemmaContext(const TwistorProduct& xx, const NumericConfig& c) : x(xx), cfg(c) {
        omega_m = omega_m_field(x);
        sigma_m = sigma_m_field(x);
        pullback = pullback_field(x);
        auto dq = dolbeault_split_q(omega_m, cfg);
        del_q = dq.first;
        delbar_q = dq.second;
        omega_pow.push_back(ff_constant(x.chart, AlternatingForm::scalar(x.dim(), 1.0)));
        for (int j = 1; j < x.r; ++j)
            omega_pow.push_back(ff_wedge(omega_pow.back(), omega_m));
        j_at = [&xx](const VectorXd& p) { return structure_at(xx, p); };
        j_dep = q_block_mask(x);
    }

    // dQ zeta ^ (..) and dQbar zetabar ^ (..) closed forms at a point
    AlternatingForm d_q_zeta(const VectorXd& p, bool barred) const {
        const VectorXcd wz = map_wirtinger_z(x.h, q_slot(x, p), cfg);
        AlternatingForm acc(x.dim(), 1);
        for (int j = 0; j < x.n; ++j) {
            const AlternatingForm dz = q_holomorphic_covector(x, j);
            acc += barred ? dz.conjugate() * std::conj(wz[j]) : dz * wz[j];
        }
        return acc;
    }
};

// residual of one identity at one point, the local lhs scale, and (for the
// identities whose right side carries a scalar multiple of the pullback term)
// the least-squares contributions for fitting that multiple empirically
struct PointResidual {
    double residual = 0.0;
    double scale = 0.0;
    Complex fit_num = 0.0;
    double fit_den = 0.0;
};

PointResidual lemma_residual_at(LemmaContext& c, const std::string& id, const VectorXd& p) {
    const TwistorProduct& x = c.x;
    const NumericConfig& cfg = c.cfg;
    const int r = x.r;
    auto diff = [](const AlternatingForm& lhs, const AlternatingForm& rhs) {
        return PointResidual{(lhs - rhs).max_abs(), lhs.max_abs(), 0.0, 0.0};
    };
    // lhs = coeff * basis + rest; accumulate <lhs - rest, basis> / <basis, basis>
    auto fit_terms = [](PointResidual& out, const AlternatingForm& lhs,
                        const AlternatingForm& rest, const AlternatingForm& basis) {
        for (const auto& [mask, cb] : basis.terms()) {
            out.fit_num += (lhs.coefficient(mask) - rest.coefficient(mask)) * std::conj(cb);
            out.fit_den += std::norm(cb);
        }
    };

    if (id == "0120q" || id == "1002q") {
        const bool barred = (id == "0120q");
        const AlternatingForm lhs = barred ? c.delbar_q.eval(p) : c.del_q.eval(p);
        const AlternatingForm sig = c.sigma_m.eval(p);
        const AlternatingForm rhs =
            wedge(c.d_q_zeta(p, barred), barred ? sig : sig.conjugate());
        PointResidual out = diff(lhs, rhs);
        // bidegree content: (2,0|0,1) for the barred side, (0,2|1,0) otherwise
        const ComplexFrame frame = product_frame(
            structure_at(x, p).topLeftCorner(4 * x.k, 4 * x.k), standard_structure(x.n));
        const std::array<int, 4> want = barred ? std::array<int, 4>{2, 0, 0, 1}
                                               : std::array<int, 4>{0, 2, 1, 0};
        for (const auto& [type, norm] : factor_type_norms(lhs, frame))
            if (type != want) out.residual = std::max(out.residual, norm);
        return out;
    }
    if (id == "1111q") {
        const FormField outer = dolbeault_split_q(c.delbar_q, cfg).first;
        const AlternatingForm lhs = outer.eval(p) * kI;
        const AlternatingForm basis = wedge(c.pullback.eval(p), c.omega_m.eval(p));
        PointResidual out = diff(lhs, basis * (-2.0));
        fit_terms(out, lhs, AlternatingForm(x.dim(), 2), basis);
        return out;
    }
    if (id == "11n1q") {
        require(r > 2, "identity 11n1q is stated for r > 2 only");
        const AlternatingForm lhs =
            wedge(wedge(c.del_q.eval(p), c.delbar_q.eval(p)), c.omega_pow[r - 3].eval(p)) *
            kI;
        const AlternatingForm basis = wedge(c.pullback.eval(p), c.omega_pow[r - 1].eval(p));
        PointResidual out = diff(lhs, basis * (2.0 / (r - 1)));
        fit_terms(out, lhs, AlternatingForm(x.dim(), 2 * r - 2), basis);
        return out;
    }
    if (id == "fq") {
        require(r > 2, "identity fq is stated for r > 2 only");
        const FormField& f = c.omega_pow[r - 1];
        const FormField delbar_x = dolbeault_split_total(f, c.j_at, cfg, c.j_dep).second;
        const FormField ddbar = dolbeault_split_total(delbar_x, c.j_at, cfg, c.j_dep).first;
        const AlternatingForm lhs = ddbar.eval(p) * kI;
        const FormField dbm = dolbeault_split_m(f, c.j_at, cfg, c.j_dep).second;
        const FormField dm_dbm = dolbeault_split_m(dbm, c.j_at, cfg, c.j_dep).first;
        const AlternatingForm m_part = dm_dbm.eval(p) * kI;
        const AlternatingForm basis = wedge(c.pullback.eval(p), f.eval(p));
        PointResidual out = diff(lhs, m_part + basis * 2.0);
        fit_terms(out, lhs, m_part, basis);
        return out;
    }
    if (id == "f1q" || id == "f2q") {
        const bool first = (id == "f1q");
        const FormField& inner = first ? c.delbar_q : c.del_q;
        const auto split = dolbeault_split_m(inner, c.j_at, cfg, c.j_dep);
        const FormField& mixed = first ? split.first : split.second;
        const AlternatingForm lhs = wedge(mixed.eval(p), c.omega_pow[r - 2].eval(p));
        return {lhs.max_abs(), lhs.max_abs()};
    }
    if (id == "f3q" || id == "f4q") {
        require(r > 2, "f3q/f4q need r > 2");
        const bool first = (id == "f3q");
        const auto split_m = dolbeault_split_m(c.omega_m, c.j_at, cfg, c.j_dep);
        const AlternatingForm a = first ? c.delbar_q.eval(p) : c.del_q.eval(p);
        const AlternatingForm b = first ? split_m.first.eval(p) : split_m.second.eval(p);
        const AlternatingForm lhs = wedge(wedge(a, b), c.omega_pow[r - 3].eval(p));
        return {lhs.max_abs(), lhs.max_abs()};
    }
    throw ContractError("unknown lemma identity id: " + id);
}

}  // namespace

LemmaReport verify_lemma_identity(const TwistorProduct& x, const std::string& id, int points,
                                  Rng& rng, const NumericConfig& cfg) {
    require(points >= 1, "verify_lemma_identity needs at least one point");
    LemmaContext c(x, cfg);
    LemmaReport report;
    report.id = id;
    report.points = points;
    Complex fit_num = 0.0;
    double fit_den = 0.0;
    for (int trial = 0; trial < points; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.2);
        const PointResidual at = lemma_residual_at(c, id, p);
        report.residual = std::max(report.residual, at.residual);
        report.scale = std::max(report.scale, at.scale);
        fit_num += at.fit_num;
        fit_den += at.fit_den;
    }
    if (fit_den > 0.0) report.fitted = (fit_num / fit_den).real();
    return report;
}

ConvergenceReport lemma_convergence(const TwistorProduct& x, int points, Rng& rng,
                                    double base_step) {
    require(points >= 1 && base_step > 0.0, "lemma_convergence needs points and a step");
    std::vector<VectorXd> pts;
    for (int trial = 0; trial < points; ++trial) pts.push_back(x.chart.sample(rng, 0.35));
    auto worst_at = [&](double step) {
        NumericConfig cfg;
        cfg.use_analytic = false;
        cfg.fd_step = step;
        cfg.nested_step = step;
        LemmaContext c(x, cfg);
        double worst = 0.0;
        for (const VectorXd& p : pts)
            worst = std::max(worst, lemma_residual_at(c, "1111q", p).residual);
        return worst;
    };
    ConvergenceReport rep;
    rep.coarse = worst_at(base_step);
    rep.fine = worst_at(0.5 * base_step);
    rep.ratio = rep.coarse / std::max(rep.fine, 1e-300);
    return rep;
}

}  // namespace twistorlab
