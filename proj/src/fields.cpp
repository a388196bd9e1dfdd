#include <twistorlab/fields.hpp>

#include <array>
#include <cmath>
#include <optional>
#include <sstream>

namespace twistorlab {

namespace {

std::string point_string(const VectorXd& p) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

[[noreturn]] void stencil_escape(int axis, const VectorXd& p) {
    throw ChartError("derivative stencil along axis " + std::to_string(axis) +
                     " left the chart box at " + point_string(p));
}

template <typename Value, typename Field>
Value stencil_partial(const Field& f, int axis, const VectorXd& p, const NumericConfig& cfg,
                      Value zero) {
    const double h = cfg.step_for_level(f.level);
    const auto taps = central_stencil(cfg.stencil_order);
    Value acc = zero;
    for (const auto& [offset, weight] : taps) {
        VectorXd q = p;
        q[axis] += offset * h;
        if (!f.chart.contains(q)) stencil_escape(axis, q);
        acc += f.eval(q) * Complex{weight / h, 0.0};
    }
    return acc;
}

Mask block_mask(int begin, int end) {
    Mask m = 0;
    for (int a = begin; a < end; ++a) m |= Mask{1} << a;
    return m;
}

}  // namespace

Chart Chart::box(int dim, double half_width) {
    Chart c;
    c.dim = dim;
    c.lo = VectorXd::Constant(dim, -half_width);
    c.hi = VectorXd::Constant(dim, half_width);
    return c;
}

Chart Chart::product(const Chart& first, const Chart& second) {
    Chart c;
    c.dim = first.dim + second.dim;
    c.lo.resize(c.dim);
    c.hi.resize(c.dim);
    c.lo << first.lo, second.lo;
    c.hi << first.hi, second.hi;
    c.m_axes = first.dim;
    return c;
}

bool Chart::contains(const VectorXd& p, double margin) const {
    if (p.size() != dim) return false;
    for (int i = 0; i < dim; ++i)
        if (p[i] < lo[i] + margin || p[i] > hi[i] - margin) return false;
    return true;
}

VectorXd Chart::sample(Rng& rng, double margin) const {
    VectorXd p(dim);
    for (int i = 0; i < dim; ++i) {
        require(hi[i] - lo[i] > 2 * margin, "chart too small for the sampling margin");
        std::uniform_real_distribution<double> u(lo[i] + margin, hi[i] - margin);
        p[i] = u(rng);
    }
    return p;
}

std::vector<std::pair<int, double>> central_stencil(int order) {
    switch (order) {
        case 2:
            return {{-1, -0.5}, {1, 0.5}};
        case 4:
            return {{-2, 1.0 / 12}, {-1, -8.0 / 12}, {1, 8.0 / 12}, {2, -1.0 / 12}};
        case 6:
            return {{-3, -1.0 / 60}, {-2, 9.0 / 60},  {-1, -45.0 / 60},
                    {1, 45.0 / 60},  {2, -9.0 / 60},  {3, 1.0 / 60}};
        default:
            throw ContractError("stencil order must be 2, 4 or 6");
    }
}

Complex partial(const ScalarField& f, int axis, const VectorXd& p, const NumericConfig& cfg) {
    require(axis >= 0 && axis < f.chart.dim, "partial: axis out of range");
    if (!(f.depends & (Mask{1} << axis))) return Complex{0.0, 0.0};
    if (f.partial_fn && cfg.use_analytic) return f.partial_fn(axis, p);
    return stencil_partial<Complex>(f, axis, p, cfg, Complex{0.0, 0.0});
}

AlternatingForm partial(const FormField& f, int axis, const VectorXd& p,
                        const NumericConfig& cfg) {
    require(axis >= 0 && axis < f.chart.dim, "partial: axis out of range");
    if (!(f.depends & (Mask{1} << axis))) return AlternatingForm(f.chart.dim, f.degree);
    if (f.partial_fn && cfg.use_analytic) return f.partial_fn(axis, p);
    return stencil_partial<AlternatingForm>(f, axis, p, cfg,
                                            AlternatingForm(f.chart.dim, f.degree));
}

ScalarField sf_constant(const Chart& chart, Complex value) {
    ScalarField f;
    f.chart = chart;
    f.eval = [value](const VectorXd&) { return value; };
    f.partial_fn = [](int, const VectorXd&) { return Complex{0.0, 0.0}; };
    f.depends = 0;
    return f;
}

ScalarField sf_add(const ScalarField& a, const ScalarField& b) {
    require(a.chart.dim == b.chart.dim, "sf_add: chart mismatch");
    ScalarField f;
    f.chart = a.chart;
    f.eval = [a, b](const VectorXd& p) { return a.eval(p) + b.eval(p); };
    if (a.partial_fn && b.partial_fn)
        f.partial_fn = [a, b](int axis, const VectorXd& p) {
            return a.partial_fn(axis, p) + b.partial_fn(axis, p);
        };
    f.depends = a.depends | b.depends;
    f.level = std::max(a.level, b.level);
    return f;
}

ScalarField sf_mul(const ScalarField& a, const ScalarField& b) {
    require(a.chart.dim == b.chart.dim, "sf_mul: chart mismatch");
    ScalarField f;
    f.chart = a.chart;
    f.eval = [a, b](const VectorXd& p) { return a.eval(p) * b.eval(p); };
    if (a.partial_fn && b.partial_fn)
        f.partial_fn = [a, b](int axis, const VectorXd& p) {
            return a.partial_fn(axis, p) * b.eval(p) + a.eval(p) * b.partial_fn(axis, p);
        };
    f.depends = a.depends | b.depends;
    f.level = std::max(a.level, b.level);
    return f;
}

ScalarField sf_conj(const ScalarField& a) {
    ScalarField f = a;
    f.eval = [a](const VectorXd& p) { return std::conj(a.eval(p)); };
    if (a.partial_fn)
        f.partial_fn = [a](int axis, const VectorXd& p) { return std::conj(a.partial_fn(axis, p)); };
    return f;
}

FormField ff_constant(const Chart& chart, const AlternatingForm& value) {
    require(value.dimension() == chart.dim, "ff_constant: dimension mismatch");
    FormField f;
    f.chart = chart;
    f.degree = value.degree();
    f.eval = [value](const VectorXd&) { return value; };
    f.partial_fn = [dim = chart.dim, deg = value.degree()](int, const VectorXd&) {
        return AlternatingForm(dim, deg);
    };
    f.depends = 0;
    return f;
}

FormField ff_add(const FormField& a, const FormField& b) {
    require(a.chart.dim == b.chart.dim && a.degree == b.degree, "ff_add: shape mismatch");
    FormField f;
    f.chart = a.chart;
    f.degree = a.degree;
    f.eval = [a, b](const VectorXd& p) { return a.eval(p) + b.eval(p); };
    if (a.partial_fn && b.partial_fn)
        f.partial_fn = [a, b](int axis, const VectorXd& p) {
            return a.partial_fn(axis, p) + b.partial_fn(axis, p);
        };
    f.depends = a.depends | b.depends;
    f.level = std::max(a.level, b.level);
    return f;
}

FormField ff_scale(const FormField& a, Complex s) {
    FormField f = a;
    f.eval = [a, s](const VectorXd& p) { return a.eval(p) * s; };
    if (a.partial_fn)
        f.partial_fn = [a, s](int axis, const VectorXd& p) { return a.partial_fn(axis, p) * s; };
    return f;
}

FormField ff_scale(const ScalarField& s, const FormField& a) {
    require(s.chart.dim == a.chart.dim, "ff_scale: chart mismatch");
    FormField f;
    f.chart = a.chart;
    f.degree = a.degree;
    f.eval = [s, a](const VectorXd& p) { return a.eval(p) * s.eval(p); };
    if (s.partial_fn && a.partial_fn)
        f.partial_fn = [s, a](int axis, const VectorXd& p) {
            return a.partial_fn(axis, p) * s.eval(p) + a.eval(p) * s.partial_fn(axis, p);
        };
    f.depends = s.depends | a.depends;
    f.level = std::max(s.level, a.level);
    return f;
}

FormField ff_wedge(const FormField& a, const FormField& b) {
    require(a.chart.dim == b.chart.dim, "ff_wedge: chart mismatch");
    FormField f;
    f.chart = a.chart;
    f.degree = std::min(a.degree + b.degree, a.chart.dim);
    f.eval = [a, b](const VectorXd& p) { return wedge(a.eval(p), b.eval(p)); };
    if (a.partial_fn && b.partial_fn)
        f.partial_fn = [a, b](int axis, const VectorXd& p) {
            return wedge(a.partial_fn(axis, p), b.eval(p)) +
                   wedge(a.eval(p), b.partial_fn(axis, p));
        };
    f.depends = a.depends | b.depends;
    f.level = std::max(a.level, b.level);
    return f;
}

FormField ff_conj(const FormField& a) {
    FormField f = a;
    f.eval = [a](const VectorXd& p) { return a.eval(p).conjugate(); };
    if (a.partial_fn)
        f.partial_fn = [a](int axis, const VectorXd& p) {
            return a.partial_fn(axis, p).conjugate();
        };
    return f;
}

FormField ff_lift(const FormField& a, const Chart& product_chart, int axis_offset) {
    require(axis_offset >= 0 && axis_offset + a.chart.dim <= product_chart.dim,
            "ff_lift: factor does not fit the product chart");
    FormField f;
    f.chart = product_chart;
    f.degree = a.degree;
    const int fdim = a.chart.dim;
    const int total = product_chart.dim;
    f.eval = [a, axis_offset, fdim, total](const VectorXd& p) {
        return a.eval(p.segment(axis_offset, fdim)).embedded(total, axis_offset);
    };
    if (a.partial_fn)
        f.partial_fn = [a, axis_offset, fdim, total](int axis, const VectorXd& p) {
            if (axis < axis_offset || axis >= axis_offset + fdim)
                return AlternatingForm(total, a.degree);
            return a.partial_fn(axis - axis_offset, p.segment(axis_offset, fdim))
                .embedded(total, axis_offset);
        };
    f.depends = (a.depends & block_mask(0, fdim)) << axis_offset;
    f.level = a.level;
    return f;
}

namespace {

FormField directional_d(const FormField& f, int begin, int end, const NumericConfig& cfg) {
    FormField out;
    out.chart = f.chart;
    out.degree = std::min(f.degree + 1, f.chart.dim);
    out.eval = [f, begin, end, cfg](const VectorXd& p) {
        AlternatingForm acc(f.chart.dim, std::min(f.degree + 1, f.chart.dim));
        for (int a = begin; a < end; ++a) {
            if (!(f.depends & (Mask{1} << a))) continue;
            acc += wedge(AlternatingForm::covector(f.chart.dim, a), partial(f, a, p, cfg));
        }
        return acc;
    };
    out.depends = f.depends;
    out.level = f.level + 1;
    return out;
}

}  // namespace

FormField exterior_d(const FormField& f, const NumericConfig& cfg) {
    return directional_d(f, 0, f.chart.dim, cfg);
}

std::pair<FormField, FormField> split_d(const FormField& f, const NumericConfig& cfg) {
    const int m = f.chart.m_axes > 0 ? f.chart.m_axes : f.chart.dim;
    return {directional_d(f, 0, m, cfg), directional_d(f, m, f.chart.dim, cfg)};
}

std::pair<FormField, FormField> dolbeault_split_q(const FormField& f, const NumericConfig& cfg) {
    const int m = f.chart.m_axes;
    const int dim = f.chart.dim;
    require((dim - m) % 2 == 0, "dolbeault_split_q: second factor must have even dimension");
    const int deg = std::min(f.degree + 1, dim);
    auto build = [f, m, dim, deg, cfg](bool barred) {
        FormField out;
        out.chart = f.chart;
        out.degree = deg;
        out.eval = [f, m, dim, deg, cfg, barred](const VectorXd& p) {
            AlternatingForm acc(dim, deg);
            for (int ax = m; ax + 1 < dim; ax += 2) {
                const Mask pair_mask = (Mask{3} << ax);
                if (!(f.depends & pair_mask)) continue;
                const AlternatingForm fx = partial(f, ax, p, cfg);
                const AlternatingForm fy = partial(f, ax + 1, p, cfg);
                // partial_z = (dx - i dy)/2, partial_zbar = (dx + i dy)/2
                const AlternatingForm fz =
                    (fx + fy * (barred ? kI : -kI)) * Complex{0.5, 0.0};
                AlternatingForm dz = AlternatingForm::covector(dim, ax) +
                                     AlternatingForm::covector(dim, ax + 1) * (barred ? -kI : kI);
                acc += wedge(dz, fz);
            }
            return acc;
        };
        out.depends = f.depends;
        out.level = f.level + 1;
        return out;
    };
    return {build(false), build(true)};
}

namespace {

// Bidegree of f read in the frame at `at`; throws on mixed bidegree, returns
// nothing when the field vanishes there.
std::optional<std::array<int, 2>> bidegree_at(
    const FormField& f, const VectorXd& at,
    const std::function<ComplexFrame(const VectorXd&)>& frame_at, bool first_factor_only,
    const char* who) {
    const AlternatingForm value = f.eval(at);
    if (value.max_abs() == 0.0) return std::nullopt;
    const ComplexFrame frame = frame_at(at);
    const AlternatingForm f_frame = to_frame(value, frame);
    const double f_scale = f_frame.max_abs();
    int pt = -1, qt = -1;
    for (const auto& [mask, c] : f_frame.terms()) {
        if (std::abs(c) <= 1e-10 * f_scale) continue;
        const auto t = frame.factor_type(mask);
        const int tp = first_factor_only ? t[0] : t[0] + t[2];
        const int tq = first_factor_only ? t[1] : t[1] + t[3];
        if (pt < 0) {
            pt = tp;
            qt = tq;
        } else if (tp != pt || tq != qt) {
            throw ContractError(std::string(who) + ": field has mixed bidegree at " +
                                point_string(at));
        }
    }
    if (pt < 0) return std::nullopt;
    return std::array<int, 2>{pt, qt};
}

// A pure bidegree field may vanish at isolated points; probe along the axes
// it depends on before settling for the trivial type.
std::array<int, 2> detect_bidegree(const FormField& f, const VectorXd& p,
                                   const NumericConfig& cfg,
                                   const std::function<ComplexFrame(const VectorXd&)>& frame_at,
                                   bool first_factor_only, const char* who) {
    if (auto t = bidegree_at(f, p, frame_at, first_factor_only, who)) return *t;
    const double step = cfg.step_for_level(f.level);
    for (int a = 0; a < f.chart.dim; ++a) {
        if (!(f.depends & (Mask{1} << a))) continue;
        for (double off : {1.0, -1.0}) {
            VectorXd q = p;
            q[a] += off * step;
            if (auto t = bidegree_at(f, q, frame_at, first_factor_only, who)) return *t;
        }
    }
    return {0, 0};
}

}  // namespace

std::pair<FormField, FormField> dolbeault_split_total(
    const FormField& f, const std::function<MatrixXd(const VectorXd&)>& j_at,
    const NumericConfig& cfg, Mask j_depends) {
    const int dim = f.chart.dim;
    const int deg = std::min(f.degree + 1, dim);
    auto build = [f, j_at, dim, deg, cfg, j_depends](bool barred) {
        FormField out;
        out.chart = f.chart;
        out.degree = deg;
        out.eval = [f, j_at, dim, deg, cfg, barred](const VectorXd& p) {
            AlternatingForm df(dim, deg);
            for (int a = 0; a < dim; ++a) {
                if (!(f.depends & (Mask{1} << a))) continue;
                df += wedge(AlternatingForm::covector(dim, a), partial(f, a, p, cfg));
            }
            if (df.term_count() == 0) return df;
            auto frame_at = [&j_at](const VectorXd& q) { return complex_frame(j_at(q)); };
            const ComplexFrame frame = frame_at(p);
            const auto type =
                detect_bidegree(f, p, cfg, frame_at, false, "dolbeault_split_total");
            const int pt = type[0], qt = type[1];
            const int target_p = barred ? pt : pt + 1;
            const int target_q = barred ? qt + 1 : qt;
            const AlternatingForm df_frame = to_frame(df, frame);
            AlternatingForm kept(dim, deg);
            for (const auto& [mask, c] : df_frame.terms()) {
                const auto t = frame.factor_type(mask);
                if (t[0] + t[2] == target_p && t[1] + t[3] == target_q) kept.add_term(mask, c);
            }
            return from_frame(kept, frame);
        };
        out.depends = f.depends | j_depends;
        out.level = f.level + 1;
        return out;
    };
    return {build(false), build(true)};
}

std::pair<FormField, FormField> dolbeault_split_m(
    const FormField& f, const std::function<MatrixXd(const VectorXd&)>& j_at,
    const NumericConfig& cfg, Mask j_depends) {
    const int m_ax = f.chart.m_axes > 0 ? f.chart.m_axes : f.chart.dim;
    const int dim = f.chart.dim;
    const int deg = std::min(f.degree + 1, dim);
    auto build = [f, j_at, m_ax, dim, deg, cfg, j_depends](bool barred) {
        FormField out;
        out.chart = f.chart;
        out.degree = deg;
        out.eval = [f, j_at, m_ax, dim, deg, cfg, barred](const VectorXd& p) {
            AlternatingForm dm(dim, deg);
            for (int a = 0; a < m_ax; ++a) {
                if (!(f.depends & (Mask{1} << a))) continue;
                dm += wedge(AlternatingForm::covector(dim, a), partial(f, a, p, cfg));
            }
            if (dm.term_count() == 0) return dm;
            auto frame_at = [&j_at, m_ax, dim](const VectorXd& q) {
                const MatrixXd j = j_at(q);
                return (m_ax == dim)
                           ? complex_frame(j)
                           : product_frame(j.topLeftCorner(m_ax, m_ax),
                                           j.bottomRightCorner(dim - m_ax, dim - m_ax));
            };
            const ComplexFrame frame = frame_at(p);
            // The first-factor bidegree of f must be unique near this point.
            const auto type = detect_bidegree(f, p, cfg, frame_at, true, "dolbeault_split_m");
            const int pm = type[0], qm = type[1];
            const int target_p = barred ? pm : pm + 1;
            const int target_q = barred ? qm + 1 : qm;
            const AlternatingForm dm_frame = to_frame(dm, frame);
            AlternatingForm kept(dim, deg);
            for (const auto& [mask, c] : dm_frame.terms()) {
                const auto t = frame.factor_type(mask);
                if (t[0] == target_p && t[1] == target_q) kept.add_term(mask, c);
            }
            return from_frame(kept, frame);
        };
        out.depends = f.depends | j_depends;
        out.level = f.level + 1;
        return out;
    };
    return {build(false), build(true)};
}

}  // namespace twistorlab
