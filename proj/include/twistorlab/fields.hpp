#pragma once

#include <functional>
#include <utility>

#include <twistorlab/exterior.hpp>

namespace twistorlab {

/// Open coordinate box.  Product charts keep the first factor on the leading
/// `m_axes` coordinates; m_axes == 0 means the chart is not split.
struct Chart {
    int dim = 0;
    VectorXd lo, hi;
    int m_axes = 0;

    static Chart box(int dim, double half_width);
    static Chart product(const Chart& first, const Chart& second);

    bool contains(const VectorXd& p, double margin = 0.0) const;
    VectorXd center() const { return 0.5 * (lo + hi); }
    /// Uniform sample from the box shrunk by `margin` on every side.
    VectorXd sample(Rng& rng, double margin) const;
};

/// Central difference stencil; taps are (offset, weight) pairs applied as
/// sum w_k f(x + k h) / h.
std::vector<std::pair<int, double>> central_stencil(int order);

// Fields are immutable value types built from closures.  `partial_fn`, when
// present, must return the exact coordinate derivative (the analytic route);
// otherwise derivatives fall back to central differences with the step chosen
// by `level`: each exterior_d layer increments the level, and deeper layers
// take larger steps so stencil truncation stays above amplified noise.
// `depends` masks the axes the field actually varies along; derivatives along
// other axes are exact zeros.
struct ScalarField {
    Chart chart;
    std::function<Complex(const VectorXd&)> eval;
    std::function<Complex(int, const VectorXd&)> partial_fn;
    Mask depends = ~Mask{0};
    int level = 0;
};

struct FormField {
    Chart chart;
    int degree = 0;
    std::function<AlternatingForm(const VectorXd&)> eval;
    std::function<AlternatingForm(int, const VectorXd&)> partial_fn;
    Mask depends = ~Mask{0};
    int level = 0;
};

Complex partial(const ScalarField& f, int axis, const VectorXd& p, const NumericConfig& cfg);
AlternatingForm partial(const FormField& f, int axis, const VectorXd& p,
                        const NumericConfig& cfg);

ScalarField sf_constant(const Chart& chart, Complex value);
ScalarField sf_add(const ScalarField& a, const ScalarField& b);
ScalarField sf_mul(const ScalarField& a, const ScalarField& b);
ScalarField sf_conj(const ScalarField& a);

FormField ff_constant(const Chart& chart, const AlternatingForm& value);
FormField ff_add(const FormField& a, const FormField& b);
FormField ff_scale(const FormField& a, Complex s);
/// Pointwise product s * a with Leibniz propagation of analytic partials.
FormField ff_scale(const ScalarField& s, const FormField& a);
FormField ff_wedge(const FormField& a, const FormField& b);
FormField ff_conj(const FormField& a);
/// Field on a product chart that evaluates `a` on one factor's coordinates.
/// axis_offset is where the factor's axes start inside the product chart.
FormField ff_lift(const FormField& a, const Chart& product_chart, int axis_offset);

/// d f = sum_a dx^a ^ partial_a f.
FormField exterior_d(const FormField& f, const NumericConfig& cfg);

/// d split along the factor blocks of the chart: first component runs over
/// the leading m_axes coordinates, second over the rest.
std::pair<FormField, FormField> split_d(const FormField& f, const NumericConfig& cfg);

/// Dolbeault split of the second-factor (standard complex structure) part of
/// d: (sum_j dz^j ^ partial_{z_j} f, sum_j dzbar^j ^ partial_{zbar_j} f).
/// Exact by construction; no projection involved.
std::pair<FormField, FormField> dolbeault_split_q(const FormField& f, const NumericConfig& cfg);

/// Dolbeault split of the first-factor part of d, graded by the pointwise
/// structure `j_at` (full chart dimension; its first-factor block may vary
/// with the point).  The input must have a single first-factor bidegree at
/// each sampled point; components of d_M that extend it by (1,0) and (0,1)
/// form the two outputs.
std::pair<FormField, FormField> dolbeault_split_m(
    const FormField& f, const std::function<MatrixXd(const VectorXd&)>& j_at,
    const NumericConfig& cfg, Mask j_depends = ~Mask{0});

/// Dolbeault split of the full exterior derivative, graded by the pointwise
/// structure `j_at`.  The input must have a single total bidegree at each
/// sampled point; the outputs carry the (p+1, q) and (p, q+1) parts of d f.
/// Components of other types (nonzero only for non-integrable structures)
/// are dropped.  j_depends marks the axes the structure varies along; it
/// widens the dependence mask of the outputs.
std::pair<FormField, FormField> dolbeault_split_total(
    const FormField& f, const std::function<MatrixXd(const VectorXd&)>& j_at,
    const NumericConfig& cfg, Mask j_depends = ~Mask{0});

}  // namespace twistorlab
