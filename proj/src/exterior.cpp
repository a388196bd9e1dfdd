#include <twistorlab/exterior.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <sstream>

namespace twistorlab {

namespace {

std::vector<int> mask_axes(Mask m) {
    std::vector<int> axes;
    while (m) {
        axes.push_back(std::countr_zero(m));
        m &= m - 1;
    }
    return axes;
}

/// Calls fn(mask) for every strictly increasing d-subset of [0, n).
void for_each_monomial(int n, int d, const std::function<void(Mask)>& fn) {
    if (d == 0) {
        fn(0);
        return;
    }
    if (d > n) return;
    Mask mask = (d >= 64) ? ~Mask{0} : ((Mask{1} << d) - 1);
    const Mask limit = Mask{1} << n;
    while (mask < limit) {
        fn(mask);
        // Gosper's hack: next subset with the same popcount.
        Mask c = mask & -mask;
        Mask r = mask + c;
        if (r >= limit || c == 0) break;
        mask = (((r ^ mask) >> 2) / c) | r;
    }
}

Complex minor_det(const MatrixXcd& t, const std::vector<int>& rows, const std::vector<int>& cols) {
    const int d = static_cast<int>(rows.size());
    if (d == 0) return Complex{1.0, 0.0};
    if (d == 1) return t(rows[0], cols[0]);
    if (d == 2)
        return t(rows[0], cols[0]) * t(rows[1], cols[1]) -
               t(rows[0], cols[1]) * t(rows[1], cols[0]);
    MatrixXcd sub(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) sub(i, j) = t(rows[i], cols[j]);
    return sub.determinant();
}

/// Rewrites f over the basis theta with dx^t = sum_a T(t,a) theta^a.
AlternatingForm change_basis(const AlternatingForm& f, const MatrixXcd& t) {
    const int n = f.dimension();
    const int d = f.degree();
    AlternatingForm out(n, d);
    if (f.term_count() == 0) return out;
    std::vector<std::pair<std::vector<int>, Complex>> support;
    support.reserve(f.term_count());
    for (const auto& [mask, c] : f.terms()) support.emplace_back(mask_axes(mask), c);
    for_each_monomial(n, d, [&](Mask target) {
        const auto cols = mask_axes(target);
        Complex acc{0.0, 0.0};
        for (const auto& [rows, c] : support) acc += c * minor_det(t, rows, cols);
        if (acc != Complex{0.0, 0.0}) out.add_term(target, acc);
    });
    return out;
}

ComplexFrame frame_from_rows(MatrixXcd s10, std::vector<FrameRow> tags10) {
    const int m = static_cast<int>(s10.rows());
    const int n = 2 * m;
    require(s10.cols() == n, "frame rows must have length 2m");
    ComplexFrame frame;
    frame.m = m;
    frame.S = MatrixXcd::Zero(n, n);
    frame.S.topRows(m) = s10;
    frame.S.bottomRows(m) = s10.conjugate();
    frame.rows.resize(n);
    for (int a = 0; a < m; ++a) {
        frame.rows[a] = tags10[a];
        frame.rows[m + a] = tags10[a];
        frame.rows[m + a].barred = true;
    }
    Eigen::FullPivLU<MatrixXcd> lu(frame.S);
    if (!lu.isInvertible()) throw NumericalError("coframe is singular");
    frame.R = lu.inverse();
    return frame;
}

}  // namespace

AlternatingForm::AlternatingForm(int dimension, int degree) : dim_(dimension), degree_(degree) {
    require(dimension >= 0 && dimension < 63, "dimension out of range");
    require(degree >= 0 && degree <= dimension, "degree out of range");
}

AlternatingForm AlternatingForm::scalar(int dimension, Complex value) {
    AlternatingForm f(dimension, 0);
    f.add_term(0, value);
    return f;
}

AlternatingForm AlternatingForm::covector(int dimension, int axis) {
    require(axis >= 0 && axis < dimension, "axis out of range");
    AlternatingForm f(dimension, 1);
    f.add_term(Mask{1} << axis, Complex{1.0, 0.0});
    return f;
}

AlternatingForm AlternatingForm::from_antisymmetric(const MatrixXcd& w) {
    const int n = static_cast<int>(w.rows());
    require(w.cols() == n, "antisymmetric matrix must be square");
    require((w + w.transpose()).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + w.cwiseAbs().maxCoeff()),
            "matrix is not antisymmetric");
    AlternatingForm f(n, 2);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b)
            f.add_term((Mask{1} << a) | (Mask{1} << b), w(a, b));
    return f;
}

AlternatingForm AlternatingForm::from_covector_coefficients(const VectorXcd& c) {
    const int n = static_cast<int>(c.size());
    AlternatingForm f(n, 1);
    for (int a = 0; a < n; ++a) f.add_term(Mask{1} << a, c[a]);
    return f;
}

Complex AlternatingForm::coefficient(Mask monomial) const {
    auto it = coef_.find(monomial);
    return it == coef_.end() ? Complex{0.0, 0.0} : it->second;
}

Complex AlternatingForm::coefficient(std::initializer_list<int> axes) const {
    Mask mask = 0;
    int sign = 1;
    std::vector<int> seen;
    for (int axis : axes) {
        require(axis >= 0 && axis < dim_, "axis out of range");
        const Mask bit = Mask{1} << axis;
        if (mask & bit) return Complex{0.0, 0.0};
        // Parity of insertions below already-placed larger axes.
        int above = 0;
        for (int s : seen)
            if (s > axis) ++above;
        if (above & 1) sign = -sign;
        seen.push_back(axis);
        mask |= bit;
    }
    return static_cast<double>(sign) * coefficient(mask);
}

void AlternatingForm::add_term(Mask monomial, Complex value) {
    require(std::popcount(monomial) == degree_, "monomial degree mismatch");
    require(dim_ >= 63 || monomial < (Mask{1} << dim_), "monomial axis out of range");
    auto [it, inserted] = coef_.try_emplace(monomial, value);
    if (!inserted) it->second += value;
    if (it->second == Complex{0.0, 0.0}) coef_.erase(it);
}

void AlternatingForm::set_term(Mask monomial, Complex value) {
    require(std::popcount(monomial) == degree_, "monomial degree mismatch");
    if (value == Complex{0.0, 0.0})
        coef_.erase(monomial);
    else
        coef_[monomial] = value;
}

AlternatingForm& AlternatingForm::operator+=(const AlternatingForm& other) {
    require(dim_ == other.dim_ && degree_ == other.degree_, "form shape mismatch in +");
    for (const auto& [mask, c] : other.coef_) add_term(mask, c);
    return *this;
}

AlternatingForm& AlternatingForm::operator-=(const AlternatingForm& other) {
    require(dim_ == other.dim_ && degree_ == other.degree_, "form shape mismatch in -");
    for (const auto& [mask, c] : other.coef_) add_term(mask, -c);
    return *this;
}

AlternatingForm& AlternatingForm::operator*=(Complex s) {
    if (s == Complex{0.0, 0.0}) {
        coef_.clear();
        return *this;
    }
    for (auto& [mask, c] : coef_) c *= s;
    return *this;
}

AlternatingForm AlternatingForm::operator+(const AlternatingForm& other) const {
    AlternatingForm out = *this;
    out += other;
    return out;
}

AlternatingForm AlternatingForm::operator-(const AlternatingForm& other) const {
    AlternatingForm out = *this;
    out -= other;
    return out;
}

AlternatingForm AlternatingForm::operator-() const { return *this * Complex{-1.0, 0.0}; }

AlternatingForm AlternatingForm::operator*(Complex s) const {
    AlternatingForm out = *this;
    out *= s;
    return out;
}

AlternatingForm AlternatingForm::conjugate() const {
    AlternatingForm out(dim_, degree_);
    for (const auto& [mask, c] : coef_) out.add_term(mask, std::conj(c));
    return out;
}

AlternatingForm AlternatingForm::restrict_to(Mask axes, bool reindex) const {
    if (!reindex) {
        AlternatingForm out(dim_, degree_);
        for (const auto& [mask, c] : coef_)
            if ((mask & ~axes) == 0) out.add_term(mask, c);
        return out;
    }
    const auto kept = mask_axes(axes);
    const int n = static_cast<int>(kept.size());
    require(degree_ <= n, "restriction target too small for degree");
    std::vector<int> remap(dim_, -1);
    for (int i = 0; i < n; ++i) remap[kept[i]] = i;
    AlternatingForm out(n, degree_);
    for (const auto& [mask, c] : coef_) {
        if ((mask & ~axes) != 0) continue;
        Mask target = 0;
        for (int axis : mask_axes(mask)) target |= Mask{1} << remap[axis];
        out.add_term(target, c);  // order preserved, no sign
    }
    return out;
}

AlternatingForm AlternatingForm::embedded(int new_dimension, int offset) const {
    require(offset >= 0 && offset + dim_ <= new_dimension, "embedded: axes out of range");
    AlternatingForm out(new_dimension, degree_);
    for (const auto& [mask, c] : coef_) out.add_term(mask << offset, c);
    return out;
}

Complex AlternatingForm::evaluate(const std::vector<VectorXcd>& vectors) const {
    require(static_cast<int>(vectors.size()) == degree_, "evaluate: wrong vector count");
    for (const auto& v : vectors)
        require(static_cast<int>(v.size()) == dim_, "evaluate: wrong vector dimension");
    if (degree_ == 0) return coefficient(0);
    Complex acc{0.0, 0.0};
    MatrixXcd pairing(degree_, degree_);
    for (const auto& [mask, c] : coef_) {
        const auto axes = mask_axes(mask);
        for (int i = 0; i < degree_; ++i)
            for (int j = 0; j < degree_; ++j) pairing(i, j) = vectors[j][axes[i]];
        acc += c * pairing.determinant();
    }
    return acc;
}

double AlternatingForm::max_abs() const {
    double v = 0.0;
    for (const auto& [mask, c] : coef_) v = std::max(v, std::abs(c));
    return v;
}

double AlternatingForm::norm_l2() const {
    double v = 0.0;
    for (const auto& [mask, c] : coef_) v += std::norm(c);
    return std::sqrt(v);
}

AlternatingForm AlternatingForm::pruned(double eps) const {
    AlternatingForm out(dim_, degree_);
    for (const auto& [mask, c] : coef_)
        if (std::abs(c) > eps) out.add_term(mask, c);
    return out;
}

bool AlternatingForm::approx_equal(const AlternatingForm& other, double tol) const {
    if (dim_ != other.dim_ || degree_ != other.degree_) return false;
    return (*this - other).max_abs() <= tol;
}

Complex AlternatingForm::top_coefficient() const {
    require(degree_ == dim_, "top_coefficient requires a top-degree form");
    return coefficient((dim_ >= 63) ? ~Mask{0} : ((Mask{1} << dim_) - 1));
}

int merge_sign(Mask a, Mask b) {
    if (a & b) return 0;
    int inversions = 0;
    Mask rest = b;
    while (rest) {
        const int bit = std::countr_zero(rest);
        if (bit < 63) inversions += std::popcount(a >> (bit + 1));
        rest &= rest - 1;
    }
    return (inversions & 1) ? -1 : 1;
}

AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b) {
    require(a.dimension() == b.dimension(), "wedge: dimension mismatch");
    const int n = a.dimension();
    const int d = a.degree() + b.degree();
    if (d > n) return AlternatingForm(n, n);  // canonical zero beyond top degree
    AlternatingForm out(n, d);
    for (const auto& [ma, ca] : a.terms()) {
        for (const auto& [mb, cb] : b.terms()) {
            const int sign = merge_sign(ma, mb);
            if (sign == 0) continue;
            out.add_term(ma | mb, static_cast<double>(sign) * ca * cb);
        }
    }
    return out;
}

AlternatingForm wedge_power(const AlternatingForm& a, int power) {
    require(power >= 0, "wedge_power: negative exponent");
    AlternatingForm out = AlternatingForm::scalar(a.dimension(), Complex{1.0, 0.0});
    for (int i = 0; i < power; ++i) out = wedge(out, a);
    return out;
}

AlternatingForm act_on_one_form(const MatrixXd& endo, const AlternatingForm& theta) {
    require(theta.degree() == 1, "act_on_one_form: degree must be 1");
    const int n = theta.dimension();
    require(endo.rows() == n && endo.cols() == n, "act_on_one_form: endomorphism shape");
    VectorXcd c = VectorXcd::Zero(n);
    for (const auto& [mask, v] : theta.terms()) c[std::countr_zero(mask)] = v;
    VectorXcd out = endo.transpose().cast<Complex>() * c;
    return AlternatingForm::from_covector_coefficients(out);
}

bool is_complex_structure(const MatrixXd& j, double tol) {
    if (j.rows() != j.cols()) return false;
    const int n = static_cast<int>(j.rows());
    return (j * j + MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= tol;
}

int ComplexFrame::unbarred_count(Mask monomial) const {
    int p = 0;
    for (int a : mask_axes(monomial))
        if (!rows[a].barred) ++p;
    return p;
}

int ComplexFrame::barred_count(Mask monomial) const {
    return std::popcount(monomial) - unbarred_count(monomial);
}

std::array<int, 4> ComplexFrame::factor_type(Mask monomial) const {
    std::array<int, 4> t{0, 0, 0, 0};
    for (int a : mask_axes(monomial)) {
        const auto& row = rows[a];
        const int slot = (row.second_factor ? 2 : 0) + (row.barred ? 1 : 0);
        ++t[slot];
    }
    return t;
}

ComplexFrame complex_frame(const MatrixXd& j) {
    require(is_complex_structure(j, 1e-10), "not a complex structure");
    const int n = static_cast<int>(j.rows());
    require(n % 2 == 0, "complex structure needs even dimension");
    const int m = n / 2;
    // Columns of P span the +i eigenspace of J^T: J^T P = i P.
    MatrixXcd p = 0.5 * (MatrixXcd::Identity(n, n) - kI * j.transpose().cast<Complex>());
    Eigen::ColPivHouseholderQR<MatrixXcd> qr(p);
    if (qr.rank() != m) throw NumericalError("eigenprojector rank is not m");
    MatrixXcd q = qr.householderQ();
    MatrixXcd s10(m, n);
    for (int a = 0; a < m; ++a) s10.row(a) = q.col(a).transpose();
    ComplexFrame frame = frame_from_rows(s10, std::vector<FrameRow>(m));
    const MatrixXcd jt = j.transpose().cast<Complex>();
    for (int a = 0; a < m; ++a) {
        const VectorXcd theta = frame.S.row(a).transpose();
        if ((jt * theta - kI * theta).cwiseAbs().maxCoeff() > 1e-8)
            throw NumericalError("coframe row failed the eigenvalue check");
    }
    return frame;
}

ComplexFrame product_frame(const MatrixXd& j_first, const MatrixXd& j_second) {
    const ComplexFrame f1 = complex_frame(j_first);
    const ComplexFrame f2 = complex_frame(j_second);
    const int n1 = static_cast<int>(j_first.rows());
    const int n2 = static_cast<int>(j_second.rows());
    const int m = f1.m + f2.m;
    MatrixXcd s10 = MatrixXcd::Zero(m, n1 + n2);
    std::vector<FrameRow> tags(m);
    for (int a = 0; a < f1.m; ++a) {
        s10.block(a, 0, 1, n1) = f1.S.row(a);
        tags[a] = FrameRow{false, false};
    }
    for (int b = 0; b < f2.m; ++b) {
        s10.block(f1.m + b, n1, 1, n2) = f2.S.row(b);
        tags[f1.m + b] = FrameRow{false, true};
    }
    return frame_from_rows(s10, tags);
}

MatrixXd standard_structure(int m) {
    MatrixXd j = MatrixXd::Zero(2 * m, 2 * m);
    for (int a = 0; a < m; ++a) {
        j(2 * a, 2 * a + 1) = -1.0;
        j(2 * a + 1, 2 * a) = 1.0;
    }
    return j;
}

ComplexFrame standard_frame(int m) {
    MatrixXcd s10 = MatrixXcd::Zero(m, 2 * m);
    for (int a = 0; a < m; ++a) {
        s10(a, 2 * a) = Complex{1.0, 0.0};
        s10(a, 2 * a + 1) = kI;
    }
    return frame_from_rows(s10, std::vector<FrameRow>(m));
}

AlternatingForm to_frame(const AlternatingForm& f, const ComplexFrame& frame) {
    require(f.dimension() == 2 * frame.m, "to_frame: dimension mismatch");
    return change_basis(f, frame.R);
}

AlternatingForm from_frame(const AlternatingForm& f, const ComplexFrame& frame) {
    require(f.dimension() == 2 * frame.m, "from_frame: dimension mismatch");
    return change_basis(f, frame.S);
}

AlternatingForm bidegree_project(const AlternatingForm& f, const ComplexFrame& frame, int p,
                                 int q) {
    require(p >= 0 && q >= 0, "bidegree_project: negative bidegree");
    const int n = f.dimension();
    if (p + q != f.degree() || p > frame.m || q > frame.m) return AlternatingForm(n, f.degree());
    AlternatingForm in_frame = to_frame(f, frame);
    AlternatingForm kept(n, f.degree());
    for (const auto& [mask, c] : in_frame.terms())
        if (frame.unbarred_count(mask) == p) kept.add_term(mask, c);
    return from_frame(kept, frame);
}

AlternatingForm bidegree_project(const AlternatingForm& f, const MatrixXd& j, int p, int q) {
    return bidegree_project(f, complex_frame(j), p, q);
}

std::map<std::array<int, 4>, double> factor_type_norms(const AlternatingForm& f,
                                                       const ComplexFrame& frame) {
    AlternatingForm in_frame = to_frame(f, frame);
    std::map<std::array<int, 4>, double> norms;
    for (const auto& [mask, c] : in_frame.terms()) {
        auto& slot = norms[frame.factor_type(mask)];
        slot = std::max(slot, std::abs(c));
    }
    return norms;
}

VectorXcd frame_vector(const ComplexFrame& frame, int index) {
    require(index >= 0 && index < 2 * frame.m, "frame_vector: index out of range");
    return frame.R.col(index);
}

MatrixXcd hermitian_from_11(const AlternatingForm& f, const ComplexFrame& frame) {
    require(f.degree() == 2, "hermitian_from_11: degree must be 2");
    const int m = frame.m;
    MatrixXcd h(m, m);
    for (int a = 0; a < m; ++a) {
        const VectorXcd ta = frame.R.col(a);
        for (int b = 0; b < m; ++b) {
            const VectorXcd tb_bar = frame.R.col(b).conjugate();
            h(a, b) = -kI * f.evaluate({ta, tb_bar});
        }
    }
    return h;
}

AlternatingForm form_from_hermitian(const MatrixXcd& h, const ComplexFrame& frame) {
    const int m = frame.m;
    require(h.rows() == m && h.cols() == m, "form_from_hermitian: shape mismatch");
    AlternatingForm out(2 * m, 2);
    for (int a = 0; a < m; ++a) {
        const AlternatingForm theta =
            AlternatingForm::from_covector_coefficients(frame.S.row(a).transpose());
        for (int b = 0; b < m; ++b) {
            if (h(a, b) == Complex{0.0, 0.0}) continue;
            const AlternatingForm theta_bar =
                AlternatingForm::from_covector_coefficients(frame.S.row(m + b).transpose());
            out += wedge(theta, theta_bar) * (kI * h(a, b));
        }
    }
    return out;
}

MatrixXcd hermitian_gram(const AlternatingForm& f, const ComplexFrame& frame,
                         const std::vector<std::vector<int>>& basis) {
    const int p = f.degree() / 2;
    require(f.degree() == 2 * p, "hermitian_gram: degree must be even");
    // Normalization: the model form prod (i theta^a ^ conj theta^a) has unit Gram.
    Complex cp{1.0, 0.0};
    for (int i = 0; i < p; ++i) cp *= -kI;
    if ((p * (p - 1) / 2) % 2 == 1) cp = -cp;
    const int nb = static_cast<int>(basis.size());
    MatrixXcd h(nb, nb);
    for (int ia = 0; ia < nb; ++ia) {
        for (int ib = 0; ib < nb; ++ib) {
            std::vector<VectorXcd> args;
            args.reserve(2 * p);
            for (int a : basis[ia]) args.push_back(frame.R.col(a));
            for (int b : basis[ib]) args.push_back(frame.R.col(b).conjugate());
            h(ia, ib) = cp * f.evaluate(args);
        }
    }
    return h;
}

AlternatingForm frame_volume(const ComplexFrame& frame) {
    const int n = 2 * frame.m;
    AlternatingForm vol = AlternatingForm::scalar(n, Complex{1.0, 0.0});
    for (int a = 0; a < frame.m; ++a) {
        const AlternatingForm theta =
            AlternatingForm::from_covector_coefficients(frame.S.row(a).transpose());
        const AlternatingForm theta_bar =
            AlternatingForm::from_covector_coefficients(frame.S.row(frame.m + a).transpose());
        vol = wedge(vol, wedge(theta, theta_bar) * kI);
    }
    return vol;
}

double orientation_coefficient(const AlternatingForm& f, const ComplexFrame& frame) {
    require(f.degree() == f.dimension(), "orientation_coefficient: need top degree");
    const Complex top = f.top_coefficient();
    const Complex vol = frame_volume(frame).top_coefficient();
    if (vol == Complex{0.0, 0.0}) throw NumericalError("degenerate frame volume");
    return (top / vol).real();
}

namespace {

PositivityResult hermitian_verdict(const MatrixXcd& h, bool strict, double tol,
                                   const std::string& route) {
    PositivityResult res;
    res.is_pp = true;
    res.note = route;
    if (!is_hermitian(h, std::max(tol, 1e-9) * (1.0 + h.cwiseAbs().maxCoeff()))) {
        res.note = route + ": coefficient matrix is not hermitian";
        return res;
    }
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (h + h.adjoint()));
    const double lambda_min = eig.eigenvalues().minCoeff();
    res.worst_value = lambda_min;
    int worst = 0;
    eig.eigenvalues().minCoeff(&worst);
    res.witness = eig.eigenvectors().col(worst);
    if (strict)
        res.positive = hermitian_is_positive_definite(h, tol) && lambda_min > tol;
    else
        res.positive = lambda_min >= -tol;
    return res;
}

}  // namespace

PositivityResult is_positive_pp(const AlternatingForm& f, const MatrixXd& j, bool strict, Rng& rng,
                                int trials, double tol) {
    require(f.degree() % 2 == 0, "is_positive_pp: degree must be even");
    const ComplexFrame frame = complex_frame(j);
    const int m = frame.m;
    const int p = f.degree() / 2;
    PositivityResult res;

    // Bidegree gate: everything outside (p,p) must vanish.
    const AlternatingForm in_frame = to_frame(f, frame);
    double off_type = 0.0;
    for (const auto& [mask, c] : in_frame.terms())
        if (frame.unbarred_count(mask) != p) off_type = std::max(off_type, std::abs(c));
    if (off_type > std::max(tol, 1e-9) * (1.0 + f.max_abs())) {
        res.note = "form has components outside bidegree (p,p)";
        return res;
    }
    res.is_pp = true;

    if (p == 0) {
        const Complex c = f.coefficient(Mask{0});
        res.worst_value = c.real();
        res.positive = strict ? c.real() > tol : c.real() >= -tol;
        res.note = "scalar";
        return res;
    }
    if (p == m) {
        res.worst_value = orientation_coefficient(f, frame);
        res.positive = strict ? res.worst_value > tol : res.worst_value >= -tol;
        res.note = "orientation";
        return res;
    }
    if (p == 1) return hermitian_verdict(hermitian_from_11(f, frame), strict, tol, "hermitian");
    if (p == m - 1) {
        // Exact criterion: Q(gamma) = top(f ^ i gamma ^ conj gamma) / top(vol)
        // is a hermitian quadratic form in the (1,0) covector gamma.
        const Complex vol = frame_volume(frame).top_coefficient();
        MatrixXcd q(m, m);
        for (int a = 0; a < m; ++a) {
            const AlternatingForm theta =
                AlternatingForm::from_covector_coefficients(frame.S.row(a).transpose());
            for (int b = 0; b < m; ++b) {
                const AlternatingForm theta_bar =
                    AlternatingForm::from_covector_coefficients(frame.S.row(m + b).transpose());
                q(a, b) = wedge(f, wedge(theta, theta_bar) * kI).top_coefficient() / vol;
            }
        }
        return hermitian_verdict(q.transpose(), strict, tol, "codimension-one hermitian");
    }

    // Intermediate degrees: probe with random decomposable completions.
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Complex vol = frame_volume(frame).top_coefficient();
    res.note = "probabilistic";
    res.worst_value = std::numeric_limits<double>::infinity();
    auto probe = [&](const std::vector<VectorXcd>& gammas) {
        AlternatingForm probe_form = f;
        for (const auto& g : gammas) {
            const AlternatingForm gamma = AlternatingForm::from_covector_coefficients(g);
            probe_form = wedge(probe_form, wedge(gamma, gamma.conjugate()) * kI);
        }
        const double value = (probe_form.top_coefficient() / vol).real();
        if (value < res.worst_value) {
            res.worst_value = value;
            res.witness = gammas.front();
        }
    };
    // Deterministic coordinate probes first.
    for_each_monomial(m, m - p, [&](Mask subset) {
        std::vector<VectorXcd> gammas;
        for (int a : mask_axes(subset)) gammas.push_back(frame.S.row(a).transpose());
        probe(gammas);
    });
    for (int t = 0; t < trials; ++t) {
        std::vector<VectorXcd> gammas;
        for (int i = 0; i < m - p; ++i) {
            VectorXcd g = VectorXcd::Zero(2 * m);
            for (int a = 0; a < m; ++a)
                g += Complex{gauss(rng), gauss(rng)} * frame.S.row(a).transpose();
            gammas.push_back(g);
        }
        probe(gammas);
    }
    res.positive = strict ? res.worst_value > tol : res.worst_value >= -tol;
    return res;
}

bool is_hermitian(const MatrixXcd& h, double tol) {
    if (h.rows() != h.cols()) return false;
    return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

double hermitian_determinant(const MatrixXcd& h) {
    require(h.rows() == h.cols(), "hermitian_determinant: square matrix required");
    const Complex d = h.determinant();
    return d.real();
}

MatrixXcd hermitian_inverse(const MatrixXcd& h) {
    Eigen::FullPivLU<MatrixXcd> lu(h);
    if (!lu.isInvertible()) throw NumericalError("hermitian matrix is singular");
    return lu.inverse();
}

bool hermitian_is_positive_definite(const MatrixXcd& h, double tol) {
    require(h.rows() == h.cols(), "positivity check: square matrix required");
    if (!is_hermitian(h, 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()))) return false;
    // Sylvester: every leading principal minor is positive.
    for (int k = 1; k <= h.rows(); ++k) {
        const Complex minor = h.topLeftCorner(k, k).determinant();
        if (!(minor.real() > tol)) return false;
    }
    return true;
}

bool hermitian_is_positive_semidefinite(const MatrixXcd& h, double tol) {
    require(h.rows() == h.cols(), "positivity check: square matrix required");
    if (!is_hermitian(h, 1e-8 * (1.0 + h.cwiseAbs().maxCoeff()))) return false;
    return hermitian_min_eigenvalue(h) >= -tol;
}

double hermitian_min_eigenvalue(const MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(0.5 * (h + h.adjoint()));
    return eig.eigenvalues().minCoeff();
}

}  // namespace twistorlab
