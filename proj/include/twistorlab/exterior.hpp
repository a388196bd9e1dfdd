#pragma once

#include <initializer_list>
#include <map>
#include <optional>
#include <vector>

#include <twistorlab/common.hpp>

namespace twistorlab {

// Complex-valued alternating forms on a real coordinate chart.
//
// A degree-d form is stored sparsely as a map from strictly increasing index
// tuples to complex coefficients.  A tuple {a_1 < ... < a_d} is encoded as a
// bitmask with those bits set, so wedge products of monomials reduce to
// disjoint bit unions plus an inversion-parity sign.
//
// Conventions used throughout:
//   * an endomorphism A acts on one-forms by (A theta)(v) = theta(A v);
//   * a covector theta is of type (1,0) for a complex structure J when
//     J theta = i theta in the sense above;
//   * dz = dx + i dy on each complex coordinate pair (x, y).
class AlternatingForm {
  public:
    AlternatingForm(int dimension, int degree);

    static AlternatingForm scalar(int dimension, Complex value);
    static AlternatingForm covector(int dimension, int axis);
    /// Two-form from an antisymmetric coefficient matrix W, W(a,b) = form(e_a, e_b).
    static AlternatingForm from_antisymmetric(const MatrixXcd& w);
    /// Degree-1 form with the given coefficient vector.
    static AlternatingForm from_covector_coefficients(const VectorXcd& c);

    int dimension() const { return dim_; }
    int degree() const { return degree_; }

    Complex coefficient(Mask monomial) const;
    /// Coefficient for a possibly unsorted axis list; applies the sorting sign.
    Complex coefficient(std::initializer_list<int> axes) const;
    void add_term(Mask monomial, Complex value);
    void set_term(Mask monomial, Complex value);

    const std::map<Mask, Complex>& terms() const { return coef_; }
    std::size_t term_count() const { return coef_.size(); }

    AlternatingForm& operator+=(const AlternatingForm& other);
    AlternatingForm& operator-=(const AlternatingForm& other);
    AlternatingForm& operator*=(Complex s);
    AlternatingForm operator+(const AlternatingForm& other) const;
    AlternatingForm operator-(const AlternatingForm& other) const;
    AlternatingForm operator-() const;
    AlternatingForm operator*(Complex s) const;

    AlternatingForm conjugate() const;
    /// Keeps only terms supported inside `axes`; optionally reindexes onto a
    /// chart of dimension popcount(axes) in ascending axis order.
    AlternatingForm restrict_to(Mask axes, bool reindex = false) const;
    /// Same form on a larger chart, axes shifted up by `offset`.
    AlternatingForm embedded(int new_dimension, int offset) const;

    /// Evaluation on degree() complexified tangent vectors.
    Complex evaluate(const std::vector<VectorXcd>& vectors) const;

    double max_abs() const;
    double norm_l2() const;
    /// Drops terms with |coefficient| <= eps.
    AlternatingForm pruned(double eps) const;
    bool approx_equal(const AlternatingForm& other, double tol) const;

    /// Coefficient of the full-dimension monomial (degree must equal dimension).
    Complex top_coefficient() const;

  private:
    int dim_;
    int degree_;
    std::map<Mask, Complex> coef_;
};

inline AlternatingForm operator*(Complex s, const AlternatingForm& f) { return f * s; }

/// Sign of concatenating monomial `a` before `b` relative to the sorted
/// union; 0 when they share an axis.
int merge_sign(Mask a, Mask b);

/// Graded product.  Degrees beyond the chart dimension collapse to the
/// canonical zero form of top degree.
AlternatingForm wedge(const AlternatingForm& a, const AlternatingForm& b);
AlternatingForm wedge_power(const AlternatingForm& a, int power);

/// One-form pushed through an endomorphism: (A theta)(v) = theta(A v).
AlternatingForm act_on_one_form(const MatrixXd& endo, const AlternatingForm& theta);

/// Checks J*J = -Id within tol.
bool is_complex_structure(const MatrixXd& j, double tol = 1e-12);

// A complex coframe for a 2m-dimensional chart: rows 0..m-1 of S are the
// (1,0) covectors, rows m..2m-1 their conjugates.  R = S^{-1}.  Each row tag
// records conjugation and, for product charts, membership in the second
// factor, so forms can be graded by factor bidegree.
struct FrameRow {
    bool barred = false;
    bool second_factor = false;
};

struct ComplexFrame {
    MatrixXcd S;
    MatrixXcd R;
    std::vector<FrameRow> rows;
    int m = 0;  // complex dimension

    int unbarred_count(Mask monomial) const;
    int barred_count(Mask monomial) const;
    /// (p1, q1, p2, q2): factor-graded bidegree counts of a frame monomial.
    std::array<int, 4> factor_type(Mask monomial) const;
};

/// Orthonormal (1,0) coframe of an almost complex structure.
ComplexFrame complex_frame(const MatrixXd& j);
/// Frame of a block product: J = diag(j_first, j_second), with rows tagged by
/// factor.  Row order: first-factor (1,0), second-factor (1,0), conjugates.
ComplexFrame product_frame(const MatrixXd& j_first, const MatrixXd& j_second);
/// Frame of the standard structure on C^m (coordinates x_1,y_1,...,x_m,y_m),
/// with rows dz^1..dz^m, dzbar^1..dzbar^m exactly.
ComplexFrame standard_frame(int m);
/// Standard complex structure matrix on C^m.
MatrixXd standard_structure(int m);

/// Rewrites a real-coordinate form in frame monomials (and back).
AlternatingForm to_frame(const AlternatingForm& f, const ComplexFrame& frame);
AlternatingForm from_frame(const AlternatingForm& f, const ComplexFrame& frame);

/// Component with p unbarred and q barred frame indices.
AlternatingForm bidegree_project(const AlternatingForm& f, const ComplexFrame& frame, int p, int q);
AlternatingForm bidegree_project(const AlternatingForm& f, const MatrixXd& j, int p, int q);

/// Max-abs norms of the factor-graded components of a form, keyed by
/// (p1, q1, p2, q2).  Only computed against a product frame.
std::map<std::array<int, 4>, double> factor_type_norms(const AlternatingForm& f,
                                                       const ComplexFrame& frame);

/// Tangent-space (1,0) basis dual to the coframe: columns a of R.
/// frame_vector(frame, a) with a in [0, 2m) returns column a (barred half
/// gives the conjugate vectors).
VectorXcd frame_vector(const ComplexFrame& frame, int index);

/// Hermitian coefficient matrix of a (1,1)-form: H(a,b) = -i f(t_a, conj(t_b))
/// over the dual (1,0) tangent frame, so f = i sum H(a,b) theta^a ^ conj(theta^b).
MatrixXcd hermitian_from_11(const AlternatingForm& f, const ComplexFrame& frame);
/// Inverse of hermitian_from_11: assembles i sum H(a,b) theta^a ^ conj(theta^b).
AlternatingForm form_from_hermitian(const MatrixXcd& h, const ComplexFrame& frame);

/// Gram matrix of a (p,p)-form over a chosen set of p-fold wedge directions.
/// Each basis element is a strictly increasing tuple of frame indices in
/// [0, m).  Normalized so the p-th power of a metric form yields its Gram
/// determinant pattern with positive diagonal.
MatrixXcd hermitian_gram(const AlternatingForm& f, const ComplexFrame& frame,
                         const std::vector<std::vector<int>>& basis);

/// Positivity verdict for a (p,p)-form.  worst_value is measured against an
/// l2-orthonormal (1,0)-coframe of J (eigenvalues there are unitary
/// invariant); relative to dz-coordinates on C^m this rescales by 2^p.
struct PositivityResult {
    bool positive = false;
    bool is_pp = false;            // passed the bidegree check
    double worst_value = 0.0;      // smallest eigenvalue or orientation sample
    VectorXcd witness;             // covector coefficients at the worst trial
    std::string note;
};

/// Tests f >= 0 (or > 0) as a (p,p)-form for J.  Degree (1,1) and (m-1,m-1)
/// use the exact Hermitian criterion; other degrees are probed with `trials`
/// random (1,0) covector completions against the orientation of J.
PositivityResult is_positive_pp(const AlternatingForm& f, const MatrixXd& j, bool strict,
                                Rng& rng, int trials = 64, double tol = 1e-9);

/// Volume form of a frame: prod_a (i theta^a ^ conj(theta^a)).
AlternatingForm frame_volume(const ComplexFrame& frame);

/// Ratio top(f) / top(vol_J); real for real (m,m)-forms, positive when f is
/// positively oriented for J.
double orientation_coefficient(const AlternatingForm& f, const ComplexFrame& frame);

// Hermitian matrix helpers (exact linear algebra, no randomness).
bool is_hermitian(const MatrixXcd& h, double tol = 1e-10);
double hermitian_determinant(const MatrixXcd& h);
MatrixXcd hermitian_inverse(const MatrixXcd& h);
/// Strict positive definiteness via leading principal minors.
bool hermitian_is_positive_definite(const MatrixXcd& h, double tol = 0.0);
/// Positive semidefiniteness via the smallest eigenvalue (minors are not
/// sufficient for the semidefinite case).
bool hermitian_is_positive_semidefinite(const MatrixXcd& h, double tol = 1e-12);
double hermitian_min_eigenvalue(const MatrixXcd& h);

}  // namespace twistorlab
