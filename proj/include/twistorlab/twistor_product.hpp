#pragma once

#include <twistorlab/hypercomplex.hpp>
#include <twistorlab/qmodels.hpp>

#include <string>
#include <vector>

namespace twistorlab {

/// Product X = M x Q of a hypercomplex chart M (dim 4k) and a complex model
/// Q (dim 2n), with the almost complex structure that rotates the M factor
/// through the sphere point of h(z) while keeping the standard structure on
/// Q.  r = 2k is the complex dimension of the M factor.
struct TwistorProduct {
    HypercomplexModel m;
    QModel q;
    MapToP1 h;
    Chart chart;
    int k = 0;
    int r = 0;
    int n = 0;
    int dim() const { return 4 * k + 2 * n; }
};

TwistorProduct make_twistor_product(HypercomplexModel m, QModel q, MapToP1 h);

/// Sphere chart coordinate of the structure over p: h applied to the Q slot.
Complex zeta_at(const TwistorProduct& x, const VectorXd& p);

/// Block structure at p: (a,b,c)(zeta) . (I,J,K) on the M axes and the
/// standard structure on the Q axes.
MatrixXd structure_at(const TwistorProduct& x, const VectorXd& p);

/// | structure_at(p)^2 + Id |, largest entry.
double structure_square_residual(const TwistorProduct& x, const VectorXd& p);

/// Sphere coordinates (a, b, c) as scalar fields on the product chart with
/// analytic chain-rule partials, and the coefficients (s1, s2, s3) of the
/// vertical (2,0)-leak likewise.
std::array<ScalarField, 3> abc_fields(const TwistorProduct& x);
std::array<ScalarField, 3> sigma_fields(const TwistorProduct& x);

/// omega_M = a omega_I + b omega_J + c omega_K on the product chart.
FormField omega_m_field(const TwistorProduct& x);

/// sigma_M = s1 omega_I + s2 omega_J + s3 omega_K; type (2,0) on the M factor.
FormField sigma_m_field(const TwistorProduct& x);

/// The Q fundamental form, lifted to the product chart.
FormField omega_q_field(const TwistorProduct& x);

/// Pullback of the Fubini-Study form along h, lifted to the product chart.
FormField pullback_field(const TwistorProduct& x);

/// A (1,0)-coframe for structure_at(p): per quaternionic block the pair
/// (alpha + i zeta etabar, eta - i zeta alphabar) with alpha = e0 + i e1 and
/// eta = e2 + i e3, then the dz^j of the Q factor.  Rows are independent for
/// every zeta in the affine chart.
std::vector<AlternatingForm> one_zero_coframe(const TwistorProduct& x, const VectorXd& p);

/// Largest component of the Nijenhuis tensor of structure_at over all pairs
/// of coordinate directions, with stencil derivatives of the structure.
double nijenhuis_residual(const TwistorProduct& x, const VectorXd& p,
                          const NumericConfig& cfg);

/// Identity checks, keyed by id:
///   0120q  dbar_Q omega_M equals dbar_Q zetabar ^ sigma_M, type (2,0|0,1)
///   1002q  d_Q omega_M equals d_Q zeta ^ conj(sigma_M), type (0,2|1,0)
///   1111q  i d_Q dbar_Q omega_M = -2 h*omega ^ omega_M
///   11n1q  i d_Q omega_M ^ dbar_Q omega_M ^ omega^(r-3)
///             = 2/(r-1) h*omega ^ omega^(r-1), needs r > 2
///   fq     i d dbar omega^(r-1) = i d_M dbar_M omega^(r-1)
///             + 2 h*omega ^ omega^(r-1), needs r > 2
///   f1q    d_M dbar_Q omega_M ^ omega^(r-2) = 0
///   f2q    dbar_M d_Q omega_M ^ omega^(r-2) = 0
///   f3q    dbar_Q omega_M ^ d_M omega_M ^ omega^(r-3) = 0, needs r > 2
///   f4q    d_Q omega_M ^ dbar_M omega_M ^ omega^(r-3) = 0, needs r > 2
///
/// The sign conventions deserve a note.  d_Q omega_M carries a dz leg but its
/// fiber content is the (0,2) form conj(sigma_M), so the Dolbeault operators
/// of the product structure act on omega_M with the roles of the two
/// Q-coordinate splits exchanged: dbar(omega_M) = d_Q(omega_M).  Chasing that
/// exchange through the product rule gives the totals above; the wedge
/// coefficients 2/(r-1) and +2 are pinned by exact evaluation at zeta = 0
/// (see the unit tests) and hold at every chart point by homogeneity.
struct LemmaReport {
    std::string id;
    double residual = 0.0;  // worst |lhs - rhs| entry over the sampled points
    double scale = 0.0;     // worst |lhs| entry, for relative context
    double fitted = 0.0;    // least-squares multiple of the h*omega wedge term
                            // (ids 1111q, 11n1q, fq; zero otherwise)
    int points = 0;
};

LemmaReport verify_lemma_identity(const TwistorProduct& x, const std::string& id, int points,
                                  Rng& rng, const NumericConfig& cfg);

/// All ids meaningful at this r, in the order listed above.
std::vector<std::string> lemma_identity_ids(int r);

/// Order-of-accuracy probe: the 1111q residual in forced-stencil mode at a
/// coarse step and at half that step.  Fourth-order stencils contract the
/// truncation error by about 16 per halving.
struct ConvergenceReport {
    double coarse = 0.0;
    double fine = 0.0;
    double ratio = 0.0;
};

ConvergenceReport lemma_convergence(const TwistorProduct& x, int points, Rng& rng,
                                    double base_step);

}  // namespace twistorlab
