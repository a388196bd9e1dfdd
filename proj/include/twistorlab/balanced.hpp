#pragma once

#include <twistorlab/twistor_product.hpp>

#include <string>
#include <vector>

namespace twistorlab {

/// Scale knobs shared by the balanced-metric constructions.  All entries
/// must be strictly positive where they are consumed.
struct BalancedConfig {
    double t = 1.0;        // hyper-Kahler sum scale omega_M + t omega_Q
    double gamma = 10.0;   // leading coefficient of the submersion volume form
    double t_prime = 1.0;  // weight of the global correction term
    double cutoff_t = 1.0; // exponent of the local cutoff potential
    double tol = 1e-9;
};

// -------------------------------------------------------------------------
// The bijection between positive (1,1) forms and positive (n-1,n-1) forms
// on C^n with the standard structure.  Forward is phi -> phi^(n-1)/(n-1)!;
// in the hatted-monomial basis the forward image has coefficient matrix
// det(phi) * transpose(inverse(phi)) (the cofactor matrix), which is what the
// inverse map inverts: det recovered as det(psi)^(1/(n-1)).

/// phi: strictly positive (1,1) form on a 2n-dimensional chart.
AlternatingForm michelsohn_forward(const AlternatingForm& phi, int n);

/// psi: strictly positive (n-1, n-1) form.  Round trips with the forward map
/// to 1e-10 on positive definite inputs.
AlternatingForm michelsohn_inverse(const AlternatingForm& psi, int n);

/// xi-tilde combiner: given A, B > 0 and positive (1,1) forms phi (supported
/// on an n-complex-dimensional factor) and theta (on an r-dimensional one),
/// returns the unique positive combination u phi + v theta with
///   (u phi + v theta)^(n+r-1) / (n+r-1)! = A phi^(n-1)^theta^r
///                                        + B phi^n^theta^(r-1),
/// u = alpha^(-(r-1)/(n+r-1)) beta^(r/(n+r-1)),
/// v = alpha^(n/(n+r-1)) beta^(-(n-1)/(n+r-1)),
/// alpha = (n-1)! r! A, beta = (r-1)! n! B.  Pure exterior algebra.
AlternatingForm combine_xi_tilde(double a, double b, const AlternatingForm& phi,
                                 const AlternatingForm& theta, int n, int r);

// -------------------------------------------------------------------------
// Chern torsion of a Hermitian metric in holomorphic coordinates.

/// All index data of the torsion of the Chern connection at one point.
/// christoffel[i](j,k) = Gamma_{ij}^k = g^{qbar k} d_i g_{j qbar};
/// torsion[i](j,k)     = T_{ij}^k = Gamma_{ij}^k - Gamma_{ji}^k;
/// lowered[i](j,l)     = T_{ij lbar} = d_i g_{j lbar} - d_j g_{i lbar}.
/// psi and phi are the two scalar invariants entering the wedge identities
///   i d omega ^ dbar omega ^ omega^(r-3) = psi / (r(r-1)(r-2)) omega^r,
///   i d dbar omega ^ omega^(r-2)         = phi / (r(r-1)) omega^r,
/// with psi = T_{ip}^p conj(T_{jq}^q) g^{jbar i}
///          - (1/2) g^{jbar i} g^{qbar p} g^{lbar k} T_{ip lbar} conj(T_{jq kbar})
/// and phi  = (1/2) g^{kbar i} g^{lbar j} (d_kbar T_{ij lbar} - d_lbar T_{ij kbar}).
struct ChernTorsionData {
    VectorXd point;
    MatrixXcd g;
    MatrixXcd g_inv;
    std::vector<MatrixXcd> christoffel;
    std::vector<MatrixXcd> torsion;
    std::vector<MatrixXcd> lowered;
    double psi = 0.0;
    double phi = 0.0;
};

ChernTorsionData chern_torsion(const HermitianMetricField& g, const VectorXd& p,
                               const NumericConfig& cfg);

/// Residuals of the four torsion form identities at a point, checked against
/// the engine's Dolbeault split of the metric form:
///   d_form:      d omega = (i/2) T_{ij lbar} dw^i ^ dw^j ^ dwbar^l
///   dbar_form:   dbar omega = (i/2) conj(T_{lj ibar}) dw^i ^ dwbar^j ^ dwbar^l
///   wedge_identity: the psi identity above (needs dim >= 3, else zero)
///   ddbar_identity: the phi identity above
struct TorsionFormResiduals {
    double d_form = 0.0;
    double dbar_form = 0.0;
    double wedge_identity = 0.0;
    double ddbar_identity = 0.0;
};

TorsionFormResiduals torsion_form_residuals(const HermitianMetricField& g, const VectorXd& p,
                                            const NumericConfig& cfg);

/// | (tr_g chi) omega^m - m chi ^ omega^(m-1) | / max(1, scale) for the metric
/// form of g and the (1,1) form of the Hermitian matrix chi; exact algebra.
double trace_wedge_residual(const MatrixXcd& g, const MatrixXcd& chi);

// -------------------------------------------------------------------------
// The two balanced-metric constructions on X = M x Q.

/// omega = omega_M + t omega_Q on a product with flat fiber model and closed
/// omega_Q.  The top-power derivative vanishes while d omega itself does not.
struct HyperkahlerBalanced {
    FormField omega;
    double d_power_residual = 0.0;       // max |d(omega^(n+r-1))| over samples
    double d_omega_floor = 0.0;          // min over samples of max |d omega|
    double min_metric_eigenvalue = 0.0;  // positivity margin of omega
    int points = 0;
};

HyperkahlerBalanced balanced_hk(const TwistorProduct& x, double t, int points, Rng& rng,
                                const NumericConfig& cfg);

/// Explicit balanced metric when h has no critical points on the chart.
/// power = gamma omega_M^r ^ omega_Q^(n-1) + i d dbar(omega_M^(r-1)) ^ omega_Q^(n-1),
/// assembled through the closed-form value of the middle factor on the flat
/// fiber model: i d dbar(omega_M^(r-1)) = 2 (h* omega) ^ omega_M^(r-1).
/// metric is the (1,1) form with metric^(n+r-1)/(n+r-1)! = power, produced by
/// the combiner with A = gamma + (phi_scalar + [r>2] psi_scalar)/r (the
/// torsion scalars vanish on the flat model) and B = 2 tr_{omega_Q}(h* omega)/n.
struct SubmersionBalanced {
    FormField power;
    FormField metric;
    double gamma = 0.0;              // after any automatic doubling
    double identity_residual = 0.0;  // metric^(n+r-1)/(n+r-1)! vs power
    double d_power_residual = 0.0;
    double min_scalar = 0.0;         // smallest sampled value of A
    double min_trace = 0.0;          // smallest sampled tr_{omega_Q}(h* omega)
    double min_metric_eigenvalue = 0.0;
    int points = 0;
};

/// auto_raise doubles gamma until A clears a 0.1 margin at every sample;
/// with auto_raise off a violation raises NumericalError instead.
SubmersionBalanced balanced_submersion(const TwistorProduct& x, double gamma, int points,
                                       Rng& rng, const NumericConfig& cfg,
                                       bool auto_raise = true);

/// Local correction form at a critical slice {z^slice_axis = 0} of h:
/// direct    = i d dbar((1 + |z|^2)^t omega_M^(r-1)) by nested differentiation
/// expansion = i t omega_M^(r-1) ^ dz ^ dzbar
///           + 2 (h* omega) ^ omega_M^(r-1) + i d_M dbar_M(omega_M^(r-1)),
/// which agree on the slice (the cutoff is the constant 1 there, so the
/// cross terms carry a factor that vanishes).  e_margin is the smallest
/// eigenvalue of direct ^ omega_Q^(n-1) paired over the hyperplanes that
/// omit one fiber direction; it grows linearly in t at a critical point.
struct CutoffXi {
    AlternatingForm direct;
    AlternatingForm expansion;
    double residual = 0.0;
    double e_margin = 0.0;
};

CutoffXi critical_cutoff_xi(const TwistorProduct& x, int slice_axis, double t,
                            const VectorXd& p, const NumericConfig& cfg);

// -------------------------------------------------------------------------
// Positivity patching search and the non-Kahler witness.

/// Smallest power-of-two c (searched upward from 1) with h[s] + c h_prime[s]
/// positive definite for every sample s.  The first e_rank indices form the
/// E block: h must be positive definite there, h_prime must vanish on E and
/// be positive definite on the complement.  bound is the normalized-frame
/// Schur estimate max_s (sum |H_{i alpha}|^2 + max(0, -lambda_min(H_FF)))
/// floored at 1; the returned c never exceeds 4 * bound.
struct Lemma2Result {
    double c = 0.0;
    double bound = 0.0;
};

Lemma2Result lemma2_search_c(const std::vector<MatrixXcd>& h,
                             const std::vector<MatrixXcd>& h_prime, int e_rank);

/// Orientation coefficient of the Kahler obstruction form
///   -(i d_Q dbar_Q omega_M) ^ omega_X^(n+r-2) = 2 (h* omega) ^ omega_M ^ omega_X^(n+r-2)
/// relative to omega_X^(n+r)/(n+r)! at one point (flat fiber model, where the
/// vertical second derivative of omega_M has the closed form above; the same
/// form is the full i d dbar omega_M obstruction, see the identity notes in
/// twistor_product.hpp).  Nonnegative everywhere, zero exactly where dh = 0,
/// so a Kahler omega_X would contradict Stokes on a closed manifold.
struct WitnessSample {
    VectorXd point;
    double coefficient = 0.0;
    double dh_norm = 0.0;
};

WitnessSample witness_coefficient(const TwistorProduct& x, const FormField& omega_x,
                                  const VectorXd& p, const NumericConfig& cfg);

/// Sweep of witness_coefficient over sampled points.  violations counts
/// samples with coefficient < -tol; the list keeps their points.
struct WitnessReport {
    std::vector<WitnessSample> samples;
    double min_coefficient = 0.0;
    std::vector<VectorXd> violations;
};

WitnessReport nonkahler_witness(const TwistorProduct& x, const FormField& omega_x, int points,
                                Rng& rng, const NumericConfig& cfg, double tol = 1e-10);

}  // namespace twistorlab
