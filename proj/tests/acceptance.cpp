// Acceptance gate: twelve end-to-end checks, one line each, nonzero exit on
// any failure.  Every tolerance is pinned here.

#include <twistorlab/balanced.hpp>
#include <twistorlab/covers.hpp>
#include <twistorlab/exterior.hpp>
#include <twistorlab/hypercomplex.hpp>
#include <twistorlab/qmodels.hpp>
#include <twistorlab/twistor_product.hpp>

#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace twistorlab;

namespace {

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

MatrixXcd random_pd(Rng& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex{gauss(rng), gauss(rng)};
    return MatrixXcd(a * a.adjoint() + 0.2 * MatrixXcd::Identity(n, n));
}

MatrixXcd random_hermitian(Rng& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex{gauss(rng), gauss(rng)};
    return MatrixXcd(0.5 * (a + a.adjoint()));
}

// ---------------------------------------------------------------------------
// 1. Quaternion relations, metric compatibility, frame identities.

bool quaternionic_structure(std::string& detail) {
    Rng rng(101);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double relations = 0.0, compat = 0.0, frames = 0.0;
    for (const bool flat : {true, false})
        for (const int k : {1, 2}) {
            const HypercomplexModel m = flat ? build_flat_torus(k) : build_hopf_chart(k);
            const int d = 4 * k;
            const MatrixXd id = MatrixXd::Identity(d, d);
            for (const MatrixXd& rel :
                 {MatrixXd(m.I * m.J - m.K), MatrixXd(m.J * m.K - m.I),
                  MatrixXd(m.K * m.I - m.J), MatrixXd(m.I * m.I + id),
                  MatrixXd(m.J * m.J + id), MatrixXd(m.K * m.K + id)})
                relations = std::max(relations, rel.cwiseAbs().maxCoeff());
            const std::array<FormField, 3> forms = fundamental_forms(m);
            const MatrixXd* structures[3] = {&m.I, &m.J, &m.K};
            for (int pt = 0; pt < 50; ++pt) {
                const VectorXd p = m.chart.sample(rng, 0.1);
                const double conf = m.conf.eval(p).real();
                VectorXd u(d), v(d);
                for (int a = 0; a < d; ++a) {
                    u[a] = gauss(rng);
                    v[a] = gauss(rng);
                }
                u.normalize();
                v.normalize();
                for (int s = 0; s < 3; ++s) {
                    const MatrixXd& a = *structures[s];
                    compat = std::max(
                        compat, conf * std::abs((a * u).dot(a * v) - u.dot(v)));
                    const AlternatingForm w = forms[s].eval(p);
                    for (int x = 0; x < d; ++x)
                        for (int y = x + 1; y < d; ++y)
                            frames = std::max(
                                frames,
                                std::abs(w.coefficient({x, y}) - Complex(conf * a(y, x))));
                }
            }
        }
    detail = "relations " + sci(relations) + ", compatibility " + sci(compat) +
             ", frames " + sci(frames);
    return relations < 1e-12 && compat < 1e-12 && frames < 1e-10;
}

// ---------------------------------------------------------------------------
// 2. Sphere chart map: unit norm, scale invariance, pole anchors.

bool sphere_chart_map(std::string& detail) {
    Rng rng(202);
    std::uniform_real_distribution<double> box(-3.0, 3.0);
    std::uniform_real_distribution<double> logmag(-3.0, 3.0);
    double norms = 0.0, scales = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const Complex zeta{box(rng), box(rng)};
        norms = std::max(norms, std::abs(twistor_sphere_map(zeta).norm() - 1.0));
        Complex z1{box(rng), box(rng)};
        if (std::abs(z1) < 0.1) z1 += Complex{1.0, 0.0};
        const Complex z2 = zeta * z1;
        const Complex lambda = std::polar(std::pow(10.0, logmag(rng)), box(rng));
        scales = std::max(scales, (twistor_sphere_map((lambda * z2) / (lambda * z1)) -
                                   twistor_sphere_map(z2 / z1))
                                      .norm());
    }
    double anchors = 0.0;
    const HypercomplexModel m = build_flat_torus(1);
    const Complex poles[3] = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    const Eigen::Vector3d targets[3] = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    const MatrixXd* structures[3] = {&m.I, &m.J, &m.K};
    for (int s = 0; s < 3; ++s) {
        const Eigen::Vector3d abc = twistor_sphere_map(poles[s]);
        anchors = std::max(anchors, (abc - targets[s]).norm());
        anchors = std::max(anchors, (structure_from_abc(m, abc[0], abc[1], abc[2]) -
                                     *structures[s])
                                        .cwiseAbs()
                                        .maxCoeff());
    }
    detail = "norm " + sci(norms) + ", scaling " + sci(scales) + ", anchors " +
             sci(anchors);
    return norms < 1e-12 && scales < 1e-12 && anchors < 1e-12;
}

// ---------------------------------------------------------------------------
// 3. Integrability dichotomy across the model catalogue.

bool integrability_dichotomy(std::string& detail) {
    Rng rng(303);
    const NumericConfig cfg;
    double holo = 0.0, squares = 0.0;
    double conj = std::numeric_limits<double>::infinity();
    struct Case {
        QModel q;
        MapToP1 h;
    };
    std::vector<Case> cases;
    cases.push_back({qmodel_p1(), map_identity()});
    cases.push_back({qmodel_p1(), map_square()});
    cases.push_back({qmodel_p1xp1(), map_projection(2, 0)});
    cases.push_back({qmodel_hirzebruch(1, 1.0), map_projection(2, 0)});
    cases.push_back({qmodel_affine(2), map_z1sq_plus_z2()});
    for (const Case& c : cases) {
        const TwistorProduct x = make_twistor_product(build_flat_torus(1), c.q, c.h);
        for (int i = 0; i < 50; ++i) {
            const VectorXd p = x.chart.sample(rng, 0.1);
            holo = std::max(holo, nijenhuis_residual(x, p, cfg));
            squares = std::max(squares, structure_square_residual(x, p));
        }
    }
    const TwistorProduct xc =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_conj());
    for (int i = 0; i < 50; ++i) {
        const VectorXd p = xc.chart.sample(rng, 0.1);
        conj = std::min(conj, nijenhuis_residual(xc, p, cfg));
        squares = std::max(squares, structure_square_residual(xc, p));
    }
    detail = "holomorphic " + sci(holo) + ", conj floor " + sci(conj) + ", squares " +
             sci(squares);
    return holo < 1e-6 && conj > 0.05 && squares < 1e-12;
}

// ---------------------------------------------------------------------------
// 4. Vertical derivative identities and the convergence order.

bool vertical_identities(std::string& detail) {
    Rng rng(404);
    const NumericConfig cfg;
    const TwistorProduct x1 =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_identity());
    const TwistorProduct x2 =
        make_twistor_product(build_flat_torus(2), qmodel_p1(), map_identity());
    const double r0120 = verify_lemma_identity(x1, "0120q", 8, rng, cfg).residual;
    const double r1002 = verify_lemma_identity(x1, "1002q", 8, rng, cfg).residual;
    const double r1111 = verify_lemma_identity(x1, "1111q", 8, rng, cfg).residual;
    const double r11n1 = verify_lemma_identity(x2, "11n1q", 4, rng, cfg).residual;
    const double rfq = verify_lemma_identity(x2, "fq", 2, rng, cfg).residual;
    const ConvergenceReport conv = lemma_convergence(x1, 2, rng, 0.04);
    detail = "first order " + sci(std::max(r0120, r1002)) + ", second " + sci(r1111) +
             ", rank four " + sci(std::max(r11n1, rfq)) + ", step ratio " +
             sci(conv.ratio);
    return r0120 < 1e-6 && r1002 < 1e-6 && r1111 < 1e-5 && r11n1 < 1e-4 &&
           rfq < 1e-4 && conv.ratio >= 8.0;
}

// ---------------------------------------------------------------------------
// 5. Positive power bijection with the cofactor anchor.

Mask hat_mask(int n, int k, int l) {
    Mask m = 0;
    for (int a = 0; a < n; ++a)
        if (a != k) m |= Mask{1} << a;
    for (int b = 0; b < n; ++b)
        if (b != l) m |= Mask{1} << (n + b);
    return m;
}

Complex hat_phase(int n, int k, int l) {
    Complex ph{1.0, 0.0};
    for (int t = 0; t + 1 < n; ++t) ph *= kI;
    const int parity = ((n - 1) * (n - 2) / 2 + k + l) & 1;
    return parity ? -ph : ph;
}

bool power_bijection(std::string& detail) {
    Rng rng(505);
    double roundtrip = 0.0;
    for (const int n : {2, 3, 4})
        for (int rep = 0; rep < 50; ++rep) {
            const AlternatingForm phi =
                form_from_hermitian(random_pd(rng, n), standard_frame(n));
            const AlternatingForm back = michelsohn_inverse(michelsohn_forward(phi, n), n);
            roundtrip = std::max(
                roundtrip, (back - phi).max_abs() / std::max(1.0, phi.max_abs()));
        }
    MatrixXcd diag = MatrixXcd::Zero(3, 3);
    diag(0, 0) = 1.0;
    diag(1, 1) = 2.0;
    diag(2, 2) = 3.0;
    const AlternatingForm psi =
        michelsohn_forward(form_from_hermitian(diag, standard_frame(3)), 3);
    const AlternatingForm framed = to_frame(psi, standard_frame(3));
    double anchor = 0.0;
    const double cofactor[3] = {6.0, 3.0, 2.0};
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l) {
            const Complex got = framed.coefficient(hat_mask(3, k, l)) / hat_phase(3, k, l);
            const Complex want = k == l ? Complex(cofactor[k]) : Complex(0.0);
            anchor = std::max(anchor, std::abs(got - want));
        }
    detail = "roundtrip " + sci(roundtrip) + ", cofactor anchor " + sci(anchor);
    return roundtrip < 1e-10 && anchor < 1e-12;
}

// ---------------------------------------------------------------------------
// 6. Volume form combiner identity.

double factorial_d(int n) {
    double f = 1.0;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

bool volume_combiner(std::string& detail) {
    Rng rng(606);
    std::uniform_real_distribution<double> coef(0.2, 3.0);
    double worst = 0.0;
    const int pairs[3][2] = {{1, 2}, {2, 2}, {1, 4}};
    for (const auto& nr : pairs) {
        const int n = nr[0], r = nr[1];
        const int dim = 2 * (n + r);
        for (int rep = 0; rep < 50; ++rep) {
            const AlternatingForm phi =
                form_from_hermitian(random_pd(rng, n), standard_frame(n)).embedded(dim, 0);
            const AlternatingForm theta =
                form_from_hermitian(random_pd(rng, r), standard_frame(r))
                    .embedded(dim, 2 * n);
            const double a = coef(rng), b = coef(rng);
            const AlternatingForm xi = combine_xi_tilde(a, b, phi, theta, n, r);
            const AlternatingForm lhs =
                wedge_power(xi, n + r - 1) * Complex(1.0 / factorial_d(n + r - 1));
            const AlternatingForm rhs =
                wedge(wedge_power(phi, n - 1), wedge_power(theta, r)) * Complex(a) +
                wedge(wedge_power(phi, n), wedge_power(theta, r - 1)) * Complex(b);
            worst = std::max(worst,
                             (lhs - rhs).max_abs() / std::max(1.0, rhs.max_abs()));
        }
    }
    detail = "identity " + sci(worst);
    return worst < 1e-10;
}

// ---------------------------------------------------------------------------
// 7. Balanced hyper-Kahler sum metric.

bool balanced_sum(std::string& detail) {
    Rng rng(707);
    const NumericConfig cfg;
    double closed = 0.0;
    double floor = std::numeric_limits<double>::infinity();
    const TwistorProduct xs[2] = {
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_identity()),
        make_twistor_product(build_flat_torus(1), qmodel_p1xp1(), map_projection(2, 0))};
    for (const TwistorProduct& x : xs)
        for (const double t : {0.5, 1.0, 10.0}) {
            const HyperkahlerBalanced hk = balanced_hk(x, t, 30, rng, cfg);
            closed = std::max(closed, hk.d_power_residual);
            floor = std::min(floor, hk.d_omega_floor);
        }
    detail = "top power " + sci(closed) + ", d omega floor " + sci(floor);
    return closed < 1e-5 && floor > 0.05;
}

// ---------------------------------------------------------------------------
// 8. Submersion balanced metric, trace identity, torsion scalars.

HermitianMetricField conformal_metric(const HypercomplexModel& m) {
    HermitianMetricField g;
    g.chart = m.chart;
    g.n = 2 * m.k;
    const ScalarField conf = m.conf;
    const int n = g.n;
    g.value = [conf, n](const VectorXd& p) {
        return MatrixXcd(MatrixXcd::Identity(n, n) * (0.5 * conf.eval(p)));
    };
    g.partial = [conf, n](int axis, const VectorXd& p) {
        return MatrixXcd(MatrixXcd::Identity(n, n) * (0.5 * conf.partial_fn(axis, p)));
    };
    return g;
}

bool submersion_metric(std::string& detail) {
    Rng rng(808);
    const NumericConfig cfg;
    const TwistorProduct x =
        make_twistor_product(build_flat_torus(2), qmodel_p1(), map_identity());
    const SubmersionBalanced sb = balanced_submersion(x, 10.0, 8, rng, cfg);

    double trace = 0.0;
    for (const int m : {2, 3, 4})
        for (int rep = 0; rep < 10; ++rep)
            trace = std::max(trace, trace_wedge_residual(random_pd(rng, m),
                                                         random_hermitian(rng, m)));

    HermitianMetricField flat;
    flat.chart = Chart::box(8, 1.0);
    flat.n = 4;
    flat.value = [](const VectorXd&) {
        return MatrixXcd(0.5 * MatrixXcd::Identity(4, 4));
    };
    flat.partial = [](int, const VectorXd&) { return MatrixXcd(MatrixXcd::Zero(4, 4)); };
    const ChernTorsionData ft = chern_torsion(flat, flat.chart.center(), cfg);
    const bool scalars_zero = ft.psi == 0.0 && ft.phi == 0.0;

    const HypercomplexModel hopf = build_hopf_chart(2);
    const HermitianMetricField g = conformal_metric(hopf);
    double oracle = 0.0, forms = 0.0;
    for (int trial = 0; trial < 3; ++trial) {
        const VectorXd p = g.chart.sample(rng, 0.15);
        const ChernTorsionData t = chern_torsion(g, p, cfg);
        const double cval = g.value(p)(0, 0).real() * 2.0;
        VectorXcd du(g.n);
        for (int i = 0; i < g.n; ++i)
            du[i] = 0.5 *
                    (hopf.conf.partial_fn(2 * i, p) -
                     kI * hopf.conf.partial_fn(2 * i + 1, p)) /
                    cval;
        for (int i = 0; i < g.n; ++i)
            for (int j = 0; j < g.n; ++j)
                for (int l = 0; l < g.n; ++l) {
                    const Complex want =
                        0.5 * cval * (du[i] * double(j == l) - du[j] * double(i == l));
                    oracle = std::max(oracle, std::abs(t.lowered[i](j, l) - want));
                }
        const TorsionFormResiduals res = torsion_form_residuals(g, p, cfg);
        forms = std::max({forms, res.d_form, res.dbar_form, res.wedge_identity,
                          res.ddbar_identity});
    }
    detail = "identity " + sci(sb.identity_residual) + ", closedness " +
             sci(sb.d_power_residual) + ", trace " + sci(trace) + ", flat scalars " +
             (scalars_zero ? "0" : "nonzero") + ", conformal " +
             sci(std::max(oracle, forms));
    return sb.identity_residual < 1e-8 && sb.d_power_residual < 1e-4 &&
           trace < 1e-10 && scalars_zero && oracle < 1e-6 && forms < 1e-6;
}

// ---------------------------------------------------------------------------
// 9. Critical cutoff correction with linear margin growth.

bool cutoff_correction(std::string& detail) {
    const NumericConfig cfg;
    const TwistorProduct x =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_square());
    const VectorXd p = x.chart.center();
    double residual = 0.0;
    double margins[3] = {0.0, 0.0, 0.0};
    const double ts[3] = {1.0, 2.0, 4.0};
    for (int i = 0; i < 3; ++i) {
        const CutoffXi c = critical_cutoff_xi(x, 0, ts[i], p, cfg);
        residual = std::max(residual, c.residual);
        margins[i] = c.e_margin;
    }
    const double r21 = margins[1] / margins[0];
    const double r42 = margins[2] / margins[1];
    detail = "expansion " + sci(residual) + ", margins " + sci(margins[0]) + "/" +
             sci(margins[1]) + "/" + sci(margins[2]);
    return residual < 1e-4 && margins[0] > 0.0 && margins[1] > 0.0 &&
           margins[2] > 0.0 && std::abs(r21 - 2.0) < 0.2 && std::abs(r42 - 2.0) < 0.2;
}

// ---------------------------------------------------------------------------
// 10. Positivity patching constant against the analytic bound.

bool patching_constant(std::string& detail) {
    Rng rng(1010);
    std::uniform_int_distribution<int> dims(2, 5);
    double excess = 0.0;
    bool definite = true;
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = dims(rng);
        std::uniform_int_distribution<int> eplace(1, dim - 1);
        const int e = eplace(rng);
        const int count = 1 + trial % 3;
        std::vector<MatrixXcd> hs, hp;
        for (int s = 0; s < count; ++s) {
            MatrixXcd h = random_hermitian(rng, dim);
            h.topLeftCorner(e, e) = random_pd(rng, e);
            hs.push_back(h);
            MatrixXcd q = MatrixXcd::Zero(dim, dim);
            q.bottomRightCorner(dim - e, dim - e) = random_pd(rng, dim - e);
            hp.push_back(q);
        }
        const Lemma2Result res = lemma2_search_c(hs, hp, e);
        excess = std::max(excess, res.c - 4.0 * res.bound);
        for (int s = 0; s < count; ++s)
            definite = definite &&
                       hermitian_is_positive_definite(MatrixXcd(hs[s] + res.c * hp[s]));
    }
    detail = std::string("definite ") + (definite ? "yes" : "no") + ", bound excess " +
             sci(excess);
    return definite && excess <= 0.0;
}

// ---------------------------------------------------------------------------
// 11. Non-Kahler orientation witness at rank two and four.

bool nonkahler_orientation(std::string& detail) {
    Rng rng(1111);
    const NumericConfig cfg;
    double floor_id = std::numeric_limits<double>::infinity();
    double crit_worst = 0.0;
    bool positive = true;
    for (const int k : {1, 2}) {
        const int points = k == 1 ? 30 : 10;
        const TwistorProduct xi =
            make_twistor_product(build_flat_torus(k), qmodel_p1(), map_identity());
        const HyperkahlerBalanced hki = balanced_hk(xi, 1.0, 6, rng, cfg);
        const WitnessReport wi = nonkahler_witness(xi, hki.omega, points, rng, cfg);
        floor_id = std::min(floor_id, wi.min_coefficient);
        positive = positive && wi.violations.empty() && wi.min_coefficient > 0.0;

        const TwistorProduct xs =
            make_twistor_product(build_flat_torus(k), qmodel_p1(), map_square());
        const HyperkahlerBalanced hks = balanced_hk(xs, 1.0, 6, rng, cfg);
        const WitnessSample crit =
            witness_coefficient(xs, hks.omega, xs.chart.center(), cfg);
        positive = positive && crit.dh_norm == 0.0;
        crit_worst = std::max(crit_worst, -crit.coefficient);
        const WitnessReport ws = nonkahler_witness(xs, hks.omega, points, rng, cfg);
        crit_worst = std::max(crit_worst, -ws.min_coefficient);
        for (const WitnessSample& s : ws.samples)
            if (s.dh_norm > 1e-6) positive = positive && s.coefficient > 0.0;
    }
    detail = "noncritical floor " + sci(floor_id) + ", critical deficit " +
             sci(crit_worst);
    return positive && floor_id > 0.0 && crit_worst <= 1e-10;
}

// ---------------------------------------------------------------------------
// 12. Cover canonical classes on the model lattices.

bool cover_classes(std::string& detail) {
    int failures = 0;
    for (const char* name : {"p1", "sigma0", "sigma1", "sigma2"}) {
        const PicardLattice lat = lattice_by_name(name);
        const DivisorClass kx = divisor(lat, lat.k);
        const Eigen::VectorXi branch = -2 * lat.k;
        const CoverCanonical cc = adjoint_cover_canonical(kx, divisor(lat, branch));
        const bool trivial = cc.l.has_value() && cc.k_cover.has_value() &&
                             cc.k_cover->coords.isZero() &&
                             cc.l->coords == Eigen::VectorXi(-lat.k) &&
                             cy_check(kx, divisor(lat, branch));
        failures += trivial ? 0 : 1;
    }
    const PicardLattice sig1 = lattice_by_name("sigma1");
    const DivisorClass kx = divisor(sig1, sig1.k);
    Eigen::VectorXi odd_e(2), odd_f(2);
    odd_e << 3, 2;
    odd_f << 4, 1;
    const CoverCanonical c1 = adjoint_cover_canonical(kx, divisor(sig1, odd_e));
    failures += (!c1.l.has_value() && !c1.k_cover.has_value() && c1.odd_axis == 0 &&
                 c1.odd_label == "e")
                    ? 0
                    : 1;
    const CoverCanonical c2 = adjoint_cover_canonical(kx, divisor(sig1, odd_f));
    failures += (!c2.l.has_value() && c2.odd_axis == 1 && c2.odd_label == "f") ? 0 : 1;
    detail = failures == 0 ? "exact" : std::to_string(failures) + " checks failed";
    return failures == 0;
}

int failures = 0;

void run(int idx, const std::string& name,
         const std::function<bool(std::string&)>& body) {
    std::string detail;
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << std::setw(2) << idx << "  "
              << std::left << std::setw(32) << name << std::right << "  " << detail
              << "\n";
    failures += ok ? 0 : 1;
}

}  // namespace

int main() {
    run(1, "quaternionic frame structure", quaternionic_structure);
    run(2, "sphere chart map", sphere_chart_map);
    run(3, "integrability dichotomy", integrability_dichotomy);
    run(4, "vertical derivative identities", vertical_identities);
    run(5, "positive power bijection", power_bijection);
    run(6, "volume form combiner", volume_combiner);
    run(7, "hyper-Kahler balanced sum", balanced_sum);
    run(8, "submersion balanced metric", submersion_metric);
    run(9, "critical cutoff correction", cutoff_correction);
    run(10, "positivity patching constant", patching_constant);
    run(11, "non-Kahler witness", nonkahler_orientation);
    run(12, "cover canonical classes", cover_classes);
    if (failures != 0) std::cout << failures << " of 12 criteria failed\n";
    return failures == 0 ? 0 : 1;
}
