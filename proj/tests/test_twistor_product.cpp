#include <doctest.h>

#include <twistorlab/twistor_product.hpp>

#include <cmath>

using namespace twistorlab;

namespace {

constexpr unsigned kSeed = 20240817u;

TwistorProduct flat_p1_identity(int k = 1) {
    return make_twistor_product(build_flat_torus(k), qmodel_p1(), map_identity());
}

Mask m_axes_mask(const TwistorProduct& x) {
    Mask m = 0;
    for (int a = 0; a < 4 * x.k; ++a) m |= Mask{1} << a;
    return m;
}

}  // namespace

TEST_CASE("product structure squares to minus one and is standard at zeta zero") {
    const TwistorProduct x = flat_p1_identity();
    Rng rng(kSeed);
    for (int trial = 0; trial < 20; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.1);
        CHECK(structure_square_residual(x, p) < 1e-13);
    }
    VectorXd origin = x.chart.center();
    origin[4] = 0.0;
    origin[5] = 0.0;  // zeta = 0
    const MatrixXd j = structure_at(x, origin);
    CHECK((j.topLeftCorner(4, 4) - x.m.I).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((j.bottomRightCorner(2, 2) - standard_structure(1)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("coframe rows are eigenvectors of the structure and independent") {
    for (int k : {1, 2}) {
        const TwistorProduct x =
            make_twistor_product(build_flat_torus(k), qmodel_p1(), map_square());
        Rng rng(kSeed + k);
        for (int trial = 0; trial < 10; ++trial) {
            const VectorXd p = x.chart.sample(rng, 0.1);
            const MatrixXd j = structure_at(x, p);
            const auto rows = one_zero_coframe(x, p);
            REQUIRE(static_cast<int>(rows.size()) == x.r + x.n);
            MatrixXcd s(x.r + x.n, x.dim());
            for (std::size_t i = 0; i < rows.size(); ++i) {
                CHECK((act_on_one_form(j, rows[i]) - rows[i] * kI).max_abs() < 1e-12);
                for (int a = 0; a < x.dim(); ++a) s(i, a) = rows[i].coefficient(Mask{1} << a);
            }
            Eigen::JacobiSVD<MatrixXcd> svd(s);
            CHECK(svd.singularValues().minCoeff() > 0.5);
        }
    }
}

TEST_CASE("sphere coordinate fields obey the chain rule through the map") {
    const TwistorProduct x =
        make_twistor_product(build_flat_torus(1), qmodel_p1xp1(), map_projection(2, 1));
    NumericConfig cfg;
    Rng rng(kSeed);
    const auto abc = abc_fields(x);
    const auto sig = sigma_fields(x);
    for (int trial = 0; trial < 6; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.1);
        for (int axis = 0; axis < x.dim(); ++axis) {
            for (const ScalarField& f : {abc[0], abc[1], abc[2], sig[0], sig[1], sig[2]}) {
                cfg.use_analytic = true;
                const Complex an = partial(f, axis, p, cfg);
                cfg.use_analytic = false;
                const Complex fd = partial(f, axis, p, cfg);
                CHECK(std::abs(an - fd) < 1e-8);
            }
        }
    }
    cfg.use_analytic = true;
    // the sphere vector has unit length pointwise
    const VectorXd p = x.chart.sample(rng, 0.1);
    const double norm2 = std::norm(abc[0].eval(p)) + std::norm(abc[1].eval(p)) +
                         std::norm(abc[2].eval(p));
    CHECK(std::abs(norm2 - 1.0) < 1e-13);
}

TEST_CASE("omega_M rotates the fundamental forms and stays strictly positive") {
    const TwistorProduct x = flat_p1_identity();
    const FormField wm = omega_m_field(x);
    const auto base = fundamental_forms(x.m);
    Rng rng(kSeed);
    for (int trial = 0; trial < 10; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.1);
        const Eigen::Vector3d abc = twistor_sphere_map(zeta_at(x, p));
        const VectorXd mp = p.head(4);
        AlternatingForm want(4, 2);
        for (int c = 0; c < 3; ++c) want += base[c].eval(mp) * Complex{abc[c], 0.0};
        const AlternatingForm got = wm.eval(p).restrict_to(Mask{0b1111}, true);
        CHECK((got - want).max_abs() < 1e-13);
        const MatrixXd jm = structure_at(x, p).topLeftCorner(4, 4);
        const auto verdict = is_positive_pp(got, jm, true, rng);
        CHECK(verdict.positive);
    }
}

TEST_CASE("omega_M has type (1,1) and sigma_M type (2,0) over the M factor") {
    const TwistorProduct x =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_square());
    const FormField wm = omega_m_field(x);
    const FormField sm = sigma_m_field(x);
    Rng rng(kSeed);
    for (int trial = 0; trial < 10; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.1);
        const ComplexFrame frame = product_frame(structure_at(x, p).topLeftCorner(4, 4),
                                                 standard_structure(1));
        for (const auto& [type, norm] : factor_type_norms(wm.eval(p), frame))
            if (type != std::array<int, 4>{1, 1, 0, 0}) CHECK(norm < 1e-12);
        double on_type = 0.0, off_type = 0.0;
        for (const auto& [type, norm] : factor_type_norms(sm.eval(p), frame)) {
            if (type == std::array<int, 4>{2, 0, 0, 0})
                on_type += norm;
            else
                off_type += norm;
        }
        CHECK(on_type > 0.1);
        CHECK(off_type < 1e-12);
    }
}

TEST_CASE("nijenhuis tensor separates holomorphic from conjugate twists") {
    NumericConfig cfg;
    Rng rng(kSeed);
    for (const MapToP1& h : {map_identity(), map_square()}) {
        const TwistorProduct x = make_twistor_product(build_flat_torus(1), qmodel_p1(), h);
        for (int trial = 0; trial < 8; ++trial) {
            const VectorXd p = x.chart.sample(rng, 0.1);
            CHECK(nijenhuis_residual(x, p, cfg) < 1e-7);
        }
    }
    const TwistorProduct bad =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_conj());
    double worst = 0.0;
    for (int trial = 0; trial < 8; ++trial) {
        const VectorXd p = bad.chart.sample(rng, 0.1);
        worst = std::max(worst, nijenhuis_residual(bad, p, cfg));
    }
    CHECK(worst > 0.05);
}

TEST_CASE("projection to Q and the slice inclusions are holomorphic") {
    const TwistorProduct x =
        make_twistor_product(build_flat_torus(1), qmodel_p1(), map_square());
    NumericConfig cfg;
    Rng rng(kSeed);
    const VectorXd p0 = x.chart.sample(rng, 0.2);
    auto j_x = [&x](const VectorXd& p) { return structure_at(x, p); };
    // projection X -> Q
    auto proj = [](const VectorXd& p) { return p.tail(2).eval(); };
    auto j_q = [](const VectorXd&) { return standard_structure(1); };
    CHECK(check_holomorphic(proj, j_x, j_q, p0, cfg) < 1e-10);
    // inclusion Q -> X at a fixed M point
    const VectorXd m0 = p0.head(4);
    auto include_q = [&m0](const VectorXd& q) {
        VectorXd p(6);
        p << m0, q;
        return p;
    };
    CHECK(check_holomorphic(include_q, j_q, j_x, p0.tail(2), cfg) < 1e-10);
    // inclusion M -> X at a fixed Q point, against the frozen fiber structure
    const VectorXd q0 = p0.tail(2);
    auto include_m = [&q0](const VectorXd& mm) {
        VectorXd p(6);
        p << mm, q0;
        return p;
    };
    const MatrixXd jm = structure_at(x, p0).topLeftCorner(4, 4);
    auto j_m = [&jm](const VectorXd&) { return jm; };
    CHECK(check_holomorphic(include_m, j_m, j_x, p0.head(4), cfg) < 1e-10);
}

TEST_CASE("first order vertical identities hold exactly on the flat model") {
    NumericConfig cfg;
    Rng rng(kSeed);
    for (const MapToP1& h : {map_identity(), map_square()}) {
        const TwistorProduct x = make_twistor_product(build_flat_torus(1), qmodel_p1(), h);
        for (const std::string id : {"0120q", "1002q"}) {
            const LemmaReport rep = verify_lemma_identity(x, id, 8, rng, cfg);
            CHECK(rep.residual < 1e-12);
            CHECK(rep.scale > 1e-3);
        }
    }
}

TEST_CASE("second order vertical identity matches the pullback on the nose") {
    NumericConfig cfg;
    Rng rng(kSeed);
    const TwistorProduct x = flat_p1_identity();
    const LemmaReport rep = verify_lemma_identity(x, "1111q", 8, rng, cfg);
    CHECK(rep.residual < 1e-6);
    CHECK(rep.scale > 1e-2);
}

TEST_CASE("mixed structural terms vanish identically over a flat base") {
    NumericConfig cfg;
    Rng rng(kSeed);
    const TwistorProduct x = flat_p1_identity();
    for (const std::string id : {"f1q", "f2q"}) {
        const LemmaReport rep = verify_lemma_identity(x, id, 4, rng, cfg);
        CHECK(rep.residual == 0.0);
    }
}

TEST_CASE("higher rank identities hold when the fiber has complex dimension four") {
    NumericConfig cfg;
    Rng rng(kSeed);
    const TwistorProduct x = flat_p1_identity(2);
    CHECK(x.r == 4);
    const LemmaReport wedge_rep = verify_lemma_identity(x, "11n1q", 4, rng, cfg);
    CHECK(wedge_rep.residual < 1e-10);
    CHECK(wedge_rep.scale > 1e-3);
    CHECK(wedge_rep.fitted == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
    const LemmaReport full_rep = verify_lemma_identity(x, "fq", 2, rng, cfg);
    CHECK(full_rep.residual < 1e-5);
    CHECK(full_rep.scale > 1e-2);
    CHECK(full_rep.fitted == doctest::Approx(2.0).epsilon(1e-4));
    for (const std::string id : {"f3q", "f4q"}) {
        const LemmaReport rep = verify_lemma_identity(x, id, 2, rng, cfg);
        CHECK(rep.residual == 0.0);
    }
}

TEST_CASE("wedge coefficient of the rank four and six identities is exact at the pole") {
    // At zeta = 0 every ingredient of the 11n1q identity is a constant form:
    // omega = sum of the block I forms, sigma = omega_J + i omega_K per block,
    // and the pullback is i dz ^ dzbar.  The wedge arithmetic is then exact
    // and pins the scalar 2/(r-1) with no differentiation involved.
    for (int k : {2, 3}) {
        const TwistorProduct x =
            make_twistor_product(build_flat_torus(k), qmodel_p1(), map_identity());
        const int r = x.r;
        const VectorXd p = VectorXd::Zero(x.dim());
        const AlternatingForm dz =
            AlternatingForm::covector(x.dim(), 4 * k) +
            AlternatingForm::covector(x.dim(), 4 * k + 1) * kI;
        const AlternatingForm sigma = sigma_m_field(x).eval(p);
        const AlternatingForm omega = omega_m_field(x).eval(p);
        AlternatingForm omega_rm3 = AlternatingForm::scalar(x.dim(), 1.0);
        for (int j = 0; j < r - 3; ++j) omega_rm3 = wedge(omega_rm3, omega);
        const AlternatingForm lhs =
            wedge(wedge(wedge(dz, sigma.conjugate()), wedge(dz.conjugate(), sigma)),
                  omega_rm3) *
            kI;
        AlternatingForm omega_rm1 = wedge(wedge(omega_rm3, omega), omega);
        const AlternatingForm rhs =
            wedge(wedge(dz, dz.conjugate()) * kI, omega_rm1) * (2.0 / (r - 1));
        CHECK((lhs - rhs).max_abs() < 1e-12);
        CHECK(lhs.max_abs() > 1.0);
    }
}

TEST_CASE("the full exterior derivative splits cleanly for a holomorphic twist") {
    // completeness d = del + delbar and delbar^2 = 0 for the product structure
    const TwistorProduct x = flat_p1_identity();
    NumericConfig cfg;
    auto j_at = [&x](const VectorXd& p) { return structure_at(x, p); };
    const FormField wm = omega_m_field(x);
    const auto [del, delbar] = dolbeault_split_total(wm, j_at, cfg);
    const FormField d_all = exterior_d(wm, cfg);
    Rng rng(kSeed);
    for (int trial = 0; trial < 4; ++trial) {
        const VectorXd p = x.chart.sample(rng, 0.2);
        const AlternatingForm gap =
            d_all.eval(p) - del.eval(p) - delbar.eval(p);
        CHECK(gap.max_abs() < 1e-10);
    }
    const auto delbar2 = dolbeault_split_total(delbar, j_at, cfg).second;
    const VectorXd p = x.chart.sample(rng, 0.3);
    CHECK(delbar2.eval(p).max_abs() < 1e-7);
}

TEST_CASE("identity residuals contract at fourth order under step halving") {
    const TwistorProduct x = flat_p1_identity();
    Rng rng(kSeed);
    const ConvergenceReport rep = lemma_convergence(x, 2, rng, 0.04);
    CHECK(rep.coarse > rep.fine);
    CHECK(rep.fine > 0.0);
    CHECK(rep.ratio >= 8.0);
    CHECK(rep.ratio < 40.0);
}

TEST_CASE("identity catalogue grows with the fiber rank") {
    CHECK(lemma_identity_ids(2) ==
          std::vector<std::string>{"0120q", "1002q", "1111q", "f1q", "f2q"});
    CHECK(lemma_identity_ids(4) ==
          std::vector<std::string>{"0120q", "1002q", "1111q", "11n1q", "fq", "f1q", "f2q",
                                   "f3q", "f4q"});
}

TEST_CASE("unknown or out-of-rank identity ids are rejected") {
    NumericConfig cfg;
    Rng rng(kSeed);
    const TwistorProduct x = flat_p1_identity();
    CHECK_THROWS_AS(verify_lemma_identity(x, "bogus", 1, rng, cfg), ContractError);
    CHECK_THROWS_AS(verify_lemma_identity(x, "11n1q", 1, rng, cfg), ContractError);
    CHECK_THROWS_WITH_AS(verify_lemma_identity(x, "fq", 1, rng, cfg),
                         doctest::Contains("for r > 2"), ContractError);
    CHECK(m_axes_mask(x) == Mask{0b1111});
}
