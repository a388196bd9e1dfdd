#include <twistorlab/scenario.hpp>

#include <twistorlab/covers.hpp>
#include <twistorlab/exterior.hpp>

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <optional>
#include <set>
#include <sstream>

namespace twistorlab {
namespace {

using nlohmann::json;

const char* const kSuiteNames[] = {"integrability", "lemma",     "balanced-hk",
                                   "balanced-submersion", "cutoff", "nonkahler",
                                   "lemma2",        "covers"};

const char* const kLemmaIds[] = {"0120q", "1002q", "1111q", "11n1q", "fq",
                                 "f1q",   "f2q",   "f3q",   "f4q"};

// ------------------------------------------------------------------ schema

std::string join(const std::string& path, const std::string& key) {
    return path == "$" ? key : path + "." + key;
}

void check_keys(const json& obj, const std::string& path,
                std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) known = known || item.key() == key;
        if (!known) throw SchemaError(join(path, item.key()), "unknown field");
    }
}

const json* find(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& need(const json& obj, const std::string& path, const char* key) {
    const json* j = find(obj, key);
    if (j == nullptr) throw SchemaError(join(path, key), "required field is missing");
    return *j;
}

const json& need_object(const json& obj, const std::string& path, const char* key) {
    const json& j = need(obj, path, key);
    if (!j.is_object()) throw SchemaError(join(path, key), "expected an object");
    return j;
}

std::string get_string(const json& j, const std::string& path) {
    if (!j.is_string()) throw SchemaError(path, "expected a string");
    return j.get<std::string>();
}

long long get_int(const json& j, const std::string& path, long long lo, long long hi) {
    if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
    const long long v = j.get<long long>();
    if (v < lo || v > hi)
        throw SchemaError(path, "value " + std::to_string(v) + " outside [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

double get_number(const json& j, const std::string& path, double lo, double hi) {
    if (!j.is_number()) throw SchemaError(path, "expected a number");
    const double v = j.get<double>();
    if (!(v >= lo && v <= hi)) {
        std::ostringstream msg;
        msg << "value " << v << " outside [" << lo << ", " << hi << "]";
        throw SchemaError(path, msg.str());
    }
    return v;
}

std::uint64_t get_seed(const json& j, const std::string& path) {
    if (j.is_number_unsigned()) return j.get<std::uint64_t>();
    if (j.is_number_integer() && j.get<long long>() >= 0)
        return static_cast<std::uint64_t>(j.get<long long>());
    throw SchemaError(path, "expected a nonnegative integer");
}

bool known_suite(const std::string& name) {
    for (const char* s : kSuiteNames)
        if (name == s) return true;
    return false;
}

bool known_lemma_id(const std::string& id) {
    for (const char* s : kLemmaIds)
        if (id == s) return true;
    return false;
}

bool valid_h_token(const std::string& h) {
    if (h == "id" || h == "square" || h == "conj" || h == "z1sq-plus-z2") return true;
    if (h.rfind("proj", 0) != 0 || h.size() == 4) return false;
    return std::all_of(h.begin() + 4, h.end(), [](char c) { return c >= '0' && c <= '9'; });
}

json scenario_json(const Scenario& sc) {
    json suites = json::array();
    for (const SuiteSpec& spec : sc.suites) {
        if (spec.ids.empty())
            suites.push_back(spec.suite);
        else
            suites.push_back(json{{"suite", spec.suite}, {"ids", spec.ids}});
    }
    return json{
        {"m", {{"kind", sc.m_kind}, {"k", sc.k}}},
        {"q",
         {{"kind", sc.q_kind},
          {"twist", sc.twist},
          {"scale", sc.q_scale},
          {"n", sc.q_n},
          {"h", sc.h}}},
        {"suites", suites},
        {"samples", {{"count", sc.samples}, {"seed", sc.seed}, {"margin", sc.margin}}},
        {"numeric",
         {{"fd_step", sc.numeric.fd_step},
          {"nested_step", sc.numeric.nested_step},
          {"stencil_order", sc.numeric.stencil_order},
          {"tolerance", sc.numeric.tol}}},
        {"balanced",
         {{"t", sc.balanced.t},
          {"gamma", sc.balanced.gamma},
          {"t_prime", sc.balanced.t_prime},
          {"cutoff_t", sc.balanced.cutoff_t}}}};
}

// ------------------------------------------------------------ model builders

/// Complex dimension of the configured Q model.
int q_dim(const Scenario& sc) {
    if (sc.q_kind == "p1") return 1;
    if (sc.q_kind == "p1xp1" || sc.q_kind == "hirzebruch") return 2;
    return sc.q_n;
}

HypercomplexModel make_m(const Scenario& sc) {
    return sc.m_kind == "torus" ? build_flat_torus(sc.k) : build_hopf_chart(sc.k);
}

QModel make_q(const Scenario& sc) {
    if (sc.q_kind == "p1") return qmodel_p1();
    if (sc.q_kind == "p1xp1") return qmodel_p1xp1();
    if (sc.q_kind == "hirzebruch") return qmodel_hirzebruch(sc.twist, sc.q_scale);
    return qmodel_affine(sc.q_n);
}

MapToP1 make_h(const Scenario& sc) {
    if (sc.h == "id") return map_identity();
    if (sc.h == "square") return map_square();
    if (sc.h == "conj") return map_conj();
    if (sc.h == "z1sq-plus-z2") return map_z1sq_plus_z2();
    return map_projection(q_dim(sc), std::stoi(sc.h.substr(4)));
}

// ------------------------------------------------------------- suite runs

/// Pinned pass thresholds; the identities with nested differentiation get
/// the looser budgets.
double lemma_tolerance(const std::string& id) {
    if (id == "1111q") return 1e-5;
    if (id == "11n1q" || id == "fq") return 1e-4;
    return 1e-6;
}

using Clock = std::chrono::steady_clock;

/// Collects entries for one suite; runtimes are measured from construction.
struct SuiteRun {
    std::vector<SuiteEntry>& entries;
    Clock::time_point start = Clock::now();

    void push(std::string suite, std::string id, int samples, double residual,
              double tolerance, bool inverted = false) {
        SuiteEntry e;
        e.suite = std::move(suite);
        e.id = std::move(id);
        e.samples = samples;
        e.max_residual = residual;
        e.tolerance = tolerance;
        e.inverted = inverted;
        e.pass = inverted ? residual > tolerance : residual <= tolerance;
        e.runtime_seconds = std::chrono::duration<double>(Clock::now() - start).count();
        entries.push_back(std::move(e));
    }
};

void run_integrability(const Scenario& sc, const TwistorProduct& x, Rng& rng,
                       std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    double nij = 0.0;
    double sq = 0.0;
    for (int i = 0; i < sc.samples; ++i) {
        const VectorXd p = x.chart.sample(rng, sc.margin);
        nij = std::max(nij, nijenhuis_residual(x, p, sc.numeric));
        sq = std::max(sq, structure_square_residual(x, p));
    }
    const bool inverted = !x.h.holomorphic;
    run.push("integrability", "nijenhuis", sc.samples, nij, inverted ? 0.05 : 1e-6,
             inverted);
    run.push("integrability", "structure-square", sc.samples, sq, 1e-12);
}

void run_lemma(const Scenario& sc, const SuiteSpec& spec, const TwistorProduct& x,
               Rng& rng, std::vector<SuiteEntry>& entries) {
    for (const std::string& id : spec.ids) {
        SuiteRun run{entries};
        const LemmaReport rep = verify_lemma_identity(x, id, sc.samples, rng, sc.numeric);
        run.push("lemma", id, rep.points, rep.residual, lemma_tolerance(id));
    }
}

void run_balanced_hk(const Scenario& sc, const TwistorProduct& x, Rng& rng,
                     std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    const HyperkahlerBalanced hk = balanced_hk(x, sc.balanced.t, sc.samples, rng, sc.numeric);
    run.push("balanced-hk", "top-power-closed", hk.points, hk.d_power_residual, 1e-5);
    run.push("balanced-hk", "d-omega-floor", hk.points,
             std::max(0.0, 0.05 - hk.d_omega_floor), 0.0);
}

void run_balanced_submersion(const Scenario& sc, const TwistorProduct& x, Rng& rng,
                             std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    const SubmersionBalanced sb =
        balanced_submersion(x, sc.balanced.gamma, sc.samples, rng, sc.numeric);
    run.push("balanced-submersion", "power-identity", sb.points, sb.identity_residual,
             1e-8);
    run.push("balanced-submersion", "top-power-closed", sb.points, sb.d_power_residual,
             1e-4);
}

void run_cutoff(const Scenario& sc, const TwistorProduct& x,
                std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    const CutoffXi c =
        critical_cutoff_xi(x, 0, sc.balanced.cutoff_t, x.chart.center(), sc.numeric);
    run.push("cutoff", "expansion-match", 1, c.residual, 1e-4);
    run.push("cutoff", "e-positivity", 1, c.e_margin > 0.0 ? 0.0 : 1.0, 0.0);
}

void run_nonkahler(const Scenario& sc, const TwistorProduct& x, Rng& rng,
                   std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    const HyperkahlerBalanced hk = balanced_hk(x, sc.balanced.t, sc.samples, rng, sc.numeric);
    const WitnessReport w = nonkahler_witness(x, hk.omega, sc.samples, rng, sc.numeric);
    run.push("nonkahler", "witness-floor", static_cast<int>(w.samples.size()),
             std::max(0.0, -w.min_coefficient), 1e-10);
}

MatrixXcd random_hermitian(Rng& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(u(rng), u(rng));
    return 0.5 * (a + a.adjoint());
}

MatrixXcd random_pd(Rng& rng, int n) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = Complex(u(rng), u(rng));
    return a * a.adjoint() + 0.2 * MatrixXcd::Identity(n, n);
}

void run_lemma2(const Scenario& sc, Rng& rng, std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    std::uniform_int_distribution<int> dims(2, 5);
    double worst = 0.0;
    for (int trial = 0; trial < sc.samples; ++trial) {
        const int dim = dims(rng);
        std::uniform_int_distribution<int> eplace(1, dim - 1);
        const int e = eplace(rng);
        const int count = 1 + trial % 3;
        std::vector<MatrixXcd> hs, hp;
        for (int s = 0; s < count; ++s) {
            MatrixXcd h = random_hermitian(rng, dim);
            h.topLeftCorner(e, e) = random_pd(rng, e);
            hs.push_back(h);
            MatrixXcd p = MatrixXcd::Zero(dim, dim);
            p.bottomRightCorner(dim - e, dim - e) = random_pd(rng, dim - e);
            hp.push_back(p);
        }
        const Lemma2Result res = lemma2_search_c(hs, hp, e);
        worst = std::max(worst, res.c - 4.0 * res.bound);
        for (int s = 0; s < count; ++s)
            if (!hermitian_is_positive_definite(MatrixXcd(hs[s] + res.c * hp[s])))
                worst = std::max(worst, 1.0);
    }
    run.push("lemma2", "doubling-vs-bound", sc.samples, std::max(0.0, worst), 0.0);
}

void run_covers(std::vector<SuiteEntry>& entries) {
    SuiteRun run{entries};
    int checks = 0;
    int failures = 0;
    const auto tally = [&](bool ok) {
        ++checks;
        failures += ok ? 0 : 1;
    };
    for (const char* name : {"p1", "sigma0", "sigma1", "sigma2"}) {
        const PicardLattice lat = lattice_by_name(name);
        const DivisorClass kx = divisor(lat, lat.k);
        const Eigen::VectorXi branch = -2 * lat.k;
        const DivisorClass d = divisor(lat, branch);
        const CoverCanonical cc = adjoint_cover_canonical(kx, d);
        tally(cc.l.has_value() && cc.k_cover.has_value() &&
              cc.k_cover->coords.isZero() && cy_check(kx, d));
        tally(intersect(kx, kx) == (lat.rank == 1 ? 4 : 8));
    }
    const PicardLattice sig1 = lattice_by_name("sigma1");
    const DivisorClass kx = divisor(sig1, sig1.k);
    Eigen::VectorXi odd_e(2), odd_f(2), anti(2);
    odd_e << 3, 2;
    odd_f << 4, 1;
    anti << 2, 3;
    const CoverCanonical c1 = adjoint_cover_canonical(kx, divisor(sig1, odd_e));
    tally(!c1.l.has_value() && !c1.k_cover.has_value() && c1.odd_axis == 0 &&
          c1.odd_label == "e");
    const CoverCanonical c2 = adjoint_cover_canonical(kx, divisor(sig1, odd_f));
    tally(!c2.l.has_value() && c2.odd_axis == 1 && c2.odd_label == "f");
    tally(!cy_check(kx, divisor(sig1, anti)));
    run.push("covers", "adjunction-exact", checks, static_cast<double>(failures), 0.0);
}

}  // namespace

// --------------------------------------------------------------- documents

Scenario scenario_from_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("$", e.what());
    }
    if (!root.is_object()) throw SchemaError("$", "scenario document must be an object");
    check_keys(root, "$", {"m", "q", "suites", "samples", "numeric", "balanced"});

    Scenario sc;

    const json& m = need_object(root, "$", "m");
    check_keys(m, "m", {"kind", "k"});
    sc.m_kind = get_string(need(m, "m", "kind"), "m.kind");
    if (sc.m_kind != "torus" && sc.m_kind != "hopf")
        throw SchemaError("m.kind", "expected torus or hopf, got " + sc.m_kind);
    if (const json* j = find(m, "k")) sc.k = static_cast<int>(get_int(*j, "m.k", 1, 8));

    const json& q = need_object(root, "$", "q");
    check_keys(q, "q", {"kind", "twist", "scale", "n", "h"});
    sc.q_kind = get_string(need(q, "q", "kind"), "q.kind");
    if (sc.q_kind != "p1" && sc.q_kind != "p1xp1" && sc.q_kind != "hirzebruch" &&
        sc.q_kind != "affine")
        throw SchemaError("q.kind",
                          "expected p1, p1xp1, hirzebruch or affine, got " + sc.q_kind);
    if (const json* j = find(q, "twist"))
        sc.twist = static_cast<int>(get_int(*j, "q.twist", 0, 64));
    if (const json* j = find(q, "scale")) sc.q_scale = get_number(*j, "q.scale", 1e-6, 1e6);
    if (const json* j = find(q, "n")) sc.q_n = static_cast<int>(get_int(*j, "q.n", 1, 8));
    if (const json* j = find(q, "h")) {
        sc.h = get_string(*j, "q.h");
        if (!valid_h_token(sc.h))
            throw SchemaError(
                "q.h", "expected id, square, conj, z1sq-plus-z2 or proj<j>, got " + sc.h);
    }

    const json& suites = need(root, "$", "suites");
    if (!suites.is_array() || suites.empty())
        throw SchemaError("suites", "expected a non-empty array of suites");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < suites.size(); ++i) {
        const std::string path = "suites[" + std::to_string(i) + "]";
        const json& e = suites[i];
        SuiteSpec spec;
        if (e.is_string()) {
            spec.suite = e.get<std::string>();
        } else if (e.is_object()) {
            check_keys(e, path, {"suite", "ids"});
            spec.suite = get_string(need(e, path, "suite"), join(path, "suite"));
            if (const json* ids = find(e, "ids")) {
                if (!ids->is_array()) throw SchemaError(join(path, "ids"), "expected an array");
                std::set<std::string> seen_ids;
                for (std::size_t j = 0; j < ids->size(); ++j) {
                    const std::string id_path =
                        join(path, "ids[" + std::to_string(j) + "]");
                    const std::string id = get_string((*ids)[j], id_path);
                    if (!known_lemma_id(id))
                        throw SchemaError(id_path, "unknown identity id " + id);
                    if (!seen_ids.insert(id).second)
                        throw SchemaError(id_path, "duplicate identity id " + id);
                    spec.ids.push_back(id);
                }
            }
        } else {
            throw SchemaError(path, "expected a suite name or a {suite, ids} object");
        }
        if (!known_suite(spec.suite))
            throw SchemaError(path, "unknown suite " + spec.suite);
        if (!spec.ids.empty() && spec.suite != "lemma")
            throw SchemaError(join(path, "ids"), "ids apply to the lemma suite only");
        if (!seen.insert(spec.suite).second)
            throw SchemaError(path, "duplicate suite " + spec.suite);
        sc.suites.push_back(std::move(spec));
    }

    if (const json* s = find(root, "samples")) {
        if (!s->is_object()) throw SchemaError("samples", "expected an object");
        check_keys(*s, "samples", {"count", "seed", "margin"});
        if (const json* j = find(*s, "count"))
            sc.samples = static_cast<int>(get_int(*j, "samples.count", 1, 100000));
        if (const json* j = find(*s, "seed")) sc.seed = get_seed(*j, "samples.seed");
        if (const json* j = find(*s, "margin"))
            sc.margin = get_number(*j, "samples.margin", 0.0, 0.9);
    }

    if (const json* nm = find(root, "numeric")) {
        if (!nm->is_object()) throw SchemaError("numeric", "expected an object");
        check_keys(*nm, "numeric", {"fd_step", "nested_step", "stencil_order", "tolerance"});
        if (const json* j = find(*nm, "fd_step"))
            sc.numeric.fd_step = get_number(*j, "numeric.fd_step", 1e-12, 0.5);
        if (const json* j = find(*nm, "nested_step"))
            sc.numeric.nested_step = get_number(*j, "numeric.nested_step", 1e-12, 0.5);
        if (const json* j = find(*nm, "stencil_order")) {
            const long long v = get_int(*j, "numeric.stencil_order", 2, 6);
            if (v != 2 && v != 4 && v != 6)
                throw SchemaError("numeric.stencil_order", "expected 2, 4 or 6");
            sc.numeric.stencil_order = static_cast<int>(v);
        }
        if (const json* j = find(*nm, "tolerance"))
            sc.numeric.tol = get_number(*j, "numeric.tolerance", 1e-16, 1.0);
    }

    if (const json* b = find(root, "balanced")) {
        if (!b->is_object()) throw SchemaError("balanced", "expected an object");
        check_keys(*b, "balanced", {"t", "gamma", "t_prime", "cutoff_t"});
        if (const json* j = find(*b, "t"))
            sc.balanced.t = get_number(*j, "balanced.t", 1e-6, 1e6);
        if (const json* j = find(*b, "gamma"))
            sc.balanced.gamma = get_number(*j, "balanced.gamma", 1e-6, 1e12);
        if (const json* j = find(*b, "t_prime"))
            sc.balanced.t_prime = get_number(*j, "balanced.t_prime", 1e-6, 1e6);
        if (const json* j = find(*b, "cutoff_t"))
            sc.balanced.cutoff_t = get_number(*j, "balanced.cutoff_t", 0.0, 1e6);
    }

    return sc;
}

Scenario scenario_from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path, "cannot open scenario file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return scenario_from_json(buf.str());
}

std::string scenario_to_json(const Scenario& sc) { return scenario_json(sc).dump(2); }

void validate_scenario(Scenario& sc) {
    const int r = 2 * sc.k;
    const int qn = q_dim(sc);
    if (sc.h == "id" || sc.h == "square" || sc.h == "conj")
        require(qn == 1, "map " + sc.h + " is defined on a one-dimensional model, but " +
                             sc.q_kind + " has n = " + std::to_string(qn) +
                             "; use proj<j>");
    if (sc.h == "z1sq-plus-z2")
        require(qn == 2, "map z1sq-plus-z2 needs a two-dimensional model, but " +
                             sc.q_kind + " has n = " + std::to_string(qn));
    if (sc.h.rfind("proj", 0) == 0) {
        const int axis = std::stoi(sc.h.substr(4));
        require(axis < qn, "projection axis " + std::to_string(axis) +
                               " out of range for n = " + std::to_string(qn));
    }
    const bool holomorphic = sc.h != "conj";
    for (SuiteSpec& spec : sc.suites) {
        if (spec.suite == "lemma") {
            if (spec.ids.empty()) {
                spec.ids = lemma_identity_ids(r);
            } else {
                for (const std::string& id : spec.ids)
                    if ((id == "11n1q" || id == "fq" || id == "f3q" || id == "f4q") &&
                        r <= 2)
                        throw ContractError("lemma identity " + id +
                                            " is stated for r > 2 only; k = " +
                                            std::to_string(sc.k) + " gives r = " +
                                            std::to_string(r) + ", so it needs k >= 2");
            }
        }
        if (!holomorphic && spec.suite != "integrability")
            throw ContractError(
                "suite " + spec.suite +
                " needs a holomorphic map; conj is admitted only by the integrability "
                "suite as a negative test");
        if ((spec.suite == "balanced-hk" || spec.suite == "balanced-submersion" ||
             spec.suite == "nonkahler" || spec.suite == "cutoff") &&
            sc.m_kind != "torus")
            throw ContractError("suite " + spec.suite +
                                " needs the flat fiber model (m.kind torus), got " +
                                sc.m_kind);
    }
}

Report run_scenario(Scenario sc) {
    validate_scenario(sc);
    Report rep;
    rep.scenario = sc;
    Rng rng(sc.seed);
    std::optional<TwistorProduct> built;
    const auto product = [&]() -> const TwistorProduct& {
        if (!built) built.emplace(make_twistor_product(make_m(sc), make_q(sc), make_h(sc)));
        return *built;
    };
    for (const SuiteSpec& spec : sc.suites) {
        if (spec.suite == "integrability")
            run_integrability(sc, product(), rng, rep.entries);
        else if (spec.suite == "lemma")
            run_lemma(sc, spec, product(), rng, rep.entries);
        else if (spec.suite == "balanced-hk")
            run_balanced_hk(sc, product(), rng, rep.entries);
        else if (spec.suite == "balanced-submersion")
            run_balanced_submersion(sc, product(), rng, rep.entries);
        else if (spec.suite == "cutoff")
            run_cutoff(sc, product(), rep.entries);
        else if (spec.suite == "nonkahler")
            run_nonkahler(sc, product(), rng, rep.entries);
        else if (spec.suite == "lemma2")
            run_lemma2(sc, rng, rep.entries);
        else
            run_covers(rep.entries);
    }
    rep.pass = std::all_of(rep.entries.begin(), rep.entries.end(),
                           [](const SuiteEntry& e) { return e.pass; });
    return rep;
}

std::string report_to_json(const Report& rep) {
    json entries = json::array();
    for (const SuiteEntry& e : rep.entries)
        entries.push_back(json{{"suite", e.suite},
                               {"id", e.id},
                               {"samples", e.samples},
                               {"max_residual", e.max_residual},
                               {"tolerance", e.tolerance},
                               {"inverted", e.inverted},
                               {"pass", e.pass},
                               {"runtime_seconds", e.runtime_seconds}});
    const json doc{{"scenario", scenario_json(rep.scenario)},
                   {"suites", entries},
                   {"pass", rep.pass}};
    return doc.dump(2);
}

namespace {
std::string sci(double v, int digits) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(digits) << v;
    return s.str();
}
}  // namespace

std::string report_summary(const Report& rep) {
    std::ostringstream out;
    out << std::left << std::setw(22) << "suite" << std::setw(19) << "check" << std::right
        << std::setw(8) << "samples" << std::setw(12) << "residual" << std::setw(11)
        << "threshold"
        << "  result\n";
    int passed = 0;
    for (const SuiteEntry& e : rep.entries) {
        passed += e.pass ? 1 : 0;
        out << std::left << std::setw(22) << e.suite << std::setw(19) << e.id << std::right
            << std::setw(8) << e.samples << std::setw(12) << sci(e.max_residual, 3)
            << std::setw(11) << sci(e.tolerance, 1) << "  " << (e.pass ? "pass" : "FAIL")
            << (e.inverted ? " (negative test)" : "") << "\n";
    }
    out << "overall: " << (rep.pass ? "pass" : "FAIL") << " (" << passed << "/"
        << rep.entries.size() << " checks)\n";
    return out.str();
}

}  // namespace twistorlab
