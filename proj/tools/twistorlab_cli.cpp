#include <twistorlab/covers.hpp>
#include <twistorlab/scenario.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <vector>

namespace {

using nlohmann::json;
using namespace twistorlab;

// Exit codes: 0 all checks pass, 1 numeric failure, 2 schema violation,
// 3 suite precondition failure.

struct Common {
    std::uint64_t seed = 1;
    int points = 0;
    double fd_step = 1e-3;
    std::string report_path;
    bool quiet = false;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* points_opt = nullptr;
    CLI::Option* step_opt = nullptr;
};

void add_common(CLI::App* sub, Common& c) {
    sub->set_help_flag("--help", "print this help message and exit");
    c.seed_opt = sub->add_option("--seed", c.seed, "sample generator seed");
    c.points_opt = sub->add_option("--points", c.points, "sample count per suite");
    c.step_opt = sub->add_option("--fd-step", c.fd_step, "finite difference step");
    sub->add_option("--report", c.report_path, "write the JSON report to this path");
    sub->add_flag("--quiet", c.quiet, "suppress the summary table");
}

int guarded(const std::function<int()>& body) {
    try {
        return body();
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 2;
    } catch (const ContractError& e) {
        std::cerr << "precondition failed: " << e.what() << "\n";
        return 3;
    } catch (const ChartError& e) {
        std::cerr << "chart error: " << e.what() << "\n";
        return 1;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int execute(Scenario sc, const Common& c) {
    if (c.seed_opt->count() > 0) sc.seed = c.seed;
    if (c.points_opt->count() > 0) sc.samples = c.points;
    if (c.step_opt->count() > 0) sc.numeric.fd_step = c.fd_step;
    const Report rep = run_scenario(std::move(sc));
    if (!c.report_path.empty()) {
        std::ofstream out(c.report_path);
        if (!out) throw std::runtime_error("cannot write report to " + c.report_path);
        out << report_to_json(rep) << "\n";
    }
    if (!c.quiet) std::cout << report_summary(rep);
    return rep.pass ? 0 : 1;
}

/// Scenario fragment shared by the flag-built subcommands; suites and the
/// balanced block are appended by each caller.
json geometry_doc(const std::string& model, const std::string& h, int k, int twist,
                  double scale, int n, int points) {
    return json{{"m", {{"kind", "torus"}, {"k", k}}},
                {"q",
                 {{"kind", model},
                  {"twist", twist},
                  {"scale", scale},
                  {"n", n},
                  {"h", h}}},
                {"samples", {{"count", points}}}};
}

std::string vec_str(const Eigen::VectorXi& v) {
    std::string out = "(";
    for (int i = 0; i < v.size(); ++i) out += (i ? " " : "") + std::to_string(v[i]);
    return out + ")";
}

int run_cover(const std::string& lattice_name, const std::vector<int>& k_coords,
              const std::vector<int>& d_coords, const Common& c) {
    const PicardLattice lat = lattice_by_name(lattice_name);
    Eigen::VectorXi kx_v = lat.k;
    if (!k_coords.empty())
        kx_v = Eigen::Map<const Eigen::VectorXi>(k_coords.data(),
                                                 static_cast<int>(k_coords.size()));
    const DivisorClass kx = divisor(lat, kx_v);
    Eigen::VectorXi d_v = -2 * kx_v;
    if (!d_coords.empty())
        d_v = Eigen::Map<const Eigen::VectorXi>(d_coords.data(),
                                                static_cast<int>(d_coords.size()));
    const DivisorClass d = divisor(lat, d_v);
    const CoverCanonical cc = adjoint_cover_canonical(kx, d);
    const bool cy = cy_check(kx, d);

    if (!c.report_path.empty()) {
        json doc{{"lattice", lat.name},
                 {"labels", lat.labels},
                 {"K", std::vector<int>(kx_v.data(), kx_v.data() + kx_v.size())},
                 {"D", std::vector<int>(d_v.data(), d_v.data() + d_v.size())},
                 {"calabi_yau", cy}};
        if (cc.l.has_value()) {
            doc["L"] = std::vector<int>(cc.l->coords.data(),
                                        cc.l->coords.data() + cc.l->coords.size());
            doc["K_cover"] =
                std::vector<int>(cc.k_cover->coords.data(),
                                 cc.k_cover->coords.data() + cc.k_cover->coords.size());
        } else {
            doc["odd_axis"] = cc.odd_axis;
            doc["odd_label"] = cc.odd_label;
        }
        std::ofstream out(c.report_path);
        if (!out) throw std::runtime_error("cannot write report to " + c.report_path);
        out << doc.dump(2) << "\n";
    }

    if (!c.quiet) {
        std::string labels;
        for (const std::string& l : lat.labels) labels += (labels.empty() ? "" : " ") + l;
        std::cout << "lattice " << lat.name << " [" << labels << "]: K = " << vec_str(kx_v)
                  << ", D = " << vec_str(d_v) << "\n";
        if (cc.l.has_value()) {
            std::cout << "L = D/2 = " << vec_str(cc.l->coords) << "\n"
                      << "K_cover = K + L = " << vec_str(cc.k_cover->coords)
                      << (cc.k_cover->coords.isZero() ? " (trivial)" : "") << "\n"
                      << "Calabi-Yau branch class (D = -2K): " << (cy ? "yes" : "no")
                      << "\n";
        } else {
            std::cout << "no lattice square root: coordinate " << cc.odd_axis << " ("
                      << cc.odd_label << ") of D is odd; the double cover misses L\n";
        }
    }
    return cc.l.has_value() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification suites for twistor-type product geometries"};
    app.set_help_flag("--help", "print this help message and exit");
    app.require_subcommand(1);
    int exit_code = 0;

    // run <scenario.json>
    auto* run_cmd = app.add_subcommand("run", "execute a scenario document");
    Common run_c;
    add_common(run_cmd, run_c);
    std::string scenario_path;
    run_cmd->add_option("scenario", scenario_path, "scenario document path")->required();
    run_cmd->callback([&]() {
        exit_code =
            guarded([&]() { return execute(scenario_from_file(scenario_path), run_c); });
    });

    // verify-integrability
    auto* integ_cmd =
        app.add_subcommand("verify-integrability", "Nijenhuis sweep for the structure");
    Common integ_c;
    add_common(integ_cmd, integ_c);
    std::string integ_model = "p1", integ_h = "id";
    int integ_k = 1, integ_twist = 1, integ_n = 1;
    double integ_scale = 1.0;
    integ_cmd->add_option("--model", integ_model, "Q model kind");
    integ_cmd->add_option("--h", integ_h, "map to the sphere chart");
    integ_cmd->add_option("--k", integ_k, "quaternionic fiber rank");
    integ_cmd->add_option("--twist", integ_twist, "hirzebruch ruling degree");
    integ_cmd->add_option("--scale", integ_scale, "hirzebruch potential weight");
    integ_cmd->add_option("--n", integ_n, "affine model dimension");
    integ_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc = geometry_doc(integ_model, integ_h, integ_k, integ_twist,
                                    integ_scale, integ_n, 20);
            doc["suites"] = json::array({"integrability"});
            return execute(scenario_from_json(doc.dump()), integ_c);
        });
    });

    // verify-lemma
    auto* lemma_cmd =
        app.add_subcommand("verify-lemma", "vertical derivative identity checks");
    Common lemma_c;
    add_common(lemma_cmd, lemma_c);
    std::string lemma_model = "p1", lemma_h = "id";
    int lemma_k = 2, lemma_twist = 1, lemma_n = 1;
    double lemma_scale = 1.0;
    std::vector<std::string> lemma_ids;
    lemma_cmd->add_option("--model", lemma_model, "Q model kind");
    lemma_cmd->add_option("--h", lemma_h, "map to the sphere chart");
    lemma_cmd->add_option("--k", lemma_k, "quaternionic fiber rank");
    lemma_cmd->add_option("--twist", lemma_twist, "hirzebruch ruling degree");
    lemma_cmd->add_option("--scale", lemma_scale, "hirzebruch potential weight");
    lemma_cmd->add_option("--n", lemma_n, "affine model dimension");
    lemma_cmd->add_option("--ids", lemma_ids, "identity ids (default: all for this rank)")
        ->delimiter(',');
    lemma_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc = geometry_doc(lemma_model, lemma_h, lemma_k, lemma_twist,
                                    lemma_scale, lemma_n, 6);
            doc["suites"] = lemma_ids.empty()
                                ? json::array({"lemma"})
                                : json::array({json{{"suite", "lemma"}, {"ids", lemma_ids}}});
            return execute(scenario_from_json(doc.dump()), lemma_c);
        });
    });

    // build-balanced
    auto* hk_cmd = app.add_subcommand(
        "build-balanced", "hyper-Kahler sum metric with closed top power");
    Common hk_c;
    add_common(hk_cmd, hk_c);
    std::string hk_model = "p1", hk_h = "id";
    int hk_k = 1, hk_twist = 1, hk_n = 1;
    double hk_scale = 1.0, hk_t = 1.0;
    hk_cmd->add_option("--model", hk_model, "Q model kind");
    hk_cmd->add_option("--h", hk_h, "map to the sphere chart");
    hk_cmd->add_option("--k", hk_k, "quaternionic fiber rank");
    hk_cmd->add_option("--twist", hk_twist, "hirzebruch ruling degree");
    hk_cmd->add_option("--scale", hk_scale, "hirzebruch potential weight");
    hk_cmd->add_option("--n", hk_n, "affine model dimension");
    hk_cmd->add_option("--t", hk_t, "base form weight");
    hk_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc = geometry_doc(hk_model, hk_h, hk_k, hk_twist, hk_scale, hk_n, 12);
            doc["suites"] = json::array({"balanced-hk"});
            doc["balanced"] = json{{"t", hk_t}};
            return execute(scenario_from_json(doc.dump()), hk_c);
        });
    });

    // check-balanced
    auto* sub_cmd = app.add_subcommand(
        "check-balanced", "submersion balanced metric and its defining identity");
    Common sub_c;
    add_common(sub_cmd, sub_c);
    std::string sub_model = "p1", sub_h = "id";
    int sub_k = 2, sub_twist = 1, sub_n = 1;
    double sub_scale = 1.0, sub_gamma = 10.0;
    sub_cmd->add_option("--model", sub_model, "Q model kind");
    sub_cmd->add_option("--h", sub_h, "map to the sphere chart");
    sub_cmd->add_option("--k", sub_k, "quaternionic fiber rank");
    sub_cmd->add_option("--twist", sub_twist, "hirzebruch ruling degree");
    sub_cmd->add_option("--scale", sub_scale, "hirzebruch potential weight");
    sub_cmd->add_option("--n", sub_n, "affine model dimension");
    sub_cmd->add_option("--gamma", sub_gamma, "leading volume coefficient");
    sub_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc = geometry_doc(sub_model, sub_h, sub_k, sub_twist, sub_scale, sub_n, 6);
            doc["suites"] = json::array({"balanced-submersion"});
            doc["balanced"] = json{{"gamma", sub_gamma}};
            return execute(scenario_from_json(doc.dump()), sub_c);
        });
    });

    // check-nonkahler
    auto* nk_cmd = app.add_subcommand(
        "check-nonkahler", "orientation witness against any Kahler structure");
    Common nk_c;
    add_common(nk_cmd, nk_c);
    std::string nk_model = "p1", nk_h = "id";
    int nk_k = 1, nk_twist = 1, nk_n = 1;
    double nk_scale = 1.0, nk_t = 1.0;
    nk_cmd->add_option("--model", nk_model, "Q model kind");
    nk_cmd->add_option("--h", nk_h, "map to the sphere chart");
    nk_cmd->add_option("--k", nk_k, "quaternionic fiber rank");
    nk_cmd->add_option("--twist", nk_twist, "hirzebruch ruling degree");
    nk_cmd->add_option("--scale", nk_scale, "hirzebruch potential weight");
    nk_cmd->add_option("--n", nk_n, "affine model dimension");
    nk_cmd->add_option("--t", nk_t, "base form weight of the reference metric");
    nk_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc = geometry_doc(nk_model, nk_h, nk_k, nk_twist, nk_scale, nk_n, 12);
            doc["suites"] = json::array({"nonkahler"});
            doc["balanced"] = json{{"t", nk_t}};
            return execute(scenario_from_json(doc.dump()), nk_c);
        });
    });

    // search-c
    auto* c_cmd = app.add_subcommand(
        "search-c", "doubling search for the positivity patching constant");
    Common c_c;
    add_common(c_cmd, c_c);
    c_cmd->callback([&]() {
        exit_code = guarded([&]() {
            json doc{{"m", {{"kind", "torus"}, {"k", 1}}},
                     {"q", {{"kind", "p1"}, {"h", "id"}}},
                     {"suites", json::array({"lemma2"})},
                     {"samples", {{"count", 100}}}};
            return execute(scenario_from_json(doc.dump()), c_c);
        });
    });

    // cover-canonical
    auto* cover_cmd = app.add_subcommand(
        "cover-canonical", "double cover canonical class on a Picard lattice");
    Common cover_c;
    add_common(cover_cmd, cover_c);
    std::string lattice_name = "sigma1";
    std::vector<int> cover_k, cover_d;
    cover_cmd->add_option("--lattice", lattice_name, "p1 or sigmaN");
    cover_cmd->add_option("--K", cover_k, "canonical class coordinates (default: lattice K)")
        ->delimiter(',');
    cover_cmd
        ->add_option("--D", cover_d, "branch divisor coordinates (default: -2K)")
        ->delimiter(',');
    cover_cmd->callback([&]() {
        exit_code =
            guarded([&]() { return run_cover(lattice_name, cover_k, cover_d, cover_c); });
    });

    CLI11_PARSE(app, argc, argv);
    return exit_code;
}
