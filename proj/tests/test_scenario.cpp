#include <doctest.h>

#include <twistorlab/scenario.hpp>

#include <json.hpp>

#include <algorithm>
#include <set>
#include <string>

using namespace twistorlab;
using nlohmann::json;

namespace {

const char* kMinimal = R"({
  "m": {"kind": "torus", "k": 1},
  "q": {"kind": "p1"},
  "suites": ["integrability"]
})";

std::string schema_path(const std::string& text) {
    try {
        scenario_from_json(text);
    } catch (const SchemaError& e) {
        return e.path;
    }
    return "";
}

json minimal_doc() { return json::parse(kMinimal); }

}  // namespace

TEST_CASE("scenario parsing fills defaults and round-trips through the echo") {
    const Scenario sc = scenario_from_json(kMinimal);
    CHECK(sc.m_kind == "torus");
    CHECK(sc.k == 1);
    CHECK(sc.q_kind == "p1");
    CHECK(sc.h == "id");
    CHECK(sc.samples == 20);
    CHECK(sc.seed == 1);
    CHECK(sc.margin == 0.1);
    CHECK(sc.numeric.fd_step == 1e-3);
    CHECK(sc.numeric.stencil_order == 4);
    CHECK(sc.balanced.t == 1.0);
    REQUIRE(sc.suites.size() == 1);
    CHECK(sc.suites[0].suite == "integrability");

    const Scenario back = scenario_from_json(scenario_to_json(sc));
    CHECK(back.m_kind == sc.m_kind);
    CHECK(back.k == sc.k);
    CHECK(back.q_kind == sc.q_kind);
    CHECK(back.twist == sc.twist);
    CHECK(back.q_scale == sc.q_scale);
    CHECK(back.q_n == sc.q_n);
    CHECK(back.h == sc.h);
    CHECK(back.samples == sc.samples);
    CHECK(back.seed == sc.seed);
    CHECK(back.margin == sc.margin);
    CHECK(back.numeric.fd_step == sc.numeric.fd_step);
    CHECK(back.numeric.nested_step == sc.numeric.nested_step);
    CHECK(back.numeric.stencil_order == sc.numeric.stencil_order);
    CHECK(back.numeric.tol == sc.numeric.tol);
    CHECK(back.balanced.gamma == sc.balanced.gamma);
    REQUIRE(back.suites.size() == 1);
    CHECK(back.suites[0].suite == "integrability");
}

TEST_CASE("schema violations name the offending field") {
    CHECK(schema_path("not json at all") == "$");
    CHECK(schema_path("[1, 2]") == "$");
    CHECK(schema_path(R"({"q": {"kind": "p1"}, "suites": ["covers"]})") == "m");
    CHECK(schema_path(R"({"m": {}, "q": {"kind": "p1"}, "suites": ["covers"]})") ==
          "m.kind");
    CHECK(schema_path(
              R"({"m": {"kind": "klein"}, "q": {"kind": "p1"}, "suites": ["covers"]})") ==
          "m.kind");
    CHECK(schema_path(
              R"({"m": {"kind": "torus", "k": 0}, "q": {"kind": "p1"}, "suites": ["covers"]})") ==
          "m.k");

    json doc = minimal_doc();
    doc["q"]["kind"] = "weighted";
    CHECK(schema_path(doc.dump()) == "q.kind");
    doc = minimal_doc();
    doc["q"]["h"] = "frobnicate";
    CHECK(schema_path(doc.dump()) == "q.h");
    doc = minimal_doc();
    doc["q"]["h"] = "proj";
    CHECK(schema_path(doc.dump()) == "q.h");

    doc = minimal_doc();
    doc["suites"] = json::array();
    CHECK(schema_path(doc.dump()) == "suites");
    doc["suites"] = json::array({42});
    CHECK(schema_path(doc.dump()) == "suites[0]");
    doc["suites"] = json::array({"bogus"});
    CHECK(schema_path(doc.dump()) == "suites[0]");
    doc["suites"] = json::array({"covers", "covers"});
    CHECK(schema_path(doc.dump()) == "suites[1]");
    doc["suites"] = json::array({json{{"suite", "lemma"}, {"ids", json::array({"0120q", "nope"})}}});
    CHECK(schema_path(doc.dump()) == "suites[0].ids[1]");
    doc["suites"] = json::array({json{{"suite", "covers"}, {"ids", json::array({"0120q"})}}});
    CHECK(schema_path(doc.dump()) == "suites[0].ids");

    doc = minimal_doc();
    doc["samples"]["count"] = 0;
    CHECK(schema_path(doc.dump()) == "samples.count");
    doc = minimal_doc();
    doc["samples"]["seed"] = -4;
    CHECK(schema_path(doc.dump()) == "samples.seed");
    doc = minimal_doc();
    doc["numeric"]["fd_stpe"] = 1e-3;
    CHECK(schema_path(doc.dump()) == "numeric.fd_stpe");
    doc = minimal_doc();
    doc["numeric"]["stencil_order"] = 3;
    CHECK(schema_path(doc.dump()) == "numeric.stencil_order");
    doc = minimal_doc();
    doc["balanced"]["t"] = -1.0;
    CHECK(schema_path(doc.dump()) == "balanced.t");
    doc = minimal_doc();
    doc["extra"] = 1;
    CHECK(schema_path(doc.dump()) == "extra");

    CHECK_THROWS_AS(scenario_from_file("/nonexistent/scenario.json"), SchemaError);
}

TEST_CASE("prerequisites are enforced before any computation") {
    json doc = minimal_doc();
    doc["suites"] = json::array({json{{"suite", "lemma"}, {"ids", json::array({"fq"})}}});
    Scenario sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("r > 2"), ContractError);

    doc["suites"] = json::array({json{{"suite", "lemma"}, {"ids", json::array({"11n1q"})}}});
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("r > 2"), ContractError);

    doc = minimal_doc();
    doc["q"]["h"] = "proj1";
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("out of range"),
                         ContractError);

    doc = minimal_doc();
    doc["q"]["h"] = "z1sq-plus-z2";
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("two-dimensional"),
                         ContractError);

    doc = minimal_doc();
    doc["q"]["kind"] = "p1xp1";
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("proj"), ContractError);

    doc = minimal_doc();
    doc["q"]["h"] = "conj";
    doc["suites"] = json::array({"lemma"});
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("integrability"),
                         ContractError);

    doc = minimal_doc();
    doc["m"]["kind"] = "hopf";
    doc["suites"] = json::array({"balanced-hk"});
    sc = scenario_from_json(doc.dump());
    CHECK_THROWS_WITH_AS(validate_scenario(sc), doctest::Contains("flat"), ContractError);

    // default id list at r = 2 stays within the admissible identities
    doc = minimal_doc();
    doc["suites"] = json::array({"lemma"});
    sc = scenario_from_json(doc.dump());
    validate_scenario(sc);
    REQUIRE(sc.suites.size() == 1);
    CHECK(!sc.suites[0].ids.empty());
    for (const std::string& id : sc.suites[0].ids) {
        CHECK(id != "11n1q");
        CHECK(id != "fq");
    }
}

TEST_CASE("a flat scenario runs every requested suite and passes") {
    json doc = minimal_doc();
    doc["suites"] = json::array(
        {"integrability",
         json{{"suite", "lemma"}, {"ids", json::array({"0120q", "1002q", "1111q"})}},
         "balanced-hk"});
    doc["samples"] = json{{"count", 5}, {"seed", 11}};
    const Report rep = run_scenario(scenario_from_json(doc.dump()));

    CHECK(rep.pass);
    REQUIRE(rep.entries.size() == 7);
    std::set<std::string> keys;
    for (const SuiteEntry& e : rep.entries) {
        CHECK(e.pass);
        CHECK(e.samples > 0);
        CHECK(e.runtime_seconds >= 0.0);
        CHECK(keys.insert(e.suite + "/" + e.id).second);
    }
    CHECK(keys.count("integrability/nijenhuis") == 1);
    CHECK(keys.count("integrability/structure-square") == 1);
    CHECK(keys.count("lemma/0120q") == 1);
    CHECK(keys.count("lemma/1111q") == 1);
    CHECK(keys.count("balanced-hk/top-power-closed") == 1);
    CHECK(keys.count("balanced-hk/d-omega-floor") == 1);

    // the echo resolves defaults and carries the suite list verbatim
    CHECK(rep.scenario.samples == 5);
    CHECK(rep.scenario.seed == 11);
    const std::string summary = report_summary(rep);
    CHECK(summary.find("overall: pass (7/7 checks)") != std::string::npos);
}

TEST_CASE("the non-holomorphic map inverts the integrability criterion") {
    json doc{{"m", {{"kind", "torus"}, {"k", 1}}},
             {"q", {{"kind", "affine"}, {"n", 1}, {"h", "conj"}}},
             {"suites", json::array({"integrability"})},
             {"samples", {{"count", 6}, {"seed", 3}}}};
    const Report rep = run_scenario(scenario_from_json(doc.dump()));
    CHECK(rep.pass);
    REQUIRE(rep.entries.size() == 2);
    const SuiteEntry& nij = rep.entries[0];
    CHECK(nij.id == "nijenhuis");
    CHECK(nij.inverted);
    CHECK(nij.max_residual > 0.05);
    CHECK(nij.pass);
    const SuiteEntry& sq = rep.entries[1];
    CHECK(sq.id == "structure-square");
    CHECK_FALSE(sq.inverted);
    CHECK(sq.max_residual < 1e-12);
    const std::string summary = report_summary(rep);
    CHECK(summary.find("negative test") != std::string::npos);
}

TEST_CASE("reports replay bit-for-bit from the embedded scenario") {
    json doc = minimal_doc();
    doc["suites"] = json::array(
        {"integrability", json{{"suite", "lemma"}, {"ids", json::array({"0120q"})}}});
    doc["samples"] = json{{"count", 4}, {"seed", 5}};
    const Report first = run_scenario(scenario_from_json(doc.dump()));

    const json report = json::parse(report_to_json(first));
    REQUIRE(report.contains("scenario"));
    REQUIRE(report.contains("suites"));
    CHECK(report["pass"].get<bool>() == first.pass);

    const Report second = run_scenario(scenario_from_json(report["scenario"].dump()));
    REQUIRE(second.entries.size() == first.entries.size());
    for (std::size_t i = 0; i < first.entries.size(); ++i) {
        CHECK(second.entries[i].suite == first.entries[i].suite);
        CHECK(second.entries[i].id == first.entries[i].id);
        CHECK(second.entries[i].max_residual == first.entries[i].max_residual);
        CHECK(second.entries[i].samples == first.entries[i].samples);
    }
}

TEST_CASE("matrix and lattice suites run without a product geometry") {
    json doc = minimal_doc();
    doc["suites"] = json::array({"lemma2", "covers"});
    doc["samples"] = json{{"count", 25}, {"seed", 9}};
    const Report rep = run_scenario(scenario_from_json(doc.dump()));
    CHECK(rep.pass);
    REQUIRE(rep.entries.size() == 2);
    CHECK(rep.entries[0].suite == "lemma2");
    CHECK(rep.entries[0].max_residual == 0.0);
    CHECK(rep.entries[1].suite == "covers");
    CHECK(rep.entries[1].max_residual == 0.0);
    CHECK(rep.entries[1].samples == 11);
}
