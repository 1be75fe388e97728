#include "qiopa/amplifier.hpp"
#include "qiopa/io.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <fstream>

using namespace qiopa;
using Catch::Approx;

TEST_CASE("state documents round-trip and carry the fixed schema") {
    const StateVector state = evolve_qubit(PolarizationQubit::l(), AmplifierParams(0.17, 0.4), 10);
    const json doc = to_json(state);
    REQUIRE(doc["modes"] == json({"1h", "1v", "2h", "2v"}));
    REQUIRE(doc["cutoff"] == 10);
    REQUIRE(doc.contains("leakage"));
    REQUIRE(doc["amplitudes"].is_array());
    REQUIRE(doc["amplitudes"][0].contains("ket"));
    REQUIRE(doc["amplitudes"][0].contains("re"));
    REQUIRE(doc["amplitudes"][0].contains("im"));

    const StateVector back = state_from_json(doc);
    REQUIRE(back.cutoff() == state.cutoff());
    REQUIRE(back.leakage() == state.leakage());
    REQUIRE(back.size() == state.size());
    for (const auto& [k, a] : state.amplitudes()) REQUIRE(back.amplitude(k) == a);
}

TEST_CASE("a wrong mode ordering is rejected on load") {
    json doc = to_json(StateVector::basis_ket(OccupationKet(0, 0, 0, 0), 4));
    doc["modes"] = {"1h", "2h", "1v", "2v"};
    REQUIRE_THROWS_AS(state_from_json(doc), Error);
}

TEST_CASE("density matrices serialize with basis and entries") {
    const StateVector state = evolve_qubit(PolarizationQubit::h(), AmplifierParams(0.11), 8);
    const json doc = to_json(partial_trace(state, SpatialMode::k1));
    REQUIRE(doc.contains("dim"));
    REQUIRE(doc["basis"].is_array());
    REQUIRE(doc["entries"].is_array());
}

TEST_CASE("fidelity reports expose the contracted fields") {
    FidelityReport rep;
    rep.F = 5.0 / 6.0;
    rep.F_star = 2.0 / 3.0;
    rep.R = 2.0;
    rep.R_star = 2.0;
    rep.sector_weight = 0.03;
    const json doc = to_json(rep);
    for (const char* key : {"F", "F_star", "R", "R_star", "leakage", "sector_weight"})
        REQUIRE(doc.contains(key));
    REQUIRE(doc["F"].get<double>() == Approx(5.0 / 6.0));
}

TEST_CASE("qubit strings") {
    REQUIRE(qubit_from_string("H").alpha == cplx(1.0, 0.0));
    REQUIRE(qubit_from_string("V").beta == cplx(1.0, 0.0));
    REQUIRE(qubit_from_string("D").alpha.real() == Approx(1.0 / std::sqrt(2.0)));
    REQUIRE(qubit_from_string("L").beta.imag() == Approx(1.0 / std::sqrt(2.0)));
    const PolarizationQubit q = qubit_from_string("0.6,0,0,0.8");
    REQUIRE(q.alpha.real() == Approx(0.6));
    REQUIRE(q.beta.imag() == Approx(0.8));
    REQUIRE_THROWS_AS(qubit_from_string("2,0,0,0"), Error);
    REQUIRE_THROWS_AS(qubit_from_string("X"), Error);
    REQUIRE_THROWS_AS(qubit_from_string("1,0,0"), Error);
}

TEST_CASE("experiment config parsing") {
    const json doc = {{"qubit", "D"},
                      {"gain", 0.11},
                      {"trials", 5000},
                      {"seed", 99},
                      {"z_sigma", 2.0},
                      {"detectors", {{"qe", 0.55}, {"dark_prob", 0.001}}},
                      {"zscan", {{"min", -2.0}, {"max", 2.0}, {"points", 5}}}};
    const ExperimentFile f = experiment_from_json(doc);
    REQUIRE(f.config.trials == 5000);
    REQUIRE(f.config.seed == 99);
    REQUIRE(f.config.params.g == Approx(0.11));
    REQUIRE(f.detectors.qe_of(Detector::Da) == Approx(0.55));
    REQUIRE(f.detectors.dark_prob == Approx(0.001));
    REQUIRE(f.zscan.values().size() == 5);
    REQUIRE(f.zscan.values().front() == Approx(-2.0));
    REQUIRE(f.zscan.values().back() == Approx(2.0));

    json missing_seed = doc;
    missing_seed.erase("seed");
    REQUIRE_THROWS_AS(experiment_from_json(missing_seed), Error);

    json per_detector = doc;
    per_detector["detectors"]["qe"] = {{"Da", 0.5}, {"DT", 0.9}};
    const ExperimentFile g = experiment_from_json(per_detector);
    REQUIRE(g.detectors.qe_of(Detector::Da) == Approx(0.5));
    REQUIRE(g.detectors.qe_of(Detector::DT) == Approx(0.9));
    REQUIRE(g.detectors.qe_of(Detector::Db) == Approx(1.0));
}

TEST_CASE("missing or malformed config files raise io errors") {
    REQUIRE_THROWS_AS(load_experiment_file("/nonexistent/config.json"), Error);
    const std::string path = "bad_config_test.json";
    std::ofstream(path) << "{ not json";
    try {
        load_experiment_file(path);
        FAIL("expected a throw");
    } catch (const Error& e) {
        REQUIRE(e.kind() == ErrorKind::io_error);
    }
    std::remove(path.c_str());
}

TEST_CASE("float formatting is locale-free with twelve significant digits") {
    REQUIRE(format_double(1.0 / 3.0) == "0.333333333333");
    REQUIRE(format_double(5.0 / 6.0) == "0.833333333333");
    REQUIRE(format_double(-16.0 / std::pow(pi, 4.0)).substr(0, 9) == "-0.164255");
    REQUIRE(format_double(1e-12) == "1e-12");
}

TEST_CASE("CSV writers embed the manifest and the contracted columns") {
    const auto rows = bloch_fidelity_scan(AmplifierParams(0.11, 0.0), 2, 5);
    std::ostringstream os;
    write_fidelity_scan_csv(os, rows, make_manifest("fidelity", json{{"seed", 5}}, {}));
    const std::string text = os.str();
    REQUIRE(text.rfind("# {", 0) == 0);
    REQUIRE(text.find("qubit_alpha_re,qubit_alpha_im,qubit_beta_re,qubit_beta_im,F,F_star") !=
            std::string::npos);
    REQUIRE(text.find("0.833333333333") != std::string::npos);

    const auto empty_rows = bloch_fidelity_scan(AmplifierParams(0.0, 0.0), 1, 5);
    std::ostringstream os2;
    write_fidelity_scan_csv(os2, empty_rows, make_manifest("fidelity", json{{"seed", 5}}, {}));
    REQUIRE(os2.str().find("NA,NA") != std::string::npos);
}
