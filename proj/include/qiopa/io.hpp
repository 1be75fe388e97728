#pragma once

#include "qiopa/channels.hpp"
#include "qiopa/detection.hpp"
#include "qiopa/wigner.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <string>

namespace qiopa {

using json = nlohmann::json;

// ---- StateVector <-> JSON ----------------------------------------------
// {"modes":["1h","1v","2h","2v"], "cutoff":N, "leakage":x,
//  "amplitudes":[{"ket":[a,b,c,d],"re":..,"im":..}, ...]}

inline json to_json(const StateVector& s) {
    json j;
    j["modes"] = {"1h", "1v", "2h", "2v"};
    j["cutoff"] = s.cutoff();
    j["leakage"] = s.leakage();
    json amps = json::array();
    for (const auto& [k, a] : s.amplitudes()) {
        amps.push_back({{"ket", {k.n[0], k.n[1], k.n[2], k.n[3]}}, {"re", a.real()}, {"im", a.imag()}});
    }
    j["amplitudes"] = std::move(amps);
    return j;
}

inline StateVector state_from_json(const json& j) {
    if (!j.contains("modes") || j["modes"] != json({"1h", "1v", "2h", "2v"}))
        throw Error(ErrorKind::io_error, "state document has unexpected mode ordering");
    StateVector s(j.at("cutoff").get<int>());
    for (const auto& entry : j.at("amplitudes")) {
        const auto& ket = entry.at("ket");
        s.accumulate(OccupationKet(ket.at(0).get<int>(), ket.at(1).get<int>(), ket.at(2).get<int>(),
                                   ket.at(3).get<int>()),
                     cplx(entry.at("re").get<double>(), entry.at("im").get<double>()));
    }
    s.add_leakage(j.at("leakage").get<double>());
    return s;
}

// ---- DensityMatrix -> JSON ----------------------------------------------

inline json to_json(const DensityMatrix& rho) {
    json j;
    j["modes"] = {"h", "v"};
    j["dim"] = rho.dim();
    j["leakage"] = rho.leakage();
    json basis = json::array();
    for (const auto& [nh, nv] : rho.basis()) basis.push_back({nh, nv});
    j["basis"] = std::move(basis);
    json entries = json::array();
    for (int r = 0; r < rho.dim(); ++r)
        for (int c = 0; c < rho.dim(); ++c) {
            const cplx v = rho.entries()(r, c);
            if (v == cplx(0.0)) continue;
            entries.push_back({{"row", r}, {"col", c}, {"re", v.real()}, {"im", v.imag()}});
        }
    j["entries"] = std::move(entries);
    return j;
}

// ---- FidelityReport <-> JSON --------------------------------------------

inline json to_json(const FidelityReport& rep) {
    return json{{"F", rep.F},           {"F_star", rep.F_star},
                {"R", rep.R},           {"R_star", rep.R_star},
                {"leakage", rep.leakage}, {"sector_weight", rep.sector_weight}};
}

// ---- qubit parsing --------------------------------------------------------

inline PolarizationQubit qubit_from_string(const std::string& text) {
    if (text == "H") return PolarizationQubit::h();
    if (text == "V") return PolarizationQubit::v();
    if (text == "D") return PolarizationQubit::d();
    if (text == "L") return PolarizationQubit::l();
    std::stringstream ss(text);
    std::vector<double> parts;
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            parts.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw Error(ErrorKind::invalid_arguments, "cannot parse qubit component '" + item + "'");
        }
    }
    if (parts.size() != 4)
        throw Error(ErrorKind::invalid_arguments,
                    "qubit must be a preset {H,V,D,L} or 'a_re,a_im,b_re,b_im'");
    return PolarizationQubit(cplx(parts[0], parts[1]), cplx(parts[2], parts[3]));
}

inline std::string qubit_to_string(const PolarizationQubit& q) {
    return format_double(q.alpha.real()) + "," + format_double(q.alpha.imag()) + "," +
           format_double(q.beta.real()) + "," + format_double(q.beta.imag());
}

// ---- experiment config ----------------------------------------------------

struct ZGridSpec {
    double min = -3.0;
    double max = 3.0;
    int points = 41;

    std::vector<double> values() const {
        if (points < 1) throw Error(ErrorKind::invalid_arguments, "z grid needs at least one point");
        std::vector<double> v(points);
        for (int i = 0; i < points; ++i)
            v[i] = points == 1 ? min : min + (max - min) * i / double(points - 1);
        return v;
    }
};

struct ExperimentFile {
    ExperimentConfig config;
    DetectorModel detectors;
    ZGridSpec zscan;
};

inline ExperimentFile experiment_from_json(const json& j) {
    ExperimentFile f;
    f.config.qubit = qubit_from_string(j.at("qubit").get<std::string>());
    f.config.params = AmplifierParams(j.at("gain").get<double>(), j.value("phi", 0.0));
    f.config.trials = j.at("trials").get<std::int64_t>();
    if (!j.contains("seed")) throw Error(ErrorKind::invalid_arguments, "config must carry a seed");
    f.config.seed = j.at("seed").get<std::uint64_t>();
    f.config.z_offset = j.value("z_offset", 0.0);
    f.config.z_sigma = j.value("z_sigma", 1.0);
    f.config.n2_contamination = j.value("n2_contamination", 0.0);
    f.config.cutoff = j.value("cutoff", 12);
    if (j.contains("detectors")) {
        const json& d = j["detectors"];
        if (d.contains("qe")) {
            if (d["qe"].is_number()) {
                f.detectors.qe.fill(d["qe"].get<double>());
            } else {
                const json& q = d["qe"];
                auto set = [&](const char* name, Detector det) {
                    if (q.contains(name)) f.detectors.qe[static_cast<int>(det)] = q[name].get<double>();
                };
                set("Da", Detector::Da);
                set("Db", Detector::Db);
                set("Db_star", Detector::DbStar);
                set("D2", Detector::D2);
                set("D2_star", Detector::D2Star);
                set("DT", Detector::DT);
            }
        }
        f.detectors.dark_prob = d.value("dark_prob", 0.0);
        f.detectors.beamsplitter_ratio = d.value("beamsplitter_ratio", 0.5);
    }
    if (j.contains("zscan")) {
        f.zscan.min = j["zscan"].value("min", -3.0);
        f.zscan.max = j["zscan"].value("max", 3.0);
        f.zscan.points = j["zscan"].value("points", 41);
    }
    f.config.validate();
    f.detectors.validate();
    return f;
}

inline ExperimentFile load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io_error, "cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io_error, "config parse failure in " + path + ": " + e.what());
    }
    try {
        return experiment_from_json(j);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::invalid_arguments, "config schema error in " + path + ": " + e.what());
    }
}

// ---- run manifest ----------------------------------------------------------

inline constexpr const char* tool_version = "qiopa 0.1.0";

inline json make_manifest(const std::string& command, const json& params,
                          const std::vector<std::string>& outputs) {
    return json{{"tool", "qiopa"},
                {"version", tool_version},
                {"command", command},
                {"params", params},
                {"outputs", outputs}};
}

// ---- CSV writers -----------------------------------------------------------

inline void write_csv_header(std::ostream& os, const json& manifest, const std::string& columns) {
    os << "# " << manifest.dump() << "\n" << columns << "\n";
}

inline void write_fidelity_scan_csv(std::ostream& os, const std::vector<BlochSample>& rows,
                                    const json& manifest) {
    write_csv_header(os, manifest, "qubit_alpha_re,qubit_alpha_im,qubit_beta_re,qubit_beta_im,F,F_star");
    for (const auto& r : rows) {
        os << format_double(r.qubit.alpha.real()) << ',' << format_double(r.qubit.alpha.imag()) << ','
           << format_double(r.qubit.beta.real()) << ',' << format_double(r.qubit.beta.imag()) << ',';
        if (r.empty_sector) os << "NA,NA";
        else os << format_double(r.F) << ',' << format_double(r.F_star);
        os << "\n";
    }
}

inline void write_wigner_scan_csv(std::ostream& os, const NegativityScan& scan, const json& manifest) {
    write_csv_header(os, manifest, "coord1_re,coord1_im,coord2_re,coord2_im,W");
    for (const auto& r : scan.rows) {
        os << format_double(r.coord1.real()) << ',' << format_double(r.coord1.imag()) << ','
           << format_double(r.coord2.real()) << ',' << format_double(r.coord2.imag()) << ','
           << format_double(r.w) << "\n";
    }
}

inline void write_z_scan_csv(std::ostream& os, const std::vector<ZScanRow>& rows, const json& manifest) {
    write_csv_header(os, manifest, "z,counts_signal,counts_noise,R_hat");
    for (const auto& r : rows) {
        os << format_double(r.z) << ',' << r.counts_signal << ',' << r.counts_noise << ','
           << format_double(r.r_hat) << "\n";
    }
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io_error, "cannot open output file: " + path);
    out << content;
}

} // namespace qiopa
