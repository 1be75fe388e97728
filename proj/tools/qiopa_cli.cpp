// Command-line front end: amplifier evolution, fidelity reports and scans,
// Wigner negativity scans, and the stochastic coincidence experiment.

#include "qiopa/io.hpp"
#include "qiopa/universality.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using namespace qiopa;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::resource_limit: return 4;
        default: return 3;
    }
}

// flag-interpretation failures are usage errors (exit 2), unlike domain errors
PolarizationQubit parse_qubit_arg(const std::string& text) {
    try {
        return qubit_from_string(text);
    } catch (const Error& e) {
        throw CLI::ValidationError("--qubit", e.what());
    }
}

cplx parse_direction(const std::string& text) {
    std::stringstream ss(text);
    std::string re, im;
    double dre = 0.0, dim = 0.0;
    try {
        if (!std::getline(ss, re, ',') || !std::getline(ss, im)) throw std::invalid_argument("format");
        dre = std::stod(re);
        dim = std::stod(im);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--dir", "direction must be 're,im'");
    }
    cplx d(dre, dim);
    if (std::abs(d) < 1e-12) throw CLI::ValidationError("--dir", "direction must be nonzero");
    return d / std::abs(d);
}

int coord_index(const std::string& name) {
    if (name == "a1") return 0;
    if (name == "a2") return 1;
    if (name == "b1") return 2;
    if (name == "b2") return 3;
    throw CLI::ValidationError("--coord", "coordinate must be one of a1, a2, b1, b2");
}

struct EvolveArgs {
    double gain = 0.0;
    double phi = 0.0;
    std::string qubit = "H";
    int cutoff = 12;
    std::string out = "evolve_state.json";
};

int run_evolve(const EvolveArgs& a) {
    const PolarizationQubit q = parse_qubit_arg(a.qubit);
    const StateVector state = evolve_qubit(q, AmplifierParams(a.gain, a.phi), a.cutoff);
    json doc = to_json(state);
    doc["manifest"] = make_manifest("evolve",
                                    json{{"gain", a.gain},
                                         {"phi", a.phi},
                                         {"qubit", a.qubit},
                                         {"cutoff", a.cutoff}},
                                    {a.out});
    write_text_file(a.out, doc.dump(2) + "\n");
    std::cout << "norm2 = " << format_double(state.norm2())
              << "  leakage = " << format_double(state.leakage()) << "\n"
              << "wrote " << a.out << "\n";
    return 0;
}

struct FidelityArgs {
    double gain = 0.0;
    double phi = 0.0;
    std::string qubit;
    int scan = -1;
    std::optional<std::uint64_t> seed;
    bool full_series = false;
    int cutoff = 12;
    std::string out;
};

int run_fidelity(const FidelityArgs& a) {
    const AmplifierParams params(a.gain, a.phi);
    if (a.scan >= 0) {
        if (!a.seed) throw CLI::RequiredError("--seed (required with --scan)");
        const auto rows = bloch_fidelity_scan(params, a.scan, *a.seed);
        const json manifest = make_manifest("fidelity",
                                            json{{"gain", a.gain},
                                                 {"phi", a.phi},
                                                 {"scan", a.scan},
                                                 {"seed", *a.seed}},
                                            a.out.empty() ? std::vector<std::string>{}
                                                          : std::vector<std::string>{a.out});
        std::ostringstream csv;
        write_fidelity_scan_csv(csv, rows, manifest);
        if (a.out.empty()) std::cout << csv.str();
        else {
            write_text_file(a.out, csv.str());
            std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
        }
        return 0;
    }
    const PolarizationQubit q = parse_qubit_arg(a.qubit);
    const StateVector state = a.full_series ? evolve_qubit(q, params, a.cutoff)
                                            : first_order_output(q, params);
    FidelityReport rep = postselected_cloning_fidelity(state, q);
    json doc = to_json(rep);
    doc["manifest"] = make_manifest("fidelity",
                                    json{{"gain", a.gain},
                                         {"phi", a.phi},
                                         {"qubit", a.qubit},
                                         {"full", a.full_series}},
                                    a.out.empty() ? std::vector<std::string>{}
                                                  : std::vector<std::string>{a.out});
    std::cout << "F = " << format_double(rep.F) << "  F* = " << format_double(rep.F_star)
              << "  R = " << format_double(rep.R) << "  R* = " << format_double(rep.R_star) << "\n";
    if (!a.out.empty()) {
        write_text_file(a.out, doc.dump(2) + "\n");
        std::cout << "wrote " << a.out << "\n";
    }
    return 0;
}

struct WignerArgs {
    double gain = 0.0;
    double phi = 0.0;
    std::string coord1 = "a1";
    std::string coord2 = "b1";
    std::string dir1 = "1,0";
    std::string dir2 = "1,0";
    double min = -3.0;
    double max = 3.0;
    double step = 0.25;
    std::string out = "wigner_scan.csv";
};

int run_wigner(const WignerArgs& a) {
    PhasePlane plane;
    plane.coord1 = coord_index(a.coord1);
    plane.coord2 = coord_index(a.coord2);
    if (plane.coord1 == plane.coord2)
        throw CLI::ValidationError("--coord2", "the two plane coordinates must differ");
    plane.dir1 = parse_direction(a.dir1);
    plane.dir2 = parse_direction(a.dir2);
    GridSpec grid{a.min, a.max, a.step, a.min, a.max, a.step};
    const NegativityScan scan = negativity_scan(plane, grid, AmplifierParams(a.gain, a.phi));
    const json manifest = make_manifest("wigner",
                                        json{{"gain", a.gain},
                                             {"phi", a.phi},
                                             {"coord1", a.coord1},
                                             {"coord2", a.coord2},
                                             {"dir1", a.dir1},
                                             {"dir2", a.dir2},
                                             {"min", a.min},
                                             {"max", a.max},
                                             {"step", a.step}},
                                        {a.out});
    std::ostringstream csv;
    write_wigner_scan_csv(csv, scan, manifest);
    write_text_file(a.out, csv.str());
    std::cout << "min_W = " << format_double(scan.min_w)
              << "  negative_fraction = " << format_double(scan.negative_fraction) << "\n"
              << "wrote " << scan.rows.size() << " rows to " << a.out << "\n";
    return 0;
}

struct ExperimentArgs {
    std::string config_path;
    std::string mode = "clone";
    std::string out;
};

int run_experiment(const ExperimentArgs& a) {
    const ExperimentFile file = load_experiment_file(a.config_path);
    const json params_manifest = json{{"config", a.config_path}, {"mode", a.mode},
                                      {"seed", file.config.seed}};
    if (a.mode == "zscan") {
        const auto rows = z_scan(file.config, file.detectors, file.zscan.values());
        const json manifest =
            make_manifest("experiment", params_manifest,
                          a.out.empty() ? std::vector<std::string>{} : std::vector<std::string>{a.out});
        std::ostringstream csv;
        write_z_scan_csv(csv, rows, manifest);
        if (a.out.empty()) std::cout << csv.str();
        else {
            write_text_file(a.out, csv.str());
            std::cout << "wrote " << rows.size() << " rows to " << a.out << "\n";
        }
        return 0;
    }
    if (a.mode != "clone" && a.mode != "unot")
        throw CLI::ValidationError("--mode", "mode must be clone, unot, or zscan");
    const ExperimentMode mode = a.mode == "clone" ? ExperimentMode::clone : ExperimentMode::unot;
    const ExperimentResult res = simulate_experiment(file.config, file.detectors, mode);
    json doc;
    doc["mode"] = a.mode;
    doc["trials"] = res.counts.trials;
    doc["counts"] = {{"signal", res.counts.signal}, {"noise", res.counts.noise}};
    doc["R_hat"] = res.r_hat;
    doc["R_se"] = res.r_se;
    doc["F_hat"] = res.f_hat;
    doc["F_se"] = res.f_se;
    doc["report"] = to_json(res.report);
    doc["manifest"] = make_manifest("experiment", params_manifest,
                                    a.out.empty() ? std::vector<std::string>{}
                                                  : std::vector<std::string>{a.out});
    std::cout << (mode == ExperimentMode::clone ? "R_hat = " : "R*_hat = ") << format_double(res.r_hat)
              << " +/- " << format_double(res.r_se)
              << (mode == ExperimentMode::clone ? "  F_hat = " : "  F*_hat = ")
              << format_double(res.f_hat) << " +/- " << format_double(res.f_se) << "\n"
              << "counts: signal " << res.counts.signal << ", noise " << res.counts.noise << "\n";
    if (!a.out.empty()) {
        write_text_file(a.out, doc.dump(2) + "\n");
        std::cout << "wrote " << a.out << "\n";
    }
    return 0;
}

struct NmArgs {
    int n = 1;
    int m = 2;
    std::string out = "nm_state.json";
};

int run_nm_state(const NmArgs& a) {
    const StateVector state = nm_clone_state(a.n, a.m);
    const Rational f = optimal_cloning_fidelity(a.n, a.m);
    json doc = to_json(state);
    doc["manifest"] = make_manifest("nm-state", json{{"n", a.n}, {"m", a.m}}, {a.out});
    write_text_file(a.out, doc.dump(2) + "\n");
    std::cout << "F = " << f.num << "/" << f.den << " = " << format_double(f.value()) << "\n"
              << "wrote " << a.out << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"QIOPA simulator: optimal cloning, U-NOT, Wigner scans, coincidence experiments"};
    app.require_subcommand(1);

    EvolveArgs evolve_args;
    auto* evolve = app.add_subcommand("evolve", "amplify a polarization qubit");
    evolve->add_option("--gain", evolve_args.gain, "amplifier gain g")->required();
    evolve->add_option("--phi", evolve_args.phi, "intrinsic phase Phi (radians)");
    evolve->add_option("--qubit", evolve_args.qubit, "H|V|D|L or a_re,a_im,b_re,b_im")->required();
    evolve->add_option("--cutoff", evolve_args.cutoff, "total photon-number cutoff");
    evolve->add_option("--out", evolve_args.out, "output state JSON path");

    FidelityArgs fid_args;
    auto* fid = app.add_subcommand("fidelity", "postselected cloning / U-NOT fidelities");
    fid->add_option("--gain", fid_args.gain, "amplifier gain g")->required();
    fid->add_option("--phi", fid_args.phi, "intrinsic phase Phi (radians)");
    auto* fq = fid->add_option("--qubit", fid_args.qubit, "injected qubit");
    auto* fs = fid->add_option("--scan", fid_args.scan, "Bloch scan sample count");
    fid->add_option("--seed", fid_args.seed, "scan sampler seed");
    fid->add_flag("--full", fid_args.full_series, "use the full series state instead of the first-order form");
    fid->add_option("--cutoff", fid_args.cutoff, "cutoff for --full");
    fid->add_option("--out", fid_args.out, "output path (JSON report or scan CSV)");
    fq->excludes(fs);

    WignerArgs wig_args;
    auto* wig = app.add_subcommand("wigner", "Wigner-function negativity scan over a 2-plane");
    wig->add_option("--gain", wig_args.gain, "amplifier gain g")->required();
    wig->add_option("--phi", wig_args.phi, "intrinsic phase Phi (radians)");
    wig->add_option("--coord1", wig_args.coord1, "first active coordinate: a1|a2|b1|b2");
    wig->add_option("--coord2", wig_args.coord2, "second active coordinate");
    wig->add_option("--dir1", wig_args.dir1, "complex direction 're,im' for axis 1");
    wig->add_option("--dir2", wig_args.dir2, "complex direction 're,im' for axis 2");
    wig->add_option("--min", wig_args.min, "axis minimum");
    wig->add_option("--max", wig_args.max, "axis maximum");
    wig->add_option("--step", wig_args.step, "axis step");
    wig->add_option("--out", wig_args.out, "output CSV path");

    ExperimentArgs exp_args;
    auto* exp = app.add_subcommand("experiment", "stochastic coincidence experiment");
    exp->add_option("--config", exp_args.config_path, "experiment config JSON")->required();
    exp->add_option("--mode", exp_args.mode, "clone | unot | zscan");
    exp->add_option("--out", exp_args.out, "output path");

    NmArgs nm_args;
    auto* nm = app.add_subcommand("nm-state", "optimum N -> M cloning state");
    nm->add_option("--n", nm_args.n, "input copies N")->required();
    nm->add_option("--m", nm_args.m, "output copies M")->required();
    nm->add_option("--out", nm_args.out, "output state JSON path");

    try {
        app.parse(argc, argv);
        if (evolve->parsed()) return run_evolve(evolve_args);
        if (fid->parsed()) {
            if (fid_args.scan < 0 && fid_args.qubit.empty())
                throw CLI::RequiredError("--qubit or --scan");
            return run_fidelity(fid_args);
        }
        if (wig->parsed()) return run_wigner(wig_args);
        if (exp->parsed()) return run_experiment(exp_args);
        if (nm->parsed()) return run_nm_state(nm_args);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    } catch (const qiopa::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
