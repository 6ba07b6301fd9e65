#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "boseq/algolab.hpp"
#include "boseq/dynamics.hpp"
#include "boseq/entanglement.hpp"
#include "boseq/qubus.hpp"
#include "boseq/schedc.hpp"
#include "boseq/version.hpp"

using json = nlohmann::ordered_json;

namespace {

const double kPi = std::acos(-1.0);

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string checksum_hex(const std::string& data) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(data)));
    return buf;
}

void write_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw boseq::IoError("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw boseq::IoError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw boseq::IoError("cannot rename " + tmp + " to " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw boseq::IoError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string csv_header(const std::string& config, const std::string& columns) {
    return "# boseq " + std::string(boseq::kVersion) + "\n# config: " + config + "\n" +
           columns + "\n";
}

/// CSV body from a trajectory, time column first, real parts only.
std::string trajectory_csv(const boseq::Trajectory& traj, const std::string& config) {
    std::string columns = "t";
    for (const std::string& label : traj.labels) columns += "," + label;
    std::string out = csv_header(config, columns);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        out += fmt(traj.times[i]);
        for (const auto& col : traj.columns) out += "," + fmt(col[i].real());
        out += "\n";
    }
    return out;
}

std::vector<int> parse_n_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            const int v = std::stoi(item);
            if (v < 1) throw std::invalid_argument("n");
            out.push_back(v);
        } catch (const std::exception&) {
            throw boseq::ArgumentError("bad N-list entry '" + item + "'");
        }
    }
    if (out.empty()) throw boseq::ArgumentError("empty N-list");
    return out;
}

/// Runs independent work items, optionally on a few threads; item order in any
/// aggregate output stays deterministic because results are indexed.
void run_items(const std::vector<std::function<void()>>& items, int jobs) {
    if (jobs <= 1) {
        for (const auto& item : items) item();
        return;
    }
    std::size_t next = 0;
    while (next < items.size()) {
        std::vector<std::future<void>> batch;
        for (int j = 0; j < jobs && next < items.size(); ++j, ++next)
            batch.push_back(std::async(std::launch::async, items[next]));
        for (auto& f : batch) f.get();
    }
}

std::vector<double> linspace(double t_max, int steps) {
    std::vector<double> t(steps);
    for (int i = 0; i < steps; ++i) t[i] = t_max * i / (steps - 1);
    return t;
}

struct CommonOpts {
    std::string n_list = "1";
    int steps = 400;
    double t_max = -1.0;
    std::string out_dir = ".";
    int jobs = 1;
};

std::string path_join(const std::string& dir, const std::string& name) {
    if (dir.empty() || dir == ".") return name;
    return dir.back() == '/' ? dir + name : dir + "/" + name;
}

int cmd_entangler(const CommonOpts& opt) {
    const std::vector<int> ns = parse_n_list(opt.n_list);
    const double t_max = opt.t_max > 0 ? opt.t_max : kPi / 2;
    const std::string config = "entangler --n " + opt.n_list + " --t-max " + fmt(t_max) +
                               " --steps " + std::to_string(opt.steps);
    const std::vector<double> grid = linspace(t_max, opt.steps);

    std::vector<std::string> files(ns.size());
    std::vector<std::string> sums(ns.size());
    std::vector<double> gate_entropy(ns.size());
    std::vector<std::function<void()>> items;
    for (std::size_t i = 0; i < ns.size(); ++i)
        items.push_back([&, i] {
            const int n = ns[i];
            const boseq::Trajectory traj = boseq::entropy_trajectory(n, grid);
            const std::string csv = trajectory_csv(traj, config);
            files[i] = path_join(opt.out_dir, "entangler_N" + std::to_string(n) + ".csv");
            sums[i] = checksum_hex(csv);
            write_atomic(files[i], csv);
            const boseq::Trajectory gate =
                boseq::entropy_trajectory(n, {kPi / (4.0 * n)});
            gate_entropy[i] = gate.columns[0][0].real();
        });
    run_items(items, opt.jobs);

    std::string fig2b = csv_header(config, "N,entropy_at_pi_over_4N");
    for (std::size_t i = 0; i < ns.size(); ++i)
        fig2b += std::to_string(ns[i]) + "," + fmt(gate_entropy[i]) + "\n";
    const std::string fig2b_path = path_join(opt.out_dir, "fig2b.csv");
    write_atomic(fig2b_path, fig2b);

    json summary;
    summary["tool"] = "boseq " + std::string(boseq::kVersion);
    summary["config"] = config;
    summary["files"] = json::array();
    for (std::size_t i = 0; i < ns.size(); ++i)
        summary["files"].push_back({{"N", ns[i]}, {"path", files[i]}, {"fnv1a64", sums[i]}});
    summary["files"].push_back({{"path", fig2b_path}, {"fnv1a64", checksum_hex(fig2b)}});
    write_atomic(path_join(opt.out_dir, "entangler_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_cnot(const CommonOpts& opt) {
    const std::vector<int> ns = parse_n_list(opt.n_list);
    const std::string config = "cnot --n " + opt.n_list;
    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = config;
    out["runs"] = json::array();
    for (int n : ns) {
        const boseq::CnotResult r = boseq::run_cnot_analogue(n);
        out["runs"].push_back({{"N", n},
                               {"fidelity_plus", r.fidelity_plus},
                               {"fidelity_minus", r.fidelity_minus}});
    }
    write_atomic(path_join(opt.out_dir, "cnot.json"), out.dump(2) + "\n");
    return 0;
}

int cmd_deutsch(const CommonOpts& opt, const std::string& oracle, double oracle_time) {
    const std::vector<int> ns = parse_n_list(opt.n_list);
    const boseq::OracleKind kind = boseq::oracle_from_name(oracle);
    const std::string config = "deutsch --oracle " + oracle + " --n " + opt.n_list;
    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = config;
    out["runs"] = json::array();
    for (int n : ns) {
        const double t = oracle_time > 0 ? oracle_time : boseq::deutsch_default_time(n);
        const boseq::DeutschResult r = boseq::run_deutsch(kind, n, t);
        out["runs"].push_back({{"N", n},
                               {"oracle_time", t},
                               {"classification", r.classification},
                               {"overlap_plus", r.overlap_plus},
                               {"overlap_minus", r.overlap_minus}});
    }
    write_atomic(path_join(opt.out_dir, "deutsch_" + oracle + ".json"), out.dump(2) + "\n");
    return 0;
}

int cmd_grover(const CommonOpts& opt, int m) {
    const std::vector<int> ns = parse_n_list(opt.n_list);
    const std::string config = "grover --m " + std::to_string(m) + " --n " + opt.n_list +
                               " --steps " + std::to_string(opt.steps);

    std::vector<json> runs(ns.size());
    std::vector<std::function<void()>> items;
    for (std::size_t i = 0; i < ns.size(); ++i)
        items.push_back([&, i] {
            const int n = ns[i];
            const double t_max =
                opt.t_max > 0 ? opt.t_max : boseq::grover_default_t_max(m, n);
            const boseq::GroverResult r = boseq::run_grover(m, n, t_max, opt.steps);
            const std::string csv = trajectory_csv(r.trajectory, config);
            const std::string path = path_join(
                opt.out_dir, "grover_M" + std::to_string(m) + "_N" + std::to_string(n) + ".csv");
            write_atomic(path, csv);
            runs[i] = {{"N", n},
                       {"path", path},
                       {"fnv1a64", checksum_hex(csv)},
                       {"t_peak", r.t_peak},
                       {"omega_est", r.omega_est},
                       {"omega_commutator", r.omega_commutator}};
        });
    run_items(items, opt.jobs);

    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = config;
    out["runs"] = runs;
    write_atomic(path_join(opt.out_dir, "grover_M" + std::to_string(m) + "_summary.json"),
                 out.dump(2) + "\n");
    return 0;
}

int cmd_dephase(const CommonOpts& opt, int m, double gamma) {
    if (gamma <= 0) throw boseq::ArgumentError("gamma must be positive");
    if (m != 1 && m != 2) throw boseq::ArgumentError("dephase supports --m 1 or 2");
    const std::vector<int> ns = parse_n_list(opt.n_list);
    const double t_max = opt.t_max > 0 ? opt.t_max : 0.5 / gamma;
    const std::string config = "dephase --m " + std::to_string(m) + " --n " + opt.n_list +
                               " --gamma " + fmt(gamma) + " --t-max " + fmt(t_max) +
                               " --steps " + std::to_string(opt.steps);
    const std::vector<double> grid = linspace(t_max, opt.steps);

    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = config;
    out["runs"] = json::array();
    for (int n : ns) {
        const double s = 1.0 / std::sqrt(2.0);
        std::vector<boseq::QubitAmplitudes> qubits(m, boseq::coherent_qubit_state(s, s, n));
        const boseq::RegisterState psi0 = boseq::RegisterState::product(qubits);

        boseq::LindbladSpec spec;
        spec.gamma = gamma;
        for (int site = 1; site <= m; ++site)
            spec.couplings.push_back(boseq::operator_product({{boseq::Axis::Z, site}}, m, n));

        std::vector<boseq::AxisSite> obs_factors;
        for (int site = 1; site <= m; ++site) obs_factors.push_back({boseq::Axis::X, site});
        const boseq::Operator obs = boseq::operator_product(obs_factors, m, n);

        const boseq::Trajectory traj = boseq::lindblad_trajectory(
            boseq::DensityMatrix::pure(psi0), spec, grid, {{"correlator", obs}},
            boseq::default_lindblad_dt(spec, t_max));
        const double rate = boseq::correlator_decay_rate(traj);

        std::string csv = csv_header(config + " [N=" + std::to_string(n) + "]",
                                     "t,correlator,fitted_rate");
        for (std::size_t i = 0; i < grid.size(); ++i)
            csv += fmt(grid[i]) + "," + fmt(traj.columns[0][i].real()) + "," + fmt(rate) + "\n";
        const std::string path =
            path_join(opt.out_dir, "dephase_M" + std::to_string(m) + "_N" + std::to_string(n) +
                                       ".csv");
        write_atomic(path, csv);
        out["runs"].push_back({{"N", n},
                               {"path", path},
                               {"fnv1a64", checksum_hex(csv)},
                               {"fitted_rate", rate},
                               {"rate_over_gamma", rate / gamma}});
    }
    write_atomic(path_join(opt.out_dir, "dephase_M" + std::to_string(m) + "_summary.json"),
                 out.dump(2) + "\n");
    return 0;
}

int cmd_buscheck(const CommonOpts& opt, double g, const std::string& delta_list, int cutoff) {
    const std::vector<int> ns = parse_n_list(opt.n_list);
    std::vector<double> mults;
    {
        std::stringstream ss(delta_list);
        std::string item;
        while (std::getline(ss, item, ',')) mults.push_back(std::stod(item));
        if (mults.empty()) throw boseq::ArgumentError("empty delta list");
    }
    const std::string config = "buscheck --n " + opt.n_list + " --g " + fmt(g) +
                               " --deltas " + delta_list + " --cutoff " +
                               std::to_string(cutoff);

    std::vector<std::function<void()>> items;
    std::vector<json> runs(ns.size());
    for (std::size_t i = 0; i < ns.size(); ++i)
        items.push_back([&, i] {
            const int n = ns[i];
            const auto rows = boseq::run_bus_sweep(n, g, mults, cutoff);
            std::string csv = csv_header(config + " [N=" + std::to_string(n) + "]",
                                         "delta,infidelity,photon_leak");
            for (const auto& row : rows)
                csv += fmt(row.delta) + "," + fmt(row.infidelity) + "," +
                       fmt(row.photon_leak) + "\n";
            const std::string path =
                path_join(opt.out_dir, "buscheck_N" + std::to_string(n) + ".csv");
            write_atomic(path, csv);
            runs[i] = {{"N", n}, {"path", path}, {"fnv1a64", checksum_hex(csv)}};
        });
    run_items(items, opt.jobs);

    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = config;
    out["runs"] = runs;
    write_atomic(path_join(opt.out_dir, "buscheck_summary.json"), out.dump(2) + "\n");
    return 0;
}

int cmd_compile(const std::string& in_path, int n, const std::string& out_path) {
    const boseq::Schedule parsed = boseq::parse_schedule(read_file(in_path));
    const boseq::Schedule compiled = boseq::compile_to_bosonic(parsed, n);
    std::string path = out_path;
    if (path.empty()) {
        path = in_path;
        const std::string ext = ".bsched";
        if (path.size() > ext.size() &&
            path.compare(path.size() - ext.size(), ext.size(), ext) == 0)
            path.resize(path.size() - ext.size());
        path += "_N" + std::to_string(n) + ".bsched";
    }
    write_atomic(path, boseq::pretty_print(compiled));
    return 0;
}

int cmd_run_schedule(const std::string& in_path, const std::string& out_path) {
    const boseq::Schedule schedule = boseq::parse_schedule(read_file(in_path));
    const auto [state, outcomes] = boseq::execute_schedule(schedule);
    json out;
    out["tool"] = "boseq " + std::string(boseq::kVersion);
    out["config"] = "run-schedule --in " + in_path;
    out["n_sites"] = schedule.n_sites;
    out["n_bosons"] = *schedule.n_bosons;
    out["final_norm"] = state.norm();
    out["measurements"] = json::array();
    for (const auto& o : outcomes)
        out["measurements"].push_back({{"site", o.site},
                                       {"basis", std::string(1, boseq::axis_name(o.basis))},
                                       {"value", o.value}});
    std::string path = out_path.empty() ? in_path + ".out.json" : out_path;
    write_atomic(path, out.dump(2) + "\n");
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"boseq: exact dynamics of two-mode bosonic qubit registers"};
    app.set_version_flag("--version", std::string("boseq ") + boseq::kVersion);
    app.require_subcommand(1);

    CommonOpts opt;
    std::string oracle = "BAL01";
    double oracle_time = -1.0;
    int grover_m = 2;
    double gamma = 0.1;
    int dephase_m = 1;
    double bus_g = 1.0;
    std::string deltas = "10,20,40,50";
    int cutoff = 3;
    std::string in_path, out_path;
    int compile_n = 1;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--n", opt.n_list, "boson numbers, comma separated");
        sub->add_option("--steps", opt.steps, "time samples")->check(CLI::Range(2, 1000000));
        sub->add_option("--t-max", opt.t_max, "time horizon (command default if omitted)");
        sub->add_option("--out-dir", opt.out_dir, "output directory");
        sub->add_option("--jobs", opt.jobs, "parallel sweep elements")
            ->check(CLI::Range(1, 64));
    };

    CLI::App* entangler = app.add_subcommand("entangler", "entangling-gate entropy curves");
    add_common(entangler);

    CLI::App* cnot = app.add_subcommand("cnot", "conditional sign-flip gate check");
    cnot->add_option("--n", opt.n_list, "boson numbers, comma separated");
    cnot->add_option("--out-dir", opt.out_dir, "output directory");

    CLI::App* deutsch = app.add_subcommand("deutsch", "two-qubit oracle classification");
    deutsch->add_option("--oracle", oracle, "CONST0|CONST1|BAL01|BAL10");
    deutsch->add_option("--oracle-time", oracle_time, "override the oracle time");
    deutsch->add_option("--n", opt.n_list, "boson numbers, comma separated");
    deutsch->add_option("--out-dir", opt.out_dir, "output directory");

    CLI::App* grover = app.add_subcommand("grover", "continuous-time search oscillations");
    grover->add_option("--m", grover_m, "register sites")->check(CLI::Range(1, 16));
    add_common(grover);

    CLI::App* dephase = app.add_subcommand("dephase", "collective-dephasing decay rates");
    dephase->add_option("--m", dephase_m, "register sites (1 or 2)");
    dephase->add_option("--gamma", gamma, "dephasing strength");
    add_common(dephase);

    CLI::App* buscheck = app.add_subcommand("buscheck", "photon-bus effective-model sweep");
    buscheck->add_option("--g", bus_g, "site-bus coupling");
    buscheck->add_option("--deltas", deltas, "detuning multipliers of g*sqrt(N)");
    buscheck->add_option("--cutoff", cutoff, "photon cutoff")->check(CLI::Range(1, 16));
    buscheck->add_option("--n", opt.n_list, "boson numbers, comma separated");
    buscheck->add_option("--out-dir", opt.out_dir, "output directory");
    buscheck->add_option("--jobs", opt.jobs, "parallel sweep elements")
        ->check(CLI::Range(1, 64));

    CLI::App* compile = app.add_subcommand("compile", "qubit schedule -> bosonic schedule");
    compile->add_option("--in", in_path, "input .bsched")->required();
    compile->add_option("--n", compile_n, "boson number")->required();
    compile->add_option("--out", out_path, "output path");

    CLI::App* runsched = app.add_subcommand("run-schedule", "execute a bosonic schedule");
    runsched->add_option("--in", in_path, "input .bsched")->required();
    runsched->add_option("--out", out_path, "output JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    auto default_n = [&](CLI::App* sub, const char* def) {
        if (sub->count("--n") == 0) opt.n_list = def;
    };

    try {
        if (*entangler) {
            default_n(entangler, "1,5,10,20,30");
            return cmd_entangler(opt);
        }
        if (*cnot) {
            default_n(cnot, "1,2,5,20");
            return cmd_cnot(opt);
        }
        if (*deutsch) {
            default_n(deutsch, "1,2,5,20");
            return cmd_deutsch(opt, oracle, oracle_time);
        }
        if (*grover) {
            default_n(grover, "1,2,5,10");
            return cmd_grover(opt, grover_m);
        }
        if (*dephase) {
            default_n(dephase, "1,2,3");
            return cmd_dephase(opt, dephase_m, gamma);
        }
        if (*buscheck) {
            default_n(buscheck, "1,2");
            return cmd_buscheck(opt, bus_g, deltas, cutoff);
        }
        if (*compile) return cmd_compile(in_path, compile_n, out_path);
        if (*runsched) return cmd_run_schedule(in_path, out_path);
    } catch (const boseq::DimensionCapError& e) {
        std::fprintf(stderr, "boseq: %s\n", e.what());
        return 3;
    } catch (const boseq::CutoffError& e) {
        std::fprintf(stderr, "boseq: %s\n", e.what());
        return 3;
    } catch (const boseq::Error& e) {
        std::fprintf(stderr, "boseq: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "boseq: %s\n", e.what());
        return 2;
    }
    return 0;
}
