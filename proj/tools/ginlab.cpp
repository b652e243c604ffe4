// ginlab: orchestration front-end for the deformed-Ginibre workflows.
//
// Exit codes: 0 success, 1 error (bad config, I/O, numerical failure),
// 2 statistical-acceptance failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ginlab/duality.hpp"
#include "ginlab/edgestat.hpp"
#include "ginlab/integrals.hpp"
#include "ginlab/kernels.hpp"
#include "ginlab/model.hpp"
#include "ginlab/numkit.hpp"
#include "ginlab/rng.hpp"
#include "ginlab/sampler.hpp"
#include "ginlab/specialfn.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace ginlab;

namespace {

constexpr const char* kVersion = "0.1.0";

// ---------------------------------------------------------------- config IO

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json j;
    try {
        j = json::parse(in, nullptr, true, true);  // allow comments
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw std::runtime_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            throw std::runtime_error(where + ": unknown key \"" + it.key() +
                                     "\"");
    }
}

cdouble parse_complex(const json& v, const std::string& where) {
    if (v.is_number()) return cdouble(v.get<double>(), 0.0);
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return cdouble(v[0].get<double>(), v[1].get<double>());
    throw std::runtime_error(where + ": complex values are [re, im]");
}

std::vector<cdouble> parse_complex_list(const json& v,
                                        const std::string& where) {
    if (!v.is_array()) throw std::runtime_error(where + ": expected an array");
    std::vector<cdouble> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(parse_complex(v[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

ComplexMatrix parse_matrix(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty())
        throw std::runtime_error(where + ": expected a non-empty row array");
    const auto rows = static_cast<Eigen::Index>(v.size());
    std::vector<std::vector<cdouble>> data;
    for (std::size_t i = 0; i < v.size(); ++i)
        data.push_back(
            parse_complex_list(v[i], where + "[" + std::to_string(i) + "]"));
    const auto cols = static_cast<Eigen::Index>(data[0].size());
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        if (static_cast<Eigen::Index>(data[i].size()) != cols)
            throw std::runtime_error(where + ": ragged rows");
        for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = data[i][j];
    }
    return m;
}

// Jordan spec file:
//   { "eigenvalues": [ { "theta": [re, im], "blocks": [[p, multiplicity], ...] } ],
//     "transform": [[ [re,im], ... ], ...] }   (transform optional)
model::JordanSpec parse_jordan(const json& j, const std::string& where) {
    reject_unknown_keys(j, {"eigenvalues", "transform"}, where);
    if (!j.contains("eigenvalues"))
        throw std::runtime_error(where + ": missing \"eigenvalues\"");
    model::JordanSpec spec;
    const json& evs = j.at("eigenvalues");
    if (!evs.is_array() || evs.empty())
        throw std::runtime_error(where + ": \"eigenvalues\" must be a non-empty array");
    for (std::size_t i = 0; i < evs.size(); ++i) {
        const std::string ctx = where + ".eigenvalues[" + std::to_string(i) + "]";
        reject_unknown_keys(evs[i], {"theta", "blocks"}, ctx);
        model::JordanEigenvalue ev;
        ev.theta = parse_complex(evs[i].at("theta"), ctx + ".theta");
        const json& blocks = evs[i].at("blocks");
        if (!blocks.is_array() || blocks.empty())
            throw std::runtime_error(ctx + ": \"blocks\" must be a non-empty array");
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const json& entry = blocks[b];
            if (!entry.is_array() || entry.size() != 2)
                throw std::runtime_error(ctx + ".blocks[" + std::to_string(b) +
                                         "]: entries are [p, multiplicity]");
            ev.blocks.push_back({entry[0].get<int>(), entry[1].get<int>()});
        }
        spec.eigenvalues.push_back(std::move(ev));
    }
    if (j.contains("transform"))
        spec.transform = parse_matrix(j.at("transform"), where + ".transform");
    spec.validate();
    return spec;
}

model::JordanSpec load_jordan(const std::string& path) {
    return parse_jordan(load_json_file(path), path);
}

// ------------------------------------------------------------- schema table

// Per-command key sets with defaults; null means required. The same table
// drives the --config merge and the validate command.
const std::map<std::string, json>& command_schema() {
    static const std::map<std::string, json> schema = {
        {"sample",
         {{"beta", 2}, {"n", nullptr}, {"replicas", 100}, {"tau", 0.0},
          {"jordan", ""}, {"seed", nullptr}, {"out", "out"}}},
        {"edge-stats",
         {{"beta", 2}, {"n", nullptr}, {"replicas", 200}, {"z0-re", 1.0},
          {"z0-im", 0.0}, {"t", -1}, {"jordan", ""}, {"window", 5.0},
          {"bins", 40}, {"seed", nullptr}, {"out", "out"}}},
        {"kernel-eval",
         {{"beta", 2}, {"t", 0}, {"grid", "-5:3:0.1"}, {"out", ""}}},
        {"duality-check",
         {{"beta", nullptr}, {"case", nullptr}, {"seed", nullptr},
          {"budget", 0}, {"out", "out"}}},
        {"charpoly-check",
         {{"beta", nullptr}, {"case", nullptr}, {"seed", nullptr},
          {"budget", 0}, {"out", "out"}}},
        {"integral-check",
         {{"n", 1}, {"t", 0}, {"points", "0"}, {"budget", 1000000},
          {"seed", nullptr}, {"out", "out"}}},
        {"prop13-check",
         {{"n", 8}, {"a-re", 0.5}, {"a-im", 0.0}, {"z-re", 0.9},
          {"z-im", 0.0}, {"samples", 100000}, {"seed", nullptr},
          {"out", "out"}}},
        {"outlier-scaling",
         {{"theta-re", 1.5}, {"theta-im", 0.0}, {"p", 1},
          {"dims", json::array({128, 256, 512, 1024, 2048})},
          {"replicas", 300}, {"seed", nullptr}, {"out", "out"}}},
        {"critical-scaling",
         {{"z0-re", 1.0}, {"z0-im", 0.0}, {"p", 1}, {"theta-hat-re", 1.0},
          {"theta-hat-im", 0.0},
          {"dims", json::array({256, 512, 1024, 2048})}, {"replicas", 200},
          {"window", 5.0}, {"seed", nullptr}, {"out", "out"}}},
    };
    return schema;
}

std::set<std::string> allowed_keys(const std::string& command) {
    std::set<std::string> keys{"command"};
    for (auto it = command_schema().at(command).begin();
         it != command_schema().at(command).end(); ++it)
        keys.insert(it.key());
    return keys;
}

// Resolution order: defaults < config file < command-line flags.
json resolve_params(CLI::App* cmd, const std::string& command,
                    const std::string& config_path) {
    json params = command_schema().at(command);
    if (!config_path.empty()) {
        json file = load_json_file(config_path);
        reject_unknown_keys(file, allowed_keys(command), config_path);
        if (file.contains("command") &&
            file.at("command").get<std::string>() != command)
            throw std::runtime_error(config_path + ": config is for command \"" +
                                     file.at("command").get<std::string>() +
                                     "\"");
        for (auto it = file.begin(); it != file.end(); ++it)
            if (it.key() != "command") params[it.key()] = it.value();
    }
    for (const auto* opt : cmd->get_options()) {
        std::string name = opt->get_name();
        if (name.rfind("--", 0) != 0) continue;
        std::string key = name.substr(2);
        if (key == "config" || !params.contains(key)) continue;
        if (opt->count() == 0) continue;
        const json& def = command_schema().at(command).at(key);
        const std::string raw = opt->results().back();
        if (key == "dims") {
            json arr = json::array();
            std::stringstream ss(raw);
            std::string tok;
            while (std::getline(ss, tok, ',')) arr.push_back(std::stoi(tok));
            params[key] = arr;
        } else if (def.is_string() || (def.is_null() && (key == "case" || key == "jordan" || key == "points"))) {
            params[key] = raw;
        } else if (def.is_number_float()) {
            params[key] = std::stod(raw);
        } else {
            params[key] = static_cast<long long>(std::stoll(raw));
        }
    }
    for (auto it = params.begin(); it != params.end(); ++it)
        if (it.value().is_null())
            throw std::runtime_error(command + ": missing required key \"" +
                                     it.key() + "\"");
    return params;
}

// Registers one string-typed flag per schema key so values can flow through
// resolve_params with uniform precedence handling.
void add_schema_flags(CLI::App* cmd, const std::string& command,
                      std::string* config_path) {
    cmd->add_option("--config", *config_path, "JSON config file for this command");
    static std::vector<std::unique_ptr<std::string>> storage;
    for (auto it = command_schema().at(command).begin();
         it != command_schema().at(command).end(); ++it) {
        storage.push_back(std::make_unique<std::string>());
        cmd->add_option("--" + it.key(), *storage.back());
    }
}

// ----------------------------------------------------------------- manifest

struct RunContext {
    std::string command;
    json params;
    fs::path out_dir;
    std::chrono::steady_clock::time_point started =
        std::chrono::steady_clock::now();
    std::vector<std::string> artifacts;
    bool complete = false;

    void write_manifest(const json& extra = json::object()) const {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                          started)
                .count();
        json m{{"command", command},
               {"version", kVersion},
               {"config", params},
               {"wall_time_seconds", wall},
               {"complete", complete},
               {"artifacts", artifacts}};
        if (params.contains("seed")) m["seed"] = params["seed"];
        for (auto it = extra.begin(); it != extra.end(); ++it)
            m[it.key()] = it.value();
        std::ofstream out(out_dir / "manifest.json");
        out << m.dump(2) << "\n";
    }
};

RunContext make_context(const std::string& command, const json& params) {
    RunContext ctx;
    ctx.command = command;
    ctx.params = params;
    ctx.out_dir = params.value("out", std::string("out"));
    fs::create_directories(ctx.out_dir);
    return ctx;
}

void write_json_report(RunContext& ctx, const json& report) {
    std::ofstream out(ctx.out_dir / "report.json");
    out << report.dump(2) << "\n";
    ctx.artifacts.push_back("report.json");
}

json estimate_json(const duality::MCEstimate& e) {
    return {{"re", e.mean.real()}, {"im", e.mean.imag()},
            {"se_re", e.se_re}, {"se_im", e.se_im}, {"count", e.count}};
}

json duality_report_json(const duality::DualityReport& rep) {
    return {{"lhs", estimate_json(rep.lhs)}, {"rhs", estimate_json(rep.rhs)},
            {"zscore", rep.z_score}, {"pass", rep.pass},
            {"retried", rep.retried}};
}

// ----------------------------------------------------------------- commands

model::EnsembleConfig ensemble_from(const json& p) {
    model::EnsembleConfig cfg;
    cfg.dyson_index = p.at("beta").get<int>();
    cfg.dim = p.at("n").get<int>();
    cfg.tau = p.value("tau", 0.0);
    cfg.seed = p.at("seed").get<std::uint64_t>();
    const std::string jordan = p.value("jordan", std::string());
    if (!jordan.empty()) cfg.deformation = load_jordan(jordan);
    cfg.validate();
    return cfg;
}

int cmd_sample(const json& p) {
    RunContext ctx = make_context("sample", p);
    model::EnsembleConfig cfg = ensemble_from(p);
    const long replicas = p.at("replicas").get<long>();
    std::ofstream csv(ctx.out_dir / "spectra.csv");
    csv << "replica,re,im\n";
    long discarded = 0;
    long total = 0;
    for (long r = 0; r < replicas; ++r) {
        try {
            sampler::SpectrumSample s = sampler::spectrum(cfg, r);
            for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) {
                csv << r << ',' << s.eigenvalues[i].real() << ','
                    << s.eigenvalues[i].imag() << '\n';
                ++total;
            }
        } catch (const sampler::PairingError& e) {
            ++discarded;
            std::cerr << "replica " << r << " discarded: " << e.what() << "\n";
        }
    }
    ctx.artifacts.push_back("spectra.csv");
    ctx.complete = true;
    ctx.write_manifest({{"config_fingerprint", cfg.fingerprint()},
                        {"eigenvalues_written", total},
                        {"replicas_discarded", discarded}});
    return 0;
}

int cmd_edge_stats(const json& p) {
    RunContext ctx = make_context("edge-stats", p);
    model::EnsembleConfig cfg = ensemble_from(p);
    const cdouble z0(p.at("z0-re").get<double>(), p.at("z0-im").get<double>());
    int t = p.at("t").get<int>();
    if (t < 0) t = model::describe_criticality(cfg.deformation, z0)
                       .geometric_multiplicity;
    kernels::EdgeFrame frame = cfg.dyson_index == 4
                                   ? kernels::EdgeFrame::se(z0, t)
                                   : kernels::EdgeFrame::ue(z0, t);
    const double window = p.at("window").get<double>();
    const int bins = p.at("bins").get<int>();
    const double bin_side = 2.0 * window / bins;
    const long replicas = p.at("replicas").get<long>();
    edgestat::EdgeReport rep =
        cfg.dyson_index == 4
            ? edgestat::collect_edge_se(cfg, frame, window, bin_side, replicas)
            : edgestat::collect_edge(cfg, frame, window, bin_side, replicas);

    std::ofstream csv(ctx.out_dir / "profile.csv");
    csv << "re_zhat,im_zhat,empirical,predicted,se\n";
    std::ofstream dat(ctx.out_dir / "profile.dat");
    dat << "# re_zhat im_zhat empirical predicted se\n";
    for (int iy = 0; iy < rep.cells; ++iy) {
        for (int ix = 0; ix < rep.cells; ++ix) {
            if (!rep.bin_in_disk(ix, iy)) continue;
            const cdouble c = rep.bin_center(ix, iy);
            const std::size_t k = std::size_t(iy) * rep.cells + ix;
            csv << c.real() << ',' << c.imag() << ',' << rep.empirical[k]
                << ',' << rep.predicted[k] << ',' << rep.bin_se[k] << '\n';
            dat << c.real() << ' ' << c.imag() << ' ' << rep.empirical[k]
                << ' ' << rep.predicted[k] << ' ' << rep.bin_se[k] << '\n';
        }
        dat << '\n';
    }
    ctx.artifacts.push_back("profile.csv");
    ctx.artifacts.push_back("profile.dat");

    const bool pass = rep.chi.p_value > 0.01;
    write_json_report(
        ctx, {{"beta", cfg.dyson_index}, {"n", cfg.dim}, {"t", t},
              {"z0", {z0.real(), z0.imag()}}, {"window", window},
              {"bin_side", bin_side}, {"replicas", rep.replicas},
              {"total_eigenvalues", rep.total_eigenvalues},
              {"chi_square", rep.chi.statistic}, {"dof", rep.chi.dof},
              {"p_value", rep.chi.p_value}, {"max_abs_z", rep.max_abs_z},
              {"merged_bins_warning", rep.merged_bins_warning},
              {"pass", pass}});
    ctx.complete = true;
    ctx.write_manifest({{"config_fingerprint", cfg.fingerprint()}});
    return pass ? 0 : 2;
}

int cmd_kernel_eval(const json& p) {
    const int beta = p.at("beta").get<int>();
    const int t = p.at("t").get<int>();
    if (beta != 2 && beta != 4)
        throw std::runtime_error("kernel-eval: beta must be 2 or 4");
    double lo = 0.0, hi = 0.0, step = 0.0;
    if (std::sscanf(p.at("grid").get<std::string>().c_str(), "%lf:%lf:%lf",
                    &lo, &hi, &step) != 3 ||
        step <= 0.0 || hi < lo)
        throw std::runtime_error("kernel-eval: grid must be lo:hi:step");
    kernels::EdgeFrame frame = beta == 4 ? kernels::EdgeFrame::se(1.0, t)
                                         : kernels::EdgeFrame::ue(1.0, t);
    std::ostringstream body;
    body << "x,density\n";
    for (double x = lo; x <= hi + 0.5 * step; x += step) {
        const std::vector<cdouble> pt{cdouble(x, 0.0)};
        const double rho = beta == 4
                               ? kernels::predict_correlation_se(frame, pt)
                               : kernels::predict_correlation_ue(frame, pt);
        body << x << ',' << rho << '\n';
    }
    const std::string out = p.at("out").get<std::string>();
    if (out.empty()) {
        std::cout << body.str();
    } else {
        RunContext ctx = make_context("kernel-eval", p);
        std::ofstream csv(ctx.out_dir / "kernel.csv");
        csv << body.str();
        ctx.artifacts.push_back("kernel.csv");
        ctx.complete = true;
        ctx.write_manifest();
    }
    return 0;
}

// Duality case file:
//   { "n":, "k1":, "k2":, "tau":, "budget":, "random_covariances": bool }
// for a seeded random case, or explicit
//   { "n":, "k1":, "k2":, "tau":, "budget":,
//     "a1_diag": [...], "a2_diag": [...], "x0_diag": [...], "y0": [[...]] }
// with identity covariances; a*_diag entries repeat over the N-fold blocks.
duality::DualityCase parse_duality_case(const json& j, int beta,
                                        std::uint64_t seed, long budget,
                                        const std::string& where) {
    reject_unknown_keys(j,
                        {"n", "k1", "k2", "tau", "budget", "random_covariances",
                         "a1_diag", "a2_diag", "x0_diag", "y0"},
                        where);
    const int n = j.at("n").get<int>();
    const int k1 = j.value("k1", 1);
    const int k2 = j.value("k2", 1);
    const double tau = j.value("tau", 0.0);
    if (budget <= 0) budget = j.value("budget", 100000L);
    if (!j.contains("a1_diag"))
        return duality::make_random_case(beta, n, k1, k2,
                                         j.value("random_covariances", false),
                                         tau, seed, budget);

    duality::DualityCase c;
    c.config.dyson_index = beta;
    c.config.dim = n;
    c.config.tau = tau;
    c.config.seed = rng::mix(seed);
    c.k1 = k1;
    c.k2 = k2;
    c.budget = budget;
    const int side = beta == 4 ? 2 * n : n;
    auto block_diag = [&](const std::vector<cdouble>& entries, int k,
                          const std::string& name) {
        if (static_cast<int>(entries.size()) != k)
            throw std::runtime_error(where + ": " + name + " needs K entries");
        ComplexMatrix d = ComplexMatrix::Zero(k, k);
        for (int i = 0; i < k; ++i) d(i, i) = entries[std::size_t(i)];
        return numkit::kron(d, ComplexMatrix::Identity(side, side));
    };
    c.a1 = block_diag(parse_complex_list(j.at("a1_diag"), where + ".a1_diag"),
                      beta == 2 ? k1 : c.k(), "a1_diag");
    if (beta == 2)
        c.a2 = block_diag(parse_complex_list(j.at("a2_diag"), where + ".a2_diag"),
                          k2, "a2_diag");
    if (j.contains("x0_diag")) {
        std::vector<cdouble> x0 =
            parse_complex_list(j.at("x0_diag"), where + ".x0_diag");
        ComplexMatrix m = ComplexMatrix::Zero(side, side);
        for (std::size_t i = 0; i < x0.size(); ++i) {
            m(Eigen::Index(i), Eigen::Index(i)) = x0[i];
            if (beta == 4)  // conjugate block of the quaternion embedding
                m(Eigen::Index(n + i), Eigen::Index(n + i)) = std::conj(x0[i]);
        }
        c.config.mean = m;
    }
    if (j.contains("y0")) c.y0 = parse_matrix(j.at("y0"), where + ".y0");
    c.validate();
    return c;
}

int cmd_duality_check(const json& p) {
    RunContext ctx = make_context("duality-check", p);
    const std::string path = p.at("case").get<std::string>();
    duality::DualityCase c = parse_duality_case(
        load_json_file(path), p.at("beta").get<int>(),
        p.at("seed").get<std::uint64_t>(), p.at("budget").get<long>(), path);
    duality::DualityReport rep = duality::verify_duality_with_retry(c);
    write_json_report(ctx, duality_report_json(rep));
    ctx.complete = true;
    ctx.write_manifest({{"case_file", path}});
    return rep.pass ? 0 : 2;
}

int cmd_charpoly_check(const json& p) {
    RunContext ctx = make_context("charpoly-check", p);
    const std::string path = p.at("case").get<std::string>();
    json j = load_json_file(path);
    reject_unknown_keys(j, {"n", "tau", "budget", "z", "w"}, path);
    duality::CharpolyCase c;
    c.config.dyson_index = p.at("beta").get<int>();
    c.config.dim = j.at("n").get<int>();
    c.config.tau = j.value("tau", 0.0);
    c.config.seed = rng::mix(p.at("seed").get<std::uint64_t>());
    c.z = parse_complex_list(j.at("z"), path + ".z");
    c.w = parse_complex_list(j.at("w"), path + ".w");
    const long budget = p.at("budget").get<long>();
    c.budget = budget > 0 ? budget : j.value("budget", 100000L);
    duality::DualityReport rep = duality::verify_charpoly_with_retry(c);
    write_json_report(ctx, duality_report_json(rep));
    ctx.complete = true;
    ctx.write_manifest({{"case_file", path}});
    return rep.pass ? 0 : 2;
}

int cmd_integral_check(const json& p) {
    RunContext ctx = make_context("integral-check", p);
    integrals::MatrixIntegralSpec spec;
    spec.n = p.at("n").get<int>();
    spec.t = p.at("t").get<int>();
    spec.budget = p.at("budget").get<long>();
    spec.seed = p.at("seed").get<std::uint64_t>();
    // points: semicolon-separated complex values "re,im;re,im" or "re;re"
    std::stringstream ss(p.at("points").get<std::string>());
    std::string tok;
    while (std::getline(ss, tok, ';')) {
        double re = 0.0, im = 0.0;
        if (std::sscanf(tok.c_str(), "%lf,%lf", &re, &im) < 1)
            throw std::runtime_error("integral-check: bad point \"" + tok + "\"");
        spec.zhat.emplace_back(re, im);
    }
    spec.validate();
    integrals::I2Estimate mc = integrals::eval_i2_mc(spec);
    const double closed = integrals::eval_i2_closed(spec);
    const double diff = mc.value - closed;
    const double z = mc.std_error > 0.0 ? std::abs(diff) / mc.std_error : 0.0;
    const bool pass =
        std::abs(diff) <= std::max(3.0 * mc.std_error, 0.01 * std::abs(closed));
    write_json_report(ctx, {{"mc_value", mc.value},
                            {"mc_std_error", mc.std_error},
                            {"effective_samples", mc.effective_samples},
                            {"low_ess_warning", mc.low_ess_warning},
                            {"closed_form", closed},
                            {"zscore", z},
                            {"relative_difference", diff / closed},
                            {"pass", pass}});
    ctx.complete = true;
    ctx.write_manifest();
    return pass ? 0 : 2;
}

int cmd_prop13_check(const json& p) {
    RunContext ctx = make_context("prop13-check", p);
    integrals::Prop13Report rep = integrals::verify_prop13_scalar(
        p.at("n").get<int>(),
        cdouble(p.at("a-re").get<double>(), p.at("a-im").get<double>()),
        cdouble(p.at("z-re").get<double>(), p.at("z-im").get<double>()),
        p.at("samples").get<long>(), p.at("seed").get<std::uint64_t>());
    write_json_report(ctx, {{"lhs", rep.lhs}, {"lhs_se", rep.lhs_se},
                            {"rhs", rep.rhs}, {"rhs_se", rep.rhs_se},
                            {"zscore", rep.z_score},
                            {"nodes_used", rep.nodes_used},
                            {"window_radius", rep.window_radius},
                            {"pass", rep.pass}});
    ctx.complete = true;
    ctx.write_manifest();
    return rep.pass ? 0 : 2;
}

int cmd_outlier_scaling(const json& p) {
    RunContext ctx = make_context("outlier-scaling", p);
    const int order = p.at("p").get<int>();
    std::vector<int> dims = p.at("dims").get<std::vector<int>>();
    edgestat::ScalingFit fit = edgestat::outlier_scaling(
        cdouble(p.at("theta-re").get<double>(), p.at("theta-im").get<double>()),
        order, dims, p.at("replicas").get<long>(),
        p.at("seed").get<std::uint64_t>());
    std::ofstream csv(ctx.out_dir / "scaling.csv");
    csv << "n,mean_spread,se\n";
    for (std::size_t i = 0; i < fit.dims.size(); ++i)
        csv << fit.dims[i] << ',' << fit.mean_spread[i] << ','
            << fit.mean_spread_se[i] << '\n';
    ctx.artifacts.push_back("scaling.csv");
    const double expected = -1.0 / (2.0 * order);
    const bool pass = std::abs(fit.slope - expected) <= 0.05;
    write_json_report(ctx, {{"slope", fit.slope}, {"slope_se", fit.slope_se},
                            {"expected_slope", expected},
                            {"ambiguity_warning", fit.ambiguity_warning},
                            {"pass", pass}});
    ctx.complete = true;
    ctx.write_manifest();
    return pass ? 0 : 2;
}

int cmd_critical_scaling(const json& p) {
    RunContext ctx = make_context("critical-scaling", p);
    std::vector<int> dims = p.at("dims").get<std::vector<int>>();
    edgestat::CriticalFit fit = edgestat::critical_scaling(
        cdouble(p.at("z0-re").get<double>(), p.at("z0-im").get<double>()),
        p.at("p").get<int>(),
        cdouble(p.at("theta-hat-re").get<double>(),
                p.at("theta-hat-im").get<double>()),
        dims, p.at("replicas").get<long>(), p.at("seed").get<std::uint64_t>(),
        p.at("window").get<double>());
    std::ofstream csv(ctx.out_dir / "drift.csv");
    csv << "n,mean_re_zhat,se\n";
    for (std::size_t i = 0; i < fit.dims.size(); ++i)
        csv << fit.dims[i] << ',' << fit.mean_re[i] << ','
            << fit.mean_re_se[i] << '\n';
    ctx.artifacts.push_back("drift.csv");
    write_json_report(ctx, {{"slope", fit.slope}, {"slope_se", fit.slope_se},
                            {"n_stable", fit.n_stable},
                            {"pass", fit.n_stable}});
    ctx.complete = true;
    ctx.write_manifest();
    return fit.n_stable ? 0 : 2;
}

// validate: schema check of a run-config file, without execution.
int cmd_validate(const std::string& path) {
    json diagnostics = json::array();
    json resolved;
    try {
        json j = load_json_file(path);
        if (!j.is_object() || !j.contains("command")) {
            diagnostics.push_back("missing \"command\" key");
        } else {
            const std::string command = j.at("command").get<std::string>();
            if (!command_schema().count(command)) {
                diagnostics.push_back("unknown command \"" + command + "\"");
            } else {
                reject_unknown_keys(j, allowed_keys(command), path);
                resolved = command_schema().at(command);
                for (auto it = j.begin(); it != j.end(); ++it)
                    if (it.key() != "command") resolved[it.key()] = it.value();
                for (auto it = resolved.begin(); it != resolved.end(); ++it)
                    if (it.value().is_null())
                        diagnostics.push_back("missing required key \"" +
                                              it.key() + "\"");
                if (resolved.contains("jordan") &&
                    !resolved["jordan"].get<std::string>().empty()) {
                    try {
                        load_jordan(resolved["jordan"].get<std::string>());
                    } catch (const std::exception& e) {
                        diagnostics.push_back(e.what());
                    }
                }
                resolved["command"] = command;
            }
        }
    } catch (const std::exception& e) {
        diagnostics.push_back(e.what());
    }
    json out{{"valid", diagnostics.empty()}, {"diagnostics", diagnostics}};
    if (diagnostics.empty()) out["resolved"] = resolved;
    std::cout << out.dump(2) << "\n";
    return diagnostics.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    // the worker pool is sized by GINLAB_THREADS; BLAS must not oversubscribe
    setenv("OPENBLAS_NUM_THREADS", "1", 0);

    CLI::App app{"deformed-Ginibre verification workflows"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(1);

    std::map<std::string, std::string> config_paths;
    std::map<std::string, int (*)(const json&)> runners = {
        {"sample", cmd_sample},
        {"edge-stats", cmd_edge_stats},
        {"kernel-eval", cmd_kernel_eval},
        {"duality-check", cmd_duality_check},
        {"charpoly-check", cmd_charpoly_check},
        {"integral-check", cmd_integral_check},
        {"prop13-check", cmd_prop13_check},
        {"outlier-scaling", cmd_outlier_scaling},
        {"critical-scaling", cmd_critical_scaling},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, fn] : runners) {
        CLI::App* cmd = app.add_subcommand(name);
        add_schema_flags(cmd, name, &config_paths[name]);
        subs[name] = cmd;
    }
    std::string validate_path;
    CLI::App* validate = app.add_subcommand("validate", "schema check only");
    validate->add_option("--config", validate_path)->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) return cmd_validate(validate_path);
        for (const auto& [name, fn] : runners) {
            if (!subs[name]->parsed()) continue;
            json params = resolve_params(subs[name], name, config_paths[name]);
            return fn(params);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
