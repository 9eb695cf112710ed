#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <cmath>
#include <iostream>
#include <sstream>

#include "checks.hpp"
#include "config_file.hpp"
#include "nilheat/diffusion.hpp"
#include "nilheat/kernel.hpp"
#include "nilheat/parallel.hpp"
#include "nilheat/propagator.hpp"
#include "output.hpp"

using namespace nilheat;
using namespace nilheat::cli;

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

GroupTag parse_group(const std::string& s) {
    if (s == "g4") return GroupTag::Engel;
    if (s == "g5") return GroupTag::Cartan;
    throw UsageError("group must be g4 or g5, got '" + s + "'");
}

// A setting given on the command line wins over the config file, which wins over the default.
struct Settings {
    const ConfigFile& file;
    std::vector<std::pair<std::string, std::string>> echo{};

    std::optional<std::string> raw(const std::string& key, const std::optional<std::string>& flag) {
        std::optional<std::string> v = flag ? flag : file.get(key);
        if (v) echo.emplace_back(key, *v);
        return v;
    }
    double real(const std::string& key, const std::optional<std::string>& flag, double def) {
        auto v = raw(key, flag);
        return v ? parse_double(*v, key) : def;
    }
    long long integer(const std::string& key, const std::optional<std::string>& flag, long long def) {
        auto v = raw(key, flag);
        return v ? parse_int(*v, key) : def;
    }
    bool boolean(const std::string& key, bool def) {
        auto v = raw(key, std::nullopt);
        return v ? parse_bool(*v, key) : def;
    }
};

struct CommonFlags {
    std::string config;
    std::optional<std::string> out, threads;
};

void add_common(CLI::App* cmd, CommonFlags& c) {
    cmd->add_option("--config", c.config, "key = value configuration file");
    cmd->add_option("--out", c.out, "output file (default stdout)");
    cmd->add_option("--threads", c.threads, "worker threads (default NILHEAT_THREADS or all cores)");
}

ConfigFile load_config(const CommonFlags& c, std::vector<std::string> keys) {
    ConfigFile f = c.config.empty() ? ConfigFile{} : ConfigFile::load(c.config);
    keys.insert(keys.end(), {"out", "threads"});
    f.restrict_to(keys);
    return f;
}

std::string apply_common(Settings& s, const CommonFlags& c) {
    // Neither the worker count nor the output path changes results, so both stay out of the echoed configuration.
    if (auto t = c.threads ? c.threads : s.file.get("threads")) {
        const long long n = parse_int(*t, "threads");
        if (n < 1) throw UsageError("threads must be at least 1");
        set_threads(static_cast<int>(n));
    }
    return c.out ? *c.out : s.file.get("out").value_or("");
}

void write_echo(std::ostream& os, const Settings& s) {
    for (const auto& [k, v] : s.echo) os << "# " << k << "=" << v << "\n";
}

// kernel ---------------------------------------------------------------------------------------

struct KernelFlags {
    CommonFlags common;
    std::optional<std::string> group, time, format;
    std::vector<std::string> points;
};

const std::vector<std::string> kQuadratureKeys = {"b_min",     "b_max",  "b_nodes", "r_panels", "r_nodes",
                                                  "r_cut",     "phi_nodes", "oscillations_per_panel",
                                                  "eig_rel_tol", "mode_tol", "tail_tol", "full_domain",
                                                  "embedded_estimate"};

int run_kernel(const KernelFlags& f) {
    std::vector<std::string> keys = {"group", "point", "time", "format"};
    keys.insert(keys.end(), kQuadratureKeys.begin(), kQuadratureKeys.end());
    const ConfigFile file = load_config(f.common, keys);
    Settings s{file};
    const std::string out = apply_common(s, f.common);
    const auto group = s.raw("group", f.group);
    if (!group) throw UsageError("kernel: --group is required");
    const GroupTag tag = parse_group(*group);

    std::vector<std::string> point_text = f.points;
    if (point_text.empty())
        if (auto p = file.get("point")) point_text.push_back(*p);
    if (point_text.empty()) throw UsageError("kernel: --point is required");
    std::vector<GroupPoint> points;
    for (const std::string& p : point_text) {
        s.echo.emplace_back("point", p);
        const std::vector<double> c = parse_list(p, "point");
        if (static_cast<int>(c.size()) != dimension(tag))
            throw UsageError(fmt::format("kernel: group {} needs {} coordinates, got {}", *group, dimension(tag), c.size()));
        GroupPoint g{tag, {}};
        std::copy(c.begin(), c.end(), g.x.begin());
        points.push_back(g);
    }
    const auto time_text = s.raw("time", f.time);
    if (!time_text) throw UsageError("kernel: --time is required");
    const std::vector<double> times = parse_list(*time_text, "time");
    for (double t : times)
        if (!(t > 0.0)) throw UsageError("kernel: time must be positive");
    const std::string format = s.raw("format", f.format).value_or("csv");
    if (format != "csv" && format != "json") throw UsageError("kernel: format must be csv or json");

    QuadratureConfig q = default_quadrature(tag);
    q.b_min = s.real("b_min", std::nullopt, q.b_min);
    q.b_max = s.real("b_max", std::nullopt, q.b_max);
    q.b_nodes = static_cast<int>(s.integer("b_nodes", std::nullopt, q.b_nodes));
    q.r_panels = static_cast<int>(s.integer("r_panels", std::nullopt, q.r_panels));
    q.r_nodes = static_cast<int>(s.integer("r_nodes", std::nullopt, q.r_nodes));
    q.r_cut = s.real("r_cut", std::nullopt, q.r_cut);
    q.phi_nodes = static_cast<int>(s.integer("phi_nodes", std::nullopt, q.phi_nodes));
    q.oscillations_per_panel = s.real("oscillations_per_panel", std::nullopt, q.oscillations_per_panel);
    q.eig_rel_tol = s.real("eig_rel_tol", std::nullopt, q.eig_rel_tol);
    q.mode_tol = s.real("mode_tol", std::nullopt, q.mode_tol);
    q.tail_tol = s.real("tail_tol", std::nullopt, q.tail_tol);
    q.full_domain = s.boolean("full_domain", q.full_domain);
    q.embedded_estimate = s.boolean("embedded_estimate", q.embedded_estimate);
    try {
        validate(q);
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }

    AtomicOutput o(out);
    std::vector<std::pair<GroupPoint, std::pair<double, KernelResult>>> rows;
    for (const GroupPoint& x : points)
        for (double t : times) {
            const KernelResult k = heat_kernel(x, t, q);
            if (k.tail_warning)
                std::cerr << fmt::format("warning: tail estimate {:.3g} exceeds tail_tol at {} t={}\n", k.tail_estimate,
                                         to_string(x), t);
            rows.push_back({x, {t, k}});
        }
    std::ostream& os = o.stream();
    const int d = dimension(tag);
    if (format == "csv") {
        os << "# schema=1\n";
        write_echo(os, s);
        os << "group,t";
        for (int i = 0; i < d; ++i) os << ",x" << i + 1;
        os << ",value,imag_residual,tail_estimate,node_count,wall_ms\n";
        for (const auto& [x, tk] : rows) {
            const auto& [t, k] = tk;
            os << group_name(tag) << "," << num(t);
            for (int i = 0; i < d; ++i) os << "," << num(x.x[i]);
            os << "," << num(k.value) << "," << num(k.imag_residual) << "," << num(k.tail_estimate) << "," << k.node_count
               << "," << num(k.wall_ms) << "\n";
        }
    } else {
        os << "{\n  \"schema\": 1,\n  \"config\": {";
        for (std::size_t i = 0; i < s.echo.size(); ++i)
            os << (i ? ", " : "") << quote(s.echo[i].first) << ": " << quote(s.echo[i].second);
        os << "},\n  \"rows\": [\n";
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const auto& [x, tk] = rows[r];
            const auto& [t, k] = tk;
            os << "    {\"group\": " << quote(group_name(tag)) << ", \"t\": " << num(t) << ", \"point\": [";
            for (int i = 0; i < d; ++i) os << (i ? ", " : "") << num(x.x[i]);
            os << "], \"value\": " << num(k.value) << ", \"imag_residual\": " << num(k.imag_residual)
               << ", \"tail_estimate\": " << num(k.tail_estimate) << ", \"node_count\": " << k.node_count
               << ", \"wall_ms\": " << num(k.wall_ms) << ", \"tail_warning\": " << (k.tail_warning ? "true" : "false") << "}"
               << (r + 1 < rows.size() ? "," : "") << "\n";
        }
        os << "  ]\n}\n";
    }
    o.commit();
    return 0;
}

// propagator -----------------------------------------------------------------------------------

struct PropagatorFlags {
    CommonFlags common;
    std::optional<std::string> alpha, beta, time, grid, modes, stride;
};

int run_propagator(const PropagatorFlags& f) {
    const ConfigFile file = load_config(f.common, {"alpha", "beta", "time", "grid", "modes", "stride"});
    Settings s{file};
    const std::string out = apply_common(s, f.common);
    const auto time_text = s.raw("time", f.time);
    if (!time_text) throw UsageError("propagator: --time is required");
    const double T = parse_double(*time_text, "time");
    if (!(T > 0.0)) throw UsageError("propagator: time must be positive");
    const QuarticParams p{s.real("alpha", f.alpha, 1.0), s.real("beta", f.beta, 0.0), 1.0};
    ThetaGrid grid = default_grid(p);
    if (auto g = s.raw("grid", f.grid)) {
        const std::vector<double> v = parse_list(*g, "grid");
        if (v.size() != 2 || !(v[0] > 0.0) || v[1] < 16 || v[1] != std::floor(v[1]))
            throw UsageError("propagator: --grid must be L,n with L > 0 and integer n >= 16");
        grid = {v[0], static_cast<int>(v[1])};
    }
    const long long stride = s.integer("stride", f.stride, 1);
    if (stride < 1) throw UsageError("propagator: stride must be at least 1");
    const int cap = std::max(10, grid.n / 4);
    long long k = s.integer("modes", f.modes, 0);
    if (k < 0 || k > grid.n) throw UsageError("propagator: modes must be between 1 and n");

    AtomicOutput o(out);
    SpectralDecomposition dec;
    if (k > 0) {
        dec = decompose(p, grid, static_cast<int>(k));
    } else {
        // Smallest mode count with exp(-(E_k - E_0) T) below 1e-12, capped at n/4 (at least 10 for the header).
        int kk = std::min(cap, 32);
        while (true) {
            dec = decompose(p, grid, kk);
            const double tail = std::exp(-(dec.energies.back() - dec.energies.front()) * T);
            if (tail < 1e-12 || kk >= cap) break;
            kk = std::min(cap, 2 * kk);
        }
    }
    std::ostream& os = o.stream();
    os << "# schema=1\n";
    write_echo(os, s);
    os << "# grid=" << num(grid.L) << "," << grid.n << " modes=" << dec.k() << "\n";
    os << "# E0..E9=";
    const SpectralDecomposition& header = dec.k() >= 10 ? dec : decompose(p, grid, std::min(10, grid.n));
    for (int j = 0; j < std::min(10, header.k()); ++j) os << (j ? "," : "") << num(header.energies[j]);
    os << "\ntheta,theta_bar,value\n";
    const std::vector<double> m = psi_matrix(dec, T);
    for (int a = 0; a < grid.n; a += static_cast<int>(stride))
        for (int b = 0; b < grid.n; b += static_cast<int>(stride))
            os << num(grid.theta(a)) << "," << num(grid.theta(b)) << "," << num(m[static_cast<std::size_t>(a) * grid.n + b]) << "\n";
    o.commit();
    return 0;
}

// mc -------------------------------------------------------------------------------------------

struct McFlags {
    CommonFlags common;
    std::optional<std::string> group, time, paths, steps, seed, scheme;
};

int run_mc(const McFlags& f) {
    const ConfigFile file = load_config(f.common, {"group", "time", "paths", "steps", "seed", "scheme"});
    Settings s{file};
    const std::string out = apply_common(s, f.common);
    SimConfig c;
    const auto group = s.raw("group", f.group);
    if (!group) throw UsageError("mc: --group is required");
    c.tag = parse_group(*group);
    c.t = s.real("time", f.time, c.t);
    c.n_paths = s.integer("paths", f.paths, c.n_paths);
    c.n_steps = static_cast<int>(s.integer("steps", f.steps, c.n_steps));
    const long long seed = s.integer("seed", f.seed, static_cast<long long>(c.seed));
    if (seed < 0) throw UsageError("mc: seed must be non-negative");
    c.seed = static_cast<std::uint64_t>(seed);
    const std::string scheme = s.raw("scheme", f.scheme).value_or("ito");
    if (scheme != "ito" && scheme != "heun") throw UsageError("mc: scheme must be ito or heun");
    c.scheme = scheme == "ito" ? Scheme::ItoCorrected : Scheme::Heun;
    try {
        validate(c);
    } catch (const ContractViolation& e) {
        throw UsageError(e.what());
    }

    AtomicOutput o(out);
    const SampleSet samples = simulate(c);
    const Moments m = moments(samples);
    std::ostringstream summary;
    for (int i = 0; i < dimension(c.tag); ++i)
        summary << "# x" << i + 1 << " mean=" << num(m.mean[i]) << " mean_se=" << num(m.mean_se[i]) << " var=" << num(m.var[i])
                << " var_se=" << num(m.var_se[i]) << "\n";
    std::ostringstream data;
    write_csv(samples, data);
    std::string body = data.str();
    body.erase(0, body.find('\n') + 1);  // write_csv starts with its own schema line
    std::ostream& os = o.stream();
    os << "# schema=1\n";
    write_echo(os, s);
    os << summary.str() << body;
    if (!out.empty()) std::cout << summary.str();
    o.commit();
    return 0;
}

// validate -------------------------------------------------------------------------------------

int run_validate(const std::string& suite, const std::string& report) {
    using namespace nilheat::checks;
    std::vector<std::pair<std::string, std::function<SuiteResult()>>> plan;
    auto want = [&](const char* s) { return suite == "all" || suite == s; };
    if (want("group")) plan.emplace_back("group", group_suite);
    if (want("rep")) plan.emplace_back("rep", representation_suite);
    if (want("propagator")) plan.emplace_back("propagator", propagator_suite);
    if (want("kernel")) {
        plan.emplace_back("kernel-g4", engel_kernel_suite);
        plan.emplace_back("kernel-g5", cartan_kernel_suite);
    }
    if (want("mc")) {
        plan.emplace_back("mc", cross_validation_suite);
        plan.emplace_back("determinism", determinism_suite);
    }
    AtomicOutput o(report);
    bool all = true;
    std::ostringstream json;
    json << "{\n  \"schema\": 1,\n  \"suites\": [\n";
    for (std::size_t i = 0; i < plan.size(); ++i) {
        const SuiteResult r = run_suite(plan[i].first, plan[i].second);
        all = all && r.passed();
        for (const CheckResult& c : r.checks)
            std::cout << fmt::format("{:<5} {:<12} {}{}{}\n", c.gating ? (c.pass ? "PASS" : "FAIL") : "INFO", r.name, c.name,
                                     c.detail.empty() ? "" : ": ", c.detail);
        std::cout << fmt::format("{:<5} {:<12} suite finished in {:.1f} s\n", r.passed() ? "PASS" : "FAIL", r.name, r.seconds)
                  << std::flush;
        json << "    {\"name\": " << quote(r.name) << ", \"passed\": " << (r.passed() ? "true" : "false")
             << ", \"seconds\": " << num(r.seconds) << ", \"checks\": [\n";
        for (std::size_t k = 0; k < r.checks.size(); ++k) {
            const CheckResult& c = r.checks[k];
            json << "      {\"name\": " << quote(c.name) << ", \"status\": "
                 << quote(c.gating ? (c.pass ? "pass" : "fail") : "info") << ", \"detail\": " << quote(c.detail) << "}"
                 << (k + 1 < r.checks.size() ? "," : "") << "\n";
        }
        json << "    ]}" << (i + 1 < plan.size() ? "," : "") << "\n";
    }
    json << "  ],\n  \"passed\": " << (all ? "true" : "false") << "\n}\n";
    o.stream() << json.str();
    o.commit();
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hypoelliptic heat kernels on the Engel and Cartan groups"};
    app.require_subcommand(1);

    KernelFlags kf;
    CLI::App* kernel = app.add_subcommand("kernel", "evaluate p_t at group points");
    kernel->add_option("--group", kf.group, "g4 or g5");
    kernel->add_option("--point", kf.points, "comma separated coordinates; repeat for several points");
    kernel->add_option("--time", kf.time, "t, or a comma separated list");
    kernel->add_option("--format", kf.format, "csv or json");
    add_common(kernel, kf.common);

    PropagatorFlags pf;
    CLI::App* prop = app.add_subcommand("propagator", "quartic oscillator heat kernel on a theta grid");
    prop->add_option("--alpha", pf.alpha);
    prop->add_option("--beta", pf.beta);
    prop->add_option("--time", pf.time);
    prop->add_option("--grid", pf.grid, "L,n");
    prop->add_option("--modes", pf.modes, "number of eigenpairs (default from the time)");
    prop->add_option("--stride", pf.stride, "write every stride-th grid node");
    add_common(prop, pf.common);

    McFlags mf;
    CLI::App* mc = app.add_subcommand("mc", "simulate the hypoelliptic diffusion");
    mc->add_option("--group", mf.group, "g4 or g5");
    mc->add_option("--time", mf.time);
    mc->add_option("--paths", mf.paths);
    mc->add_option("--steps", mf.steps);
    mc->add_option("--seed", mf.seed);
    mc->add_option("--scheme", mf.scheme, "ito or heun");
    add_common(mc, mf.common);

    std::string suite = "all", report = "validate_report.json";
    std::optional<std::string> vthreads;
    CLI::App* val = app.add_subcommand("validate", "run the validation suites");
    val->add_option("--suite", suite)->check(CLI::IsMember({"group", "rep", "propagator", "kernel", "mc", "all"}));
    val->add_option("--report", report, "JSON report path");
    val->add_option("--threads", vthreads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n" << app.help();
        return 2;
    }

    try {
        if (*kernel) return run_kernel(kf);
        if (*prop) return run_propagator(pf);
        if (*mc) return run_mc(mf);
        if (vthreads) {
            const long long n = parse_int(*vthreads, "threads");
            if (n < 1) throw UsageError("threads must be at least 1");
            set_threads(static_cast<int>(n));
        }
        return run_validate(suite, report);
    } catch (const UsageError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 2;
    } catch (const ContractViolation& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error[io]: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error[runtime]: " << e.what() << "\n";
        return 1;
    }
}
