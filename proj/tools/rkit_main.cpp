// rkit: rearrangements, energies, constrained minimizers and the inequality harness.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rkit/config.hpp"
#include "rkit/energy.hpp"
#include "rkit/field_io.hpp"
#include "rkit/layer_cake.hpp"
#include "rkit/minimize.hpp"
#include "rkit/rearrange.hpp"
#include "rkit/verify.hpp"

#ifndef RKIT_VERSION
#define RKIT_VERSION "0.0.0"
#endif

using json = nlohmann::ordered_json;

namespace {

// Usage-class failure: maps to exit status 2.
struct UsageError : rkit::Error {
    using rkit::Error::Error;
};

std::string utc_timestamp() {
    const std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw rkit::ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool is_2d_csv(const std::string& path) {
    const std::string text = read_text(path);
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        std::string c;
        for (char ch : line)
            if (ch != ' ' && ch != '\r') c += ch;
        if (c.empty() || c[0] == '#') continue;
        return c == "x,y,value";
    }
    return false;
}

// The reproducible part of a run.  Raw argv and wall-clock time go under
// "timing", which the determinism contract excludes.
struct Manifest {
    std::string command;
    json config = json::object();
    std::uint64_t seed = 0;
    json grid = json::object();

    json to_json() const {
        json m;
        m["tool"] = "rkit";
        m["version"] = RKIT_VERSION;
        m["command"] = command;
        m["config"] = config;
        m["seed"] = seed;
        m["grid"] = grid;
        return m;
    }
};

json timing_block(const std::vector<std::string>& argv, double elapsed) {
    json t;
    std::string cl;
    for (const auto& a : argv) cl += (cl.empty() ? "" : " ") + a;
    t["command_line"] = cl;
    t["timestamp"] = utc_timestamp();
    t["elapsed_seconds"] = elapsed;
    return t;
}

json energy_json(const rkit::EnergyValue& e) {
    return json{{"kinetic", e.kinetic}, {"potential", e.potential}, {"total", e.total}};
}

json spec_snapshot(const rkit::KeyValues& kv) {
    json j = json::object();
    for (const auto& [k, v] : kv) j[k] = v;
    return j;
}

// "L=30,h=0.05" (optionally "Ly=..")
std::map<std::string, double> parse_grid(const std::string& s) {
    std::map<std::string, double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw UsageError("--grid expects key=value pairs, got '" + tok + "'");
        const std::string key = tok.substr(0, eq);
        char* end = nullptr;
        const std::string val = tok.substr(eq + 1);
        const double x = std::strtod(val.c_str(), &end);
        if (val.empty() || *end != '\0' || !(x > 0.0)) throw UsageError("--grid: bad value for " + key);
        out[key] = x;
    }
    if (!out.count("L") || !out.count("h")) throw UsageError("--grid needs L and h");
    return out;
}

std::uint64_t effective_seed(std::uint64_t flag) {
    if (const char* env = std::getenv("RKIT_SEED"); env && *env) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (*end != '\0') throw UsageError("RKIT_SEED must be a non-negative integer");
        return v;
    }
    return flag;
}

// ---------------------------------------------------------------------------

struct RearrangeArgs {
    std::string kind;
    std::string input;
    std::string second;
    std::string output;
};

int run_rearrange(const RearrangeArgs& a) {
    const bool two_d = is_2d_csv(a.input);
    if (a.kind == "coupled") {
        if (a.second.empty()) throw UsageError("--kind coupled needs --second");
        if (two_d != is_2d_csv(a.second)) throw rkit::GridError("inputs differ in dimension");
    } else if (!a.second.empty()) {
        throw UsageError("--second is only used with --kind coupled");
    }
    std::size_t rows = 0;
    if (two_d) {
        const auto u = rkit::modulus(rkit::load_field2d_csv(a.input));
        rkit::Field2D out;
        if (a.kind == "steiner" || a.kind == "symmetric") out = rkit::steiner_rearrangement(u);
        else if (a.kind == "schwarz") out = rkit::schwarz_rearrangement(u);
        else if (a.kind == "coupled")
            out = rkit::coupled_rearrangement(u, rkit::modulus(rkit::load_field2d_csv(a.second)));
        else throw rkit::UnsupportedGridError("--kind " + a.kind + " needs a 1D input");
        rkit::save_field_csv(a.output, out);
        rows = out.values.size();
    } else {
        const auto u = rkit::modulus(rkit::load_field1d_csv(a.input));
        rkit::Field1D out;
        if (a.kind == "decreasing") out = rkit::decreasing_rearrangement(u);
        else if (a.kind == "symmetric" || a.kind == "steiner") out = rkit::symmetric_rearrangement_1d(u);
        else if (a.kind == "schwarz") out = rkit::schwarz_rearrangement(u);
        else out = rkit::coupled_rearrangement(u, rkit::modulus(rkit::load_field1d_csv(a.second)));
        rkit::save_field_csv(a.output, out);
        rows = out.values.size();
    }
    std::cout << a.kind << " rearrangement: " << rows << " cells -> " << a.output << "\n";
    return 0;
}

struct EnergyArgs {
    std::string spec;
    std::string input;
    std::string second;
    std::string out;
};

int run_energy(const EnergyArgs& a, const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto kv = rkit::load_key_values(a.spec);
    const auto spec = rkit::spec_from(kv);
    const bool two_d = is_2d_csv(a.input);
    rkit::EnergyValue e;
    Manifest m;
    m.command = "energy";
    m.config = spec_snapshot(kv);
    if (std::holds_alternative<rkit::CoupledGSpec>(spec)) {
        if (a.second.empty()) throw UsageError("a coupled spec needs --second");
        const auto& g = std::get<rkit::CoupledGSpec>(spec);
        if (two_d) e = rkit::system_energy(rkit::load_field2d_csv(a.input), rkit::load_field2d_csv(a.second), g);
        else e = rkit::system_energy(rkit::load_field1d_csv(a.input), rkit::load_field1d_csv(a.second), g);
    } else {
        if (!a.second.empty()) throw UsageError("--second needs a coupled spec");
        const auto& s = std::get<rkit::NonlinearitySpec>(spec);
        if (two_d) {
            const auto u = rkit::load_field2d_csv(a.input);
            m.grid = json{{"nx", u.grid.nx}, {"ny", u.grid.ny}, {"hx", u.grid.hx}, {"hy", u.grid.hy}};
            e = rkit::scalar_energy(u, s);
        } else {
            const auto u = rkit::load_field1d_csv(a.input);
            m.grid = json{{"n", u.grid.n}, {"h", u.grid.h}, {"x0", u.grid.x0}};
            e = rkit::scalar_energy(u, s);
        }
    }
    json doc;
    doc["manifest"] = m.to_json();
    doc["energy"] = energy_json(e);
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    doc["timing"] = timing_block(argv, dt);
    const std::string text = doc.dump(2) + "\n";
    if (!a.out.empty()) rkit::write_file_atomic(a.out, text);
    std::cout << text;
    return 0;
}

struct MinimizeArgs {
    std::string spec;
    double alpha = 1.0;
    double beta = 0.0;
    std::string grid;
    double h = 0.05;
    std::string out;
    std::string field_out;
    std::string second_out;
    std::string scheme = "semi-implicit";
    double tau = 0.0;
    int max_iter = 20000;
    double energy_tol = 1e-13;
};

rkit::FlowConfig flow_from(const MinimizeArgs& a) {
    rkit::FlowConfig cfg;
    if (a.scheme == "explicit") cfg.scheme = rkit::FlowConfig::Scheme::Explicit;
    else if (a.scheme != "semi-implicit") throw UsageError("--scheme is explicit or semi-implicit");
    cfg.tau = a.tau;
    cfg.max_iter = a.max_iter;
    cfg.energy_tol = a.energy_tol;
    return cfg;
}

template <class R>
json result_json(const R& r) {
    json j;
    j["energy"] = energy_json(r.energy);
    j["multiplier"] = r.multiplier;
    j["iterations"] = r.iterations;
    j["converged"] = r.converged;
    j["monotone_energy"] = r.monotone_energy;
    j["diagnosis"] = r.diagnosis;
    j["boundary_mass_fraction"] = r.boundary_mass_fraction;
    return j;
}

int run_minimize(const MinimizeArgs& a, const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto kv = rkit::load_key_values(a.spec);
    const auto spec = rkit::spec_from(kv);
    const auto cfg = flow_from(a);
    const bool coupled = std::holds_alternative<rkit::CoupledGSpec>(spec);
    const int dim = coupled ? std::get<rkit::CoupledGSpec>(spec).dim
                            : std::get<rkit::NonlinearitySpec>(spec).dim();
    if (!coupled && a.beta != 0.0) throw UsageError("--beta needs a coupled spec");

    Manifest m;
    m.command = "minimize";
    m.config = spec_snapshot(kv);
    m.config["alpha"] = rkit::format_real(a.alpha);
    m.config["beta"] = rkit::format_real(a.beta);
    m.config["scheme"] = a.scheme;
    m.config["tau"] = rkit::format_real(a.tau);
    m.config["max_iter"] = std::to_string(a.max_iter);
    m.config["energy_tol"] = rkit::format_real(a.energy_tol);

    json res;
    std::vector<std::string> fields_csv;
    double energy = 0.0;
    bool converged = false;
    const rkit::ConstraintSpec c{a.alpha, a.beta};
    if (dim == 2) {
        if (a.grid.empty()) throw UsageError("2D runs need --grid L=..,h=..");
        const auto g = parse_grid(a.grid);
        const double L = g.at("L"), h = g.at("h");
        const double Ly = g.count("Ly") ? g.at("Ly") : L;
        const auto n = static_cast<std::size_t>(std::llround(L / h));
        const auto ny = static_cast<std::size_t>(std::llround(Ly / h));
        const auto grid = rkit::Grid2D::centered(n, ny, h, h);
        m.grid = json{{"nx", n}, {"ny", ny}, {"h", h}};
        const auto r = coupled ? rkit::minimize_system(std::get<rkit::CoupledGSpec>(spec), c, grid, cfg)
                               : rkit::minimize_scalar(std::get<rkit::NonlinearitySpec>(spec), c, grid, cfg);
        res = result_json(r);
        for (const auto& f : r.fields) fields_csv.push_back(rkit::format_field_csv(f));
        energy = r.energy.total;
        converged = r.converged;
        if (!coupled)
            res["el_residual"] = rkit::euler_lagrange_residual(r.fields[0], r.multiplier[0],
                                                               std::get<rkit::NonlinearitySpec>(spec));
    } else {
        rkit::MinimizeResult r;
        if (a.grid.empty()) {
            r = coupled ? rkit::minimize_system_auto(std::get<rkit::CoupledGSpec>(spec), c, a.h, cfg)
                        : rkit::minimize_scalar_auto(std::get<rkit::NonlinearitySpec>(spec), c, a.h, cfg);
        } else {
            const auto g = parse_grid(a.grid);
            const auto grid = rkit::Grid1D::symmetric_box(g.at("L"), g.at("h"));
            r = coupled ? rkit::minimize_system(std::get<rkit::CoupledGSpec>(spec), c, grid, cfg)
                        : rkit::minimize_scalar(std::get<rkit::NonlinearitySpec>(spec), c, grid, cfg);
        }
        const auto& g = r.fields[0].grid;
        m.grid = json{{"n", g.n}, {"h", g.h}, {"L", g.length()}, {"auto_box", a.grid.empty()}};
        res = result_json(r);
        if (coupled) {
            const auto [ru, rv] = rkit::system_el_residual(r.fields[0], r.fields[1], r.multiplier[0],
                                                           r.multiplier[1], std::get<rkit::CoupledGSpec>(spec));
            res["el_residual"] = {ru, rv};
        } else {
            res["el_residual"] = rkit::euler_lagrange_residual(r.fields[0], r.multiplier[0],
                                                               std::get<rkit::NonlinearitySpec>(spec));
        }
        for (const auto& f : r.fields) fields_csv.push_back(rkit::format_field_csv(f));
        energy = r.energy.total;
        converged = r.converged;
    }

    json doc;
    doc["manifest"] = m.to_json();
    doc["result"] = res;
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    doc["timing"] = timing_block(argv, dt);
    const std::string text = doc.dump(2) + "\n";
    if (!a.out.empty()) rkit::write_file_atomic(a.out, text);
    if (!a.field_out.empty()) rkit::write_file_atomic(a.field_out, fields_csv[0]);
    if (!a.second_out.empty() && fields_csv.size() > 1) rkit::write_file_atomic(a.second_out, fields_csv[1]);
    std::cout << text;
    std::printf("E = %.10g (%s)\n", energy, converged ? "converged" : "not converged");
    return 0;
}

struct SweepArgs {
    std::string spec;
    std::string alphas;
    std::string grid;
    double h = 0.05;
    std::string out;
    std::string json_out;
};

int run_sweep(const SweepArgs& a, const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    rkit::KeyValues kv;
    if (a.spec.empty()) kv = {{"kind", "power"}, {"p", "3"}, {"dim", "1"}};
    else kv = rkit::load_key_values(a.spec);
    const auto spec = rkit::nonlinearity_from(kv);
    std::vector<double> alphas;
    try {
        alphas = rkit::parse_real_list(a.alphas);
    } catch (const rkit::ParseError& e) {
        throw UsageError(std::string("--alphas: ") + e.what());
    }
    std::optional<rkit::Grid1D> grid;
    double h = a.h;
    if (!a.grid.empty()) {
        const auto g = parse_grid(a.grid);
        grid = rkit::Grid1D::symmetric_box(g.at("L"), g.at("h"));
        h = g.at("h");
    }
    const auto rows = rkit::energy_curve_sweep(spec, alphas, grid, h);
    std::vector<std::vector<double>> table;
    for (const auto& r : rows) table.push_back({r.alpha, r.energy});
    rkit::emit_plot_data(a.out, {"alpha", "energy"}, table);

    bool ok = true;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        ok = ok && rows[k].converged;
        std::printf("alpha=%-8g E=%-16.10g mu=%-12.6g iters=%d%s\n", rows[k].alpha, rows[k].energy,
                    rows[k].multiplier, rows[k].iterations, rows[k].converged ? "" : " (not converged)");
    }
    if (!a.json_out.empty()) {
        Manifest m;
        m.command = "sweep";
        m.config = spec_snapshot(kv);
        m.config["alphas"] = a.alphas;
        m.grid = a.grid.empty() ? json{{"h", h}, {"auto_box", true}} : json{{"grid", a.grid}};
        json doc;
        doc["manifest"] = m.to_json();
        json jr = json::array();
        for (const auto& r : rows)
            jr.push_back(json{{"alpha", r.alpha}, {"energy", r.energy}, {"multiplier", r.multiplier},
                              {"iterations", r.iterations}, {"converged", r.converged}});
        doc["rows"] = jr;
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        doc["timing"] = timing_block(argv, dt);
        rkit::write_file_atomic(a.json_out, doc.dump(2) + "\n");
    }
    return ok ? 0 : 1;
}

struct VerifyArgs {
    std::vector<std::string> suites;
    std::uint64_t seed = 7;
    double h = 0.05;
    std::string out;
    int jobs = 1;
    int field_count = 20;
    std::string p_list = "1,2,3";
};

int run_verify(const VerifyArgs& a, const std::vector<std::string>& argv) {
    const auto t0 = std::chrono::steady_clock::now();
    rkit::SuiteConfig cfg;
    cfg.seed = effective_seed(a.seed);
    cfg.h = a.h;
    cfg.jobs = a.jobs;
    cfg.field_count = a.field_count;
    try {
        cfg.p_list = rkit::parse_real_list(a.p_list);
    } catch (const rkit::ParseError& e) {
        throw UsageError(std::string("--p: ") + e.what());
    }
    for (const auto& s : a.suites) {
        std::stringstream ss(s);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.suites.push_back(tok);
    }
    for (const auto& s : cfg.suites)
        if (s != "all" && std::find(rkit::suite_names().begin(), rkit::suite_names().end(), s) ==
                              rkit::suite_names().end())
            throw UsageError("unknown suite '" + s + "'");

    const auto res = rkit::run_all(cfg);

    Manifest m;
    m.command = "verify";
    m.seed = cfg.seed;
    std::string suites;
    for (const auto& s : cfg.suites) suites += (suites.empty() ? "" : ",") + s;
    m.config = json{{"suite", suites.empty() ? "all" : suites},
                    {"field_count", cfg.field_count},
                    {"p_list", cfg.p_list},
                    {"strict_delta_rule", cfg.strict_delta_rule}};
    m.grid = json{{"h", cfg.h}};

    std::size_t fails = 0, inconclusive = 0;
    for (const auto& r : res.reports) {
        if (r.status == "fail") ++fails;
        if (r.status == "inconclusive") ++inconclusive;
        std::printf("%-14s %s\n", r.status.c_str(), r.check_id.c_str());
    }
    std::printf("%zu checks, %zu failed, %zu inconclusive\n", res.reports.size(), fails, inconclusive);

    if (!a.out.empty()) {
        json doc;
        doc["manifest"] = m.to_json();
        doc["reports"] = json::parse(rkit::reports_to_json(res.reports, -1));
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json t = timing_block(argv, dt);
        t["jobs"] = cfg.jobs;
        doc["timing"] = t;
        rkit::write_file_atomic(a.out, doc.dump(2) + "\n");
    }
    return res.all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv, argv + argc);
    CLI::App app{"rkit: coupled rearrangement toolkit"};
    app.set_help_flag("--help", "print help");
    app.require_subcommand(1);
    app.set_version_flag("--version", RKIT_VERSION);

    RearrangeArgs ra;
    auto* rearrange = app.add_subcommand("rearrange", "rearrange a field read from CSV");
    rearrange->add_option("--kind", ra.kind)
        ->required()
        ->check(CLI::IsMember({"decreasing", "symmetric", "steiner", "schwarz", "coupled"}));
    rearrange->add_option("--input", ra.input)->required();
    rearrange->add_option("--second", ra.second);
    rearrange->add_option("--output", ra.output)->required();

    EnergyArgs ea;
    auto* energy = app.add_subcommand("energy", "evaluate the energy of a field (pair)");
    energy->add_option("--spec", ea.spec)->required();
    energy->add_option("--input", ea.input)->required();
    energy->add_option("--second", ea.second);
    energy->add_option("--out", ea.out);

    MinimizeArgs ma;
    auto* minimize = app.add_subcommand("minimize", "mass-constrained ground state");
    minimize->add_option("--spec", ma.spec)->required();
    minimize->add_option("--alpha", ma.alpha)->required();
    minimize->add_option("--beta", ma.beta);
    minimize->add_option("--grid", ma.grid, "L=..,h=.. (omit for an auto-sized 1D box)");
    minimize->add_option("--h", ma.h, "spacing of the auto-sized box");
    minimize->add_option("--out", ma.out);
    minimize->add_option("--field-out", ma.field_out);
    minimize->add_option("--second-out", ma.second_out);
    minimize->add_option("--scheme", ma.scheme);
    minimize->add_option("--tau", ma.tau);
    minimize->add_option("--max-iter", ma.max_iter);
    minimize->add_option("--energy-tol", ma.energy_tol);

    SweepArgs sa;
    auto* sweep = app.add_subcommand("sweep", "energy curve alpha -> E_alpha");
    sweep->add_option("--spec", sa.spec, "defaults to the cubic 1D power law");
    sweep->add_option("--alphas", sa.alphas)->required();
    sweep->add_option("--grid", sa.grid);
    sweep->add_option("--h", sa.h);
    sweep->add_option("--out", sa.out)->required();
    sweep->add_option("--json-out", sa.json_out);

    VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "run the inequality suites");
    verify->add_option("--suite", va.suites)->required();
    verify->add_option("--seed", va.seed);
    verify->add_option("--h", va.h)->check(CLI::PositiveNumber);
    verify->add_option("--out", va.out);
    verify->add_option("--jobs", va.jobs)->check(CLI::Range(1, 256));
    verify->add_option("--field-count", va.field_count)->check(CLI::Range(1, 100000));
    verify->add_option("--p", va.p_list);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*rearrange) return run_rearrange(ra);
        if (*energy) return run_energy(ea, args);
        if (*minimize) return run_minimize(ma, args);
        if (*sweep) return run_sweep(sa, args);
        if (*verify) return run_verify(va, args);
    } catch (const UsageError& e) {
        std::fprintf(stderr, "rkit: %s\n", e.what());
        return 2;
    } catch (const rkit::GridError& e) {
        std::fprintf(stderr, "rkit: grid error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "rkit: %s\n", e.what());
        return 1;
    }
    return 2;
}
