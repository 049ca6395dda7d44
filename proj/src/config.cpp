#include "rkit/config.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace rkit {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& raw) {
    const std::string t = trim(raw);
    char* end = nullptr;
    const double x = std::strtod(t.c_str(), &end);
    if (t.empty() || end != t.c_str() + t.size() || !std::isfinite(x))
        throw ParseError("config key '" + key + "': not a number: '" + raw + "'");
    return x;
}

int to_dim(const KeyValues& kv) { return static_cast<int>(kv_real(kv, "dim", 1.0)); }

}  // namespace

KeyValues parse_key_values(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = trim(line.substr(eq + 1));
    }
    return kv;
}

KeyValues load_key_values(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_key_values(ss.str());
}

std::string format_key_values(const KeyValues& kv) {
    std::string out;
    for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
    return out;
}

double kv_real(const KeyValues& kv, const std::string& key, double fallback) {
    const auto it = kv.find(key);
    return it == kv.end() ? fallback : to_real(key, it->second);
}

double kv_real(const KeyValues& kv, const std::string& key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ParseError("config is missing key '" + key + "'");
    return to_real(key, it->second);
}

std::vector<double> parse_real_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(to_real("list", tok));
    return out;
}

NonlinearitySpec nonlinearity_from(const KeyValues& kv) {
    const auto it = kv.find("kind");
    const std::string kind = it == kv.end() ? "power" : it->second;
    if (kind == "power") return NonlinearitySpec::power(kv_real(kv, "p"), to_dim(kv));
    if (kind == "zero") return NonlinearitySpec::zero(to_dim(kv));
    if (kind == "tabulated") {
        const auto s = kv.find("s");
        const auto F = kv.find("F");
        if (s == kv.end() || F == kv.end()) throw ParseError("tabulated spec needs s= and F= lists");
        return NonlinearitySpec::tabulated(parse_real_list(s->second), parse_real_list(F->second),
                                           to_dim(kv));
    }
    throw ParseError("unknown nonlinearity kind '" + kind + "'");
}

CoupledGSpec coupled_from(const KeyValues& kv) {
    CoupledGSpec g;
    g.a1 = kv_real(kv, "a1", g.a1);
    g.r1 = kv_real(kv, "r1", g.r1);
    g.a2 = kv_real(kv, "a2", g.a2);
    g.r2 = kv_real(kv, "r2", g.r2);
    g.beta = kv_real(kv, "beta", g.beta);
    g.gamma1 = kv_real(kv, "gamma1", g.gamma1);
    g.gamma2 = kv_real(kv, "gamma2", g.gamma2);
    g.dim = to_dim(kv);
    g.validate();
    return g;
}

AnySpec spec_from(const KeyValues& kv) {
    const auto it = kv.find("kind");
    if (it != kv.end() && it->second == "coupled") return coupled_from(kv);
    return nonlinearity_from(kv);
}

}  // namespace rkit
