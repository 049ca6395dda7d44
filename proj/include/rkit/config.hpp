#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "rkit/energy.hpp"

namespace rkit {

// Flat key=value text; '#' starts a comment, blank lines are skipped.
using KeyValues = std::map<std::string, std::string>;

KeyValues parse_key_values(const std::string& text);
KeyValues load_key_values(const std::string& path);
std::string format_key_values(const KeyValues& kv);

double kv_real(const KeyValues& kv, const std::string& key, double fallback);
double kv_real(const KeyValues& kv, const std::string& key);
std::vector<double> parse_real_list(const std::string& csv);

// kind=power (p, dim) | kind=tabulated (s, F, dim) | kind=zero (dim)
NonlinearitySpec nonlinearity_from(const KeyValues& kv);
// kind=coupled (a1, r1, a2, r2, beta, gamma1, gamma2, dim)
CoupledGSpec coupled_from(const KeyValues& kv);

using AnySpec = std::variant<NonlinearitySpec, CoupledGSpec>;
AnySpec spec_from(const KeyValues& kv);

}  // namespace rkit
