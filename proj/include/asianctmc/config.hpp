#pragma once

#include <map>
#include <string>
#include <vector>

#include "asianctmc/pricing.hpp"

namespace asianctmc::config {

// Raised for malformed files, unknown keys (named in the message) and
// out-of-range values.
class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Flat sectioned key=value text:
//   [model]      type plus the per-model parameter keys
//   [market]     spot, rate, maturity, strike
//   [monitoring] style = discrete | continuous, n
//   [grid]       n_states, span_low, span_high, placement, concentration,
//                boundary, jump_mass_tol
//   [inversion]  a_param, series_terms, euler_terms, warn_cap
using ConfigMap = std::map<std::string, std::map<std::string, std::string>>;

ConfigMap parse_config_text(const std::string& text);
ConfigMap load_config_file(const std::string& path);

// Applies "section.key=value"; malformed overrides raise config_error.
void apply_override(ConfigMap& cfg, const std::string& assignment);

// Consumes the map into a request; unknown sections or keys are rejected with
// the offending name.
pricing::PricingRequest build_request(const ConfigMap& cfg);

}  // namespace asianctmc::config
