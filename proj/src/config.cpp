#include "asianctmc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace asianctmc::config {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: value of " + section + "." + key +
                           " is not a number: '" + value + "'");
    }
}

int to_int(const std::string& section, const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw config_error("config: value of " + section + "." + key +
                           " is not an integer: '" + value + "'");
    }
}

// Tracks consumption so leftovers can be named.
class SectionReader {
public:
    SectionReader(const ConfigMap& cfg, std::string name) : name_(std::move(name)) {
        auto it = cfg.find(name_);
        if (it != cfg.end()) entries_ = it->second;
    }

    bool has(const std::string& key) const { return entries_.count(key) > 0; }

    std::string take(const std::string& key) {
        auto it = entries_.find(key);
        if (it == entries_.end())
            throw config_error("config: missing required key " + name_ + "." + key);
        consumed_.insert(key);
        return it->second;
    }

    std::string take_or(const std::string& key, const std::string& fallback) {
        auto it = entries_.find(key);
        if (it == entries_.end()) return fallback;
        consumed_.insert(key);
        return it->second;
    }

    double take_double(const std::string& key) { return to_double(name_, key, take(key)); }
    double take_double_or(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        return to_double(name_, key, take(key));
    }
    int take_int_or(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        return to_int(name_, key, take(key));
    }

    void finish() const {
        for (const auto& [key, value] : entries_)
            if (!consumed_.count(key))
                throw config_error("config: unknown key " + name_ + "." + key);
    }

private:
    std::string name_;
    std::map<std::string, std::string> entries_;
    std::set<std::string> consumed_;
};

}  // namespace

ConfigMap parse_config_text(const std::string& text) {
    ConfigMap cfg;
    std::istringstream is(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line = line.substr(0, comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error("config: malformed section header at line " +
                                   std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw config_error("config: empty section name at line " +
                                   std::to_string(lineno));
            cfg[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error("config: expected key=value at line " +
                               std::to_string(lineno));
        if (section.empty())
            throw config_error("config: key outside any section at line " +
                               std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw config_error("config: empty key at line " + std::to_string(lineno));
        if (cfg[section].count(key))
            throw config_error("config: duplicate key " + section + "." + key);
        cfg[section][key] = value;
    }
    return cfg;
}

ConfigMap load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("config: cannot open file '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config_text(buffer.str());
}

void apply_override(ConfigMap& cfg, const std::string& assignment) {
    const auto eq = assignment.find('=');
    const auto dot = assignment.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw config_error("config: override must look like section.key=value, got '" +
                           assignment + "'");
    const std::string section = trim(assignment.substr(0, dot));
    const std::string key = trim(assignment.substr(dot + 1, eq - dot - 1));
    const std::string value = trim(assignment.substr(eq + 1));
    if (section.empty() || key.empty())
        throw config_error("config: override must look like section.key=value, got '" +
                           assignment + "'");
    cfg[section][key] = value;
}

pricing::PricingRequest build_request(const ConfigMap& cfg) {
    static const std::set<std::string> known_sections = {"model", "market", "monitoring",
                                                         "grid", "inversion"};
    for (const auto& [section, entries] : cfg)
        if (!known_sections.count(section))
            throw config_error("config: unknown section [" + section + "]");

    pricing::PricingRequest req;

    SectionReader model(cfg, "model");
    const std::string type = model.take("type");
    if (type == "cir") {
        req.model = models::CirParams{model.take_double("kappa"),
                                      model.take_double("theta_bar"),
                                      model.take_double("sigma"), model.take_double("r")};
    } else if (type == "cev") {
        req.model = models::CevParams{model.take_double("sigma"),
                                      model.take_double("beta"), model.take_double("r")};
    } else if (type == "dejd") {
        req.model = models::DejdParams{model.take_double("sigma"),
                                       model.take_double("lambda"),
                                       model.take_double("p_up"),
                                       model.take_double("eta1"),
                                       model.take_double("eta2"), model.take_double("r")};
    } else if (type == "mjd") {
        req.model = models::MjdParams{
            model.take_double("sigma"), model.take_double("lambda"),
            model.take_double("jump_mean"), model.take_double("jump_std"),
            model.take_double("r")};
    } else if (type == "cgmy") {
        req.model = models::CgmyParams{model.take_double("c"), model.take_double("g"),
                                       model.take_double("m"), model.take_double("y"),
                                       model.take_double("r")};
    } else {
        throw config_error("config: unknown model.type '" + type + "'");
    }
    model.finish();
    models::validate_spec(req.model);

    SectionReader market(cfg, "market");
    req.market.spot = market.take_double("spot");
    req.market.maturity = market.take_double("maturity");
    req.strike = market.take_double("strike");
    req.market.r = models::rate_of(req.model);
    market.finish();

    SectionReader monitoring(cfg, "monitoring");
    const std::string style = monitoring.take("style");
    if (style == "discrete") {
        req.monitoring = pricing::Monitoring::discrete(monitoring.take_int_or("n", 0));
        if (req.monitoring.n < 1)
            throw config_error("config: monitoring.n must be >= 1 for discrete style");
    } else if (style == "continuous") {
        req.monitoring = pricing::Monitoring::cont();
    } else {
        throw config_error("config: monitoring.style must be discrete or continuous");
    }
    monitoring.finish();

    SectionReader grid(cfg, "grid");
    req.grid.n_states =
        static_cast<std::size_t>(grid.take_int_or("n_states", 50));
    if (grid.has("span_low") || grid.has("span_high")) {
        const double lo = grid.take_double("span_low");
        const double hi = grid.take_double("span_high");
        req.grid.span = {lo, hi};
    }
    const std::string placement = grid.take_or("placement", "sinh");
    if (placement == "sinh")
        req.grid.placement = models::Placement::sinh_spot;
    else if (placement == "uniform")
        req.grid.placement = models::Placement::uniform;
    else
        throw config_error("config: grid.placement must be sinh or uniform");
    req.grid.concentration = grid.take_double_or("concentration", req.grid.concentration);
    const std::string boundary = grid.take_or("boundary", "reflecting");
    if (boundary == "reflecting")
        req.grid.boundary = models::Boundary::reflecting;
    else if (boundary == "absorbing")
        req.grid.boundary = models::Boundary::absorbing;
    else
        throw config_error("config: grid.boundary must be reflecting or absorbing");
    req.grid.jump_mass_tol = grid.take_double_or("jump_mass_tol", req.grid.jump_mass_tol);
    grid.finish();

    SectionReader inv(cfg, "inversion");
    req.inversion.a_param = inv.take_double_or("a_param", req.inversion.a_param);
    req.inversion.series_terms = inv.take_int_or("series_terms", req.inversion.series_terms);
    req.inversion.euler_terms = inv.take_int_or("euler_terms", req.inversion.euler_terms);
    req.inversion.warn_cap = inv.take_double_or("warn_cap", req.inversion.warn_cap);
    inv.finish();

    return req;
}

}  // namespace asianctmc::config
