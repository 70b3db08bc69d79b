#include "anthracnose/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace anthracnose {

Method parse_method(std::string_view name) {
    if (name == "zakai") return Method::kZakai;
    if (name == "ks") return Method::kKushnerStratonovich;
    if (name == "discrete") return Method::kDiscrete;
    if (name == "oracle") return Method::kOracle;
    throw ValidationError("methods", "unknown method '" + std::string(name) + "'");
}

std::string method_name(Method m) {
    switch (m) {
        case Method::kZakai: return "zakai";
        case Method::kKushnerStratonovich: return "ks";
        case Method::kDiscrete: return "discrete";
        case Method::kOracle: return "oracle";
    }
    return "unknown";
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto comma = s.find(',', pos);
        out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? s.npos : comma - pos)));
        if (comma == std::string_view::npos) break;
        pos = comma + 1;
    }
    return out;
}

double to_double(const std::string& key, std::string_view v) {
    double x = 0.0;
    // from_chars has no leading '+'
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ValidationError(key, "expected a number, got '" + std::string(v) + "'");
    return x;
}

std::uint64_t to_u64(const std::string& key, std::string_view v) {
    std::uint64_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
        throw ValidationError(key, "expected a non-negative integer, got '" + std::string(v) + "'");
    return x;
}

std::vector<double> to_list(const std::string& key, std::string_view v) {
    std::vector<double> out;
    for (auto item : split_list(v)) out.push_back(to_double(key, item));
    return out;
}

bool to_bool(const std::string& key, std::string_view v) {
    if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "off" || v == "no") return false;
    throw ValidationError(key, "expected true or false");
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, std::string_view)>;

Setter num(double ModelParams::*field) {
    return [field](ScenarioConfig& c, const std::string& k, std::string_view v) { c.params.*field = to_double(k, v); };
}

const std::vector<std::pair<std::string, Setter>>& setters() {
    static const std::vector<std::pair<std::string, Setter>> table = {
        {"v_max", num(&ModelParams::v_max)},
        {"epsilon", num(&ModelParams::epsilon)},
        {"sigma", num(&ModelParams::sigma)},
        {"kappa", num(&ModelParams::kappa)},
        {"b1", num(&ModelParams::b1)},
        {"b2", num(&ModelParams::b2)},
        {"b3", num(&ModelParams::b3)},
        {"c1", num(&ModelParams::c1)},
        {"c2", num(&ModelParams::c2)},
        {"c3", num(&ModelParams::c3)},
        {"d1", num(&ModelParams::d1)},
        {"d2", num(&ModelParams::d2)},
        {"d3", num(&ModelParams::d3)},
        {"omega1", num(&ModelParams::omega1)},
        {"omega2", num(&ModelParams::omega2)},
        {"phi1", num(&ModelParams::phi1)},
        {"phi2", num(&ModelParams::phi2)},
        {"delta1", num(&ModelParams::delta1)},
        {"delta2", num(&ModelParams::delta2)},
        {"delta3", num(&ModelParams::delta3)},
        {"eta", num(&ModelParams::eta_value)},
        {"p1", num(&ModelParams::p1_value)},
        {"p2", num(&ModelParams::p2_value)},

        {"t_end", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.sim.t_end = to_double(k, v); }},
        {"dt", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.sim.dt = to_double(k, v); }},
        {"seed", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.sim.seed = to_u64(k, v); }},
        {"record_stride",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.sim.record_stride = to_u64(k, v); }},
        {"sim_vartheta",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.sim.vartheta = to_double(k, v); }},
        {"theta0", [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             c.matrix.theta0 = to_list(k, v);
             if (!c.matrix.theta0.empty()) c.sim.theta0 = c.matrix.theta0.front();
         }},
        {"v0", [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             c.matrix.v0 = to_list(k, v);
             if (!c.matrix.v0.empty()) c.sim.v0 = c.matrix.v0.front();
         }},
        {"rho0", [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             c.matrix.rho0 = to_list(k, v);
             if (!c.matrix.rho0.empty()) c.sim.rho0 = c.matrix.rho0.front();
         }},

        {"methods",
         [](ScenarioConfig& c, const std::string&, std::string_view v) {
             c.filter.methods.clear();
             for (auto item : split_list(v)) c.filter.methods.push_back(parse_method(item));
         }},
        {"x_min", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.x_min = to_double(k, v); }},
        {"x_max", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.x_max = to_double(k, v); }},
        {"dx", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.dx = to_double(k, v); }},
        {"stencil",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             if (v == "upwind") c.filter.grid.step.stencil = Stencil::kUpwind;
             else if (v == "central") c.filter.grid.step.stencil = Stencil::kCentral;
             else throw ValidationError(k, "expected upwind or central");
         }},
        {"update",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             if (v == "exponential") c.filter.grid.step.update = UpdateScheme::kExponential;
             else if (v == "explicit") c.filter.grid.step.update = UpdateScheme::kExplicit;
             else throw ValidationError(k, "expected exponential or explicit");
         }},
        {"substep",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.step.substep = to_bool(k, v); }},
        {"mean_obs",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             if (v == "reconstructed") c.filter.grid.mean_mode = MeanObsMode::kReconstructed;
             else if (v == "oracle") c.filter.grid.mean_mode = MeanObsMode::kOracle;
             else throw ValidationError(k, "expected reconstructed or oracle");
         }},
        {"prior",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             if (v == "uniform") c.filter.grid.prior = PriorKind::kUniform;
             else if (v == "gaussian") c.filter.grid.prior = PriorKind::kGaussian;
             else throw ValidationError(k, "expected uniform or gaussian");
         }},
        {"prior_mean",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.prior_mean = to_double(k, v); }},
        {"prior_sd",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.grid.prior_sd = to_double(k, v); }},
        {"dtau", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.dtau = to_double(k, v); }},
        {"vartheta",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.scheme.vartheta = to_double(k, v); }},
        {"quad_order",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) {
             c.filter.scheme.quad_order = static_cast<int>(to_u64(k, v));
         }},
        {"particles",
         [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.particles = to_u64(k, v); }},
        {"tau", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.tau = to_double(k, v); }},
        {"horizon", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.filter.horizon = to_double(k, v); }},
        {"threads", [](ScenarioConfig& c, const std::string& k, std::string_view v) { c.threads = to_u64(k, v); }},
    };
    return table;
}

void check_list(const std::vector<double>& xs, const char* key, double lo, double hi) {
    if (xs.empty()) throw ValidationError(key, "needs at least one value");
    for (double x : xs)
        if (!(x > lo && x < hi)) throw ValidationError(key, "values must lie strictly inside their interval");
}

}  // namespace

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto& [name, _] : setters()) k.push_back(name);
        return k;
    }();
    return keys;
}

void ScenarioConfig::validate() const {
    params.validate();
    SimConfig probe = sim;
    probe.theta0 = matrix.theta0.empty() ? 0.0 : matrix.theta0.front();
    probe.validate(params);
    if (matrix.theta0.empty()) throw ValidationError("theta0", "needs at least one value");
    for (double x : matrix.theta0)
        if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("theta0", "values must lie in [0, 1]");
    // the logit observations need v0 and rho0 strictly inside their ranges
    check_list(matrix.v0, "v0", 0.0, params.v_max);
    check_list(matrix.rho0, "rho0", 0.0, 1.0);

    if (!(filter.grid.dx > 0.0)) throw ValidationError("dx", "must be > 0");
    if (!(filter.grid.x_min < filter.grid.x_max)) throw ValidationError("x_max", "must exceed x_min");
    build_grid(filter.grid.x_min, filter.grid.x_max, filter.grid.dx);
    if (filter.grid.prior == PriorKind::kGaussian && !(filter.grid.prior_sd > 0.0))
        throw ValidationError("prior_sd", "must be > 0");
    if (filter.methods.empty()) throw ValidationError("methods", "needs at least one method");
    filter.scheme.validate();
    if (!(filter.dtau > 0.0)) throw ValidationError("dtau", "must be > 0");
    if (filter.particles < 100) throw ValidationError("particles", "must be >= 100");
    if (!(filter.tau >= 0.0 && filter.tau <= sim.t_end)) throw ValidationError("tau", "must lie in [0, t_end]");
    if (!(filter.horizon >= 0.0)) throw ValidationError("horizon", "must be >= 0");
}

ScenarioConfig parse_config(std::string_view text) {
    std::map<std::string, Setter, std::less<>> table;
    for (const auto& [name, fn] : setters()) table.emplace(name, fn);

    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view s = trim(line);
        if (const auto hash = s.find('#'); hash != std::string_view::npos) s = trim(s.substr(0, hash));
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key(trim(s.substr(0, eq)));
        const std::string_view value = trim(s.substr(eq + 1));
        const auto it = table.find(key);
        if (it == table.end()) throw ValidationError(key, "unknown configuration key");
        it->second(cfg, key, value);
        seen.insert(key);
    }

    // b2, b3 and eta follow v_max and epsilon unless given explicitly
    if (seen.count("v_max") || seen.count("epsilon")) {
        const ModelParams given = cfg.params;
        cfg.params.derive_from_scale();
        if (seen.count("b2")) cfg.params.b2 = given.b2;
        if (seen.count("b3")) cfg.params.b3 = given.b3;
        if (seen.count("eta")) cfg.params.eta_value = given.eta_value;
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

}  // namespace anthracnose
