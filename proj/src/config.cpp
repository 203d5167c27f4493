#include "modflow/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace modflow {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(trim(item));
    return out;
}

double to_double(const std::string& s, const std::string& key) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite");
        return v;
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + s);
    }
}

class KeyMap {
public:
    explicit KeyMap(std::map<std::string, std::string> kv) : kv_(std::move(kv)) {}

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    bool has_prefix(const std::string& prefix) const {
        auto it = kv_.lower_bound(prefix);
        return it != kv_.end() && it->first.rfind(prefix, 0) == 0;
    }
    std::string str(const std::string& key) {
        auto it = kv_.find(key);
        if (it == kv_.end()) throw std::invalid_argument("config: missing key '" + key + "'");
        used_.insert(it->first);
        return it->second;
    }
    std::string str_or(const std::string& key, const std::string& fallback) {
        return has(key) ? str(key) : fallback;
    }
    double num(const std::string& key) { return to_double(str(key), key); }
    double num_or(const std::string& key, double fallback) {
        return has(key) ? num(key) : fallback;
    }
    void check_all_used() const {
        for (const auto& [k, v] : kv_)
            if (!used_.count(k))
                throw std::invalid_argument("config: unknown key '" + k + "'");
    }

private:
    std::map<std::string, std::string> kv_;
    std::set<std::string> used_;
};

PointFieldSpec parse_field(KeyMap& kv, const std::string& prefix, int n_sources) {
    PointFieldSpec field;
    field.n_sources = n_sources;
    const std::string mode = kv.str(prefix + "mode");
    if (mode == "independent")
        field.mode = FieldMode::IndependentOnOff;
    else if (mode == "monotone")
        field.mode = FieldMode::Monotone;
    else if (mode == "schedule")
        field.mode = FieldMode::Schedule;
    else
        throw std::invalid_argument("config: bad field mode '" + mode + "'");

    const std::string mask = kv.str_or(prefix + "initial_mask", std::string(n_sources, '0'));
    if (static_cast<int>(mask.size()) != n_sources)
        throw std::invalid_argument("config: initial_mask length must match source count");
    for (int i = 0; i < n_sources; ++i) {
        if (mask[i] == '1')
            field.initial_mask |= (1u << i);  // leftmost character is source 1
        else if (mask[i] != '0')
            throw std::invalid_argument("config: initial_mask must be a 0/1 string");
    }

    auto parse_rates = [&](const std::string& key) {
        std::vector<double> rates;
        for (const auto& tok : split(kv.str(key), ','))
            rates.push_back(to_double(tok, key));
        if (static_cast<int>(rates.size()) == 1 && n_sources > 1)
            rates.assign(n_sources, rates[0]);
        return rates;
    };
    if (field.mode == FieldMode::IndependentOnOff) {
        field.lambda_on = parse_rates(prefix + "lambda_on");
        field.lambda_off = parse_rates(prefix + "lambda_off");
    } else if (field.mode == FieldMode::Monotone) {
        field.lambda_on = parse_rates(prefix + "lambda_on");
    } else {
        for (const auto& tok : split(kv.str(prefix + "schedule"), ',')) {
            const auto parts = split(tok, ':');
            if (parts.size() != 3)
                throw std::invalid_argument("config: schedule entries are time:source:on|off");
            ScheduleEvent ev;
            ev.time = to_double(parts[0], prefix + "schedule");
            ev.source = static_cast<int>(to_double(parts[1], prefix + "schedule")) - 1;
            if (parts[2] == "on")
                ev.on = true;
            else if (parts[2] == "off")
                ev.on = false;
            else
                throw std::invalid_argument("config: schedule state must be on or off");
            field.schedule.push_back(ev);
        }
    }
    field.validate();
    return field;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    std::map<std::string, std::string> raw;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: expected 'key = value' in line: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw std::invalid_argument("config: empty key or value in line: " + line);
        if (!raw.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }

    std::string canonical;
    for (const auto& [k, v] : raw) canonical += k + "=" + v + "\n";

    KeyMap kv(std::move(raw));
    ExperimentConfig cfg;
    cfg.config_hash = fnv1a(canonical);
    cfg.seed = static_cast<std::uint64_t>(kv.num_or("seed", 0.0));
    cfg.n_paths = static_cast<std::size_t>(kv.num_or("n_paths", 1.0));
    cfg.threads = static_cast<unsigned>(kv.num_or("threads", 0.0));
    cfg.verify_cases = static_cast<std::size_t>(kv.num_or("verify.cases", 1000.0));
    cfg.grid = TimeGrid(static_cast<int>(kv.num_or("grid.n_steps", 100.0)),
                        kv.num_or("grid.delta", 1e-8));

    const std::string prior_type = kv.str_or("prior.type", "atoms");
    if (prior_type == "atoms") {
        std::vector<double> xs, ws;
        for (const auto& tok : split(kv.str("prior.atoms"), ',')) {
            const auto parts = split(tok, ':');
            if (parts.size() != 2)
                throw std::invalid_argument("config: prior.atoms entries are x:weight");
            xs.push_back(to_double(parts[0], "prior.atoms"));
            ws.push_back(to_double(parts[1], "prior.atoms"));
        }
        cfg.prior = SignalLaw::from_atoms(std::move(xs), std::move(ws));
    } else if (prior_type == "gaussian") {
        cfg.prior = SignalLaw::gaussian(kv.num("prior.mean"), kv.num("prior.sd"),
                                        static_cast<int>(kv.num_or("prior.n_quad", 129.0)));
    } else {
        throw std::invalid_argument("config: prior.type must be atoms or gaussian");
    }

    for (const auto& tok : split(kv.str("sources.sigmas"), ','))
        cfg.sources.sigmas.push_back(to_double(tok, "sources.sigmas"));
    cfg.sources.validate();

    cfg.field = parse_field(kv, "field.", cfg.sources.n());

    if (kv.has_prefix("pricing.")) {
        PricingBlock p;
        p.strike = kv.num("pricing.strike");
        p.exercise_t = kv.num("pricing.exercise_t");
        p.rate = kv.num_or("pricing.rate", 0.0);
        p.mc_paths = static_cast<std::size_t>(kv.num_or("pricing.mc_paths", 100000.0));
        if (cfg.field.mode != FieldMode::Monotone || cfg.field.initial_mask == 0)
            throw std::invalid_argument(
                "config: pricing requires a monotone field with an initially active source");
        cfg.pricing = p;
    }

    if (kv.has_prefix("asymmetry.")) {
        AsymmetryBlock a{parse_field(kv, "asymmetry.agent1.field.", cfg.sources.n()),
                         parse_field(kv, "asymmetry.agent2.field.", cfg.sources.n())};
        cfg.asymmetry = a;
    }

    kv.check_all_used();
    cfg.system().validate();
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

}  // namespace modflow
