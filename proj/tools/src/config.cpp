// Copyright (c) 2026 the derw-lab authors.
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "derw/errors.hpp"

namespace derw_lab {

using nlohmann::json;

namespace {

// ---------------------------------------------------------------- KV parser

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

json scalar_to_json(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (v.empty()) throw ConfigError("line " + std::to_string(line) + ": empty value");
    if (v == "true") return true;
    if (v == "false") return false;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
    // number?
    char* end = nullptr;
    const double d = std::strtod(v.c_str(), &end);
    if (end == v.c_str() + v.size()) {
        // preserve integers exactly
        if (v.find_first_of(".eE") == std::string::npos) {
            try {
                return static_cast<std::int64_t>(std::stoll(v));
            } catch (...) {
            }
        }
        return d;
    }
    return v;  // bare string (e.g. "constant", "dyadic", "log-spaced:40")
}

json value_to_json(const std::string& raw, int line) {
    const std::string v = trim(raw);
    if (!v.empty() && v.front() == '[') {
        if (v.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unclosed list");
        json arr = json::array();
        const std::string inner = v.substr(1, v.size() - 2);
        std::string item;
        std::stringstream ss(inner);
        while (std::getline(ss, item, ',')) {
            if (trim(item).empty()) continue;
            arr.push_back(scalar_to_json(item, line));
        }
        return arr;
    }
    return scalar_to_json(raw, line);
}

}  // namespace

json kv_to_json(const std::string& text) {
    json root = json::object();
    std::stringstream ss(text);
    std::string line;
    int line_no = 0;
    while (std::getline(ss, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");

        json* node = &root;
        std::size_t pos = 0;
        while (true) {
            const auto dot = key.find('.', pos);
            const std::string part = key.substr(pos, dot == std::string::npos ? dot : dot - pos);
            if (part.empty())
                throw ConfigError("line " + std::to_string(line_no) + ": malformed key '" + key + "'");
            if (dot == std::string::npos) {
                if (node->contains(part))
                    throw ConfigError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
                (*node)[part] = value_to_json(line.substr(eq + 1), line_no);
                break;
            }
            if (!node->contains(part)) (*node)[part] = json::object();
            node = &(*node)[part];
            if (!node->is_object())
                throw ConfigError("line " + std::to_string(line_no) + ": key '" + key +
                                  "' descends into a non-object");
            pos = dot + 1;
        }
    }
    return root;
}

namespace {

// ------------------------------------------------------- strict JSON schema

/// Wraps one JSON object: typed getters mark keys consumed, and done()
/// reports any leftovers as unknown-key errors with the full field path.
class Obj {
  public:
    Obj(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json& raw(const std::string& key) {
        mark(key);
        if (!j_.contains(key)) throw ConfigError(path_ + "." + key + ": missing required key");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(path_ + "." + key + ": expected a number");
        return v.get<double>();
    }
    double number_or(const std::string& key, double def) {
        return has(key) ? number(key) : def;
    }
    std::int64_t integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer())
            throw ConfigError(path_ + "." + key + ": expected an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer_or(const std::string& key, std::int64_t def) {
        return has(key) ? integer(key) : def;
    }
    std::uint64_t uinteger_or(const std::string& key, std::uint64_t def) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
            throw ConfigError(path_ + "." + key + ": expected a nonnegative integer");
        return v.get<std::uint64_t>();
    }
    bool boolean_or(const std::string& key, bool def) {
        if (!has(key)) return def;
        const json& v = raw(key);
        if (!v.is_boolean()) throw ConfigError(path_ + "." + key + ": expected true/false");
        return v.get<bool>();
    }
    std::string str(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(path_ + "." + key + ": expected a string");
        return v.get<std::string>();
    }
    std::string str_or(const std::string& key, const std::string& def) {
        return has(key) ? str(key) : def;
    }

    Obj object(const std::string& key) { return Obj(raw(key), path_ + "." + key); }

    void done() {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!consumed_.count(it.key()))
                throw ConfigError(path_ + "." + it.key() + ": unknown key");
    }

    const std::string& path() const { return path_; }

  private:
    void mark(const std::string& key) { consumed_.insert(key); }

    const json& j_;
    std::string path_;
    std::set<std::string> consumed_;
};

std::vector<double> number_list(Obj& obj, const std::string& key) {
    const json& v = obj.raw(key);
    if (!v.is_array()) throw ConfigError(obj.path() + "." + key + ": expected a list");
    std::vector<double> out;
    for (const auto& item : v) {
        if (!item.is_number())
            throw ConfigError(obj.path() + "." + key + ": expected numeric entries");
        out.push_back(item.get<double>());
    }
    return out;
}

derw::SequenceSpec parse_sequence(Obj obj) {
    const std::string kind = obj.str("kind");
    derw::SequenceSpec spec;
    if (kind == "constant") {
        spec = derw::ConstantSeq{obj.number("value")};
    } else if (kind == "explicit") {
        derw::ExplicitSeq s;
        s.head = number_list(obj, "head");
        s.tail = obj.number("tail");
        spec = s;
    } else if (kind == "power") {
        spec = derw::PowerConvergentSeq{obj.number("limit"), obj.number("amplitude"),
                                        obj.number("exponent")};
    } else if (kind == "periodic") {
        derw::PeriodicSeq s;
        s.values = number_list(obj, "values");
        spec = s;
    } else if (kind == "rotation") {
        spec = derw::RotationSeq{obj.number("theta"), obj.number("lo"), obj.number("hi"),
                                 obj.boolean_or("irrational", false)};
    } else {
        throw ConfigError(obj.path() + ".kind: unknown sequence kind '" + kind + "'");
    }
    obj.done();
    try {
        derw::validate_sequence(spec);
    } catch (const derw::InvalidParameter& e) {
        throw ConfigError(obj.path() + ": " + e.what());
    }
    return spec;
}

CheckpointSpec parse_checkpoints(Obj& run, const std::string& key) {
    CheckpointSpec spec;
    if (!run.has(key)) return spec;  // default dyadic
    const json& v = run.raw(key);
    if (v.is_array()) {
        spec.kind = CheckpointSpec::Kind::explicit_list;
        for (const auto& item : v) {
            if (!item.is_number_integer())
                throw ConfigError(run.path() + "." + key + ": expected integer checkpoints");
            spec.values.push_back(item.get<std::int64_t>());
        }
        return spec;
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "dyadic") {
            spec.kind = CheckpointSpec::Kind::dyadic;
            return spec;
        }
        if (s.rfind("log-spaced:", 0) == 0) {
            spec.kind = CheckpointSpec::Kind::log_spaced;
            try {
                spec.count = std::stoll(s.substr(11));
            } catch (...) {
                throw ConfigError(run.path() + "." + key + ": malformed log-spaced count");
            }
            if (spec.count < 2)
                throw ConfigError(run.path() + "." + key + ": log-spaced needs count >= 2");
            return spec;
        }
        throw ConfigError(run.path() + "." + key + ": expected a list, 'dyadic' or 'log-spaced:<k>'");
    }
    throw ConfigError(run.path() + "." + key + ": expected a list or generator string");
}

GridSpec parse_grid(Obj grid) {
    GridSpec g;
    g.from = grid.number("from");
    g.to = grid.number("to");
    g.count = grid.integer("count");
    grid.done();
    if (!(g.count >= 2)) throw ConfigError("scan grid needs count >= 2");
    if (!(g.to >= g.from)) throw ConfigError("scan grid needs to >= from");
    return g;
}

void range_check(bool ok, const std::string& what) {
    if (!ok) throw ConfigError(what);
}

}  // namespace

ExperimentConfig config_from_json(const json& j) {
    ExperimentConfig config;
    Obj root(j, "config");

    Obj model = root.object("model");
    config.model.p = model.number("p");
    config.model.q = model.number("q");
    config.model.alpha = parse_sequence(model.object("alpha"));
    config.model.beta = parse_sequence(model.object("beta"));
    model.done();
    range_check(config.model.p >= 0.0 && config.model.p <= 1.0, "config.model.p: must lie in [0,1]");
    range_check(config.model.q >= 0.0 && config.model.q <= 1.0, "config.model.q: must lie in [0,1]");

    Obj run = root.object("run");
    config.n_max = run.integer("n_max");
    range_check(config.n_max >= 1, "config.run.n_max: must be >= 1");
    range_check(config.n_max <= (std::int64_t{1} << 31), "config.run.n_max: too large");
    config.checkpoints = parse_checkpoints(run, "checkpoints");
    config.n_paths = run.integer_or("n_paths", 1);
    range_check(config.n_paths >= 1, "config.run.n_paths: must be >= 1");
    config.master_seed = run.uinteger_or("master_seed", 1);
    const std::string backend = run.str_or("backend", "state_only");
    if (backend == "state_only") {
        config.backend = derw::SimBackend::state_only;
    } else if (backend == "memory_sampling") {
        config.backend = derw::SimBackend::memory_sampling;
    } else {
        throw ConfigError("config.run.backend: expected state_only or memory_sampling");
    }
    config.worker_count = static_cast<int>(run.integer_or("worker_count", 0));
    range_check(config.worker_count >= 0, "config.run.worker_count: must be >= 1");
    config.separation_factor = run.integer_or("separation_factor", 100);
    range_check(config.separation_factor >= 1, "config.run.separation_factor: must be >= 1");
    run.done();

    if (root.has("analysis")) {
        Obj analysis = root.object("analysis");
        if (analysis.has("scale_kind")) {
            const std::string kind = analysis.str("scale_kind");
            if (kind == "thm3_strong") {
                config.scale_kind = derw::ScaleKind::thm3_strong;
            } else if (kind == "thm1_weak") {
                config.scale_kind = derw::ScaleKind::thm1_weak;
            } else if (kind == "kubota_takei_root_n") {
                config.scale_kind = derw::ScaleKind::kubota_takei_root_n;
            } else {
                throw ConfigError("config.analysis.scale_kind: unknown kind '" + kind + "'");
            }
        }
        if (analysis.has("lil_window")) {
            const json& w = analysis.raw("lil_window");
            if (!w.is_array() || w.size() != 2 || !w[0].is_number_integer() ||
                !w[1].is_number_integer())
                throw ConfigError("config.analysis.lil_window: expected [n_lo, n_hi]");
            config.lil_window = {w[0].get<std::int64_t>(), w[1].get<std::int64_t>()};
            range_check(config.lil_window->first >= 1 &&
                            config.lil_window->second >= config.lil_window->first,
                        "config.analysis.lil_window: need 1 <= n_lo <= n_hi");
        }
        config.lil_points = analysis.integer_or("lil_points", 40);
        range_check(config.lil_points >= 2, "config.analysis.lil_points: must be >= 2");
        config.eps_out = analysis.number_or("eps_out", 0.5);
        config.eps_in = analysis.number_or("eps_in", 0.5);
        config.rel_tol = analysis.number_or("rel_tol", 1e-3);
        range_check(config.rel_tol > 0.0, "config.analysis.rel_tol: must be > 0");
        config.abs_tol = analysis.number_or("abs_tol", 1e-6);
        range_check(config.abs_tol > 0.0, "config.analysis.abs_tol: must be > 0");
        config.a_inf_budget = analysis.integer_or("a_inf_budget", 100'000'000);
        range_check(config.a_inf_budget >= 1, "config.analysis.a_inf_budget: must be >= 1");
        config.loglog_floor = analysis.number_or("loglog_floor", 0.5);
        config.sum_depth = analysis.integer_or("sum_depth", 0);
        range_check(config.sum_depth >= 0, "config.analysis.sum_depth: must be >= 0");
        if (analysis.has("estimate_a_inf")) {
            const std::string mode = analysis.str("estimate_a_inf");
            if (mode == "auto") {
                config.a_inf_mode = AInfMode::auto_detect;
            } else if (mode == "always") {
                config.a_inf_mode = AInfMode::always;
            } else if (mode == "never") {
                config.a_inf_mode = AInfMode::never;
            } else {
                throw ConfigError("config.analysis.estimate_a_inf: expected auto/always/never");
            }
        }
        if (analysis.has("thresholds")) {
            Obj thr = analysis.object("thresholds");
            config.thresholds.ks_p_min = thr.number_or("ks_p_min", 1e-3);
            config.thresholds.mean_abs_max = thr.number_or("mean_abs_max", 0.05);
            config.thresholds.var_lo = thr.number_or("var_lo", 0.9);
            config.thresholds.var_hi = thr.number_or("var_hi", 1.1);
            config.thresholds.skew_abs_max = thr.number_or("skew_abs_max", 0.1);
            config.thresholds.ex_kurt_abs_max = thr.number_or("ex_kurt_abs_max", 0.2);
            thr.done();
        }
        analysis.done();
    }

    if (root.has("scan")) {
        Obj scan = root.object("scan");
        if (scan.has("p")) config.scan_p = parse_grid(scan.object("p"));
        if (scan.has("alpha")) config.scan_alpha = parse_grid(scan.object("alpha"));
        scan.done();
    }

    if (root.has("output")) {
        Obj output = root.object("output");
        config.out_dir = output.str_or("directory", "out");
        if (output.has("formats")) {
            const json& f = output.raw("formats");
            if (!f.is_array()) throw ConfigError("config.output.formats: expected a list");
            config.write_csv = false;
            config.write_json = false;
            for (const auto& item : f) {
                const std::string s = item.get<std::string>();
                if (s == "csv") {
                    config.write_csv = true;
                } else if (s == "json") {
                    config.write_json = true;
                } else {
                    throw ConfigError("config.output.formats: expected csv or json entries");
                }
            }
        }
        output.done();
    }

    root.done();
    return config;
}

namespace {

json sequence_to_json(const derw::SequenceSpec& spec) {
    struct Visitor {
        json operator()(const derw::ConstantSeq& s) const {
            return {{"kind", "constant"}, {"value", s.value}};
        }
        json operator()(const derw::ExplicitSeq& s) const {
            return {{"kind", "explicit"}, {"head", s.head}, {"tail", s.tail}};
        }
        json operator()(const derw::PowerConvergentSeq& s) const {
            return {{"kind", "power"},
                    {"limit", s.limit},
                    {"amplitude", s.amplitude},
                    {"exponent", s.exponent}};
        }
        json operator()(const derw::PeriodicSeq& s) const {
            return {{"kind", "periodic"}, {"values", s.values}};
        }
        json operator()(const derw::RotationSeq& s) const {
            return {{"kind", "rotation"},
                    {"theta", s.theta},
                    {"lo", s.lo},
                    {"hi", s.hi},
                    {"irrational", s.irrational}};
        }
    };
    return std::visit(Visitor{}, spec);
}

json checkpoints_to_json(const CheckpointSpec& spec) {
    switch (spec.kind) {
        case CheckpointSpec::Kind::explicit_list: return spec.values;
        case CheckpointSpec::Kind::dyadic: return "dyadic";
        case CheckpointSpec::Kind::log_spaced: return "log-spaced:" + std::to_string(spec.count);
    }
    return nullptr;
}

}  // namespace

json config_to_json(const ExperimentConfig& config) {
    json j;
    j["model"] = {{"p", config.model.p},
                  {"q", config.model.q},
                  {"alpha", sequence_to_json(config.model.alpha)},
                  {"beta", sequence_to_json(config.model.beta)}};
    j["run"] = {{"n_max", config.n_max},
                {"checkpoints", checkpoints_to_json(config.checkpoints)},
                {"n_paths", config.n_paths},
                {"master_seed", config.master_seed},
                {"backend", config.backend == derw::SimBackend::state_only ? "state_only"
                                                                           : "memory_sampling"},
                {"worker_count", config.worker_count},
                {"separation_factor", config.separation_factor}};
    json analysis = {{"lil_points", config.lil_points},
                     {"eps_out", config.eps_out},
                     {"eps_in", config.eps_in},
                     {"rel_tol", config.rel_tol},
                     {"abs_tol", config.abs_tol},
                     {"a_inf_budget", config.a_inf_budget},
                     {"loglog_floor", config.loglog_floor},
                     {"sum_depth", config.sum_depth},
                     {"estimate_a_inf", config.a_inf_mode == AInfMode::auto_detect ? "auto"
                                        : config.a_inf_mode == AInfMode::always    ? "always"
                                                                                   : "never"},
                     {"thresholds",
                      {{"ks_p_min", config.thresholds.ks_p_min},
                       {"mean_abs_max", config.thresholds.mean_abs_max},
                       {"var_lo", config.thresholds.var_lo},
                       {"var_hi", config.thresholds.var_hi},
                       {"skew_abs_max", config.thresholds.skew_abs_max},
                       {"ex_kurt_abs_max", config.thresholds.ex_kurt_abs_max}}}};
    if (config.scale_kind) analysis["scale_kind"] = derw::to_string(*config.scale_kind);
    if (config.lil_window)
        analysis["lil_window"] = {config.lil_window->first, config.lil_window->second};
    j["analysis"] = std::move(analysis);
    if (config.scan_p || config.scan_alpha) {
        json scan;
        if (config.scan_p)
            scan["p"] = {{"from", config.scan_p->from},
                         {"to", config.scan_p->to},
                         {"count", config.scan_p->count}};
        if (config.scan_alpha)
            scan["alpha"] = {{"from", config.scan_alpha->from},
                             {"to", config.scan_alpha->to},
                             {"count", config.scan_alpha->count}};
        j["scan"] = std::move(scan);
    }
    json formats = json::array();
    if (config.write_csv) formats.push_back("csv");
    if (config.write_json) formats.push_back("json");
    j["output"] = {{"directory", config.out_dir}, {"formats", formats}};
    return j;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    const auto first = text.find_first_not_of(" \t\r\n");
    json j;
    if (first != std::string::npos && text[first] == '{') {
        try {
            j = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("JSON parse error: ") + e.what());
        }
        // A run manifest embeds the config it was produced from.
        if (j.contains("tool") && j.contains("config")) j = j.at("config");
    } else {
        j = kv_to_json(text);
    }
    return config_from_json(j);
}

std::vector<std::int64_t> expand_checkpoints(const CheckpointSpec& spec, std::int64_t n_max,
                                             std::int64_t separation_factor) {
    std::vector<std::int64_t> out;
    switch (spec.kind) {
        case CheckpointSpec::Kind::explicit_list: {
            out = spec.values;
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            if (out.size() != spec.values.size())
                throw ConfigError("config.run.checkpoints: duplicate entries");
            for (std::int64_t c : out)
                if (c < 0 || c > n_max)
                    throw ConfigError("config.run.checkpoints: entry outside [0, n_max]");
            break;
        }
        case CheckpointSpec::Kind::dyadic: {
            for (std::int64_t v = 1; v <= n_max; v *= 2) {
                out.push_back(v);
                if (v > n_max / 2) break;
            }
            break;
        }
        case CheckpointSpec::Kind::log_spaced: {
            out = log_spaced_grid(10, std::max<std::int64_t>(10, n_max / separation_factor),
                                  spec.count);
            while (!out.empty() && out.back() > n_max) out.pop_back();
            break;
        }
    }
    return out;
}

std::vector<std::int64_t> log_spaced_grid(std::int64_t lo, std::int64_t hi, std::int64_t count) {
    std::vector<std::int64_t> out;
    if (hi < lo) return out;
    const double llo = std::log(static_cast<double>(lo));
    const double lhi = std::log(static_cast<double>(hi));
    for (std::int64_t i = 0; i < count; ++i) {
        const double f = count == 1 ? 0.0
                                    : static_cast<double>(i) / static_cast<double>(count - 1);
        const auto v = static_cast<std::int64_t>(std::llround(std::exp(llo + f * (lhi - llo))));
        out.push_back(std::min(hi, std::max(lo, v)));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace derw_lab
