// config.hpp - run configuration files: a strict TOML subset parsed into a
// JSON document, plus typed extraction into the option structs
//
// Supported TOML subset: # comments, [table] and [[table array]] headers,
// key = value pairs with string/integer/float/boolean/array values. Arrays
// may nest and span lines. That covers every config this tool reads; richer
// TOML (dotted keys, inline tables, dates) is rejected loudly.
#pragma once

#include <cctype>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "llsvn/asymmetry.hpp"
#include "llsvn/common.hpp"
#include "llsvn/ingest.hpp"
#include "llsvn/synth.hpp"

namespace llsvn {

namespace detail {

class TomlParser {
public:
    explicit TomlParser(std::istream& in) : in_(in) {}

    nlohmann::json parse() {
        nlohmann::json root = nlohmann::json::object();
        nlohmann::json* table = &root;
        std::string line;
        while (next_line(line)) {
            std::string_view s = trim(strip_comment(line));
            if (s.empty()) continue;
            if (s.front() == '[') {
                table = open_table(root, s);
            } else {
                parse_pair(*table, s);
            }
        }
        return root;
    }

private:
    bool next_line(std::string& line) {
        if (!std::getline(in_, line)) return false;
        ++lineno_;
        return true;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(static_cast<std::size_t>(lineno_), what);
    }

    static std::string_view strip_comment(std::string_view s) {
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
            if (s[i] == '#' && !quoted) return s.substr(0, i);
        }
        return s;
    }

    static bool bare_key(std::string_view s) {
        if (s.empty()) return false;
        for (char c : s) {
            if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
        }
        return true;
    }

    nlohmann::json* open_table(nlohmann::json& root, std::string_view s) {
        bool is_array = s.size() >= 2 && s[1] == '[';
        std::size_t open = is_array ? 2 : 1;
        std::string_view close = is_array ? "]]" : "]";
        if (s.size() < open + close.size() || s.substr(s.size() - close.size()) != close) {
            fail("malformed table header");
        }
        std::string_view name = trim(s.substr(open, s.size() - open - close.size()));
        if (!bare_key(name)) fail("bad table name '" + std::string(name) + "'");
        std::string key(name);
        if (is_array) {
            if (!root.contains(key)) root[key] = nlohmann::json::array();
            if (!root[key].is_array()) fail("'" + key + "' is both a value and a table array");
            root[key].push_back(nlohmann::json::object());
            return &root[key].back();
        }
        if (root.contains(key)) fail("duplicate table '" + key + "'");
        root[key] = nlohmann::json::object();
        return &root[key];
    }

    void parse_pair(nlohmann::json& table, std::string_view s) {
        std::size_t eq = s.find('=');
        if (eq == std::string_view::npos) fail("expected key = value");
        std::string_view key = trim(s.substr(0, eq));
        if (!bare_key(key)) fail("bad key '" + std::string(key) + "'");
        if (table.contains(std::string(key))) fail("duplicate key '" + std::string(key) + "'");
        std::string value{trim(s.substr(eq + 1))};
        while (brackets_open(value)) {
            std::string cont;
            if (!next_line(cont)) fail("unterminated array");
            value += ' ';
            value += trim(strip_comment(cont));
        }
        std::size_t pos = 0;
        nlohmann::json v = parse_value(value, pos);
        skip_ws(value, pos);
        if (pos != value.size()) fail("trailing characters after value");
        table[std::string(key)] = std::move(v);
    }

    static bool brackets_open(std::string_view s) {
        int depth = 0;
        bool quoted = false;
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
            if (quoted) continue;
            if (s[i] == '[') ++depth;
            if (s[i] == ']') --depth;
        }
        return depth > 0;
    }

    static void skip_ws(std::string_view s, std::size_t& pos) {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    nlohmann::json parse_value(std::string_view s, std::size_t& pos) {
        skip_ws(s, pos);
        if (pos >= s.size()) fail("missing value");
        char c = s[pos];
        if (c == '"') return parse_string(s, pos);
        if (c == '[') return parse_array(s, pos);
        return parse_scalar(s, pos);
    }

    nlohmann::json parse_string(std::string_view s, std::size_t& pos) {
        std::string out;
        for (++pos; pos < s.size(); ++pos) {
            char c = s[pos];
            if (c == '"') {
                ++pos;
                return out;
            }
            if (c == '\\') {
                if (++pos >= s.size()) break;
                switch (s[pos]) {
                    case '"': out += '"'; break;
                    case '\\': out += '\\'; break;
                    case 'n': out += '\n'; break;
                    case 't': out += '\t'; break;
                    case 'r': out += '\r'; break;
                    default: fail("unsupported escape in string");
                }
            } else {
                out += c;
            }
        }
        fail("unterminated string");
    }

    nlohmann::json parse_array(std::string_view s, std::size_t& pos) {
        nlohmann::json arr = nlohmann::json::array();
        ++pos;
        skip_ws(s, pos);
        if (pos < s.size() && s[pos] == ']') {
            ++pos;
            return arr;
        }
        while (true) {
            arr.push_back(parse_value(s, pos));
            skip_ws(s, pos);
            if (pos >= s.size()) fail("unterminated array");
            if (s[pos] == ',') {
                ++pos;
                skip_ws(s, pos);
                if (pos < s.size() && s[pos] == ']') {  // trailing comma
                    ++pos;
                    return arr;
                }
                continue;
            }
            if (s[pos] == ']') {
                ++pos;
                return arr;
            }
            fail("expected ',' or ']' in array");
        }
    }

    nlohmann::json parse_scalar(std::string_view s, std::size_t& pos) {
        std::size_t start = pos;
        while (pos < s.size() && s[pos] != ',' && s[pos] != ']' &&
               !std::isspace(static_cast<unsigned char>(s[pos]))) {
            ++pos;
        }
        std::string_view tok = s.substr(start, pos - start);
        if (tok == "true") return true;
        if (tok == "false") return false;
        if (tok.find_first_of(".eE") == std::string_view::npos) {
            std::int64_t i = 0;
            if (parse_int64(tok, i)) return i;
        }
        double d = 0.0;
        if (parse_real(tok, d)) return d;
        fail("unrecognized value '" + std::string(tok) + "'");
    }

    std::istream& in_;
    int lineno_ = 0;
};

inline void check_known_keys(const nlohmann::json& table, const char* section,
                             std::initializer_list<const char*> known) {
    for (const auto& [key, value] : table.items()) {
        bool ok = false;
        for (const char* k : known) ok = ok || key == k;
        if (!ok) {
            throw ConfigError(std::string("unknown key '") + key + "' in [" + section + "]");
        }
    }
}

template <typename T>
T config_number(const nlohmann::json& v, const char* key) {
    if constexpr (std::is_same_v<T, bool>) {
        if (!v.is_boolean()) throw ConfigError(std::string(key) + " must be a boolean");
        return v.get<bool>();
    } else if constexpr (std::is_floating_point_v<T>) {
        if (!v.is_number() || v.is_boolean()) {
            throw ConfigError(std::string(key) + " must be a number");
        }
        return v.get<double>();
    } else {
        if (!v.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
        auto raw = v.get<std::int64_t>();
        if constexpr (std::is_unsigned_v<T>) {
            if (raw < 0) throw ConfigError(std::string(key) + " must be nonnegative");
        }
        return static_cast<T>(raw);
    }
}

template <typename T>
void read_key(const nlohmann::json& table, const char* key, T& out) {
    if (auto it = table.find(key); it != table.end()) out = config_number<T>(*it, key);
}

inline void read_string(const nlohmann::json& table, const char* key, std::string& out) {
    if (auto it = table.find(key); it != table.end()) {
        if (!it->is_string()) throw ConfigError(std::string(key) + " must be a string");
        out = it->get<std::string>();
    }
}

}  // namespace detail

// Parse the TOML subset into a JSON document (tables -> objects,
// table arrays -> arrays of objects).
inline nlohmann::json parse_toml(std::istream& in) { return detail::TomlParser(in).parse(); }

inline nlohmann::json parse_toml(const std::string& text) {
    std::istringstream in(text);
    return parse_toml(in);
}

// Load a config file; .json files go through the JSON parser, anything else
// through the TOML subset.
inline nlohmann::json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path);
    if (path.size() >= 5 && path.substr(path.size() - 5) == ".json") {
        try {
            return nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(0, path + ": " + e.what());
        }
    }
    return parse_toml(in);
}

// Stable digest of a config document, for manifests and output naming.
inline std::string config_digest(const nlohmann::json& root) {
    return to_hex(fnv1a64(root.dump()));
}

inline CalendarConfig calendar_config_from(const nlohmann::json& root) {
    CalendarConfig cal;
    auto it = root.find("calendar");
    if (it == root.end()) return cal;
    if (!it->is_object()) throw ConfigError("[calendar] must be a table");
    detail::check_known_keys(*it, "calendar", {"session_start", "session_end", "holidays"});
    detail::read_string(*it, "session_start", cal.session_start);
    detail::read_string(*it, "session_end", cal.session_end);
    if (auto h = it->find("holidays"); h != it->end()) {
        if (!h->is_array()) throw ConfigError("holidays must be an array of dates");
        for (const auto& d : *h) {
            if (!d.is_string()) throw ConfigError("holidays must be an array of dates");
            cal.holidays.push_back(d.get<std::string>());
        }
    }
    return cal;
}

inline nlohmann::json calendar_config_json(const CalendarConfig& c) {
    nlohmann::json j;
    j["session_start"] = c.session_start;
    j["session_end"] = c.session_end;
    j["holidays"] = c.holidays;
    return j;
}

inline SweepOptions sweep_options_from(const nlohmann::json& root) {
    SweepOptions o;
    auto it = root.find("sweep");
    if (it == root.end()) return o;
    if (!it->is_object()) throw ConfigError("[sweep] must be a table");
    detail::check_known_keys(*it, "sweep",
                             {"t_in_days", "window_step_days", "grid_min_s", "grid_max_s",
                              "grid_step_s", "rho0", "fdr_alpha", "seed", "threads",
                              "min_active_slices", "pool_state_pairs", "pool_observations",
                              "community_restarts"});
    detail::read_key(*it, "t_in_days", o.t_in_days);
    detail::read_key(*it, "window_step_days", o.window_step_days);
    detail::read_key(*it, "grid_min_s", o.grid_min_s);
    detail::read_key(*it, "grid_max_s", o.grid_max_s);
    detail::read_key(*it, "grid_step_s", o.grid_step_s);
    detail::read_key(*it, "rho0", o.rho0);
    detail::read_key(*it, "fdr_alpha", o.fdr_alpha);
    detail::read_key(*it, "seed", o.seed);
    detail::read_key(*it, "threads", o.threads);
    detail::read_key(*it, "min_active_slices", o.min_active_slices);
    detail::read_key(*it, "pool_state_pairs", o.pool_state_pairs);
    detail::read_key(*it, "pool_observations", o.pool_observations);
    detail::read_key(*it, "community_restarts", o.community_restarts);
    return o;
}

// Inverse of sweep_options_from, used to snapshot the effective options into a
// run manifest after flag overrides.
inline nlohmann::json sweep_options_json(const SweepOptions& o) {
    nlohmann::json j;
    j["t_in_days"] = o.t_in_days;
    j["window_step_days"] = o.window_step_days;
    j["grid_min_s"] = o.grid_min_s;
    j["grid_max_s"] = o.grid_max_s;
    j["grid_step_s"] = o.grid_step_s;
    j["rho0"] = o.rho0;
    j["fdr_alpha"] = o.fdr_alpha;
    j["seed"] = o.seed;
    j["threads"] = o.threads;
    j["min_active_slices"] = o.min_active_slices;
    j["pool_state_pairs"] = o.pool_state_pairs;
    j["pool_observations"] = o.pool_observations;
    j["community_restarts"] = o.community_restarts;
    return j;
}

inline AsymmetryOptions asymmetry_options_from(const nlohmann::json& root) {
    AsymmetryOptions o;
    auto it = root.find("asymmetry");
    if (it == root.end()) return o;
    if (!it->is_object()) throw ConfigError("[asymmetry] must be a table");
    detail::check_known_keys(*it, "asymmetry", {"fdr_alpha", "n_min", "hac"});
    detail::read_key(*it, "fdr_alpha", o.fdr_alpha);
    detail::read_key(*it, "n_min", o.tstat.n_min);
    detail::read_key(*it, "hac", o.tstat.hac);
    return o;
}

inline nlohmann::json asymmetry_options_json(const AsymmetryOptions& o) {
    nlohmann::json j;
    j["fdr_alpha"] = o.fdr_alpha;
    j["n_min"] = o.tstat.n_min;
    j["hac"] = o.tstat.hac;
    return j;
}

inline SynthConfig synth_config_from(const nlohmann::json& root) {
    SynthConfig cfg;
    cfg.calendar = calendar_config_from(root);
    auto it = root.find("synth");
    if (it == root.end()) throw ConfigError("missing [synth] table");
    if (!it->is_object()) throw ConfigError("[synth] must be a table");
    detail::check_known_keys(*it, "synth",
                             {"n_traders", "groups", "span_days", "start_date", "baseline_rate",
                              "group_event_rate", "sync_prob", "copy_gain", "event_slice_s",
                              "vol_log_mean", "vol_log_sd", "seed"});
    detail::read_key(*it, "n_traders", cfg.n_traders);
    detail::read_key(*it, "span_days", cfg.span_days);
    detail::read_string(*it, "start_date", cfg.start_date);
    detail::read_key(*it, "baseline_rate", cfg.baseline_rate);
    detail::read_key(*it, "group_event_rate", cfg.group_event_rate);
    detail::read_key(*it, "sync_prob", cfg.sync_prob);
    detail::read_key(*it, "copy_gain", cfg.copy_gain);
    detail::read_key(*it, "event_slice_s", cfg.event_slice_s);
    detail::read_key(*it, "vol_log_mean", cfg.vol_log_mean);
    detail::read_key(*it, "vol_log_sd", cfg.vol_log_sd);
    detail::read_key(*it, "seed", cfg.seed);
    if (auto g = it->find("groups"); g != it->end()) {
        if (!g->is_array()) throw ConfigError("groups must be an array of member arrays");
        for (const auto& grp : *g) {
            if (!grp.is_array()) throw ConfigError("groups must be an array of member arrays");
            std::vector<int> members;
            for (const auto& m : grp) members.push_back(detail::config_number<int>(m, "group member"));
            cfg.groups.push_back(std::move(members));
        }
    }
    if (auto c = root.find("coupling"); c != root.end()) {
        if (!c->is_array()) throw ConfigError("[[coupling]] must be a table array");
        for (const auto& rec : *c) {
            if (!rec.is_object()) throw ConfigError("[[coupling]] entries must be tables");
            detail::check_known_keys(rec, "coupling",
                                     {"src_group", "tau1_s", "dst_group", "tau2_s", "beta"});
            SynthCoupling cp;
            detail::read_key(rec, "src_group", cp.src_group);
            detail::read_key(rec, "tau1_s", cp.tau1_s);
            detail::read_key(rec, "dst_group", cp.dst_group);
            detail::read_key(rec, "tau2_s", cp.tau2_s);
            detail::read_key(rec, "beta", cp.beta);
            cfg.couplings.push_back(cp);
        }
    }
    return cfg;
}

}  // namespace llsvn
