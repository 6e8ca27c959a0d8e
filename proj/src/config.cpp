#include "fracns/config.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace fracns {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected an integer, got '" + v + "'");
    }
}

bool parse_bool(const std::string& v, int line, int col) {
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(line, col, "expected on/off, got '" + v + "'");
}

std::vector<double> parse_list(const std::string& v, int line, int col) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError(line, col, "empty list element");
        out.push_back(parse_double(item, line, col));
    }
    if (out.empty()) throw ConfigError(line, col, "expected a nonempty list");
    return out;
}

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

using KeyHandler = std::function<void(const std::string& value, int line, int col)>;
using SectionTable = std::map<std::string, std::map<std::string, KeyHandler>>;

/// Line-oriented strict parser. entry_handler, when set, accepts sections of
/// the form [entry NAME]; everything else must match the table exactly.
void parse_sections(const std::string& text, SectionTable& table,
                    const std::function<std::map<std::string, KeyHandler>*(
                        const std::string& name, int line, int col)>& entry_handler) {
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::map<std::string, KeyHandler>* current = nullptr;
    std::string current_name;
    while (std::getline(in, raw)) {
        ++line_no;
        const std::string stripped = trim(raw);
        if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
        const int col0 = static_cast<int>(raw.find_first_not_of(" \t")) + 1;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ConfigError(line_no, col0, "unterminated section header");
            const std::string name = trim(stripped.substr(1, stripped.size() - 2));
            if (name.rfind("entry", 0) == 0 && entry_handler) {
                const std::string rest = trim(name.substr(5));
                if (rest.empty())
                    throw ConfigError(line_no, col0, "entry section needs a name: [entry NAME]");
                current = entry_handler(rest, line_no, col0);
                current_name = "entry";
                continue;
            }
            auto it = table.find(name);
            if (it == table.end())
                throw ConfigError(line_no, col0, "unknown section [" + name + "]");
            current = &it->second;
            current_name = name;
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line_no, col0, "expected 'key = value'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw ConfigError(line_no, col0, "empty key");
        if (!current)
            throw ConfigError(line_no, col0, "key '" + key + "' outside any section");
        auto kit = current->find(key);
        if (kit == current->end())
            throw ConfigError(line_no, col0,
                              "unknown key '" + key + "' in section [" + current_name + "]");
        kit->second(value, line_no, col0);
    }
}

SectionTable run_config_table(RunConfig& cfg) {
    SectionTable t;
    t["grid"]["n"] = [&](const std::string& v, int l, int c) {
        cfg.grid.n = static_cast<int>(parse_int(v, l, c));
    };
    t["grid"]["dealias_fraction"] = [&](const std::string& v, int l, int c) {
        cfg.grid.dealias_fraction = parse_double(v, l, c);
    };
    t["solver"]["alpha"] = [&](const std::string& v, int l, int c) {
        cfg.solver.alpha = parse_double(v, l, c);
    };
    t["solver"]["mollifier_eps"] = [&](const std::string& v, int l, int c) {
        cfg.solver.mollifier_eps = parse_double(v, l, c);
    };
    t["solver"]["dt"] = [&](const std::string& v, int l, int c) {
        cfg.solver.dt = parse_double(v, l, c);
    };
    t["solver"]["t_end"] = [&](const std::string& v, int l, int c) {
        cfg.solver.t_end = parse_double(v, l, c);
    };
    t["solver"]["record_orders"] = [&](const std::string& v, int l, int c) {
        cfg.solver.record_orders = parse_list(v, l, c);
    };
    t["solver"]["blowup_threshold"] = [&](const std::string& v, int l, int c) {
        cfg.solver.blowup_threshold = parse_double(v, l, c);
    };
    t["solver"]["dealias"] = [&](const std::string& v, int l, int c) {
        cfg.solver.dealias_on = parse_bool(v, l, c);
    };
    t["solver"]["nonlinearity"] = [&](const std::string& v, int l, int c) {
        cfg.solver.nonlinearity_on = parse_bool(v, l, c);
    };
    t["datum"]["kind"] = [&](const std::string& v, int l, int c) {
        if (v == "taylor_green") cfg.datum.kind = DatumSpec::Kind::TaylorGreen;
        else if (v == "random_divfree") cfg.datum.kind = DatumSpec::Kind::RandomDivFree;
        else if (v == "file") cfg.datum.kind = DatumSpec::Kind::File;
        else throw ConfigError(l, c, "unknown datum kind '" + v + "'");
    };
    t["datum"]["seed"] = [&](const std::string& v, int l, int c) {
        cfg.datum.seed = static_cast<std::uint64_t>(parse_int(v, l, c));
    };
    t["datum"]["spectrum_slope"] = [&](const std::string& v, int l, int c) {
        cfg.datum.spectrum_slope = parse_double(v, l, c);
    };
    t["datum"]["target_order"] = [&](const std::string& v, int l, int c) {
        cfg.datum.target_order = parse_double(v, l, c);
    };
    t["datum"]["target_value"] = [&](const std::string& v, int l, int c) {
        cfg.datum.target_value = parse_double(v, l, c);
    };
    t["datum"]["path"] = [&](const std::string& v, int, int) { cfg.datum.path = v; };
    t["ledger"]["c_bar"] = [&](const std::string& v, int l, int c) {
        cfg.ledger.c_bar = parse_double(v, l, c);
    };
    t["ledger"]["d_bar"] = [&](const std::string& v, int l, int c) {
        cfg.ledger.d_bar = parse_double(v, l, c);
    };
    t["ledger"]["c2_lemma"] = [&](const std::string& v, int l, int c) {
        cfg.ledger.c2_lemma = parse_double(v, l, c);
    };
    t["output"]["directory"] = [&](const std::string& v, int, int) {
        cfg.output.directory = v;
    };
    t["output"]["formats"] = [&](const std::string& v, int l, int c) {
        if (v != "csv" && v != "json" && v != "both")
            throw ConfigError(l, c, "formats must be csv, json, or both");
        cfg.output.formats = v;
    };
    t["output"]["basename"] = [&](const std::string& v, int, int) {
        cfg.output.basename = v;
    };
    return t;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
    RunConfig cfg;
    SectionTable table = run_config_table(cfg);
    parse_sections(text, table, nullptr);
    cfg.validate();
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

StabilityManifest parse_stability_manifest(const std::string& text) {
    StabilityManifest m;
    SectionTable table = run_config_table(m.base);
    table["stability"]["s"] = [&](const std::string& v, int l, int c) {
        m.s = parse_double(v, l, c);
    };
    table["stability"]["delta"] = [&](const std::string& v, int l, int c) {
        m.delta = parse_double(v, l, c);
    };

    std::vector<std::unique_ptr<std::map<std::string, KeyHandler>>> entry_tables;
    auto entry_handler = [&](const std::string& name, int line, int col)
        -> std::map<std::string, KeyHandler>* {
        for (const auto& e : m.entries)
            if (e.name == name) throw ConfigError(line, col, "duplicate entry '" + name + "'");
        m.entries.push_back(StabilityEntry{name, 1.25, 0.0, 1});
        const std::size_t slot = m.entries.size() - 1;
        auto tbl = std::make_unique<std::map<std::string, KeyHandler>>();
        (*tbl)["beta"] = [&m, slot](const std::string& v, int l, int c) {
            m.entries[slot].beta = parse_double(v, l, c);
        };
        (*tbl)["perturbation"] = [&m, slot](const std::string& v, int l, int c) {
            m.entries[slot].perturbation_hs = parse_double(v, l, c);
        };
        (*tbl)["pert_seed"] = [&m, slot](const std::string& v, int l, int c) {
            m.entries[slot].pert_seed = static_cast<std::uint64_t>(parse_int(v, l, c));
        };
        entry_tables.push_back(std::move(tbl));
        return entry_tables.back().get();
    };
    parse_sections(text, table, entry_handler);
    m.base.validate();
    return m;
}

StabilityManifest load_stability_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_stability_manifest(ss.str());
}

std::string normalize_run_config(const RunConfig& cfg) {
    std::string out;
    out += "[grid]\n";
    out += "n = " + std::to_string(cfg.grid.n) + "\n";
    out += "dealias_fraction = " + fmt_double(cfg.grid.dealias_fraction) + "\n";
    out += "\n[solver]\n";
    out += "alpha = " + fmt_double(cfg.solver.alpha) + "\n";
    out += "mollifier_eps = " + fmt_double(cfg.solver.mollifier_eps) + "\n";
    out += "dt = " + fmt_double(cfg.solver.dt) + "\n";
    out += "t_end = " + fmt_double(cfg.solver.t_end) + "\n";
    out += "record_orders = ";
    for (std::size_t i = 0; i < cfg.solver.record_orders.size(); ++i) {
        if (i) out += ", ";
        out += fmt_double(cfg.solver.record_orders[i]);
    }
    out += "\n";
    out += "blowup_threshold = " + fmt_double(cfg.solver.blowup_threshold) + "\n";
    out += std::string("dealias = ") + (cfg.solver.dealias_on ? "on" : "off") + "\n";
    out += std::string("nonlinearity = ") + (cfg.solver.nonlinearity_on ? "on" : "off") + "\n";
    out += "\n[datum]\n";
    switch (cfg.datum.kind) {
        case DatumSpec::Kind::TaylorGreen: out += "kind = taylor_green\n"; break;
        case DatumSpec::Kind::RandomDivFree: out += "kind = random_divfree\n"; break;
        case DatumSpec::Kind::File: out += "kind = file\n"; break;
    }
    out += "seed = " + std::to_string(cfg.datum.seed) + "\n";
    out += "spectrum_slope = " + fmt_double(cfg.datum.spectrum_slope) + "\n";
    if (cfg.datum.target_order)
        out += "target_order = " + fmt_double(*cfg.datum.target_order) + "\n";
    if (cfg.datum.target_value)
        out += "target_value = " + fmt_double(*cfg.datum.target_value) + "\n";
    if (!cfg.datum.path.empty()) out += "path = " + cfg.datum.path + "\n";
    out += "\n[ledger]\n";
    out += "c_bar = " + fmt_double(cfg.ledger.c_bar) + "\n";
    out += "d_bar = " + fmt_double(cfg.ledger.d_bar) + "\n";
    out += "c2_lemma = " + fmt_double(cfg.ledger.c2_lemma) + "\n";
    out += "\n[output]\n";
    out += "directory = " + cfg.output.directory + "\n";
    out += "formats = " + cfg.output.formats + "\n";
    out += "basename = " + cfg.output.basename + "\n";
    return out;
}

}  // namespace fracns
