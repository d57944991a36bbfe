#include "fermiblock/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fermiblock {

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string msg = "config validation failed:";
    for (const auto& e : errors) msg += "\n  - " + e;
    return msg;
}

std::string trim(std::string s) {
    s.erase(0, s.find_first_not_of(" \t\r"));
    s.erase(s.find_last_not_of(" \t\r") + 1);
    return s;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

double ExperimentConfig::scalar(const std::string& key) const {
    const auto& v = sweep(key);
    if (v.size() != 1)
        throw std::runtime_error("parameter '" + key + "' must be a single value");
    return v[0];
}

double ExperimentConfig::scalar_or(const std::string& key, double fallback) const {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    if (it->second.size() != 1)
        throw std::runtime_error("parameter '" + key + "' must be a single value");
    return it->second[0];
}

const std::vector<double>& ExperimentConfig::sweep(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) throw std::runtime_error("missing parameter '" + key + "'");
    return it->second;
}

const std::vector<std::string>& known_commands() {
    static const std::vector<std::string> cmds = {
        "thermal-entry",    "dynamics-entry", "greens",        "energy-density",
        "particle-density", "free-energy",    "clock-overlap", "theorem1-demo",
        "baseline-compare", "approx-bound"};
    return cmds;
}

ExperimentConfig parse_config(const std::string& text) {
    ExperimentConfig cfg;
    std::vector<std::string> errors;
    std::vector<std::string> model_lines;
    std::map<std::string, std::string> output_lines;
    std::map<std::string, std::string> param_lines;

    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto pos = line.find('#'); pos != std::string::npos) line.erase(pos);
        const std::string t = trim(line);
        if (t.empty()) continue;
        if (t.front() == '[' && t.back() == ']') {
            section = trim(t.substr(1, t.size() - 2));
            if (section != "model" && section != "parameters" && section != "outputs")
                errors.push_back("line " + std::to_string(lineno) + ": unknown section [" +
                                 section + "]");
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            errors.push_back("line " + std::to_string(lineno) + ": expected key = value");
            continue;
        }
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty()) {
            if (key == "command")
                cfg.command = value;
            else
                errors.push_back("line " + std::to_string(lineno) + ": unknown top-level key '" +
                                 key + "'");
        } else if (section == "model") {
            model_lines.push_back(key + " = " + value);
        } else if (section == "parameters") {
            if (param_lines.count(key))
                errors.push_back("line " + std::to_string(lineno) + ": duplicate parameter '" +
                                 key + "'");
            param_lines[key] = value;
        } else if (section == "outputs") {
            output_lines[key] = value;
        }
    }

    // command
    if (cfg.command.empty()) {
        errors.push_back("missing top-level 'command'");
    } else if (std::find(known_commands().begin(), known_commands().end(), cfg.command) ==
               known_commands().end()) {
        errors.push_back("unknown command '" + cfg.command + "'");
    }

    // model
    std::string model_type;
    std::string model_rest;
    std::map<std::string, std::string> model_kv;
    for (const auto& ml : model_lines) {
        const auto eq = ml.find('=');
        const std::string key = trim(ml.substr(0, eq));
        const std::string value = trim(ml.substr(eq + 1));
        if (key == "type")
            model_type = value;
        else {
            model_kv[key] = value;
            model_rest += ml + "\n";
        }
    }
    const bool model_needed = !cfg.command.empty() && cfg.command != "approx-bound" &&
                              cfg.command != "clock-overlap";
    if (model_type.empty() && model_needed && model_lines.empty()) {
        errors.push_back("missing [model] section");
    } else if (model_type.empty() && !model_lines.empty()) {
        errors.push_back("[model] section must set 'type'");
    }
    cfg.model.type = model_type.empty() ? "none" : model_type;
    auto parse_num = [&errors](const std::string& what, const std::string& s,
                               double& out) -> bool {
        try {
            size_t used = 0;
            out = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument("");
            return true;
        } catch (...) {
            errors.push_back("malformed numeric for " + what + ": '" + s + "'");
            return false;
        }
    };
    if (cfg.model.type == "lattice") {
        try {
            cfg.model.lattice = parse_lattice_spec(model_rest);
        } catch (const std::exception& e) {
            errors.push_back(std::string("model: ") + e.what());
        }
    } else if (cfg.model.type == "margulis") {
        double n = 0;
        if (!model_kv.count("N"))
            errors.push_back("margulis model requires N");
        else if (parse_num("model N", model_kv["N"], n))
            cfg.model.margulis_n = static_cast<std::int64_t>(n);
    } else if (cfg.model.type == "fermi-sea") {
        double n = 0, fill = 0;
        if (!model_kv.count("n") || !model_kv.count("fill"))
            errors.push_back("fermi-sea model requires n and fill");
        else {
            if (parse_num("model n", model_kv["n"], n)) cfg.model.fermi_n = static_cast<int>(n);
            if (parse_num("model fill", model_kv["fill"], fill)) cfg.model.fermi_fill = fill;
        }
    } else if (cfg.model.type == "clock") {
        try {
            if (model_kv.count("gates_file")) {
                std::ifstream f(model_kv["gates_file"]);
                if (!f) throw std::runtime_error("cannot open " + model_kv["gates_file"]);
                std::stringstream ss;
                ss << f.rdbuf();
                cfg.model.gates = parse_gate_list(ss.str());
            } else if (model_kv.count("gates")) {
                std::string g = model_kv["gates"];
                std::replace(g.begin(), g.end(), ';', '\n');
                cfg.model.gates = parse_gate_list(g);
            } else {
                throw std::runtime_error("clock model requires gates or gates_file");
            }
        } catch (const std::exception& e) {
            errors.push_back(std::string("model: ") + e.what());
        }
    } else if (cfg.model.type == "chain") {
        double l = 0;
        if (!model_kv.count("L"))
            errors.push_back("chain model requires L");
        else if (parse_num("model L", model_kv["L"], l))
            cfg.model.chain_len = static_cast<int>(l);
    } else if (cfg.model.type != "none") {
        errors.push_back("unknown model type '" + cfg.model.type + "'");
    }

    // parameters: comma-separated sweep lists
    for (const auto& [key, value] : param_lines) {
        std::vector<double> vals;
        std::string item;
        std::istringstream vs(value);
        bool ok = true;
        while (std::getline(vs, item, ',')) {
            item = trim(item);
            if (item.empty()) continue;
            double v = 0;
            ok = parse_num("parameter '" + key + "'", item, v) && ok;
            vals.push_back(v);
        }
        if (vals.empty()) {
            errors.push_back("parameter '" + key + "' has an empty sweep list");
            ok = false;
        }
        if (ok) cfg.params[key] = std::move(vals);
    }

    // outputs
    if (output_lines.count("csv")) cfg.csv_path = output_lines["csv"];
    if (output_lines.count("report")) cfg.report_path = output_lines["report"];

    // defaults and common validation
    cfg.seed = static_cast<std::uint64_t>(cfg.scalar_or("seed", 0.0));
    cfg.delta = cfg.scalar_or("delta", 0.05);
    for (const char* tol : {"eps_pa", "eps2", "eps", "delta"}) {
        auto it = cfg.params.find(tol);
        if (it != cfg.params.end())
            for (double v : it->second)
                if (v <= 0.0)
                    errors.push_back(std::string("parameter '") + tol + "' must be > 0");
    }
    if (cfg.has("beta"))
        for (double b : cfg.sweep("beta"))
            if (b < 0.0) errors.push_back("parameter 'beta' must be >= 0");
    if (cfg.has("eta"))
        for (double e : cfg.sweep("eta"))
            if (e <= 0.0) errors.push_back("parameter 'eta' must be > 0");

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

}  // namespace fermiblock
