#include "granulyzer/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "granulyzer/errors.hpp"

namespace granulyzer {

using nlohmann::json;

WorkloadSpec ExperimentConfig::resolve_workload() const {
    if (workload.empty()) {
        throw config_error("config: 'workload' is required");
    }
    WorkloadSpec spec = preset(workload);
    for (const auto& [key, value] : param_overrides) {
        set_param(spec, key, value);
    }
    return spec;
}

std::vector<int> parse_ranks(const std::string& text) {
    if (text.empty()) {
        throw config_error("ranks: empty specification");
    }
    std::vector<int> out;
    if (text.find(':') != std::string::npos) {
        // a:b:x2 — powers-of-two progression from a to b
        std::istringstream ss(text);
        std::string a, b, step;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, step, ':');
        if (step != "x2") {
            throw config_error("ranks: unsupported step '" + step + "' (only x2)");
        }
        int lo = 0, hi = 0;
        try {
            lo = std::stoi(a);
            hi = std::stoi(b);
        } catch (const std::exception&) {
            throw config_error("ranks: malformed range '" + text + "'");
        }
        if (lo < 1 || hi < lo) {
            throw config_error("ranks: need 1 <= lo <= hi in '" + text + "'");
        }
        for (long p = lo; p <= hi; p *= 2) {
            out.push_back(static_cast<int>(p));
        }
    } else {
        std::istringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ',')) {
            try {
                out.push_back(std::stoi(item));
            } catch (const std::exception&) {
                throw config_error("ranks: malformed entry '" + item + "'");
            }
        }
    }
    if (out.empty()) {
        throw config_error("ranks: empty list");
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] < 1) throw config_error("ranks: entries must be >= 1");
        if (i > 0 && out[i] <= out[i - 1]) {
            throw config_error("ranks: entries must be strictly ascending");
        }
    }
    return out;
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (allowed.find(key) == allowed.end()) {
            throw config_error("config: unknown key '" + key + "' in " + where);
        }
    }
}

} // namespace

ExperimentConfig parse_config_text(const std::string& json_text, const std::string& source_name) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw config_error(source_name + ": invalid JSON: " + e.what());
    }
    if (!doc.is_object()) {
        throw config_error(source_name + ": config must be a JSON object");
    }
    reject_unknown_keys(doc,
                        {"workload", "params", "ranks", "phases", "seed", "mode", "penalty",
                         "thresholds", "boundary", "edge_budget", "output"},
                        "config");

    ExperimentConfig cfg;
    try {
        if (doc.contains("workload")) cfg.workload = doc.at("workload").get<std::string>();
        if (doc.contains("params")) {
            const auto& params = doc.at("params");
            if (!params.is_object()) throw config_error("config: 'params' must be an object");
            for (const auto& [key, value] : params.items()) {
                if (!value.is_number()) {
                    throw config_error("config: param '" + key + "' must be numeric");
                }
                cfg.param_overrides[key] = value.get<double>();
            }
        }
        if (doc.contains("ranks")) {
            const auto& ranks = doc.at("ranks");
            if (ranks.is_string()) {
                cfg.ranks = parse_ranks(ranks.get<std::string>());
            } else if (ranks.is_array()) {
                std::string joined;
                for (const auto& v : ranks) {
                    if (!v.is_number_integer()) {
                        throw config_error("config: 'ranks' entries must be integers");
                    }
                    if (!joined.empty()) joined += ",";
                    joined += std::to_string(v.get<long>());
                }
                cfg.ranks = parse_ranks(joined);
            } else {
                throw config_error("config: 'ranks' must be a string or array");
            }
        }
        if (doc.contains("phases")) cfg.phases = doc.at("phases").get<int>();
        if (doc.contains("seed")) {
            cfg.seed = doc.at("seed").get<std::uint64_t>();
            cfg.seed_set = true;
        }
        if (doc.contains("mode")) cfg.mode = mode_from_string(doc.at("mode").get<std::string>());
        if (doc.contains("penalty")) cfg.penalty = doc.at("penalty").get<double>();
        if (doc.contains("thresholds")) {
            const auto& th = doc.at("thresholds");
            reject_unknown_keys(th, {"detrimental_max", "marginal_max"}, "thresholds");
            if (th.contains("detrimental_max")) {
                cfg.thresholds.detrimental_max = th.at("detrimental_max").get<double>();
            }
            if (th.contains("marginal_max")) {
                cfg.thresholds.marginal_max = th.at("marginal_max").get<double>();
            }
        }
        if (doc.contains("boundary")) {
            const auto b = doc.at("boundary").get<std::string>();
            if (b == "clamp") {
                cfg.boundary = BoundaryMode::Clamp;
            } else if (b == "wrap") {
                cfg.boundary = BoundaryMode::Wrap;
            } else {
                throw config_error("config: boundary must be 'clamp' or 'wrap'");
            }
        }
        if (doc.contains("edge_budget")) cfg.edge_budget = doc.at("edge_budget").get<std::uint64_t>();
        if (doc.contains("output")) {
            const auto& out = doc.at("output");
            reject_unknown_keys(out, {"samples_csv", "trace_csv", "report_json", "svg"}, "output");
            if (out.contains("samples_csv")) {
                cfg.output.samples_csv = out.at("samples_csv").get<std::string>();
            }
            if (out.contains("trace_csv")) {
                cfg.output.trace_csv = out.at("trace_csv").get<std::string>();
            }
            if (out.contains("report_json")) {
                cfg.output.report_json = out.at("report_json").get<std::string>();
            }
            if (out.contains("svg")) cfg.output.svg = out.at("svg").get<std::string>();
        }
    } catch (const json::exception& e) {
        throw config_error(source_name + ": " + e.what());
    }
    if (cfg.phases < 1) throw config_error("config: phases must be >= 1");
    if (cfg.penalty && !(*cfg.penalty >= 1.0)) {
        throw config_error("config: penalty must be >= 1");
    }
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw io_error("cannot open config '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

} // namespace granulyzer
