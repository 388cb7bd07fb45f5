#include "granulyzer/serialization.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "granulyzer/errors.hpp"

namespace granulyzer {

using nlohmann::json;

nlohmann::json models_to_json(const std::string& workload, TopologyClass topology,
                              const KernelModel& kernel, const OverheadModel& overhead,
                              const FitDiagnostics& diagnostics) {
    json overhead_doc = {
        {"form", to_string(overhead.form)},
        {"beta", overhead.beta},
        {"alpha_clamped", overhead.alpha_clamped},
        {"beta_clamped", overhead.beta_clamped},
    };
    if (overhead.form != OverheadForm::Constant) {
        overhead_doc["alpha"] = overhead.alpha;
    }
    return json{
        {"workload", workload},
        {"topology", to_string(topology)},
        {"kernel", {{"a", kernel.a}}},
        {"overhead", overhead_doc},
        {"diagnostics",
         {
             {"kernel_rms_residual", diagnostics.kernel_rms_residual},
             {"overhead_rms_residual", diagnostics.overhead_rms_residual},
             {"points_used", diagnostics.points_used},
             {"filtered", diagnostics.filtered},
         }},
    };
}

ModelsDocument models_from_json(const json& doc) {
    ModelsDocument out;
    try {
        if (doc.contains("workload")) out.workload = doc.at("workload").get<std::string>();
        out.topology = topology_from_string(doc.at("topology").get<std::string>());
        out.kernel.a = doc.at("kernel").at("a").get<double>();
        const auto& ov = doc.at("overhead");
        out.overhead.form = overhead_form_from_string(ov.at("form").get<std::string>());
        out.overhead.beta = ov.at("beta").get<double>();
        if (out.overhead.form != OverheadForm::Constant) {
            out.overhead.alpha = ov.at("alpha").get<double>();
        }
        if (ov.contains("alpha_clamped")) {
            out.overhead.alpha_clamped = ov.at("alpha_clamped").get<bool>();
        }
        if (ov.contains("beta_clamped")) {
            out.overhead.beta_clamped = ov.at("beta_clamped").get<bool>();
        }
        if (doc.contains("diagnostics")) {
            const auto& d = doc.at("diagnostics");
            out.diagnostics.kernel_rms_residual = d.value("kernel_rms_residual", 0.0);
            out.diagnostics.overhead_rms_residual = d.value("overhead_rms_residual", 0.0);
            out.diagnostics.points_used = d.value("points_used", 0);
            out.diagnostics.filtered = d.value("filtered", false);
        }
    } catch (const json::exception& e) {
        throw config_error(std::string("models JSON: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw config_error(std::string("models JSON: ") + e.what());
    }
    if (!(out.kernel.a > 0.0)) throw config_error("models JSON: kernel.a must be > 0");
    if (out.overhead.alpha < 0.0 || out.overhead.beta < 0.0) {
        throw config_error("models JSON: overhead parameters must be >= 0");
    }
    return out;
}

ModelsDocument load_models_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open models file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw config_error(path + ": invalid JSON: " + e.what());
    }
    return models_from_json(doc);
}

nlohmann::json crossover_to_json(const CrossoverPrediction& p) {
    json doc = {
        {"exists_in_range", p.exists_in_range},
        {"range_hi", p.range_hi},
    };
    if (std::isfinite(p.p_star)) {
        doc["p_star"] = p.p_star;
    } else {
        doc["p_star"] = nullptr; // no crossover
    }
    return doc;
}

nlohmann::json verdict_to_json(const Verdict& v) {
    return json{
        {"P", v.ranks},
        {"choice", to_string(v.choice)},
        {"t_static_hat_ms", v.t_static_hat_ms},
        {"t_dyn_hat_ms", v.t_dyn_hat_ms},
        {"margin_ms", v.margin_ms},
    };
}

nlohmann::json curve_point_to_json(const CurvePoint& p) {
    json doc = {
        {"P", p.ranks},
        {"omega_pct", p.omega_pct},
        {"regime", to_string(p.regime)},
    };
    if (p.g.is_unbounded()) {
        doc["g"] = nullptr;
    } else {
        doc["g"] = p.g.value;
    }
    return doc;
}

std::string samples_to_csv_string(const std::vector<SampleRow>& rows) {
    std::ostringstream os;
    write_samples_csv(os, rows);
    return os.str();
}

std::vector<SampleRow> samples_from_csv_string(const std::string& text,
                                               const std::string& source_name) {
    std::istringstream is(text);
    return read_samples_csv(is, source_name);
}

} // namespace granulyzer
