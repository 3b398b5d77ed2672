#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dicke4/model.hpp"
#include "dicke4/phasediag.hpp"

namespace dicke4 {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Fixed output float format: 9 significant digits, '.' decimal separator.
std::string format_g9(double v);

// Strict config parsing: unknown or missing keys are errors (BadConfigFile);
// semantic checks go through validate(). The document is a JSON object with
// keys kind ("lambda"|"n"), Omega [2], omega [4], mu {"13":..}, Na.
ModelConfig parse_config(const std::string& text);
ModelConfig load_config(const std::string& path);

// Deterministic JSON rendering of a config (ordered keys, g9 floats).
std::string config_to_json_text(const ModelConfig& config, int indent = 0);

// CSV renderings, '\n' line endings, header rows as fixed by the CLI contract.
std::string scan_csv(const std::vector<ScanRow>& rows);
std::string grid_csv(const std::vector<GridRow>& rows);

struct RunManifest {
    std::string command;
    ModelConfig config;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::string timestamp;  // UTC, ISO-8601
    bool has_quantum = false;
    double quantum_tol = 0.0;
    int quantum_m_max = 0;

    std::string to_text() const;  // JSON document
};

std::string utc_timestamp();

}  // namespace dicke4
