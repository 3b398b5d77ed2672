#include "dicke4/io.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace dicke4 {

using nlohmann::json;

std::string format_g9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

namespace {

const json& require_key(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw Error(Errc::BadConfigFile, std::string("missing config key: ") + key);
    return *it;
}

double as_number(const json& j, const std::string& where) {
    if (!j.is_number()) throw Error(Errc::BadConfigFile, where + " must be a number");
    return j.get<double>();
}

}  // namespace

ModelConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(Errc::BadConfigFile, std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw Error(Errc::BadConfigFile, "config must be a JSON object");

    static const char* known[] = {"kind", "Omega", "omega", "mu", "Na"};
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known) ok = ok || it.key() == k;
        if (!ok) throw Error(Errc::BadConfigFile, "unknown config key: " + it.key());
    }

    ModelConfig config;
    const auto& kind = require_key(j, "kind");
    if (!kind.is_string()) throw Error(Errc::BadConfigFile, "kind must be a string");
    std::string ks = kind.get<std::string>();
    if (ks == "lambda")
        config.kind = Configuration::Lambda;
    else if (ks == "n")
        config.kind = Configuration::NConfig;
    else
        throw Error(Errc::BadConfigFile, "kind must be \"lambda\" or \"n\", got \"" + ks + "\"");

    const auto& Om = require_key(j, "Omega");
    if (!Om.is_array() || Om.size() != 2)
        throw Error(Errc::BadConfigFile, "Omega must be an array of 2 numbers");
    for (int s = 0; s < 2; ++s) config.Omega[s] = as_number(Om[s], "Omega");

    const auto& om = require_key(j, "omega");
    if (!om.is_array() || om.size() != 4)
        throw Error(Errc::BadConfigFile, "omega must be an array of 4 numbers");
    for (int k = 0; k < 4; ++k) config.omega[k] = as_number(om[k], "omega");

    const auto& mu = require_key(j, "mu");
    if (!mu.is_object()) throw Error(Errc::BadConfigFile, "mu must be an object");
    for (auto it = mu.begin(); it != mu.end(); ++it) {
        const std::string& key = it.key();
        if (key.size() != 2 || !std::isdigit(static_cast<unsigned char>(key[0])) ||
            !std::isdigit(static_cast<unsigned char>(key[1])))
            throw Error(Errc::BadConfigFile, "mu key must be two digits like \"13\": " + key);
        config.mu[{key[0] - '0', key[1] - '0'}] = as_number(it.value(), "mu." + key);
    }

    const auto& na = require_key(j, "Na");
    if (!na.is_number_integer()) throw Error(Errc::BadConfigFile, "Na must be an integer");
    config.Na = na.get<int>();

    return validate(std::move(config));
}

ModelConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::BadConfigFile, "cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return parse_config(os.str());
}

std::string config_to_json_text(const ModelConfig& config, int indent) {
    std::string pad(indent, ' ');
    std::ostringstream os;
    os << pad << "{\n";
    os << pad << "  \"kind\": \"" << configuration_name(config.kind) << "\",\n";
    os << pad << "  \"Omega\": [" << format_g9(config.Omega[0]) << ", " << format_g9(config.Omega[1])
       << "],\n";
    os << pad << "  \"omega\": [";
    for (int k = 0; k < 4; ++k) os << (k ? ", " : "") << format_g9(config.omega[k]);
    os << "],\n";
    os << pad << "  \"mu\": {";
    bool first = true;
    for (const auto& [key, val] : config.mu) {
        os << (first ? "" : ", ") << "\"" << key.first << key.second << "\": " << format_g9(val);
        first = false;
    }
    os << "},\n";
    os << pad << "  \"Na\": " << config.Na << "\n";
    os << pad << "}";
    return os.str();
}

std::string scan_csv(const std::vector<ScanRow>& rows) {
    std::ostringstream os;
    os << "param,region,energy,nu1,nu2,A11,A22,A33,A44\n";
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            os << format_g9(row.param) << ",error,,,,,,,\n";
            continue;
        }
        os << format_g9(row.param) << ',' << (row.region ? region_name(*row.region) : "") << ','
           << format_g9(row.obs.energy) << ',' << format_g9(row.obs.nu1) << ','
           << format_g9(row.obs.nu2);
        for (double a : row.obs.A) os << ',' << format_g9(a);
        os << '\n';
    }
    return os.str();
}

std::string grid_csv(const std::vector<GridRow>& rows) {
    std::ostringstream os;
    os << "p,q,region,energy\n";
    for (const auto& row : rows) {
        if (!row.error.empty()) {
            os << format_g9(row.p) << ',' << format_g9(row.q) << ",error,\n";
            continue;
        }
        os << format_g9(row.p) << ',' << format_g9(row.q) << ',' << region_name(row.region);
        if (row.tied_with) os << '|' << region_name(*row.tied_with);
        os << ',' << format_g9(row.energy) << '\n';
    }
    return os.str();
}

std::string utc_timestamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string RunManifest::to_text() const {
    std::ostringstream os;
    os << "{\n";
    os << "  \"command\": \"" << command << "\",\n";
    os << "  \"version\": \"" << kToolVersion << "\",\n";
    os << "  \"timestamp\": \"" << timestamp << "\",\n";
    os << "  \"parameters\": {";
    for (std::size_t i = 0; i < parameters.size(); ++i)
        os << (i ? ", " : "") << "\"" << parameters[i].first << "\": \"" << parameters[i].second
           << "\"";
    os << "},\n";
    if (has_quantum) {
        os << "  \"quantum\": {\"tol\": " << format_g9(quantum_tol)
           << ", \"M_max\": " << quantum_m_max << "},\n";
    }
    os << "  \"config\": " << config_to_json_text(config, 2).substr(2) << "\n";
    os << "}\n";
    return os.str();
}

}  // namespace dicke4
