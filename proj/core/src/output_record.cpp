#include "peakbound/output_record.hpp"

#include <nlohmann/json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace peakbound {

Defaults Defaults::load() {
    Defaults d;
    const char* path = std::getenv("PEAKBOUND_CONFIG");
    if (path && *path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error(std::string("cannot open PEAKBOUND_CONFIG file: ") + path);
        nlohmann::json j;
        in >> j;
        d.oversampling_L = j.value("oversampling_L", d.oversampling_L);
        d.smith_grid_size = j.value("smith_grid_size", d.smith_grid_size);
        d.smith_tol = j.value("smith_tol", d.smith_tol);
        d.smith_max_iterations = j.value("smith_max_iterations", d.smith_max_iterations);
        d.quad_tol = j.value("quad_tol", d.quad_tol);
    }
    return d;
}

void OutputRecord::set(const std::string& key, double value, const std::string& unit) {
    outputs[key] = value;
    units[key] = unit;
}

nlohmann::json OutputRecord::to_json() const {
    nlohmann::json j;
    j["command"] = command;
    j["inputs"] = inputs;
    j["outputs"] = outputs;
    j["units"] = units;
    j["version"] = version;
    if (seed) j["seed"] = *seed;
    if (table) {
        nlohmann::json t;
        t["columns"] = table->columns;
        t["rows"] = table->rows;
        j["table"] = t;
    }
    return j;
}

OutputRecord OutputRecord::from_json(const nlohmann::json& j) {
    OutputRecord r;
    r.command = j.at("command").get<std::string>();
    r.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    r.outputs = j.at("outputs").get<std::map<std::string, double>>();
    r.units = j.at("units").get<std::map<std::string, std::string>>();
    r.version = j.at("version").get<std::string>();
    if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("table")) {
        Table t;
        t.columns = j.at("table").at("columns").get<std::vector<std::string>>();
        t.rows = j.at("table").at("rows").get<std::vector<std::vector<std::string>>>();
        r.table = std::move(t);
    }
    return r;
}

std::string OutputRecord::to_csv() const {
    std::ostringstream os;
    os << std::setprecision(17);
    os << "key,value,units\n";
    for (const auto& [k, v] : outputs) {
        auto u = units.find(k);
        os << k << "," << v << "," << (u != units.end() ? u->second : "") << "\n";
    }
    if (table) {
        os << "\n";
        for (size_t c = 0; c < table->columns.size(); ++c)
            os << (c ? "," : "") << table->columns[c];
        os << "\n";
        for (const auto& row : table->rows) {
            for (size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << row[c];
            os << "\n";
        }
    }
    return os.str();
}

std::string OutputRecord::to_text() const {
    std::ostringstream os;
    os << "# " << command << " (v" << version << ")\n";
    for (const auto& [k, v] : inputs) os << "  in  " << k << " = " << v << "\n";
    os << std::setprecision(12);
    for (const auto& [k, v] : outputs) {
        auto u = units.find(k);
        os << "  out " << k << " = " << v;
        if (u != units.end() && !u->second.empty()) os << " [" << u->second << "]";
        os << "\n";
    }
    if (seed) os << "  seed " << *seed << "\n";
    if (table) {
        os << "\n";
        for (size_t c = 0; c < table->columns.size(); ++c)
            os << (c ? "  " : "  ") << table->columns[c] << (c + 1 < table->columns.size() ? " | " : "");
        os << "\n";
        for (const auto& row : table->rows) {
            os << "  ";
            for (size_t c = 0; c < row.size(); ++c) os << row[c] << (c + 1 < row.size() ? " | " : "");
            os << "\n";
        }
    }
    return os.str();
}

} // namespace peakbound
