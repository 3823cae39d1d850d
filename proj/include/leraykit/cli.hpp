#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "leraykit/certificate.hpp"

namespace leraykit::cli {

enum class OutputFormat { csv, json };

struct Grid {
    double min = 0;
    double max = 1000;
    int count = 50;
    bool log = true;
};

struct RunConfig {
    double tolerance = 1e-12;
    int k_max = 200;
    Grid grid;
    bool grid_min_set = false;
    OutputFormat format = OutputFormat::csv;
    std::string output;  // empty: stdout

    // DomainError if tolerance <= 0, count < 2 or min >= max.
    void validate() const;
};

// Cells are JSON scalars; doubles are rounded to 15 significant digits.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<nlohmann::json>> rows;
};

std::string to_csv(const Table& t);
void to_json(nlohmann::json& j, const Table& t);
void to_json(nlohmann::json& j, const RunConfig& c);

// {version, config, certificates, tables}
nlohmann::json report_bundle(const RunConfig& config, const std::vector<Certificate>& certificates,
                             const std::vector<Table>& tables);

// One command line without the program name. Returns the exit code:
// 0 success, 1 certificate failure, 2 usage or domain error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace leraykit::cli
