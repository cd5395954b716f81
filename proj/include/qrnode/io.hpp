#pragma once

// Run-directory output: CSV curves, JSON sidecars and the run manifest.
// Every writer is deterministic in its inputs so reruns are byte-identical.

#include "qrnode/histogram.hpp"
#include "qrnode/quantum.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace qrnode::io {

std::string format_number(double x);

void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist);

// Two or more equally long columns under a header row.
void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);

// Row-major list of 16 [re, im] pairs.
nlohmann::json density_matrix_json(const quantum::Matrix4& m);

std::string utc_timestamp();

struct RunManifest
{
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string version;
    std::string command;
    std::string start_time;
    std::string end_time;
    std::vector<std::string> outputs;
    nlohmann::json config; // the validated configuration that was run

    nlohmann::json to_json() const;
};

const char* code_version();

} // namespace qrnode::io
