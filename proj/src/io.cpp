#include "qrnode/io.hpp"

#include "qrnode/errors.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>

namespace qrnode::io {

namespace {

std::ofstream open_for_write(const std::filesystem::path& path)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return out;
}

} // namespace

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

void write_histogram_csv(const std::filesystem::path& path, const Histogram& hist)
{
    auto out = open_for_write(path);
    out << "bin_start_ns,counts\n";
    for (std::size_t i = 0; i < hist.counts.size(); ++i)
        out << format_number(hist.bin_start(i) * 1e9) << ',' << hist.counts[i] << '\n';
}

void write_columns_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                       const std::vector<std::vector<double>>& columns)
{
    if (header.size() != columns.size() || columns.empty())
        throw std::invalid_argument("header and column count differ");
    for (const auto& c : columns)
        if (c.size() != columns[0].size())
            throw std::invalid_argument("columns differ in length");
    auto out = open_for_write(path);
    for (std::size_t k = 0; k < header.size(); ++k)
        out << (k ? "," : "") << header[k];
    out << '\n';
    for (std::size_t i = 0; i < columns[0].size(); ++i) {
        for (std::size_t k = 0; k < columns.size(); ++k)
            out << (k ? "," : "") << format_number(columns[k][i]);
        out << '\n';
    }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
    auto out = open_for_write(path);
    out << j.dump(2) << '\n';
}

nlohmann::json density_matrix_json(const quantum::Matrix4& m)
{
    nlohmann::json arr = nlohmann::json::array();
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c)
            arr.push_back({m(r, c).real(), m(r, c).imag()});
    return arr;
}

std::string utc_timestamp()
{
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

nlohmann::json RunManifest::to_json() const
{
    return {{"config_hash", config_hash}, {"seed", seed},         {"code_version", version},
            {"command", command},         {"start_time", start_time}, {"end_time", end_time},
            {"outputs", outputs},         {"config", config}};
}

const char* code_version()
{
    return QRNODE_VERSION;
}

} // namespace qrnode::io
