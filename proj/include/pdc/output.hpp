#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "pdc/params.hpp"

namespace pdc {

/// 17 significant digits, scientific notation, '.' decimal point.
std::string format_csv_number(double value);

/// Header-first CSV writer; rows are written in call order.
class CsvWriter
{
public:
	CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

	CsvWriter& cell(double value);
	CsvWriter& cell(long long value);
	CsvWriter& cell(std::string_view text);
	void end_row();

	[[nodiscard]] const std::filesystem::path& path() const { return path_; }

private:
	std::filesystem::path path_;
	std::ofstream out_;
	std::size_t columns_ = 0;
	std::size_t filled_ = 0;
};

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

std::string code_version();

nlohmann::json config_json(const SchemeConfig& config);

/// Writes report.json and manifest.json into out_dir. The manifest lists every
/// output with its checksum, the resolved config, code version and timestamp.
void write_run_record(const std::filesystem::path& out_dir, const std::string& command, const SchemeConfig& config,
                      const nlohmann::json& report, const std::vector<std::filesystem::path>& outputs);

} // namespace pdc
