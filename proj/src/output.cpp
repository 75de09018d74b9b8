#include "pdc/output.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <openssl/evp.h>

namespace pdc {

std::string format_csv_number(double value)
{
	char buffer[40];
	std::snprintf(buffer, sizeof buffer, "%.16e", value);
	return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
	: path_{path}, out_{path, std::ios::binary}, columns_{header.size()}
{
	if(!out_)
	{
		throw std::runtime_error("cannot open " + path.string() + " for writing");
	}
	for(std::size_t i = 0; i < header.size(); ++i)
	{
		out_ << (i ? "," : "") << header[i];
	}
	out_ << '\n';
}

CsvWriter& CsvWriter::cell(double value)
{
	return cell(std::string_view(format_csv_number(value)));
}

CsvWriter& CsvWriter::cell(long long value)
{
	return cell(std::string_view(std::to_string(value)));
}

CsvWriter& CsvWriter::cell(std::string_view text)
{
	if(filled_ == columns_)
	{
		throw std::logic_error("CsvWriter: too many cells in row of " + path_.string());
	}
	out_ << (filled_++ ? "," : "") << text;
	return *this;
}

void CsvWriter::end_row()
{
	if(filled_ != columns_)
	{
		throw std::logic_error("CsvWriter: incomplete row in " + path_.string());
	}
	out_ << '\n';
	filled_ = 0;
	if(!out_)
	{
		throw std::runtime_error("write failed: " + path_.string());
	}
}

std::string sha256_file(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if(!in)
	{
		throw std::runtime_error("cannot read " + path.string());
	}
	EVP_MD_CTX* ctx = EVP_MD_CTX_new();
	EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
	char buffer[1 << 16];
	while(in.read(buffer, sizeof buffer) || in.gcount() > 0)
	{
		EVP_DigestUpdate(ctx, buffer, static_cast<std::size_t>(in.gcount()));
	}
	unsigned char digest[EVP_MAX_MD_SIZE];
	unsigned int length = 0;
	EVP_DigestFinal_ex(ctx, digest, &length);
	EVP_MD_CTX_free(ctx);

	std::ostringstream hex;
	hex << std::hex << std::setfill('0');
	for(unsigned int i = 0; i < length; ++i)
	{
		hex << std::setw(2) << static_cast<int>(digest[i]);
	}
	return hex.str();
}

std::string code_version()
{
	return PDC_VERSION;
}

nlohmann::json config_json(const SchemeConfig& config)
{
	nlohmann::json j = nlohmann::json::object();
	for(const auto& [key, value] : config_entries(config))
	{
		j[key] = value;
	}
	return j;
}

namespace {

std::string utc_timestamp()
{
	const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
	std::tm tm{};
	gmtime_r(&now, &tm);
	char buffer[32];
	std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
	return buffer;
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j)
{
	std::ofstream out(path, std::ios::binary);
	out << j.dump(2) << '\n';
	if(!out)
	{
		throw std::runtime_error("write failed: " + path.string());
	}
}

} // namespace

void write_run_record(const std::filesystem::path& out_dir, const std::string& command, const SchemeConfig& config,
                      const nlohmann::json& report, const std::vector<std::filesystem::path>& outputs)
{
	const auto report_path = out_dir / "report.json";
	write_json(report_path, report);

	nlohmann::json files = nlohmann::json::array();
	auto list = outputs;
	list.push_back(report_path);
	for(const auto& path : list)
	{
		files.push_back({{"path", path.filename().string()}, {"sha256", sha256_file(path)}});
	}
	const nlohmann::json manifest = {
		{"command", command},
		{"config", config_json(config)},
		{"version", code_version()},
		{"timestamp", utc_timestamp()},
		{"outputs", files},
	};
	write_json(out_dir / "manifest.json", manifest);
}

} // namespace pdc
