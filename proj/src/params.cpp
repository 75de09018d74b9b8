#include "pdc/params.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace pdc {

namespace {

std::string_view trim(std::string_view s)
{
	const auto first = s.find_first_not_of(" \t\r\n");
	if(first == std::string_view::npos)
	{
		return {};
	}
	const auto last = s.find_last_not_of(" \t\r\n");
	return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
	std::vector<std::string_view> parts;
	std::size_t pos = 0;
	while(true)
	{
		const auto next = s.find(sep, pos);
		parts.push_back(trim(s.substr(pos, next == std::string_view::npos ? next : next - pos)));
		if(next == std::string_view::npos)
		{
			break;
		}
		pos = next + 1;
	}
	return parts;
}

double parse_double(std::string_view text, const std::string& key)
{
	text = trim(text);
	double value = 0.0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if(ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
	{
		throw ConfigError(key, "expected a number, got '" + std::string(text) + "'");
	}
	return value;
}

std::size_t parse_count(std::string_view text, const std::string& key)
{
	text = trim(text);
	std::size_t value = 0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
	if(ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
	{
		throw ConfigError(key, "expected a non-negative integer, got '" + std::string(text) + "'");
	}
	return value;
}

std::string format_number(double x)
{
	char buf[64];
	std::snprintf(buf, sizeof buf, "%.17g", x);
	return buf;
}

void require_positive(double value, const char* key)
{
	if(!(value > 0.0) || !std::isfinite(value))
	{
		throw ConfigError(key, "must be strictly positive, got " + format_number(value));
	}
}

} // namespace

void MaterialParams::validate() const
{
	require_positive(sigma_diff_ev, "sigma_diff_ev");
	require_positive(rho_kg_m3, "rho_kg_m3");
	require_positive(c_m_s, "c_m_s");
	require_positive(l_perp_nm, "l_perp_nm");
	require_positive(l_z_nm, "l_z_nm");
	require_positive(delta_eps_ev, "delta_eps_ev");
}

std::vector<double> GridSpec::values() const
{
	std::vector<double> out(count);
	if(count == 1)
	{
		out[0] = start;
		return out;
	}
	const double step = (stop - start) / static_cast<double>(count - 1);
	for(std::size_t i = 0; i < count; ++i)
	{
		out[i] = start + step * static_cast<double>(i);
	}
	out.back() = stop;
	return out;
}

void GridSpec::validate(const std::string& key) const
{
	if(count == 0)
	{
		throw ConfigError(key, "grid needs at least one point");
	}
	if(!std::isfinite(start) || !std::isfinite(stop))
	{
		throw ConfigError(key, "grid bounds must be finite");
	}
	if(count > 1 && !(stop > start))
	{
		throw ConfigError(key, "grid must be strictly increasing");
	}
	if(start < 0.0)
	{
		throw ConfigError(key, "times must be non-negative");
	}
}

GridSpec parse_grid(std::string_view text, const std::string& key)
{
	const auto parts = split(trim(text), ':');
	if(parts.size() != 3)
	{
		throw ConfigError(key, "grid must be 'start:stop:count'");
	}
	GridSpec g{parse_double(parts[0], key), parse_double(parts[1], key), parse_count(parts[2], key)};
	g.validate(key);
	return g;
}

BathChoice parse_bath(std::string_view text, const std::string& key)
{
	text = trim(text);
	BathChoice bath;
	const auto colon = text.find(':');
	const auto head = trim(text.substr(0, colon));
	const auto rest = colon == std::string_view::npos ? std::string_view{} : trim(text.substr(colon + 1));

	if(head == "continuous" && rest.empty())
	{
		bath.kind = BathChoice::Kind::continuous;
	}
	else if(head == "paper19" && rest.empty())
	{
		bath.kind = BathChoice::Kind::paper19;
	}
	else if(head == "quadrature")
	{
		const auto parts = split(rest, ':');
		if(parts.size() != 2)
		{
			throw ConfigError(key, "expected quadrature:<n>:<k_max>");
		}
		bath.kind = BathChoice::Kind::quadrature;
		bath.quadrature_nodes = parse_count(parts[0], key);
		bath.k_max = parse_double(parts[1], key);
		if(bath.quadrature_nodes < 2 || !(bath.k_max > 0.0))
		{
			throw ConfigError(key, "quadrature needs n >= 2 and k_max > 0");
		}
	}
	else if(head == "subset")
	{
		bath.kind = BathChoice::Kind::subset;
		for(const auto part : split(rest, ','))
		{
			bath.indices.push_back(parse_count(part, key));
			if(bath.indices.back() >= 19)
			{
				throw ConfigError(key, "subset indices run from 0 to 18");
			}
		}
	}
	else if(head == "modes")
	{
		bath.kind = BathChoice::Kind::explicit_modes;
		for(const auto part : split(rest, ','))
		{
			const auto pair = split(part, ':');
			if(pair.size() != 2)
			{
				throw ConfigError(key, "expected modes:<omega>:<H>,...");
			}
			const double omega = parse_double(pair[0], key);
			const double weight = parse_double(pair[1], key);
			if(omega < 0.0 || weight < 0.0)
			{
				throw ConfigError(key, "mode frequency and weight must be non-negative");
			}
			bath.modes.emplace_back(omega, weight);
		}
	}
	else
	{
		throw ConfigError(key, "unknown bath '" + std::string(text) + "'");
	}
	return bath;
}

std::string to_string(const BathChoice& bath)
{
	switch(bath.kind)
	{
	case BathChoice::Kind::continuous:
		return "continuous";
	case BathChoice::Kind::paper19:
		return "paper19";
	case BathChoice::Kind::quadrature:
		return "quadrature:" + std::to_string(bath.quadrature_nodes) + ":" + format_number(bath.k_max);
	case BathChoice::Kind::subset: {
		std::string s = "subset:";
		for(std::size_t i = 0; i < bath.indices.size(); ++i)
		{
			s += (i ? "," : "") + std::to_string(bath.indices[i]);
		}
		return s;
	}
	case BathChoice::Kind::explicit_modes: {
		std::string s = "modes:";
		for(std::size_t i = 0; i < bath.modes.size(); ++i)
		{
			s += (i ? "," : "") + format_number(bath.modes[i].first) + ":" + format_number(bath.modes[i].second);
		}
		return s;
	}
	}
	return {};
}

void SchemeConfig::validate() const
{
	material.validate();
	if(!(temperature_k >= 0.0) || !std::isfinite(temperature_k))
	{
		throw ConfigError("temperature_k", "must be >= 0");
	}
	tau_grid.validate("tau_grid");
	t_grid.validate("t_grid");
	if(envelope_points < 16)
	{
		throw ConfigError("envelope_points", "must be >= 16");
	}
}

SchemeConfig parse_config(std::string_view text)
{
	SchemeConfig config;
	std::istringstream in{std::string(text)};
	std::string line;
	std::size_t line_no = 0;
	while(std::getline(in, line))
	{
		++line_no;
		std::string_view view = line;
		if(const auto hash = view.find('#'); hash != std::string_view::npos)
		{
			view = view.substr(0, hash);
		}
		view = trim(view);
		if(view.empty())
		{
			continue;
		}
		const auto eq = view.find('=');
		if(eq == std::string_view::npos)
		{
			throw ConfigError({}, "line " + std::to_string(line_no) + ": expected 'key = value'");
		}
		const std::string key{trim(view.substr(0, eq))};
		const auto value = trim(view.substr(eq + 1));

		auto& m = config.material;
		if(key == "sigma_diff_ev") m.sigma_diff_ev = parse_double(value, key);
		else if(key == "rho_kg_m3") m.rho_kg_m3 = parse_double(value, key);
		else if(key == "c_m_s") m.c_m_s = parse_double(value, key);
		else if(key == "l_perp_nm") m.l_perp_nm = parse_double(value, key);
		else if(key == "l_z_nm") m.l_z_nm = parse_double(value, key);
		else if(key == "delta_eps_ev") m.delta_eps_ev = parse_double(value, key);
		else if(key == "temperature_k") config.temperature_k = parse_double(value, key);
		else if(key == "envelope_points") config.envelope_points = parse_count(value, key);
		else if(key == "tau_grid") config.tau_grid = parse_grid(value, key);
		else if(key == "t_grid") config.t_grid = parse_grid(value, key);
		else if(key == "bath") config.bath = parse_bath(value, key);
		else if(key == "backend")
		{
			if(value == "weyl") config.backend = BackendKind::weyl;
			else if(value == "oracle") config.backend = BackendKind::oracle;
			else throw ConfigError(key, "expected 'weyl' or 'oracle'");
		}
		else
		{
			throw ConfigError(key, "unknown key");
		}
	}
	config.validate();
	return config;
}

SchemeConfig load_config(const std::filesystem::path& path)
{
	std::ifstream in(path);
	if(!in)
	{
		throw ConfigError({}, "cannot open config file '" + path.string() + "'");
	}
	std::ostringstream buffer;
	buffer << in.rdbuf();
	return parse_config(buffer.str());
}

std::vector<std::pair<std::string, std::string>> config_entries(const SchemeConfig& c)
{
	auto grid = [](const GridSpec& g) {
		return format_number(g.start) + ":" + format_number(g.stop) + ":" + std::to_string(g.count);
	};
	return {
		{"sigma_diff_ev", format_number(c.material.sigma_diff_ev)},
		{"rho_kg_m3", format_number(c.material.rho_kg_m3)},
		{"c_m_s", format_number(c.material.c_m_s)},
		{"l_perp_nm", format_number(c.material.l_perp_nm)},
		{"l_z_nm", format_number(c.material.l_z_nm)},
		{"delta_eps_ev", format_number(c.material.delta_eps_ev)},
		{"temperature_k", format_number(c.temperature_k)},
		{"backend", c.backend == BackendKind::weyl ? "weyl" : "oracle"},
		{"bath", to_string(c.bath)},
		{"envelope_points", std::to_string(c.envelope_points)},
		{"tau_grid", grid(c.tau_grid)},
		{"t_grid", grid(c.t_grid)},
	};
}

double bose_occupation(double energy_mev, double temperature_k)
{
	if(!(energy_mev > 0.0))
	{
		throw std::domain_error("bose_occupation: energy must be positive");
	}
	if(temperature_k < 0.0)
	{
		throw std::domain_error("bose_occupation: temperature must be non-negative");
	}
	if(temperature_k == 0.0)
	{
		return 0.0;
	}
	return 1.0 / std::expm1(energy_mev / (units::k_boltzmann * temperature_k));
}

} // namespace pdc
