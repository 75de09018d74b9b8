#pragma once

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace pdc {

// Internal units: meV, ps, nm, K. Angular frequencies in rad/ps, wave numbers in nm^-1.
namespace units {

inline constexpr double hbar = 0.6582120;        // meV ps
inline constexpr double k_boltzmann = 0.08617333; // meV / K
inline constexpr double mev_per_ev = 1000.0;
inline constexpr double nm_per_ps_per_m_per_s = 1e-3;

// SI values, only used to evaluate the deformation-potential prefactor.
inline constexpr double joule_per_ev = 1.602176634e-19;
inline constexpr double hbar_si = 1.054571817e-34; // J s

inline constexpr double ev_to_rad_per_ps(double energy_ev)
{
	return energy_ev * mev_per_ev / hbar;
}

inline constexpr double rad_per_ps_to_ev(double omega)
{
	return omega * hbar / mev_per_ev;
}

} // namespace units

class ConfigError : public std::runtime_error
{
public:
	ConfigError(std::string key, const std::string& what)
		: std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key))
	{ }

	[[nodiscard]] const std::string& key() const noexcept { return key_; }

private:
	std::string key_;
};

/// Deformation-potential coupling and qubit parameters. Defaults are a small
/// self-assembled GaAs quantum dot.
struct MaterialParams
{
	double sigma_diff_ev = 9.0; // sigma_e - sigma_h
	double rho_kg_m3 = 5360.0;
	double c_m_s = 5100.0;
	double l_perp_nm = 4.0;
	double l_z_nm = 1.0;
	double delta_eps_ev = 1.0;

	[[nodiscard]] double sound_speed() const noexcept // nm/ps
	{
		return c_m_s * units::nm_per_ps_per_m_per_s;
	}

	/// Throws ConfigError naming the first non-positive field.
	void validate() const;
};

enum class BackendKind { weyl, oracle };

/// Uniform grid of `count` points from `start` to `stop` inclusive.
struct GridSpec
{
	double start = 0.0;
	double stop = 0.0;
	std::size_t count = 1;

	[[nodiscard]] std::vector<double> values() const;
	void validate(const std::string& key) const;
};

/// Parses "start:stop:count".
GridSpec parse_grid(std::string_view text, const std::string& key = {});

struct BathChoice
{
	enum class Kind { continuous, quadrature, paper19, subset, explicit_modes };

	Kind kind = Kind::continuous;
	std::size_t quadrature_nodes = 1500;
	double k_max = 0.0; // nm^-1; 0 selects the default multiple of the G(k) peak
	std::vector<std::size_t> indices;                  // subset of the 19-mode grid
	std::vector<std::pair<double, double>> modes;      // (omega rad/ps, H_i)
};

/// Grammar: continuous | quadrature:<n>:<k_max> | paper19 | subset:<i>,<j>,...
///          | modes:<omega>:<H>,<omega>:<H>,...
BathChoice parse_bath(std::string_view text, const std::string& key = "bath");
std::string to_string(const BathChoice& bath);

struct SchemeConfig
{
	MaterialParams material;
	double temperature_k = 34.0;
	GridSpec tau_grid{0.0, 8.0, 801};
	GridSpec t_grid{0.0, 20.0, 201};
	BackendKind backend = BackendKind::weyl;
	BathChoice bath;
	std::size_t envelope_points = 4096;

	void validate() const;
};

/// Flat `key = value` text, `#` starts a comment. Unspecified keys keep their defaults.
SchemeConfig parse_config(std::string_view text);
SchemeConfig load_config(const std::filesystem::path& path);

/// Key/value listing of a resolved config, in file syntax.
std::vector<std::pair<std::string, std::string>> config_entries(const SchemeConfig& config);

/// Bose-Einstein occupation for a mode of the given energy (meV). Zero at T = 0.
double bose_occupation(double energy_mev, double temperature_k);

} // namespace pdc
