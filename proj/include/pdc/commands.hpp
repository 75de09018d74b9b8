#pragma once

// Command implementations behind the pdc executable. Each command writes its
// CSV files into an output directory and returns a JSON report; the caller
// records report.json and manifest.json next to them.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <vector>

#include <json.hpp>

#include "pdc/backend.hpp"
#include "pdc/bath.hpp"
#include "pdc/oracle.hpp"
#include "pdc/params.hpp"
#include "pdc/scheme.hpp"

namespace pdc {

inline constexpr int exit_ok = 0;
inline constexpr int exit_usage = 1;
inline constexpr int exit_validation = 2;

struct CommandOutput
{
	int exit_code = exit_ok;
	nlohmann::json report = nlohmann::json::object();
	std::vector<std::filesystem::path> files;
};

/// Backend selected by the config: the Weyl engine on the configured bath, or
/// the dense-matrix oracle on its truncated Fock model.
std::unique_ptr<Backend> make_backend(const SchemeConfig& config, const oracle::FockOptions& fock = {});

struct GkOptions
{
	double k_max = 0.0;      // nm^-1; 0 selects 4 * peak
	std::size_t points = 401;
	bool modes = false;      // also write the 19-mode table
};

CommandOutput cmd_gk(const SchemeConfig& config, const GkOptions& options, const std::filesystem::path& out_dir);

struct GainTauOptions
{
	enum class Mode { envelope, oscillation };

	Mode mode = Mode::envelope;
	double t = 20.0;          // ps, fixed time after the measurement
	double tau_center = 4.0;  // ps, oscillation mode only
	double window = 0.02;     // ps, full width of the oscillation window
	std::size_t points = 401; // oscillation samples
};

/// Largest delay step that resolves the fast qubit oscillation: (pi/20) hbar / Delta_eps.
double oscillation_step_limit(double delta_eps_ev);

CommandOutput cmd_gain_tau(const SchemeConfig& config, const GainTauOptions& options,
                           const std::filesystem::path& out_dir);

struct CoherenceOptions
{
	double tau_target = 4.0;
	std::vector<SpecialKind> kinds{SpecialKind::max_gain, SpecialKind::min_gain, SpecialKind::equal_gain};
};

const char* to_string(SpecialKind kind);

CommandOutput cmd_coherence_t(const SchemeConfig& config, const CoherenceOptions& options,
                              const std::filesystem::path& out_dir);

struct OracleCompareOptions
{
	oracle::FockOptions fock;
	double tolerance = 1e-8;
};

CommandOutput cmd_oracle_compare(const SchemeConfig& config, const OracleCompareOptions& options,
                                 const std::filesystem::path& out_dir);

enum class TheoremKind { commuting, state_commuting, generic };

struct TheoremOptions
{
	TheoremKind kind = TheoremKind::commuting;
	std::size_t seeds = 100;
	std::uint64_t first_seed = 1;
	Eigen::Index dimension = 4;
	std::size_t grid = 20;       // grid x grid points in (tau, t)
	double tau_max = 5.0;
	double t_max = 5.0;
	double tolerance = 1e-10;    // allowed negativity for the commuting suites
};

const char* to_string(TheoremKind kind);

CommandOutput cmd_theorem_check(const SchemeConfig& config, const TheoremOptions& options,
                                const std::filesystem::path& out_dir);

} // namespace pdc
