// pdc: reproduces the decoherence-control data sets as CSV files plus a
// report.json / manifest.json pair in the output directory.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pdc/commands.hpp"
#include "pdc/output.hpp"

namespace fs = std::filesystem;

namespace {

pdc::SchemeConfig resolve_config(const std::string& path, const std::vector<std::string>& overrides)
{
	std::string text;
	if(!path.empty())
	{
		std::ifstream in(path);
		if(!in)
		{
			throw std::runtime_error("cannot open config file " + path);
		}
		std::ostringstream buffer;
		buffer << in.rdbuf();
		text = buffer.str();
	}
	for(const auto& line : overrides)
	{
		text += "\n" + line;
	}
	return pdc::parse_config(text);
}

} // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Measurement-based pure-decoherence control: coherence, gains and envelopes"};
	app.require_subcommand(1);
	app.set_version_flag("--version", pdc::code_version());

	std::string config_path;
	std::string out_dir = ".";
	std::vector<std::string> overrides;
	app.add_option("-c,--config", config_path, "Config file (key = value lines)");
	app.add_option("-o,--out", out_dir, "Output directory");
	app.add_option("-s,--set", overrides, "Config override, e.g. --set temperature_k=70");

	pdc::GkOptions gk;
	auto* gk_cmd = app.add_subcommand("gk", "Spectral function G(k) and the 19-mode discretization");
	gk_cmd->add_option("--k-max", gk.k_max, "Largest wave number (nm^-1); default 4x the G(k) peak");
	gk_cmd->add_option("--points", gk.points, "Number of k samples")->check(CLI::PositiveNumber);
	gk_cmd->add_flag("--modes", gk.modes, "Also write modes.csv");

	pdc::GainTauOptions gain;
	std::string gain_mode = "envelope";
	auto* gain_cmd = app.add_subcommand("gain-tau", "Average gain as a function of the measurement delay");
	gain_cmd->add_option("--t", gain.t, "Time after the measurement (ps)");
	gain_cmd->add_option("--mode", gain_mode, "envelope | oscillation")
		->check(CLI::IsMember({"envelope", "oscillation"}));
	gain_cmd->add_option("--tau-center", gain.tau_center, "Centre of the oscillation window (ps)");
	gain_cmd->add_option("--window", gain.window, "Width of the oscillation window (ps)");
	gain_cmd->add_option("--points", gain.points, "Samples in the oscillation window");

	pdc::CoherenceOptions coherence;
	std::vector<std::string> kinds{"max", "min", "equal"};
	auto* coh_cmd = app.add_subcommand("coherence-t", "Post-measurement coherence versus time at special delays");
	coh_cmd->add_option("--tau-target", coherence.tau_target, "Approximate delay (ps)");
	coh_cmd->add_option("--kinds", kinds, "Subset of max,min,equal")
		->delimiter(',')
		->check(CLI::IsMember({"max", "min", "equal"}));

	pdc::OracleCompareOptions compare;
	auto* cmp_cmd = app.add_subcommand("oracle-compare", "Weyl engine versus dense-matrix oracle on a few-mode bath");
	cmp_cmd->add_option("--n-max", compare.fock.n_max, "Fock truncation per mode; default automatic")->delimiter(',');
	cmp_cmd->add_option("--cap", compare.fock.dimension_cap, "Largest allowed Fock dimension");
	cmp_cmd->add_option("--tolerance", compare.tolerance, "Largest accepted deviation");

	pdc::TheoremOptions theorem;
	std::string theorem_kind = "commuting";
	auto* thm_cmd = app.add_subcommand("theorem-check", "Sign of the average gain on random environments");
	thm_cmd->add_option("--kind", theorem_kind, "commuting | state-commuting | generic")
		->check(CLI::IsMember({"commuting", "state-commuting", "generic"}));
	thm_cmd->add_option("--seeds", theorem.seeds, "Number of environments");
	thm_cmd->add_option("--first-seed", theorem.first_seed, "Seed of the first environment");
	thm_cmd->add_option("--dim", theorem.dimension, "Environment dimension")->check(CLI::Range(2, 64));
	thm_cmd->add_option("--grid", theorem.grid, "Points per axis of the (tau, t) grid");
	thm_cmd->add_option("--tau-max", theorem.tau_max, "Largest delay (ps)");
	thm_cmd->add_option("--t-max", theorem.t_max, "Largest time after the measurement (ps)");

	try
	{
		app.parse(argc, argv);
	}
	catch(const CLI::ParseError& e)
	{
		const int code = app.exit(e);
		return code == 0 ? pdc::exit_ok : pdc::exit_usage;
	}

	try
	{
		const auto config = resolve_config(config_path, overrides);
		const fs::path out{out_dir};
		fs::create_directories(out);

		pdc::CommandOutput result;
		std::string command;
		if(*gk_cmd)
		{
			command = "gk";
			result = pdc::cmd_gk(config, gk, out);
		}
		else if(*gain_cmd)
		{
			command = "gain-tau";
			gain.mode = gain_mode == "envelope" ? pdc::GainTauOptions::Mode::envelope
			                                    : pdc::GainTauOptions::Mode::oscillation;
			result = pdc::cmd_gain_tau(config, gain, out);
		}
		else if(*coh_cmd)
		{
			command = "coherence-t";
			const std::map<std::string, pdc::SpecialKind> names{{"max", pdc::SpecialKind::max_gain},
			                                                    {"min", pdc::SpecialKind::min_gain},
			                                                    {"equal", pdc::SpecialKind::equal_gain}};
			coherence.kinds.clear();
			for(const auto& k : kinds)
			{
				coherence.kinds.push_back(names.at(k));
			}
			result = pdc::cmd_coherence_t(config, coherence, out);
		}
		else if(*cmp_cmd)
		{
			command = "oracle-compare";
			result = pdc::cmd_oracle_compare(config, compare, out);
		}
		else
		{
			command = "theorem-check";
			theorem.kind = theorem_kind == "commuting"         ? pdc::TheoremKind::commuting
			               : theorem_kind == "state-commuting" ? pdc::TheoremKind::state_commuting
			                                                   : pdc::TheoremKind::generic;
			result = pdc::cmd_theorem_check(config, theorem, out);
		}

		result.report["command"] = command;
		result.report["exit_code"] = result.exit_code;
		pdc::write_run_record(out, command, config, result.report, result.files);
		std::cout << result.report.dump(2) << '\n';
		return result.exit_code;
	}
	catch(const pdc::ConfigError& e)
	{
		std::cerr << "config error: " << e.what() << '\n';
	}
	catch(const std::exception& e)
	{
		std::cerr << "error: " << e.what() << '\n';
	}
	return pdc::exit_usage;
}
