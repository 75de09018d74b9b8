#include "pdc/commands.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "pdc/output.hpp"
#include "pdc/parallel.hpp"
#include "pdc/weyl_backend.hpp"

namespace pdc {

namespace {

using nlohmann::json;

std::vector<double> linspace(double start, double stop, std::size_t count)
{
	return GridSpec{start, stop, count}.values();
}

double sandwich_violation(const SchemePoint& p)
{
	const double a = std::abs(p.A);
	const double b = std::abs(p.B);
	const double lower = 2.0 * std::max(a, b) - p.D_av;
	const double upper = p.D_av - 2.0 * std::sqrt(a * a + b * b);
	return std::max({0.0, lower, upper});
}

struct Deviation
{
	double value = 0.0;
	double tau = 0.0;
	double t = 0.0;

	void update(double d, double at_tau, double at_t)
	{
		if(d > value)
		{
			value = d;
			tau = at_tau;
			t = at_t;
		}
	}

	[[nodiscard]] json to_json() const { return {{"max_abs", value}, {"tau", tau}, {"t", t}}; }
};

} // namespace

std::unique_ptr<Backend> make_backend(const SchemeConfig& config, const oracle::FockOptions& fock)
{
	const auto bath = make_bath(config.bath, config.material, config.temperature_k);
	if(config.backend == BackendKind::weyl)
	{
		return std::make_unique<WeylBackend>(bath);
	}
	return std::make_unique<oracle::OracleBackend>(oracle::build_fock(bath, fock).env);
}

CommandOutput cmd_gk(const SchemeConfig& config, const GkOptions& options, const std::filesystem::path& out_dir)
{
	const auto& m = config.material;
	m.validate();
	if(options.points < 2)
	{
		throw ConfigError("points", "need at least 2 grid points");
	}
	const double peak = spectral_peak(m);
	const double k_max = options.k_max > 0.0 ? options.k_max : 4.0 * peak;

	CommandOutput out;
	const auto ks = linspace(0.0, k_max, options.points);
	std::vector<double> gs(ks.size());
	parallel_for(ks.size(), [&](std::size_t i) { gs[i] = spectral_G(ks[i], m); });
	{
		CsvWriter csv(out_dir / "gk.csv", {"k_nm_inv", "G_nm"});
		for(std::size_t i = 0; i < ks.size(); ++i)
		{
			csv.cell(ks[i]).cell(gs[i]).end_row();
		}
		out.files.push_back(csv.path());
	}

	const auto paper = discretize_paper(m, config.temperature_k);
	const double total = spectral_weight(m);
	const double discrete = paper.total_weight();
	if(options.modes)
	{
		CsvWriter csv(out_dir / "modes.csv", {"i", "k_nm_inv", "omega_rad_ps", "H_i"});
		for(std::size_t i = 0; i < paper.modes.size(); ++i)
		{
			const auto& mode = paper.modes[i];
			csv.cell(static_cast<long long>(i)).cell(mode.k).cell(mode.omega).cell(mode.weight).end_row();
		}
		out.files.push_back(csv.path());
	}

	out.report = {
		{"peak_k_nm_inv", peak},
		{"delta_k_nm_inv", paper.modes[1].k - paper.modes[0].k},
		{"H_total", total},
		{"H_discrete_sum", discrete},
		{"H_ratio", total / discrete},
		{"k_max_nm_inv", k_max},
		{"points", options.points},
	};
	return out;
}

double oscillation_step_limit(double delta_eps_ev)
{
	return std::numbers::pi / 20.0 / units::ev_to_rad_per_ps(delta_eps_ev);
}

CommandOutput cmd_gain_tau(const SchemeConfig& config, const GainTauOptions& options,
                           const std::filesystem::path& out_dir)
{
	config.validate();
	if(options.t < 0.0)
	{
		throw ConfigError("t", "must be non-negative");
	}
	const auto backend = make_backend(config);
	const double ts[] = {options.t};
	CommandOutput out;
	double violation = 0.0;

	if(options.mode == GainTauOptions::Mode::envelope)
	{
		const auto taus = config.tau_grid.values();
		const auto traces = backend->traces_grid(taus, ts);
		std::vector<EnvelopePoint> rows(taus.size());
		parallel_for(taus.size(), [&](std::size_t i) {
			rows[i] = envelope_from_traces(traces[i], taus[i], options.t, config.envelope_points);
		});

		CsvWriter csv(out_dir / "gain_tau.csv",
		              {"tau_ps", "t_ps", "D", "Dav_min", "Dav_max", "g_min", "g_max", "gnorm_min", "gnorm_max",
		               "Dplus_min", "Dplus_max", "Dminus_min", "Dminus_max", "theta_at_min", "theta_at_max",
		               "norm_defined"});
		double gnorm_min = std::numeric_limits<double>::infinity();
		double gnorm_min_tau = 0.0;
		for(const auto& r : rows)
		{
			csv.cell(r.tau).cell(r.t).cell(r.D).cell(r.Dav_min).cell(r.Dav_max).cell(r.g_min).cell(r.g_max);
			csv.cell(r.gnorm_min).cell(r.gnorm_max).cell(r.Dplus_min).cell(r.Dplus_max);
			csv.cell(r.Dminus_min).cell(r.Dminus_max).cell(r.theta_at_min).cell(r.theta_at_max);
			csv.cell(static_cast<long long>(r.norm_defined)).end_row();
			violation = std::max(violation, r.sandwich_violation);
			if(r.norm_defined && r.gnorm_min < gnorm_min)
			{
				gnorm_min = r.gnorm_min;
				gnorm_min_tau = r.tau;
			}
		}
		out.files.push_back(csv.path());
		out.report["mode"] = "envelope";
		out.report["gnorm_min"] = std::isfinite(gnorm_min) ? json(gnorm_min) : json(nullptr);
		out.report["gnorm_min_tau"] = gnorm_min_tau;
	}
	else
	{
		if(options.points < 2 || !(options.window > 0.0))
		{
			throw ConfigError("window", "oscillation window needs a positive width and at least 2 points");
		}
		const double step = options.window / static_cast<double>(options.points - 1);
		const double limit = oscillation_step_limit(config.material.delta_eps_ev);
		if(step > limit)
		{
			throw ConfigError("window", "delay step " + format_csv_number(step) + " ps exceeds " +
			                                format_csv_number(limit) + " ps needed to resolve the qubit oscillation");
		}
		const double start = std::max(0.0, options.tau_center - 0.5 * options.window);
		const auto taus = linspace(start, start + options.window, options.points);
		const auto traces = backend->traces_grid(taus, ts);

		CsvWriter csv(out_dir / "gain_tau.csv",
		              {"tau_ps", "t_ps", "theta", "D", "D_plus", "D_minus", "p_plus", "p_minus", "g_plus", "g_minus",
		               "g_av", "g_av_norm", "plus_defined", "minus_defined", "norm_defined"});
		for(std::size_t i = 0; i < taus.size(); ++i)
		{
			const double theta = qubit_phase(config.material.delta_eps_ev, taus[i]);
			const auto p = assemble_point(traces[i], theta, taus[i], options.t);
			csv.cell(p.tau).cell(p.t).cell(theta).cell(p.D).cell(p.D_plus).cell(p.D_minus);
			csv.cell(p.p_plus).cell(p.p_minus).cell(p.g_plus).cell(p.g_minus).cell(p.g_av).cell(p.g_av_norm);
			csv.cell(static_cast<long long>(p.plus_defined)).cell(static_cast<long long>(p.minus_defined));
			csv.cell(static_cast<long long>(p.norm_defined)).end_row();
			violation = std::max(violation, sandwich_violation(p));
		}
		out.files.push_back(csv.path());
		out.report["mode"] = "oscillation";
		out.report["step_ps"] = step;
		out.report["step_limit_ps"] = limit;
	}
	out.report["t_ps"] = options.t;
	out.report["sandwich_violation"] = violation;
	return out;
}

const char* to_string(SpecialKind kind)
{
	switch(kind)
	{
	case SpecialKind::max_gain:
		return "max";
	case SpecialKind::min_gain:
		return "min";
	case SpecialKind::equal_gain:
		return "equal";
	}
	return "?";
}

CommandOutput cmd_coherence_t(const SchemeConfig& config, const CoherenceOptions& options,
                              const std::filesystem::path& out_dir)
{
	config.validate();
	const auto backend = make_backend(config);
	const auto ts = config.t_grid.values();
	CommandOutput out;
	out.report["kinds"] = json::object();
	double violation = 0.0;
	for(const auto kind : options.kinds)
	{
		const double tau = special_tau(config.material.delta_eps_ev, options.tau_target, kind);
		const auto rows = coherence_vs_t(*backend, config.material.delta_eps_ev, tau, ts);
		CsvWriter csv(out_dir / (std::string("coherence_t_") + to_string(kind) + ".csv"),
		              {"t_ps", "D", "D_plus", "D_minus", "p_plus", "p_minus", "g_av", "tau_ps"});
		for(const auto& p : rows)
		{
			csv.cell(p.t).cell(p.D).cell(p.D_plus).cell(p.D_minus).cell(p.p_plus).cell(p.p_minus).cell(p.g_av);
			csv.cell(p.tau).end_row();
			violation = std::max(violation, sandwich_violation(p));
		}
		out.files.push_back(csv.path());
		out.report["kinds"][to_string(kind)] = {{"tau_ps", tau}, {"p_plus", rows.front().p_plus}};
	}
	out.report["tau_target_ps"] = options.tau_target;
	out.report["sandwich_violation"] = violation;
	return out;
}

CommandOutput cmd_oracle_compare(const SchemeConfig& config, const OracleCompareOptions& options,
                                 const std::filesystem::path& out_dir)
{
	config.validate();
	const auto bath = make_bath(config.bath, config.material, config.temperature_k);
	std::size_t coupled = 0;
	for(const auto& mode : bath.modes)
	{
		coupled += mode.omega > 0.0 && mode.ratio > 0.0;
	}
	if(coupled > 2)
	{
		throw ConfigError("bath", "oracle-compare supports at most 2 coupled modes, got " + std::to_string(coupled));
	}

	CommandOutput out;
	oracle::FockEnvironment fock;
	try
	{
		fock = oracle::build_fock(bath, options.fock);
	}
	catch(const oracle::TruncationError& e)
	{
		out.exit_code = exit_validation;
		out.report = {{"status", "truncation"}, {"diagnostic", e.what()}};
		return out;
	}

	const WeylBackend weyl(bath);
	const oracle::OracleBackend dense(fock.env);
	const auto taus = config.tau_grid.values();
	const auto ts = config.t_grid.values();
	const auto a = weyl.traces_grid(taus, ts);
	const auto b = dense.traces_grid(taus, ts);

	Deviation d_dev, pp_dev, pm_dev, dp_dev, dm_dev, g_dev, trace_dev;
	CsvWriter csv(out_dir / "oracle_compare.csv",
	              {"tau_ps", "t_ps", "D_weyl", "D_oracle", "p_plus_weyl", "p_plus_oracle", "D_plus_weyl",
	               "D_plus_oracle", "D_minus_weyl", "D_minus_oracle", "g_av_weyl", "g_av_oracle"});
	for(std::size_t ia = 0; ia < taus.size(); ++ia)
	{
		const double theta = qubit_phase(config.material.delta_eps_ev, taus[ia]);
		for(std::size_t ib = 0; ib < ts.size(); ++ib)
		{
			const auto& xa = a[ia * ts.size() + ib];
			const auto& xb = b[ia * ts.size() + ib];
			const auto p = assemble_point(xa, theta, taus[ia], ts[ib]);
			const auto q = assemble_point(xb, theta, taus[ia], ts[ib]);
			d_dev.update(std::abs(p.D - q.D), p.tau, p.t);
			pp_dev.update(std::abs(p.p_plus - q.p_plus), p.tau, p.t);
			pm_dev.update(std::abs(p.p_minus - q.p_minus), p.tau, p.t);
			dp_dev.update(std::abs(p.D_plus - q.D_plus), p.tau, p.t);
			dm_dev.update(std::abs(p.D_minus - q.D_minus), p.tau, p.t);
			g_dev.update(std::abs(p.g_av - q.g_av), p.tau, p.t);
			for(auto d : {xa.x00 - xb.x00, xa.x11 - xb.x11, xa.x01 - xb.x01, xa.x10 - xb.x10,
			              xa.x01_prep - xb.x01_prep, xa.x01_free - xb.x01_free})
			{
				trace_dev.update(std::abs(d), p.tau, p.t);
			}
			csv.cell(p.tau).cell(p.t).cell(p.D).cell(q.D).cell(p.p_plus).cell(q.p_plus).cell(p.D_plus);
			csv.cell(q.D_plus).cell(p.D_minus).cell(q.D_minus).cell(p.g_av).cell(q.g_av).end_row();
		}
	}
	out.files.push_back(csv.path());

	const double worst = std::max({d_dev.value, pp_dev.value, pm_dev.value, dp_dev.value, dm_dev.value,
	                               g_dev.value, trace_dev.value});
	out.exit_code = worst > options.tolerance ? exit_validation : exit_ok;
	json n_max = json::array();
	for(auto n : fock.n_max)
	{
		n_max.push_back(n);
	}
	out.report = {
		{"status", out.exit_code == exit_ok ? "agree" : "mismatch"},
		{"tolerance", options.tolerance},
		{"max_deviation", worst},
		{"deviations",
		 {{"D", d_dev.to_json()},
		  {"p_plus", pp_dev.to_json()},
		  {"p_minus", pm_dev.to_json()},
		  {"D_plus", dp_dev.to_json()},
		  {"D_minus", dm_dev.to_json()},
		  {"g_av", g_dev.to_json()},
		  {"traces", trace_dev.to_json()}}},
		{"coupled_modes", coupled},
		{"n_max", n_max},
		{"fock_dimension", fock.env.dimension()},
		{"thermal_tail", fock.worst_tail},
		{"points", taus.size() * ts.size()},
	};
	return out;
}

const char* to_string(TheoremKind kind)
{
	switch(kind)
	{
	case TheoremKind::commuting:
		return "commuting";
	case TheoremKind::state_commuting:
		return "state-commuting";
	case TheoremKind::generic:
		return "generic";
	}
	return "?";
}

CommandOutput cmd_theorem_check(const SchemeConfig& config, const TheoremOptions& options,
                                const std::filesystem::path& out_dir)
{
	config.validate();
	if(options.seeds == 0 || options.grid < 2)
	{
		throw ConfigError("seeds", "need at least one seed and a grid of at least 2 points");
	}
	const auto taus = linspace(0.0, options.tau_max, options.grid);
	const auto ts = linspace(0.0, options.t_max, options.grid);

	struct SeedResult
	{
		double g_min = std::numeric_limits<double>::infinity();
		double tau = 0.0, t = 0.0, theta = 0.0;
		oracle::CommutationNorms norms;
	};
	std::vector<SeedResult> results(options.seeds);

	for(std::size_t s = 0; s < options.seeds; ++s)
	{
		const std::uint64_t seed = options.first_seed + s;
		oracle::GenericEnvironment env;
		switch(options.kind)
		{
		case TheoremKind::commuting:
			env = oracle::random_commuting_env(seed, options.dimension);
			break;
		case TheoremKind::state_commuting:
			env = oracle::random_state_commuting_env(seed, options.dimension);
			break;
		case TheoremKind::generic:
			env = oracle::random_generic_env(seed, options.dimension);
			break;
		}
		const oracle::OracleBackend backend(env);
		const auto traces = backend.traces_grid(taus, ts);
		std::vector<EnvelopePoint> envs(traces.size());
		parallel_for(traces.size(), [&](std::size_t i) {
			envs[i] = envelope_from_traces(traces[i], taus[i / ts.size()], ts[i % ts.size()],
			                               config.envelope_points);
		});
		auto& r = results[s];
		for(const auto& e : envs)
		{
			if(e.g_min < r.g_min)
			{
				r.g_min = e.g_min;
				r.tau = e.tau;
				r.t = e.t;
				r.theta = e.theta_at_min;
			}
		}
		r.norms = oracle::commutation_norms(env, options.t_max, options.tau_max);
	}

	CommandOutput out;
	CsvWriter csv(out_dir / "theorem_check.csv", {"seed", "g_av_min", "tau_ps", "t_ps", "theta", "comm_w0_w1",
	                                              "comm_w0_R", "comm_w1_R"});
	std::size_t worst = 0;
	for(std::size_t s = 0; s < results.size(); ++s)
	{
		const auto& r = results[s];
		csv.cell(static_cast<long long>(options.first_seed + s)).cell(r.g_min).cell(r.tau).cell(r.t).cell(r.theta);
		csv.cell(r.norms.evolutions).cell(r.norms.state0).cell(r.norms.state1).end_row();
		if(r.g_min < results[worst].g_min)
		{
			worst = s;
		}
	}
	out.files.push_back(csv.path());

	const auto& w = results[worst];
	const bool holds = options.kind == TheoremKind::generic ? w.g_min < 0.0 : w.g_min >= -options.tolerance;
	out.exit_code = holds ? exit_ok : exit_validation;
	out.report = {
		{"kind", to_string(options.kind)},
		{"seeds", options.seeds},
		{"first_seed", options.first_seed},
		{"dimension", options.dimension},
		{"grid", options.grid},
		{"g_av_min", w.g_min},
		{"witness", {{"seed", options.first_seed + worst}, {"tau", w.tau}, {"theta", w.theta}, {"t", w.t}}},
		{"status", holds ? (options.kind == TheoremKind::generic ? "negative gain found" : "non-negative")
		                 : (options.kind == TheoremKind::generic ? "no negative gain found" : "violated")},
	};
	return out;
}

} // namespace pdc
