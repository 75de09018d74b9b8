#include "pdc/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "pdc/params.hpp"

namespace pdc {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr int refine_bits = 40;

complex fast_phase(double theta)
{
	return {std::cos(theta), std::sin(theta)};
}

complex combine_b(complex B01, complex B10, complex e_plus)
{
	return std::conj(e_plus) * B01 + e_plus * B10;
}

// e^{i theta_k}, theta_k = 2 pi k / n; kept per thread for the last n used.
const std::vector<complex>& phase_table(std::size_t n)
{
	thread_local std::vector<complex> table;
	if(table.size() != n)
	{
		table.resize(n);
		for(std::size_t k = 0; k < n; ++k)
		{
			table[k] = fast_phase(two_pi * static_cast<double>(k) / static_cast<double>(n));
		}
	}
	return table;
}

struct ScanSample
{
	double dav;
	double d_plus;
	double d_minus;
	bool plus_ok;
	bool minus_ok;
};

struct Slow
{
	complex A, B01, B10, prep;

	[[nodiscard]] ScanSample at(complex e) const
	{
		const complex B = combine_b(B01, B10, e);
		const double q = std::real(std::conj(e) * prep);
		const double p_plus = 0.5 * (1.0 + q);
		const double p_minus = 0.5 * (1.0 - q);
		const double plus = std::abs(A + B);
		const double minus = std::abs(A - B);
		ScanSample s{plus + minus, 0.0, 0.0, p_plus >= probability_floor, p_minus >= probability_floor};
		if(s.plus_ok) s.d_plus = plus / p_plus;
		if(s.minus_ok) s.d_minus = minus / p_minus;
		return s;
	}
};

// Brent refinement of a scanned extremum inside the bracket of its grid neighbours.
// `value` returns NaN where the quantity is undefined; `sign` is +1 for minima, -1 for maxima.
template <typename F>
void refine(F value, double sign, double step, double& theta, double& best)
{
	auto objective = [&](double x) {
		const double v = value(x);
		return std::isnan(v) ? std::numeric_limits<double>::infinity() : sign * v;
	};
	const auto [x, fx] = boost::math::tools::brent_find_minima(objective, theta - step, theta + step, refine_bits);
	if(std::isfinite(fx) && fx < sign * best)
	{
		best = sign * fx;
		theta = x;
	}
}

double wrap_phase(double theta)
{
	theta = std::fmod(theta, two_pi);
	return theta < 0.0 ? theta + two_pi : theta;
}

} // namespace

double qubit_phase(double delta_eps_ev, double tau)
{
	return units::ev_to_rad_per_ps(delta_eps_ev) * tau;
}

double standard_coherence(const Backend& backend, double t)
{
	if(t < 0.0)
	{
		throw std::domain_error("standard_coherence: negative time");
	}
	return std::abs(backend.cross_trace(0, 1, t, 0.0));
}

SchemePoint assemble_point(const CrossTraces& x, double theta, double tau, double t)
{
	SchemePoint p;
	p.tau = tau;
	p.t = t;
	p.D = std::abs(x.x01_free);
	p.A = 0.25 * (x.x00 + x.x11);
	p.B01 = 0.25 * x.x01;
	p.B10 = 0.25 * x.x10;

	const complex e = fast_phase(theta);
	p.B = combine_b(p.B01, p.B10, e);
	const double q = std::real(std::conj(e) * x.x01_prep);
	p.p_plus = 0.5 * (1.0 + q);
	p.p_minus = 0.5 * (1.0 - q);

	const double plus = std::abs(p.A + p.B);
	const double minus = std::abs(p.A - p.B);
	p.D_av = plus + minus;

	p.plus_defined = p.p_plus >= probability_floor;
	p.minus_defined = p.p_minus >= probability_floor;
	p.D_plus = p.plus_defined ? plus / p.p_plus : 0.0;
	p.D_minus = p.minus_defined ? minus / p.p_minus : 0.0;
	p.g_plus = p.plus_defined ? p.D_plus - p.D : 0.0;
	p.g_minus = p.minus_defined ? p.D_minus - p.D : 0.0;
	p.g_av = p.D_av - p.D;

	p.norm_defined = 1.0 - p.D >= decoherence_floor;
	p.g_av_norm = p.norm_defined ? p.g_av / (1.0 - p.D) : 0.0;
	return p;
}

SchemePoint scheme_point(const Backend& backend, double delta_eps_ev, double tau, double t)
{
	if(tau < 0.0 || t < 0.0)
	{
		throw std::domain_error("scheme_point: negative time");
	}
	return assemble_point(backend.traces(tau, t), qubit_phase(delta_eps_ev, tau), tau, t);
}

double average_coherence(complex A, complex B01, complex B10, double theta)
{
	const complex B = combine_b(B01, B10, fast_phase(theta));
	return std::abs(A + B) + std::abs(A - B);
}

EnvelopePoint envelope_from_parts(complex A, complex B01, complex B10, complex x01_prep, double D,
                                  std::size_t n_theta)
{
	if(n_theta < 16)
	{
		throw std::invalid_argument("envelopes: need at least 16 phase points");
	}
	const Slow slow{A, B01, B10, x01_prep};
	const auto& table = phase_table(n_theta);
	const double step = two_pi / static_cast<double>(n_theta);
	const double nan = std::numeric_limits<double>::quiet_NaN();

	EnvelopePoint env;
	env.D = D;
	env.A = A;
	env.B01 = B01;
	env.B10 = B10;

	const double abs_a = std::abs(A);
	double dav_min = std::numeric_limits<double>::infinity();
	double dav_max = -dav_min;
	double dp_min = dav_min, dp_max = dav_max, dm_min = dav_min, dm_max = dav_max;
	std::size_t i_min = 0, i_max = 0, ip_min = 0, ip_max = 0, im_min = 0, im_max = 0;
	double violation = 0.0;

	for(std::size_t k = 0; k < n_theta; ++k)
	{
		const auto s = slow.at(table[k]);
		const double abs_b = std::abs(combine_b(B01, B10, table[k]));
		violation = std::max({violation, 2.0 * std::max(abs_a, abs_b) - s.dav,
		                      s.dav - 2.0 * std::sqrt(abs_a * abs_a + abs_b * abs_b)});
		if(s.dav < dav_min) { dav_min = s.dav; i_min = k; }
		if(s.dav > dav_max) { dav_max = s.dav; i_max = k; }
		if(s.plus_ok)
		{
			if(s.d_plus < dp_min) { dp_min = s.d_plus; ip_min = k; }
			if(s.d_plus > dp_max) { dp_max = s.d_plus; ip_max = k; }
		}
		if(s.minus_ok)
		{
			if(s.d_minus < dm_min) { dm_min = s.d_minus; im_min = k; }
			if(s.d_minus > dm_max) { dm_max = s.d_minus; im_max = k; }
		}
	}

	auto dav = [&](double x) { return slow.at(fast_phase(x)).dav; };
	auto d_plus = [&](double x) {
		const auto s = slow.at(fast_phase(x));
		return s.plus_ok ? s.d_plus : nan;
	};
	auto d_minus = [&](double x) {
		const auto s = slow.at(fast_phase(x));
		return s.minus_ok ? s.d_minus : nan;
	};
	auto theta_of = [&](std::size_t k) { return step * static_cast<double>(k); };

	double th_min = theta_of(i_min), th_max = theta_of(i_max);
	refine(dav, +1.0, step, th_min, dav_min);
	refine(dav, -1.0, step, th_max, dav_max);
	if(std::isfinite(dp_min))
	{
		double th = theta_of(ip_min);
		refine(d_plus, +1.0, step, th, dp_min);
		th = theta_of(ip_max);
		refine(d_plus, -1.0, step, th, dp_max);
	}
	else
	{
		dp_min = dp_max = 0.0;
	}
	if(std::isfinite(dm_min))
	{
		double th = theta_of(im_min);
		refine(d_minus, +1.0, step, th, dm_min);
		th = theta_of(im_max);
		refine(d_minus, -1.0, step, th, dm_max);
	}
	else
	{
		dm_min = dm_max = 0.0;
	}

	env.Dav_min = dav_min;
	env.Dav_max = dav_max;
	env.theta_at_min = wrap_phase(th_min);
	env.theta_at_max = wrap_phase(th_max);
	env.g_min = dav_min - D;
	env.g_max = dav_max - D;
	env.norm_defined = 1.0 - D >= decoherence_floor;
	env.gnorm_min = env.norm_defined ? env.g_min / (1.0 - D) : 0.0;
	env.gnorm_max = env.norm_defined ? env.g_max / (1.0 - D) : 0.0;
	env.Dplus_min = dp_min;
	env.Dplus_max = dp_max;
	env.Dminus_min = dm_min;
	env.Dminus_max = dm_max;
	env.sandwich_violation = violation;
	return env;
}

EnvelopePoint envelope_from_traces(const CrossTraces& x, double tau, double t, std::size_t n_theta)
{
	auto env = envelope_from_parts(0.25 * (x.x00 + x.x11), 0.25 * x.x01, 0.25 * x.x10, x.x01_prep,
	                               std::abs(x.x01_free), n_theta);
	env.tau = tau;
	env.t = t;
	return env;
}

EnvelopePoint envelopes(const Backend& backend, double tau, double t, std::size_t n_theta)
{
	return envelope_from_traces(backend.traces(tau, t), tau, t, n_theta);
}

EnvelopeResiduals envelope_conditions_check(complex A, complex B01, complex B10, double theta)
{
	EnvelopeResiduals r;
	const complex e = fast_phase(theta);
	const complex B = combine_b(B01, B10, e);
	const double abs_a = std::abs(A);
	const double abs_b = std::abs(B);

	const complex dB = complex(0.0, -1.0) * std::conj(e) * B01 + complex(0.0, 1.0) * e * B10;
	const double plus = std::abs(A + B);
	const double minus = std::abs(A - B);
	if(plus > 0.0) r.slope += std::real(std::conj(A + B) * dB) / plus;
	if(minus > 0.0) r.slope -= std::real(std::conj(A - B) * dB) / minus;

	if(abs_a == 0.0 || abs_b == 0.0)
	{
		return r;
	}
	const complex rel = std::conj(A) * B / (abs_a * abs_b);
	r.sin_residual = std::abs(std::imag(rel));
	r.cos_residual = std::abs(std::real(rel));

	// B = e^{iu} (B_+ cos v + i B_- sin v) with B_+- = |B10| +- |B01|.
	const double phi_a = std::arg(A);
	const double u = 0.5 * (std::arg(B10) + std::arg(B01));
	const double v = 0.5 * (std::arg(B10) - std::arg(B01)) + theta;
	const double b_sum = std::abs(B10) + std::abs(B01);
	const double b_diff = std::abs(B10) - std::abs(B01);
	r.split_sin_residual =
		std::abs(b_sum * std::cos(v) * std::sin(u - phi_a) + b_diff * std::sin(v) * std::cos(u - phi_a)) / abs_b;
	r.split_cos_residual =
		std::abs(b_sum * std::cos(v) * std::cos(u - phi_a) - b_diff * std::sin(v) * std::sin(u - phi_a)) / abs_b;
	return r;
}

double special_tau(double delta_eps_ev, double tau_target, SpecialKind kind)
{
	if(!(tau_target > 0.0))
	{
		throw std::domain_error("special_tau: target delay must be positive");
	}
	if(!(delta_eps_ev > 0.0))
	{
		throw std::domain_error("special_tau: qubit splitting must be positive");
	}
	double offset = 0.0;
	double period = two_pi;
	switch(kind)
	{
	case SpecialKind::max_gain:
		break;
	case SpecialKind::min_gain:
		offset = std::numbers::pi;
		break;
	case SpecialKind::equal_gain:
		offset = 0.5 * std::numbers::pi;
		period = std::numbers::pi;
		break;
	}
	const double rate = units::ev_to_rad_per_ps(delta_eps_ev);
	const double j = (rate * tau_target - offset) / period;
	const double lo = std::max(0.0, std::floor(j));
	const double hi = std::max(0.0, std::ceil(j));
	const double tau_lo = (offset + lo * period) / rate;
	const double tau_hi = (offset + hi * period) / rate;
	// Ties within rounding go to the smaller delay.
	const double slack = 1e-12 * period / rate;
	return std::abs(tau_hi - tau_target) < std::abs(tau_target - tau_lo) - slack ? tau_hi : tau_lo;
}

std::vector<SchemePoint> coherence_vs_t(const Backend& backend, double delta_eps_ev, double tau,
                                        std::span<const double> ts)
{
	const double taus[] = {tau};
	const auto traces = backend.traces_grid(taus, ts);
	const double theta = qubit_phase(delta_eps_ev, tau);
	std::vector<SchemePoint> out;
	out.reserve(ts.size());
	for(std::size_t i = 0; i < ts.size(); ++i)
	{
		out.push_back(assemble_point(traces[i], theta, tau, ts[i]));
	}
	return out;
}

} // namespace pdc
