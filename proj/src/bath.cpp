#include "pdc/bath.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include <boost/math/special_functions/legendre.hpp>
#include <boost/math/tools/minima.hpp>

namespace pdc {

namespace {

constexpr std::size_t polar_nodes = 64;

const QuadratureRule& polar_rule()
{
	static const QuadratureRule rule = gauss_legendre(polar_nodes, 0.0, std::numbers::pi);
	return rule;
}

double polar_integral(double k, const MaterialParams& m)
{
	const auto& rule = polar_rule();
	const double lz2 = m.l_z_nm * m.l_z_nm;
	const double lp2 = m.l_perp_nm * m.l_perp_nm;
	double sum = 0.0;
	for(std::size_t i = 0; i < rule.nodes.size(); ++i)
	{
		const double c = std::cos(rule.nodes[i]);
		const double s = std::sin(rule.nodes[i]);
		sum += rule.weights[i] * s * std::exp(-0.5 * k * k * (lz2 * c * c + lp2 * s * s));
	}
	return sum;
}

// Beyond this wave number exp(-k^2 l^2 / 2) < 1e-19 for both widths.
double tail_cutoff(const MaterialParams& m)
{
	return std::sqrt(90.0) / std::min(m.l_z_nm, m.l_perp_nm);
}

Mode make_mode(double k, double weight, const MaterialParams& m)
{
	return Mode{k, m.sound_speed() * k, weight, std::sqrt(weight)};
}

} // namespace

double BathSpec::total_weight() const
{
	return std::accumulate(modes.begin(), modes.end(), 0.0,
	                       [](double acc, const Mode& mode) { return acc + mode.weight; });
}

QuadratureRule gauss_legendre(std::size_t n, double a, double b)
{
	if(n == 0)
	{
		throw std::invalid_argument("gauss_legendre: need at least one node");
	}
	const int order = static_cast<int>(n);
	// Non-negative zeros in increasing order; zero itself is included for odd n.
	const auto zeros = boost::math::legendre_p_zeros<double>(order);
	std::vector<double> x;
	x.reserve(n);
	for(auto it = zeros.rbegin(); it != zeros.rend(); ++it)
	{
		if(*it != 0.0)
		{
			x.push_back(-*it);
		}
	}
	for(double z : zeros)
	{
		x.push_back(z);
	}

	QuadratureRule rule;
	rule.nodes.resize(n);
	rule.weights.resize(n);
	const double half = 0.5 * (b - a);
	const double mid = 0.5 * (b + a);
	for(std::size_t i = 0; i < n; ++i)
	{
		const double dp = boost::math::legendre_p_prime(order, x[i]);
		rule.nodes[i] = mid + half * x[i];
		rule.weights[i] = half * 2.0 / ((1.0 - x[i] * x[i]) * dp * dp);
	}
	return rule;
}

double spectral_prefactor(const MaterialParams& m)
{
	const double sigma = m.sigma_diff_ev * units::joule_per_ev;
	const double p_si = sigma * sigma /
		(8.0 * std::numbers::pi * std::numbers::pi * m.rho_kg_m3 * std::pow(m.c_m_s, 3) * units::hbar_si);
	return p_si * 1e18; // m^2 -> nm^2
}

double spectral_G(double k, const MaterialParams& m)
{
	if(k < 0.0)
	{
		throw std::domain_error("spectral_G: negative wave number");
	}
	if(k == 0.0)
	{
		return 0.0;
	}
	return spectral_prefactor(m) * k * polar_integral(k, m);
}

double spectral_peak(const MaterialParams& m)
{
	const double upper = 8.0 / std::min(m.l_z_nm, m.l_perp_nm);
	const auto result = boost::math::tools::brent_find_minima(
		[&](double k) { return -spectral_G(k, m); }, 1e-4, upper, std::numeric_limits<double>::digits / 2);
	return result.first;
}

double spectral_weight(const MaterialParams& m, double k_max)
{
	if(!(k_max > 0.0))
	{
		return 0.0;
	}
	const double upper = std::min(k_max, tail_cutoff(m));
	// Panels a quarter of the peak width keep 32-node rules far below 1e-14.
	const double panel = 0.25 * spectral_peak(m);
	const auto panels = static_cast<std::size_t>(std::ceil(upper / panel));
	const auto unit = gauss_legendre(32, 0.0, 1.0);
	const double width = upper / static_cast<double>(panels);
	double sum = 0.0;
	for(std::size_t p = 0; p < panels; ++p)
	{
		const double a = width * static_cast<double>(p);
		for(std::size_t i = 0; i < unit.nodes.size(); ++i)
		{
			sum += width * unit.weights[i] * spectral_G(a + width * unit.nodes[i], m);
		}
	}
	return sum;
}

double spectral_weight(const MaterialParams& m)
{
	return spectral_weight(m, std::numeric_limits<double>::infinity());
}

BathSpec discretize_paper(const MaterialParams& m, double temperature_k)
{
	const double dk = 2.0 / 3.0 * spectral_peak(m);
	BathSpec spec;
	spec.origin = BathOrigin::paper19;
	spec.temperature_k = temperature_k;
	for(std::size_t i = 0; i < paper_mode_count; ++i)
	{
		const double k = dk * static_cast<double>(i);
		spec.modes.push_back(make_mode(k, spectral_G(k, m) * dk, m));
		spec.indices.push_back(i);
	}
	return spec;
}

BathSpec quadrature_bath(const MaterialParams& m, double temperature_k, std::size_t n, double k_max)
{
	if(k_max == 0.0)
	{
		k_max = default_k_max_factor * spectral_peak(m);
	}
	if(n < 2 || !(k_max > 0.0))
	{
		throw std::invalid_argument("quadrature_bath: need n >= 2 and k_max > 0");
	}
	const auto rule = gauss_legendre(n, 0.0, k_max);
	BathSpec spec;
	spec.origin = BathOrigin::quadrature;
	spec.temperature_k = temperature_k;
	spec.quadrature_nodes = n;
	spec.k_max = k_max;
	spec.modes.reserve(n);
	for(std::size_t i = 0; i < n; ++i)
	{
		spec.modes.push_back(make_mode(rule.nodes[i], spectral_G(rule.nodes[i], m) * rule.weights[i], m));
	}
	return spec;
}

BathSpec subset_rescaled(const BathSpec& paper, std::span<const std::size_t> indices, const MaterialParams& m)
{
	if(paper.origin != BathOrigin::paper19 || paper.modes.size() != paper_mode_count)
	{
		throw std::invalid_argument("subset_rescaled: source must be the 19-mode discretization");
	}
	if(indices.empty())
	{
		throw std::invalid_argument("subset_rescaled: empty mode subset");
	}
	std::vector<std::size_t> sorted(indices.begin(), indices.end());
	std::sort(sorted.begin(), sorted.end());
	if(std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
	{
		throw std::invalid_argument("subset_rescaled: repeated mode index");
	}
	if(sorted.back() >= paper_mode_count)
	{
		throw std::invalid_argument("subset_rescaled: mode index out of range");
	}
	double subtotal = 0.0;
	for(auto i : sorted)
	{
		subtotal += paper.modes[i].weight;
	}
	if(!(subtotal > 0.0))
	{
		throw std::invalid_argument("subset_rescaled: selected modes carry no coupling weight");
	}
	const double scale = spectral_weight(m) / subtotal;

	BathSpec spec;
	spec.origin = BathOrigin::subset_rescaled;
	spec.temperature_k = paper.temperature_k;
	spec.indices = sorted;
	for(auto i : sorted)
	{
		Mode mode = paper.modes[i];
		mode.weight *= scale;
		mode.ratio = std::sqrt(mode.weight);
		spec.modes.push_back(mode);
	}
	return spec;
}

BathSpec explicit_bath(std::span<const std::pair<double, double>> modes, const MaterialParams& m,
                       double temperature_k)
{
	BathSpec spec;
	spec.origin = BathOrigin::explicit_list;
	spec.temperature_k = temperature_k;
	for(const auto& [omega, weight] : modes)
	{
		if(omega < 0.0 || weight < 0.0)
		{
			throw std::invalid_argument("explicit_bath: negative frequency or weight");
		}
		spec.modes.push_back(Mode{omega / m.sound_speed(), omega, weight, std::sqrt(weight)});
	}
	std::sort(spec.modes.begin(), spec.modes.end(), [](const Mode& a, const Mode& b) { return a.k < b.k; });
	return spec;
}

BathSpec make_bath(const BathChoice& choice, const MaterialParams& m, double temperature_k)
{
	switch(choice.kind)
	{
	case BathChoice::Kind::continuous:
		return quadrature_bath(m, temperature_k);
	case BathChoice::Kind::quadrature:
		return quadrature_bath(m, temperature_k, choice.quadrature_nodes, choice.k_max);
	case BathChoice::Kind::paper19:
		return discretize_paper(m, temperature_k);
	case BathChoice::Kind::subset:
		return subset_rescaled(discretize_paper(m, temperature_k), choice.indices, m);
	case BathChoice::Kind::explicit_modes:
		return explicit_bath(choice.modes, m, temperature_k);
	}
	throw std::logic_error("make_bath: unhandled bath kind");
}

weyl::BathRefd to_bath_ref(const BathSpec& spec)
{
	const auto n = static_cast<Eigen::Index>(spec.modes.size());
	weyl::RealVector<double> omega(n);
	weyl::RealVector<double> ratio(n);
	for(Eigen::Index i = 0; i < n; ++i)
	{
		omega(i) = spec.modes[static_cast<std::size_t>(i)].omega;
		ratio(i) = spec.modes[static_cast<std::size_t>(i)].ratio;
	}
	return weyl::make_bath_ref<double>(std::move(omega), std::move(ratio), spec.temperature_k);
}

} // namespace pdc
