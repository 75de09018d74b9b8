#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pdc/bath.hpp"
#include "pdc/scheme.hpp"
#include "pdc/weyl_backend.hpp"

using namespace pdc;

namespace {

// Composite Simpson rule on [a, b] with n (even) panels.
template <typename F>
double simpson(F f, double a, double b, int n)
{
	const double h = (b - a) / n;
	double sum = f(a) + f(b);
	for(int i = 1; i < n; ++i)
	{
		sum += (i % 2 ? 4.0 : 2.0) * f(a + h * i);
	}
	return sum * h / 3.0;
}

// G(k) from the polar-angle integral in the variable u = cos(theta), by Simpson.
double reference_G(double k, const MaterialParams& m)
{
	const double sigma = m.sigma_diff_ev * 1.602176634e-19;
	const double p = sigma * sigma / (8.0 * std::numbers::pi * std::numbers::pi * m.rho_kg_m3 *
	                                  m.c_m_s * m.c_m_s * m.c_m_s * 1.054571817e-34) * 1e18;
	const double lz2 = m.l_z_nm * m.l_z_nm, lp2 = m.l_perp_nm * m.l_perp_nm;
	const auto integrand = [&](double u) { return std::exp(-0.5 * k * k * (lz2 * u * u + lp2 * (1.0 - u * u))); };
	return p * k * simpson(integrand, -1.0, 1.0, 4000);
}

} // namespace

TEST_CASE("spectral function against an independent quadrature")
{
	const MaterialParams m;
	CHECK(spectral_G(0.0, m) == 0.0);
	CHECK_THROWS(spectral_G(-0.1, m));
	for(double k : {0.05, 0.19, 0.3173, 0.6, 1.2, 3.0})
	{
		CHECK(spectral_G(k, m) == doctest::Approx(reference_G(k, m)).epsilon(1e-10));
	}
}

TEST_CASE("spectral function is non-negative and unimodal")
{
	const MaterialParams m;
	std::vector<double> g;
	for(int i = 0; i <= 2000; ++i)
	{
		g.push_back(spectral_G(2.0 * i / 2000.0, m));
		CHECK(g.back() >= 0.0);
	}
	int sign_changes = 0;
	for(std::size_t i = 2; i < g.size(); ++i)
	{
		const bool up_before = g[i - 1] > g[i - 2];
		const bool up_now = g[i] > g[i - 1];
		sign_changes += up_before != up_now;
	}
	CHECK(sign_changes == 1);
}

TEST_CASE("peak position agrees with a dense grid scan")
{
	const MaterialParams m;
	const double peak = spectral_peak(m);
	double best_k = 0.0, best_g = -1.0;
	for(int i = 1; i <= 200000; ++i)
	{
		const double k = 2.0 * i / 200000.0;
		const double g = spectral_G(k, m);
		if(g > best_g)
		{
			best_g = g;
			best_k = k;
		}
	}
	CHECK(std::abs(peak - best_k) < 2e-5);
}

TEST_CASE("total weight against an independent quadrature")
{
	const MaterialParams m;
	const double reference = simpson([&](double k) { return reference_G(k, m); }, 0.0, 12.0, 3000);
	CHECK(spectral_weight(m) == doctest::Approx(reference).epsilon(1e-9));
	CHECK(spectral_weight(m, 0.0) == 0.0);
}

TEST_CASE("equally spaced discretization")
{
	const MaterialParams m;
	const auto bath = discretize_paper(m, 34.0);
	REQUIRE(bath.modes.size() == 19);
	const double dk = 2.0 / 3.0 * spectral_peak(m);
	CHECK(bath.modes[0].k == 0.0);
	CHECK(bath.modes[0].weight == 0.0);
	for(std::size_t i = 0; i < bath.modes.size(); ++i)
	{
		const auto& mode = bath.modes[i];
		CHECK(mode.k == doctest::Approx(dk * static_cast<double>(i)));
		CHECK(mode.omega == doctest::Approx(5.1 * mode.k));
		CHECK(mode.weight == doctest::Approx(spectral_G(mode.k, m) * dk));
		CHECK(mode.ratio * mode.ratio == doctest::Approx(mode.weight));
		if(i > 0)
		{
			CHECK(mode.k > bath.modes[i - 1].k);
		}
	}
}

TEST_CASE("weights scale with the prefactor, ratios do not")
{
	MaterialParams m;
	const auto a = discretize_paper(m, 0.0);
	m.sigma_diff_ev *= 2.0;
	const auto b = discretize_paper(m, 0.0);
	for(std::size_t i = 0; i < a.modes.size(); ++i)
	{
		CHECK(b.modes[i].weight == doctest::Approx(4.0 * a.modes[i].weight));
		CHECK(b.modes[i].k == doctest::Approx(a.modes[i].k));
	}
	CHECK(spectral_weight(m) / b.total_weight() ==
	      doctest::Approx(spectral_weight(MaterialParams{}) / a.total_weight()).epsilon(1e-12));
}

TEST_CASE("dense quadrature bath")
{
	const MaterialParams m;
	const double peak = spectral_peak(m);
	const auto bath = quadrature_bath(m, 34.0, 400, 2.0);
	CHECK(bath.modes.size() == 400);
	CHECK(bath.total_weight() == doctest::Approx(spectral_weight(m, 2.0)).epsilon(1e-8));

	const auto full = quadrature_bath(m, 34.0);
	CHECK(full.k_max == doctest::Approx(default_k_max_factor * peak));
	CHECK(full.modes.size() == default_quadrature_nodes);
	// The default cutoff keeps all but a negligible part of the weight.
	const double total = spectral_weight(m);
	CHECK(std::abs(full.total_weight() - total) / total < 1e-6);
	CHECK(std::abs(spectral_weight(m, 32.0 * peak) - spectral_weight(m, 16.0 * peak)) / total < 1e-4);

	CHECK_THROWS(quadrature_bath(m, 34.0, 1, 2.0));
	CHECK_THROWS(quadrature_bath(m, 34.0, 10, -1.0));
}

TEST_CASE("quadrature refinement leaves the standard coherence unchanged")
{
	const MaterialParams m;
	const WeylBackend coarse(quadrature_bath(m, 34.0, 1500));
	const WeylBackend fine(quadrature_bath(m, 34.0, 3000));
	CHECK(std::abs(standard_coherence(coarse, 20.0) - standard_coherence(fine, 20.0)) < 1e-6);
}

TEST_CASE("rescaled mode subsets")
{
	const MaterialParams m;
	const auto paper = discretize_paper(m, 34.0);
	const double total = spectral_weight(m);

	const std::size_t one[] = {1};
	const auto single = subset_rescaled(paper, one, m);
	REQUIRE(single.modes.size() == 1);
	CHECK(single.modes[0].weight == doctest::Approx(total));
	CHECK(single.modes[0].omega == paper.modes[1].omega);

	const std::size_t two[] = {0, 1};
	const auto pair = subset_rescaled(paper, two, m);
	REQUIRE(pair.modes.size() == 2);
	CHECK(pair.modes[0].weight == 0.0);
	CHECK(pair.modes[1].weight == doctest::Approx(total));

	const std::size_t many[] = {3, 7, 2, 11};
	CHECK(subset_rescaled(paper, many, m).total_weight() == doctest::Approx(total));

	const std::size_t zero[] = {0};
	CHECK_THROWS(subset_rescaled(paper, zero, m));
	const std::size_t out_of_range[] = {19};
	CHECK_THROWS(subset_rescaled(paper, out_of_range, m));
}

TEST_CASE("explicit modes")
{
	const MaterialParams m;
	const std::pair<double, double> modes[] = {{2.0, 0.1}, {1.0, 0.04}};
	const auto bath = explicit_bath(modes, m, 10.0);
	REQUIRE(bath.modes.size() == 2);
	CHECK(bath.modes[0].omega == 1.0);
	CHECK(bath.modes[0].ratio == doctest::Approx(0.2));
	CHECK(bath.modes[1].k == doctest::Approx(2.0 / 5.1));
	const auto ref = to_bath_ref(bath);
	CHECK(ref.size() == 2);
	CHECK(ref.temperature_k == 10.0);
}

TEST_CASE("Gauss-Legendre rule integrates polynomials exactly")
{
	const auto rule = gauss_legendre(7, -1.0, 2.0);
	double sum = 0.0;
	for(std::size_t i = 0; i < rule.nodes.size(); ++i)
	{
		sum += rule.weights[i] * std::pow(rule.nodes[i], 13);
	}
	CHECK(sum == doctest::Approx((std::pow(2.0, 14) - 1.0) / 14.0).epsilon(1e-13));
}
