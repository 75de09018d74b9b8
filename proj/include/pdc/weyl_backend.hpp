#pragma once

#include "pdc/backend.hpp"
#include "pdc/bath.hpp"
#include "pdc/weyl.hpp"

namespace pdc {

/// Exact cross traces for a linearly coupled bosonic bath in thermal equilibrium.
class WeylBackend final : public Backend
{
public:
	explicit WeylBackend(weyl::BathRefd bath) : bath_{std::move(bath)} { }
	explicit WeylBackend(const BathSpec& spec) : bath_{to_bath_ref(spec)} { }

	[[nodiscard]] complex cross_trace(int i, int j, double tau, double t) const override;
	[[nodiscard]] CrossTraces traces(double tau, double t) const override;

	[[nodiscard]] const weyl::BathRefd& bath() const { return bath_; }

private:
	weyl::BathRefd bath_;
};

} // namespace pdc
