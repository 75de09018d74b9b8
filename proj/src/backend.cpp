#include "pdc/backend.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "pdc/parallel.hpp"

namespace pdc {

CrossTraces Backend::traces(double tau, double t) const
{
	return CrossTraces{
		cross_trace(0, 0, tau, t),
		cross_trace(1, 1, tau, t),
		cross_trace(0, 1, tau, t),
		cross_trace(1, 0, tau, t),
		cross_trace(0, 1, tau, 0.0),
		cross_trace(0, 1, t, 0.0),
	};
}

std::vector<CrossTraces> Backend::traces_grid(std::span<const double> taus, std::span<const double> ts) const
{
	std::vector<CrossTraces> out(taus.size() * ts.size());
	parallel_for(out.size(), [&](std::size_t n) {
		out[n] = traces(taus[n / ts.size()], ts[n % ts.size()]);
	});
	return out;
}

std::size_t thread_count()
{
	if(const char* env = std::getenv("PDC_THREADS"))
	{
		try
		{
			const long value = std::stol(env);
			if(value > 0)
			{
				return static_cast<std::size_t>(value);
			}
		}
		catch(const std::exception&)
		{
		}
	}
	return std::max<std::size_t>(1, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body)
{
	const std::size_t workers = std::min(thread_count(), n);
	if(workers <= 1)
	{
		for(std::size_t i = 0; i < n; ++i)
		{
			body(i);
		}
		return;
	}
	std::atomic<std::size_t> next{0};
	std::exception_ptr error;
	std::mutex error_mutex;
	std::vector<std::thread> pool;
	pool.reserve(workers);
	for(std::size_t w = 0; w < workers; ++w)
	{
		pool.emplace_back([&] {
			for(std::size_t i = next++; i < n; i = next++)
			{
				try
				{
					body(i);
				}
				catch(...)
				{
					std::lock_guard lock(error_mutex);
					if(!error)
					{
						error = std::current_exception();
					}
				}
			}
		});
	}
	for(auto& thread : pool)
	{
		thread.join();
	}
	if(error)
	{
		std::rethrow_exception(error);
	}
}

} // namespace pdc
