#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace geosat
{
//---------------------------------------------------------------------------//
/*!
 * Run body(i) for i in [0, count) on up to `workers` threads.
 *
 * Indices are split into contiguous blocks. The body must write only to
 * per-index storage; any exception is rethrown on the calling thread after
 * all workers join. workers == 0 means hardware concurrency.
 */
template<class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body)
{
    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    std::size_t const nthreads = std::min<std::size_t>(workers, count);
    if (nthreads <= 1)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    for (std::size_t t = 0; t < nthreads; ++t)
    {
        std::size_t const begin = count * t / nthreads;
        std::size_t const end = count * (t + 1) / nthreads;
        pool.emplace_back([&, begin, end] {
            try
            {
                for (std::size_t i = begin; i < end; ++i)
                    body(i);
            }
            catch (...)
            {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

}  // namespace geosat
