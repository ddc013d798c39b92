/*
   Copyright 2026 The wwr-cva Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "wwr/errors.hpp"

namespace wwr::mc {

/// Welford accumulator; merge() is Chan's parallel update.
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) noexcept {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) noexcept {
        if (o.n == 0) {
            return;
        }
        if (n == 0) {
            *this = o;
            return;
        }
        const double na = static_cast<double>(n);
        const double nb = static_cast<double>(o.n);
        const double nt = na + nb;
        const double d = o.mean - mean;
        mean += d * nb / nt;
        m2 += o.m2 + d * d * na * nb / nt;
        n += o.n;
    }

    double variance() const noexcept { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
    double std_error() const noexcept { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

struct SimConfig {
    std::size_t n_paths = 10000;
    double dt = 0.01;
    std::uint64_t seed = 20240601;
    bool antithetic = false;
    unsigned threads = 0;  // 0: hardware concurrency

    void validate() const {
        if (n_paths < 1) {
            throw DomainError("SimConfig: n_paths must be >= 1");
        }
        if (!(dt > 0.0) || !std::isfinite(dt)) {
            throw DomainError(wwr::detail::concat("SimConfig: dt must be > 0, got ", dt));
        }
        if (antithetic && n_paths % 2 != 0) {
            throw DomainError(wwr::detail::concat("SimConfig: antithetic runs need an even n_paths, got ", n_paths));
        }
    }

    /// An antithetic pair is one unit, otherwise each path is.
    std::size_t units() const noexcept { return antithetic ? n_paths / 2 : n_paths; }
    unsigned resolved_threads() const noexcept {
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        return threads == 0 ? hw : threads;
    }
};

inline constexpr std::size_t kUnitsPerBlock = 1024;

/// Runs body(acc, unit) for every unit. Units are grouped in fixed blocks, each
/// with its own accumulator, and the blocks are merged in index order, so the
/// result does not depend on the number of threads.
template <typename Acc, typename MakeAcc, typename Body>
Acc run_units(std::size_t n_units, unsigned threads, MakeAcc make_acc, Body body) {
    const std::size_t n_blocks = (n_units + kUnitsPerBlock - 1) / kUnitsPerBlock;
    std::vector<Acc> partial;
    partial.reserve(n_blocks);
    for (std::size_t b = 0; b < n_blocks; ++b) {
        partial.push_back(make_acc());
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) {
                return;
            }
            try {
                const std::size_t lo = b * kUnitsPerBlock;
                const std::size_t hi = std::min(n_units, lo + kUnitsPerBlock);
                for (std::size_t u = lo; u < hi; ++u) {
                    body(partial[b], u);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(n_blocks);
                return;
            }
        }
    };
    const unsigned n_threads = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n_blocks, 1)));
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
        for (auto& th : pool) {
            th.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    Acc total = make_acc();
    for (auto& p : partial) {
        total.merge(p);
    }
    return total;
}

}  // namespace wwr::mc
