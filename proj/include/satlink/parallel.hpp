// SPDX-License-Identifier: Apache-2.0
//
// satlink: MIMO land-mobile satellite link simulation library
// Copyright (C) 2026 The satlink authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef SATLINK_PARALLEL_HPP
#define SATLINK_PARALLEL_HPP

#include "satlink/statistics.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace satlink
{
    std::size_t default_worker_count();

    // Random stream for Monte Carlo block `block` under a base stream. Blocks, not workers, own
    // substreams, so results do not depend on how many workers process them.
    inline RngStream block_stream(const RngStream &base, std::size_t block)
    {
        return RngStream(base.seed(), base.stream_id() * 0x9E3779B97F4A7C15ULL + static_cast<std::uint64_t>(block) + 1);
    }

    // Runs body(block) for every block in [0, num_blocks) on up to `workers` threads.
    // The first exception thrown by any block is rethrown after all threads join.
    template <typename Body>
    void parallel_blocks(std::size_t num_blocks, std::size_t workers, Body &&body)
    {
        workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(num_blocks, 1));
        if (workers == 1)
        {
            for (std::size_t b = 0; b < num_blocks; ++b)
                body(b);
            return;
        }

        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto run = [&]
        {
            for (std::size_t b = next++; b < num_blocks; b = next++)
            {
                try
                {
                    body(b);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = num_blocks;
                }
            }
        };

        std::vector<std::jthread> pool;
        pool.reserve(workers - 1);
        for (std::size_t w = 1; w < workers; ++w)
            pool.emplace_back(run);
        run();
        pool.clear();
        if (error)
            std::rethrow_exception(error);
    }
}

#endif
