#pragma once

#include <cstddef>
#include <exception>
#include <vector>

#include "qng/types.hpp"

namespace qng {

/// Runs body(i) for i in [0, count). Iterations must be independent; each
/// writes only its own output slot, so results do not depend on scheduling.
/// The first exception (lowest index) is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, Exec exec, Body&& body)
{
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace qng
