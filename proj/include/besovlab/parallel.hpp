#pragma once

// Index-parallel loops. Each index writes its own slot, and callers reduce
// the slots in index order, so the worker count never changes a result.

#include <cstddef>
#include <functional>

namespace besovlab::parallel {

/// Sets the worker count used by for_each_index (values < 1 mean 1).
void set_thread_count(int count);
int thread_count();

/// Calls body(i) for every i in [0, n), possibly concurrently. Calls made
/// from inside a body run serially.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace besovlab::parallel
