#pragma once

#include <random>

namespace edclust {

/// The single generator type used for seeding everywhere; seeded runs are
/// reproducible for a given standard library.
using Rng = std::mt19937_64;

} // namespace edclust
