#pragma once

#include <cstdint>
#include <vector>

namespace sprd {

/// `count` points of a Halton sequence in [0,1)^dim, shifted modulo 1 by a
/// seed-dependent offset (Cranley-Patterson rotation). Row-major.
std::vector<double> halton_points(std::size_t count, int dim, std::uint64_t seed);

}  // namespace sprd
