#pragma once

#include <cstdint>

#include <cvqrc/rng.hpp>
#include <cvqrc/types.hpp>

namespace cvqrc {

// One draw of the finite-ensemble covariance estimate: W / M with
// W ~ Wishart(sigma, M), via the Bartlett construction on the Cholesky
// factor of sigma. Unbiased, E[result] = sigma. Requires M >= n so the
// draw stays full rank.
RealMatrix wishart_sample(const RealMatrix& sigma, std::int64_t ensemble_size,
                          RngStream& rng);

}  // namespace cvqrc
