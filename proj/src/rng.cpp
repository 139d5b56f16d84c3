#include "observatory/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace observatory {

PowerLawSampler::PowerLawSampler(double alpha, uint64_t max_support) {
    if (alpha <= 1.0) throw std::invalid_argument("power-law exponent must be > 1");
    if (max_support < 1) throw std::invalid_argument("power-law support must be >= 1");
    cdf_.resize(max_support);
    double acc = 0.0;
    for (uint64_t k = 1; k <= max_support; ++k) {
        acc += std::pow(static_cast<double>(k), -alpha);
        cdf_[k - 1] = acc;
    }
    for (double& v : cdf_) v /= acc;
    cdf_.back() = 1.0; // guard against rounding
}

uint64_t PowerLawSampler::sample(Rng& rng) const {
    const double u = rng.real();
    auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return static_cast<uint64_t>(it - cdf_.begin()) + 1;
}

} // namespace observatory
