#include "homomorph/trace.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "homomorph/error.hpp"

namespace homomorph {

Trace::Trace(std::vector<double> samples, double dt, double t_start)
    : samples_(std::move(samples)), dt_(dt), t_start_(t_start)
{
    if (samples_.empty()) {
        throw InvalidConfig("trace must contain at least one sample");
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw InvalidConfig("trace sample interval must be positive, got " + std::to_string(dt_));
    }
    if (!std::isfinite(t_start_)) {
        throw InvalidConfig("trace start time must be finite");
    }
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i])) {
            throw InvalidConfig("trace sample " + std::to_string(i) + " is not finite");
        }
    }
}

double Trace::energy() const noexcept
{
    double e = 0.0;
    for (double v : samples_) {
        e += v * v;
    }
    return e;
}

bool same_sampling(double dt_a, double dt_b) noexcept
{
    return std::abs(dt_a - dt_b) <= 1e-12 * std::max(std::abs(dt_a), std::abs(dt_b));
}

}  // namespace homomorph
