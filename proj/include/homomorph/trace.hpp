#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace homomorph {

/// Uniformly sampled real time series.
///
/// Invariants: at least one sample, every sample finite, dt > 0.
class Trace {
public:
    Trace(std::vector<double> samples, double dt, double t_start = 0.0);

    std::span<const double> samples() const noexcept { return samples_; }
    const std::vector<double>& vector() const noexcept { return samples_; }
    double operator[](std::size_t i) const noexcept { return samples_[i]; }
    std::size_t size() const noexcept { return samples_.size(); }
    double dt() const noexcept { return dt_; }
    double t_start() const noexcept { return t_start_; }
    double time(std::size_t i) const noexcept { return t_start_ + static_cast<double>(i) * dt_; }
    double duration() const noexcept { return static_cast<double>(samples_.size() - 1) * dt_; }
    double energy() const noexcept;

private:
    std::vector<double> samples_;
    double dt_;
    double t_start_;
};

/// True when two sample intervals agree to within 1e-12 relative.
bool same_sampling(double dt_a, double dt_b) noexcept;

}  // namespace homomorph
