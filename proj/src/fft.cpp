#include "homomorph/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "homomorph/error.hpp"

namespace homomorph::fft {

namespace {

// The FFTW planner is not reentrant; execution is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

class Plan {
public:
    explicit Plan(fftw_plan p) : plan_(p)
    {
        if (plan_ == nullptr) {
            throw Error("FFTW failed to create a plan");
        }
    }
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;
    ~Plan()
    {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(plan_);
    }
    void execute() const { fftw_execute(plan_); }

private:
    fftw_plan plan_;
};

}  // namespace

std::vector<cplx> forward_real(std::span<const double> x, std::size_t n)
{
    if (n == 0) {
        throw InvalidConfig("transform length must be positive");
    }
    std::vector<double> in(n, 0.0);
    std::copy_n(x.begin(), std::min(n, x.size()), in.begin());
    std::vector<cplx> out(n / 2 + 1);
    fftw_plan raw = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        raw = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                   reinterpret_cast<fftw_complex*>(out.data()), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    plan.execute();
    return out;
}

std::vector<double> inverse_real(std::span<const cplx> half, std::size_t n)
{
    if (n == 0 || half.size() != n / 2 + 1) {
        throw ShapeMismatch("inverse transform expects n/2+1 bins");
    }
    std::vector<cplx> in(half.begin(), half.end());
    in.front().imag(0.0);
    if (n % 2 == 0) {
        in.back().imag(0.0);
    }
    std::vector<double> out(n);
    fftw_plan raw = nullptr;
    {
        std::lock_guard lock(planner_mutex());
        // FFTW_ESTIMATE never touches the arrays while planning.
        raw = fftw_plan_dft_c2r_1d(static_cast<int>(n), reinterpret_cast<fftw_complex*>(in.data()),
                                   out.data(), FFTW_ESTIMATE);
    }
    Plan plan(raw);
    plan.execute();
    const double scale = 1.0 / static_cast<double>(n);
    for (double& v : out) {
        v *= scale;
    }
    return out;
}

}  // namespace homomorph::fft
