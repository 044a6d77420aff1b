// Timing comparison of the serial reference kernels against the OpenMP
// chunked kernels, on the three Monte Carlo workloads that dominate the
// experiment suite. Both modes must produce bit-identical results; the
// benchmark verifies that while it times them.

#include "rlaif/ceiling.hpp"
#include "rlaif/gaussian_world.hpp"

#include <chrono>
#include <cstdio>
#include <string>

namespace {

using rlaif::par::ExecMode;

double time_seconds(ExecMode mode, const std::function<double()>& body, double* value_out) {
    rlaif::par::set_exec_mode(mode);
    const auto start = std::chrono::steady_clock::now();
    *value_out = body();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void report(const char* name, const std::function<double()>& body) {
    double serial_value = 0.0, parallel_value = 0.0;
    const double t_serial = time_seconds(ExecMode::serial, body, &serial_value);
    const double t_parallel = time_seconds(ExecMode::parallel, body, &parallel_value);
    const bool match = serial_value == parallel_value;
    std::printf("%-28s serial %8.3f s   parallel %8.3f s   speedup %5.2fx   bitwise %s\n", name, t_serial,
                t_parallel, t_serial / t_parallel, match ? "match" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    std::int64_t n = 4000000;
    if (argc > 1) n = std::atoll(argv[1]);
    std::printf("n = %lld draws/trials per kernel (OpenMP %s)\n", static_cast<long long>(n),
                rlaif::par::openmp_enabled() ? "enabled" : "disabled");

    const Eigen::Index d = 8;
    rlaif::Vec v_star = rlaif::Vec::Zero(d);
    v_star[0] = 0.8;
    auto world = rlaif::RepresentationWorld::create(rlaif::Vec::Zero(d), rlaif::Mat::Identity(d, d),
                                                    rlaif::ValueEncoding(rlaif::Direction(v_star), 0.6));
    rlaif::Vec tilt = rlaif::Vec::Ones(d) / std::sqrt(static_cast<double>(d));
    const rlaif::Policy policy(world, rlaif::Direction(tilt));

    report("alignment estimate", [&]() { return rlaif::estimate_alignment(policy, n, 1234).estimate; });

    report("selection regret", [&]() { return rlaif::simulate_selection_regret(*world, 2, n, 99).mc_regret; });

    const rlaif::RowSampler sampler = rlaif::gaussian_base_sampler(*world);
    const rlaif::Direction u(tilt);
    report("importance tilt", [&]() {
        return rlaif::importance_tilt_expectation(
                   sampler, d, u, 0.5, [&](const rlaif::Vec& h) { return h[0]; }, n, 4321)
            .estimate;
    });

    rlaif::par::set_exec_mode(ExecMode::parallel);
    return 0;
}
