#include <doctest.h>

#include "support/oracles.hpp"

#include <algorithm>
#include <random>

using namespace mrc;

namespace {

std::size_t argmax_column(const std::vector<SweepRow>& rows, std::size_t n) {
    auto it = std::max_element(rows.begin(), rows.end(),
                               [n](const SweepRow& a, const SweepRow& b) { return a.report.p[n] < b.report.p[n]; });
    return static_cast<std::size_t>(it - rows.begin());
}

std::size_t argmax_sum(const std::vector<SweepRow>& rows) {
    auto it = std::max_element(rows.begin(), rows.end(),
                               [](const SweepRow& a, const SweepRow& b) { return a.report.p_sum < b.report.p_sum; });
    return static_cast<std::size_t>(it - rows.begin());
}

// Grid values bracketing an argmax index, i.e. "within one grid step".
bool within_one_step(const std::vector<double>& grid, std::size_t i, double target) {
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[std::min(i + 1, grid.size() - 1)];
    return lo <= target && target <= hi;
}

}  // namespace

TEST_CASE("own-power peak of receiver 1 in the worked example") {
    const auto s = bundled_scenario("paper-fig2");
    const LoadVector x{7.5, 7.5, 7.5};
    const double peak = peak_load(s, x, 0);
    CHECK(peak == doctest::Approx(15.8).epsilon(0.1 / 15.8));
    CHECK(peak == doctest::Approx(15.876900749138848).epsilon(1e-12));
    CHECK(peak_load(s, x.with(0, 90.0), 0) == peak);  // independent of x_1 itself

    const auto grid = linear_grid(0.1, 100.0, 1000);
    const auto rows = sweep(s, x, 0, grid);
    CHECK(within_one_step(grid, argmax_column(rows, 0), peak));
}

TEST_CASE("sum power is monotone in x_1 for the worked example") {
    const auto s = bundled_scenario("paper-fig2");
    const auto verdict = sum_peak_load(s, {7.5, 7.5, 7.5}, 0);
    CHECK(std::holds_alternative<Monotone>(verdict));
}

TEST_CASE("single receiver peaks coincide") {
    const TransmitterSpec tx{10.0, 0.0, 0.35, 6.35e-6};
    const ReceiverSpec rx{0.15, 0.85e-6, 2.3e-6, 0.01, 100.0, 1.0, std::nullopt};
    const SystemScenario s(2.2e6, tx, {rx});
    const double g = s.coupling(0);
    const auto sens = sensitivity(s, {4.0}, 0);
    CHECK(sens.phi == 0.0);
    CHECK(sens.varphi == 0.0);
    CHECK(sens.x_dot == doctest::Approx(0.15 + g / 0.35));
    REQUIRE(std::holds_alternative<double>(sens.x_ddot));
    CHECK(std::get<double>(sens.x_ddot) == doctest::Approx((0.15 * 0.35 + g) / 0.35));
    CHECK(std::get<double>(sens.x_ddot) == doctest::Approx(sens.x_dot));
}

TEST_CASE("own-power peak matches grid argmax on random scenarios") {
    std::mt19937_64 rng(21);
    const auto grid = log_grid(1e-2, 1e2, 10000);
    int checked = 0;
    for (int t = 0; t < 60; ++t) {
        const auto s = mrc::testing::random_scenario(rng, 1 + t % 5);
        const auto x = mrc::testing::random_loads(rng, s);
        const std::size_t n = static_cast<std::size_t>(t) % s.size();
        const double peak = peak_load(s, x, n);
        CHECK(peak > s.receiver(n).r);
        if (peak <= grid.front() || peak >= grid.back()) continue;
        const auto rows = sweep(s, x, n, grid);
        CHECK(within_one_step(grid, argmax_column(rows, n), peak));
        ++checked;
    }
    CHECK(checked > 10);
}

TEST_CASE("sum-power verdict matches grid behaviour on random scenarios") {
    std::mt19937_64 rng(33);
    const auto grid = log_grid(1e-2, 1e2, 10000);
    int peaked = 0;
    int monotone = 0;
    for (int t = 0; t < 80; ++t) {
        const auto s = mrc::testing::random_scenario(rng, 2 + t % 4);
        const auto x = mrc::testing::random_loads(rng, s);
        const auto verdict = sum_peak_load(s, x, 0);
        const auto rows = sweep(s, x, 0, grid);
        if (std::holds_alternative<Monotone>(verdict)) {
            ++monotone;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                REQUIRE(rows[i].report.p_sum >= rows[i - 1].report.p_sum * (1.0 - 1e-12));
            }
        } else {
            ++peaked;
            const double peak = std::clamp(std::get<double>(verdict), grid.front(), grid.back());
            CHECK(within_one_step(grid, argmax_sum(rows), peak));
        }
    }
    CHECK(peaked > 0);
    CHECK(monotone > 0);
}

TEST_CASE("sweep preserves grid order") {
    const auto s = bundled_scenario("paper-fig2");
    const LoadVector x{7.5, 7.5, 7.5};
    std::vector<double> grid{1.0, 5.0, 20.0, 60.0};
    const auto forward = sweep(s, x, 0, grid);
    std::reverse(grid.begin(), grid.end());
    const auto backward = sweep(s, x, 0, grid);
    REQUIRE(forward.size() == backward.size());
    for (std::size_t i = 0; i < forward.size(); ++i) {
        CHECK(forward[i].x == backward[forward.size() - 1 - i].x);
        CHECK(forward[i].report.p_tx == backward[forward.size() - 1 - i].report.p_tx);
    }

    const double one[] = {12.0};
    const auto single = sweep(s, x, 0, one);
    REQUIRE(single.size() == 1);
    CHECK(single[0].report.p_tx == solve_closed_form(s, x.with(0, 12.0)).p_tx);
}

TEST_CASE("analysis argument errors") {
    const auto s = bundled_scenario("paper-fig2");
    CHECK_THROWS_AS(peak_load(s, {1.0, 1.0, 1.0}, 3), std::out_of_range);
    CHECK_THROWS_AS(sum_peak_load(s, {1.0, 1.0, 1.0}, 7), std::out_of_range);
    const double bad[] = {1.0, 0.0};
    CHECK_THROWS_AS(sweep(s, {1.0, 1.0, 1.0}, 0, bad), std::invalid_argument);
    CHECK_THROWS_AS(log_grid(0.0, 1.0, 5), std::invalid_argument);
    CHECK(linear_grid(0.0, 1.0, 5).back() == 1.0);
    CHECK(log_grid(1e-2, 1e2, 5)[2] == doctest::Approx(1.0));
}
