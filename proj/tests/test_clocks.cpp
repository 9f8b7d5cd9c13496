#include "gcs/clocks.hpp"
#include "gcs/errors.hpp"

#include <doctest.h>

#include <random>

using namespace gcs;

namespace {

// Hand integral of a piecewise-constant rate: rate times overlap of each segment with [0, t].
double integrate(const std::vector<RateSegment>& segs, double h0, double t) {
  double h = h0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const double end = i + 1 < segs.size() ? segs[i + 1].start : t;
    const double overlap = std::min(end, t) - segs[i].start;
    if (overlap > 0.0) h += segs[i].rate * overlap;
  }
  return h;
}

HardwareClock rate_clock(double r) { return HardwareClock(0.0, constant_schedule(r)); }

}  // namespace

TEST_CASE("hw_value examples") {
  CHECK(hw_value(rate_clock(1.0), 5.0) == 5.0);
  CHECK(hw_value(rate_clock(1.01), 100.0) == doctest::Approx(101.0).epsilon(1e-14));
  HardwareClock c(0.0, RateSchedule{{{0.0, 1.0}, {10.0, 1.01}}, GeneratorKind::script});
  CHECK(hw_value(c, 20.0) == doctest::Approx(20.1).epsilon(1e-14));
  CHECK_THROWS_AS(hw_value(c, -1.0), ParameterError);
}

TEST_CASE("hw_value matches a stepped integral on random schedules") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> rate(1.0, 1.01);
  std::uniform_real_distribution<double> gap(0.5, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<RateSegment> segs{{0.0, rate(rng)}};
    for (int i = 0; i < 8; ++i) segs.push_back({segs.back().start + gap(rng), rate(rng)});
    HardwareClock c(3.0, RateSchedule{segs, GeneratorKind::script});
    for (double t : {0.0, 1.3, 7.7, 20.0, 45.0}) {
      CHECK(c.value(t) == doctest::Approx(integrate(segs, 3.0, t)).epsilon(1e-13));
      CHECK(c.inverse(c.value(t)) == doctest::Approx(t).epsilon(1e-12));
    }
  }
}

TEST_CASE("broken schedules are rejected") {
  CHECK_THROWS_AS(HardwareClock(0.0, RateSchedule{{}, GeneratorKind::script}), ParameterError);
  CHECK_THROWS_AS(HardwareClock(0.0, RateSchedule{{{1.0, 1.0}}, GeneratorKind::script}), ParameterError);
  CHECK_THROWS_AS(HardwareClock(0.0, RateSchedule{{{0.0, 1.0}, {0.0, 1.0}}, GeneratorKind::script}), ParameterError);
  CHECK_FALSE(validate_schedule(RateSchedule{{{0.0, 0.9}}, GeneratorKind::script}, 1.01).empty());
  CHECK_FALSE(validate_schedule(constant_schedule(1.02), 1.01).empty());
  CHECK(validate_schedule(constant_schedule(1.01), 1.01).empty());
}

TEST_CASE("generators stay inside the drift envelope") {
  std::mt19937_64 rng(5);
  const auto walk = random_walk_schedule(1.001, 10.0, 0.0004, 1.0005, 1000.0, rng);
  CHECK(validate_schedule(walk, 1.001).empty());
  CHECK(walk.segments.size() > 50);
  const auto alt = alternating_schedule(1.001, 100.0, true, 1000.0);
  CHECK(validate_schedule(alt, 1.001).empty());
  CHECK(alt.segments[0].rate == 1.001);
  CHECK(alt.segments[1].rate == 1.0);
  CHECK(alternating_schedule(1.001, 100.0, false, 1000.0).segments[0].rate == 1.0);
}

TEST_CASE("logical_value examples") {
  LogicalClock plain(rate_clock(1.003), 0.1);
  for (double t : {0.0, 3.0, 99.0}) CHECK(logical_value(plain, t) == hw_value(plain.hardware(), t));

  LogicalClock a(rate_clock(1.0), 0.1);
  set_mode(a, 0.0, CorrectionMode::fast);
  CHECK(logical_value(a, 10.0) == doctest::Approx(11.0).epsilon(1e-14));

  LogicalClock b(rate_clock(1.01), 0.1);
  set_mode(b, 0.0, CorrectionMode::fast);
  set_mode(b, 10.0, CorrectionMode::own_rate);
  // 1.1 * 1.01 * 10 + 1.01 * 10
  CHECK(logical_value(b, 20.0) == doctest::Approx(21.21).epsilon(1e-14));
}

TEST_CASE("additive semantics adds mu to the hardware rate") {
  LogicalClock c(rate_clock(1.01), 0.1, CorrectionSemantics::additive);
  set_mode(c, 0.0, CorrectionMode::fast);
  CHECK(c.value(10.0) == doctest::Approx(11.1).epsilon(1e-14));
  CHECK(c.rate_at(5.0) == doctest::Approx(1.11).epsilon(1e-14));
}

TEST_CASE("invert_logical examples") {
  CHECK(invert_logical(LogicalClock(rate_clock(1.0), 0.1), 7.0) == 7.0);
  CHECK(invert_logical(LogicalClock(rate_clock(1.01), 0.1), 20.2) == doctest::Approx(20.0).epsilon(1e-14));
  CHECK_THROWS_AS(invert_logical(LogicalClock(HardwareClock(5.0, constant_schedule(1.0)), 0.1), 4.0),
                  ParameterError);
}

TEST_CASE("invert_logical round-trips through corrections and rate changes") {
  std::mt19937_64 rng(9);
  const auto sched = random_walk_schedule(1.001, 3.0, 0.0005, 1.0, 200.0, rng);
  LogicalClock c(HardwareClock(2.0, sched), 0.01);
  for (int k = 1; k < 20; ++k) set_mode(c, 10.0 * k, k % 2 ? CorrectionMode::fast : CorrectionMode::own_rate);
  for (double t = 0.0; t < 250.0; t += 3.7) CHECK(invert_logical(c, c.value(t)) == doctest::Approx(t).epsilon(1e-12));
}

TEST_CASE("set_mode examples") {
  LogicalClock c(rate_clock(1.0), 0.05);
  set_mode(c, 0.0, CorrectionMode::fast);
  CHECK(c.value(1.0) == doctest::Approx(1.05).epsilon(1e-14));

  LogicalClock d(rate_clock(1.0), 0.05);
  set_mode(d, 1.0, CorrectionMode::own_rate);
  set_mode(d, 2.0, CorrectionMode::own_rate);
  CHECK(d.corrections().size() == 1);

  LogicalClock e(rate_clock(1.0), 0.1);
  for (int k = 0; k < 4; ++k) set_mode(e, 10.0 * k, k % 2 == 0 ? CorrectionMode::fast : CorrectionMode::own_rate);
  CHECK(e.value(40.0) == doctest::Approx(42.0).epsilon(1e-14));
  CHECK(e.mode_at(15.0) == CorrectionMode::own_rate);
  CHECK(e.mode_at(25.0) == CorrectionMode::fast);

  CHECK_THROWS_AS(set_mode(e, 5.0, CorrectionMode::own_rate), InternalError);
}

TEST_CASE("past values do not change when the mode switches") {
  LogicalClock c(rate_clock(1.0007), 0.02);
  const double before = c.value(50.0);
  set_mode(c, 50.0, CorrectionMode::fast);
  CHECK(c.value(50.0) == before);
  CHECK(c.value(20.0) == doctest::Approx(20.0 * 1.0007).epsilon(1e-14));
}

TEST_CASE("check_lipschitz examples") {
  CHECK(check_lipschitz(rate_clock(1.0), 0.0, 100.0, 1.001));
  CHECK(check_lipschitz(rate_clock(1.001), 3.0, 100.0, 1.001));
  HardwareClock bad(0.0, RateSchedule{{{0.0, 1.0}, {5.0, 0.9}}, GeneratorKind::script});
  CHECK_FALSE(check_lipschitz(bad, 0.0, 10.0, 1.001));
  CHECK_FALSE(check_lipschitz(rate_clock(1.002), 0.0, 10.0, 1.001));
}

TEST_CASE("logical rate stays within [1, (1 + mu) theta]") {
  std::mt19937_64 rng(21);
  const double theta = 1.001;
  const double mu = 0.01;
  LogicalClock c(HardwareClock(0.0, random_walk_schedule(theta, 2.0, 0.0003, 1.0, 300.0, rng)), mu);
  std::bernoulli_distribution coin(0.5);
  for (int k = 0; k < 30; ++k) set_mode(c, 10.0 * k, coin(rng) ? CorrectionMode::fast : CorrectionMode::own_rate);
  for (double t = 0.0; t < 300.0; t += 1.0) {
    const double dl = c.value(t + 1.0) - c.value(t);
    CHECK(dl >= 1.0 - 1e-12);
    CHECK(dl <= (1.0 + mu) * theta + 1e-12);
  }
}
