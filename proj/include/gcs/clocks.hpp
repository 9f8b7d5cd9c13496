#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace gcs {

enum class GeneratorKind { constant, alternating, random_walk, script };

struct RateSegment {
  double start;  // real time, seconds
  double rate;   // dH/dt on [start, next start)
};

/// Piecewise-constant hardware rate. The last segment extends forever.
struct RateSchedule {
  std::vector<RateSegment> segments{{0.0, 1.0}};
  GeneratorKind generator = GeneratorKind::constant;
};

/// Problems with a schedule for drift bound theta; empty iff valid.
std::vector<std::string> validate_schedule(const RateSchedule& s, double theta);

RateSchedule constant_schedule(double rate);

/// Rate alternates between theta and 1 every `period` seconds up to `horizon`.
/// Neighbors given opposite `start_high` run in antiphase.
RateSchedule alternating_schedule(double theta, double period, bool start_high, double horizon);

/// Bounded random walk: every `dwell` seconds the rate moves by a uniform step in
/// [-step, step], clamped to [1, theta].
RateSchedule random_walk_schedule(double theta, double dwell, double step, double start_rate, double horizon,
                                  std::mt19937_64& rng);

/// Exact piecewise-linear integrator of a RateSchedule.
class HardwareClock {
 public:
  HardwareClock() : HardwareClock(0.0, RateSchedule{}) {}
  /// Throws ParameterError on a structurally broken schedule (empty, first start != 0,
  /// non-increasing starts, non-positive rate). Drift bounds are not enforced here.
  HardwareClock(double initial_value, RateSchedule schedule);

  [[nodiscard]] double initial_value() const { return prefix_.front(); }
  [[nodiscard]] const RateSchedule& schedule() const { return schedule_; }

  /// H(t); throws ParameterError for t < 0.
  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double rate_at(double t) const;
  /// Real time at which H reaches h (h >= H(0)).
  [[nodiscard]] double inverse(double h) const;
  /// First rate change strictly after t, if any.
  [[nodiscard]] std::optional<double> next_breakpoint(double t) const;

  /// Index of the rate segment containing t.
  [[nodiscard]] std::size_t segment_at(double t) const;

 private:
  RateSchedule schedule_;
  std::vector<double> prefix_;  // H at each segment start
};

/// dt-envelope of the drift model: (t2 - t1) <= H(t2) - H(t1) <= theta (t2 - t1).
bool check_lipschitz(const HardwareClock& c, double t1, double t2, double theta);

double hw_value(const HardwareClock& c, double t);

enum class CorrectionMode : std::uint8_t { own_rate = 0, fast = 1 };

/// How fast mode changes the logical rate: multiplicative gives (1 + mu) * dH/dt,
/// additive gives dH/dt + mu.
enum class CorrectionSemantics { multiplicative, additive };

struct CorrectionSegment {
  double start;
  CorrectionMode mode;
};

/// Hardware clock plus the integral of the correction function.
class LogicalClock {
 public:
  LogicalClock() = default;
  LogicalClock(HardwareClock hardware, double mu,
               CorrectionSemantics semantics = CorrectionSemantics::multiplicative);

  [[nodiscard]] const HardwareClock& hardware() const { return hw_; }
  [[nodiscard]] double mu() const { return mu_; }
  [[nodiscard]] CorrectionSemantics semantics() const { return semantics_; }
  [[nodiscard]] const std::vector<CorrectionSegment>& corrections() const { return log_; }

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double rate_at(double t) const;
  [[nodiscard]] CorrectionMode mode_at(double t) const;
  [[nodiscard]] CorrectionMode current_mode() const { return log_.back().mode; }
  [[nodiscard]] double last_change() const { return log_.back().start; }

  /// Unique real time t with value(t) == target.
  [[nodiscard]] double invert(double target) const;

  /// Switches mode from real time t on; past values are unchanged. Setting the
  /// current mode again is a no-op. Throws InternalError if t precedes the last change.
  void set_mode(double t, CorrectionMode mode);

 private:
  [[nodiscard]] std::size_t segment_at(double t) const;
  [[nodiscard]] double value_in(std::size_t seg, double t) const;
  [[nodiscard]] double rate_in(std::size_t seg, double t) const;

  HardwareClock hw_;
  double mu_ = 0.0;
  CorrectionSemantics semantics_ = CorrectionSemantics::multiplicative;
  std::vector<CorrectionSegment> log_{{0.0, CorrectionMode::own_rate}};
  std::vector<double> start_value_{0.0};  // L at each correction segment start
  std::vector<double> start_hw_{0.0};     // H at each correction segment start
};

double logical_value(const LogicalClock& c, double t);
double invert_logical(const LogicalClock& c, double target);
void set_mode(LogicalClock& c, double t, CorrectionMode mode);

}  // namespace gcs
