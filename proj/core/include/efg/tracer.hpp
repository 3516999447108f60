// Pseudo-arclength predictor-corrector path tracing.
#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>

#include "efg/homotopy.hpp"

namespace efg {

enum class TraceStatus {
  kConverged,
  kMaxIters,
  kStepUnderflow,
  kStepFailure,
  kTimeout,
  kStartFailure,
};

const char* to_string(TraceStatus s);

struct TraceRow {
  std::int64_t iter = 0;
  double t = 1.0;
  double step = 0.0;
  int corrector_iters = 0;
  double residual_norm = 0.0;
  std::span<const double> x;  // unknowns without t
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void begin(const EquilibriumSystem&) {}
  virtual void point(const EquilibriumSystem& system, const TraceRow& row) = 0;
};

// One CSV row per accepted point:
// iter,t,step,corrector_iters,residual_norm, then the system's coordinates.
class CsvTraceWriter : public TraceSink {
 public:
  explicit CsvTraceWriter(std::ostream& out) : out_(out) {}
  void begin(const EquilibriumSystem& system) override;
  void point(const EquilibriumSystem& system, const TraceRow& row) override;

 private:
  std::ostream& out_;
  std::vector<double> scratch_;
};

struct TraceResult {
  TraceStatus status = TraceStatus::kStartFailure;
  std::string message;
  HomotopyState state;    // last accepted point
  Assessment assessment;  // decoded from `state`, rescaled onto the simplex
  std::int64_t iterations = 0;
  double seconds = 0.0;
  double residual_norm = 0.0;
  bool polished = false;
  bool ok() const { return status == TraceStatus::kConverged; }
};

TraceResult trace_path(const Game& game, const SolverConfig& config,
                       Method method, Refinement refinement,
                       TraceSink* sink = nullptr);

// Minimum-norm Newton on the first-block equalities over the support of β.
// Each polished β is paired with the endpoint's β̃ (μ re-solved) and with the
// constructed companion. Returns nothing when no candidate has a smaller
// verification residual than the endpoint.
std::optional<Assessment> polish_endpoint(const Game& game,
                                          const Assessment& endpoint,
                                          Refinement refinement);

// Verification of an endpoint: the path's own assessment first, then the
// companion construction. Tolerance max(1e-5, 10·t_min·(1 + max|u|)).
struct EndpointCheck {
  bool pass = false;
  double tol = 0.0;
  double max_residual = 0.0;
  bool used_companion = false;
};
EndpointCheck check_endpoint(const Game& game, const Assessment& endpoint,
                             Refinement refinement, double t_min);

}  // namespace efg
