#include "efg/tracer.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/LU>

namespace efg {

namespace {

using Clock = std::chrono::steady_clock;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

constexpr double kInf = std::numeric_limits<double>::infinity();
// A corrector point counts as converged only once its last Newton update is
// below this fraction of the predictor step.
constexpr double kContraction = 0.1;

std::span<const double> view(const Vec& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

// Solves A·u = b after scaling each row by its largest entry; rows of the
// homotopy Jacobian shrink like t near the end of the path. Fails on a zero
// row, non-finite output or a poorly conditioned scaled matrix.
bool solve(const Mat& a, const Vec& b, Vec& u) {
  const Vec scale = a.cwiseAbs().rowwise().maxCoeff();
  if (!(scale.minCoeff() > 0.0)) return false;
  const Vec inv = scale.cwiseInverse();
  Eigen::PartialPivLU<Mat> lu(inv.asDiagonal() * a);
  if (!(lu.rcond() > 1e-14)) return false;
  u = lu.solve(inv.asDiagonal() * b);
  return u.allFinite();
}

class Tracer {
 public:
  Tracer(const EquilibriumSystem& sys, const SolverConfig& cfg)
      : sys_(sys), cfg_(cfg), n_(sys.dim()) {
    h_ = [this](std::span<const double> y, std::span<double> out) {
      return sys_.residual(y.first(n_), y[n_], out);
    };
  }

  std::size_t n() const { return n_; }

  bool eval(const Vec& y, Vec& out) const {
    out.resize(static_cast<Eigen::Index>(n_));
    return h_(view(y), {out.data(), n_});
  }

  bool jac(const Vec& y, const Vec& hy, Mat& j) const {
    return jacobian(h_, view(y), view(hy), j);
  }

  // Unit null direction of the augmented Jacobian, oriented along `prev`.
  bool tangent(const Vec& y, const Vec& hy, const Vec& prev, Vec& v) const {
    Mat j;
    if (!jac(y, hy, j)) return false;
    const auto n = static_cast<Eigen::Index>(n_);
    Mat a(n + 1, n + 1);
    a.topRows(n) = j;
    a.row(n) = prev.transpose();
    Vec rhs = Vec::Zero(n + 1);
    rhs[n] = 1.0;
    Vec u;
    if (!solve(a, rhs, u) || u.norm() == 0.0) return false;
    v = u / u.norm();
    if (v.dot(prev) < 0.0) v = -v;
    return true;
  }

  // Damped Newton. With `fixed_t` only the unknowns move; otherwise the
  // system is augmented with the hyperplane v·(y − anchor) = 0. Converged
  // once the residual is within `tol` after at least `min_iters` steps and the
  // last update was short (≤ step_tol) or cut the residual a thousandfold.
  // A small residual alone is not enough: near a φ kink the Jacobian is close
  // to singular and such points can sit far from the path.
  bool correct(Vec& y, const Vec& anchor, const Vec& v, bool fixed_t,
               double tol, double step_tol, int min_iters, int max_iters,
               int& iters) const {
    const auto n = static_cast<Eigen::Index>(n_);
    Vec hy;
    if (!eval(y, hy)) return false;
    auto augmented = [&](const Vec& yy, const Vec& hh) {
      if (fixed_t) return Vec(hh);
      Vec g(n + 1);
      g.head(n) = hh;
      g[n] = v.dot(yy - anchor);
      return g;
    };
    Vec g = augmented(y, hy);
    double gn = g.norm();
    double last = 0.0;
    double ratio = 1.0;  // residual reduction of the last Newton step
    for (iters = 0;; ++iters) {
      if (gn <= tol && iters >= min_iters &&
          (last <= step_tol || ratio <= 1e-3)) {
        return true;
      }
      if (iters == max_iters) return false;
      Mat j;
      if (!jac(y, hy, j)) return false;
      Mat a;
      if (fixed_t) {
        a = j.leftCols(n);
      } else {
        a.resize(n + 1, n + 1);
        a.topRows(n) = j;
        a.row(n) = v.transpose();
      }
      Vec step;
      if (!solve(a, -g, step)) return false;
      bool moved = false;
      double s = 1.0;
      if (step.norm() <= 1e-15 * (1.0 + y.norm())) return gn <= tol;
      for (int d = 0; d <= cfg_.max_damping && !moved; ++d, s *= 0.5) {
        Vec trial = y;
        if (fixed_t) {
          trial.head(n) += s * step;
        } else {
          trial += s * step;
        }
        if (!(trial[n] > 0.0)) continue;
        Vec ht;
        if (!eval(trial, ht)) continue;
        Vec gt = augmented(trial, ht);
        const double tn = gt.norm();
        if (tn < gn) {
          last = s * step.norm();
          ratio = tn / gn;
          y = std::move(trial);
          hy = std::move(ht);
          g = std::move(gt);
          gn = tn;
          moved = true;
        }
      }
      if (!moved) return false;
    }
  }

 private:
  const EquilibriumSystem& sys_;
  const SolverConfig& cfg_;
  std::size_t n_;
  ResidualFn h_;
};

void append_number(std::string& out, double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

}  // namespace

const char* to_string(TraceStatus s) {
  switch (s) {
    case TraceStatus::kConverged:
      return "converged";
    case TraceStatus::kMaxIters:
      return "iteration limit exceeded";
    case TraceStatus::kStepUnderflow:
      return "step underflow";
    case TraceStatus::kStepFailure:
      return "corrector failed after repeated halving";
    case TraceStatus::kTimeout:
      return "time limit exceeded";
    case TraceStatus::kStartFailure:
      break;
  }
  return "start point failure";
}

void CsvTraceWriter::begin(const EquilibriumSystem& system) {
  std::string line = "iter,t,step,corrector_iters,residual_norm";
  for (const auto& name : system.coordinate_names()) {
    line += ',';
    line += name;
  }
  out_ << line << '\n';
}

void CsvTraceWriter::point(const EquilibriumSystem& system,
                           const TraceRow& row) {
  std::string line = std::to_string(row.iter);
  line += ',';
  append_number(line, row.t);
  line += ',';
  append_number(line, row.step);
  line += ',';
  line += std::to_string(row.corrector_iters);
  line += ',';
  append_number(line, row.residual_norm);
  system.coordinates(row.x, scratch_);
  for (double v : scratch_) {
    line += ',';
    append_number(line, v);
  }
  out_ << line << '\n';
}

TraceResult trace_path(const Game& game, const SolverConfig& cfg,
                       Method method, Refinement refinement,
                       TraceSink* sink) {
  const auto started = Clock::now();
  EquilibriumSystem sys(game, cfg, method, refinement);
  Tracer tr(sys, cfg);
  const auto n = static_cast<Eigen::Index>(tr.n());

  TraceResult res;
  Vec y(n + 1);
  {
    const HomotopyState s0 = sys.start_point();
    for (Eigen::Index k = 0; k < n; ++k) y[k] = s0.x[k];
    y[n] = 1.0;
  }
  Vec hy;

  auto finish = [&](TraceStatus status, std::string message) {
    res.status = status;
    res.message = std::move(message);
    res.state.method = method;
    res.state.refinement = refinement;
    res.state.t = y[n];
    res.state.x.assign(y.data(), y.data() + n);
    res.assessment = sys.assessment(res.state.x);
    normalize(res.assessment.beta);
    normalize(res.assessment.beta_tilde);
    normalize(res.assessment.mu);
    if (status == TraceStatus::kConverged && cfg.polish) {
      if (auto p = polish_endpoint(game, res.assessment, refinement)) {
        res.assessment = std::move(*p);
        res.polished = true;
      }
    }
    res.seconds =
        std::chrono::duration<double>(Clock::now() - started).count();
    return res;
  };

  if (!tr.eval(y, hy) || hy.norm() > 1e-10) {
    return finish(TraceStatus::kStartFailure, "start point is not a solution");
  }
  res.residual_norm = hy.norm();
  auto emit = [&](double step, int iters) {
    if (!sink) return;
    TraceRow row;
    row.iter = res.iterations;
    row.t = y[n];
    row.step = step;
    row.corrector_iters = iters;
    row.residual_norm = res.residual_norm;
    row.x = std::span<const double>(y.data(), static_cast<std::size_t>(n));
    sink->point(sys, row);
  };
  if (sink) sink->begin(sys);
  emit(0.0, 0);

  Vec prev = Vec::Zero(n + 1);
  prev[n] = -1.0;
  Vec v;
  if (!tr.tangent(y, hy, prev, v)) {
    return finish(TraceStatus::kStartFailure, "singular Jacobian at start");
  }

  double h = max_step(cfg, 1.0);
  int streak = 0;
  for (;;) {
    if (res.iterations >= cfg.max_iters) {
      return finish(TraceStatus::kMaxIters,
                    "stopped at t = " + std::to_string(y[n]));
    }
    if (cfg.max_seconds > 0.0 &&
        std::chrono::duration<double>(Clock::now() - started).count() >
            cfg.max_seconds) {
      return finish(TraceStatus::kTimeout,
                    "stopped at t = " + std::to_string(y[n]));
    }
    const double t = y[n];
    h = std::min(h, max_step(cfg, t));
    int halvings = 0;
    for (;;) {
      Vec yp = y + h * v;
      const bool landing = yp[n] < cfg.t_min;
      Vec ynew;
      double taken = h;
      int iters = 0;
      bool ok;
      if (landing) {
        // Final step: land on a fixed level below t_min and correct there.
        const double t_land = std::max(yp[n], 0.5 * cfg.t_min);
        taken = (t_land - t) / v[n];
        ynew = y + taken * v;
        ynew[n] = t_land;
        ok = tr.correct(ynew, ynew, v, true,
                        corrector_tolerance(cfg, t_land), kInf, 1, cfg.newton_max,
                        iters);
        if (ok) {
          int extra = 0;
          Vec tight = ynew;
          if (tr.correct(tight, tight, v, true, 1e-13, kInf, 0, cfg.newton_max, extra)) {
            ynew = std::move(tight);
          }
        }
      } else {
        ynew = yp;
        ok = tr.correct(ynew, yp, v, false, corrector_tolerance(cfg, yp[n]),
                        kContraction * h, 1, cfg.newton_max, iters);
        ok = ok && ynew[n] <= 1.0 + 1e-12 && (ynew - yp).norm() <= h;
      }
      Vec hnew;
      Vec vnew;
      if (ok) ok = tr.eval(ynew, hnew);
      const bool done = ok && (landing || ynew[n] < cfg.t_min);
      if (ok && !done) ok = tr.tangent(ynew, hnew, v, vnew);
      if (ok) {
        y = std::move(ynew);
        hy = std::move(hnew);
        res.residual_norm = hy.norm();
        ++res.iterations;
        emit(taken, iters);
        if (done) return finish(TraceStatus::kConverged, "");
        v = std::move(vnew);
        streak = iters <= 1 ? streak + 1 : 0;
        if (streak >= 3) {
          h *= 2.0;
          streak = 0;
        }
        break;
      }
      streak = 0;
      h *= 0.5;
      if (h < 1e-14) {
        return finish(TraceStatus::kStepUnderflow,
                      "step underflow at t = " + std::to_string(y[n]));
      }
      if (++halvings > cfg.max_halvings) {
        return finish(TraceStatus::kStepFailure,
                      "corrector failed at t = " + std::to_string(y[n]));
      }
    }
  }
}

}  // namespace efg
