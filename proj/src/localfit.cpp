#include "gsepp/localfit.hpp"

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <glog/logging.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <stdexcept>

#include "gsepp/parallel.hpp"

namespace gsepp {

LocalNoiseModel LocalNoiseModel::identity(int n) { return uniform(n, PauliChannel::identity()); }

LocalNoiseModel LocalNoiseModel::uniform(int n, const PauliChannel& c) {
  LocalNoiseModel m;
  m.channels.assign(static_cast<std::size_t>(n), c);
  return m;
}

void LocalNoiseModel::validate() const {
  for (const auto& c : channels) PauliChannel::from_weights(c.p);
  if (classes.empty()) return;
  if (classes.size() != channels.size()) throw std::invalid_argument("LocalNoiseModel: one class per qubit");
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (classes[i] == classes[j] && channels[i].p != channels[j].p)
        throw std::invalid_argument("LocalNoiseModel: tied qubits have different channels");
}

DiagonalState local_model_state(const LocalNoiseModel& m, const Graph& g) {
  if (m.size() != g.size()) throw std::invalid_argument("local_model_state: one channel per vertex");
  m.validate();
  return apply_local_channels(DiagonalState::pure(g), m.channels);
}

std::vector<int> trivial_classes(int n) {
  std::vector<int> c(static_cast<std::size_t>(n));
  std::iota(c.begin(), c.end(), 0);
  return c;
}

std::vector<int> symmetry_classes(const Graph& g, const Coloring& coloring) {
  const int n = g.size();
  if (n > 10) return trivial_classes(n);
  std::vector<int> parent = trivial_classes(n);
  auto find = [&](int a) {
    while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
    return a;
  };
  // Vertices may only map within their color class and degree.
  auto compatible = [&](int a, int b) {
    return coloring.colors[static_cast<std::size_t>(a)] == coloring.colors[static_cast<std::size_t>(b)] && g.degree(a) == g.degree(b);
  };
  std::vector<int> image(static_cast<std::size_t>(n), -1);
  std::vector<bool> used(static_cast<std::size_t>(n), false);
  // Depth-first search over partial automorphisms.
  auto search = [&](auto&& self, int v) -> void {
    if (v == n) {
      for (int a = 0; a < n; ++a) {
        const int ra = find(a), rb = find(image[static_cast<std::size_t>(a)]);
        if (ra != rb) parent[static_cast<std::size_t>(std::max(ra, rb))] = std::min(ra, rb);
      }
      return;
    }
    for (int w = 0; w < n; ++w) {
      if (used[static_cast<std::size_t>(w)] || !compatible(v, w)) continue;
      bool ok = true;
      for (int u = 0; u < v && ok; ++u) ok = g.has_edge(u, v) == g.has_edge(image[static_cast<std::size_t>(u)], w);
      if (!ok) continue;
      image[static_cast<std::size_t>(v)] = w;
      used[static_cast<std::size_t>(w)] = true;
      self(self, v + 1);
      used[static_cast<std::size_t>(w)] = false;
    }
  };
  search(search, 0);
  std::vector<int> out(static_cast<std::size_t>(n));
  std::vector<int> label(static_cast<std::size_t>(n), -1);
  int next = 0;
  for (int a = 0; a < n; ++a) {
    const int r = find(a);
    if (label[static_cast<std::size_t>(r)] < 0) label[static_cast<std::size_t>(r)] = next++;
    out[static_cast<std::size_t>(a)] = label[static_cast<std::size_t>(r)];
  }
  return out;
}

namespace {

struct ClassLayout {
  std::vector<int> of_qubit;                // class id per qubit
  std::vector<std::vector<int>> members;    // qubits per class
};

ClassLayout make_layout(const std::vector<int>& classes, int n) {
  if (static_cast<int>(classes.size()) != n) throw std::invalid_argument("fit: one class id per qubit");
  ClassLayout l;
  l.of_qubit = classes;
  int k = 0;
  for (int c : classes) {
    if (c < 0) throw std::invalid_argument("fit: negative class id");
    k = std::max(k, c + 1);
  }
  l.members.resize(static_cast<std::size_t>(k));
  for (int q = 0; q < n; ++q) l.members[static_cast<std::size_t>(classes[static_cast<std::size_t>(q)])].push_back(q);
  for (const auto& m : l.members)
    if (m.empty()) throw std::invalid_argument("fit: class ids must be contiguous");
  return l;
}

PauliChannel channel_from_x(const double* x) {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += x[i] * x[i];
  PauliChannel c;
  for (int i = 0; i < 4; ++i) c.p[static_cast<std::size_t>(i)] = x[i] * x[i] / s;
  return c;
}

// Objective 1 - sum_mu sqrt(lambda_mu m_mu) with its gradient with respect to
// the channel probabilities of every qubit.
class Objective {
 public:
  Objective(const DiagonalState& target, const ClassLayout& layout) : target_(target), layout_(layout) {
    const Graph& g = target.graph();
    for (int q = 0; q < g.size(); ++q) {
      std::array<Index, 4> m{};
      for (int s = 0; s < 4; ++s) m[static_cast<std::size_t>(s)] = pauli_index_action(static_cast<Pauli>(s), q, g);
      masks_.push_back(m);
    }
  }

  int n() const { return target_.size(); }

  std::vector<PauliChannel> channels(const std::vector<double>& x) const {
    std::vector<PauliChannel> ch(static_cast<std::size_t>(n()));
    for (int q = 0; q < n(); ++q) ch[static_cast<std::size_t>(q)] = channel_from_x(&x[static_cast<std::size_t>(4 * layout_.of_qubit[static_cast<std::size_t>(q)])]);
    return ch;
  }

  double value(const std::vector<PauliChannel>& ch) const {
    const auto m = apply_local_channels(DiagonalState::pure(target_.graph()), ch);
    return 1.0 - overlap(m.coeffs());
  }

  // Value and d/dp for every qubit's four probabilities.
  double value_and_gradient(const std::vector<PauliChannel>& ch, std::vector<std::array<double, 4>>& dp) const {
    const DiagonalState pure = DiagonalState::pure(target_.graph());
    const auto m = apply_local_channels(pure, ch).coeffs();
    const std::size_t d = m.size();
    std::vector<double> w(d, 0.0);  // d(sum sqrt(lambda m)) / dm
    double ov = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double l = target_[i];
      if (l <= 0.0) continue;
      const double mm = std::max(m[i], 1e-300);
      const double r = std::sqrt(l * mm);
      ov += r;
      w[i] = 0.5 * std::sqrt(l / mm);
    }
    dp.assign(static_cast<std::size_t>(n()), {});
    for (int q = 0; q < n(); ++q) {
      std::vector<PauliChannel> rest = ch;
      rest[static_cast<std::size_t>(q)] = PauliChannel::identity();
      const auto mq = apply_local_channels(pure, rest).coeffs();
      for (int s = 0; s < 4; ++s) {
        const Index mask = masks_[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)];
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) acc += w[i] * mq[i ^ mask];
        dp[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)] = -acc;
      }
    }
    return 1.0 - ov;
  }

  double overlap(const std::vector<double>& m) const {
    double ov = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) ov += std::sqrt(std::max(0.0, target_[i]) * std::max(0.0, m[i]));
    return ov;
  }

  const ClassLayout& layout() const { return layout_; }

 private:
  const DiagonalState& target_;
  const ClassLayout& layout_;
  std::vector<std::array<Index, 4>> masks_;
};

// Ceres view of the objective restricted to the classes in `active`; the
// other classes stay at the values held in `x`.
class BlockFunction final : public ceres::FirstOrderFunction {
 public:
  BlockFunction(const Objective& obj, std::vector<double>& x, std::vector<int> active)
      : obj_(obj), x_(x), active_(std::move(active)) {}

  int NumParameters() const override { return static_cast<int>(4 * active_.size()); }

  bool Evaluate(const double* params, double* cost, double* gradient) const override {
    std::vector<double> x = x_;
    for (std::size_t a = 0; a < active_.size(); ++a)
      for (int i = 0; i < 4; ++i) x[static_cast<std::size_t>(4 * active_[a] + i)] = params[4 * a + i];
    for (std::size_t a = 0; a < active_.size(); ++a) {
      double s = 0.0;
      for (int i = 0; i < 4; ++i) s += params[4 * a + i] * params[4 * a + i];
      if (!(s > 1e-200)) return false;
    }
    const auto ch = obj_.channels(x);
    if (!gradient) {
      *cost = obj_.value(ch);
      return std::isfinite(*cost);
    }
    std::vector<std::array<double, 4>> dp;
    *cost = obj_.value_and_gradient(ch, dp);
    for (std::size_t a = 0; a < active_.size(); ++a) {
      const int c = active_[a];
      std::array<double, 4> gp{};
      for (int q : obj_.layout().members[static_cast<std::size_t>(c)])
        for (int s = 0; s < 4; ++s) gp[static_cast<std::size_t>(s)] += dp[static_cast<std::size_t>(q)][static_cast<std::size_t>(s)];
      const double* xc = params + 4 * a;
      double sum = 0.0;
      for (int i = 0; i < 4; ++i) sum += xc[i] * xc[i];
      // p_s = x_s^2 / S  =>  dp_s/dx_t = 2 x_t (delta_st - p_s) / S
      double gdotp = 0.0;
      for (int s = 0; s < 4; ++s) gdotp += gp[static_cast<std::size_t>(s)] * xc[s] * xc[s] / sum;
      for (int t = 0; t < 4; ++t) gradient[4 * a + t] = 2.0 * xc[t] * (gp[static_cast<std::size_t>(t)] - gdotp) / sum;
    }
    return std::isfinite(*cost);
  }

 private:
  const Objective& obj_;
  std::vector<double>& x_;
  std::vector<int> active_;
};

struct RunResult {
  std::vector<double> x;
  double cost = 1.0;
  int iterations = 0;
  bool converged = false;
};

ceres::GradientProblemSolver::Options solver_options(int max_iterations) {
  // BFGS resets after numerical trouble are routine here; keep glog quiet.
  static std::once_flag quiet;
  std::call_once(quiet, [] { FLAGS_minloglevel = google::GLOG_ERROR; });
  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::BFGS;
  o.max_num_iterations = max_iterations;
  o.function_tolerance = 1e-15;
  o.gradient_tolerance = 1e-14;
  o.parameter_tolerance = 1e-15;
  o.logging_type = ceres::SILENT;
  o.minimizer_progress_to_stdout = false;
  return o;
}

// Rescale each block to unit norm so BFGS sees a well-conditioned problem.
void renormalize(std::vector<double>& x) {
  for (std::size_t c = 0; c < x.size() / 4; ++c) {
    double s = 0.0;
    for (int i = 0; i < 4; ++i) s += x[4 * c + static_cast<std::size_t>(i)] * x[4 * c + static_cast<std::size_t>(i)];
    s = std::sqrt(s);
    for (int i = 0; i < 4; ++i) x[4 * c + static_cast<std::size_t>(i)] /= s;
  }
}

double minimize_block(const Objective& obj, std::vector<double>& x, const std::vector<int>& active, int max_iterations,
                      int& iterations, bool& usable) {
  std::vector<double> params;
  for (int c : active)
    for (int i = 0; i < 4; ++i) params.push_back(x[static_cast<std::size_t>(4 * c + i)]);
  ceres::GradientProblem problem(new BlockFunction(obj, x, active));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(solver_options(max_iterations), problem, params.data(), &summary);
  iterations += static_cast<int>(summary.iterations.size());
  usable = summary.termination_type == ceres::CONVERGENCE || summary.termination_type == ceres::NO_CONVERGENCE ||
           summary.termination_type == ceres::USER_SUCCESS;
  for (std::size_t a = 0; a < active.size(); ++a)
    for (int i = 0; i < 4; ++i) x[static_cast<std::size_t>(4 * active[a] + i)] = params[4 * a + static_cast<std::size_t>(i)];
  renormalize(x);
  return obj.value(obj.channels(x));
}

RunResult run_from(const Objective& obj, std::vector<double> x, const FitOptions& opt) {
  RunResult r;
  const int k = static_cast<int>(obj.layout().members.size());
  renormalize(x);
  double best = obj.value(obj.channels(x));
  std::vector<int> all(static_cast<std::size_t>(k));
  std::iota(all.begin(), all.end(), 0);
  for (int cycle = 0; cycle < opt.max_outer_cycles; ++cycle) {
    const double before = best;
    bool usable = true;
    for (int c = 0; c < k; ++c) {
      std::vector<double> trial = x;
      const double v = minimize_block(obj, trial, {c}, opt.max_inner_iterations, r.iterations, usable);
      if (v <= best) x = std::move(trial), best = v;
    }
    if (k > 1) {
      std::vector<double> trial = x;
      const double v = minimize_block(obj, trial, all, opt.max_inner_iterations, r.iterations, usable);
      if (v <= best) x = std::move(trial), best = v;
    }
    if (before - best < opt.tolerance) {
      r.converged = true;
      break;
    }
  }
  r.x = std::move(x);
  r.cost = best;
  return r;
}

// Starting point: identity weight matched to the target fidelity per qubit.
std::vector<double> informed_start(const DiagonalState& target, int k) {
  const double f = std::clamp(target.fidelity(), 1e-6, 1.0);
  const double keep = std::pow(f, 1.0 / target.size());
  const double other = std::max((1.0 - keep) / 3.0, 1e-4);
  std::vector<double> x;
  for (int c = 0; c < k; ++c) {
    x.push_back(std::sqrt(keep));
    for (int i = 0; i < 3; ++i) x.push_back(std::sqrt(other));
  }
  return x;
}

std::vector<double> random_start(int k, std::mt19937_64& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> x;
  for (int c = 0; c < k; ++c) {
    // Bias towards mostly-identity channels where optima typically live.
    std::array<double, 4> w{e(rng) * 4.0, e(rng), e(rng), e(rng)};
    for (double v : w) x.push_back(std::sqrt(v));
  }
  return x;
}

}  // namespace

FitReport fit_closest_local(const DiagonalState& target, const std::vector<int>& classes, const FitOptions& options) {
  target.validate();
  if (options.restarts < 1) throw std::invalid_argument("fit: need at least one restart");
  const int n = target.size();
  const ClassLayout layout = make_layout(classes, n);
  const int k = static_cast<int>(layout.members.size());
  const Objective obj(target, layout);

  FitReport rep;
  rep.target_fidelity = std::sqrt(std::max(0.0, target.fidelity()));
  std::mt19937_64 rng(options.seed);
  RunResult best;
  best.cost = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    std::vector<double> start = r == 0 ? informed_start(target, k) : random_start(k, rng);
    RunResult run = run_from(obj, std::move(start), options);
    ++rep.restarts;
    rep.iterations += run.iterations;
    if (run.converged) ++rep.restarts_converged;
    if (run.cost < best.cost) best = std::move(run);
  }
  rep.model.channels = obj.channels(best.x);
  rep.model.classes = classes;
  rep.fidelity = std::clamp(1.0 - best.cost, 0.0, 1.0);
  rep.converged = best.converged;
  if (!best.converged) rep.message = "best restart hit the outer cycle limit";
  const double dist = 1.0 - rep.target_fidelity;
  rep.relative_deviation = dist > 0.0 ? std::max(0.0, rep.one_minus_f()) / dist : std::numeric_limits<double>::quiet_NaN();
  return rep;
}

FitReport fit_closest_local(const DiagonalState& target, const FitOptions& options) {
  return fit_closest_local(target, symmetry_classes(target.graph(), color(target.graph())), options);
}

double binary_like_grid_fidelity(const DiagonalState& target, const Coloring& coloring, double step) {
  if (!coloring.two_colorable()) throw std::invalid_argument("binary_like_grid_fidelity: need a two-coloring");
  const int n = target.size();
  const int steps = static_cast<int>(std::lround(1.0 / step));
  double best = 0.0;
  for (int i = 0; i <= steps; ++i)
    for (int j = 0; j <= steps; ++j) {
      const double a = static_cast<double>(i) / steps, b = static_cast<double>(j) / steps;
      std::vector<PauliChannel> ch;
      for (int q = 0; q < n; ++q)
        ch.push_back(coloring.colors[static_cast<std::size_t>(q)] == 0 ? PauliChannel::bitflip(a) : PauliChannel::phaseflip(b));
      best = std::max(best, fidelity_diagonal(target, apply_local_channels(DiagonalState::pure(target.graph()), ch)));
    }
  return best;
}

GraphFamily parse_graph_family(const std::string& s) {
  if (s == "ghz") return GraphFamily::Ghz;
  if (s == "linear-cluster" || s == "line") return GraphFamily::LinearCluster;
  if (s == "ring-purification") return GraphFamily::RingPurification;
  if (s == "ring") return GraphFamily::Ring;
  throw std::invalid_argument("unknown graph family '" + s + "'");
}

std::string to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::Ghz: return "ghz";
    case GraphFamily::LinearCluster: return "linear-cluster";
    case GraphFamily::RingPurification: return "ring-purification";
    case GraphFamily::Ring: return "ring";
  }
  return "?";
}

Graph family_graph(GraphFamily f, int n) {
  switch (f) {
    case GraphFamily::Ghz: return Graph::star(n, 0);
    case GraphFamily::LinearCluster: return Graph::line(n);
    case GraphFamily::RingPurification:
      if (n != 6) throw std::invalid_argument("ring-purification graph has six qubits");
      return ring_purification_graph();
    case GraphFamily::Ring: return Graph::ring(n);
  }
  throw std::invalid_argument("bad graph family");
}

GateNoiseKind parse_gate_noise(const std::string& s) {
  if (s == "binary-like") return GateNoiseKind::BinaryLike;
  if (s == "local-depolarizing" || s == "white") return GateNoiseKind::LocalDepolarizing;
  if (s == "correlated-depolarizing") return GateNoiseKind::CorrelatedDepolarizing;
  throw std::invalid_argument("unknown gate noise '" + s + "'");
}

std::string to_string(GateNoiseKind k) {
  switch (k) {
    case GateNoiseKind::BinaryLike: return "binary-like";
    case GateNoiseKind::LocalDepolarizing: return "local-depolarizing";
    case GateNoiseKind::CorrelatedDepolarizing: return "correlated-depolarizing";
  }
  return "?";
}

GateNoiseModel make_gate_noise(GateNoiseKind k, double p) {
  switch (k) {
    case GateNoiseKind::BinaryLike: return GateNoiseModel::binary_like(p);
    case GateNoiseKind::LocalDepolarizing: return GateNoiseModel::local_depolarizing(p);
    case GateNoiseKind::CorrelatedDepolarizing: return GateNoiseModel::correlated_depolarizing(p);
  }
  throw std::invalid_argument("bad gate noise kind");
}

EppSchedule family_schedule(const Coloring& coloring, GateNoiseKind noise, int final_step) {
  if (coloring.k > 2) return EppSchedule::cyclic(coloring.k, final_step);
  if (noise == GateNoiseKind::BinaryLike) return EppSchedule::p2_only();
  return EppSchedule::alternating(final_step);
}

EppResult family_fixed_point(const DeviationOptions& o, double gate_param) {
  const Graph g = family_graph(o.family, o.n);
  const GateNoiseModel model = make_gate_noise(o.noise, gate_param);
  const DiagonalState start = o.noise == GateNoiseKind::BinaryLike ? DiagonalState::pure(g) : DiagonalState::isotropic(g, o.initial_fidelity);
  if (o.family == GraphFamily::Ghz) {
    const Coloring c = two_coloring(g, bit(0));
    return fixed_point(model, start, family_schedule(c, o.noise, o.final_step), c, {});
  }
  const Coloring c = color(g);
  return fixed_point(model, start, family_schedule(c, o.noise, o.final_step));
}

std::vector<DeviationPoint> deviation_curve(const std::vector<double>& gate_params, const DeviationOptions& options) {
  std::vector<DeviationPoint> out(gate_params.size());
  parallel_for(gate_params.size(), [&](std::size_t i) {
    DeviationPoint& pt = out[i];
    pt.gate_param = gate_params[i];
    try {
      const EppResult r = family_fixed_point(options, pt.gate_param);
      if (!r.converged) throw std::runtime_error(r.failure.empty() ? "EPP did not converge" : r.failure);
      if (!r.distilled) throw std::runtime_error("EPP fixed point is not distilled");
      const Coloring c = options.family == GraphFamily::Ghz ? two_coloring(r.state.graph(), bit(0)) : color(r.state.graph());
      const FitReport fit = fit_closest_local(r.state, symmetry_classes(r.state.graph(), c), options.fit);
      pt.one_minus_F = fit.one_minus_f();
      pt.f = fit.target_fidelity;
      pt.relative_deviation = std::isnan(fit.relative_deviation) ? 0.0 : fit.relative_deviation;
      pt.restarts_converged = fit.restarts_converged;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });
  return out;
}

}  // namespace gsepp
