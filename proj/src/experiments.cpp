#include "gsepp/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "gsepp/localfit.hpp"
#include "gsepp/localize.hpp"
#include "gsepp/parallel.hpp"
#include "gsepp/symscale.hpp"

#ifndef GSEPP_VERSION
#define GSEPP_VERSION "0.0.0"
#endif

namespace gsepp {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

// Reads one JSON object, remembering which keys were consumed so leftovers
// can be reported as unknown.
class Params {
 public:
  Params(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_, "expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  std::string at(const std::string& key) const { return path_ + "." + key; }

  std::string str(const std::string& key, const std::string& fallback) {
    if (!take(key)) return fallback;
    if (!j_[key].is_string()) throw ConfigError(at(key), "expected a string");
    return j_[key].get<std::string>();
  }

  double number(const std::string& key, double fallback, double lo, double hi) {
    if (!take(key)) return fallback;
    return as_number(j_[key], at(key), lo, hi);
  }

  int integer(const std::string& key, int fallback, int lo, int hi) {
    if (!take(key)) return fallback;
    return as_int(j_[key], at(key), lo, hi);
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!take(key)) return fallback;
    if (!j_[key].is_boolean()) throw ConfigError(at(key), "expected true or false");
    return j_[key].get<bool>();
  }

  /// A list of numbers or {"from", "to", "steps"} (inclusive, evenly spaced).
  std::vector<double> grid(const std::string& key, double lo, double hi) {
    if (!take(key)) throw ConfigError(at(key), "required");
    const json& g = j_[key];
    std::vector<double> out;
    if (g.is_array()) {
      for (std::size_t i = 0; i < g.size(); ++i) out.push_back(as_number(g[i], at(key) + "[" + std::to_string(i) + "]", lo, hi));
    } else {
      Params r(g, at(key));
      const double from = r.number("from", NAN, lo, hi), to = r.number("to", NAN, lo, hi);
      const int steps = r.integer("steps", 0, 1, 100000);
      r.finish();
      r.require({"from", "to", "steps"});
      if (to < from) throw ConfigError(at(key), "'to' must not be below 'from'");
      for (int i = 0; i < steps; ++i) out.push_back(steps == 1 ? from : from + (to - from) * i / (steps - 1));
    }
    if (out.empty()) throw ConfigError(at(key), "grid is empty");
    return out;
  }

  /// A list of integers or {"from", "to", "step"}.
  std::vector<int> int_grid(const std::string& key, int lo, int hi) {
    if (!take(key)) throw ConfigError(at(key), "required");
    const json& g = j_[key];
    std::vector<int> out;
    if (g.is_array()) {
      for (std::size_t i = 0; i < g.size(); ++i) out.push_back(as_int(g[i], at(key) + "[" + std::to_string(i) + "]", lo, hi));
    } else {
      Params r(g, at(key));
      const int from = r.integer("from", 0, lo, hi), to = r.integer("to", 0, lo, hi), step = r.integer("step", 1, 1, hi);
      r.finish();
      r.require({"from", "to"});
      for (int n = from; n <= to; n += step) out.push_back(n);
    }
    if (out.empty()) throw ConfigError(at(key), "grid is empty");
    return out;
  }

  std::vector<std::string> strings(const std::string& key, const std::vector<std::string>& fallback) {
    if (!take(key)) return fallback;
    const json& g = j_[key];
    if (!g.is_array() || g.empty()) throw ConfigError(at(key), "expected a non-empty list of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (!g[i].is_string()) throw ConfigError(at(key) + "[" + std::to_string(i) + "]", "expected a string");
      out.push_back(g[i].get<std::string>());
    }
    return out;
  }

  /// The raw value, marked as used; null when absent.
  const json* raw(const std::string& key) { return take(key) ? &j_[key] : nullptr; }

  void require(std::initializer_list<const char*> keys) const {
    for (const char* k : keys)
      if (!has(k)) throw ConfigError(at(k), "required");
  }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!used_.count(it.key())) throw ConfigError(at(it.key()), "unknown parameter");
  }

 private:
  bool take(const std::string& key) {
    if (!j_.contains(key)) return false;
    used_.insert(key);
    return true;
  }
  static double as_number(const json& v, const std::string& path, double lo, double hi) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!(x >= lo && x <= hi)) throw ConfigError(path, "must lie in [" + fmt(lo) + ", " + fmt(hi) + "]");
    return x;
  }
  static int as_int(const json& v, const std::string& path, int lo, int hi) {
    if (!v.is_number_integer()) throw ConfigError(path, "expected an integer");
    const auto x = v.get<long long>();
    if (x < lo || x > hi) throw ConfigError(path, "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
  }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

// Wraps a parse_* call so its invalid_argument becomes a ConfigError.
template <class F>
auto parse_as(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path, e.what());
  }
}

int parse_step(Params& p, const std::string& key, int fallback, int colors) {
  const json* v = p.raw(key);
  if (!v) return fallback;
  int step = -1;
  if (v->is_string() && *v == "P1") step = kP1;
  else if (v->is_string() && *v == "P2") step = kP2;
  else if (v->is_number_integer()) step = v->get<int>();
  else throw ConfigError(p.at(key), "expected \"P1\", \"P2\" or a color index");
  if (step < 0 || step >= colors) throw ConfigError(p.at(key), "step out of range for a " + std::to_string(colors) + "-colorable graph");
  return step;
}

// CSV with '#' header lines.
class Csv {
 public:
  Csv(const std::string& experiment, const std::vector<std::string>& conventions, const std::vector<std::string>& columns) {
    out_ << "# gsepp " << version() << " " << experiment << "\n";
    for (const auto& c : conventions) out_ << "# " << c << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << "\n";
  }
  void row(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) out_ << (i ? "," : "") << csv_field(fields[i]);
    out_ << "\n";
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

const char* kBitOrder = "bit order: bit i of a graph-basis index is qubit i; Pauli patterns are written qubit 1 first";
const char* kRootFidelity = "fidelity: F = sum_mu sqrt(lambda_mu m_mu) (root convention); f = sqrt(lambda_0); rel_dev = (1-F)/(1-f)";
const char* kJamFidelity = "fidelity: Jamiolkowski fidelity <Phi+|J|Phi+> of the logical map; unencoded reference is the channel's identity weight";
const char* kGateParam = "gate_param: two-qubit gate noise parameter p in [0,1], 1 = perfect gates; dimensionless";

struct Output {
  std::vector<std::pair<std::string, std::string>> files;
  int points = 0;
  int failed = 0;
};

using Job = std::function<Output()>;

std::string ok_field(bool ok) { return ok ? "1" : "0"; }

// ---------------------------------------------------------------------------

Job deviation_curve_job(Params& p, std::uint64_t seed) {
  DeviationOptions o;
  o.family = parse_as(p.at("family"), [&] { return parse_graph_family(p.str("family", "ghz")); });
  const int n_max = o.family == GraphFamily::Ghz ? 14 : 12;
  o.n = p.integer("n", o.family == GraphFamily::RingPurification ? 6 : 4, 3, n_max);
  if (o.family == GraphFamily::RingPurification && o.n != 6) throw ConfigError(p.at("n"), "the ring-purification graph has 6 qubits");
  o.noise = parse_as(p.at("noise"), [&] { return parse_gate_noise(p.str("noise", "local-depolarizing")); });
  const Graph g = family_graph(o.family, o.n);
  const Coloring col = o.family == GraphFamily::Ghz ? two_coloring(g, bit(0)) : color(g);
  o.final_step = parse_step(p, "final_step", kP2, col.k);
  o.initial_fidelity = p.number("initial_fidelity", 0.9, 0.5, 1.0);
  o.fit.restarts = p.integer("restarts", 16, 1, 256);
  o.fit.seed = seed;
  const auto grid = p.grid("gate_params", 0.0, 1.0);
  const bool channels = p.boolean("channels", false);
  p.finish();

  return [=] {
    struct Row {
      DeviationPoint pt;
      std::array<double, 4> a{}, b{};
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      DeviationPoint& pt = rows[i].pt;
      pt.gate_param = grid[i];
      try {
        const EppResult r = family_fixed_point(o, pt.gate_param);
        if (!r.converged) throw std::runtime_error(r.failure.empty() ? "EPP did not converge" : r.failure);
        if (!r.distilled) throw std::runtime_error("EPP fixed point is not distilled");
        const FitReport fit = fit_closest_local(r.state, symmetry_classes(g, col), o.fit);
        pt.one_minus_F = fit.one_minus_f();
        pt.f = fit.target_fidelity;
        pt.relative_deviation = std::isnan(fit.relative_deviation) ? 0.0 : fit.relative_deviation;
        pt.restarts_converged = fit.restarts_converged;
        for (int k = 0; k < 4; ++k) {
          rows[i].a[static_cast<std::size_t>(k)] = fit.model.channels[0][k];
          rows[i].b[static_cast<std::size_t>(k)] = fit.model.channels[1][k];
        }
      } catch (const std::exception& e) {
        pt.ok = false;
        pt.error = e.what();
      }
    });
    std::vector<std::string> cols = {"gate_param", "one_minus_F", "rel_dev", "f", "restarts_converged"};
    if (channels)
      for (const char* c : {"q0_I", "q0_X", "q0_Y", "q0_Z", "q1_I", "q1_X", "q1_Y", "q1_Z"}) cols.push_back(c);
    cols.push_back("ok");
    cols.push_back("error");
    Csv csv("deviation-curve",
            {"family " + to_string(o.family) + ", N = " + std::to_string(o.n) + ", gate noise " + to_string(o.noise) +
                 ", final step " + std::to_string(o.final_step),
             kRootFidelity, kGateParam, kBitOrder, "q0_*/q1_*: fitted Pauli channel weights on qubit 0 and qubit 1"},
            cols);
    Output out;
    for (const auto& r : rows) {
      std::vector<std::string> f = {fmt(r.pt.gate_param), fmt(r.pt.ok ? r.pt.one_minus_F : NAN), fmt(r.pt.ok ? r.pt.relative_deviation : NAN),
                                    fmt(r.pt.ok ? r.pt.f : NAN), std::to_string(r.pt.restarts_converged)};
      if (channels)
        for (const auto* w : {&r.a, &r.b})
          for (double x : *w) f.push_back(fmt(r.pt.ok ? x : NAN));
      f.push_back(ok_field(r.pt.ok));
      f.push_back(r.pt.error);
      csv.row(f);
      ++out.points;
      out.failed += r.pt.ok ? 0 : 1;
    }
    out.files.emplace_back("deviation.csv", csv.str());
    return out;
  };
}

Job localize_job(Params& p, std::uint64_t seed) {
  DeviationOptions o;
  o.n = p.integer("n", 4, 3, 14);
  o.noise = parse_as(p.at("noise"), [&] { return parse_gate_noise(p.str("noise", "local-depolarizing")); });
  o.final_step = parse_step(p, "final_step", kP2, 2);
  o.initial_fidelity = p.number("initial_fidelity", 0.9, 0.5, 1.0);
  o.fit.restarts = p.integer("restarts", 16, 1, 256);
  o.fit.seed = seed;
  const auto grid = p.grid("gate_params", 0.0, 1.0);
  p.finish();

  return [=] {
    struct Row {
      double gate_param = 1.0;
      LocalizationReport rep;
      double before = NAN, after = NAN;
      bool ok = true;
      std::string error;
    };
    std::vector<Row> rows(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
      Row& r = rows[i];
      r.gate_param = grid[i];
      try {
        const EppResult fp = family_fixed_point(o, r.gate_param);
        if (!fp.converged || !fp.distilled) throw std::runtime_error("EPP fixed point is not distilled");
        const LocalizedState loc = localize_noise(twirl_to_standard_form(fp.state));
        r.rep = loc.report;
        const auto classes = symmetry_classes(fp.state.graph(), two_coloring(fp.state.graph(), bit(0)));
        r.before = fit_closest_local(fp.state, classes, o.fit).one_minus_f();
        r.after = fit_closest_local(loc.state, classes, o.fit).one_minus_f();
        if (!loc.report.feasible) throw std::runtime_error(loc.report.message.empty() ? "localization infeasible" : loc.report.message);
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    });
    Csv csv("localize",
            {"GHZ N = " + std::to_string(o.n) + ", gate noise " + to_string(o.noise), kRootFidelity,
             "F_before/F_after: sqrt(lambda_0) before and after localization; relative_reduction = (F_before-F_after)/F_before",
             "one_minus_F_*: deviation from the closest local model (root convention)", kGateParam, kBitOrder},
            {"gate_param", "F_before", "F_after", "relative_reduction", "mix_p", "Q", "one_minus_F_before", "one_minus_F_after", "ok", "error"});
    Output out;
    for (const auto& r : rows) {
      csv.row({fmt(r.gate_param), fmt(r.ok ? r.rep.fidelity_before : NAN), fmt(r.ok ? r.rep.fidelity_after : NAN),
               fmt(r.ok ? r.rep.relative_reduction : NAN), fmt(r.ok ? r.rep.p : NAN), fmt(r.ok ? r.rep.Q : NAN), fmt(r.before),
               fmt(r.after), ok_field(r.ok), r.error});
      ++out.points;
      out.failed += r.ok ? 0 : 1;
    }
    out.files.emplace_back("localize.csv", csv.str());
    return out;
  };
}

Code code_param(Params& p, const std::string& fallback) {
  const std::string name = p.str("code", fallback);
  return parse_as(p.at("code"), [&] { return parse_code(name); });
}

Job decode_only_job(Params& p, std::uint64_t) {
  const Code code = code_param(p, "repetition-phaseflip");
  const bool ring = code.kind == CodeKind::ClusterRing;
  const GateNoiseKind noise = parse_as(p.at("noise"), [&] { return parse_gate_noise(p.str("noise", "local-depolarizing")); });
  const int final_step = parse_step(p, "final_step", kP1, ring ? 3 : 2);
  const double initial = p.number("initial_fidelity", 0.9, 0.5, 1.0);
  const auto grid = p.grid("gate_params", 0.0, 1.0);
  const std::vector<std::string> fallback =
      ring ? std::vector<std::string>{"epp", "direct-gates", "gate-based"} : std::vector<std::string>{"epp-P1", "epp-P2", "direct-gates", "gate-based"};
  const auto approaches = p.strings("approaches", fallback);
  for (std::size_t i = 0; i < approaches.size(); ++i) {
    const auto& a = approaches[i];
    const bool known = a == "epp" || a == "direct-gates" || a == "gate-based" || a == "perfect" || (!ring && (a == "epp-P1" || a == "epp-P2"));
    if (!known) throw ConfigError(p.at("approaches") + "[" + std::to_string(i) + "]", "unknown approach '" + a + "' for " + code.name());
  }
  p.finish();

  return [=] {
    struct Row {
      double jam = NAN, lambda0 = NAN;
      bool ok = true;
      std::string error;
    };
    const std::size_t na = approaches.size();
    std::vector<Row> rows(grid.size() * na);
    parallel_for(rows.size(), [&](std::size_t idx) {
      const double g = grid[idx / na];
      const std::string& a = approaches[idx % na];
      Row& r = rows[idx];
      try {
        MapSpec s;
        s.scenario = CommScenario::DecodeOnly;
        if (a == "gate-based") {
          s.impl = DecodeImpl::GateBased;
          s.gate_noise = make_gate_noise(noise, g);
        } else {
          PrepSpec prep;
          prep.noise = noise;
          prep.gate_param = g;
          prep.initial_fidelity = initial;
          prep.final_step = a == "epp-P1" ? kP1 : a == "epp-P2" ? kP2 : final_step;
          prep.kind = a == "direct-gates" ? PrepKind::DirectGates : a == "perfect" ? PrepKind::Perfect : PrepKind::Epp;
          s.decode_resource = build_resource(code, Role::Decode, prep).state;
          r.lambda0 = (*s.decode_resource)[0];
        }
        r.jam = jamiolkowski_fidelity(effective_map(code, s));
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
      }
    });
    Csv csv("decode-only",
            {"code " + code.name() + ", gate noise " + to_string(noise) + ", scenario decode-only", kJamFidelity,
             "lambda0: fidelity coefficient of the decoding resource (nan for gate-based)", kGateParam, kBitOrder},
            {"gate_param", "approach", "jam_fidelity", "lambda0", "ok", "error"});
    Output out;
    for (std::size_t idx = 0; idx < rows.size(); ++idx) {
      const Row& r = rows[idx];
      csv.row({fmt(grid[idx / na]), approaches[idx % na], fmt(r.jam), fmt(r.lambda0), ok_field(r.ok), r.error});
      ++out.points;
      out.failed += r.ok ? 0 : 1;
    }
    out.files.emplace_back("decode_only.csv", csv.str());
    return out;
  };
}

Job region_scan_job(Params& p, std::uint64_t) {
  RegionOptions o;
  o.code = code_param(p, "repetition-phaseflip");
  const bool ring = o.code.kind == CodeKind::ClusterRing;
  o.scenario = parse_as(p.at("scenario"), [&] { return parse_scenario_name(p.str("scenario", "channel+decode")); });
  if (o.scenario != CommScenario::ChannelDecode && o.scenario != CommScenario::EncodeChannelDecode)
    throw ConfigError(p.at("scenario"), "region scans need channel+decode or encode+channel+decode");
  o.noise = parse_as(p.at("noise"), [&] { return parse_gate_noise(p.str("noise", "binary-like")); });
  o.channel = p.str("channel", "phaseflip");
  parse_as(p.at("channel"), [&] { return make_channel(o.channel, 1.0); });
  o.final_step = parse_step(p, "final_step", kP1, ring ? 3 : 2);
  o.gate_grid = p.grid("gate_params", 0.0, 1.0);
  o.channel_grid = p.grid("channel_params", 0.0, 1.0);
  p.finish();

  return [=] {
    const auto pts = region_scan(o);
    Csv csv("region-scan",
            {"code " + o.code.name() + ", scenario " + to_string(o.scenario) + ", gate noise " + to_string(o.noise) + ", channel " + o.channel,
             kJamFidelity, "p: gate parameter; q: channel parameter on every physical qubit; beats_unencoded = 1 when jam_fidelity exceeds the unencoded value",
             kBitOrder},
            {"p", "q", "approach", "jam_fidelity", "beats_unencoded", "ok", "error"});
    Output out;
    for (const auto& pt : pts) {
      csv.row({fmt(pt.p), fmt(pt.q), to_string(pt.approach), fmt(pt.jam_fidelity), pt.beats_unencoded ? "1" : "0", ok_field(pt.ok), pt.error});
      ++out.points;
      out.failed += pt.ok ? 0 : 1;
    }
    ordered_json b;
    b["code"] = o.code.name();
    b["scenario"] = to_string(o.scenario);
    b["epp_contains_direct_gates"] = region_contains(pts, Approach::EppMeasurement, Approach::DirectMeasurement);
    b["epp_contains_gate_based"] = region_contains(pts, Approach::EppMeasurement, Approach::GateBased);
    b["boundaries"] = ordered_json::array();
    for (const auto& rb : region_boundaries(pts)) {
      ordered_json e;
      e["approach"] = to_string(rb.approach);
      e["p"] = rb.p;
      e["q_min"] = std::isnan(rb.q_min) ? ordered_json() : ordered_json(rb.q_min);
      e["q_max"] = std::isnan(rb.q_max) ? ordered_json() : ordered_json(rb.q_max);
      e["points"] = rb.points;
      b["boundaries"].push_back(e);
    }
    out.files.emplace_back("regions.csv", csv.str());
    out.files.emplace_back("boundaries.json", b.dump(2) + "\n");
    return out;
  };
}

Job by_fidelity_job(Params& p, std::uint64_t) {
  const Code code = code_param(p, "cluster-ring");
  PrepSpec prep;
  prep.kind = PrepKind::Epp;
  prep.noise = parse_as(p.at("noise"), [&] { return parse_gate_noise(p.str("noise", "local-depolarizing")); });
  prep.final_step = parse_step(p, "final_step", kP1, code.kind == CodeKind::ClusterRing ? 3 : 2);
  prep.initial_fidelity = p.number("initial_fidelity", 0.9, 0.5, 1.0);
  const auto grid = p.grid("gate_params", 0.0, 1.0);
  p.finish();

  return [=] {
    const auto pts = by_fidelity(code, grid, prep);
    Csv csv("by-fidelity",
            {"code " + code.name() + ", EPP gate noise " + to_string(prep.noise) + ", scenario decode-only", kJamFidelity,
             "lambda0: resource fidelity shared by the EPP, local depolarizing and global depolarizing resources",
             "local_param: D_w parameter per qubit; global_param: p~ of rho -> p~ rho + (1-p~) 1/2^N", kGateParam, kBitOrder},
            {"gate_param", "lambda0", "epp", "local_depolarizing", "global_depolarizing", "local_param", "global_param", "ok", "error"});
    Output out;
    for (const auto& pt : pts) {
      csv.row({fmt(pt.gate_param), fmt(pt.fidelity), fmt(pt.epp), fmt(pt.local_depolarizing), fmt(pt.global_depolarizing), fmt(pt.local_param),
               fmt(pt.global_param), ok_field(pt.ok), pt.error});
      ++out.points;
      out.failed += pt.ok ? 0 : 1;
    }
    out.files.emplace_back("by_fidelity.csv", csv.str());
    return out;
  };
}

Job scaling_job(Params& p, std::uint64_t) {
  std::vector<Scenario> scenarios;
  const auto names = p.strings("scenarios", {"C"});
  for (std::size_t i = 0; i < names.size(); ++i)
    scenarios.push_back(parse_as(p.at("scenarios") + "[" + std::to_string(i) + "]", [&] { return parse_scenario(names[i]); }));
  const auto ns = p.int_grid("n", 3, 201);
  for (std::size_t i = 0; i < ns.size(); ++i)
    if (ns[i] % 2 == 0) throw ConfigError(p.at("n") + "[" + std::to_string(i) + "]", "N must be odd");
  const double tol = p.number("tolerance", 1e-4, 1e-10, 1e-2);
  p.finish();

  return [=] {
    std::vector<ScalingPoint> pts(scenarios.size() * ns.size());
    std::vector<std::string> errors(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) {
      const Scenario s = scenarios[i / ns.size()];
      const int n = ns[i % ns.size()];
      try {
        pts[i] = scaling_threshold(s, n, tol);
      } catch (const std::exception& e) {
        pts[i] = {s, n, NAN, {}};
        errors[i] = e.what();
      }
    });
    Csv csv("scaling",
            {"threshold: smallest gate parameter p_xz (binary-like gate noise) with an encoded advantage, bisection tolerance " + fmt(tol),
             "N: number of encoding qubits (odd)", kBitOrder},
            {"scenario", "N", "threshold", "note", "ok", "error"});
    Output out;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      csv.row({to_string(pts[i].scenario), std::to_string(pts[i].n), fmt(pts[i].threshold), pts[i].note, ok_field(errors[i].empty()), errors[i]});
      ++out.points;
      out.failed += errors[i].empty() ? 0 : 1;
    }
    out.files.emplace_back("scaling.csv", csv.str());
    return out;
  };
}

Job prep_threshold_job(Params& p, std::uint64_t) {
  const auto ns = p.int_grid("n", 3, 64);
  const double tol = p.number("tolerance", 1e-4, 1e-10, 1e-2);
  p.finish();

  return [=] {
    std::vector<double> t(ns.size(), NAN);
    std::vector<std::string> errors(ns.size());
    parallel_for(ns.size(), [&](std::size_t i) {
      try {
        t[i] = prep_threshold(ns[i], tol);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    });
    Csv csv("prep-threshold",
            {"threshold: smallest CNOT-chain gate parameter p (D_x noise) whose prepared GHZ state still distills, tolerance " + fmt(tol),
             "N: number of qubits", kBitOrder},
            {"N", "threshold", "ok", "error"});
    Output out;
    for (std::size_t i = 0; i < ns.size(); ++i) {
      csv.row({std::to_string(ns[i]), fmt(t[i]), ok_field(errors[i].empty()), errors[i]});
      ++out.points;
      out.failed += errors[i].empty() ? 0 : 1;
    }
    out.files.emplace_back("prep_threshold.csv", csv.str());
    return out;
  };
}

Job patterns_job(Params& p, std::uint64_t) {
  const Code code = code_param(p, "repetition3");
  p.finish();
  return [=] {
    Output out;
    out.files.emplace_back("patterns.csv", patterns_csv(code));
    out.points = 1;
    return out;
  };
}

using Factory = Job (*)(Params&, std::uint64_t);

const std::vector<std::pair<std::string, Factory>>& factories() {
  static const std::vector<std::pair<std::string, Factory>> f = {
      {"deviation-curve", deviation_curve_job}, {"localize", localize_job},   {"decode-only", decode_only_job},
      {"region-scan", region_scan_job},         {"by-fidelity", by_fidelity_job}, {"scaling", scaling_job},
      {"prep-threshold", prep_threshold_job},   {"patterns", patterns_job},
  };
  return f;
}

Job prepare(const ExperimentConfig& c) {
  for (const auto& [name, make] : factories())
    if (name == c.experiment) {
      Params p(c.params, "params");
      return make(p, c.seed);
    }
  throw ConfigError("experiment", "unknown experiment '" + c.experiment + "'");
}

}  // namespace

ordered_json ConfigError::diagnostic() const {
  ordered_json j;
  j["error"] = "config";
  j["path"] = path;
  j["message"] = what();
  return j;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& f : factories()) out.push_back(f.first);
  return out;
}

ExperimentConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("", "expected a JSON object");
  Params top(j, "$");
  ExperimentConfig c;
  c.source = text;
  c.experiment = top.str("experiment", "");
  if (c.experiment.empty()) throw ConfigError("experiment", "required");
  c.output = top.str("output", "");
  if (c.output.empty()) throw ConfigError("output", "required");
  if (const json* seed = top.raw("seed")) {
    if (!seed->is_number_unsigned()) throw ConfigError("seed", "expected a non-negative integer");
    c.seed = seed->get<std::uint64_t>();
  }
  if (const json* params = top.raw("params")) {
    if (!params->is_object()) throw ConfigError("params", "expected an object");
    c.params = *params;
  }
  top.finish();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& config) { (void)prepare(config); }

RunSummary run_experiment(const ExperimentConfig& config, const std::string& output_override) {
  const auto start = std::chrono::steady_clock::now();
  const Job job = prepare(config);
  const Output out = job();

  const std::filesystem::path dir = output_override.empty() ? config.output : output_override;
  std::filesystem::create_directories(dir);
  RunSummary s;
  s.points = out.points;
  s.failed_points = out.failed;
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream f(dir / name, std::ios::binary);
    f << content;
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    s.files.push_back((dir / name).string());
  };
  for (const auto& [name, content] : out.files) write(name, content);
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  ordered_json m;
  m["experiment"] = config.experiment;
  m["version"] = version();
  m["config_hash"] = fnv1a_hex(config.source);
  m["seed"] = config.seed;
  m["workers"] = worker_count();
  m["wall_time_seconds"] = s.seconds;
  m["points"] = out.points;
  m["failed_points"] = out.failed;
  m["files"] = ordered_json::array();
  for (const auto& f : out.files) m["files"].push_back(f.first);
  write("manifest.json", m.dump(2) + "\n");
  return s;
}

std::string patterns_csv(const Code& code) {
  const auto rows = no_error_patterns(code, derive_correction_table(code));
  Csv csv("patterns",
          {"code " + code.name() + ": Bell-measurement patterns that occur without an error and the Pauli correction on the output",
           "pattern letters: physical qubit 1 first"},
          {"pattern", "correction"});
  for (const auto& r : rows) csv.row({r.pattern.letters(), std::string(1, pauli_char(r.correction))});
  return csv.str();
}

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string version() { return GSEPP_VERSION; }

}  // namespace gsepp
