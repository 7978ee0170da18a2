#include "kcd/cli/runner.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <thread>

#include "kcd/eigensolver.hpp"
#include "kcd/model.hpp"
#include "kcd/observables.hpp"

namespace kcd::cli {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void write_atomically(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
    f << content;
    f.flush();
    if (!f) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

LanczosOptions lanczos_options(const RunConfig& cfg) {
  LanczosOptions o;
  o.basis_memory = std::min<std::size_t>(o.basis_memory, cfg.memory_budget_mb << 20);
  return o;
}

struct Reference {
  double energy = 0;
  std::optional<double> gap;
  Amplitudes state;
};

// Ground states of H0 at the record fractions j / (n_records - 1) for one
// delta. They depend on the ramp only through lambda, so every tau and
// protocol shares them. Entries are kept only while they fit the memory
// budget; otherwise they are recomputed on request.
class ReferenceTable {
 public:
  ReferenceTable(const RunConfig& cfg, const HoneycombCluster& cluster, double delta)
      : cfg_(cfg), cluster_(cluster), delta_(delta), entries_(static_cast<std::size_t>(cfg.n_records)) {
    const std::size_t vec_bytes = static_cast<std::size_t>(hilbert_dimension(cluster.n_sites())) * sizeof(cplx);
    cache_ = vec_bytes * static_cast<std::size_t>(cfg.n_records) <= (cfg.memory_budget_mb << 20) / 2;
    for (auto& e : entries_) e.mutex = std::make_unique<std::mutex>();
  }

  double lambda(int j) const {
    return std::clamp(lambda_at(RampSchedule{1.0, cfg_.ramp}, static_cast<double>(j) / (cfg_.n_records - 1)), 0.0, 1.0);
  }

  std::shared_ptr<const Reference> get(int j) {
    auto& e = entries_[static_cast<std::size_t>(j)];
    std::lock_guard lock(*e.mutex);
    if (e.value) return e.value;
    auto r = compute(j);
    if (cache_ || j == 0 || j == cfg_.n_records - 1) e.value = r;
    return r;
  }

 private:
  std::shared_ptr<const Reference> compute(int j) const {
    ModelParams p{cfg_.J, cfg_.B, delta_, lambda(j)};
    const CompiledOperator h(build_h0(cluster_, p));
    auto r = std::make_shared<Reference>();
    const LanczosOptions opts = lanczos_options(cfg_);
    if (cfg_.wants(Observable::gap)) {
      auto pairs = low_eigenpairs(h, 2, opts);
      r->energy = pairs[0].energy;
      r->gap = pairs[1].energy - pairs[0].energy;
      r->state = pairs[0].state.amplitudes();
    } else {
      auto gs = ground_state(h, opts);
      r->energy = gs.energy;
      r->state = gs.state.amplitudes();
    }
    return r;
  }

  struct Entry {
    std::unique_ptr<std::mutex> mutex;
    std::shared_ptr<const Reference> value;
  };
  const RunConfig& cfg_;
  const HoneycombCluster& cluster_;
  double delta_;
  std::vector<Entry> entries_;
  bool cache_ = false;
};

struct DeltaContext {
  double delta = 0;
  std::unique_ptr<ReferenceTable> refs;
  std::once_flag basis_once;
  std::shared_ptr<const SpectralBasis> basis;
  PauliSum h_final;
};

std::string csv_name(const RunResult& r) {
  return "run_" + std::string(to_string(r.protocol)) + "_tau" + short_fmt(r.tau) + "_delta" + short_fmt(r.delta) + ".csv";
}

std::string csv_text(const std::vector<Record>& records, bool with_gap) {
  std::string out = with_gap ? "t,lambda,lambda_dot,F,gap\n" : "t,lambda,lambda_dot,F\n";
  for (const auto& r : records) {
    out += fmt(r.t) + ',' + fmt(r.lambda) + ',' + fmt(r.lambda_dot) + ',' + fmt(r.fidelity);
    if (with_gap) out += ',' + fmt(r.gap.value_or(NAN));
    out += '\n';
  }
  return out;
}

SupportOptions support_options(const RunConfig& cfg) {
  SupportOptions o;
  o.truncated_states = cfg.support_states;
  o.memory_budget = (cfg.memory_budget_mb << 20) / 2;
  o.lanczos = lanczos_options(cfg);
  return o;
}

FinalObservables final_observables(const RunConfig& cfg, const HoneycombCluster& cluster, DeltaContext& ctx,
                                   const Amplitudes& psi) {
  FinalObservables f;
  const int n = cluster.n_sites();
  f.fidelity = fidelity(psi, ctx.refs->get(cfg.n_records - 1)->state);
  if (cfg.wants(Observable::gamma)) f.gamma = topological_entropy(psi, n, cluster_partitions(cluster)).gamma;
  if (cfg.wants(Observable::flux)) {
    for (const auto& p : cluster.plaquettes()) f.flux_all.push_back(flux_expectation(psi, n, p));
    f.flux = f.flux_all.front();
  }
  if (cfg.wants(Observable::support)) {
    std::call_once(ctx.basis_once, [&] {
      ctx.basis = std::make_shared<const SpectralBasis>(spectral_basis(ctx.h_final, support_options(cfg)));
    });
    f.support = support_size(psi, *ctx.basis);
  }
  if (cfg.wants(Observable::energy))
    f.energy_offset = energy_offset(psi, ctx.h_final, ctx.refs->get(cfg.n_records - 1)->energy);
  return f;
}

void execute(const RunConfig& cfg, const HoneycombCluster& cluster, DeltaContext& ctx, RunResult& r) {
  ProtocolRun run;
  run.params = ModelParams{cfg.J, cfg.B, r.delta, 1.0};
  run.protocol = r.protocol;
  run.schedule = RampSchedule{r.tau, cfg.ramp};
  run.propagator.n_steps = r.n_steps;
  run.propagator.krylov_dim = cfg.krylov_dim;
  run.propagator.step_tolerance = cfg.step_tolerance;
  run.propagator.max_substeps = cfg.max_substeps;
  run.propagator.memory_budget = (cfg.memory_budget_mb << 20) / 2;

  const int stride = r.n_steps / (cfg.n_records - 1);
  const auto initial = ctx.refs->get(0);
  const StateVector psi0 = StateVector::normalized(cluster.n_sites(), initial->state);
  auto observer = [&](const StepInfo& s, const Amplitudes& psi) {
    if (s.step % stride != 0) return;
    const auto ref = ctx.refs->get(s.step / stride);
    r.records.push_back({s.step, s.t, s.lambda, s.lambda_dot, fidelity(psi, ref->state), ref->gap});
  };
  const PropagationResult res = propagate(run, cluster, psi0, observer);
  r.krylov_dim_used = res.krylov_dim_used;
  r.matvecs = res.matvecs;
  r.max_norm_drift = res.max_norm_drift;
  r.final = final_observables(cfg, cluster, ctx, res.final_state.amplitudes());
  for (const auto& rec : r.records)
    if (rec.gap) r.gap_min = std::min(r.gap_min.value_or(*rec.gap), *rec.gap);

  r.csv = csv_name(r);
  write_atomically(cfg.output_dir / r.csv, csv_text(r.records, cfg.wants(Observable::gap)));
  r.ok = true;
}

json support_json(const SupportSize& s) {
  return {{"xi", s.xi}, {"xi_low", s.xi_low}, {"xi_high", s.xi_high}, {"mode", std::string(to_string(s.mode))},
          {"states", s.states}, {"captured_weight", s.captured}};
}

template <class T>
json opt(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

bool RunSummary::all_ok() const {
  return std::all_of(runs.begin(), runs.end(), [](const RunResult& r) { return r.ok; });
}

int effective_n_steps(const RunConfig& cfg, double tau) {
  const int base = cfg.n_steps.value_or(default_n_steps(tau));
  const int k = cfg.n_records - 1;
  return (base + k - 1) / k * k;
}

RunSummary run_experiment(const RunConfig& cfg, const HoneycombCluster& cluster, const std::string& config_text,
                          std::ostream* log) {
  fs::create_directories(cfg.output_dir);
  std::mutex log_mutex;
  auto say = [&](const std::string& msg) {
    if (!log) return;
    std::lock_guard lock(log_mutex);
    *log << msg << std::endl;
  };

  RunSummary summary;
  std::vector<std::unique_ptr<DeltaContext>> contexts;
  std::vector<std::pair<DeltaContext*, std::size_t>> jobs;
  for (double delta : cfg.deltas) {
    auto ctx = std::make_unique<DeltaContext>();
    ctx->delta = delta;
    ctx->refs = std::make_unique<ReferenceTable>(cfg, cluster, delta);
    ctx->h_final = build_h0(cluster, ModelParams{cfg.J, cfg.B, delta, 0.0});
    for (double tau : cfg.taus)
      for (Protocol p : cfg.protocols) {
        RunResult r;
        r.protocol = p;
        r.tau = tau;
        r.delta = delta;
        r.n_steps = effective_n_steps(cfg, tau);
        jobs.emplace_back(ctx.get(), summary.runs.size());
        summary.runs.push_back(std::move(r));
      }
    contexts.push_back(std::move(ctx));
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < jobs.size();) {
      auto& [ctx, idx] = jobs[k];
      RunResult& r = summary.runs[idx];
      say("run " + std::string(to_string(r.protocol)) + " tau=" + short_fmt(r.tau) + " delta=" + short_fmt(r.delta) +
          " n_steps=" + std::to_string(r.n_steps));
      const auto t0 = std::chrono::steady_clock::now();
      try {
        execute(cfg, cluster, *ctx, r);
      } catch (const std::exception& e) {
        r.ok = false;
        r.error = e.what();
        r.records.clear();
        r.csv.clear();
        say("  failed: " + r.error);
      }
      r.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (r.ok) say("  done: F=" + fmt(r.final.fidelity) + " (" + short_fmt(r.wall_seconds) + " s)");
    }
  };
  const int n_workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(jobs.size())));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (auto& ctx : contexts) {
    GroundStateReference g;
    g.delta = ctx->delta;
    try {
      const auto ref = ctx->refs->get(cfg.n_records - 1);
      g.energy = ref->energy;
      g.gap = ref->gap;
      if (cfg.wants(Observable::gamma))
        g.gamma = topological_entropy(ref->state, cluster.n_sites(), cluster_partitions(cluster)).gamma;
      if (cfg.wants(Observable::flux)) g.flux = flux_expectation(ref->state, cluster.n_sites(), cluster.reference_plaquette());
    } catch (const std::exception& e) {
      say("ground-state reference failed: " + std::string(e.what()));
    }
    summary.references.push_back(g);
  }

  write_atomically(cfg.output_dir / "summary.json", summary_json(cfg, cluster, config_text, summary).dump(2) + "\n");
  json timing = {{"schema_version", kSummarySchemaVersion}, {"runs", json::array()}};
  double total = 0;
  for (const auto& r : summary.runs) {
    timing["runs"].push_back({{"protocol", std::string(to_string(r.protocol))}, {"tau", r.tau}, {"delta", r.delta},
                              {"wall_seconds", r.wall_seconds}});
    total += r.wall_seconds;
  }
  timing["total_wall_seconds"] = total;
  write_atomically(cfg.output_dir / "timing.json", timing.dump(2) + "\n");
  return summary;
}

json summary_json(const RunConfig& cfg, const HoneycombCluster& cluster, const std::string& config_text,
                  const RunSummary& summary) {
  json echo = json::object();
  for (const auto& [k, v] : cfg.echo) echo[k] = v;
  json observables = json::array();
  for (auto o : cfg.observables) observables.push_back(std::string(to_string(o)));

  json j;
  j["schema_version"] = kSummarySchemaVersion;
  j["config"] = echo;
  j["config_text"] = config_text;
  j["cluster"] = {{"name", cluster.name()}, {"n_sites", cluster.n_sites()}, {"links", cluster.links().size()}};
  j["observables"] = observables;

  json refs = json::array();
  for (const auto& g : summary.references)
    refs.push_back({{"delta", g.delta}, {"b_delta", g.delta * cfg.B}, {"energy", g.energy}, {"gap", opt(g.gap)},
                    {"gamma", opt(g.gamma)}, {"W", opt(g.flux)}});
  j["ground_state"] = refs;

  json runs = json::array();
  for (const auto& r : summary.runs) {
    json e;
    e["protocol"] = std::string(to_string(r.protocol));
    e["tau"] = r.tau;
    e["delta"] = r.delta;
    e["b_delta"] = r.delta * cfg.B;
    e["status"] = r.ok ? "ok" : "failed";
    if (!r.ok) {
      e["error"] = r.error;
      runs.push_back(e);
      continue;
    }
    e["n_steps"] = r.n_steps;
    e["krylov_dim"] = r.krylov_dim_used;
    e["matvecs"] = r.matvecs;
    e["max_norm_drift"] = r.max_norm_drift;
    e["csv"] = r.csv;
    json fin;
    fin["F"] = r.final.fidelity;
    fin["gamma"] = opt(r.final.gamma);
    fin["W"] = opt(r.final.flux);
    fin["W_all"] = r.final.flux_all;
    fin["support"] = r.final.support ? support_json(*r.final.support) : json(nullptr);
    fin["delta_E"] = opt(r.final.energy_offset);
    e["final"] = fin;
    e["gap_min"] = opt(r.gap_min);
    runs.push_back(e);
  }
  j["runs"] = runs;
  return j;
}

}  // namespace kcd::cli
