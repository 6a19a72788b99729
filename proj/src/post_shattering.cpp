#include "lll/post_shattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <boost/pending/disjoint_sets.hpp>

#include "lll/errors.hpp"
#include "lll/probability.hpp"
#include "lll/rng.hpp"
#include "lll/search.hpp"

namespace lll {

namespace {

bool contains(const std::vector<VarId>& sorted, VarId v) { return std::binary_search(sorted.begin(), sorted.end(), v); }

int local_index(const std::vector<EventId>& sorted, EventId e) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), e);
  return it != sorted.end() && *it == e ? static_cast<int>(it - sorted.begin()) : -1;
}

double component_criterion(const LllInstance& inst, const ComponentJob& job, const Assignment& base) {
  double p = 0.0;
  EstimateOptions opts;
  for (EventId e : job.events) {
    const auto est = conditional_event_probability(inst, e, base, {}, {}, opts);
    if (!est.exact) return -1.0;
    p = std::max(p, est.value);
  }
  std::size_t degree = 0;
  for (EventId e : job.events) {
    std::set<EventId> nbrs;
    for (VarId v : inst.event(e).vars) {
      if (!contains(job.free_vars, v)) continue;
      for (EventId f : inst.events_of(v)) {
        if (f != e) nbrs.insert(f);
      }
    }
    degree = std::max(degree, nbrs.size());
  }
  return std::numbers::e * p * static_cast<double>(degree + 1);
}

}  // namespace

std::vector<ComponentJob> extract_components(const ResidualInstance& residual) {
  const LllInstance& inst = *residual.base;
  const std::size_t n = inst.event_count();
  std::vector<std::size_t> rank(n, 0);
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  boost::disjoint_sets<std::size_t*, std::size_t*> sets(rank.data(), parent.data());

  for (VarId v : residual.free_vars) {
    const auto events = inst.events_of(v);
    for (std::size_t k = 1; k < events.size(); ++k) {
      sets.union_set(static_cast<std::size_t>(events[0]), static_cast<std::size_t>(events[k]));
    }
  }

  std::vector<int> job_of(n, -1);
  std::vector<ComponentJob> jobs;
  for (EventId e : residual.events) {
    const std::size_t root = sets.find_set(static_cast<std::size_t>(e));
    if (job_of[root] < 0) {
      job_of[root] = static_cast<int>(jobs.size());
      jobs.emplace_back();
    }
    jobs[static_cast<std::size_t>(job_of[root])].events.push_back(e);
  }
  for (auto& job : jobs) {
    for (EventId e : job.events) {
      for (VarId v : inst.event(e).vars) {
        const int value = residual.conditioning[static_cast<std::size_t>(v)];
        if (value < 0) job.free_vars.push_back(v);
        else job.conditioning.emplace_back(v, value);
      }
    }
    std::sort(job.free_vars.begin(), job.free_vars.end());
    job.free_vars.erase(std::unique(job.free_vars.begin(), job.free_vars.end()), job.free_vars.end());
    std::sort(job.conditioning.begin(), job.conditioning.end());
    job.conditioning.erase(std::unique(job.conditioning.begin(), job.conditioning.end()), job.conditioning.end());
  }
  return jobs;
}

ComponentSolution solve_component(const LllInstance& inst, const ComponentJob& job, const PostShatterOptions& opts,
                                  std::uint64_t seed) {
  ComponentSolution out;
  out.stats.events = job.events.size();
  out.stats.free_vars = job.free_vars.size();

  Assignment a(inst.variable_count(), -1);
  for (const auto& [v, value] : job.conditioning) a[static_cast<std::size_t>(v)] = value;
  if (opts.compute_criterion) out.stats.criterion = component_criterion(inst, job, a);

  if (assignment_space(inst, job.free_vars) <= opts.exhaustive_limit) {
    out.stats.method = ComponentMethod::Exhaustive;
    auto solved = exhaustive_search(inst, job.events, job.free_vars, a);
    if (!solved) {
      throw SolveFailure("component with min event " + std::to_string(job.events.front()) +
                         " has no assignment avoiding all its events");
    }
    a = std::move(*solved);
  } else {
    out.stats.method = ComponentMethod::MoserTardos;
    Rng rng(seed);
    for (VarId v : job.free_vars) a[static_cast<std::size_t>(v)] = rng.draw(inst.variable(v).weights);
    std::set<int> satisfied;
    for (std::size_t i = 0; i < job.events.size(); ++i) {
      if (inst.holds(job.events[i], a)) satisfied.insert(static_cast<int>(i));
    }
    const std::size_t cap = opts.resample_factor * job.events.size();
    std::vector<int> touched;
    while (!satisfied.empty()) {
      if (out.stats.resamplings >= cap) {
        throw SolveFailure("Moser-Tardos exceeded " + std::to_string(cap) + " resamplings on component with min event " +
                           std::to_string(job.events.front()));
      }
      const EventId e = job.events[static_cast<std::size_t>(*satisfied.begin())];
      touched.clear();
      for (VarId v : inst.event(e).vars) {
        if (!contains(job.free_vars, v)) continue;
        a[static_cast<std::size_t>(v)] = rng.draw(inst.variable(v).weights);
        for (EventId f : inst.events_of(v)) touched.push_back(local_index(job.events, f));
      }
      ++out.stats.resamplings;
      out.stats.resampled.push_back(e);
      std::sort(touched.begin(), touched.end());
      touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
      for (int i : touched) {
        if (i < 0) continue;
        if (inst.holds(job.events[static_cast<std::size_t>(i)], a)) satisfied.insert(i);
        else satisfied.erase(i);
      }
    }
  }
  out.values.reserve(job.free_vars.size());
  for (VarId v : job.free_vars) out.values.emplace_back(v, a[static_cast<std::size_t>(v)]);
  return out;
}

std::size_t PostShatterReport::max_component() const {
  std::size_t best = 0;
  for (const auto& c : components) best = std::max(best, c.events);
  return best;
}

std::size_t PostShatterReport::total_resamplings() const {
  std::size_t total = 0;
  for (const auto& c : components) total += c.resamplings;
  return total;
}

PostShatterReport solve_residual(const ResidualInstance& residual, const PostShatterOptions& opts, std::uint64_t seed,
                                 Assignment& assignment) {
  PostShatterReport report;
  for (const auto& job : extract_components(residual)) {
    const auto job_seed = derive_seed(seed, static_cast<std::uint64_t>(job.events.front()));
    auto solution = solve_component(*residual.base, job, opts, job_seed);
    for (const auto& [v, value] : solution.values) assignment[static_cast<std::size_t>(v)] = value;
    solution.stats.resampled.clear();
    report.components.push_back(std::move(solution.stats));
  }
  return report;
}

std::string method_name(ComponentMethod m) {
  return m == ComponentMethod::Exhaustive ? "exhaustive" : "moser-tardos";
}

nlohmann::json to_json(const PostShatterReport& report) {
  nlohmann::json comps = nlohmann::json::array();
  for (const auto& c : report.components) {
    comps.push_back({{"events", c.events},
                     {"free_vars", c.free_vars},
                     {"method", method_name(c.method)},
                     {"resamplings", c.resamplings},
                     {"criterion", c.criterion}});
  }
  return {{"components", comps},
          {"max_component", report.max_component()},
          {"total_resamplings", report.total_resamplings()}};
}

}  // namespace lll
