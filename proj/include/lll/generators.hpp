#pragma once

#include <cstddef>
#include <cstdint>

#include "lll/graph.hpp"
#include "lll/instance.hpp"

namespace lll {

// Exactly d-regular simple graph: a circulant start mixed by random
// double-edge swaps. Requires d < n and n·d even.
Graph random_regular(std::size_t n, std::size_t d, std::uint64_t seed);

// Erdős–Rényi G(n, p).
Graph gnp(std::size_t n, double p, std::uint64_t seed);

// Vertex v of a random k-regular graph H owns a uniform colour over m values;
// event v holds when at least t neighbours in H share v's colour. With
// k = t = 2 the event probability is 1/m^2 and d <= k^2.
struct CountThresholdParams {
  std::size_t events = 200;
  std::size_t k = 2;
  int m = 16;
  int t = 2;
};

// Smallest m with 1/m^2 <= p (k = t = 2), so the realised probability lies
// within a factor 2 of p for p <= 1/4.
CountThresholdParams count_threshold_params_for(std::size_t events, double p);

// Exact event probability of the family.
double count_threshold_probability(const CountThresholdParams& params);

LllInstance count_threshold_family(const CountThresholdParams& params, std::uint64_t seed);

// Random k-SAT over fair bits: a clause is a bad event violated by one row.
// Resamples (up to a bounded number of attempts) until e·2^-k·(d+1) <= 1;
// unused variables are dropped, so the result may have fewer than `vars`.
LllInstance random_ksat(std::size_t vars, std::size_t clauses, std::size_t k, std::uint64_t seed);

// e·p·(d+1) with p the largest exact event probability.
double symmetric_criterion(const LllInstance& inst);

}  // namespace lll
