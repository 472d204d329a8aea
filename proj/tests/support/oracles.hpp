#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <vector>

#include "xplane/app.hpp"
#include "xplane/ilp.hpp"
#include "xplane/monitor.hpp"
#include "xplane/provisioner.hpp"
#include "xplane/workload.hpp"

namespace xplane::testing {

// Exact per-key totals, kept in an ordered map so iteration is stable.
using ExactCounts = std::map<FlowKey, std::uint64_t>;
ExactCounts exact_counts(const Trace& trace, const FlowKeyScheme& scheme,
                         WeightMode mode = WeightMode::Packets);
std::uint64_t total_weight(const ExactCounts& counts);
// Count descending, key ascending.
std::vector<std::pair<FlowKey, std::uint64_t>> exact_top_k(const ExactCounts& counts,
                                                           std::size_t k);

struct EnumResult {
  bool feasible = false;
  double cost = 0;
  std::vector<std::uint8_t> x;
};

// Tries all 2^n assignments; n must stay small.
EnumResult enumerate_all(const IlpModel& model, const TieBreak& tie = {});

// Walks the provisioning decision space directly: one platform, one device
// per instance. Everything else in x is zero.
EnumResult enumerate_provisioning(const ProvisionModel& model);
std::size_t decision_space_size(const ProvisionModel& model);

struct RandomProblem {
  OperatorInputs inputs;
  AppRequirements app;
  std::vector<Platform> candidates;
};

RandomProblem random_problem(std::mt19937_64& rng, std::size_t max_platforms = 5,
                             std::size_t max_instances = 6);
IlpModel random_ilp(std::mt19937_64& rng, std::size_t variables);

// Zipf trace of `packets` records at a fixed rate.
Trace zipf_trace(std::uint64_t packets, std::uint32_t flows, double s, std::uint64_t seed);

}  // namespace xplane::testing
