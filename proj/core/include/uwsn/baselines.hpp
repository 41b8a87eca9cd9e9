#pragma once

#include <optional>
#include <span>
#include <vector>

#include "uwsn/config.hpp"
#include "uwsn/types.hpp"

namespace uwsn {

enum class BaselineKind { Dbr, Eedbr };

// Minimal reconstructions of DBR and EEDBR. Neither adapts its threshold nor
// talks to couriers.
struct BaselinePolicy {
  BaselineKind kind = BaselineKind::Dbr;
  double depth_threshold = 60.0;
  double t_max_holding = 0.5;
  double tx_range = 100.0;

  static BaselinePolicy from_config(BaselineKind kind, const NetworkConfig& config);
};

struct DbrDecision {
  bool eligible = false;
  double holding_time = 0.0;
};

// Greater depth progress means an earlier retransmission.
DbrDecision dbr_forward_decision(double source_depth, double candidate_depth, const BaselinePolicy& policy);

// Sensor entries of `table` that clear the depth threshold below `source_depth`.
std::vector<NeighborEntry> baseline_eligible(double source_depth, std::span<const NeighborEntry> table,
                                             const BaselinePolicy& policy);

bool eedbr_before(const NeighborEntry& a, const NeighborEntry& b);

std::optional<NodeId> eedbr_select(std::span<const NeighborEntry> candidates, const BaselinePolicy& policy);

// Linear in residual energy across the candidate set: the richest waits 0.
double eedbr_holding_time(double own_residual, std::span<const NeighborEntry> candidates,
                          const BaselinePolicy& policy);

}  // namespace uwsn
