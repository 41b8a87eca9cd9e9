#include "uwsn/baselines.hpp"

#include <algorithm>

namespace uwsn {

BaselinePolicy BaselinePolicy::from_config(BaselineKind kind, const NetworkConfig& config) {
  return BaselinePolicy{kind, config.baseline_depth_threshold, config.t_max_holding, config.tx_range};
}

DbrDecision dbr_forward_decision(double source_depth, double candidate_depth, const BaselinePolicy& policy) {
  const double progress = source_depth - candidate_depth;
  DbrDecision d;
  d.eligible = progress >= policy.depth_threshold;
  d.holding_time =
      std::clamp(policy.t_max_holding * (1.0 - progress / policy.tx_range), 0.0, policy.t_max_holding);
  return d;
}

std::vector<NeighborEntry> baseline_eligible(double source_depth, std::span<const NeighborEntry> table,
                                             const BaselinePolicy& policy) {
  std::vector<NeighborEntry> out;
  for (const NeighborEntry& e : table) {
    if (e.is_courier) continue;
    if (dbr_forward_decision(source_depth, e.depth, policy).eligible) out.push_back(e);
  }
  return out;
}

bool eedbr_before(const NeighborEntry& a, const NeighborEntry& b) {
  if (a.residual_energy != b.residual_energy) return a.residual_energy > b.residual_energy;
  if (a.depth != b.depth) return a.depth < b.depth;
  return a.id < b.id;
}

std::optional<NodeId> eedbr_select(std::span<const NeighborEntry> candidates, const BaselinePolicy&) {
  std::optional<NodeId> best;
  const NeighborEntry* best_entry = nullptr;
  for (const NeighborEntry& e : candidates) {
    if (e.is_courier) continue;
    if (best_entry == nullptr || eedbr_before(e, *best_entry)) {
      best_entry = &e;
      best = e.id;
    }
  }
  return best;
}

double eedbr_holding_time(double own_residual, std::span<const NeighborEntry> candidates,
                          const BaselinePolicy& policy) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  for (const NeighborEntry& e : candidates) {
    if (e.is_courier) continue;
    lo = first ? e.residual_energy : std::min(lo, e.residual_energy);
    hi = first ? e.residual_energy : std::max(hi, e.residual_energy);
    first = false;
  }
  if (first || !(hi > lo)) return 0.0;
  return policy.t_max_holding * std::clamp((hi - own_residual) / (hi - lo), 0.0, 1.0);
}

}  // namespace uwsn
