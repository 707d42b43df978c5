#include "coldchain/model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "coldchain/demand.hpp"

namespace coldchain {

const char* to_string(StorageClass c) {
  switch (c) {
    case StorageClass::RefrigeratorOnly: return "refrigerator_only";
    case StorageClass::RefrigeratorOrFreezer: return "refrigerator_or_freezer";
    case StorageClass::FreezerPreferred: return "freezer_preferred";
  }
  return "?";
}

const char* to_string(Tier t) {
  switch (t) {
    case Tier::Central: return "central";
    case Tier::Regional: return "regional";
    case Tier::District: return "district";
    case Tier::Clinic: return "clinic";
  }
  return "?";
}

StorageClass storage_class_from_string(const std::string& s) {
  if (s == "refrigerator_only" || s == "refrigerator") return StorageClass::RefrigeratorOnly;
  if (s == "refrigerator_or_freezer") return StorageClass::RefrigeratorOrFreezer;
  if (s == "freezer_preferred" || s == "freezer") return StorageClass::FreezerPreferred;
  throw Error("unknown storage class: " + s);
}

Tier tier_from_string(const std::string& s) {
  if (s == "central") return Tier::Central;
  if (s == "regional") return Tier::Regional;
  if (s == "district") return Tier::District;
  if (s == "clinic") return Tier::Clinic;
  throw Error("unknown tier: " + s);
}

std::vector<const VialPresentation*> VaccineType::active_presentations() const {
  std::vector<const VialPresentation*> out;
  for (const auto& p : presentations)
    if (p.active) out.push_back(&p);
  return out;
}

const VialPresentation& VaccineType::single_active_presentation() const {
  const VialPresentation* found = nullptr;
  for (const auto& p : presentations) {
    if (!p.active) continue;
    if (found) throw Error("vaccine " + id + " has multiple active presentations");
    found = &p;
  }
  if (!found) throw Error("vaccine " + id + " has no active presentation");
  return *found;
}

bool ScheduleMask::active(int t) const {
  return std::find(active_periods.begin(), active_periods.end(), t) != active_periods.end();
}

WastageRates WastageProfile::lookup(const std::string& vaccine, int vial_size,
                                    const std::string& node) const {
  const WastageOverride* best = nullptr;
  int best_score = -1;
  for (const auto& ov : overrides) {
    if (ov.vaccine != vaccine) continue;
    if (ov.vial_size && *ov.vial_size != vial_size) continue;
    if (ov.node && *ov.node != node) continue;
    const int score = (ov.vial_size ? 1 : 0) + (ov.node ? 2 : 0);
    if (score > best_score) {
      best_score = score;
      best = &ov;
    }
  }
  return best ? best->rates : defaults;
}

int NetworkTopology::node_index(const std::string& id) const {
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].id == id) return static_cast<int>(k);
  return -1;
}

const Node* NetworkTopology::find_node(const std::string& id) const {
  const int k = node_index(id);
  return k < 0 ? nullptr : &nodes[k];
}

std::vector<int> NetworkTopology::clinic_indices() const { return tier_indices(Tier::Clinic); }

std::vector<int> NetworkTopology::tier_indices(Tier t) const {
  std::vector<int> out;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].tier == t) out.push_back(static_cast<int>(k));
  return out;
}

double NetworkTopology::total_refrigerator_capacity() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.refrigerator_capacity;
  return s;
}

double NetworkTopology::total_freezer_capacity() const {
  double s = 0.0;
  for (const auto& n : nodes) s += n.freezer_capacity;
  return s;
}

ValidationReport validate_topology(const NetworkTopology& topology, const DemandModel* demand) {
  ValidationReport report;
  auto violate = [&](const std::string& code, const std::string& msg) {
    report.violations.push_back({code, msg});
  };

  std::set<std::string> ids;
  for (const auto& n : topology.nodes) {
    if (!ids.insert(n.id).second) violate("duplicate-node", "duplicate node id " + n.id);
    if (n.refrigerator_capacity < 0 || n.freezer_capacity < 0)
      violate("negative-capacity", "node " + n.id + " has negative capacity");
  }

  for (const auto& a : topology.arcs) {
    if (a.from == a.to) violate("self-loop", "arc " + a.from + " -> " + a.to);
    if (topology.node_index(a.from) < 0)
      violate("dangling-arc", "arc from unknown node " + a.from);
    if (topology.node_index(a.to) < 0)
      violate("dangling-arc", "arc to unknown node " + a.to);
    if (a.schedule.empty())
      violate("empty-schedule", "arc " + a.from + " -> " + a.to + " has no active periods");
    for (int t : a.schedule.active_periods)
      if (t < 1 || t > topology.horizon.periods)
        violate("schedule-out-of-range",
                "arc " + a.from + " -> " + a.to + " schedules period " + std::to_string(t));
    if (a.transport_capacity < 0)
      violate("negative-capacity", "arc " + a.from + " -> " + a.to + " has negative capacity");
  }

  if (topology.horizon.periods < 1) violate("empty-horizon", "horizon must have >= 1 period");

  if (demand) {
    const auto clinics = topology.clinic_indices();
    if (demand->clinics() != static_cast<int>(clinics.size())) {
      violate("demand-index-mismatch", "demand model covers " +
                                           std::to_string(demand->clinics()) +
                                           " clinics, topology has " +
                                           std::to_string(clinics.size()));
    } else {
      for (int i = 0; i < demand->vaccines(); ++i) {
        for (std::size_t j = 0; j < clinics.size(); ++j) {
          const Node& clinic = topology.nodes[clinics[j]];
          for (int t = 1; t <= demand->periods(); ++t) {
            const double mu = demand->mu(i, static_cast<int>(j), t);
            if (mu > 0 && clinic.refrigerator_capacity == 0 && clinic.freezer_capacity == 0) {
              violate("zero-capacity-demand",
                      "clinic " + clinic.id + " has positive demand but no cold storage");
              t = demand->periods();  // one violation per clinic is enough
            } else if (mu > 0 && mu <= 10.0) {
              report.warnings.push_back("small mean demand (mu <= 10) at clinic " + clinic.id +
                                        ", period " + std::to_string(t) +
                                        ": normal approximation is weak");
              t = demand->periods();
            }
          }
        }
      }
    }
    // Demand may be attached only to clinic nodes; the dense model is defined
    // over clinics, so a mismatched clinic count is the only way to smuggle
    // demand onto storage tiers. Tables that name non-clinic nodes are
    // rejected at instance load; revalidate here for directly built models.
  }
  return report;
}

namespace {

// floor(total / n) per node, remainder to the lexicographically smallest id.
void distribute_capacity(std::vector<Node>& nodes, const std::vector<int>& receivers,
                         double total, double Node::*field) {
  if (receivers.empty() || total <= 0.0) return;
  const double base = std::floor(total / static_cast<double>(receivers.size()));
  double remainder = total - base * static_cast<double>(receivers.size());
  int lowest = receivers[0];
  for (int k : receivers)
    if (nodes[k].id < nodes[lowest].id) lowest = k;
  for (int k : receivers) nodes[k].*field += base;
  nodes[lowest].*field += remainder;
}

} // namespace

NetworkTopology apply_redesign(const NetworkTopology& topology, const RemoveTier& redesign) {
  if (redesign.tier == Tier::Central || redesign.tier == Tier::Clinic)
    throw Error("tier not removable: " + std::string(to_string(redesign.tier)));
  const auto removed = topology.tier_indices(redesign.tier);
  if (removed.empty())
    throw Error("tier not present: " + std::string(to_string(redesign.tier)));

  NetworkTopology out;
  out.horizon = topology.horizon;

  std::set<int> removed_set(removed.begin(), removed.end());
  std::set<std::string> removed_ids;
  double total_r = 0.0, total_f = 0.0;
  for (int k : removed) {
    removed_ids.insert(topology.nodes[k].id);
    total_r += topology.nodes[k].refrigerator_capacity;
    total_f += topology.nodes[k].freezer_capacity;
  }

  for (std::size_t k = 0; k < topology.nodes.size(); ++k)
    if (!removed_set.count(static_cast<int>(k))) out.nodes.push_back(topology.nodes[k]);

  const Tier target_tier =
      redesign.relocate_to == RelocateTo::Clinics ? Tier::Clinic : Tier::District;
  std::vector<int> receivers;
  for (std::size_t k = 0; k < out.nodes.size(); ++k)
    if (out.nodes[k].tier == target_tier) receivers.push_back(static_cast<int>(k));
  if (receivers.empty())
    throw Error("no nodes in the relocation target tier");
  distribute_capacity(out.nodes, receivers, total_r, &Node::refrigerator_capacity);
  distribute_capacity(out.nodes, receivers, total_f, &Node::freezer_capacity);

  // Rewire: every (u -> m -> d) path through a removed node m becomes u -> d,
  // inheriting d's leg schedule and max of the two legs' transport capacity.
  std::vector<Arc> kept;
  std::vector<const Arc*> into_removed, out_of_removed;
  for (const auto& a : topology.arcs) {
    const bool from_removed = removed_ids.count(a.from) > 0;
    const bool to_removed = removed_ids.count(a.to) > 0;
    if (!from_removed && !to_removed) kept.push_back(a);
    else if (to_removed && !from_removed) into_removed.push_back(&a);
    else if (from_removed && !to_removed) out_of_removed.push_back(&a);
    // removed -> removed arcs vanish
  }
  std::map<std::pair<std::string, std::string>, Arc> rewired;
  for (const Arc* up : into_removed) {
    for (const Arc* down : out_of_removed) {
      if (up->to != down->from) continue;
      Arc a;
      a.from = up->from;
      a.to = down->to;
      a.transport_capacity = std::max(up->transport_capacity, down->transport_capacity);
      a.schedule = down->schedule;
      auto key = std::make_pair(a.from, a.to);
      auto it = rewired.find(key);
      if (it == rewired.end()) {
        rewired.emplace(key, a);
      } else {
        it->second.transport_capacity = std::max(it->second.transport_capacity,
                                                 a.transport_capacity);
        for (int t : a.schedule.active_periods)
          if (!it->second.schedule.active(t)) it->second.schedule.active_periods.push_back(t);
        std::sort(it->second.schedule.active_periods.begin(),
                  it->second.schedule.active_periods.end());
      }
    }
  }
  out.arcs = std::move(kept);
  for (auto& [key, a] : rewired) out.arcs.push_back(a);
  return out;
}

std::vector<VaccineType> apply_presentation_swap(const std::vector<VaccineType>& catalog,
                                                 const Thermostable& swap) {
  std::vector<VaccineType> out = catalog;
  for (auto& v : out) {
    if (v.id == swap.vaccine) {
      v.thermostable = true;
      return out;
    }
  }
  throw Error("unknown vaccine id: " + swap.vaccine);
}

std::vector<VaccineType> apply_presentation_swap(const std::vector<VaccineType>& catalog,
                                                 const DualChamber& swap) {
  if (swap.per_dose_volume <= 0.0) throw Error("dual-chamber per-dose volume must be positive");
  std::vector<VaccineType> out = catalog;
  for (auto& v : out) {
    if (v.id != swap.vaccine) continue;
    VialPresentation p;
    p.vial_size = 1;  // single-dose device: no open-vial waste
    p.packed_volume_per_dose = swap.per_dose_volume;
    p.diluent_volume_per_dose = 0.0;  // diluent rides inside the packed volume
    p.active = true;
    v.presentations = {p};
    v.dual_chamber = true;
    v.ovw_override = 0.0;
    return out;
  }
  throw Error("unknown vaccine id: " + swap.vaccine);
}

std::vector<VaccineType> apply_vial_mix(const std::vector<VaccineType>& catalog,
                                        const std::string& vaccine,
                                        const std::vector<int>& sizes) {
  if (sizes.empty()) throw Error("vial mix needs at least one size");
  std::vector<VaccineType> out = catalog;
  for (auto& v : out) {
    if (v.id != vaccine) continue;
    for (auto& p : v.presentations) p.active = false;
    for (int b : sizes) {
      bool found = false;
      for (auto& p : v.presentations) {
        if (p.vial_size == b) {
          p.active = true;
          found = true;
          break;
        }
      }
      if (!found)
        throw Error("vaccine " + vaccine + " has no " + std::to_string(b) +
                    "-dose presentation in its catalog");
    }
    return out;
  }
  throw Error("unknown vaccine id: " + vaccine);
}

} // namespace coldchain
