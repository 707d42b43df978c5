#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace coldchain {

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

enum class StorageClass { RefrigeratorOnly, RefrigeratorOrFreezer, FreezerPreferred };
enum class Tier { Central, Regional, District, Clinic };

const char* to_string(StorageClass c);
const char* to_string(Tier t);
StorageClass storage_class_from_string(const std::string& s);
Tier tier_from_string(const std::string& s);

/// One physical vial form of a vaccine: b doses per vial, q cc of packed
/// volume per dose, r cc of diluent per dose (0 when the diluent needs no
/// refrigeration at storage time).
struct VialPresentation {
  int vial_size = 1;                   // b, doses per vial
  double packed_volume_per_dose = 0.0; // q, cc/dose
  double diluent_volume_per_dose = 0.0;// r, cc/dose
  bool active = true;                  // participates in the current build
};

struct VaccineType {
  std::string id;
  std::string name;
  int regimen_doses = 1;               // a, doses for full immunization
  StorageClass storage_class = StorageClass::RefrigeratorOrFreezer;
  std::vector<VialPresentation> presentations; // pairwise-distinct vial sizes
  bool thermostable = false;           // consumes no cold storage space
  bool dual_chamber = false;           // diluent co-packed, refrigerated with the vaccine
  std::optional<double> ovw_override;  // fixed open-vial wastage fraction; else estimated

  bool refrigerator_only() const { return storage_class == StorageClass::RefrigeratorOnly; }
  std::vector<const VialPresentation*> active_presentations() const;
  const VialPresentation& single_active_presentation() const; // throws unless exactly one
};

struct Node {
  std::string id;
  Tier tier = Tier::Clinic;
  double refrigerator_capacity = 0.0;  // C^R_j, cc
  double freezer_capacity = 0.0;       // C^F_j, cc
  std::string region;                  // grouping key for FIC aggregation
  std::vector<int> supply_periods;     // central only: periods with inbound supply
};

/// Periods (1-based) in which shipments on an arc may depart.
struct ScheduleMask {
  std::vector<int> active_periods;
  bool active(int t) const;
  bool empty() const { return active_periods.empty(); }
};

struct Arc {
  std::string from;
  std::string to;
  double transport_capacity = 0.0;     // C^V, cc per shipment period
  ScheduleMask schedule;
};

struct Horizon {
  int periods = 12;
  int period_length_days = 30;
};

/// Loss fractions for one (vaccine, presentation). Uniform over nodes and
/// periods unless an override narrows the key; the open-vial fraction may be
/// absent, meaning "estimate from session demand".
struct WastageRates {
  double storage_refrigerator = 0.0;   // w^R
  double storage_freezer = 0.0;        // w^F
  double transit_rr = 0.0;             // w^RR
  double transit_rf = 0.0;             // w^RF
  double transit_fr = 0.0;             // w^FR
  double transit_ff = 0.0;             // w^FF
  std::optional<double> open_vial;     // w^O; nullopt => estimate offline
};

struct WastageOverride {
  std::string vaccine;
  std::optional<int> vial_size;        // absent: all presentations
  std::optional<std::string> node;     // absent: all nodes
  WastageRates rates;
};

struct WastageProfile {
  WastageRates defaults;
  std::vector<WastageOverride> overrides;

  /// Effective rates for (vaccine, vial size, node); most specific override wins.
  WastageRates lookup(const std::string& vaccine, int vial_size, const std::string& node) const;
};

struct NetworkTopology {
  Horizon horizon;
  std::vector<Node> nodes;
  std::vector<Arc> arcs;

  int node_index(const std::string& id) const; // -1 if unknown
  const Node* find_node(const std::string& id) const;
  std::vector<int> clinic_indices() const;
  std::vector<int> tier_indices(Tier t) const;
  double total_refrigerator_capacity() const;
  double total_freezer_capacity() const;
};

// ---------------------------------------------------------------------------
// Validation

struct Violation {
  std::string code;     // stable identifier, e.g. "self-loop"
  std::string message;  // human-readable detail
};

struct ValidationReport {
  std::vector<Violation> violations;
  std::vector<std::string> warnings;   // non-fatal flags (e.g. small demand means)
  bool valid() const { return violations.empty(); }
};

class DemandModel; // demand.hpp

/// Report-style topology checks: dangling arcs, self-loops, demand attached to
/// non-clinic nodes, zero-capacity clinics with positive demand, empty
/// schedules. Side-effect free. Pass the demand model to enable demand checks.
ValidationReport validate_topology(const NetworkTopology& topology,
                                   const DemandModel* demand = nullptr);

// ---------------------------------------------------------------------------
// Redesign and presentation transforms

enum class RelocateTo { Clinics, Districts };

struct RemoveTier {
  Tier tier = Tier::Regional;          // must be interior (Regional or District)
  RelocateTo relocate_to = RelocateTo::Clinics;
};

/// Removes a tier, redistributes its cold-storage capacity, and rewires arcs
/// so the removed tier's upstream ships directly to its downstream. Rewired
/// arcs inherit the downstream leg's schedule and max(upstream, downstream)
/// transport capacity. Total system capacity is preserved exactly: capacities
/// are split as floor(total/n) per receiving node with the remainder assigned
/// to the lexicographically smallest node id.
NetworkTopology apply_redesign(const NetworkTopology& topology, const RemoveTier& redesign);

struct Thermostable {
  std::string vaccine;
};

struct DualChamber {
  std::string vaccine;
  double per_dose_volume = 0.0;        // cc/dose of the combined device
};

std::vector<VaccineType> apply_presentation_swap(const std::vector<VaccineType>& catalog,
                                                 const Thermostable& swap);
std::vector<VaccineType> apply_presentation_swap(const std::vector<VaccineType>& catalog,
                                                 const DualChamber& swap);

/// Restricts/extends a vaccine's active presentations to exactly the given
/// vial sizes (they must exist in the presentation catalog).
std::vector<VaccineType> apply_vial_mix(const std::vector<VaccineType>& catalog,
                                        const std::string& vaccine,
                                        const std::vector<int>& sizes);

} // namespace coldchain
