#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/demand.hpp"
#include "coldchain/lp/problem.hpp"
#include "coldchain/model.hpp"

namespace coldchain {

enum class VarKind : std::uint8_t {
  SupplyR,   // exogenous receipt into the central refrigerator, (item, t)
  SupplyF,   // exogenous receipt into the central freezer, (item, t)
  ServeR,    // x^R, (item, clinic, t)
  ServeF,    // x^F, (item, clinic, t)
  Fic,       // n_j, (clinic)
  InvR,      // I^R, (item, node, t = 0..T)
  InvF,      // I^F, (item, node, t = 0..T)
  ShipRR,    // S^RR, (item, arc, active t)
  ShipRF,
  ShipFR,
  ShipFF,
  Shortage,  // v^s, (vaccine, clinic, t, s)
  Excess,    // z^s, (vaccine, clinic, t, s)
};

enum class RowKind : std::uint8_t {
  BalanceR,  // (item, node, t = 1..T)
  BalanceF,
  CapR,      // (node, t)
  CapF,
  InitR,     // (item, node)
  InitF,
  NoFreezeEnd, // (refrigerator-only item, node)
  ArcCap,    // (arc, active t)
  FicLink,   // (vaccine, clinic)
  Demand,    // (vaccine, clinic, t, s)
};

const char* to_string(VarKind k);
const char* to_string(RowKind k);

/// (vaccine, presentation) pair participating in the build. Base mode uses
/// the single active presentation per vaccine; extended mode uses all active
/// ones. Units: doses in base mode, vials in extended mode.
struct Item {
  int vaccine = 0;        // catalog index
  int presentation = 0;   // index into that vaccine's presentation list
};

struct VarKey {
  VarKind kind{};
  int item = -1;     // item index, or vaccine index for Shortage/Excess
  int node = -1;     // node or clinic (dense clinic index for Serve/Fic/v/z)
  int arc = -1;
  int t = -1;        // period; inventories use 0..T
  int scenario = -1;
};

struct RowKey {
  RowKind kind{};
  int item = -1;
  int node = -1;
  int arc = -1;
  int t = -1;
  int scenario = -1;
};

/// Bijection between dense LP column ids and structured variable keys, with
/// O(1) forward lookups for the hot kinds. Shipment variables exist only for
/// (arc, period) pairs active under the schedule; inactive ones are never
/// created.
class VariableIndex {
 public:
  int count() const { return static_cast<int>(keys_.size()); }
  const VarKey& key(int id) const { return keys_[id]; }
  std::string name(int id) const;  // human-readable, e.g. xR[bcg/20,c3,t2]

  int serve(VarKind rf, int item, int clinic, int t) const;   // t 1-based
  int fic(int clinic) const;
  int inventory(VarKind rf, int item, int node, int t) const; // t 0-based..T
  int shortage(int vaccine, int clinic, int t, int s) const;
  int excess(int vaccine, int clinic, int t, int s) const;
  int supply(VarKind rf, int item, int sched_pos) const;
  int ship(VarKind kind, int item, int arc, int active_pos) const;

  friend class DefBuilder;

 private:
  std::vector<VarKey> keys_;
  // layout offsets
  int items_ = 0, vaccines_ = 0, clinics_ = 0, nodes_ = 0, periods_ = 0, scen_ = 0;
  int n_supply_periods_ = 0, n_arc_periods_ = 0;
  int off_supply_r_ = 0, off_supply_f_ = 0, off_serve_r_ = 0, off_serve_f_ = 0;
  int off_fic_ = 0, off_inv_r_ = 0, off_inv_f_ = 0;
  int off_ship_[4] = {0, 0, 0, 0};
  int off_shortage_ = 0, off_excess_ = 0;
  std::vector<int> arc_period_offset_;  // per arc, into the per-kind block
};

struct RowIndex {
  std::vector<RowKey> keys;
  std::string name(int row) const;
};

/// Per-(vaccine, clinic, period) penalty weights for shortage variables.
struct PenaltyVector {
  int vaccines = 0, clinics = 0, periods = 0;
  std::vector<double> value;  // (i, j, t), t 1-based

  static PenaltyVector uniform(int I, int J, int T, double v);
  double at(int i, int j, int t) const { return value[(i * clinics + j) * periods + (t - 1)]; }
  double& at(int i, int j, int t) { return value[(i * clinics + j) * periods + (t - 1)]; }
};

struct DefConfig {
  double eps_weight = -1.0;   // objective weight on served doses; <0: 1/sum(mu)
  bool extended = false;      // multi-vial-size formulation
  PenaltyVector penalties;    // empty: all zeros
  double service_level = 0.7; // recorded in metadata (p_target)
};

struct DefDiagnostics {
  // capacity rows whose RHS went negative after the diluent adjustment;
  // kept infeasible rather than dropped.
  std::vector<int> negative_capacity_rows;
};

/// The assembled penalty-reformulated deterministic equivalent.
struct DefProblem {
  lp::LinearProgram lp;
  VariableIndex vars;
  RowIndex rows;
  DefDiagnostics diagnostics;

  // metadata
  int scenario_count = 0;
  double eps_weight = 0.0;
  double service_level = 0.7;
  bool extended = false;
  std::vector<Item> items;
  std::vector<int> clinic_nodes;        // topology node index per dense clinic
  std::vector<std::string> clinic_regions;
  std::vector<std::string> vaccine_ids; // catalog order
  std::vector<int> vaccine_regimen;     // a_i per vaccine
  std::vector<std::string> node_ids;
  int periods = 0;

  // coefficient provenance, kept for diagnostics and schedule edits
  std::vector<int> arc_from, arc_to;            // node indices per arc
  std::vector<std::vector<int>> arc_active;     // sorted active periods per arc
  std::vector<std::pair<int, int>> supply_slots;// (node, period)
  std::vector<double> item_serve_weight;        // doses per LP unit
  std::vector<WastageRates> item_node_rates;    // (item, node) flattened
  std::vector<double> item_node_ovw;            // (item, node)

  const WastageRates& rates_at(int item, int node) const {
    return item_node_rates[item * node_ids.size() + node];
  }
  double ovw_at(int item, int node) const {
    return item_node_ovw[item * node_ids.size() + node];
  }

  /// Doses served at (vaccine, clinic, t) for a primal vector: sums the
  /// refrigerated and frozen serve variables over the vaccine's items,
  /// dose-weighted in extended mode.
  double served_doses(const std::vector<double>& x, int vaccine, int clinic, int t) const;

  /// Rewrites the shortage-penalty objective coefficients in place.
  void set_penalties(const PenaltyVector& pi);
};

/// Builds the deterministic equivalent with the exact coefficient structure
/// of the formulation: balance, capacity, initialization, terminal freezer
/// exclusion, transport, FIC linking, and per-scenario demand-slack rows.
/// Throws Error on scenario/topology index mismatch or (base mode) a vaccine
/// with more than one active presentation.
DefProblem build_def(const NetworkTopology& topology,
                     const std::vector<VaccineType>& catalog,
                     const WastageProfile& wastage,
                     const DemandModel& demand,
                     const ScenarioSet& scenarios,
                     const DefConfig& config);

/// Restricts an arc's shipment variables to the given departure periods by
/// fixing the others to zero. Throws on an unknown arc or empty period set.
void freeze_schedule(DefProblem& def, const std::string& arc_from,
                     const std::string& arc_to, const std::vector<int>& periods);

/// Node-level telescoped conservation check on a solved instance: for every
/// (item, node), inflows minus wastage minus outflows minus served minus
/// terminal inventory, summed over the horizon. Near-zero at machine
/// precision for any feasible point. Returns the max absolute residual.
double flow_conservation_residual(const DefProblem& def, const std::vector<double>& x);

} // namespace coldchain
