#include "coldchain/def_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace coldchain {

const char* to_string(VarKind k) {
  switch (k) {
    case VarKind::SupplyR: return "uR";
    case VarKind::SupplyF: return "uF";
    case VarKind::ServeR: return "xR";
    case VarKind::ServeF: return "xF";
    case VarKind::Fic: return "n";
    case VarKind::InvR: return "IR";
    case VarKind::InvF: return "IF";
    case VarKind::ShipRR: return "SRR";
    case VarKind::ShipRF: return "SRF";
    case VarKind::ShipFR: return "SFR";
    case VarKind::ShipFF: return "SFF";
    case VarKind::Shortage: return "v";
    case VarKind::Excess: return "z";
  }
  return "?";
}

const char* to_string(RowKind k) {
  switch (k) {
    case RowKind::BalanceR: return "balR";
    case RowKind::BalanceF: return "balF";
    case RowKind::CapR: return "capR";
    case RowKind::CapF: return "capF";
    case RowKind::InitR: return "initR";
    case RowKind::InitF: return "initF";
    case RowKind::NoFreezeEnd: return "noFreezeEnd";
    case RowKind::ArcCap: return "arcCap";
    case RowKind::FicLink: return "fic";
    case RowKind::Demand: return "demand";
  }
  return "?";
}

PenaltyVector PenaltyVector::uniform(int I, int J, int T, double v) {
  PenaltyVector p;
  p.vaccines = I;
  p.clinics = J;
  p.periods = T;
  p.value.assign(static_cast<std::size_t>(I) * J * T, v);
  return p;
}

std::string VariableIndex::name(int id) const {
  const VarKey& k = keys_[id];
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(i%d,n%d,a%d,t%d,s%d)", to_string(k.kind), k.item,
                k.node, k.arc, k.t, k.scenario);
  return buf;
}

int VariableIndex::serve(VarKind rf, int item, int clinic, int t) const {
  const int off = rf == VarKind::ServeR ? off_serve_r_ : off_serve_f_;
  return off + (item * clinics_ + clinic) * periods_ + (t - 1);
}

int VariableIndex::fic(int clinic) const { return off_fic_ + clinic; }

int VariableIndex::inventory(VarKind rf, int item, int node, int t) const {
  const int off = rf == VarKind::InvR ? off_inv_r_ : off_inv_f_;
  return off + (item * nodes_ + node) * (periods_ + 1) + t;
}

int VariableIndex::shortage(int vaccine, int clinic, int t, int s) const {
  return off_shortage_ + ((vaccine * clinics_ + clinic) * periods_ + (t - 1)) * scen_ + s;
}

int VariableIndex::excess(int vaccine, int clinic, int t, int s) const {
  return off_excess_ + ((vaccine * clinics_ + clinic) * periods_ + (t - 1)) * scen_ + s;
}

int VariableIndex::supply(VarKind rf, int item, int sched_pos) const {
  const int off = rf == VarKind::SupplyR ? off_supply_r_ : off_supply_f_;
  return off + item * n_supply_periods_ + sched_pos;
}

int VariableIndex::ship(VarKind kind, int item, int arc, int active_pos) const {
  const int k = static_cast<int>(kind) - static_cast<int>(VarKind::ShipRR);
  return off_ship_[k] + item * n_arc_periods_ + arc_period_offset_[arc] + active_pos;
}

std::string RowIndex::name(int row) const {
  const RowKey& k = keys[row];
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(i%d,n%d,a%d,t%d,s%d)", to_string(k.kind), k.item,
                k.node, k.arc, k.t, k.scenario);
  return buf;
}

namespace {

struct BuildContext {
  const NetworkTopology& topo;
  const std::vector<VaccineType>& catalog;
  const WastageProfile& wastage;
  const DemandModel& demand;
  const ScenarioSet& scenarios;
  const DefConfig& config;

  int T = 0, I = 0, J = 0, NN = 0, NA = 0;
  std::vector<Item> items;
  std::vector<int> clinic_nodes;        // dense clinic -> node index
  std::vector<int> clinic_of_node;      // node index -> dense clinic or -1
  std::vector<std::vector<int>> in_arcs, out_arcs;
  std::vector<std::vector<int>> arc_periods;        // sorted active periods per arc
  std::vector<std::vector<int>> arc_period_pos;     // period (1..T) -> pos or -1
  std::vector<std::pair<int, int>> supply_slots;    // (node, period)
  std::vector<std::vector<int>> supply_pos;         // node -> period -> slot or -1

  const VialPresentation& pres(const Item& it) const {
    return catalog[it.vaccine].presentations[it.presentation];
  }
  double serve_weight(const Item& it) const {
    return config.extended ? static_cast<double>(pres(it).vial_size) : 1.0;
  }
  // cc per LP unit in storage-capacity rows; thermostable stores for free
  double storage_volume(const Item& it) const {
    if (catalog[it.vaccine].thermostable) return 0.0;
    return transport_volume(it);
  }
  // cc per LP unit in transport rows; trucks carry the physical volume
  double transport_volume(const Item& it) const {
    const auto& p = pres(it);
    return config.extended ? p.packed_volume_per_dose * p.vial_size
                           : p.packed_volume_per_dose;
  }
  WastageRates rates(const Item& it, int node) const {
    return wastage.lookup(catalog[it.vaccine].id, pres(it).vial_size, topo.nodes[node].id);
  }
  double ovw(const Item& it, int node) const {
    const auto& vac = catalog[it.vaccine];
    if (pres(it).vial_size == 1) return 0.0;
    if (vac.ovw_override) return *vac.ovw_override;
    const auto r = rates(it, node);
    return r.open_vial.value_or(0.0);
  }
};

void enumerate_variables(BuildContext& cx, VariableIndex& vx, lp::LpBuilder& b,
                         double eps) {
  auto add_block = [&](VarKind kind, int count, auto key_fn, double obj = 0.0) {
    const int off = b.num_cols();
    for (int k = 0; k < count; ++k) {
      b.add_column(obj, 0.0, lp::kInf);
      vx.keys_.push_back(key_fn(k));
    }
    return off;
  };

  const int n_items = static_cast<int>(cx.items.size());
  const int n_supply = static_cast<int>(cx.supply_slots.size());
  vx.items_ = n_items;
  vx.vaccines_ = cx.I;
  vx.clinics_ = cx.J;
  vx.nodes_ = cx.NN;
  vx.periods_ = cx.T;
  vx.scen_ = cx.scenarios.sample_size();
  vx.n_supply_periods_ = n_supply;

  vx.off_supply_r_ = add_block(VarKind::SupplyR, n_items * n_supply, [&](int k) {
    VarKey key;
    key.kind = VarKind::SupplyR;
    key.item = k / n_supply;
    key.node = cx.supply_slots[k % n_supply].first;
    key.t = cx.supply_slots[k % n_supply].second;
    return key;
  });
  vx.off_supply_f_ = add_block(VarKind::SupplyF, n_items * n_supply, [&](int k) {
    VarKey key;
    key.kind = VarKind::SupplyF;
    key.item = k / n_supply;
    key.node = cx.supply_slots[k % n_supply].first;
    key.t = cx.supply_slots[k % n_supply].second;
    return key;
  });

  auto serve_key = [&](VarKind kind) {
    return [&, kind](int k) {
      VarKey key;
      key.kind = kind;
      key.item = k / (cx.J * cx.T);
      key.node = (k / cx.T) % cx.J;
      key.t = k % cx.T + 1;
      return key;
    };
  };
  // served doses carry the epsilon objective weight (dose-weighted in
  // extended mode); fill exact weights after the block is created
  vx.off_serve_r_ = add_block(VarKind::ServeR, n_items * cx.J * cx.T,
                              serve_key(VarKind::ServeR));
  vx.off_serve_f_ = add_block(VarKind::ServeF, n_items * cx.J * cx.T,
                              serve_key(VarKind::ServeF));
  for (int ii = 0; ii < n_items; ++ii) {
    const double w = eps * cx.serve_weight(cx.items[ii]);
    for (int j = 0; j < cx.J; ++j)
      for (int t = 1; t <= cx.T; ++t) {
        b.set_objective(vx.serve(VarKind::ServeR, ii, j, t), w);
        b.set_objective(vx.serve(VarKind::ServeF, ii, j, t), w);
      }
  }

  vx.off_fic_ = add_block(VarKind::Fic, cx.J, [&](int k) {
    VarKey key;
    key.kind = VarKind::Fic;
    key.node = k;
    return key;
  }, 1.0);

  auto inv_key = [&](VarKind kind) {
    return [&, kind](int k) {
      VarKey key;
      key.kind = kind;
      key.item = k / (cx.NN * (cx.T + 1));
      key.node = (k / (cx.T + 1)) % cx.NN;
      key.t = k % (cx.T + 1);
      return key;
    };
  };
  vx.off_inv_r_ = add_block(VarKind::InvR, n_items * cx.NN * (cx.T + 1),
                            inv_key(VarKind::InvR));
  vx.off_inv_f_ = add_block(VarKind::InvF, n_items * cx.NN * (cx.T + 1),
                            inv_key(VarKind::InvF));

  vx.arc_period_offset_.assign(cx.NA, 0);
  int total_ap = 0;
  for (int a = 0; a < cx.NA; ++a) {
    vx.arc_period_offset_[a] = total_ap;
    total_ap += static_cast<int>(cx.arc_periods[a].size());
  }
  vx.n_arc_periods_ = total_ap;
  const VarKind ship_kinds[4] = {VarKind::ShipRR, VarKind::ShipRF, VarKind::ShipFR,
                                 VarKind::ShipFF};
  for (int k4 = 0; k4 < 4; ++k4) {
    vx.off_ship_[k4] = add_block(ship_kinds[k4], n_items * total_ap, [&](int k) {
      VarKey key;
      key.kind = ship_kinds[k4];
      key.item = k / total_ap;
      const int ap = k % total_ap;
      int arc = 0;
      while (arc + 1 < cx.NA && vx.arc_period_offset_[arc + 1] <= ap) ++arc;
      key.arc = arc;
      key.t = cx.arc_periods[arc][ap - vx.arc_period_offset_[arc]];
      return key;
    });
  }

  const int S = cx.scenarios.sample_size();
  auto slack_key = [&](VarKind kind) {
    return [&, kind](int k) {
      VarKey key;
      key.kind = kind;
      key.item = k / (cx.J * cx.T * S);  // vaccine index
      key.node = (k / (cx.T * S)) % cx.J;
      key.t = (k / S) % cx.T + 1;
      key.scenario = k % S;
      return key;
    };
  };
  vx.off_shortage_ = add_block(VarKind::Shortage, cx.I * cx.J * cx.T * S,
                               slack_key(VarKind::Shortage));
  vx.off_excess_ = add_block(VarKind::Excess, cx.I * cx.J * cx.T * S,
                             slack_key(VarKind::Excess));
  // shortage penalties land via set_penalties after the build
}

} // namespace

DefProblem build_def(const NetworkTopology& topology, const std::vector<VaccineType>& catalog,
                     const WastageProfile& wastage, const DemandModel& demand,
                     const ScenarioSet& scenarios, const DefConfig& config) {
  BuildContext cx{topology, catalog, wastage, demand, scenarios, config};
  cx.T = topology.horizon.periods;
  cx.I = static_cast<int>(catalog.size());
  cx.NN = static_cast<int>(topology.nodes.size());
  cx.NA = static_cast<int>(topology.arcs.size());

  const auto clinics = topology.clinic_indices();
  cx.J = static_cast<int>(clinics.size());
  cx.clinic_nodes = clinics;
  cx.clinic_of_node.assign(cx.NN, -1);
  for (int c = 0; c < cx.J; ++c) cx.clinic_of_node[clinics[c]] = c;

  if (scenarios.vaccines() != cx.I || scenarios.clinics() != cx.J ||
      scenarios.periods() != cx.T)
    throw Error("scenario/topology index mismatch");
  if (demand.vaccines() != cx.I || demand.clinics() != cx.J || demand.periods() != cx.T)
    throw Error("demand/topology index mismatch");

  // items: (vaccine, presentation) pairs
  for (int i = 0; i < cx.I; ++i) {
    const auto& v = catalog[i];
    int actives = 0;
    for (std::size_t p = 0; p < v.presentations.size(); ++p)
      if (v.presentations[p].active) {
        ++actives;
        cx.items.push_back({i, static_cast<int>(p)});
      }
    if (actives == 0) throw Error("vaccine " + v.id + " has no active presentation");
    if (!config.extended && actives > 1)
      throw Error("base formulation requires a single active presentation per vaccine (" +
                  v.id + " has " + std::to_string(actives) + "); use extended mode");
  }

  cx.in_arcs.assign(cx.NN, {});
  cx.out_arcs.assign(cx.NN, {});
  cx.arc_periods.resize(cx.NA);
  cx.arc_period_pos.assign(cx.NA, std::vector<int>(cx.T + 1, -1));
  for (int a = 0; a < cx.NA; ++a) {
    const Arc& arc = topology.arcs[a];
    const int from = topology.node_index(arc.from);
    const int to = topology.node_index(arc.to);
    if (from < 0 || to < 0) throw Error("arc references unknown node");
    cx.out_arcs[from].push_back(a);
    cx.in_arcs[to].push_back(a);
    std::vector<int> periods = arc.schedule.active_periods;
    std::sort(periods.begin(), periods.end());
    periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
    for (int t : periods)
      if (t >= 1 && t <= cx.T) {
        cx.arc_period_pos[a][t] = static_cast<int>(cx.arc_periods[a].size());
        cx.arc_periods[a].push_back(t);
      }
    if (cx.arc_periods[a].empty())
      throw Error("arc " + arc.from + " -> " + arc.to + " has an empty schedule");
  }

  // supply slots at central-tier nodes; default schedule is every period
  cx.supply_pos.assign(cx.NN, {});
  for (int n = 0; n < cx.NN; ++n) {
    if (topology.nodes[n].tier != Tier::Central) continue;
    std::vector<int> periods = topology.nodes[n].supply_periods;
    if (periods.empty())
      for (int t = 1; t <= cx.T; ++t) periods.push_back(t);
    std::sort(periods.begin(), periods.end());
    periods.erase(std::unique(periods.begin(), periods.end()), periods.end());
    cx.supply_pos[n].assign(cx.T + 1, -1);
    for (int t : periods)
      if (t >= 1 && t <= cx.T) {
        cx.supply_pos[n][t] = static_cast<int>(cx.supply_slots.size());
        cx.supply_slots.emplace_back(n, t);
      }
  }

  DefProblem def;
  def.scenario_count = scenarios.sample_size();
  def.extended = config.extended;
  def.service_level = config.service_level;
  def.items = cx.items;
  def.clinic_nodes = cx.clinic_nodes;
  def.periods = cx.T;
  for (const auto& v : catalog) def.vaccine_ids.push_back(v.id);
  for (const auto& n : topology.nodes) def.node_ids.push_back(n.id);

  double eps = config.eps_weight;
  if (eps < 0.0) {
    const double total = demand.total_mean();
    eps = total > 0.0 ? 1.0 / total : 1.0;
  }
  def.eps_weight = eps;

  lp::LpBuilder b;
  enumerate_variables(cx, def.vars, b, eps);

  RowIndex& rx = def.rows;
  const int n_items = static_cast<int>(cx.items.size());
  const int S = scenarios.sample_size();
  std::vector<int> cols;
  std::vector<double> vals;

  auto add_row = [&](RowKind kind, lp::RowSense sense, double rhs, int item, int node,
                     int arc, int t, int s) {
    const int r = b.add_row(sense, rhs, cols, vals);
    RowKey key;
    key.kind = kind;
    key.item = item;
    key.node = node;
    key.arc = arc;
    key.t = t;
    key.scenario = s;
    rx.keys.push_back(key);
    cols.clear();
    vals.clear();
    return r;
  };

  // inventory balance, refrigerators then freezers
  for (int mode = 0; mode < 2; ++mode) {
    const bool fridge = mode == 0;
    const VarKind inv = fridge ? VarKind::InvR : VarKind::InvF;
    const VarKind serve = fridge ? VarKind::ServeR : VarKind::ServeF;
    const VarKind sup = fridge ? VarKind::SupplyR : VarKind::SupplyF;
    const VarKind in_a = fridge ? VarKind::ShipFR : VarKind::ShipRF;   // cross-store inflow
    const VarKind in_b = fridge ? VarKind::ShipRR : VarKind::ShipFF;   // same-store inflow
    const VarKind out_a = fridge ? VarKind::ShipRF : VarKind::ShipFR;  // leaves this store
    const VarKind out_b = fridge ? VarKind::ShipRR : VarKind::ShipFF;
    for (int ii = 0; ii < n_items; ++ii) {
      for (int n = 0; n < cx.NN; ++n) {
        const auto r = cx.rates(cx.items[ii], n);
        const double w_store = fridge ? r.storage_refrigerator : r.storage_freezer;
        for (int t = 1; t <= cx.T; ++t) {
          cols.push_back(def.vars.inventory(inv, ii, n, t));
          vals.push_back(1.0);
          cols.push_back(def.vars.inventory(inv, ii, n, t - 1));
          vals.push_back(-(1.0 - w_store));
          if (t - 1 >= 1) {
            for (int a : cx.in_arcs[n]) {
              const int pos = cx.arc_period_pos[a][t - 1];
              if (pos < 0) continue;
              const auto ra = cx.rates(cx.items[ii], n);  // transit loss keyed by destination
              const double w_in_a = fridge ? ra.transit_fr : ra.transit_rf;
              const double w_in_b = fridge ? ra.transit_rr : ra.transit_ff;
              cols.push_back(def.vars.ship(in_a, ii, a, pos));
              vals.push_back(-(1.0 - w_in_a));
              cols.push_back(def.vars.ship(in_b, ii, a, pos));
              vals.push_back(-(1.0 - w_in_b));
            }
          }
          for (int a : cx.out_arcs[n]) {
            const int pos = cx.arc_period_pos[a][t];
            if (pos < 0) continue;
            cols.push_back(def.vars.ship(out_a, ii, a, pos));
            vals.push_back(1.0);
            cols.push_back(def.vars.ship(out_b, ii, a, pos));
            vals.push_back(1.0);
          }
          const int cj = cx.clinic_of_node[n];
          if (cj >= 0) {
            const double wo = cx.ovw(cx.items[ii], n);
            cols.push_back(def.vars.serve(serve, ii, cj, t));
            vals.push_back(1.0 / (1.0 - wo));
          }
          if (!cx.supply_pos[n].empty() && cx.supply_pos[n][t] >= 0) {
            cols.push_back(def.vars.supply(sup, ii, cx.supply_pos[n][t]));
            vals.push_back(-1.0);
          }
          add_row(fridge ? RowKind::BalanceR : RowKind::BalanceF, lp::RowSense::EQ, 0.0,
                  ii, n, -1, t, -1);
        }
      }
    }
  }

  // storage capacity; the refrigerator side is reduced by the daily diluent
  // volume held for reconstitution
  for (int mode = 0; mode < 2; ++mode) {
    const bool fridge = mode == 0;
    const VarKind inv = fridge ? VarKind::InvR : VarKind::InvF;
    const VarKind in_a = fridge ? VarKind::ShipFR : VarKind::ShipRF;
    const VarKind in_b = fridge ? VarKind::ShipRR : VarKind::ShipFF;
    for (int n = 0; n < cx.NN; ++n) {
      for (int t = 1; t <= cx.T; ++t) {
        for (int ii = 0; ii < n_items; ++ii) {
          const double vol = cx.storage_volume(cx.items[ii]);
          if (vol == 0.0) continue;
          cols.push_back(def.vars.inventory(inv, ii, n, t));
          vals.push_back(vol);
          for (int a : cx.in_arcs[n]) {
            const int pos = cx.arc_period_pos[a][t];
            if (pos < 0) continue;
            const auto ra = cx.rates(cx.items[ii], n);
            const double w_in_a = fridge ? ra.transit_fr : ra.transit_rf;
            const double w_in_b = fridge ? ra.transit_rr : ra.transit_ff;
            cols.push_back(def.vars.ship(in_a, ii, a, pos));
            vals.push_back(vol * (1.0 - w_in_a));
            cols.push_back(def.vars.ship(in_b, ii, a, pos));
            vals.push_back(vol * (1.0 - w_in_b));
          }
        }
        double rhs = fridge ? topology.nodes[n].refrigerator_capacity
                            : topology.nodes[n].freezer_capacity;
        const int cj = cx.clinic_of_node[n];
        if (fridge && cj >= 0) {
          for (int i = 0; i < cx.I; ++i) {
            double r_max = 0.0;
            for (const auto* p : catalog[i].active_presentations())
              r_max = std::max(r_max, p->diluent_volume_per_dose);
            rhs -= r_max * demand.mu_daily(i, cj);
          }
        }
        const int row = add_row(fridge ? RowKind::CapR : RowKind::CapF, lp::RowSense::LE,
                                rhs, -1, n, -1, t, -1);
        if (rhs < 0.0) def.diagnostics.negative_capacity_rows.push_back(row);
      }
    }
  }

  // zero initial inventories
  for (int mode = 0; mode < 2; ++mode) {
    const VarKind inv = mode == 0 ? VarKind::InvR : VarKind::InvF;
    for (int ii = 0; ii < n_items; ++ii)
      for (int n = 0; n < cx.NN; ++n) {
        cols.push_back(def.vars.inventory(inv, ii, n, 0));
        vals.push_back(1.0);
        add_row(mode == 0 ? RowKind::InitR : RowKind::InitF, lp::RowSense::EQ, 0.0, ii, n,
                -1, 0, -1);
      }
  }

  // refrigerator-only vaccines end the horizon outside freezers
  for (int ii = 0; ii < n_items; ++ii) {
    if (!catalog[cx.items[ii].vaccine].refrigerator_only()) continue;
    for (int n = 0; n < cx.NN; ++n) {
      cols.push_back(def.vars.inventory(VarKind::InvF, ii, n, cx.T));
      vals.push_back(1.0);
      add_row(RowKind::NoFreezeEnd, lp::RowSense::EQ, 0.0, ii, n, -1, cx.T, -1);
    }
  }

  // transport capacity per active (arc, period)
  for (int a = 0; a < cx.NA; ++a) {
    for (std::size_t pi = 0; pi < cx.arc_periods[a].size(); ++pi) {
      const int t = cx.arc_periods[a][pi];
      for (int ii = 0; ii < n_items; ++ii) {
        const double vol = cx.transport_volume(cx.items[ii]);
        for (VarKind k : {VarKind::ShipRR, VarKind::ShipRF, VarKind::ShipFR,
                          VarKind::ShipFF}) {
          cols.push_back(def.vars.ship(k, ii, a, static_cast<int>(pi)));
          vals.push_back(vol);
        }
      }
      add_row(RowKind::ArcCap, lp::RowSense::LE, topology.arcs[a].transport_capacity, -1,
              -1, a, t, -1);
    }
  }

  // FIC bound per (vaccine, clinic): n_j limited by the scarcest regimen
  for (int i = 0; i < cx.I; ++i) {
    const double a_i = catalog[i].regimen_doses;
    for (int cj = 0; cj < cx.J; ++cj) {
      cols.push_back(def.vars.fic(cj));
      vals.push_back(1.0);
      for (int ii = 0; ii < n_items; ++ii) {
        if (cx.items[ii].vaccine != i) continue;
        const double w = cx.serve_weight(cx.items[ii]) / a_i;
        for (int t = 1; t <= cx.T; ++t) {
          cols.push_back(def.vars.serve(VarKind::ServeR, ii, cj, t));
          vals.push_back(-w);
          cols.push_back(def.vars.serve(VarKind::ServeF, ii, cj, t));
          vals.push_back(-w);
        }
      }
      add_row(RowKind::FicLink, lp::RowSense::LE, 0.0, i, cj, -1, -1, -1);
    }
  }

  // scenario demand slack rows: served - delta + v - z = 0
  for (int i = 0; i < cx.I; ++i) {
    for (int cj = 0; cj < cx.J; ++cj) {
      for (int t = 1; t <= cx.T; ++t) {
        for (int s = 0; s < S; ++s) {
          for (int ii = 0; ii < n_items; ++ii) {
            if (cx.items[ii].vaccine != i) continue;
            const double w = cx.serve_weight(cx.items[ii]);
            cols.push_back(def.vars.serve(VarKind::ServeR, ii, cj, t));
            vals.push_back(w);
            cols.push_back(def.vars.serve(VarKind::ServeF, ii, cj, t));
            vals.push_back(w);
          }
          cols.push_back(def.vars.shortage(i, cj, t, s));
          vals.push_back(1.0);
          cols.push_back(def.vars.excess(i, cj, t, s));
          vals.push_back(-1.0);
          add_row(RowKind::Demand, lp::RowSense::EQ, scenarios.value(s, i, cj, t), i, cj,
                  -1, t, s);
        }
      }
    }
  }

  def.lp = b.build();

  // provenance for diagnostics and schedule edits
  def.arc_active = cx.arc_periods;
  def.supply_slots = cx.supply_slots;
  for (int a = 0; a < cx.NA; ++a) {
    def.arc_from.push_back(topology.node_index(topology.arcs[a].from));
    def.arc_to.push_back(topology.node_index(topology.arcs[a].to));
  }
  for (int ii = 0; ii < n_items; ++ii)
    def.item_serve_weight.push_back(cx.serve_weight(cx.items[ii]));
  def.item_node_rates.resize(static_cast<std::size_t>(n_items) * cx.NN);
  def.item_node_ovw.resize(def.item_node_rates.size());
  for (int ii = 0; ii < n_items; ++ii)
    for (int n = 0; n < cx.NN; ++n) {
      def.item_node_rates[ii * cx.NN + n] = cx.rates(cx.items[ii], n);
      def.item_node_ovw[ii * cx.NN + n] = cx.ovw(cx.items[ii], n);
    }

  if (!config.penalties.value.empty()) def.set_penalties(config.penalties);
  return def;
}

void DefProblem::set_penalties(const PenaltyVector& pi) {
  const int S = scenario_count;
  const int I = static_cast<int>(vaccine_ids.size());
  const int J = static_cast<int>(clinic_nodes.size());
  if (pi.vaccines != I || pi.clinics != J || pi.periods != periods)
    throw Error("penalty vector dimensions mismatch");
  for (int i = 0; i < I; ++i)
    for (int j = 0; j < J; ++j)
      for (int t = 1; t <= periods; ++t) {
        const double p = -pi.at(i, j, t);
        for (int s = 0; s < S; ++s) lp.objective[vars.shortage(i, j, t, s)] = p;
      }
}

double DefProblem::served_doses(const std::vector<double>& x, int vaccine, int clinic,
                                int t) const {
  double served = 0.0;
  for (std::size_t ii = 0; ii < items.size(); ++ii) {
    if (items[ii].vaccine != vaccine) continue;
    const int i = static_cast<int>(ii);
    served += item_serve_weight[ii] *
              (x[vars.serve(VarKind::ServeR, i, clinic, t)] +
               x[vars.serve(VarKind::ServeF, i, clinic, t)]);
  }
  return served;
}

void freeze_schedule(DefProblem& def, const std::string& arc_from, const std::string& arc_to,
                     const std::vector<int>& periods) {
  if (periods.empty()) throw Error("empty schedule");
  int arc = -1;
  for (std::size_t a = 0; a < def.arc_from.size(); ++a) {
    if (def.node_ids[def.arc_from[a]] == arc_from && def.node_ids[def.arc_to[a]] == arc_to) {
      arc = static_cast<int>(a);
      break;
    }
  }
  if (arc < 0) throw Error("unknown arc " + arc_from + " -> " + arc_to);
  const auto& active = def.arc_active[arc];
  for (std::size_t pos = 0; pos < active.size(); ++pos) {
    const bool keep =
        std::find(periods.begin(), periods.end(), active[pos]) != periods.end();
    if (keep) continue;
    for (VarKind k : {VarKind::ShipRR, VarKind::ShipRF, VarKind::ShipFR, VarKind::ShipFF}) {
      for (std::size_t ii = 0; ii < def.items.size(); ++ii) {
        const int id = def.vars.ship(k, static_cast<int>(ii), arc, static_cast<int>(pos));
        def.lp.col_lb[id] = 0.0;
        def.lp.col_ub[id] = 0.0;
      }
    }
  }
}

double flow_conservation_residual(const DefProblem& def, const std::vector<double>& x) {
  // Telescoped per (item, node, storage mode): receipts plus net arrivals
  // equal storage losses, outbound departures, drawn doses (serving inflated
  // by open-vial waste), and the terminal inventory. Recomputed from the
  // primal values and the wastage fractions, independently of the row
  // residuals.
  const int NN = static_cast<int>(def.node_ids.size());
  const int T = def.periods;
  std::vector<int> clinic_of_node(NN, -1);
  for (std::size_t c = 0; c < def.clinic_nodes.size(); ++c)
    clinic_of_node[def.clinic_nodes[c]] = static_cast<int>(c);

  double worst = 0.0;
  for (std::size_t ii = 0; ii < def.items.size(); ++ii) {
    const int i = static_cast<int>(ii);
    for (int n = 0; n < NN; ++n) {
      const auto& r = def.rates_at(i, n);
      for (int mode = 0; mode < 2; ++mode) {
        const bool fridge = mode == 0;
        const VarKind inv = fridge ? VarKind::InvR : VarKind::InvF;
        const VarKind serve = fridge ? VarKind::ServeR : VarKind::ServeF;
        const VarKind sup = fridge ? VarKind::SupplyR : VarKind::SupplyF;
        const VarKind in_a = fridge ? VarKind::ShipFR : VarKind::ShipRF;
        const VarKind in_b = fridge ? VarKind::ShipRR : VarKind::ShipFF;
        const VarKind out_a = fridge ? VarKind::ShipRF : VarKind::ShipFR;
        const VarKind out_b = fridge ? VarKind::ShipRR : VarKind::ShipFF;
        const double w_store = fridge ? r.storage_refrigerator : r.storage_freezer;
        const double w_in_a = fridge ? r.transit_fr : r.transit_rf;
        const double w_in_b = fridge ? r.transit_rr : r.transit_ff;

        double inflow = 0.0, outflow = 0.0, served = 0.0, storage_loss = 0.0;
        for (std::size_t slot = 0; slot < def.supply_slots.size(); ++slot)
          if (def.supply_slots[slot].first == n)
            inflow += x[def.vars.supply(sup, i, static_cast<int>(slot))];
        for (std::size_t a = 0; a < def.arc_from.size(); ++a) {
          const auto& active = def.arc_active[a];
          for (std::size_t pos = 0; pos < active.size(); ++pos) {
            const int t = active[pos];
            if (def.arc_to[a] == n && t + 1 <= T) {
              inflow += (1.0 - w_in_a) *
                        x[def.vars.ship(in_a, i, static_cast<int>(a), static_cast<int>(pos))];
              inflow += (1.0 - w_in_b) *
                        x[def.vars.ship(in_b, i, static_cast<int>(a), static_cast<int>(pos))];
            }
            if (def.arc_from[a] == n) {
              outflow +=
                  x[def.vars.ship(out_a, i, static_cast<int>(a), static_cast<int>(pos))];
              outflow +=
                  x[def.vars.ship(out_b, i, static_cast<int>(a), static_cast<int>(pos))];
            }
          }
        }
        const int cj = clinic_of_node[n];
        if (cj >= 0) {
          const double wo = def.ovw_at(i, n);
          for (int t = 1; t <= T; ++t)
            served += x[def.vars.serve(serve, i, cj, t)] / (1.0 - wo);
        }
        for (int t = 1; t <= T; ++t)
          storage_loss += w_store * x[def.vars.inventory(inv, i, n, t - 1)];
        const double terminal = x[def.vars.inventory(inv, i, n, T)];
        const double initial = x[def.vars.inventory(inv, i, n, 0)];
        const double residual =
            inflow + initial - outflow - served - storage_loss - terminal;
        worst = std::max(worst, std::fabs(residual));
      }
    }
  }
  return worst;
}

} // namespace coldchain
