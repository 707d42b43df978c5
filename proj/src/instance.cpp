#include "coldchain/instance.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "coldchain/ovw.hpp"

namespace coldchain {

using nlohmann::json;

int Instance::vaccine_index(const std::string& id) const {
  for (std::size_t i = 0; i < vaccines.size(); ++i)
    if (vaccines[i].id == id) return static_cast<int>(i);
  return -1;
}

DemandModel Instance::demand_model() const {
  const auto clinics = topology.clinic_indices();
  const int I = static_cast<int>(vaccines.size());
  const int J = static_cast<int>(clinics.size());
  const int T = topology.horizon.periods;
  DemandModel model(I, J, T);
  model.set_poisson_mode(demand_spec.poisson);

  if (demand_spec.type == DemandSpec::Type::Tables) {
    std::map<std::string, int> clinic_of;
    for (int c = 0; c < J; ++c) clinic_of[topology.nodes[clinics[c]].id] = c;
    for (const auto& e : demand_spec.entries) {
      const int i = vaccine_index(e.vaccine);
      if (i < 0) throw Error("demand table names unknown vaccine " + e.vaccine);
      auto it = clinic_of.find(e.clinic);
      if (it == clinic_of.end())
        throw Error("demand attached to non-clinic or unknown node " + e.clinic);
      if (static_cast<int>(e.mu.size()) != T || static_cast<int>(e.sigma.size()) != T)
        throw Error("demand table for " + e.vaccine + "/" + e.clinic +
                    " must cover every period");
      double total = 0.0;
      for (int t = 1; t <= T; ++t) {
        model.set(i, it->second, t, e.mu[t - 1], e.sigma[t - 1]);
        total += e.mu[t - 1];
      }
      const double daily =
          e.mu_daily >= 0.0
              ? e.mu_daily
              : total / (T * static_cast<double>(topology.horizon.period_length_days));
      model.set_mu_daily(i, it->second, daily);
    }
    return model;
  }

  // regional generator: region demand proportional to population, divided
  // equally among the region's clinics; per-vaccine scale is the regimen size
  std::map<std::string, double> population;
  for (const auto& r : demand_spec.regions) population[r.id] = r.population;
  std::map<std::string, int> clinics_in_region;
  for (int c = 0; c < J; ++c) clinics_in_region[topology.nodes[clinics[c]].region]++;
  for (int c = 0; c < J; ++c) {
    const Node& node = topology.nodes[clinics[c]];
    auto pop = population.find(node.region);
    if (pop == population.end())
      throw Error("clinic " + node.id + " references region " + node.region +
                  " absent from the demand model");
    const int share = clinics_in_region[node.region];
    const double base =
        pop->second * demand_spec.monthly_rate_per_capita / std::max(1, share);
    for (int i = 0; i < static_cast<int>(vaccines.size()); ++i) {
      const double mu = base * vaccines[i].regimen_doses;
      const double sigma = demand_spec.cv * mu;
      for (int t = 1; t <= T; ++t) model.set(i, c, t, mu, sigma);
      model.set_mu_daily(i, c, mu / topology.horizon.period_length_days);
    }
  }
  return model;
}

WastageProfile Instance::resolved_wastage(const DemandModel& demand) const {
  WastageProfile out = wastage;
  const auto clinics = topology.clinic_indices();
  for (std::size_t i = 0; i < vaccines.size(); ++i) {
    const auto& vac = vaccines[i];
    if (vac.ovw_override) continue;
    for (const auto& p : vac.presentations) {
      if (!p.active) continue;
      for (std::size_t c = 0; c < clinics.size(); ++c) {
        const std::string& node_id = topology.nodes[clinics[c]].id;
        const WastageRates base = wastage.lookup(vac.id, p.vial_size, node_id);
        if (base.open_vial) continue;  // explicitly supplied
        OvwQuery q;
        q.daily_mean = demand.mu_daily(static_cast<int>(i), static_cast<int>(c));
        q.vial_size = p.vial_size;
        q.period_length_days = topology.horizon.period_length_days;
        q.sessions_per_period = topology.horizon.period_length_days;  // one per day
        WastageOverride ov;
        ov.vaccine = vac.id;
        ov.vial_size = p.vial_size;
        ov.node = node_id;
        ov.rates = base;
        ov.rates.open_vial = estimate_ovw(q);
        out.overrides.push_back(std::move(ov));
      }
    }
  }
  return out;
}

bool Instance::any_multi_presentation() const {
  for (const auto& v : vaccines)
    if (v.active_presentations().size() > 1) return true;
  return false;
}

namespace {

WastageRates rates_from_json(const json& j, const WastageRates& base) {
  WastageRates r = base;
  if (j.contains("storage_refrigerator")) r.storage_refrigerator = j["storage_refrigerator"];
  if (j.contains("storage_freezer")) r.storage_freezer = j["storage_freezer"];
  if (j.contains("transit_rr")) r.transit_rr = j["transit_rr"];
  if (j.contains("transit_rf")) r.transit_rf = j["transit_rf"];
  if (j.contains("transit_fr")) r.transit_fr = j["transit_fr"];
  if (j.contains("transit_ff")) r.transit_ff = j["transit_ff"];
  if (j.contains("open_vial") && !j["open_vial"].is_null())
    r.open_vial = j["open_vial"].get<double>();
  for (double v : {r.storage_refrigerator, r.storage_freezer, r.transit_rr, r.transit_rf,
                   r.transit_fr, r.transit_ff, r.open_vial.value_or(0.0)})
    if (v < 0.0 || v >= 1.0) throw Error("wastage fractions must lie in [0,1)");
  return r;
}

json rates_to_json(const WastageRates& r) {
  json j;
  j["storage_refrigerator"] = r.storage_refrigerator;
  j["storage_freezer"] = r.storage_freezer;
  j["transit_rr"] = r.transit_rr;
  j["transit_rf"] = r.transit_rf;
  j["transit_fr"] = r.transit_fr;
  j["transit_ff"] = r.transit_ff;
  if (r.open_vial) j["open_vial"] = *r.open_vial;
  else j["open_vial"] = nullptr;
  return j;
}

} // namespace

Instance parse_instance_json(const std::string& text) {
  json doc = json::parse(text);
  Instance inst;

  const auto& h = doc.at("horizon");
  inst.topology.horizon.periods = h.at("periods");
  inst.topology.horizon.period_length_days = h.value("period_length_days", 30);
  if (inst.topology.horizon.periods < 1) throw Error("horizon must have >= 1 period");

  for (const auto& vj : doc.at("vaccines")) {
    VaccineType v;
    v.id = vj.at("id");
    v.name = vj.value("name", v.id);
    v.regimen_doses = vj.at("regimen_doses");
    if (v.regimen_doses < 1) throw Error("regimen doses must be >= 1 for " + v.id);
    v.storage_class = storage_class_from_string(vj.at("storage"));
    v.thermostable = vj.value("thermostable", false);
    v.dual_chamber = vj.value("dual_chamber", false);
    std::set<int> sizes;
    for (const auto& pj : vj.at("presentations")) {
      VialPresentation p;
      p.vial_size = pj.at("vial_size");
      p.packed_volume_per_dose = pj.at("packed_volume_per_dose");
      p.diluent_volume_per_dose = pj.value("diluent_volume_per_dose", 0.0);
      p.active = pj.value("active", true);
      if (p.vial_size < 1 || p.packed_volume_per_dose <= 0.0 ||
          p.diluent_volume_per_dose < 0.0)
        throw Error("invalid presentation for vaccine " + v.id);
      if (!sizes.insert(p.vial_size).second)
        throw Error("vaccine " + v.id + " has duplicate vial size " +
                    std::to_string(p.vial_size));
      v.presentations.push_back(p);
    }
    if (v.presentations.empty()) throw Error("vaccine " + v.id + " has no presentations");
    if (vj.contains("ovw") && !vj["ovw"].is_null()) {
      const auto& o = vj["ovw"];
      if (o.is_string()) {
        if (o.get<std::string>() != "estimate")
          throw Error("ovw must be \"estimate\" or {\"value\": f}");
      } else if (o.is_object()) {
        v.ovw_override = o.at("value").get<double>();
      } else if (o.is_number()) {
        v.ovw_override = o.get<double>();
      }
    }
    inst.vaccines.push_back(std::move(v));
  }

  for (const auto& nj : doc.at("nodes")) {
    Node n;
    n.id = nj.at("id");
    n.tier = tier_from_string(nj.at("tier"));
    n.refrigerator_capacity = nj.at("refrigerator_capacity");
    n.freezer_capacity = nj.at("freezer_capacity");
    n.region = nj.value("region", std::string());
    if (nj.contains("supply_periods"))
      n.supply_periods = nj["supply_periods"].get<std::vector<int>>();
    if (n.refrigerator_capacity < 0 || n.freezer_capacity < 0)
      throw Error("node " + n.id + " has negative capacity");
    inst.topology.nodes.push_back(std::move(n));
  }

  for (const auto& aj : doc.at("arcs")) {
    Arc a;
    a.from = aj.at("from");
    a.to = aj.at("to");
    a.transport_capacity = aj.at("transport_capacity");
    a.schedule.active_periods = aj.at("schedule").get<std::vector<int>>();
    inst.topology.arcs.push_back(std::move(a));
  }

  if (doc.contains("wastage")) {
    const auto& wj = doc["wastage"];
    if (wj.contains("defaults"))
      inst.wastage.defaults = rates_from_json(wj["defaults"], WastageRates{});
    if (wj.contains("overrides")) {
      for (const auto& oj : wj["overrides"]) {
        WastageOverride ov;
        ov.vaccine = oj.at("vaccine");
        if (oj.contains("vial_size")) ov.vial_size = oj["vial_size"].get<int>();
        if (oj.contains("node")) ov.node = oj["node"].get<std::string>();
        ov.rates = rates_from_json(oj, inst.wastage.defaults);
        inst.wastage.overrides.push_back(std::move(ov));
      }
    }
  }

  const auto& dj = doc.at("demand_model");
  const std::string type = dj.at("type");
  inst.demand_spec.poisson = dj.value("distribution", "normal") == std::string("poisson");
  if (type == "tables") {
    inst.demand_spec.type = DemandSpec::Type::Tables;
    for (const auto& ej : dj.at("entries")) {
      DemandSpec::TableEntry e;
      e.vaccine = ej.at("vaccine");
      e.clinic = ej.at("clinic");
      e.mu = ej.at("mu").get<std::vector<double>>();
      e.sigma = ej.at("sigma").get<std::vector<double>>();
      e.mu_daily = ej.value("mu_daily", -1.0);
      inst.demand_spec.entries.push_back(std::move(e));
    }
  } else if (type == "regional") {
    inst.demand_spec.type = DemandSpec::Type::Regional;
    for (const auto& rj : dj.at("regions")) {
      DemandSpec::Region r;
      r.id = rj.at("id");
      r.population = rj.at("population");
      inst.demand_spec.regions.push_back(std::move(r));
    }
    inst.demand_spec.monthly_rate_per_capita = dj.at("monthly_rate_per_capita");
    inst.demand_spec.cv = dj.value("cv", 0.15);
  } else {
    throw Error("demand_model.type must be \"tables\" or \"regional\"");
  }
  return inst;
}

Instance load_instance(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open instance file " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_instance_json(ss.str());
}

std::string instance_to_json(const Instance& inst) {
  json doc;
  doc["horizon"] = {{"periods", inst.topology.horizon.periods},
                    {"period_length_days", inst.topology.horizon.period_length_days}};
  json vaccines = json::array();
  for (const auto& v : inst.vaccines) {
    json vj;
    vj["id"] = v.id;
    vj["name"] = v.name;
    vj["regimen_doses"] = v.regimen_doses;
    vj["storage"] = to_string(v.storage_class);
    vj["thermostable"] = v.thermostable;
    vj["dual_chamber"] = v.dual_chamber;
    json ps = json::array();
    for (const auto& p : v.presentations) {
      ps.push_back({{"vial_size", p.vial_size},
                    {"packed_volume_per_dose", p.packed_volume_per_dose},
                    {"diluent_volume_per_dose", p.diluent_volume_per_dose},
                    {"active", p.active}});
    }
    vj["presentations"] = ps;
    if (v.ovw_override) vj["ovw"] = {{"value", *v.ovw_override}};
    else vj["ovw"] = "estimate";
    vaccines.push_back(vj);
  }
  doc["vaccines"] = vaccines;

  json nodes = json::array();
  for (const auto& n : inst.topology.nodes) {
    json nj;
    nj["id"] = n.id;
    nj["tier"] = to_string(n.tier);
    nj["refrigerator_capacity"] = n.refrigerator_capacity;
    nj["freezer_capacity"] = n.freezer_capacity;
    nj["region"] = n.region;
    if (!n.supply_periods.empty()) nj["supply_periods"] = n.supply_periods;
    nodes.push_back(nj);
  }
  doc["nodes"] = nodes;

  json arcs = json::array();
  for (const auto& a : inst.topology.arcs) {
    arcs.push_back({{"from", a.from},
                    {"to", a.to},
                    {"transport_capacity", a.transport_capacity},
                    {"schedule", a.schedule.active_periods}});
  }
  doc["arcs"] = arcs;

  json wj;
  wj["defaults"] = rates_to_json(inst.wastage.defaults);
  json ovs = json::array();
  for (const auto& ov : inst.wastage.overrides) {
    json oj = rates_to_json(ov.rates);
    oj["vaccine"] = ov.vaccine;
    if (ov.vial_size) oj["vial_size"] = *ov.vial_size;
    if (ov.node) oj["node"] = *ov.node;
    ovs.push_back(oj);
  }
  wj["overrides"] = ovs;
  doc["wastage"] = wj;

  json dj;
  dj["distribution"] = inst.demand_spec.poisson ? "poisson" : "normal";
  if (inst.demand_spec.type == DemandSpec::Type::Tables) {
    dj["type"] = "tables";
    json entries = json::array();
    for (const auto& e : inst.demand_spec.entries) {
      json ej;
      ej["vaccine"] = e.vaccine;
      ej["clinic"] = e.clinic;
      ej["mu"] = e.mu;
      ej["sigma"] = e.sigma;
      if (e.mu_daily >= 0.0) ej["mu_daily"] = e.mu_daily;
      entries.push_back(ej);
    }
    dj["entries"] = entries;
  } else {
    dj["type"] = "regional";
    json regions = json::array();
    for (const auto& r : inst.demand_spec.regions)
      regions.push_back({{"id", r.id}, {"population", r.population}});
    dj["regions"] = regions;
    dj["monthly_rate_per_capita"] = inst.demand_spec.monthly_rate_per_capita;
    dj["cv"] = inst.demand_spec.cv;
  }
  doc["demand_model"] = dj;
  return doc.dump(2);
}

void save_instance(const Instance& inst, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << instance_to_json(inst) << "\n";
}

} // namespace coldchain
