#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/demand.hpp"
#include "coldchain/model.hpp"

namespace coldchain {

/// Demand section of an instance file: either explicit mu/sigma tables or a
/// region-level generator (population, per-capita rate, residual cv).
struct DemandSpec {
  enum class Type { Tables, Regional } type = Type::Regional;
  bool poisson = false;

  struct TableEntry {
    std::string vaccine;
    std::string clinic;
    std::vector<double> mu;     // per period
    std::vector<double> sigma;  // per period
    double mu_daily = -1.0;     // <0: mu averaged over days
  };
  std::vector<TableEntry> entries;

  struct Region {
    std::string id;
    double population = 0.0;
  };
  std::vector<Region> regions;
  double monthly_rate_per_capita = 0.0;  // base doses per person per period
  double cv = 0.15;                      // sigma = cv * mu
};

/// A full problem instance: the JSON document with top-level keys "horizon",
/// "vaccines", "nodes", "arcs", "wastage", "demand_model". All volumes are
/// cc; all fractions lie in [0,1).
struct Instance {
  NetworkTopology topology;   // horizon lives here
  std::vector<VaccineType> vaccines;
  WastageProfile wastage;
  DemandSpec demand_spec;

  int vaccine_index(const std::string& id) const;  // -1 if unknown

  /// Expands the demand spec into dense per-(vaccine, clinic, period) tables.
  DemandModel demand_model() const;

  /// Effective wastage with open-vial fractions resolved: explicit overrides
  /// win, otherwise the fraction is estimated from the clinic's daily demand
  /// and the vial size.
  WastageProfile resolved_wastage(const DemandModel& demand) const;

  bool any_multi_presentation() const;
};

Instance load_instance(const std::string& path);
Instance parse_instance_json(const std::string& text);
void save_instance(const Instance& instance, const std::string& path);
std::string instance_to_json(const Instance& instance);

} // namespace coldchain
