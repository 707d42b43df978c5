#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coldchain/bssaa.hpp"
#include "coldchain/instance.hpp"

namespace coldchain {

/// One arm transformation, applied in order.
struct Transform {
  enum class Op { RemoveTier, VialMix, Thermostable, DualChamber } op;
  Tier tier = Tier::Regional;          // RemoveTier
  RelocateTo relocate_to = RelocateTo::Clinics;
  std::string vaccine;                 // VialMix / Thermostable / DualChamber
  std::vector<int> sizes;              // VialMix
  double per_dose_volume = 0.0;        // DualChamber
};

struct Arm {
  std::string name;
  std::vector<Transform> transforms;
};

/// Declarative experiment: arms share the SaaConfig and master seed so their
/// scenario draws pair by index.
struct ExperimentSpec {
  std::string base_instance;           // path
  std::string output_dir;
  SaaConfig saa;
  std::vector<Arm> arms;
};

ExperimentSpec load_experiment_spec(const std::string& path);
std::string experiment_spec_to_json(const ExperimentSpec& spec);

struct ArmResult {
  std::string name;
  RunResult run;
  bool failed = false;
  std::string failure;
  std::uint64_t scenario_digest = 0;   // first replication's training draws
};

struct PairwiseComparison {
  std::string arm_a, arm_b;
  PairedTestResult sr;
  PairedTestResult fic;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<ArmResult> arms;
  std::vector<PairwiseComparison> comparisons;  // baseline (arm 0) vs others
  bool partial = false;                // some arm failed
  std::string output_dir;
};

/// Runs every arm (failures recorded, remaining arms still run), compares
/// each arm against the first, and writes per-arm CSVs
/// (sr_by_vaccine.csv, fic_by_region.csv with columns group,scenario,value),
/// box-stat summaries, and a replayable run manifest to the output directory.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Applies an arm's transforms to a copy of the instance.
Instance apply_transforms(const Instance& base, const std::vector<Transform>& transforms);

struct SyntheticShape {
  int regions = 2;
  int districts_per_region = 3;
  int clinics_per_district = 4;
  int periods = 12;
  double capacity_scale = 0.6;   // fraction of expected cold-volume throughput
  double demand_scale = 1.0;
  int tiers = 4;                 // 4: central/region/district/clinic; 3: no regional tier
  double cv = 0.15;
};

/// Writes a complete synthetic instance with the standard six-antigen EPI
/// catalog (verbatim per-dose volumes, diluents, regimens and storage
/// classes), quarterly central->regional and monthly downstream schedules,
/// region populations drawn from the seed, and capacities scaled against the
/// expected cold-volume throughput so small scales give a capacity-bound
/// system.
Instance make_synthetic_instance(const SyntheticShape& shape, std::uint64_t seed);
void write_synthetic_instance(const SyntheticShape& shape, std::uint64_t seed,
                              const std::string& path);

/// Decreasing-scale search until the baseline optimum has at least one
/// binding refrigerator-capacity row; returns the calibrated instance.
Instance calibrate_capacity_constrained(SyntheticShape shape, std::uint64_t seed,
                                        int sample_size = 5);

} // namespace coldchain
