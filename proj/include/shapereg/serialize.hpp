#pragma once

#include <string>

#include <json.hpp>

#include "shapereg/additive.hpp"
#include "shapereg/bench.hpp"
#include "shapereg/decomp.hpp"

// JSON round-trips for every fitted object, selection result, scenario spec
// and benchmark report.  Doubles are emitted with shortest exact
// representations, so save -> load -> save is byte-stable and reloaded
// models predict bit-identically.

namespace shapereg {

void to_json(nlohmann::json& j, const StepFit& fit);
void from_json(const nlohmann::json& j, StepFit& fit);

void to_json(nlohmann::json& j, const PiecewiseLinearFit& fit);
void from_json(const nlohmann::json& j, PiecewiseLinearFit& fit);

// Split sets are stored compactly as (n, validate_size, seed); loading
// regenerates the index sets through the deterministic splitter.
void to_json(nlohmann::json& j, const SplitIndices& split);
void from_json(const nlohmann::json& j, SplitIndices& split);

void to_json(nlohmann::json& j, const AlphaGrid& grid);
void from_json(const nlohmann::json& j, AlphaGrid& grid);

void to_json(nlohmann::json& j, const DecompFit& fit);
void from_json(const nlohmann::json& j, DecompFit& fit);

void to_json(nlohmann::json& j, const SelectedModel& model);
void from_json(const nlohmann::json& j, SelectedModel& model);

void to_json(nlohmann::json& j, const AdditiveFit& fit);
void from_json(const nlohmann::json& j, AdditiveFit& fit);

void to_json(nlohmann::json& j, const SelectedAdditiveModel& model);
void from_json(const nlohmann::json& j, SelectedAdditiveModel& model);

void to_json(nlohmann::json& j, const ScenarioSpec& spec);
void from_json(const nlohmann::json& j, ScenarioSpec& spec);

void to_json(nlohmann::json& j, const BenchRecord& rec);
void from_json(const nlohmann::json& j, BenchRecord& rec);

void to_json(nlohmann::json& j, const SlopeRow& row);
void from_json(const nlohmann::json& j, SlopeRow& row);

void to_json(nlohmann::json& j, const BenchConfig& config);
void from_json(const nlohmann::json& j, BenchConfig& config);

void to_json(nlohmann::json& j, const BenchReport& report);
void from_json(const nlohmann::json& j, BenchReport& report);

void to_json(nlohmann::json& j, const SweepRow& row);
void from_json(const nlohmann::json& j, SweepRow& row);

void to_json(nlohmann::json& j, const SplitRow& row);
void from_json(const nlohmann::json& j, SplitRow& row);

void to_json(nlohmann::json& j, const MSweepRow& row);
void from_json(const nlohmann::json& j, MSweepRow& row);

// Pretty-printed write with a trailing newline; throws Error when the file
// cannot be created.
void save_json(const std::string& path, const nlohmann::json& j);

// Parse a JSON file; throws EmptyFileError when missing/unreadable and
// DomainError on malformed content.
nlohmann::json load_json(const std::string& path);

// Flat CSV of benchmark records (header scenario,n,seed,method,mse) with
// 17-significant-digit values for exact reloads.
void save_records_csv(const std::string& path,
                      const std::vector<BenchRecord>& records);

}  // namespace shapereg
