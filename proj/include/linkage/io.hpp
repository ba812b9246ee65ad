#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "linkage/dynamics.hpp"
#include "linkage/ext.hpp"
#include "linkage/het.hpp"
#include "linkage/params.hpp"
#include "linkage/shocks.hpp"
#include "linkage/timing.hpp"

namespace linkage {

/// 17-significant-digit decimal rendering, enough to round-trip a double.
std::string format_double(double v);

/// FNV-1a over the canonical field rendering; stable across runs.
std::uint64_t param_hash(const ModelParams& p);

/// CSV emitter with a header row and a leading provenance comment that names
/// the producing command and the parameter hash.
class CsvWriter {
  public:
    CsvWriter(std::string command, std::uint64_t hash, std::vector<std::string> columns);

    void add_row(const std::vector<double>& values);
    void add_row_mixed(const std::vector<std::string>& values);

    std::string str() const;
    void write_file(const std::string& path) const;

  private:
    std::string header_;
    std::vector<std::string> rows_;
    std::size_t n_cols_;
};

// JSON bindings. Every verdict emitted by the CLI re-parses into its type.
void to_json(nlohmann::json& j, const ModelParams& p);
void from_json(const nlohmann::json& j, ModelParams& p);
void to_json(nlohmann::json& j, const Equilibrium& e);
void from_json(const nlohmann::json& j, Equilibrium& e);
void to_json(nlohmann::json& j, const ShockVerdict& v);
void from_json(const nlohmann::json& j, ShockVerdict& v);
void to_json(nlohmann::json& j, const TimingSolution& s);
void from_json(const nlohmann::json& j, TimingSolution& s);
void to_json(nlohmann::json& j, const SourcingOutcome& o);
void from_json(const nlohmann::json& j, SourcingOutcome& o);

EqLabel eq_label_from_string(const std::string& s);
ShockKind shock_kind_from_string(const std::string& s);
TimingBranch timing_branch_from_string(const std::string& s);
SourcingVerdict sourcing_verdict_from_string(const std::string& s);

}  // namespace linkage
