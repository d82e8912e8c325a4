#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace fncalc {

enum class CheckStatus { Pass, Fail, Error };

std::string to_string(CheckStatus s);
CheckStatus status_from_string(const std::string& s);

struct CheckRecord {
  std::string name;
  std::string kind;
  CheckStatus status = CheckStatus::Pass;
  std::string message;
  /// Data backing the verdict; never empty on a failure.
  nlohmann::json witness = nlohmann::json::object();
  double timing_ms = 0;

  friend bool operator==(const CheckRecord&, const CheckRecord&) = default;
};

struct Report {
  std::uint64_t seed = 0;
  std::vector<CheckRecord> checks;

  int count(CheckStatus s) const;
  bool all_passed() const { return count(CheckStatus::Pass) == static_cast<int>(checks.size()); }
  /// 0 when every check passes, 1 otherwise.
  int exit_code() const { return all_passed() ? 0 : 1; }

  nlohmann::json to_json() const;
  static Report from_json(const nlohmann::json& j);
  std::string to_text() const;
  /// Copy with every timing field set to zero.
  Report without_timing() const;

  friend bool operator==(const Report&, const Report&) = default;
};

}  // namespace fncalc
