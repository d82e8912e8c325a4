#include "fncalc/report.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <sstream>

#include "fncalc/error.hpp"

namespace fncalc {

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass: return "pass";
    case CheckStatus::Fail: return "fail";
    case CheckStatus::Error: return "error";
  }
  return "error";
}

CheckStatus status_from_string(const std::string& s) {
  if (s == "pass") return CheckStatus::Pass;
  if (s == "fail") return CheckStatus::Fail;
  if (s == "error") return CheckStatus::Error;
  throw PreconditionViolation("unknown check status '" + s + "'");
}

int Report::count(CheckStatus s) const {
  return static_cast<int>(std::count_if(checks.begin(), checks.end(), [s](const CheckRecord& c) { return c.status == s; }));
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["seed"] = seed;
  j["checks"] = nlohmann::json::array();
  for (const auto& c : checks)
    j["checks"].push_back({{"name", c.name},
                           {"kind", c.kind},
                           {"status", to_string(c.status)},
                           {"message", c.message},
                           {"witness", c.witness},
                           {"timing_ms", c.timing_ms}});
  j["summary"] = {{"total", checks.size()},
                  {"passed", count(CheckStatus::Pass)},
                  {"failed", count(CheckStatus::Fail)},
                  {"errors", count(CheckStatus::Error)}};
  return j;
}

Report Report::from_json(const nlohmann::json& j) {
  Report r;
  r.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& c : j.at("checks")) {
    CheckRecord rec;
    rec.name = c.at("name").get<std::string>();
    rec.kind = c.at("kind").get<std::string>();
    rec.status = status_from_string(c.at("status").get<std::string>());
    rec.message = c.at("message").get<std::string>();
    rec.witness = c.at("witness");
    rec.timing_ms = c.at("timing_ms").get<double>();
    r.checks.push_back(std::move(rec));
  }
  return r;
}

std::string Report::to_text() const {
  std::ostringstream out;
  out << "seed " << seed << "\n";
  std::size_t width = 4;
  for (const auto& c : checks) width = std::max(width, c.name.size());
  for (const auto& c : checks) {
    std::string status = to_string(c.status);
    std::transform(status.begin(), status.end(), status.begin(), [](unsigned char ch) { return std::toupper(ch); });
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.2f ms", c.timing_ms);
    out << status << std::string(6 - status.size(), ' ') << c.name << std::string(width - c.name.size() + 2, ' ')
        << c.message << "  (" << timing << ")\n";
    if (c.status != CheckStatus::Pass && !c.witness.empty()) out << "      witness: " << c.witness.dump() << "\n";
  }
  out << "summary: " << checks.size() << " checks, " << count(CheckStatus::Pass) << " passed, "
      << count(CheckStatus::Fail) << " failed, " << count(CheckStatus::Error) << " errors\n";
  return out.str();
}

Report Report::without_timing() const {
  Report r = *this;
  for (auto& c : r.checks) c.timing_ms = 0;
  return r;
}

}  // namespace fncalc
