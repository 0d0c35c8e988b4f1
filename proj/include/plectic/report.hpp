#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace plectic {

enum class Comparator { kLessEqual, kGreaterEqual };

/// One verified statement: a residual compared against a threshold.
struct CheckResult {
  std::string id;
  std::string model;
  std::string anchor;  // the statement being checked, in words
  double residual = 0.0;
  double threshold = 0.0;
  Comparator comparator = Comparator::kLessEqual;
  int samples = 0;
  std::uint64_t seed = 0;
  std::string note;

  bool pass() const;
};

class Report {
 public:
  CheckResult& add(CheckResult r);
  CheckResult& add(std::string id, std::string model, std::string anchor, double residual, double threshold,
                   int samples, std::uint64_t seed, Comparator cmp = Comparator::kLessEqual, std::string note = {});
  void append(const Report& other);

  const std::vector<CheckResult>& entries() const { return entries_; }
  bool pass() const;
  /// Entry by id and model, or nullptr.
  const CheckResult* find(const std::string& id, const std::string& model = {}) const;

  /// Deterministic JSON: sorted keys, 17 significant digits, "schema": 1.
  std::string to_json() const;
  std::string to_text() const;

 private:
  std::vector<CheckResult> entries_;
};

}  // namespace plectic
