#include "plectic/report.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <nlohmann/json.hpp>

#include "plectic/expr.hpp"

namespace plectic {

namespace {

std::string quote(const std::string& s) { return nlohmann::json(s).dump(); }

std::string number(double v) {
  if (std::isnan(v)) return "null";
  if (std::isinf(v)) return v > 0 ? "1e999" : "-1e999";
  return format_number(v);
}

// JSON object from sorted, preformatted values.
std::string object(const std::map<std::string, std::string>& fields) {
  std::string out = "{";
  bool first = true;
  for (const auto& [k, v] : fields) {
    if (!first) out += ',';
    first = false;
    out += quote(k);
    out += ':';
    out += v;
  }
  return out + "}";
}

}  // namespace

bool CheckResult::pass() const {
  if (std::isnan(residual)) return false;
  return comparator == Comparator::kLessEqual ? residual <= threshold : residual >= threshold;
}

CheckResult& Report::add(CheckResult r) {
  entries_.push_back(std::move(r));
  return entries_.back();
}

CheckResult& Report::add(std::string id, std::string model, std::string anchor, double residual, double threshold,
                         int samples, std::uint64_t seed, Comparator cmp, std::string note) {
  CheckResult r;
  r.id = std::move(id);
  r.model = std::move(model);
  r.anchor = std::move(anchor);
  r.residual = residual;
  r.threshold = threshold;
  r.samples = samples;
  r.seed = seed;
  r.comparator = cmp;
  r.note = std::move(note);
  return add(std::move(r));
}

void Report::append(const Report& other) {
  entries_.insert(entries_.end(), other.entries_.begin(), other.entries_.end());
}

bool Report::pass() const {
  for (const auto& e : entries_)
    if (!e.pass()) return false;
  return true;
}

const CheckResult* Report::find(const std::string& id, const std::string& model) const {
  for (const auto& e : entries_)
    if (e.id == id && (model.empty() || e.model == model)) return &e;
  return nullptr;
}

std::string Report::to_json() const {
  std::string checks = "[";
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    if (i) checks += ',';
    checks += object({{"anchor", quote(e.anchor)},
                      {"comparator", quote(e.comparator == Comparator::kLessEqual ? "le" : "ge")},
                      {"id", quote(e.id)},
                      {"model", quote(e.model)},
                      {"note", quote(e.note)},
                      {"residual", number(e.residual)},
                      {"samples", std::to_string(e.samples)},
                      {"seed", std::to_string(e.seed)},
                      {"threshold", number(e.threshold)},
                      {"verdict", quote(e.pass() ? "pass" : "fail")}});
  }
  checks += ']';
  return object({{"checks", checks}, {"overall", quote(pass() ? "pass" : "fail")}, {"schema", "1"}}) + "\n";
}

std::string Report::to_text() const {
  std::string out;
  char buf[512];
  for (const auto& e : entries_) {
    std::snprintf(buf, sizeof buf, "%-4s %-20s %-32s residual %.3e %s %.1e  (%d samples)%s%s\n", e.pass() ? "ok" : "FAIL",
                  e.model.c_str(), e.id.c_str(), e.residual, e.comparator == Comparator::kLessEqual ? "<=" : ">=",
                  e.threshold, e.samples, e.note.empty() ? "" : "  ", e.note.c_str());
    out += buf;
  }
  out += pass() ? "overall: pass\n" : "overall: fail\n";
  return out;
}

}  // namespace plectic
