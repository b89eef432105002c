#pragma once

#include <algorithm>
#include <cstddef>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace mslab {

enum class Severity {
  required,      // failure fails the report
  informational, // recorded, never fails the report
};

/// Outcome of one law. A failing verdict carries the lexicographically
/// first counterexample found (element indices in the checked structure).
struct LawVerdict {
  std::string law;
  bool passed = true;
  std::vector<std::size_t> witness;
  std::string detail;
  Severity severity = Severity::required;
};

class LawReport {
public:
  void pass(std::string law, std::string detail = {}) {
    verdicts_.push_back({std::move(law), true, {}, std::move(detail)});
  }

  void fail(std::string law, std::vector<std::size_t> witness,
            std::string detail = {}) {
    verdicts_.push_back(
        {std::move(law), false, std::move(witness), std::move(detail)});
  }

  void note(std::string law, bool holds, std::vector<std::size_t> witness = {},
            std::string detail = {}) {
    verdicts_.push_back({std::move(law), holds,
                         holds ? std::vector<std::size_t>{} : std::move(witness),
                         std::move(detail), Severity::informational});
  }

  void add(LawVerdict v) { verdicts_.push_back(std::move(v)); }

  void merge(const LawReport &other, const std::string &prefix = {}) {
    for (LawVerdict v : other.verdicts_) {
      if (!prefix.empty())
        v.law = prefix + v.law;
      verdicts_.push_back(std::move(v));
    }
  }

  bool passed() const {
    return std::all_of(verdicts_.begin(), verdicts_.end(), [](const auto &v) {
      return v.passed || v.severity == Severity::informational;
    });
  }

  const LawVerdict *find(const std::string &law) const {
    auto it = std::find_if(verdicts_.begin(), verdicts_.end(),
                           [&](const auto &v) { return v.law == law; });
    return it == verdicts_.end() ? nullptr : &*it;
  }

  // Verdict of a named law; a missing law counts as not passed.
  bool holds(const std::string &law) const {
    const LawVerdict *v = find(law);
    return v != nullptr && v->passed;
  }

  const std::vector<LawVerdict> &verdicts() const { return verdicts_; }

private:
  std::vector<LawVerdict> verdicts_;
};

inline std::ostream &operator<<(std::ostream &os, const LawVerdict &v) {
  os << (v.passed ? "PASS " : (v.severity == Severity::informational ? "NOTE " : "FAIL "))
     << v.law;
  if (!v.witness.empty()) {
    os << " witness=(";
    for (std::size_t i = 0; i < v.witness.size(); ++i)
      os << (i ? "," : "") << v.witness[i];
    os << ")";
  }
  if (!v.detail.empty())
    os << " : " << v.detail;
  return os;
}

inline std::ostream &operator<<(std::ostream &os, const LawReport &r) {
  for (const auto &v : r.verdicts())
    os << v << '\n';
  return os;
}

} // namespace mslab
