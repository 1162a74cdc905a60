#pragma once

// Shared check-report plumbing: a report is an ordered list of named
// verdicts, each optionally carrying a witness string for failures.

#include <string>
#include <vector>

namespace entwine {

struct CheckItem {
  std::string name;
  bool ok = true;
  std::string witness;  // empty on pass
};

struct Report {
  std::vector<CheckItem> items;

  bool ok() const {
    for (const auto& it : items)
      if (!it.ok) return false;
    return true;
  }
  void pass(const std::string& name) { items.push_back({name, true, ""}); }
  void fail(const std::string& name, const std::string& witness) {
    items.push_back({name, false, witness});
  }
  void check(const std::string& name, bool ok, const std::string& witness) {
    items.push_back({name, ok, ok ? "" : witness});
  }
  // like check, but the detail string is kept on success too
  void note(const std::string& name, bool ok, const std::string& detail) {
    items.push_back({name, ok, detail});
  }
  void merge(const Report& other, const std::string& prefix = "") {
    for (const auto& it : other.items)
      items.push_back({prefix + it.name, it.ok, it.witness});
  }
  const CheckItem* find(const std::string& name) const {
    for (const auto& it : items)
      if (it.name == name) return &it;
    return nullptr;
  }
};

}  // namespace entwine
