/**
 * @file cache.hpp
 * @brief Tiny shared key/value disk cache for expensive exact computations
 *        (stratum moments, Hecke tables).  One "key\tvalue" line per entry.
 */
#pragma once

#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

namespace qmds {

/// Process-wide cache.  Purely in-memory until open() is called with a path;
/// thereafter entries are loaded from and appended to that file.  Keys must
/// not contain tabs or newlines.
class DiskCache {
 public:
  static DiskCache& instance() {
    static DiskCache c;
    return c;
  }

  void open(const std::string& path) {
    std::lock_guard<std::mutex> lock(mu_);
    path_ = path;
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
      size_t tab = line.find('\t');
      if (tab == std::string::npos) continue;
      mem_[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }

  std::optional<std::string> get(const std::string& key) const {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = mem_.find(key);
    if (it == mem_.end()) return std::nullopt;
    return it->second;
  }

  void put(const std::string& key, const std::string& value) {
    std::lock_guard<std::mutex> lock(mu_);
    auto [it, inserted] = mem_.emplace(key, value);
    if (!inserted) return;
    if (!path_.empty()) {
      std::ofstream out(path_, std::ios::app);
      out << key << '\t' << value << '\n';
    }
  }

 private:
  DiskCache() = default;
  mutable std::mutex mu_;
  std::map<std::string, std::string> mem_;
  std::string path_;
};

}  // namespace qmds
