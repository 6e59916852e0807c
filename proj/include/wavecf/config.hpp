#pragma once

// Flat key-value configuration with INI-style sections. Keys are addressed
// as "section.key". Every getter records the resolved value (supplied or
// default), so a run can emit its full effective configuration, and keys
// that were never consumed are reported as errors.

#include <map>
#include <string>
#include <vector>

#include "wavecf/errors.hpp"

namespace wavecf {

class Config {
  public:
    Config() = default;
    static Config parse_file(const std::string& path);
    static Config parse_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { kv_[key] = value; }
    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double get_real(const std::string& key, double fallback) const;
    int get_int(const std::string& key, int fallback) const;
    std::string get_string(const std::string& key, const std::string& fallback) const;
    bool get_flag(const std::string& key, bool fallback) const;
    // comma- or space-separated reals
    std::vector<double> get_list(const std::string& key, std::vector<double> fallback) const;

    // keys present in the file but never consumed by any getter
    std::vector<std::string> unused_keys() const;
    // canonical "k=v k=v ..." dump of every resolved (consumed) key
    std::string resolved() const;

  private:
    std::map<std::string, std::string> kv_;
    mutable std::map<std::string, std::string> resolved_;
};

}  // namespace wavecf
