#include "wavecf/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wavecf {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace

Config Config::parse_string(const std::string& text) {
    Config cfg;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError("config line " + std::to_string(lineno) + ": unterminated section");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError("config line " + std::to_string(lineno) + ": empty section name");
            continue;
        }
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.kv_[section.empty() ? key : section + "." + key] = value;
    }
    return cfg;
}

Config Config::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_string(buf.str());
}

double Config::get_real(const std::string& key, double fallback) const {
    auto it = kv_.find(key);
    double v = fallback;
    if (it != kv_.end()) {
        char* end = nullptr;
        v = std::strtod(it->second.c_str(), &end);
        if (end == it->second.c_str() || *end != '\0')
            throw ConfigError("config key " + key + ": not a real number: " + it->second);
    }
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    resolved_[key] = buf;
    return v;
}

int Config::get_int(const std::string& key, int fallback) const {
    auto it = kv_.find(key);
    long v = fallback;
    if (it != kv_.end()) {
        char* end = nullptr;
        v = std::strtol(it->second.c_str(), &end, 10);
        if (end == it->second.c_str() || *end != '\0')
            throw ConfigError("config key " + key + ": not an integer: " + it->second);
    }
    resolved_[key] = std::to_string(v);
    return static_cast<int>(v);
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    auto it = kv_.find(key);
    std::string v = it != kv_.end() ? it->second : fallback;
    resolved_[key] = v;
    return v;
}

bool Config::get_flag(const std::string& key, bool fallback) const {
    auto it = kv_.find(key);
    bool v = fallback;
    if (it != kv_.end()) {
        const std::string& s = it->second;
        if (s == "true" || s == "1" || s == "yes" || s == "on")
            v = true;
        else if (s == "false" || s == "0" || s == "no" || s == "off")
            v = false;
        else
            throw ConfigError("config key " + key + ": not a flag: " + s);
    }
    resolved_[key] = v ? "true" : "false";
    return v;
}

std::vector<double> Config::get_list(const std::string& key, std::vector<double> fallback) const {
    auto it = kv_.find(key);
    std::vector<double> v;
    if (it == kv_.end()) {
        v = std::move(fallback);
    } else {
        std::string s = it->second;
        for (char& c : s)
            if (c == ',') c = ' ';
        std::istringstream in(s);
        std::string tok;
        while (in >> tok) {
            char* end = nullptr;
            double x = std::strtod(tok.c_str(), &end);
            if (end == tok.c_str() || *end != '\0')
                throw ConfigError("config key " + key + ": bad list entry: " + tok);
            v.push_back(x);
        }
        if (v.empty()) throw ConfigError("config key " + key + ": empty list");
    }
    std::string dump;
    for (double x : v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.17g", x);
        if (!dump.empty()) dump += ",";
        dump += buf;
    }
    resolved_[key] = dump;
    return v;
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [k, v] : kv_)
        if (!resolved_.count(k)) out.push_back(k);
    return out;
}

std::string Config::resolved() const {
    std::string out;
    for (const auto& [k, v] : resolved_) {
        if (!out.empty()) out += " ";
        out += k + "=" + v;
    }
    return out;
}

}  // namespace wavecf
