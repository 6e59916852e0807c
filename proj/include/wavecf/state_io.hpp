#pragma once

// State container and tabular output helpers.
//
// The .wstate container is line-oriented text holding the grid descriptor,
// the physical parameters, and the Fourier coefficients of W and Q as C99
// hex-floats. The text encoding is lossless (parse(format(x)) == x bit for
// bit), so identical states serialize identically and reruns of a pipeline
// are byte-reproducible; reconstructing collocation values from the stored
// coefficients costs one deterministic inverse transform.

#include <fstream>
#include <string>
#include <vector>

#include "wavecf/fields.hpp"

namespace wavecf {

std::string format_hex(double x);   // %a
std::string format_g17(double x);   // %.17g
double parse_double(const std::string& s);  // accepts both forms

void save_state(const std::string& path, const WaveState& s, const PhysParams& p);

struct LoadedState {
    WaveState state;
    PhysParams params;
};
LoadedState load_state(const std::string& path);

// CSV with leading comment lines carrying the schema id and the resolved
// configuration; all numbers printed with 17 significant digits.
class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::string& schema,
              const std::string& resolved_config, const std::vector<std::string>& columns);
    void row(const std::vector<double>& values);
    void raw_row(const std::vector<std::string>& values);

  private:
    std::ofstream out_;
    std::size_t columns_;
};

// Minimal ordered JSON object emitter for the .jsonl outputs.
class JsonRecord {
  public:
    JsonRecord& field(const std::string& key, const std::string& value);
    JsonRecord& field(const std::string& key, const char* value) {
        return field(key, std::string(value));
    }
    JsonRecord& field(const std::string& key, double value);
    JsonRecord& field(const std::string& key, int value);
    JsonRecord& field(const std::string& key, bool value);
    std::string str() const;  // single-line JSON object

  private:
    std::string body_;
};

}  // namespace wavecf
