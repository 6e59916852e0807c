#include "wavecf/state_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace wavecf {

std::string format_hex(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", x);
    return buf;
}

std::string format_g17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s) {
    const char* p = s.c_str();
    char* end = nullptr;
    double x = std::strtod(p, &end);
    if (end == p) throw std::invalid_argument("parse_double: '" + s + "'");
    return x;
}

void save_state(const std::string& path, const WaveState& s, const PhysParams& p) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("save_state: cannot open " + path);
    const SpectralGrid& g = s.grid();
    out << "wavecf-state v1\n";
    out << "n " << g.size() << "\n";
    out << "L " << format_hex(g.period()) << "\n";
    out << "phys " << format_hex(p.g) << " " << format_hex(p.sigma) << " " << format_hex(p.c)
        << "\n";
    auto cw = spectrum(s.surface.field());
    auto cq = spectrum(s.potential.field());
    out << "modes\n";
    for (int m = 0; m < g.size(); ++m)
        out << format_hex(cw[m].real()) << " " << format_hex(cw[m].imag()) << " "
            << format_hex(cq[m].real()) << " " << format_hex(cq[m].imag()) << "\n";
    out << "end\n";
    if (!out) throw std::runtime_error("save_state: write failure on " + path);
}

LoadedState load_state(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_state: cannot open " + path);
    std::string line, word;

    auto next_line = [&]() {
        if (!std::getline(in, line)) throw std::runtime_error("load_state: truncated " + path);
        return std::istringstream(line);
    };

    {
        auto ls = next_line();
        ls >> word;
        std::string version;
        ls >> version;
        if (word != "wavecf-state" || version != "v1")
            throw std::runtime_error("load_state: unrecognized container header");
    }
    int n = 0;
    double period = 0.0;
    PhysParams p;
    {
        auto ls = next_line();
        ls >> word >> n;
        if (word != "n") throw std::runtime_error("load_state: expected n");
    }
    {
        auto ls = next_line();
        std::string v;
        ls >> word >> v;
        if (word != "L") throw std::runtime_error("load_state: expected L");
        period = parse_double(v);
    }
    {
        auto ls = next_line();
        std::string a, b, c;
        ls >> word >> a >> b >> c;
        if (word != "phys") throw std::runtime_error("load_state: expected phys");
        p.g = parse_double(a);
        p.sigma = parse_double(b);
        p.c = parse_double(c);
    }
    {
        auto ls = next_line();
        ls >> word;
        if (word != "modes") throw std::runtime_error("load_state: expected modes");
    }
    SpectralGrid g(n, period);
    std::vector<cplx> cw(n), cq(n);
    for (int m = 0; m < n; ++m) {
        auto ls = next_line();
        std::string a, b, c, d;
        ls >> a >> b >> c >> d;
        cw[m] = cplx(parse_double(a), parse_double(b));
        cq[m] = cplx(parse_double(c), parse_double(d));
    }
    WaveState s(HoloField::checked(from_spectrum(g, cw), 1e-6),
                HoloField::checked(from_spectrum(g, cq), 1e-6));
    return LoadedState{std::move(s), p};
}

CsvWriter::CsvWriter(const std::string& path, const std::string& schema,
                     const std::string& resolved_config, const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
    if (!out_) throw std::runtime_error("CsvWriter: cannot open " + path);
    out_ << "# schema=" << schema << "\n";
    if (!resolved_config.empty()) out_ << "# config " << resolved_config << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i)
        out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
}

void CsvWriter::row(const std::vector<double>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << format_g17(values[i]) << (i + 1 < values.size() ? "," : "\n");
}

void CsvWriter::raw_row(const std::vector<std::string>& values) {
    if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
    for (std::size_t i = 0; i < values.size(); ++i)
        out_ << values[i] << (i + 1 < values.size() ? "," : "\n");
}

namespace {
std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') {
            out += '\\';
            out += c;
        } else if (c == '\n') {
            out += "\\n";
        } else {
            out += c;
        }
    }
    return out;
}
}  // namespace

JsonRecord& JsonRecord::field(const std::string& key, const std::string& value) {
    if (!body_.empty()) body_ += ",";
    body_ += "\"" + json_escape(key) + "\":\"" + json_escape(value) + "\"";
    return *this;
}

JsonRecord& JsonRecord::field(const std::string& key, double value) {
    if (!body_.empty()) body_ += ",";
    std::string v = std::isfinite(value) ? format_g17(value) : "null";
    body_ += "\"" + json_escape(key) + "\":" + v;
    return *this;
}

JsonRecord& JsonRecord::field(const std::string& key, int value) {
    if (!body_.empty()) body_ += ",";
    body_ += "\"" + json_escape(key) + "\":" + std::to_string(value);
    return *this;
}

JsonRecord& JsonRecord::field(const std::string& key, bool value) {
    if (!body_.empty()) body_ += ",";
    body_ += "\"" + json_escape(key) + "\":" + (value ? "true" : "false");
    return *this;
}

std::string JsonRecord::str() const { return "{" + body_ + "}"; }

}  // namespace wavecf
