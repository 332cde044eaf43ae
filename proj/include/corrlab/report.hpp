#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrlab/correlation.hpp"
#include "corrlab/gaussian.hpp"

namespace corrlab::report {

using nlohmann::json;

inline constexpr const char* kToolVersion = "corrlab 0.1.0";

// locale-independent double formatting for CSV cells
inline std::string format_double(double v) {
    char buf[40];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

// RFC-style CSV: header row, quoting only where needed, '.' decimal separator.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> cells) { rows_.push_back(std::move(cells)); }

    std::string str() const {
        std::string out;
        emit_row(out, header_);
        for (const auto& r : rows_) emit_row(out, r);
        return out;
    }

    void write(const std::string& path) const {
        std::ofstream f(path, std::ios::binary);
        f << str();
    }

private:
    static void emit_row(std::string& out, const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out += ',';
            const std::string& c = cells[i];
            if (c.find_first_of(",\"\n") != std::string::npos) {
                out += '"';
                for (char ch : c) {
                    if (ch == '"') out += '"';
                    out += ch;
                }
                out += '"';
            } else {
                out += c;
            }
        }
        out += '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline std::uint64_t fnv1a_digest(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

struct RunManifest {
    std::string command_line;
    json params;
    std::uint64_t seed = 0;
    std::uint64_t samples = 0;
    double wall_clock_seconds = 0.0;
    std::uint64_t output_digest = 0;

    json to_json() const {
        json j;
        j["command_line"] = command_line;
        j["params"] = params;
        j["seed"] = seed;
        j["samples"] = samples;
        j["tool_version"] = kToolVersion;
        j["wall_clock_seconds"] = wall_clock_seconds;
        j["output_digest"] = output_digest;
        return j;
    }
};

inline json to_json(const Hypotheses& h) {
    return json{{"monotone_f", h.monotone_f},
                {"monotone_g", h.monotone_g},
                {"norm_f", h.norm_f},
                {"norm_g", h.norm_g},
                {"normalized", h.normalized}};
}

inline json sweep_to_json(const std::vector<std::pair<double, double>>& sweep) {
    json arr = json::array();
    for (const auto& [rho, q] : sweep) arr.push_back(json{{"rho", rho}, {"q", q}});
    return arr;
}

inline json to_json(const CorrelationReport& r, const std::string& space_spec, const std::string& f_spec,
                    const std::string& g_spec) {
    json j;
    j["space"] = space_spec;
    j["f"] = f_spec;
    j["g"] = g_spec;
    j["gap"] = r.gap;
    j["a_jstar"] = r.a_jstar;
    j["phi"] = r.phi_value;
    j["psi"] = r.psi_value;
    j["ratio"] = r.ratio;
    j["sweep"] = sweep_to_json(r.sweep);
    j["sweep_monotone"] = r.sweep_monotone;
    j["hypotheses"] = to_json(r.hypotheses);
    j["hypotheses_met"] = r.hypotheses_met;
    j["vacuous"] = r.vacuous;
    j["verdict"] = r.verdict;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline json to_json(const mc::McEstimate& e) {
    return json{{"value", e.value}, {"stderr", e.std_error}, {"samples", e.samples}};
}

inline json to_json(const gaussian::GciReport& r) {
    json j;
    j["gap"] = to_json(r.gap);
    j["a2"] = json{{"value", r.a2}, {"stderr", r.a2_stderr}};
    j["a2_frobenius"] = r.a2_frobenius;
    j["phi"] = r.phi_value;
    j["ratio"] = r.ratio;
    j["kind_f"] = r.kind_f;
    j["kind_g"] = r.kind_g;
    json sweep = json::array();
    for (std::size_t i = 0; i < r.sweep.size(); ++i)
        sweep.push_back(json{{"rho", r.sweep[i].first}, {"q", r.sweep[i].second}, {"stderr", r.sweep_stderr[i]}});
    j["sweep"] = sweep;
    j["sweep_monotone_within_error"] = r.sweep_monotone_within_error;
    j["verdicts"] = json{{"gap_nonneg", r.gap_nonneg}, {"a2_nonneg", r.a2_nonneg}};
    return j;
}

inline json to_json(const gaussian::BallsExperiment& e) {
    json j;
    j["eps"] = e.eps;
    j["dim"] = e.n;
    j["r1"] = e.r1;
    j["r2"] = e.r2;
    j["exact_gap"] = e.exact_gap;
    j["a2"] = json{{"value", e.a2}, {"stderr", e.a2_stderr}};
    j["phi"] = e.phi_value;
    j["ratio"] = e.ratio;
    j["a2_lower_ok"] = e.a2_lower_ok;
    j["samples"] = e.samples;
    j["seed"] = e.seed;
    return j;
}

}  // namespace corrlab::report
