#include <cstdio>
#include <ostream>

#include "crrd/harness.hpp"

namespace crrd::harness {

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

// Labels stay plain; anything with a separator or quote gets quoted.
std::string field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

void line(std::ostream& out, std::initializer_list<std::string> cells) {
    bool first = true;
    for (const auto& c : cells) {
        if (!first) out << ',';
        out << c;
        first = false;
    }
    out << '\n';
}

} // namespace

void emit_csv(const ResultDocument& doc, std::ostream& out) {
    switch (doc.layout) {
    case Layout::scalar:
        line(out, {"sweep_var", "value", "rate_bits", "solver", "flag"});
        for (const auto& r : doc.rows)
            line(out, {field(r.sweep_var), num(r.value), num(r.rate), field(r.solver), field(r.flag)});
        break;
    case Layout::region:
        line(out, {"sweep_var", "value", "r1_bits", "r2_bits", "solver", "flag", "provenance"});
        for (const auto& r : doc.rows)
            line(out, {field(r.sweep_var), num(r.value), num(r.r1), r.r2_unbounded ? "unbounded" : num(r.r2),
                       field(r.solver), field(r.flag), field(r.provenance)});
        break;
    case Layout::figure6:
        line(out, {"series", "sweep_var", "value", "rate_bits", "solver", "flag"});
        for (const auto& r : doc.rows)
            line(out, {field(r.series), field(r.sweep_var), num(r.value), num(r.rate), field(r.solver),
                       field(r.flag)});
        break;
    case Layout::figure8:
        line(out, {"series", "sweep_var", "value", "rate_bits", "solver", "flag", "external_bits"});
        for (const auto& r : doc.rows)
            line(out, {field(r.series), field(r.sweep_var), num(r.value), num(r.rate), field(r.solver),
                       field(r.flag), ""});
        break;
    case Layout::verdict: {
        const auto& e = doc.extra;
        line(out, {"feasible", "violation", "ny1", "ny2"});
        line(out, {e.at("feasible").get<bool>() ? "true" : "false", num(e.at("violation").get<double>()),
                   std::to_string(e.at("ny1").get<std::size_t>()), std::to_string(e.at("ny2").get<std::size_t>())});
        break;
    }
    }
}

nlohmann::json emit_json(const ResultDocument& doc) {
    nlohmann::json j;
    j["inputs"] = doc.inputs;
    j["metadata"] = doc.metadata.is_null() ? nlohmann::json::object() : doc.metadata;
    if (doc.layout == Layout::verdict) {
        j["verdict"] = doc.extra;
    } else {
        auto& rows = j["rows"] = nlohmann::json::array();
        for (const auto& r : doc.rows) {
            nlohmann::json o{{"sweep_var", r.sweep_var}, {"value", r.value}, {"solver", r.solver}};
            if (!r.series.empty()) o["series"] = r.series;
            if (r.rate) o["rate_bits"] = *r.rate;
            if (r.r1) o["r1_bits"] = *r.r1;
            if (r.r2) o["r2_bits"] = *r.r2;
            if (doc.layout == Layout::region) o["r2_unbounded"] = r.r2_unbounded;
            if (!r.flag.empty()) o["flag"] = r.flag;
            if (!r.provenance.empty()) o["provenance"] = r.provenance;
            if (doc.layout == Layout::figure8) o["external_bits"] = nullptr;
            rows.push_back(std::move(o));
        }
    }
    if (doc.wall_time_s) j["wall_time_s"] = *doc.wall_time_s;
    return j;
}

} // namespace crrd::harness
