#pragma once

// Problem descriptions, dispatch to the solvers, and CSV/JSON output for
// the command-line tool.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "crrd/aux_search.hpp"
#include "crrd/closed_forms.hpp"
#include "crrd/prob_core.hpp"

namespace crrd::harness {

/// Invalid or inconsistent problem description (exit code 2).
class SpecError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Kind { point_cr, hb_cr, coop_cr, cascade_cr, conr, hb_nocr, wz, degradedness };
enum class Solver { closed_form, grid, descent, both };

struct GaussianModel {
    prob::GaussianSpec spec;
};
struct BinaryModel {
    prob::BinaryErasureSpec spec;
    closed::BinaryMetric metric = closed::BinaryMetric::hamming;
};
struct CustomModel {
    prob::JointSource source;
    prob::DistortionMetric m1;
    prob::DistortionMetric m2;
    std::optional<prob::DistortionMetric> me1, me2; // encoder metrics for ConR
    std::string path;
};
using Model = std::variant<GaussianModel, BinaryModel, CustomModel>;

struct Sweep {
    std::string var; // d1, d2 or de
    double from = 0.0;
    double to = 0.0;
    std::size_t count = 1;

    std::vector<double> values() const;
};

struct ProblemSpec {
    Kind kind = Kind::hb_cr;
    Model model = BinaryModel{{1.0, 0.35}};
    closed::DistortionPair budgets{0.1, 0.05};
    double de1 = 0.0;
    double de2 = 0.0;
    Solver solver = Solver::closed_form;
    std::optional<Sweep> sweep;
    std::optional<double> step; // unset: grid_step()
    double region_step = 0.05;
    int restarts = 20;
    std::uint64_t seed = 1;
    rd::AuxCaps caps{2, 2};
    std::uint64_t guard = 1'000'000'000ULL;
    std::uint64_t map_budget = 1'000'000ULL;
    bool timing = false;

    /// 0.02, or 0.05 for conr whose encoder maps are searched jointly with the channel.
    double grid_step() const { return step.value_or(kind == Kind::conr ? 0.05 : 0.02); }

    /// Throws SpecError on combinations no solver accepts.
    void validate() const;
};

Kind parse_kind(const std::string& s);
Solver parse_solver(const std::string& s);
std::string to_string(Kind k);
std::string to_string(Solver s);

/// gaussian:S,N1,N2 | binary:P1,P2[,hamming|erasure] | custom:PATH
Model parse_model(const std::string& text);
Sweep parse_sweep(const std::string& text);

/// Fields mirror the command-line flags; absent fields keep `base`.
ProblemSpec spec_from_json(const nlohmann::json& doc, ProblemSpec base = {});
nlohmann::json to_json(const ProblemSpec& spec);

struct ResultRow {
    std::string series;
    std::string sweep_var = "point";
    double value = 0.0;
    std::optional<double> rate;
    std::optional<double> r1, r2;
    bool r2_unbounded = false;
    std::string solver;
    std::string flag;
    std::string provenance;
};

enum class Layout { scalar, region, figure6, figure8, verdict };

struct ResultDocument {
    Layout layout = Layout::scalar;
    nlohmann::json inputs;
    nlohmann::json metadata;
    nlohmann::json extra; // degradedness verdict and kernel
    std::vector<ResultRow> rows;
    std::optional<double> wall_time_s;
};

ResultDocument run(const ProblemSpec& spec);

struct FigureOptions {
    double step = 0.02;
    std::size_t points = 11;
    rd::AuxCaps caps{2, 2};
    bool timing = false;
};

/// Data behind the Gaussian (id 6) and binary (id 8) figures.
ResultDocument figure(int id, const FigureOptions& opt = {});

void emit_csv(const ResultDocument& doc, std::ostream& out);
nlohmann::json emit_json(const ResultDocument& doc);

} // namespace crrd::harness
