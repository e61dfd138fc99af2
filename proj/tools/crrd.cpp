#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "crrd/errors.hpp"
#include "crrd/harness.hpp"

namespace h = crrd::harness;

namespace {

struct Flags {
    std::string spec_file, model, sweep, solver, out, format = "csv";
    double d1 = 0, d2 = 0, de1 = 0, de2 = 0, de = 0, step = 0, region_step = 0;
    int restarts = 0;
    std::uint64_t seed = 0, guard = 0, map_budget = 0;
    std::vector<std::size_t> caps;
    int id = 0;
    std::size_t points = 11;
    bool timing = false;
};

void add_common(CLI::App* sub, Flags& f, std::map<std::string, CLI::Option*>& opts) {
    opts["spec"] = sub->add_option("--spec", f.spec_file, "JSON problem file");
    opts["model"] = sub->add_option("--model", f.model, "gaussian:S,N1,N2 | binary:P1,P2[,hamming|erasure] | custom:PATH");
    opts["d1"] = sub->add_option("--d1", f.d1, "distortion budget at decoder 1");
    opts["d2"] = sub->add_option("--d2", f.d2, "distortion budget at decoder 2");
    opts["de1"] = sub->add_option("--de1", f.de1, "encoder-side budget for decoder 1 (conr)");
    opts["de2"] = sub->add_option("--de2", f.de2, "encoder-side budget for decoder 2 (conr)");
    opts["de"] = sub->add_option("--de", f.de, "sets --de1 and --de2 together");
    opts["sweep"] = sub->add_option("--sweep", f.sweep, "var:from:to:count with var in d1, d2, de");
    opts["solver"] = sub->add_option("--solver", f.solver, "closed | grid | descent | both");
    opts["step"] = sub->add_option("--step", f.step, "grid step, 1/n");
    opts["region-step"] = sub->add_option("--region-step", f.region_step, "grid step for region sampling");
    opts["restarts"] = sub->add_option("--restarts", f.restarts, "random descent restarts");
    opts["seed"] = sub->add_option("--seed", f.seed, "RNG seed");
    opts["caps"] = sub->add_option("--caps", f.caps, "auxiliary alphabet sizes U1 U2")->expected(2)->delimiter(',');
    opts["guard"] = sub->add_option("--guard", f.guard, "largest grid enumeration allowed");
    opts["map-budget"] = sub->add_option("--map-budget", f.map_budget, "decoder-map combinations before the greedy fallback");
}

h::ProblemSpec build_spec(h::Kind kind, const Flags& f, std::map<std::string, CLI::Option*>& o) {
    h::ProblemSpec s;
    s.kind = kind;
    if (*o["spec"]) {
        std::ifstream in(f.spec_file);
        if (!in) throw h::SpecError("cannot read spec file " + f.spec_file);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(in);
        } catch (const std::exception& e) {
            throw h::SpecError(std::string("spec file is not JSON: ") + e.what());
        }
        s = h::spec_from_json(doc, s);
        if (doc.contains("kind") && s.kind != kind)
            throw h::SpecError("spec file kind '" + h::to_string(s.kind) + "' does not match the subcommand");
    }
    if (*o["model"]) s.model = h::parse_model(f.model);
    if (*o["d1"]) s.budgets.d1 = f.d1;
    if (*o["d2"]) s.budgets.d2 = f.d2;
    if (*o["de"]) s.de1 = s.de2 = f.de;
    if (*o["de1"]) s.de1 = f.de1;
    if (*o["de2"]) s.de2 = f.de2;
    if (*o["sweep"]) s.sweep = h::parse_sweep(f.sweep);
    if (*o["solver"]) s.solver = h::parse_solver(f.solver);
    if (*o["step"]) s.step = f.step;
    if (*o["region-step"]) s.region_step = f.region_step;
    if (*o["restarts"]) s.restarts = f.restarts;
    if (*o["seed"]) s.seed = f.seed;
    if (*o["caps"]) s.caps = {f.caps.at(0), f.caps.at(1)};
    if (*o["guard"]) s.guard = f.guard;
    if (*o["map-budget"]) s.map_budget = f.map_budget;
    if (f.timing) s.timing = true;
    // Enumeration-only kinds default to the grid.
    if ((kind == h::Kind::conr || kind == h::Kind::hb_nocr || kind == h::Kind::wz) && !*o["solver"] &&
        !(*o["spec"] && s.solver != h::Solver::closed_form))
        s.solver = h::Solver::grid;
    return s;
}

void write(const h::ResultDocument& doc, const Flags& f) {
    std::ostringstream buf;
    if (f.format == "json")
        buf << h::emit_json(doc).dump(2) << '\n';
    else
        h::emit_csv(doc, buf);
    if (f.out.empty()) {
        std::cout << buf.str();
        return;
    }
    std::ofstream out(f.out, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + f.out);
    out << buf.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-distortion functions and regions under reconstruction constraints"};
    app.require_subcommand(1);
    Flags f;

    const std::pair<const char*, const char*> kinds[] = {
        {"point-cr", "point-to-point rate with common reconstruction (decoder 2 side)"},
        {"hb-cr", "two-decoder rate with common reconstruction"},
        {"coop-cr", "cooperative two-rate region"},
        {"cascade-cr", "cascade two-rate region"},
        {"conr", "constrained reconstruction, enumerated auxiliaries"},
        {"hb-nocr", "two-decoder rate without reconstruction constraint"},
        {"wz", "side-information rate without reconstruction constraint"},
        {"degradedness", "stochastic degradedness verdict and kernel"}};
    std::map<std::string, std::map<std::string, CLI::Option*>> opts;
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : kinds) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, f, opts[name]);
        sub->add_option("--out", f.out, "output file (default stdout)");
        sub->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_flag("--timing", f.timing, "record wall time");
        subs[name] = sub;
    }
    auto* fig = app.add_subcommand("figure", "data behind the Gaussian (6) and binary (8) figures");
    fig->add_option("--id", f.id, "6 or 8")->required();
    auto* fig_step = fig->add_option("--step", f.step, "grid step of the brute-force curve");
    auto* fig_caps = fig->add_option("--caps", f.caps, "auxiliary alphabet sizes")->expected(2)->delimiter(',');
    fig->add_option("--points", f.points, "D1 points per curve (figure 8)");
    fig->add_option("--out", f.out, "output file (default stdout)");
    fig->add_option("--format", f.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
    fig->add_flag("--timing", f.timing, "record wall time");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (fig->parsed()) {
            h::FigureOptions fo;
            if (*fig_step) fo.step = f.step;
            if (*fig_caps) fo.caps = {f.caps.at(0), f.caps.at(1)};
            fo.points = f.points;
            fo.timing = f.timing;
            write(h::figure(f.id, fo), f);
            return 0;
        }
        for (const auto& [name, sub] : subs) {
            if (!sub->parsed()) continue;
            const auto spec = build_spec(h::parse_kind(name), f, opts[name]);
            write(h::run(spec), f);
        }
        return 0;
    } catch (const crrd::InfeasibleBudget& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return 3;
    } catch (const crrd::GuardExceeded& e) {
        std::cerr << "guard exceeded: " << e.what() << '\n';
        return 4;
    } catch (const std::invalid_argument& e) {
        std::cerr << "spec error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
