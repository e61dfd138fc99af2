#include <fstream>
#include <sstream>

#include "crrd/harness.hpp"
#include "crrd/json_io.hpp"

namespace crrd::harness {

namespace {

std::vector<double> split_numbers(const std::string& text, std::vector<std::string>* words = nullptr) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const double v = std::stod(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            if (!words) throw SpecError("not a number: '" + item + "'");
            words->push_back(item);
        }
    }
    return out;
}

CustomModel load_custom(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SpecError("cannot read model file " + path);
    try {
        const auto doc = nlohmann::json::parse(in);
        CustomModel m{io::source_from_json(doc.at("source")), io::metric_from_json(doc.at("metric1")),
                      io::metric_from_json(doc.at("metric2")), std::nullopt, std::nullopt, path};
        if (doc.contains("enc_metric1")) m.me1 = io::metric_from_json(doc.at("enc_metric1"));
        if (doc.contains("enc_metric2")) m.me2 = io::metric_from_json(doc.at("enc_metric2"));
        return m;
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError("bad model file " + path + ": " + e.what());
    }
}

bool finite_alphabet(const Model& m) { return !std::holds_alternative<GaussianModel>(m); }

} // namespace

std::vector<double> Sweep::values() const {
    std::vector<double> v;
    if (count == 1) return {from};
    for (std::size_t i = 0; i < count; ++i)
        v.push_back(from + (to - from) * static_cast<double>(i) / static_cast<double>(count - 1));
    return v;
}

Kind parse_kind(const std::string& s) {
    static const std::pair<const char*, Kind> table[] = {
        {"point-cr", Kind::point_cr}, {"hb-cr", Kind::hb_cr},     {"coop-cr", Kind::coop_cr},
        {"cascade-cr", Kind::cascade_cr}, {"conr", Kind::conr},   {"hb-nocr", Kind::hb_nocr},
        {"wz", Kind::wz},             {"degradedness", Kind::degradedness}};
    for (const auto& [name, k] : table)
        if (s == name) return k;
    throw SpecError("unknown problem kind '" + s + "'");
}

std::string to_string(Kind k) {
    switch (k) {
    case Kind::point_cr: return "point-cr";
    case Kind::hb_cr: return "hb-cr";
    case Kind::coop_cr: return "coop-cr";
    case Kind::cascade_cr: return "cascade-cr";
    case Kind::conr: return "conr";
    case Kind::hb_nocr: return "hb-nocr";
    case Kind::wz: return "wz";
    case Kind::degradedness: return "degradedness";
    }
    return "?";
}

Solver parse_solver(const std::string& s) {
    if (s == "closed" || s == "closed_form" || s == "closed-form") return Solver::closed_form;
    if (s == "grid") return Solver::grid;
    if (s == "descent") return Solver::descent;
    if (s == "both") return Solver::both;
    throw SpecError("unknown solver '" + s + "'");
}

std::string to_string(Solver s) {
    switch (s) {
    case Solver::closed_form: return "closed_form";
    case Solver::grid: return "grid";
    case Solver::descent: return "descent";
    case Solver::both: return "both";
    }
    return "?";
}

Model parse_model(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw SpecError("model must look like family:params");
    const std::string family = text.substr(0, colon), rest = text.substr(colon + 1);
    if (family == "gaussian") {
        const auto v = split_numbers(rest);
        if (v.size() != 3) throw SpecError("gaussian model needs S,N1,N2");
        return GaussianModel{{v[0], v[1], v[2]}};
    }
    if (family == "binary") {
        std::vector<std::string> words;
        const auto v = split_numbers(rest, &words);
        if (v.size() != 2 || words.size() > 1) throw SpecError("binary model needs P1,P2[,hamming|erasure]");
        BinaryModel m{{v[0], v[1]}};
        if (!words.empty()) {
            if (words[0] == "hamming")
                m.metric = closed::BinaryMetric::hamming;
            else if (words[0] == "erasure")
                m.metric = closed::BinaryMetric::erasure;
            else
                throw SpecError("binary metric must be hamming or erasure");
        }
        return m;
    }
    if (family == "custom") return load_custom(rest);
    throw SpecError("unknown model family '" + family + "'");
}

Sweep parse_sweep(const std::string& text) {
    std::stringstream ss(text);
    std::vector<std::string> parts;
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 4) throw SpecError("sweep must be var:from:to:count");
    Sweep s;
    s.var = parts[0];
    try {
        s.from = std::stod(parts[1]);
        s.to = std::stod(parts[2]);
        const long c = std::stol(parts[3]);
        if (c < 1) throw SpecError("sweep count must be positive");
        s.count = static_cast<std::size_t>(c);
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception&) {
        throw SpecError("sweep bounds must be numbers");
    }
    if (s.var != "d1" && s.var != "d2" && s.var != "de") throw SpecError("sweep variable must be d1, d2 or de");
    return s;
}

void ProblemSpec::validate() const {
    if (std::holds_alternative<GaussianModel>(model)) {
        try {
            std::get<GaussianModel>(model).spec.validate();
        } catch (const std::invalid_argument& e) {
            throw SpecError(e.what());
        }
    }
    if (const auto* b = std::get_if<BinaryModel>(&model)) {
        try {
            b->spec.validate();
        } catch (const std::invalid_argument& e) {
            throw SpecError(e.what());
        }
    }
    const bool finite = finite_alphabet(model);
    const bool closed_ok = !std::holds_alternative<CustomModel>(model);
    switch (kind) {
    case Kind::degradedness:
        if (!finite) throw SpecError("degradedness needs a finite-alphabet model");
        return;
    case Kind::conr:
    case Kind::hb_nocr:
    case Kind::wz:
        if (!finite) throw SpecError(to_string(kind) + " is solved by enumeration and needs a finite-alphabet model");
        if (solver == Solver::closed_form || solver == Solver::descent)
            throw SpecError(to_string(kind) + " has no closed form here; use --solver grid");
        break;
    default:
        if (solver == Solver::closed_form && !closed_ok) throw SpecError("closed forms exist only for gaussian/binary");
        if (solver == Solver::both && !closed_ok) throw SpecError("solver both compares with a closed form");
        if (solver != Solver::closed_form && !finite)
            throw SpecError("numerical solvers need a finite-alphabet model");
        break;
    }
    if (!(grid_step() > 0.0 && grid_step() <= 1.0) || !(region_step > 0.0 && region_step <= 1.0))
        throw SpecError("grid step must lie in (0, 1]");
    if (restarts < 0) throw SpecError("restarts must be nonnegative");
    if (caps.u1 == 0 || caps.u2 == 0) throw SpecError("caps must be positive");
    if (!(budgets.d1 >= 0.0) || !(budgets.d2 >= 0.0) || !(de1 >= 0.0) || !(de2 >= 0.0))
        throw SpecError("budgets must be nonnegative");
    if (sweep && sweep->var == "de" && kind != Kind::conr) throw SpecError("sweep over de applies to conr only");
}

ProblemSpec spec_from_json(const nlohmann::json& doc, ProblemSpec base) {
    try {
        if (doc.contains("kind")) base.kind = parse_kind(doc.at("kind").get<std::string>());
        if (doc.contains("model")) base.model = parse_model(doc.at("model").get<std::string>());
        if (doc.contains("d1")) base.budgets.d1 = doc.at("d1").get<double>();
        if (doc.contains("d2")) base.budgets.d2 = doc.at("d2").get<double>();
        if (doc.contains("de1")) base.de1 = doc.at("de1").get<double>();
        if (doc.contains("de2")) base.de2 = doc.at("de2").get<double>();
        if (doc.contains("solver")) base.solver = parse_solver(doc.at("solver").get<std::string>());
        if (doc.contains("sweep")) base.sweep = parse_sweep(doc.at("sweep").get<std::string>());
        if (doc.contains("step")) base.step = doc.at("step").get<double>();
        if (doc.contains("region_step")) base.region_step = doc.at("region_step").get<double>();
        if (doc.contains("restarts")) base.restarts = doc.at("restarts").get<int>();
        if (doc.contains("seed")) base.seed = doc.at("seed").get<std::uint64_t>();
        if (doc.contains("caps")) {
            const auto c = doc.at("caps").get<std::vector<std::size_t>>();
            if (c.size() != 2) throw SpecError("caps must list two sizes");
            base.caps = {c[0], c[1]};
        }
        if (doc.contains("guard")) base.guard = doc.at("guard").get<std::uint64_t>();
        if (doc.contains("map_budget")) base.map_budget = doc.at("map_budget").get<std::uint64_t>();
        if (doc.contains("timing")) base.timing = doc.at("timing").get<bool>();
    } catch (const SpecError&) {
        throw;
    } catch (const std::exception& e) {
        throw SpecError(std::string("bad spec document: ") + e.what());
    }
    return base;
}

nlohmann::json to_json(const ProblemSpec& spec) {
    nlohmann::json j;
    j["kind"] = to_string(spec.kind);
    std::visit(
        [&](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, GaussianModel>) {
                j["model"] = {{"family", "gaussian"},
                              {"sigma_x2", m.spec.sigma_x2},
                              {"n1", m.spec.n1},
                              {"n2", m.spec.n2}};
            } else if constexpr (std::is_same_v<T, BinaryModel>) {
                j["model"] = {{"family", "binary"},
                              {"p1", m.spec.p1},
                              {"p2", m.spec.p2},
                              {"metric", m.metric == closed::BinaryMetric::hamming ? "hamming" : "erasure"}};
            } else {
                j["model"] = {{"family", "custom"}, {"path", m.path}, {"source", io::to_json(m.source)}};
            }
        },
        spec.model);
    j["d1"] = spec.budgets.d1;
    j["d2"] = spec.budgets.d2;
    if (spec.kind == Kind::conr) {
        j["de1"] = spec.de1;
        j["de2"] = spec.de2;
    }
    j["solver"] = to_string(spec.solver);
    if (spec.sweep)
        j["sweep"] = {{"var", spec.sweep->var}, {"from", spec.sweep->from}, {"to", spec.sweep->to},
                      {"count", spec.sweep->count}};
    j["step"] = spec.grid_step();
    j["region_step"] = spec.region_step;
    j["restarts"] = spec.restarts;
    j["seed"] = spec.seed;
    j["caps"] = {spec.caps.u1, spec.caps.u2};
    return j;
}

} // namespace crrd::harness
