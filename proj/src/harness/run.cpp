#include <chrono>
#include <cmath>

#include "crrd/aux_search.hpp"
#include "crrd/harness.hpp"
#include "crrd/hb_solvers.hpp"
#include "crrd/regions.hpp"

namespace crrd::harness {

namespace {

struct Finite {
    prob::JointSource source;
    prob::DistortionMetric m1, m2, me1, me2;
    std::optional<prob::BinaryErasureSpec> binary;
    closed::BinaryMetric metric = closed::BinaryMetric::hamming;
};

Finite materialize(const Model& model) {
    if (const auto* b = std::get_if<BinaryModel>(&model)) {
        const auto m = b->metric == closed::BinaryMetric::hamming ? prob::DistortionMetric::hamming(2)
                                                                  : prob::DistortionMetric::binary_erasure();
        const auto me = prob::DistortionMetric::hamming(m.cols());
        return {prob::build_erased_source(b->spec), m, m, me, me, b->spec, b->metric};
    }
    if (const auto* c = std::get_if<CustomModel>(&model)) {
        const auto me1 = c->me1 ? *c->me1 : prob::DistortionMetric::hamming(c->m1.cols());
        const auto me2 = c->me2 ? *c->me2 : prob::DistortionMetric::hamming(c->m2.cols());
        return {c->source, c->m1, c->m2, me1, me2, std::nullopt, closed::BinaryMetric::hamming};
    }
    throw SpecError("model has no finite alphabet");
}

ResultRow scalar_row(const std::string& var, double value, double rate, const std::string& solver,
                     const std::string& flag = "") {
    ResultRow r;
    r.sweep_var = var;
    r.value = value;
    r.rate = rate;
    r.solver = solver;
    r.flag = flag;
    return r;
}

ResultRow region_row(const std::string& var, double value, const rd::RatePoint& p, const std::string& solver) {
    ResultRow r;
    r.sweep_var = var;
    r.value = value;
    r.r1 = p.r1;
    r.r2 = p.r2;
    r.r2_unbounded = p.r2_unbounded;
    r.solver = solver;
    r.provenance = p.provenance;
    return r;
}

rd::DescentOptions descent_options(const ProblemSpec& s) {
    rd::DescentOptions o;
    o.restarts = s.restarts;
    o.seed = s.seed;
    return o;
}

std::vector<rd::TestChannel> closed_seeds(const Finite& f, closed::DistortionPair pair) {
    if (!f.binary) return {};
    return {closed::binary_region_witness(pair, *f.binary, f.metric)};
}

class Runner {
public:
    explicit Runner(const ProblemSpec& s) : s_(s) {
        if (!std::holds_alternative<GaussianModel>(s.model)) fin_ = materialize(s.model);
    }

    void point(ResultDocument& doc, const std::string& var, double value) {
        switch (s_.kind) {
        case Kind::point_cr: return point_cr(doc, var, value);
        case Kind::hb_cr: return hb_cr(doc, var, value);
        case Kind::coop_cr: return coop(doc, var, value);
        case Kind::cascade_cr: return cascade(doc, var, value);
        case Kind::conr:
        case Kind::hb_nocr:
        case Kind::wz: return aux(doc, var, value);
        case Kind::degradedness: return;
        }
    }

    bool heuristic = false;
    std::optional<double> gap;
    closed::DistortionPair pair{};
    double de1 = 0.0, de2 = 0.0;

private:
    double closed_hb() const {
        if (const auto* g = std::get_if<GaussianModel>(&s_.model)) return closed::rhb_cr_gaussian(pair, g->spec).rate;
        const auto& b = std::get<BinaryModel>(s_.model);
        return closed::rhb_cr_binary(pair, b.spec, b.metric).rate;
    }

    double closed_point() const {
        if (const auto* g = std::get_if<GaussianModel>(&s_.model))
            return closed::rcr_point_gaussian(pair.d2, g->spec.sigma_x2, g->spec.n2);
        const auto& b = std::get<BinaryModel>(s_.model);
        return closed::rcr_point_binary(pair.d2, b.spec.p2, b.metric);
    }

    void point_cr(ResultDocument& doc, const std::string& var, double value) {
        if (s_.solver == Solver::closed_form || s_.solver == Solver::both)
            doc.rows.push_back(scalar_row(var, value, closed_point(), "closed_form"));
        if (s_.solver == Solver::closed_form) return;
        const prob::FinitePmf pxy = fin_->source.pmf().marginal({0, 2});
        if (s_.solver == Solver::grid || s_.solver == Solver::both) {
            const auto r = rd::grid_oracle_point_cr(pxy, fin_->m2, pair.d2, s_.grid_step(), s_.guard);
            doc.rows.push_back(scalar_row(var, value, r.rate, "grid"));
        }
        if (s_.solver == Solver::descent) {
            const auto r = rd::descent_point_cr(pxy, fin_->m2, pair.d2, descent_options(s_));
            doc.rows.push_back(scalar_row(var, value, r.rate, "descent"));
        }
    }

    void hb_cr(ResultDocument& doc, const std::string& var, double value) {
        if (s_.solver == Solver::closed_form || s_.solver == Solver::both)
            doc.rows.push_back(scalar_row(var, value, closed_hb(), "closed_form"));
        if (s_.solver == Solver::grid || s_.solver == Solver::both) {
            const auto r = rd::grid_oracle_hb_cr(fin_->source, fin_->m1, fin_->m2, pair, s_.grid_step(), s_.guard);
            doc.rows.push_back(scalar_row(var, value, r.rate, "grid"));
        }
        if (s_.solver == Solver::descent) {
            const auto r = rd::descent_hb_cr(fin_->source, fin_->m1, fin_->m2, pair, descent_options(s_));
            doc.rows.push_back(scalar_row(var, value, r.rate, "descent"));
        }
    }

    rd::SamplerConfig sampler() const {
        rd::SamplerConfig cfg;
        cfg.step = s_.region_step;
        cfg.scalar_step = s_.grid_step();
        cfg.guard = s_.guard;
        cfg.descent = descent_options(s_);
        cfg.descent.restarts = 0;
        cfg.seeds = closed_seeds(*fin_, pair);
        return cfg;
    }

    bool chain(std::array<prob::Axis, 3> order) const { return prob::check_markov_chain(fin_->source, order); }

    void coop(ResultDocument& doc, const std::string& var, double value) {
        using prob::Axis;
        if (s_.solver == Solver::closed_form || s_.solver == Solver::both) {
            const double rho = closed_hb();
            doc.rows.push_back(region_row(var, value, {rho, 0.0, std::nullopt, "closed_form", false}, "closed_form"));
            doc.rows.push_back(region_row(var, value, {rho, 0.0, std::nullopt, "closed_form", true}, "closed_form"));
            if (s_.solver == Solver::closed_form) return;
        }
        rd::RateRegion region;
        if (chain({Axis::x, Axis::y2, Axis::y1}))
            region = rd::coop_region_xy2y1(fin_->source, fin_->m1, fin_->m2, pair, sampler());
        else if (chain({Axis::x, Axis::y1, Axis::y2}))
            region = rd::coop_region_xy1y2(fin_->source, fin_->m1, fin_->m2, pair, sampler());
        else
            throw SpecError("cooperative regions need X - Y1 - Y2 or X - Y2 - Y1");
        for (const auto& p : region.boundary) doc.rows.push_back(region_row(var, value, p, "grid"));
    }

    void cascade(ResultDocument& doc, const std::string& var, double value) {
        using prob::Axis;
        if (s_.solver == Solver::closed_form || s_.solver == Solver::both) {
            rd::CascadeBounds b;
            if (const auto* g = std::get_if<GaussianModel>(&s_.model)) {
                b = rd::cascade_bounds_xy2y1(pair, g->spec);
            } else {
                const auto& bm = std::get<BinaryModel>(s_.model);
                const auto t = closed::cascade_region_binary(pair, bm.spec, bm.metric);
                b.outer.boundary.push_back({t.r1_min, t.r2_min, std::nullopt, "closed_form", false});
            }
            for (const auto& p : b.outer.boundary) doc.rows.push_back(region_row(var, value, p, "closed_form"));
            if (s_.solver == Solver::closed_form) return;
        }
        if (chain({Axis::x, Axis::y2, Axis::y1})) {
            const auto b = rd::cascade_bounds_xy2y1(fin_->source, fin_->m1, fin_->m2, pair, sampler());
            for (const auto& p : b.outer.boundary) doc.rows.push_back(region_row(var, value, p, "grid"));
            for (auto p : b.inner.boundary) {
                p.provenance = "inner_" + p.provenance;
                doc.rows.push_back(region_row(var, value, p, "grid"));
            }
            gap = gap ? std::max(*gap, b.gap) : b.gap;
        } else if (chain({Axis::x, Axis::y1, Axis::y2})) {
            const auto region = rd::cascade_region_xy1y2(fin_->source, fin_->m1, fin_->m2, pair, sampler());
            for (const auto& p : region.boundary) doc.rows.push_back(region_row(var, value, p, "grid"));
        } else {
            throw SpecError("cascade regions need X - Y1 - Y2 or X - Y2 - Y1");
        }
    }

    void aux(ResultDocument& doc, const std::string& var, double value) {
        rd::AuxOptions opt;
        opt.step = s_.grid_step();
        opt.guard = s_.guard;
        opt.map_budget = s_.map_budget;
        std::vector<rd::TestChannel> seeds;
        rd::AuxResult r = [&] {
            if (s_.kind == Kind::wz) {
                const prob::FinitePmf pxy = fin_->source.pmf().marginal({0, 2});
                return rd::brute_force_wz(pxy, fin_->m2, pair.d2, s_.caps.u2, opt);
            }
            if (fin_->binary && s_.caps.u1 >= fin_->m1.cols() && s_.caps.u2 >= fin_->m2.cols())
                for (const auto& w : closed_seeds(*fin_, pair)) seeds.push_back(rd::embed_reconstruction(w, s_.caps));
            opt.seeds = seeds;
            if (s_.kind == Kind::hb_nocr)
                return rd::brute_force_hb_nocr(fin_->source, fin_->m1, fin_->m2, pair, s_.caps, opt);
            const rd::ConRConstraint c{de1, de2, fin_->me1, fin_->me2};
            return rd::brute_force_conr(fin_->source, fin_->m1, fin_->m2, pair, c, s_.caps, opt);
        }();
        heuristic = heuristic || r.heuristic;
        doc.rows.push_back(scalar_row(var, value, r.rate, "brute_force", r.heuristic ? "heuristic" : ""));
    }

    const ProblemSpec& s_;
    std::optional<Finite> fin_;
};

nlohmann::json degradedness(const Finite& f) {
    const auto v = prob::check_stochastic_degradedness(f.source);
    nlohmann::json j{{"feasible", v.feasible}, {"violation", v.violation}, {"ny1", v.ny1}, {"ny2", v.ny2}};
    if (v.kernel) j["kernel"] = *v.kernel;
    return j;
}

} // namespace

ResultDocument run(const ProblemSpec& spec) {
    spec.validate();
    const auto t0 = std::chrono::steady_clock::now();
    ResultDocument doc;
    doc.inputs = to_json(spec);
    doc.metadata = {{"step", spec.grid_step()},     {"region_step", spec.region_step}, {"restarts", spec.restarts},
                    {"seed", spec.seed},     {"caps", {spec.caps.u1, spec.caps.u2}}, {"guard", spec.guard},
                    {"map_budget", spec.map_budget}};

    if (spec.kind == Kind::degradedness) {
        doc.layout = Layout::verdict;
        doc.extra = degradedness(materialize(spec.model));
    } else {
        const bool region = spec.kind == Kind::coop_cr || spec.kind == Kind::cascade_cr;
        doc.layout = region ? Layout::region : Layout::scalar;
        Runner runner(spec);
        auto eval_at = [&](const std::string& var, double v) {
            runner.pair = spec.budgets;
            runner.de1 = spec.de1;
            runner.de2 = spec.de2;
            if (var == "d1") runner.pair.d1 = v;
            if (var == "d2") runner.pair.d2 = v;
            if (var == "de") runner.de1 = runner.de2 = v;
            runner.point(doc, var, v);
        };
        if (spec.sweep) {
            for (double v : spec.sweep->values()) eval_at(spec.sweep->var, v);
        } else {
            eval_at("point", 0.0);
        }
        doc.metadata["heuristic"] = runner.heuristic;
        if (runner.gap) doc.metadata["gap"] = *runner.gap;
    }
    if (spec.timing)
        doc.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return doc;
}

ResultDocument figure(int id, const FigureOptions& opt) {
    const auto t0 = std::chrono::steady_clock::now();
    ResultDocument doc;
    if (id == 6) {
        const prob::GaussianSpec g{4.0, 2.0, 3.0};
        doc.layout = Layout::figure6;
        doc.inputs = {{"figure", 6}, {"sigma_x2", g.sigma_x2}, {"n1", g.n1}, {"n2", g.n2}};
        for (double d2 : {0.5, 1.0, 2.5, 5.0}) {
            for (int i = 1; i <= 60; ++i) {
                const double d1 = i / 10.0;
                ResultRow r = scalar_row("d1", d1, closed::rhb_cr_gaussian({d1, d2}, g).rate, "closed_form");
                r.series = "D2=" + std::to_string(d2).substr(0, std::to_string(d2).find_last_not_of('0') + 1);
                if (r.series.back() == '.') r.series.pop_back();
                doc.rows.push_back(std::move(r));
            }
        }
    } else if (id == 8) {
        const prob::BinaryErasureSpec b{1.0, 0.35};
        const auto source = prob::build_erased_source(b);
        const auto h = prob::DistortionMetric::hamming(2);
        doc.layout = Layout::figure8;
        doc.inputs = {{"figure", 8}, {"p1", b.p1}, {"p2", b.p2}, {"step", opt.step},
                      {"caps", {opt.caps.u1, opt.caps.u2}}};
        bool any_heuristic = false;
        for (double d2 : {0.05, 0.3}) {
            const std::string series = d2 == 0.05 ? "D2=0.05" : "D2=0.3";
            for (std::size_t i = 0; i < opt.points; ++i) {
                const double d1 = opt.points == 1 ? 0.0 : 0.5 * static_cast<double>(i) / (opt.points - 1);
                const closed::DistortionPair pair{d1, d2};
                ResultRow cr = scalar_row("d1", d1, closed::rhb_cr_binary(pair, b).rate, "closed_form");
                cr.series = series;
                cr.provenance = "cr";
                doc.rows.push_back(cr);
                const auto seed = rd::embed_reconstruction(closed::binary_region_witness(pair, b), opt.caps);
                rd::AuxOptions ao;
                ao.step = opt.step;
                ao.seeds = std::span(&seed, 1);
                const auto r = rd::brute_force_hb_nocr(source, h, h, pair, opt.caps, ao);
                any_heuristic = any_heuristic || r.heuristic;
                ResultRow nc = scalar_row("d1", d1, r.rate, "brute_force", r.heuristic ? "heuristic" : "");
                nc.series = series;
                nc.provenance = "nocr";
                doc.rows.push_back(nc);
            }
        }
        doc.metadata = {{"heuristic", any_heuristic}};
    } else {
        throw SpecError("figure id must be 6 or 8");
    }
    if (opt.timing) doc.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return doc;
}

} // namespace crrd::harness
