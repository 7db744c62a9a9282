#include "wavesel/serialize.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wavesel {

using ojson = nlohmann::ordered_json;

namespace {

ojson num(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

double get_num(const ojson& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

void expect_schema(const ojson& j, const char* schema) {
    if (!j.contains("schema") || j["schema"].get<std::string>() != schema)
        throw std::invalid_argument(std::string("expected a ") + schema + " document");
}

ojson meta_json(const SampleMeta& m) {
    ojson j;
    j["signal"] = m.signal;
    j["noise"] = m.noise;
    j["n"] = m.n;
    j["seed"] = m.seed;
    return j;
}

}  // namespace

std::string json_schema_of(const std::string& text) {
    const ojson j = ojson::parse(text);
    if (j.is_object() && j.contains("schema") && j["schema"].is_string()) return j["schema"].get<std::string>();
    return "";
}

std::string certificate_to_json(const SlbCertificate& c, const Model& model) {
    ojson j;
    j["schema"] = "wavesel.certificate/1";
    j["family"] = model.family().describe();
    j["dimension"] = c.dimension;
    j["pass"] = c.pass();
    j["b_m"] = c.b_m;
    j["A"] = c.A;
    j["partition"] = c.partition;
    j["r_m"] = num(c.r_m);
    j["r_m_source"] = c.r_m_source;
    j["r_m_min"] = num(c.r_m_min);
    j["A_c"] = num(c.A_c);
    j["A_c_source"] = c.A_c_source;
    j["A_c_min"] = num(c.A_c_min);
    ojson checks = ojson::array();
    for (const auto& ch : c.checks) checks.push_back({{"name", ch.name}, {"pass", ch.pass}, {"slack", num(ch.slack)}});
    j["checks"] = checks;
    j["overlap"] = c.overlap;
    return j.dump(2) + "\n";
}

std::string risk_rows_to_json(const std::vector<RiskRow>& rows, const SampleMeta& meta, const std::string& collection) {
    ojson j;
    j["schema"] = "wavesel.risk/1";
    j["sample"] = meta_json(meta);
    j["collection"] = collection;
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson e;
        e["dimension"] = r.dimension;
        e["ok"] = r.ok;
        if (!r.ok) e["failure"] = r.failure;
        e["method"] = r.method;
        e["empirical_risk"] = num(r.empirical_risk);
        if (r.has_truth) {
            e["bias"] = num(r.risk.bias);
            e["excess"] = num(r.risk.excess);
            e["total"] = num(r.risk.total);
            e["empirical_excess"] = num(r.risk.empirical_excess);
            e["sup_dev"] = num(r.risk.sup_dev);
            e["epsilon_n"] = num(r.risk.epsilon_n);
        }
        arr.push_back(e);
    }
    j["models"] = arr;
    return j.dump(2) + "\n";
}

std::string risk_rows_to_csv(const std::vector<RiskRow>& rows) {
    std::ostringstream os;
    auto f = [](double v) {
        if (!std::isfinite(v)) return std::string();
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    os << "D,empirical_risk,bias,excess,total\n";
    for (const auto& r : rows) {
        os << r.dimension << ',' << (r.ok ? f(r.empirical_risk) : "") << ',';
        if (r.has_truth && r.ok) os << f(r.risk.bias) << ',' << f(r.risk.excess) << ',' << f(r.risk.total);
        else os << ",,";
        os << '\n';
    }
    return os.str();
}

std::string selection_to_json(const std::vector<SelectionOutcome>& outcomes, const FittedCollection& fc,
                              const SampleMeta& meta, const std::string& collection) {
    ojson j;
    j["schema"] = "wavesel.selection/1";
    j["sample"] = meta_json(meta);
    j["collection"] = collection;
    j["route"] = fc.route == Route::Ordered ? "ordered" : "gram";
    j["folds"] = fc.folds.V;
    ojson models = ojson::array();
    for (const auto& m : fc.models) {
        ojson e;
        e["dimension"] = m.dimension;
        e["ok"] = m.ok;
        if (!m.ok) e["failure"] = m.failure;
        e["empirical_risk"] = num(m.empirical_risk);
        if (m.true_loss) e["true_loss"] = num(*m.true_loss);
        models.push_back(e);
    }
    j["models"] = models;
    ojson arr = ojson::array();
    for (const auto& o : outcomes) {
        ojson e;
        e["method"] = o.method;
        e["chosen_dimension"] = o.chosen_dimension;
        if (!o.failure.empty()) e["failure"] = o.failure;
        ojson tr = ojson::array();
        for (const auto& t : o.trace)
            tr.push_back({{"dimension", t.dimension},
                          {"criterion", num(t.criterion)},
                          {"penalty", num(t.penalty)},
                          {"empirical_risk", num(t.empirical_risk)}});
        e["trace"] = tr;
        ojson d = ojson::object();
        const auto& dg = o.diagnostics;
        if (dg.alpha_min) d["alpha_min"] = num(*dg.alpha_min);
        if (!dg.path.empty()) {
            ojson p = ojson::array();
            for (const auto& s : dg.path)
                p.push_back({{"alpha_lo", num(s.alpha_lo)}, {"alpha_hi", num(s.alpha_hi)}, {"dimension", s.dimension}});
            d["path"] = p;
        }
        if (dg.jump)
            d["jump"] = {{"alpha", num(dg.jump->alpha)},
                         {"from_dimension", dg.jump->from_dimension},
                         {"to_dimension", dg.jump->to_dimension},
                         {"ratio", num(dg.jump->ratio)},
                         {"warning", dg.jump->warning}};
        if (dg.sigma2) d["sigma2"] = num(*dg.sigma2);
        if (!dg.fold_risks.empty()) {
            ojson fr = ojson::array();
            for (const auto& row : dg.fold_risks) {
                ojson r = ojson::array();
                for (double v : row) r.push_back(num(v));
                fr.push_back(r);
            }
            d["fold_risks"] = fr;
        }
        d["excluded_dimensions"] = dg.excluded_dimensions;
        d["warnings"] = dg.warnings;
        e["diagnostics"] = d;
        arr.push_back(e);
    }
    j["outcomes"] = arr;
    return j.dump(2) + "\n";
}

std::vector<SelectionOutcome> selection_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    expect_schema(j, "wavesel.selection/1");
    std::vector<SelectionOutcome> out;
    for (const auto& e : j.at("outcomes")) {
        SelectionOutcome o;
        o.method = e.at("method").get<std::string>();
        o.chosen_dimension = e.at("chosen_dimension").get<std::size_t>();
        if (e.contains("failure")) o.failure = e["failure"].get<std::string>();
        for (const auto& t : e.at("trace"))
            o.trace.push_back({t.at("dimension").get<std::size_t>(), get_num(t.at("criterion")),
                               get_num(t.at("penalty")), get_num(t.at("empirical_risk"))});
        for (std::size_t i = 0; i < o.trace.size(); ++i)
            if (o.trace[i].dimension == o.chosen_dimension) o.chosen_index = i;
        const auto& d = e.at("diagnostics");
        if (d.contains("alpha_min")) o.diagnostics.alpha_min = get_num(d["alpha_min"]);
        if (d.contains("path"))
            for (const auto& s : d["path"]) {
                PathSegment ps;
                ps.alpha_lo = get_num(s.at("alpha_lo"));
                ps.alpha_hi = s.at("alpha_hi").is_null() ? std::numeric_limits<double>::infinity()
                                                         : s.at("alpha_hi").get<double>();
                ps.dimension = s.at("dimension").get<std::size_t>();
                o.diagnostics.path.push_back(ps);
            }
        if (d.contains("jump")) {
            DimensionJump dj;
            dj.alpha = get_num(d["jump"].at("alpha"));
            dj.from_dimension = d["jump"].at("from_dimension").get<std::size_t>();
            dj.to_dimension = d["jump"].at("to_dimension").get<std::size_t>();
            dj.ratio = get_num(d["jump"].at("ratio"));
            dj.warning = d["jump"].at("warning").get<bool>();
            o.diagnostics.jump = dj;
        }
        if (d.contains("sigma2")) o.diagnostics.sigma2 = get_num(d["sigma2"]);
        out.push_back(std::move(o));
    }
    return out;
}

std::string bench_report_to_json(const BenchReport& r) {
    ojson j;
    j["schema"] = kBenchReportSchema;
    j["config"] = ojson::parse(bench_config_to_json(r.config));
    // runtime knobs, not part of the result; keeps --jobs runs byte-identical
    j["config"].erase("jobs");
    j["config"].erase("outputs");
    ojson cells = ojson::array();
    for (const auto& c : r.cells) {
        ojson e;
        e["signal"] = c.signal;
        e["noise"] = c.noise;
        e["n"] = c.n;
        e["method"] = c.method;
        e["mean"] = num(c.mean);
        e["std_error"] = num(c.std_error);
        e["count"] = c.count;
        e["failures"] = c.failures;
        e["flagged"] = c.flagged;
        if (!c.ratios.empty()) e["ratios"] = c.ratios;
        cells.push_back(e);
    }
    j["cells"] = cells;
    j["failure_notes"] = r.failure_notes;
    return j.dump(2) + "\n";
}

BenchReport bench_report_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    expect_schema(j, kBenchReportSchema);
    BenchReport r;
    r.config = bench_config_from_json(j.at("config").dump());
    for (const auto& e : j.at("cells")) {
        BenchCell c;
        c.signal = e.at("signal").get<std::string>();
        c.noise = e.at("noise").get<std::string>();
        c.n = e.at("n").get<std::size_t>();
        c.method = e.at("method").get<std::string>();
        c.mean = get_num(e.at("mean"));
        c.std_error = get_num(e.at("std_error"));
        c.count = e.at("count").get<std::size_t>();
        c.failures = e.at("failures").get<std::size_t>();
        c.flagged = e.at("flagged").get<bool>();
        if (e.contains("ratios")) c.ratios = e["ratios"].get<std::vector<double>>();
        r.cells.push_back(std::move(c));
    }
    if (j.contains("failure_notes")) r.failure_notes = j["failure_notes"].get<std::vector<std::string>>();
    return r;
}

std::string concentration_to_json(const ConcentrationReport& r) {
    ojson j;
    j["schema"] = "wavesel.concentration/1";
    j["model"] = r.model;
    j["dimension"] = r.dimension;
    j["n"] = r.n;
    j["replications"] = r.replications;
    j["seed"] = r.seed;
    j["C_m"] = num(r.C_m);
    j["C_m_std_error"] = num(r.C_m_std_error);
    j["epsilon"] = num(r.epsilon);
    j["mean_true"] = num(r.mean_true);
    j["std_true"] = num(r.std_true);
    j["mean_emp"] = num(r.mean_emp);
    j["std_emp"] = num(r.std_emp);
    j["coverage_true"] = num(r.coverage_true);
    j["coverage_emp"] = num(r.coverage_emp);
    j["coverage_true_eps2"] = num(r.coverage_true_eps2);
    j["coverage_emp_eps2"] = num(r.coverage_emp_eps2);
    j["degenerate"] = r.degenerate;
    j["warnings"] = r.warnings;
    j["ratio_true"] = r.ratio_true;
    j["ratio_emp"] = r.ratio_emp;
    return j.dump(2) + "\n";
}

ConcentrationReport concentration_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    expect_schema(j, "wavesel.concentration/1");
    ConcentrationReport r;
    r.model = j.at("model").get<std::string>();
    r.dimension = j.at("dimension").get<std::size_t>();
    r.n = j.at("n").get<std::size_t>();
    r.replications = j.at("replications").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.C_m = get_num(j.at("C_m"));
    r.C_m_std_error = get_num(j.at("C_m_std_error"));
    r.epsilon = get_num(j.at("epsilon"));
    r.mean_true = get_num(j.at("mean_true"));
    r.std_true = get_num(j.at("std_true"));
    r.mean_emp = get_num(j.at("mean_emp"));
    r.std_emp = get_num(j.at("std_emp"));
    r.coverage_true = get_num(j.at("coverage_true"));
    r.coverage_emp = get_num(j.at("coverage_emp"));
    r.coverage_true_eps2 = get_num(j.at("coverage_true_eps2"));
    r.coverage_emp_eps2 = get_num(j.at("coverage_emp_eps2"));
    r.degenerate = j.at("degenerate").get<std::size_t>();
    r.warnings = j.at("warnings").get<std::vector<std::string>>();
    r.ratio_true = j.at("ratio_true").get<std::vector<double>>();
    r.ratio_emp = j.at("ratio_emp").get<std::vector<double>>();
    return r;
}

std::string rep_oracle_to_json(const RepOracleResult& r) {
    ojson j;
    j["schema"] = "wavesel.rep-oracle/1";
    j["dimension"] = r.dimension;
    j["n"] = r.n;
    j["excess"] = num(r.excess);
    j["empirical_excess"] = num(r.empirical_excess);
    j["max_gamma"] = num(r.max_gamma);
    j["argmax_C"] = num(r.argmax_C);
    j["max_ball"] = num(r.max_ball);
    j["argmax_ball_C"] = num(r.argmax_ball_C);
    j["R0"] = num(r.R0);
    j["max_truncated"] = num(r.max_truncated);
    j["argmax_truncated_C"] = num(r.argmax_truncated_C);
    j["solver_gap"] = num(r.solver_gap);
    j["max_matches"] = r.max_matches;
    j["argmax_contains"] = r.argmax_contains;
    return j.dump(2) + "\n";
}

std::string coefficients_to_json(const CoefficientTree& t, const std::string& filter, std::size_t kept) {
    ojson j;
    j["schema"] = "wavesel.coefficients/1";
    j["filter"] = filter;
    j["n"] = t.n;
    j["kept_dimension"] = kept;
    j["approx"] = t.approx;
    j["detail"] = t.detail;
    return j.dump(2) + "\n";
}

CoefficientTree coefficients_from_json(const std::string& text, std::size_t* kept) {
    const ojson j = ojson::parse(text);
    expect_schema(j, "wavesel.coefficients/1");
    CoefficientTree t;
    t.n = j.at("n").get<std::size_t>();
    t.approx = j.at("approx").get<std::vector<double>>();
    t.detail = j.at("detail").get<std::vector<std::vector<double>>>();
    if (kept) *kept = j.at("kept_dimension").get<std::size_t>();
    return t;
}

}  // namespace wavesel
