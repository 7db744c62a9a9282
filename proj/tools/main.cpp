// wavesel command-line tool: gen, fit, select, certify, conc, bench, plot.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavesel/basis.hpp"
#include "wavesel/bench.hpp"
#include "wavesel/certify.hpp"
#include "wavesel/concentration.hpp"
#include "wavesel/estimator.hpp"
#include "wavesel/sample_io.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/serialize.hpp"
#include "wavesel/signals.hpp"
#include "wavesel/svg.hpp"
#include "wavesel/transform.hpp"

using namespace wavesel;

namespace {

struct Shared {
    std::uint64_t seed = 0;
    std::string out;
    std::string format;
    std::size_t jobs = 1;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

// Structured output goes to --out, or to stdout when no file is given.
// The summary is printed only in the first case so stdout stays parseable.
void emit(const Shared& sh, const std::string& content, const std::string& summary) {
    if (sh.out.empty()) {
        std::cout << content;
    } else {
        write_file(sh.out, content);
        std::cout << summary;
    }
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string format_or_extension(const Shared& sh, const std::string& fallback) {
    if (!sh.format.empty()) return sh.format;
    if (ends_with(sh.out, ".json")) return "json";
    if (ends_with(sh.out, ".csv")) return "csv";
    if (ends_with(sh.out, ".md")) return "markdown";
    return fallback;
}

std::vector<std::size_t> parse_dims(const std::string& s) {
    std::vector<std::size_t> dims;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) dims.push_back(std::stoull(tok));
    return dims;
}

// "haar", "histogram", "wavelet[:filter]" or "poly:<degree>" at dimension D.
Model basis_model(const std::string& basis, std::size_t D) {
    if (basis.rfind("poly:", 0) == 0) {
        const int r = std::stoi(basis.substr(5));
        if (r < 0 || D % static_cast<std::size_t>(r + 1) != 0)
            throw std::invalid_argument("dimension must be a multiple of degree + 1");
        return build_regular_piecewise_poly(D / static_cast<std::size_t>(r + 1), r);
    }
    return make_collection(basis, std::vector<std::size_t>{D}).model(D);
}

std::string fixed(double v, int digits = 6) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

int cmd_gen(const Shared& sh, const std::string& signal, const std::string& noise, std::size_t n) {
    const RegressionSample s = generate(signal_by_name(signal), noise_by_name(noise), n, sh.seed);
    const std::string fmt = format_or_extension(sh, "csv");
    std::string content;
    if (fmt == "json") {
        content = sample_to_json(s);
    } else if (fmt == "csv") {
        std::ostringstream os;
        write_sample_csv(s, os);
        content = os.str();
    } else {
        throw std::invalid_argument("gen: unknown format '" + fmt + "'");
    }
    emit(sh, content, "generated " + std::to_string(n) + " observations of " + signal + "/" + noise + " -> " + sh.out + "\n");
    return 0;
}

int cmd_fit(const Shared& sh, const std::string& in, const std::string& collection_spec, const std::string& dims_s,
            const std::string& truth_name, const std::string& dump, std::size_t keep) {
    RegressionSample sample = load_sample(in);
    const std::size_t n = sample.size();
    const ModelCollection coll =
        dims_s.empty() ? make_collection(collection_spec, n) : make_collection(collection_spec, parse_dims(dims_s));
    const bool ordered = coll.kind == CollectionKind::Wavelet && is_power_of_two(n);
    std::optional<OrderedPyramid> pyr;
    if (ordered) pyr.emplace(sample.y, coll.filter);
    std::optional<TestSignal> truth;
    if (!truth_name.empty()) truth = signal_by_name(truth_name);

    std::vector<RiskRow> rows;
    for (std::size_t D : coll.dims) {
        RiskRow row;
        row.dimension = D;
        try {
            const Model model = coll.model(D);
            FitResult fr;
            if (ordered) {
                if (D > n) throw SingularDesignError("dimension exceeds n");
                fr.dimension = D;
                fr.beta = pyr->beta(D);
                fr.fitted = pyr->fitted(D);
                fr.method = FitMethod::PyramidFast;
                double acc = 0;
                for (std::size_t i = 0; i < n; ++i) acc += (sample.y[i] - fr.fitted[i]) * (sample.y[i] - fr.fitted[i]);
                fr.empirical_risk = acc / static_cast<double>(n);
            } else {
                fr = fit_ls(sample, model);
            }
            row.empirical_risk = fr.empirical_risk;
            row.method = to_string(fr.method);
            if (truth) {
                row.risk = excess_risks(sample, model, project_truth(*truth, model), fr);
                row.has_truth = true;
            }
        } catch (const SingularDesignError& e) {
            row.ok = false;
            row.failure = e.what();
        }
        rows.push_back(std::move(row));
    }

    if (!dump.empty()) {
        const OrthoFilter filter = coll.kind == CollectionKind::Wavelet ? coll.filter : haar_filter();
        const OrderedPyramid p(sample.y, filter);
        write_file(dump, coefficients_to_json(p.tree(), filter.id(), keep ? keep : coll.dims.back()));
    }

    const std::string fmt = format_or_extension(sh, "csv");
    std::string content;
    if (fmt == "csv") content = risk_rows_to_csv(rows);
    else if (fmt == "json") content = risk_rows_to_json(rows, sample.meta, coll.name);
    else throw std::invalid_argument("fit: unknown format '" + fmt + "'");

    std::ostringstream sum;
    sum << "fitted " << rows.size() << " models (" << coll.name << ", n=" << n << ")\n";
    for (const auto& r : rows) {
        sum << "  D=" << r.dimension;
        if (!r.ok) sum << "  failed: " << r.failure;
        else {
            sum << "  emp=" << fixed(r.empirical_risk);
            if (r.has_truth) sum << "  total=" << fixed(r.risk.total);
        }
        sum << "\n";
    }
    emit(sh, content, sum.str());
    return 0;
}

int cmd_select(const Shared& sh, const std::string& in, const std::string& method, const std::string& collection_spec,
               const std::string& truth_name, std::size_t folds, const std::string& loss, const std::string& svg_risk,
               const std::string& svg_path) {
    RegressionSample sample = load_sample(in);
    const ModelCollection coll = make_collection(collection_spec, sample.size());
    std::optional<TestSignal> truth;
    if (!truth_name.empty()) truth = signal_by_name(truth_name);
    const FittedCollection fc = fit_collection(sample, coll, FoldScheme::interleaved(sample.size(), folds),
                                               truth ? &*truth : nullptr, loss_measure_from_string(loss));
    std::vector<std::string> methods;
    if (method == "all") {
        methods = {"sh", "cp", "vfcv", "penvf"};
        if (truth) methods.push_back("oracle");
    } else {
        if (method == "oracle" && !truth) throw std::invalid_argument("select: oracle needs --truth");
        methods = {method};
    }
    std::vector<SelectionOutcome> outs;
    for (const auto& m : methods) {
        if (method != "all") {
            outs.push_back(select_by_method(fc, m));
            continue;
        }
        // with several methods one that cannot run is reported instead of aborting the rest
        try {
            outs.push_back(select_by_method(fc, m));
        } catch (const MissingModelError& e) {
            SelectionOutcome o;
            o.method = m;
            o.failure = e.what();
            outs.push_back(std::move(o));
        }
    }

    if (!svg_risk.empty()) {
        SelectionOutcome first;
        for (const auto& o : outs)
            if (o.failure.empty()) {
                first = o;
                break;
            }
        write_file(svg_risk, plot_risk_curve(first));
    }
    if (!svg_path.empty()) {
        const SelectionOutcome* with_path = nullptr;
        for (const auto& o : outs)
            if (!with_path && !o.diagnostics.path.empty()) with_path = &o;
        if (!with_path) {
            // the jump plot needs a penalty path; compute the SH one if no chosen method has it
            outs.push_back(select_sh(fc));
            with_path = &outs.back();
            write_file(svg_path, plot_dimension_jump(*with_path));
            outs.pop_back();
        } else {
            write_file(svg_path, plot_dimension_jump(*with_path));
        }
    }

    std::ostringstream sum;
    for (const auto& o : outs) {
        if (!o.failure.empty()) {
            sum << o.method << ": failed: " << o.failure << "\n";
            continue;
        }
        sum << o.method << ": D=" << o.chosen_dimension;
        if (o.diagnostics.alpha_min) sum << "  alpha_min=" << fixed(*o.diagnostics.alpha_min);
        for (const auto& w : o.diagnostics.warnings) sum << "  [" << w << "]";
        sum << "\n";
    }
    emit(sh, selection_to_json(outs, fc, sample.meta, coll.name), sum.str());
    return 0;
}

int cmd_certify(const Shared& sh, const std::string& basis, std::size_t D, std::optional<double> r_m,
                std::optional<double> A_c) {
    const Model model = basis_model(basis, D);
    SlbProposal prop = auto_proposal(model);
    prop.r_m = r_m;
    prop.A_c = A_c;
    const SlbCertificate cert = certify_slb(model, prop);
    std::ostringstream t;
    t << "basis " << basis << "  D=" << cert.dimension << "  b_m=" << cert.b_m << "\n";
    t << "r_m=" << fixed(cert.r_m) << " (" << cert.r_m_source << ", min " << fixed(cert.r_m_min) << ")  A_c="
      << fixed(cert.A_c) << " (" << cert.A_c_source << ", min " << fixed(cert.A_c_min) << ")\n";
    for (const auto& c : cert.checks)
        t << "  " << c.name << std::string(14 - std::min<std::size_t>(13, c.name.size()), ' ')
          << (c.pass ? "pass" : "FAIL") << "  slack=" << fixed(c.slack) << "\n";
    t << (cert.pass() ? "certified\n" : "not certified\n");
    if (sh.out.empty()) {
        std::cout << t.str();
    } else {
        write_file(sh.out, certificate_to_json(cert, model));
        std::cout << t.str();
    }
    return 0;
}

int cmd_conc(const Shared& sh, const std::string& signal, const std::string& noise, const std::string& basis,
             std::size_t n, std::size_t D, std::size_t reps, std::size_t n_mc, const std::string& svg) {
    const Model model = basis_model(basis, D);
    const ConcentrationReport r =
        run_concentration(signal_by_name(signal), noise_by_name(noise), model, n, reps, sh.seed, sh.jobs, n_mc);
    if (!svg.empty()) write_file(svg, plot_ratio_histogram(r.ratio_true, "n l(s_m, s^_m) / C_m"));
    std::ostringstream sum;
    sum << "C_m=" << fixed(r.C_m) << "  eps=" << fixed(r.epsilon) << "\n"
        << "true excess ratio: mean " << fixed(r.mean_true) << " sd " << fixed(r.std_true) << " coverage "
        << fixed(r.coverage_true) << "\n"
        << "empirical excess ratio: mean " << fixed(r.mean_emp) << " sd " << fixed(r.std_emp) << " coverage "
        << fixed(r.coverage_emp) << "\n";
    for (const auto& w : r.warnings) sum << "warning: " << w << "\n";
    emit(sh, concentration_to_json(r), sum.str());
    return 0;
}

int cmd_bench(const Shared& sh, const std::string& config_path, bool jobs_given) {
    BenchConfig cfg = bench_config_from_json(read_file(config_path));
    if (jobs_given) cfg.jobs = sh.jobs;
    cfg.validate();
    const BenchReport report = run_bench(cfg);
    for (const auto& [fmt, path] : cfg.outputs)
        write_file(path, fmt == "json" ? bench_report_to_json(report) : emit_table(report, fmt));
    const std::string fmt = format_or_extension(sh, "markdown");
    const std::string content = fmt == "json" ? bench_report_to_json(report) : emit_table(report, fmt);
    std::string summary = emit_table(report, "markdown");
    for (const auto& note : report.failure_notes) summary += "note: " + note + "\n";
    emit(sh, content, summary);
    return 0;
}

int cmd_plot(const Shared& sh, const std::string& kind_s, const std::string& in, const std::string& method,
             const std::string& which) {
    const PlotKind kind = plot_kind_from_string(kind_s);
    const std::string text = read_file(in);
    std::string svg;
    auto pick = [&](const std::vector<SelectionOutcome>& outs, bool need_path) -> SelectionOutcome {
        for (const auto& o : outs)
            if ((method.empty() || o.method == method) && (!need_path || !o.diagnostics.path.empty())) return o;
        if (outs.empty() && method.empty()) return SelectionOutcome{};
        throw std::invalid_argument("plot: no matching outcome in '" + in + "'");
    };
    switch (kind) {
        case PlotKind::RiskCurve: svg = plot_risk_curve(pick(selection_from_json(text), false)); break;
        case PlotKind::DimensionJump: svg = plot_dimension_jump(pick(selection_from_json(text), true)); break;
        case PlotKind::Coefficients: {
            std::size_t kept = 0;
            const CoefficientTree t = coefficients_from_json(text, &kept);
            svg = plot_coefficients(t, kept);
            break;
        }
        case PlotKind::RatioHistogram: {
            if (json_schema_of(text) == kBenchReportSchema) {
                const BenchReport r = bench_report_from_json(text);
                std::vector<double> all;
                for (const auto& c : r.cells)
                    if (method.empty() || c.method == method) all.insert(all.end(), c.ratios.begin(), c.ratios.end());
                svg = plot_ratio_histogram(all, "C_or ratios");
            } else {
                const ConcentrationReport r = concentration_from_json(text);
                svg = plot_ratio_histogram(which == "emp" ? r.ratio_emp : r.ratio_true,
                                           which == "emp" ? "n l_emp / C_m" : "n l / C_m");
            }
            break;
        }
    }
    emit(sh, svg, "wrote " + to_string(kind) + " plot -> " + sh.out + "\n");
    return 0;
}

std::string json_error(const std::string& kind, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = kind;
    j["message"] = message;
    return j.dump();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"wavesel: least-squares regression on wavelet models with data-driven model selection"};
    app.require_subcommand(1);

    Shared sh;
    if (const char* env = std::getenv("WAVESEL_SEED")) {
        try {
            sh.seed = std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << json_error("flag", "WAVESEL_SEED is not an unsigned integer") << "\n";
            return 2;
        }
    }
    auto add_shared = [&](CLI::App* c) {
        c->add_option("--seed", sh.seed, "random seed (default: $WAVESEL_SEED or 0)");
        c->add_option("--out", sh.out, "output file (default: stdout)");
        c->add_option("--format", sh.format, "output format");
        c->add_option("--jobs", sh.jobs, "worker threads")->check(CLI::PositiveNumber);
    };

    std::string signal = "wave", noise = "l1", in, collection = "wavelet", dims, truth, dump, method = "all",
                loss = "design", plot_method, svg_risk, svg_path, basis = "haar", config, kind, which = "true", svg;
    std::size_t n = 1024, keep = 0, folds = 2, D = 32, reps = 200, n_mc = 100000;
    std::optional<double> r_m, A_c;

    auto* gen = app.add_subcommand("gen", "draw a sample");
    add_shared(gen);
    gen->add_option("--signal", signal)->check(CLI::IsMember(builtin_signal_names()));
    gen->add_option("--noise", noise);
    gen->add_option("--n", n)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 26));

    auto* fit = app.add_subcommand("fit", "least-squares fit of every model, with risks when the truth is known");
    add_shared(fit);
    fit->add_option("--in", in)->required();
    fit->add_option("--collection", collection);
    fit->add_option("--dims", dims, "comma-separated dimensions (default 2..n/2)");
    fit->add_option("--truth", truth, "signal name for bias/excess/total");
    fit->add_option("--dump-coefficients", dump, "write the coefficient tree as JSON");
    fit->add_option("--keep", keep, "kept dimension recorded in the coefficient dump");

    auto* sel = app.add_subcommand("select", "model selection");
    add_shared(sel);
    sel->add_option("--in", in)->required();
    sel->add_option("--method", method)->check(CLI::IsMember({"sh", "cp", "vfcv", "penvf", "oracle", "all"}));
    sel->add_option("--collection", collection);
    sel->add_option("--truth", truth);
    sel->add_option("--folds", folds)->check(CLI::Range(std::size_t{2}, std::size_t{1} << 20));
    sel->add_option("--loss", loss)->check(CLI::IsMember({"design", "grid", "function"}));
    sel->add_option("--svg-risk", svg_risk, "criterion vs dimension plot");
    sel->add_option("--svg-path", svg_path, "dimension jump plot");

    auto* cert = app.add_subcommand("certify", "check the strong localization inequalities");
    add_shared(cert);
    cert->add_option("--basis", basis, "haar, histogram, wavelet[:filter] or poly:<degree>");
    cert->add_option("--dim", D)->required();
    cert->add_option("--r-m", r_m);
    cert->add_option("--a-c", A_c);

    auto* conc = app.add_subcommand("conc", "concentration of the excess risks");
    add_shared(conc);
    conc->add_option("--signal", signal)->check(CLI::IsMember(builtin_signal_names()));
    conc->add_option("--noise", noise);
    conc->add_option("--basis", basis);
    conc->add_option("--n", n);
    conc->add_option("--dim", D);
    conc->add_option("--reps", reps)->check(CLI::PositiveNumber);
    conc->add_option("--n-mc", n_mc);
    conc->add_option("--svg", svg, "histogram of the true-excess ratios");

    auto* bench = app.add_subcommand("bench", "simulation study");
    add_shared(bench);
    bench->add_option("--config", config)->required()->check(CLI::ExistingFile);

    auto* plot = app.add_subcommand("plot", "SVG diagnostics");
    add_shared(plot);
    plot->add_option("--kind", kind)->required();
    plot->add_option("--in", in)->required()->check(CLI::ExistingFile);
    plot->add_option("--method", plot_method, "outcome (selection) or method (bench report) to plot");
    plot->add_option("--which", which, "true or emp ratios of a concentration report")
        ->check(CLI::IsMember({"true", "emp"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) return cmd_gen(sh, signal, noise, n);
        if (*fit) return cmd_fit(sh, in, collection, dims, truth, dump, keep);
        if (*sel) return cmd_select(sh, in, method, collection, truth, folds, loss, svg_risk, svg_path);
        if (*cert) return cmd_certify(sh, basis, D, r_m, A_c);
        if (*conc) return cmd_conc(sh, signal, noise, basis, n, D, reps, n_mc, svg);
        if (*bench) return cmd_bench(sh, config, bench->count("--jobs") > 0);
        if (*plot) return cmd_plot(sh, kind, in, plot_method, which);
    } catch (const UnknownPlotKindError& e) {
        std::cerr << json_error("unknown-kind", e.what()) << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << json_error("invalid-argument", e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << json_error("runtime", e.what()) << "\n";
        return 1;
    }
    return 0;
}
