#include "wavesel/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "wavesel/parallel.hpp"
#include "wavesel/rng.hpp"
#include "wavesel/selection.hpp"
#include "wavesel/transform.hpp"

namespace wavesel {

using ojson = nlohmann::ordered_json;

namespace {

const std::vector<std::string> kMethodOrder = {"sh", "cp", "vfcv", "penvf"};

std::string fmt3(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

}  // namespace

void BenchConfig::validate() const {
    if (replications < 1) throw std::invalid_argument("bench config: replications must be >= 1");
    if (folds < 2) throw std::invalid_argument("bench config: folds must be >= 2");
    for (std::size_t n : sizes)
        if (!is_power_of_two(n) || n < 8) throw std::invalid_argument("bench config: sizes must be powers of two >= 8");
    for (const auto& m : methods)
        if (std::find(kMethodOrder.begin(), kMethodOrder.end(), m) == kMethodOrder.end())
            throw std::invalid_argument("bench config: unknown method '" + m + "'");
    for (const auto& s : signals) signal_by_name(s);
    for (const auto& s : noises) noise_by_name(s);
    make_collection(collection, std::size_t{16});
    loss_measure_from_string(loss);
    for (const auto& [fmt, path] : outputs)
        if (fmt != "csv" && fmt != "json" && fmt != "markdown")
            throw std::invalid_argument("bench config: unknown output format '" + fmt + "'");
}

BenchConfig bench_config_from_json(const std::string& text) {
    const ojson j = ojson::parse(text);
    if (!j.is_object()) throw std::invalid_argument("bench config: expected a JSON object");
    const std::string schema = j.value("schema", std::string(kBenchConfigSchema));
    if (schema != kBenchConfigSchema) throw std::invalid_argument("bench config: unsupported schema '" + schema + "'");
    static const std::vector<std::string> known = {"schema", "signals", "noises", "sizes", "methods",
                                                   "replications", "seed", "jobs", "folds", "collection",
                                                   "loss", "keep_ratios", "outputs"};
    for (const auto& [key, _] : j.items())
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw std::invalid_argument("bench config: unknown key '" + key + "'");
    BenchConfig c;
    if (j.contains("signals")) c.signals = j["signals"].get<std::vector<std::string>>();
    if (j.contains("noises")) c.noises = j["noises"].get<std::vector<std::string>>();
    if (j.contains("sizes")) c.sizes = j["sizes"].get<std::vector<std::size_t>>();
    if (j.contains("methods")) c.methods = j["methods"].get<std::vector<std::string>>();
    if (j.contains("replications")) c.replications = j["replications"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("jobs")) c.jobs = j["jobs"].get<std::size_t>();
    if (j.contains("folds")) c.folds = j["folds"].get<std::size_t>();
    if (j.contains("collection")) c.collection = j["collection"].get<std::string>();
    if (j.contains("loss")) c.loss = j["loss"].get<std::string>();
    if (j.contains("keep_ratios")) c.keep_ratios = j["keep_ratios"].get<bool>();
    if (j.contains("outputs"))
        for (const auto& [fmt, path] : j["outputs"].items()) c.outputs.emplace_back(fmt, path.get<std::string>());
    c.validate();
    return c;
}

std::string bench_config_to_json(const BenchConfig& c) {
    ojson j;
    j["schema"] = kBenchConfigSchema;
    j["signals"] = c.signals;
    j["noises"] = c.noises;
    j["sizes"] = c.sizes;
    j["methods"] = c.methods;
    j["replications"] = c.replications;
    j["seed"] = c.seed;
    j["jobs"] = c.jobs;
    j["folds"] = c.folds;
    j["collection"] = c.collection;
    j["loss"] = c.loss;
    j["keep_ratios"] = c.keep_ratios;
    ojson o = ojson::object();
    for (const auto& [fmt, path] : c.outputs) o[fmt] = path;
    j["outputs"] = o;
    return j.dump(2);
}

std::uint64_t cell_seed(std::uint64_t base, const std::string& signal, const std::string& noise, std::size_t n,
                        std::size_t replication) {
    const std::string label = signal + "/" + noise + "/" + std::to_string(n);
    return mix_seed(mix_seed(base, hash_label(label)), replication);
}

BenchReport run_bench(const BenchConfig& config) {
    config.validate();
    BenchReport report;
    report.config = config;
    const LossMeasure loss = loss_measure_from_string(config.loss);
    const std::size_t R = config.replications;
    const std::size_t nm = config.methods.size();

    for (const auto& sname : config.signals) {
        const TestSignal signal = signal_by_name(sname);
        for (const auto& zname : config.noises) {
            const NoiseScenario noise = noise_by_name(zname);
            for (std::size_t n : config.sizes) {
                const ModelCollection col = make_collection(config.collection, n);
                const FoldScheme folds = FoldScheme::interleaved(n, config.folds);
                // ratios[r * nm + m]; NaN marks a dropped replication.
                std::vector<double> ratios(R * nm, std::numeric_limits<double>::quiet_NaN());
                std::vector<std::string> errors(R);
                parallel_for(R, config.jobs, [&](std::size_t r) {
                    try {
                        const RegressionSample s = generate(signal, noise, n, cell_seed(config.seed, sname, zname, n, r));
                        const FittedCollection fc = fit_collection(s, col, folds, &signal, loss);
                        const auto usable = fc.usable();
                        const SelectionOutcome oracle = oracle_select(fc);
                        const double best = *fc.models[usable[oracle.chosen_index]].true_loss;
                        std::vector<double> row(nm);
                        for (std::size_t m = 0; m < nm; ++m) {
                            const SelectionOutcome o = select_by_method(fc, config.methods[m]);
                            const double chosen = *fc.models[usable[o.chosen_index]].true_loss;
                            if (best > 0.0) {
                                row[m] = chosen / best;
                            } else if (chosen == 0.0) {
                                row[m] = 1.0;
                            } else {
                                throw std::runtime_error("oracle loss is zero but the selected loss is not");
                            }
                        }
                        std::copy(row.begin(), row.end(), ratios.begin() + static_cast<std::ptrdiff_t>(r * nm));
                    } catch (const std::exception& e) {
                        errors[r] = e.what();
                    }
                });
                std::size_t failures = 0;
                for (std::size_t r = 0; r < R; ++r)
                    if (!errors[r].empty()) {
                        if (failures == 0)
                            report.failure_notes.push_back(sname + "/" + zname + "/" + std::to_string(n) + ": " +
                                                           errors[r]);
                        ++failures;
                    }
                for (std::size_t m = 0; m < nm; ++m) {
                    BenchCell cell;
                    cell.signal = sname;
                    cell.noise = zname;
                    cell.n = n;
                    cell.method = config.methods[m];
                    cell.failures = failures;
                    cell.flagged = static_cast<double>(failures) > 0.05 * static_cast<double>(R);
                    std::vector<double> v;
                    for (std::size_t r = 0; r < R; ++r)
                        if (errors[r].empty()) v.push_back(ratios[r * nm + m]);
                    cell.count = v.size();
                    if (!v.empty()) {
                        double s = 0.0;
                        for (double x : v) s += x;
                        cell.mean = s / static_cast<double>(v.size());
                        if (v.size() > 1) {
                            double q = 0.0;
                            for (double x : v) q += (x - cell.mean) * (x - cell.mean);
                            cell.std_error = std::sqrt(q / static_cast<double>(v.size() - 1)) /
                                             std::sqrt(static_cast<double>(v.size()));
                        }
                    } else {
                        cell.mean = std::numeric_limits<double>::quiet_NaN();
                    }
                    if (config.keep_ratios) cell.ratios = std::move(v);
                    report.cells.push_back(std::move(cell));
                }
            }
        }
    }
    return report;
}

std::string method_label(const std::string& method, std::size_t folds) {
    if (method == "sh") return "SH";
    if (method == "cp") return "Cp";
    if (method == "vfcv") return std::to_string(folds) + "FCV";
    if (method == "penvf") return "pen" + std::to_string(folds) + "F";
    if (method == "oracle") return "oracle";
    throw std::invalid_argument("unknown method '" + method + "'");
}

std::string emit_table(const BenchReport& report, const std::string& format) {
    if (format != "csv" && format != "json" && format != "markdown")
        throw std::invalid_argument("emit_table: unknown format '" + format + "'");
    std::vector<std::string> methods;
    for (const auto& m : kMethodOrder) {
        const auto& cm = report.config.methods;
        if (report.cells.empty() ? true : std::find(cm.begin(), cm.end(), m) != cm.end()) methods.push_back(m);
    }
    if (!report.cells.empty()) {
        std::vector<std::string> present;
        for (const auto& m : methods)
            if (std::any_of(report.cells.begin(), report.cells.end(), [&](const BenchCell& c) { return c.method == m; }))
                present.push_back(m);
        methods = present;
    }
    const std::size_t V = report.config.folds;

    struct Row {
        std::string signal, noise;
        std::size_t n;
        std::vector<const BenchCell*> cells;
    };
    std::vector<Row> rows;
    for (const auto& c : report.cells) {
        auto it = std::find_if(rows.begin(), rows.end(),
                               [&](const Row& r) { return r.signal == c.signal && r.noise == c.noise && r.n == c.n; });
        if (it == rows.end()) {
            rows.push_back({c.signal, c.noise, c.n, std::vector<const BenchCell*>(methods.size(), nullptr)});
            it = rows.end() - 1;
        }
        const auto mi = std::find(methods.begin(), methods.end(), c.method);
        if (mi != methods.end()) it->cells[static_cast<std::size_t>(mi - methods.begin())] = &c;
    }
    auto display = [](const BenchCell* c) {
        if (!c || std::isnan(c->mean)) return std::string("NA");
        return fmt3(c->mean) + " ± " + fmt3(c->std_error);
    };

    std::ostringstream os;
    if (format == "csv") {
        os << "signal,noise,n";
        for (const auto& m : methods) os << ',' << method_label(m, V);
        os << '\n';
        for (const auto& r : rows) {
            os << r.signal << ',' << r.noise << ',' << r.n;
            for (const auto* c : r.cells) os << ',' << display(c);
            os << '\n';
        }
    } else if (format == "markdown") {
        os << "| signal | noise | n |";
        for (const auto& m : methods) os << ' ' << method_label(m, V) << " |";
        os << "\n|---|---|---:|";
        for (std::size_t i = 0; i < methods.size(); ++i) os << "---:|";
        os << '\n';
        for (const auto& r : rows) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto* c : r.cells)
                if (c && !std::isnan(c->mean)) best = std::min(best, c->mean);
            os << "| " << r.signal << " | " << r.noise << " | " << r.n << " |";
            for (const auto* c : r.cells) {
                const bool bold = c && !std::isnan(c->mean) && fmt3(c->mean) == fmt3(best);
                os << ' ' << (bold ? "**" + display(c) + "**" : display(c)) << " |";
            }
            os << '\n';
        }
    } else {
        ojson j;
        j["schema"] = "wavesel.bench-table/1";
        ojson cols = ojson::array();
        for (const auto& m : methods) cols.push_back(method_label(m, V));
        j["columns"] = cols;
        ojson arr = ojson::array();
        for (const auto& r : rows) {
            ojson row;
            row["signal"] = r.signal;
            row["noise"] = r.noise;
            row["n"] = r.n;
            ojson vals = ojson::object();
            for (std::size_t i = 0; i < methods.size(); ++i) {
                const auto* c = r.cells[i];
                ojson v;
                if (c && !std::isnan(c->mean)) {
                    v["mean"] = c->mean;
                    v["std_error"] = c->std_error;
                } else {
                    v["mean"] = nullptr;
                    v["std_error"] = nullptr;
                }
                v["display"] = display(c);
                vals[method_label(methods[i], V)] = v;
            }
            row["values"] = vals;
            arr.push_back(row);
        }
        j["rows"] = arr;
        os << j.dump(2) << '\n';
    }
    return os.str();
}

}  // namespace wavesel
