#include "wavesel/sample_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace wavesel {

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void parse_meta_comment(const std::string& line, SampleMeta& meta) {
    std::istringstream ss(line.substr(1));
    std::string tok;
    while (ss >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        if (key == "signal") meta.signal = val;
        else if (key == "noise") meta.noise = val;
        else if (key == "seed") meta.seed = std::stoull(val);
        else if (key == "schema" && val != kSampleSchema)
            throw std::runtime_error("unsupported sample schema '" + val + "'");
    }
}

}  // namespace

void normalize_sample(RegressionSample& s) {
    if (s.x.size() != s.y.size()) throw std::runtime_error("sample: x and y lengths differ");
    for (std::size_t i = 0; i < s.x.size(); ++i)
        if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i]))
            throw std::runtime_error("sample: non-finite value at row " + std::to_string(i));
    if (!std::is_sorted(s.x.begin(), s.x.end())) {
        std::vector<std::size_t> order(s.x.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return s.x[a] < s.x[b]; });
        std::vector<double> x(s.x.size()), y(s.y.size());
        for (std::size_t i = 0; i < order.size(); ++i) {
            x[i] = s.x[order[i]];
            y[i] = s.y[order[i]];
        }
        s.x = std::move(x);
        s.y = std::move(y);
    }
    for (std::size_t i = 1; i < s.x.size(); ++i)
        if (s.x[i] <= s.x[i - 1]) s.x[i] = std::nextafter(s.x[i - 1], 2.0);
    s.meta.n = s.x.size();
}

void write_sample_csv(const RegressionSample& s, std::ostream& out) {
    out << "# schema=" << kSampleSchema << " signal=" << s.meta.signal << " noise=" << s.meta.noise
        << " n=" << s.size() << " seed=" << s.meta.seed << '\n';
    out << "x,y\n";
    for (std::size_t i = 0; i < s.size(); ++i) out << format_double(s.x[i]) << ',' << format_double(s.y[i]) << '\n';
}

RegressionSample read_sample_csv(std::istream& in) {
    RegressionSample s;
    std::string line;
    bool header_seen = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            parse_meta_comment(line, s.meta);
            continue;
        }
        if (!header_seen) {
            header_seen = true;
            if (line == "x,y") continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("csv line " + std::to_string(lineno) + ": expected x,y");
        try {
            s.x.push_back(std::stod(line.substr(0, comma)));
            s.y.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::logic_error&) {
            throw std::runtime_error("csv line " + std::to_string(lineno) + ": not a number");
        }
    }
    normalize_sample(s);
    return s;
}

std::string sample_to_json(const RegressionSample& s) {
    nlohmann::ordered_json j;
    j["schema"] = kSampleSchema;
    j["meta"] = {{"signal", s.meta.signal}, {"noise", s.meta.noise}, {"n", s.size()}, {"seed", s.meta.seed}};
    j["x"] = s.x;
    j["y"] = s.y;
    return j.dump(1) + "\n";
}

RegressionSample sample_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("schema", std::string{}) != kSampleSchema) throw std::runtime_error("unsupported sample schema");
    RegressionSample s;
    s.x = j.at("x").get<std::vector<double>>();
    s.y = j.at("y").get<std::vector<double>>();
    if (j.contains("meta")) {
        const auto& m = j["meta"];
        s.meta.signal = m.value("signal", std::string{});
        s.meta.noise = m.value("noise", std::string{});
        s.meta.seed = m.value("seed", std::uint64_t{0});
    }
    normalize_sample(s);
    return s;
}

RegressionSample load_sample(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) {
        std::stringstream ss;
        ss << in.rdbuf();
        return sample_from_json(ss.str());
    }
    return read_sample_csv(in);
}

void save_sample(const RegressionSample& s, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    if (path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0) out << sample_to_json(s);
    else write_sample_csv(s, out);
}

}  // namespace wavesel
