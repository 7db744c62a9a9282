#include "wavesel/filters.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <map>
#include <mutex>
#include <stdexcept>

namespace wavesel {

namespace {

// Extremal-phase Daubechies scaling filters, normalized to sum sqrt(2).
// closed form; the usual printed digits are off around 1e-13
const double kS3 = std::sqrt(3.0), kN2 = 4.0 * std::sqrt(2.0);
const std::vector<double> kDb2 = {(1 + kS3) / kN2, (3 + kS3) / kN2, (3 - kS3) / kN2, (1 - kS3) / kN2};
const std::vector<double> kDb4 = {0.23037781330889651,  0.71484657055291567,  0.63088076792985892,
                                  -0.027983769416859854, -0.18703481171909309, 0.030841381835560764,
                                  0.032883011666885197,  -0.010597401785069032};
const std::vector<double> kDb8 = {
    0.054415842243104008,  0.31287159091429995,     0.67563073629728976,    0.58535468365420673,
    -0.015829105256349306, -0.28401554296154691,    0.00047248457391328279, 0.12874742662047847,
    -0.017369301001807547, -0.044088253930794755,   0.013981027917398282,   0.0087460940474057766,
    -0.0048703529934515741, -0.00039174037337694705, 0.00067544940645056933, -0.00011747678412476953};

}  // namespace

double OrthoFilter::orthonormality_defect(std::span<const double> h) {
    const std::ptrdiff_t L = static_cast<std::ptrdiff_t>(h.size());
    double sum = 0.0;
    for (double v : h) sum += v;
    double defect = std::abs(sum - std::sqrt(2.0));
    for (std::ptrdiff_t m = 0; 2 * m < L; ++m) {
        double acc = 0.0;
        for (std::ptrdiff_t k = 0; k + 2 * m < L; ++k) acc += h[k] * h[k + 2 * m];
        defect = std::max(defect, std::abs(acc - (m == 0 ? 1.0 : 0.0)));
    }
    return defect;
}

OrthoFilter::OrthoFilter(std::string id, std::vector<double> h, double tol) : id_(std::move(id)), h_(std::move(h)) {
    if (h_.size() < 2 || h_.size() % 2 != 0)
        throw std::invalid_argument("filter '" + id_ + "': length must be even and >= 2");
    const double defect = orthonormality_defect(h_);
    if (!(defect <= tol))
        throw std::invalid_argument("filter '" + id_ + "': orthonormality defect " + std::to_string(defect));
    const std::size_t L = h_.size();
    g_.resize(L);
    for (std::size_t k = 0; k < L; ++k) g_[k] = ((k % 2 == 0) ? 1.0 : -1.0) * h_[L - 1 - k];
}

OrthoFilter haar_filter() {
    const double r = 1.0 / std::sqrt(2.0);
    return OrthoFilter("haar", {r, r});
}

OrthoFilter daubechies_filter(int vanishing_moments) {
    switch (vanishing_moments) {
        case 1: {
            const double r = 1.0 / std::sqrt(2.0);
            return OrthoFilter("db1", {r, r});
        }
        case 2: return OrthoFilter("db2", kDb2);
        case 4: return OrthoFilter("db4", kDb4);
        case 8: return OrthoFilter("db8", kDb8);
        default: break;
    }
    throw std::invalid_argument("daubechies_filter: supported vanishing moments are 1, 2, 4, 8");
}

OrthoFilter filter_by_name(const std::string& name) {
    if (name == "haar") return haar_filter();
    if (name.size() > 2 && name.compare(0, 2, "db") == 0) {
        try {
            return daubechies_filter(std::stoi(name.substr(2)));
        } catch (const std::logic_error&) {
        }
    }
    throw std::invalid_argument("unknown filter '" + name + "'");
}

WaveletTables::WaveletTables(const OrthoFilter& filter, int resolution)
    : resolution_(resolution),
      scale_(std::ldexp(1.0, resolution)),
      support_(static_cast<double>(filter.length() - 1)),
      piecewise_constant_(filter.length() == 2) {
    if (resolution < 0 || resolution > 20) throw std::invalid_argument("WaveletTables: resolution out of range");
    const auto h = filter.lowpass();
    const auto g = filter.highpass();
    const std::ptrdiff_t L = static_cast<std::ptrdiff_t>(filter.length());
    const std::ptrdiff_t step = std::ptrdiff_t{1} << resolution;
    const std::ptrdiff_t last = (L - 1) * step;
    phi_.assign(static_cast<std::size_t>(last + 1), 0.0);
    psi_.assign(static_cast<std::size_t>(last + 1), 0.0);

    // phi(n) = sqrt2 sum_k h_k phi(2n - k): eigenvector for eigenvalue 1, sum phi(n) = 1.
    std::vector<double> ints(static_cast<std::size_t>(L), 0.0);
    if (L == 2) {
        ints[0] = 1.0;
    } else {
        Eigen::MatrixXd M = Eigen::MatrixXd::Zero(L, L);
        for (std::ptrdiff_t n = 0; n < L; ++n)
            for (std::ptrdiff_t m = 0; m < L; ++m) {
                const std::ptrdiff_t k = 2 * n - m;
                if (k >= 0 && k < L) M(n, m) = std::sqrt(2.0) * h[k];
            }
        Eigen::MatrixXd A = M - Eigen::MatrixXd::Identity(L, L);
        A.row(L - 1).setOnes();
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(L);
        rhs(L - 1) = 1.0;
        const Eigen::VectorXd v = A.fullPivLu().solve(rhs);
        for (std::ptrdiff_t n = 0; n < L; ++n) ints[n] = v(n);
        ints[0] = 0.0;
        ints[L - 1] = 0.0;
    }
    for (std::ptrdiff_t n = 0; n < L; ++n) phi_[static_cast<std::size_t>(n * step)] = ints[n];

    auto phi_at = [&](std::ptrdiff_t idx) { return (idx < 0 || idx > last) ? 0.0 : phi_[idx]; };
    for (int r = 1; r <= resolution; ++r) {
        const std::ptrdiff_t stride = std::ptrdiff_t{1} << (resolution - r);
        for (std::ptrdiff_t i = stride; i <= last; i += 2 * stride) {
            double acc = 0.0;
            for (std::ptrdiff_t k = 0; k < L; ++k) acc += h[k] * phi_at(2 * i - k * step);
            phi_[i] = std::sqrt(2.0) * acc;
        }
    }
    for (std::ptrdiff_t i = 0; i <= last; ++i) {
        double acc = 0.0;
        for (std::ptrdiff_t k = 0; k < L; ++k) acc += g[k] * phi_at(2 * i - k * step);
        psi_[i] = std::sqrt(2.0) * acc;
    }
}

std::vector<double> WaveletTables::phi_integer_values() const {
    const std::size_t L = static_cast<std::size_t>(support_) + 1;
    const std::size_t step = std::size_t{1} << resolution_;
    std::vector<double> out(L);
    for (std::size_t n = 0; n < L; ++n) out[n] = phi_[n * step];
    return out;
}

double WaveletTables::lookup(const std::vector<double>& table, double x) const noexcept {
    if (!(x >= 0.0) || x >= support_) return 0.0;
    const double pos = x * scale_;
    const auto i = static_cast<std::size_t>(pos);
    if (piecewise_constant_ || i + 1 >= table.size()) return table[i];
    const double frac = pos - static_cast<double>(i);
    return table[i] + frac * (table[i + 1] - table[i]);
}

std::shared_ptr<const WaveletTables> WaveletTables::cached(const OrthoFilter& filter) {
    static std::mutex mu;
    static std::map<std::string, std::shared_ptr<const WaveletTables>> cache;
    std::lock_guard lock(mu);
    std::string key = filter.id();
    for (double v : filter.lowpass()) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "|%a", v);
        key += buf;
    }
    auto& slot = cache[key];
    if (!slot) slot = std::make_shared<const WaveletTables>(filter, 15);
    return slot;
}

}  // namespace wavesel
