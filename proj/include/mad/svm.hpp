#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mad/error.hpp"
#include "mad/feature.hpp"
#include "mad/random.hpp"

namespace mad {

struct KernelParams {
    int degree = 3;
    double scale = 1.0;
    double offset = 1.0;
};

/// (offset + (u.v)/scale)^degree
inline double poly_kernel(std::span<const double> u, std::span<const double> v,
                          const KernelParams& kp = {}) {
    if (u.size() != v.size()) fail(errc::dimension_mismatch, "kernel inputs differ in length");
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v[i];
    const double base = kp.offset + dot / kp.scale;
    double k = 1.0;
    for (int d = 0; d < kp.degree; ++d) k *= base;
    return k;
}

struct Standardization {
    std::vector<double> mean;
    std::vector<double> stddev; // entries of 0 are treated as 1 when applying
};

struct TrainConfig {
    double C = 1.0;
    double kkt_tolerance = 1e-3;
    int max_passes = 10; // consecutive sweeps without an alpha change before giving up
    std::uint64_t seed = 0;
    bool standardize = false;
    KernelParams kernel{};
};

/// Two-class decision model: score(x) = sum_i dual_coefs[i] * K(sv_i, x) + bias,
/// positive scores meaning morph. dual_coefs are alpha_i * y_i with
/// y = +1 for morph and -1 for genuine.
struct SvmModel {
    KernelParams kernel{};
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> dual_coefs;
    double bias = 0.0;
    std::optional<Standardization> standardization;
    FeatureKind kind = FeatureKind::mciq;
};

struct Prediction {
    Label label = Label::genuine;
    double score = 0.0;
};

namespace detail {

inline std::vector<double> standardized(const Standardization& st, std::span<const double> x) {
    std::vector<double> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double sd = st.stddev[i] > 0.0 ? st.stddev[i] : 1.0;
        out[i] = (x[i] - st.mean[i]) / sd;
    }
    return out;
}

// Sequential minimal optimization (Platt). Maintains an error cache
// E_i = f(x_i) - y_i and picks the second working-set index by the largest
// |E_i - E_j|, falling back to seeded scans.
class SmoSolver {
public:
    SmoSolver(const std::vector<std::vector<double>>& x, const std::vector<double>& y,
              const TrainConfig& cfg)
        : x_(x), y_(y), cfg_(cfg), m_(x.size()), rng_(cfg.seed) {
        alpha_.assign(m_, 0.0);
        errors_.resize(m_);
        for (std::size_t i = 0; i < m_; ++i) errors_[i] = -y_[i]; // f == 0 initially
        const std::size_t gram_cap = 2500;
        if (m_ <= gram_cap) {
            gram_.assign(m_ * m_, 0.0);
            for (std::size_t i = 0; i < m_; ++i)
                for (std::size_t j = i; j < m_; ++j)
                    gram_[i * m_ + j] = gram_[j * m_ + i] = poly_kernel(x_[i], x_[j], cfg_.kernel);
        }
    }

    void solve() {
        bool examine_all = true;
        int idle_sweeps = 0;
        long sweeps = 0;
        const long sweep_cap = 20000;
        while (sweeps++ < sweep_cap) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < m_; ++i) {
                if (examine_all || is_free(alpha_[i])) changed += examine(i);
            }
            if (changed == 0) {
                if (examine_all) break; // every sample satisfies KKT within tolerance
                if (++idle_sweeps >= cfg_.max_passes) break;
                examine_all = true;
            } else {
                idle_sweeps = 0;
                examine_all = false;
            }
        }
    }

    const std::vector<double>& alpha() const { return alpha_; }
    double bias() const { return b_; }

private:
    double kernel_at(std::size_t i, std::size_t j) const {
        if (!gram_.empty()) return gram_[i * m_ + j];
        return poly_kernel(x_[i], x_[j], cfg_.kernel);
    }

    bool is_free(double a) const { return a > 0.0 && a < cfg_.C; }

    std::size_t examine(std::size_t i2) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const bool violates =
            (r2 < -cfg_.kkt_tolerance && a2 < cfg_.C) || (r2 > cfg_.kkt_tolerance && a2 > 0.0);
        if (!violates) return 0;

        // heuristic second choice: maximal |E1 - E2| among free multipliers
        std::size_t best = m_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (!is_free(alpha_[i])) continue;
            const double gap = std::fabs(errors_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < m_ && take_step(best, i2)) return 1;

        const std::size_t start1 = static_cast<std::size_t>(rng_.below(m_));
        for (std::size_t k = 0; k < m_; ++k) {
            const std::size_t i1 = (start1 + k) % m_;
            if (is_free(alpha_[i1]) && take_step(i1, i2)) return 1;
        }
        const std::size_t start2 = static_cast<std::size_t>(rng_.below(m_));
        for (std::size_t k = 0; k < m_; ++k) {
            const std::size_t i1 = (start2 + k) % m_;
            if (take_step(i1, i2)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        const double a1_old = alpha_[i1], a2_old = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = errors_[i1], e2 = errors_[i2];
        const double s = y1 * y2;
        const double C = cfg_.C;

        double L, H;
        if (y1 != y2) {
            L = std::max(0.0, a2_old - a1_old);
            H = std::min(C, C + a2_old - a1_old);
        } else {
            L = std::max(0.0, a1_old + a2_old - C);
            H = std::min(C, a1_old + a2_old);
        }
        if (H - L < 1e-12 * C) return false;

        const double k11 = kernel_at(i1, i1);
        const double k12 = kernel_at(i1, i2);
        const double k22 = kernel_at(i2, i2);
        const double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2_old + y2 * (e1 - e2) / eta;
            a2_new = std::clamp(a2_new, L, H);
        } else {
            // objective at both clip bounds (Platt's degenerate-eta branch)
            const double f1 = y1 * e1 - a1_old * k11 - s * a2_old * k12;
            const double f2 = y2 * e2 - a2_old * k22 - s * a1_old * k12;
            const double l1 = a1_old + s * (a2_old - L);
            const double h1 = a1_old + s * (a2_old - H);
            const double obj_l = l1 * f1 + L * f2 + 0.5 * l1 * l1 * k11 + 0.5 * L * L * k22 +
                                 s * L * l1 * k12;
            const double obj_h = h1 * f1 + H * f2 + 0.5 * h1 * h1 * k11 + 0.5 * H * H * k22 +
                                 s * H * h1 * k12;
            if (obj_l < obj_h - 1e-12) {
                a2_new = L;
            } else if (obj_l > obj_h + 1e-12) {
                a2_new = H;
            } else {
                return false;
            }
        }
        if (std::fabs(a2_new - a2_old) < 1e-12 * (a2_new + a2_old + 1e-12)) return false;

        const double a1_new = a1_old + s * (a2_old - a2_new);
        const double d1 = a1_new - a1_old;
        const double d2 = a2_new - a2_old;

        const double b1 = b_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        const double b2 = b_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        double b_new;
        if (is_free(a1_new)) {
            b_new = b1;
        } else if (is_free(a2_new)) {
            b_new = b2;
        } else {
            b_new = 0.5 * (b1 + b2);
        }
        const double db = b_new - b_;

        for (std::size_t k = 0; k < m_; ++k)
            errors_[k] += y1 * d1 * kernel_at(i1, k) + y2 * d2 * kernel_at(i2, k) + db;
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        b_ = b_new;
        return true;
    }

    const std::vector<std::vector<double>>& x_;
    const std::vector<double>& y_;
    TrainConfig cfg_;
    std::size_t m_;
    Rng rng_;
    std::vector<double> alpha_;
    std::vector<double> errors_;
    std::vector<double> gram_;
    double b_ = 0.0;
};

} // namespace detail

/// Train the soft-margin SVM dual by sequential minimal optimization. On
/// return every sample satisfies its KKT condition within
/// cfg.kkt_tolerance. Only samples whose multiplier is meaningfully nonzero
/// (relative to the largest one) are stored as support vectors.
inline SvmModel train_svm(const std::vector<FeatureVector>& features, const TrainConfig& cfg = {}) {
    if (cfg.C <= 0.0 || cfg.kkt_tolerance <= 0.0)
        fail(errc::invalid_config, "C and kkt_tolerance must be positive");
    const std::size_t m = features.size();
    if (m == 0) fail(errc::single_class, "no training samples");
    const std::size_t dim = features[0].values.size();
    const FeatureKind kind = features[0].kind;
    bool has_genuine = false, has_morph = false;
    for (const auto& fv : features) {
        if (fv.values.size() != dim)
            fail(errc::dimension_mismatch, "training vectors differ in length");
        if (fv.kind != kind) fail(errc::kind_mismatch, "training vectors differ in kind");
        for (double v : fv.values)
            if (!std::isfinite(v))
                fail(errc::non_finite_feature, "non-finite value in sample " + fv.sample_id);
        (fv.label == Label::morph ? has_morph : has_genuine) = true;
    }
    if (!has_genuine || !has_morph) fail(errc::single_class, "need samples from both classes");

    SvmModel model;
    model.kernel = cfg.kernel;
    model.kind = kind;

    std::vector<std::vector<double>> x(m);
    std::vector<double> y(m);
    for (std::size_t i = 0; i < m; ++i) {
        x[i] = features[i].values;
        y[i] = features[i].label == Label::morph ? 1.0 : -1.0;
    }
    if (cfg.standardize) {
        Standardization st;
        st.mean.assign(dim, 0.0);
        st.stddev.assign(dim, 0.0);
        for (const auto& row : x)
            for (std::size_t j = 0; j < dim; ++j) st.mean[j] += row[j];
        for (std::size_t j = 0; j < dim; ++j) st.mean[j] /= static_cast<double>(m);
        if (m > 1) {
            for (const auto& row : x)
                for (std::size_t j = 0; j < dim; ++j) {
                    const double c = row[j] - st.mean[j];
                    st.stddev[j] += c * c;
                }
            for (std::size_t j = 0; j < dim; ++j)
                st.stddev[j] = std::sqrt(st.stddev[j] / static_cast<double>(m - 1));
        }
        for (auto& row : x) row = detail::standardized(st, row);
        model.standardization = std::move(st);
    }

    detail::SmoSolver solver(x, y, cfg);
    solver.solve();

    const auto& alpha = solver.alpha();
    double max_alpha = 0.0;
    for (double a : alpha) max_alpha = std::max(max_alpha, std::fabs(a));
    const double cutoff = 1e-12 * std::max(1.0, max_alpha);
    for (std::size_t i = 0; i < m; ++i) {
        if (std::fabs(alpha[i]) > cutoff) {
            model.support_vectors.push_back(x[i]);
            model.dual_coefs.push_back(alpha[i] * y[i]);
        }
    }
    model.bias = solver.bias();
    return model;
}

inline double decision_score(const SvmModel& model, std::span<const double> x) {
    if (!model.support_vectors.empty() && x.size() != model.support_vectors[0].size())
        fail(errc::dimension_mismatch, "input length does not match the model");
    std::vector<double> xs;
    std::span<const double> in = x;
    if (model.standardization) {
        if (x.size() != model.standardization->mean.size())
            fail(errc::dimension_mismatch, "input length does not match the model");
        xs = detail::standardized(*model.standardization, x);
        in = xs;
    }
    double score = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        score += model.dual_coefs[i] * poly_kernel(model.support_vectors[i], in, model.kernel);
    return score;
}

/// Positive score -> morph; a tied score of exactly 0 stays genuine.
inline Prediction predict(const SvmModel& model, std::span<const double> x) {
    const double score = decision_score(model, x);
    return {score > 0.0 ? Label::morph : Label::genuine, score};
}

} // namespace mad
