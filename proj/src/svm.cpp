// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#include "rbc/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "rbc/binio.hpp"
#include "rbc/parallel.hpp"

namespace rbc {

namespace {

// Full Gram matrix for small problems, on-demand evaluation otherwise. Both
// paths produce identical values: the cache stores exactly what a direct
// kernel call returns.
class KernelCache {
public:
    static constexpr std::size_t kDenseLimit = 8192;

    KernelCache(const std::vector<std::vector<double>>& xs, double gamma) : xs_(xs), gamma_(gamma), n_(xs.size()) {
        if (n_ <= kDenseLimit) {
            gram_.resize(n_ * n_);
            for (std::size_t i = 0; i < n_; ++i) {
                gram_[i * n_ + i] = 1.0;
                for (std::size_t j = i + 1; j < n_; ++j) {
                    const double k = rbf_kernel(xs_[i], xs_[j], gamma_);
                    gram_[i * n_ + j] = k;
                    gram_[j * n_ + i] = k;
                }
            }
        }
    }

    double at(std::size_t i, std::size_t j) const {
        if (!gram_.empty())
            return gram_[i * n_ + j];
        if (i == j)
            return 1.0;
        return rbf_kernel(xs_[i], xs_[j], gamma_);
    }

private:
    const std::vector<std::vector<double>>& xs_;
    double gamma_;
    std::size_t n_;
    std::vector<double> gram_;
};

struct SmoState {
    std::vector<double> alphas;
    std::vector<double> errors; // decision(x_i) - y_i
    std::size_t pass_counter = 0;
    double bias = 0.0;
};

// KKT-consistent bias: the mean over free vectors of y_i - g_i where
// g_i = sum_m alpha_m y_m K(m,i); with no free vectors, the midpoint of the
// feasible interval.
double stable_bias(const std::vector<double>& alphas, const std::vector<int>& y, const KernelCache& kernel,
                   double C, const std::vector<double>& g) {
    const std::size_t n = alphas.size();
    (void)kernel;
    double free_sum = 0.0;
    std::size_t free_count = 0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double cand = y[i] - g[i];
        if (alphas[i] > 0.0 && alphas[i] < C) {
            free_sum += cand;
            ++free_count;
        } else if ((alphas[i] == 0.0 && y[i] > 0) || (alphas[i] == C && y[i] < 0)) {
            lo = std::max(lo, cand); // margin constraint bounds the bias below
        } else {
            hi = std::min(hi, cand);
        }
    }
    if (free_count > 0)
        return free_sum / static_cast<double>(free_count);
    if (std::isinf(lo) && std::isinf(hi))
        return 0.0;
    if (std::isinf(lo))
        return hi;
    if (std::isinf(hi))
        return lo;
    return 0.5 * (lo + hi);
}

} // namespace

void SvmHyperparams::validate() const {
    if (!(C > 0.0))
        throw ContractError("penalty C must be positive");
    if (!(gamma > 0.0))
        throw ContractError("kernel gamma must be positive");
    if (!(kkt_tolerance > 0.0))
        throw ContractError("kkt_tolerance must be positive");
}

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma) {
    if (x.size() != y.size())
        throw ContractError("rbf_kernel: dimension mismatch (" + std::to_string(x.size()) + " vs " +
                            std::to_string(y.size()) + ")");
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        d2 += d * d;
    }
    return std::exp(-gamma * d2);
}

double decision_value(const BinarySvm& m, std::span<const double> x) {
    double f = m.bias;
    for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
        f += m.coefficients[i] * rbf_kernel(m.support_vectors[i], x, m.gamma);
    return f;
}

int predict_binary(const BinarySvm& m, std::span<const double> x) {
    return decision_value(m, x) >= 0.0 ? +1 : -1;
}

BinarySvm smo_train(const std::vector<std::vector<double>>& samples, const std::vector<int>& labels,
                    const SvmHyperparams& hyper) {
    hyper.validate();
    const std::size_t n = samples.size();
    if (n != labels.size())
        throw ContractError("smo_train: sample/label count mismatch");
    if (n == 0)
        throw TrainingError("smo_train: no samples");
    const std::size_t dim = samples[0].size();
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (samples[i].size() != dim)
            throw ContractError("smo_train: inconsistent feature dimensions");
        if (labels[i] == +1)
            has_pos = true;
        else if (labels[i] == -1)
            has_neg = true;
        else
            throw ContractError("smo_train: labels must be +1 or -1");
    }
    if (!has_pos || !has_neg)
        throw TrainingError("smo_train: both classes must be present");

    const double C = hyper.C;
    const double tol = hyper.kkt_tolerance;
    const std::size_t max_passes =
        hyper.max_passes > 0 ? hyper.max_passes : 10 * n;
    constexpr double kEps = 1e-12;

    KernelCache kernel(samples, hyper.gamma);
    SmoState st;
    st.alphas.assign(n, 0.0);
    st.errors.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        st.errors[i] = -static_cast<double>(labels[i]); // decision starts at zero

    // Positive when point i violates its KKT condition by more than tol.
    auto violation = [&](std::size_t i) -> double {
        const double r = st.errors[i] * labels[i]; // y*f - 1
        if (st.alphas[i] < C && r < -tol)
            return -r;
        if (st.alphas[i] > 0.0 && r > tol)
            return r;
        return 0.0;
    };

    // Analytic two-variable update. Returns false when no useful progress is
    // possible for this pair.
    auto try_step = [&](std::size_t i, std::size_t j) -> bool {
        if (i == j)
            return false;
        const double yi = labels[i], yj = labels[j];
        const double ai = st.alphas[i], aj = st.alphas[j];
        const double Ei = st.errors[i], Ej = st.errors[j];
        const double s = yi * yj;
        double L, H;
        if (labels[i] != labels[j]) {
            L = std::max(0.0, aj - ai);
            H = std::min(C, C + aj - ai);
        } else {
            L = std::max(0.0, ai + aj - C);
            H = std::min(C, ai + aj);
        }
        if (L >= H)
            return false;
        const double kii = kernel.at(i, i);
        const double kjj = kernel.at(j, j);
        const double kij = kernel.at(i, j);
        const double eta = kii + kjj - 2.0 * kij;
        double aj_new;
        if (eta > 0.0) {
            aj_new = std::clamp(aj + yj * (Ei - Ej) / eta, L, H);
        } else {
            // Objective is linear along the constraint segment; compare ends.
            const double f1 = yi * (Ei + st.bias) - ai * kii - s * aj * kij;
            const double f2 = yj * (Ej + st.bias) - s * ai * kij - aj * kjj;
            const double L1 = ai + s * (aj - L);
            const double H1 = ai + s * (aj - H);
            const double objL = L1 * f1 + L * f2 + 0.5 * L1 * L1 * kii + 0.5 * L * L * kjj + s * L * L1 * kij;
            const double objH = H1 * f1 + H * f2 + 0.5 * H1 * H1 * kii + 0.5 * H * H * kjj + s * H * H1 * kij;
            if (objL < objH - kEps)
                aj_new = L;
            else if (objL > objH + kEps)
                aj_new = H;
            else
                return false;
        }
        if (std::abs(aj_new - aj) < kEps * (aj_new + aj + kEps))
            return false;
        const double ai_new = std::clamp(ai + s * (aj - aj_new), 0.0, C);

        const double di = yi * (ai_new - ai);
        const double dj = yj * (aj_new - aj);
        const double b1 = st.bias - Ei - di * kii - dj * kij;
        const double b2 = st.bias - Ej - di * kij - dj * kjj;
        double b_new;
        if (ai_new > 0.0 && ai_new < C)
            b_new = b1;
        else if (aj_new > 0.0 && aj_new < C)
            b_new = b2;
        else
            b_new = 0.5 * (b1 + b2);
        const double db = b_new - st.bias;
        for (std::size_t k = 0; k < n; ++k)
            st.errors[k] += di * kernel.at(i, k) + dj * kernel.at(j, k) + db;
        st.alphas[i] = ai_new;
        st.alphas[j] = aj_new;
        st.bias = b_new;
        return true;
    };

    // Decision values without bias, for the final bias rule and error refresh.
    auto margins = [&]() {
        std::vector<double> g(n, 0.0);
        for (std::size_t m = 0; m < n; ++m) {
            if (st.alphas[m] == 0.0)
                continue;
            const double w = st.alphas[m] * labels[m];
            for (std::size_t k = 0; k < n; ++k)
                g[k] += w * kernel.at(m, k);
        }
        return g;
    };

    // Re-derive bias and errors from scratch; returns true if every point now
    // satisfies its KKT condition within tol.
    auto refresh_and_check = [&]() -> bool {
        const auto g = margins();
        st.bias = stable_bias(st.alphas, labels, kernel, C, g);
        for (std::size_t k = 0; k < n; ++k)
            st.errors[k] = g[k] + st.bias - labels[k];
        for (std::size_t k = 0; k < n; ++k)
            if (violation(k) > 0.0)
                return false;
        return true;
    };

    bool converged = false;
    bool fresh = false;
    std::vector<std::pair<double, std::size_t>> violators;
    while (st.pass_counter < max_passes) {
        violators.clear();
        for (std::size_t i = 0; i < n; ++i) {
            const double v = violation(i);
            if (v > 0.0)
                violators.emplace_back(-v, i); // sort descending by violation, then by index
        }
        if (violators.empty()) {
            if (fresh || refresh_and_check()) {
                converged = true;
                break;
            }
            fresh = true;
            continue;
        }
        fresh = false;
        std::sort(violators.begin(), violators.end());

        bool stepped = false;
        for (const auto& [neg_v, i1] : violators) {
            // Second choice: maximal |E_i - E_j|, ties to the smallest index.
            std::size_t i2 = n;
            double best_gap = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i1)
                    continue;
                const double gap = std::abs(st.errors[i1] - st.errors[j]);
                if (gap > best_gap) {
                    best_gap = gap;
                    i2 = j;
                }
            }
            if (i2 < n && try_step(i1, i2)) {
                stepped = true;
            } else {
                for (std::size_t j = 0; j < n && !stepped; ++j) {
                    if (j != i1 && j != i2 && try_step(i1, j))
                        stepped = true;
                }
            }
            if (stepped)
                break;
        }
        if (!stepped)
            break; // numerically stuck on the remaining violators
        ++st.pass_counter;
    }
    if (!converged)
        converged = refresh_and_check();

    BinarySvm model;
    model.gamma = hyper.gamma;
    model.bias = st.bias;
    model.converged = converged;
    for (std::size_t i = 0; i < n; ++i) {
        if (st.alphas[i] > 0.0) {
            model.support_vectors.push_back(samples[i]);
            model.coefficients.push_back(st.alphas[i] * labels[i]);
        }
    }
    return model;
}

MulticlassSvm train_multiclass(const std::vector<std::vector<double>>& features,
                               const std::vector<std::string>& labels, const SvmHyperparams& hyper,
                               unsigned workers) {
    hyper.validate();
    if (features.size() != labels.size())
        throw ContractError("train_multiclass: feature/label count mismatch");

    MulticlassSvm model;
    model.hyper = hyper;
    model.dimension = features.empty() ? 0 : features[0].size();

    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < features.size(); ++i)
        by_class[labels[i]].push_back(i);
    for (const auto& [label, members] : by_class) {
        (void)members;
        model.class_labels.push_back(label);
    }
    const std::size_t k = model.class_labels.size();
    if (k < 2)
        throw TrainingError("train_multiclass: need at least 2 classes, got " + std::to_string(k));

    struct Pair {
        std::size_t a, b;
    };
    std::vector<Pair> pairs;
    pairs.reserve(k * (k - 1) / 2);
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
            pairs.push_back({a, b});

    model.machines.resize(pairs.size());
    parallel_for(pairs.size(), workers, [&](std::size_t p) {
        const auto& lo = by_class.at(model.class_labels[pairs[p].a]);
        const auto& hi = by_class.at(model.class_labels[pairs[p].b]);
        std::vector<std::vector<double>> xs;
        std::vector<int> ys;
        xs.reserve(lo.size() + hi.size());
        ys.reserve(lo.size() + hi.size());
        for (std::size_t i : lo) {
            xs.push_back(features[i]);
            ys.push_back(+1); // lower-ordered label is the positive class
        }
        for (std::size_t i : hi) {
            xs.push_back(features[i]);
            ys.push_back(-1);
        }
        model.machines[p] = smo_train(xs, ys, hyper);
    });
    return model;
}

const std::string& predict_class(const MulticlassSvm& m, std::span<const double> x) {
    const std::size_t k = m.class_labels.size();
    std::vector<int> votes(k, 0);
    std::vector<double> evidence(k, 0.0);
    std::size_t p = 0;
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = a + 1; b < k; ++b, ++p) {
            const double d = decision_value(m.machines[p], x);
            ++votes[d >= 0.0 ? a : b];
            evidence[a] += std::abs(d);
            evidence[b] += std::abs(d);
        }
    }
    std::size_t best = 0;
    for (std::size_t c = 1; c < k; ++c) {
        if (votes[c] > votes[best] || (votes[c] == votes[best] && evidence[c] > evidence[best]))
            best = c;
    }
    return m.class_labels[best];
}

namespace {
constexpr char kModelMagic[4] = {'R', 'S', 'V', 'M'};
constexpr std::uint8_t kModelVersion = 1;
} // namespace

void save_model(const std::filesystem::path& path, const MulticlassSvm& model, const ModelMeta& meta) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw DataError("cannot open model file for writing: " + path.string());
    ByteWriter w(out);
    w.bytes(std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(kModelMagic), 4));
    w.u8(kModelVersion);
    w.u16(meta.projections);
    w.u16(meta.side);
    w.f64(model.hyper.C);
    w.f64(model.hyper.gamma);
    w.f64(model.hyper.kkt_tolerance);
    w.u32(model.hyper.max_passes);
    w.u16(static_cast<std::uint16_t>(model.class_labels.size()));
    for (const auto& label : model.class_labels)
        w.str16(label);
    w.u32(static_cast<std::uint32_t>(model.dimension));
    w.u32(static_cast<std::uint32_t>(model.machines.size()));
    for (const auto& machine : model.machines) {
        w.u8(machine.converged ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(machine.support_vectors.size()));
        w.f64(machine.bias);
        for (double c : machine.coefficients)
            w.f64(c);
        for (const auto& sv : machine.support_vectors)
            for (double v : sv)
                w.f64(v);
    }
    out.flush();
    if (!out)
        throw DataError("failed writing model file: " + path.string());
}

LoadedModel load_model(const std::filesystem::path& path) {
    ByteReader r(read_file_bytes(path));
    const auto magic = r.bytes(4);
    if (std::memcmp(magic.data(), kModelMagic, 4) != 0)
        throw FormatError(path.string() + ": bad model magic at byte 0");
    const std::uint8_t version = r.u8();
    if (version != kModelVersion)
        throw FormatError(path.string() + ": unsupported model version " + std::to_string(version) +
                          " at byte 4");
    LoadedModel loaded;
    loaded.meta.projections = r.u16();
    loaded.meta.side = r.u16();
    loaded.model.hyper.C = r.f64();
    loaded.model.hyper.gamma = r.f64();
    loaded.model.hyper.kkt_tolerance = r.f64();
    loaded.model.hyper.max_passes = r.u32();
    const std::size_t k = r.u16();
    for (std::size_t i = 0; i < k; ++i)
        loaded.model.class_labels.push_back(r.str16());
    loaded.model.dimension = r.u32();
    const std::size_t machine_count = r.u32();
    if (k >= 2 && machine_count != k * (k - 1) / 2)
        throw FormatError(path.string() + ": machine count " + std::to_string(machine_count) +
                          " does not match " + std::to_string(k) + " classes");
    loaded.model.machines.resize(machine_count);
    for (auto& machine : loaded.model.machines) {
        machine.gamma = loaded.model.hyper.gamma;
        machine.converged = r.u8() != 0;
        const std::size_t sv_count = r.u32();
        machine.bias = r.f64();
        machine.coefficients.resize(sv_count);
        for (auto& c : machine.coefficients)
            c = r.f64();
        machine.support_vectors.assign(sv_count, std::vector<double>(loaded.model.dimension));
        for (auto& sv : machine.support_vectors)
            for (auto& v : sv)
                v = r.f64();
    }
    r.expect_end();
    return loaded;
}

} // namespace rbc
