// Copyright the rbc authors. Licensed under the Apache 2.0 license. See LICENSE in the project root.
#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rbc/error.hpp"

namespace rbc {

struct SvmHyperparams {
    double C = 16.0;
    double gamma = 0.0359;
    double kkt_tolerance = 1e-3;
    // Cap on optimization steps per binary problem; 0 selects 10 * sample count.
    std::uint32_t max_passes = 0;

    void validate() const;
};

double rbf_kernel(std::span<const double> x, std::span<const double> y, double gamma);

// Soft-margin RBF SVM in dual form: f(x) = bias + sum coefficients[i] * k(sv[i], x)
// with coefficients[i] = alpha_i * y_i.
struct BinarySvm {
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coefficients;
    double bias = 0.0;
    double gamma = 0.0;
    bool converged = true;
};

double decision_value(const BinarySvm& m, std::span<const double> x);

// Sign of the decision value, with sign(0) = +1.
int predict_binary(const BinarySvm& m, std::span<const double> x);

// Trains by sequential minimal optimization with deterministic pair selection:
// the largest KKT violator first, then the partner maximizing |E_i - E_j|,
// falling back to an index scan. Labels are +/-1 and both must occur.
BinarySvm smo_train(const std::vector<std::vector<double>>& samples,
                    const std::vector<int>& labels,
                    const SvmHyperparams& hyper);

struct MulticlassSvm {
    std::vector<std::string> class_labels;  // sorted; defines pair order
    std::vector<BinarySvm> machines;        // (i,j), i < j, in enumeration order
    SvmHyperparams hyper;
    std::size_t dimension = 0;
};

// One-against-one training: one BinarySvm per class pair over that pair's
// samples, +1 assigned to the lower-ordered label. Pairwise problems are
// independent and trained on `workers` threads; results do not depend on the
// worker count.
MulticlassSvm train_multiclass(const std::vector<std::vector<double>>& features,
                               const std::vector<std::string>& labels,
                               const SvmHyperparams& hyper,
                               unsigned workers = 1);

// Majority vote over all pairwise machines; ties broken by the larger sum of
// |decision value| over the tied labels' machines, then by label order.
const std::string& predict_class(const MulticlassSvm& m, std::span<const double> x);

// Feature grid the model was trained on, echoed in the model file so the CLI
// can verify model/index agreement.
struct ModelMeta {
    std::uint16_t projections = 0;
    std::uint16_t side = 0;
};

struct LoadedModel {
    MulticlassSvm model;
    ModelMeta meta;
};

// Versioned binary container (magic "RSVM", little-endian, f64 payloads).
void save_model(const std::filesystem::path& path, const MulticlassSvm& model, const ModelMeta& meta);
LoadedModel load_model(const std::filesystem::path& path);

} // namespace rbc
