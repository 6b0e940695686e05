#pragma once

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "ars/errors.hpp"
#include "ars/hash.hpp"
#include "ars/rng.hpp"

namespace ars {

// Dense coverage regressor: rectifier hidden layers, logistic output so the
// prediction stays in (0, 1).
struct ScorerModel {
    std::vector<int> layer_sizes;           // e.g. {4103, 256, 64, 1}
    std::vector<Eigen::MatrixXd> weights;   // weights[l] is (out x in)
    std::vector<Eigen::VectorXd> biases;

    int input_size() const { return layer_sizes.front(); }
    size_t layer_count() const { return weights.size(); }

    // Deterministic scaled-uniform initialization (Glorot-style bounds).
    static ScorerModel init(const std::vector<int>& sizes, uint64_t seed) {
        if (sizes.size() < 2) throw Error("ScorerModel: need at least input and output layers");
        ScorerModel m;
        m.layer_sizes = sizes;
        Rng rng(mix_seed(seed, 0x6d6f64656cull));
        for (size_t l = 0; l + 1 < sizes.size(); ++l) {
            const int in = sizes[l], out = sizes[l + 1];
            const double bound = std::sqrt(6.0 / (in + out));
            Eigen::MatrixXd w(out, in);
            for (int r = 0; r < out; ++r)
                for (int c = 0; c < in; ++c) w(r, c) = rng.uniform(-bound, bound);
            m.weights.push_back(std::move(w));
            m.biases.push_back(Eigen::VectorXd::Zero(out));
        }
        return m;
    }

    // Batched forward pass; X is (features x samples), result is per-sample.
    Eigen::VectorXd forward_batch(const Eigen::MatrixXd& X) const {
        if (X.rows() != input_size())
            throw ShapeMismatch("surrogate_forward: feature length " + std::to_string(X.rows()) +
                                " != model input " + std::to_string(input_size()));
        Eigen::MatrixXd a = X;
        for (size_t l = 0; l < weights.size(); ++l) {
            Eigen::MatrixXd z = (weights[l] * a).colwise() + biases[l];
            if (l + 1 < weights.size())
                a = z.cwiseMax(0.0);
            else
                a = (1.0 + (-z.array()).exp()).inverse().matrix();
        }
        return a.transpose().col(0);
    }

    double forward(const Eigen::VectorXd& x) const { return forward_batch(x)(0); }

    uint64_t digest() const {
        Fnv1a h;
        for (int s : layer_sizes) h.update_value(s);
        for (size_t l = 0; l < weights.size(); ++l) {
            h.update(weights[l].data(), sizeof(double) * weights[l].size());
            h.update(biases[l].data(), sizeof(double) * biases[l].size());
        }
        return h.digest();
    }
};

inline double surrogate_forward(const ScorerModel& model, const Eigen::VectorXd& features) {
    return model.forward(features);
}

// ---------------------------------------------------------------------------
// Training: SGD with momentum on MSE.

struct TrainHyper {
    double learning_rate = 1e-3;
    double momentum = 0.9;
    int batch_size = 64;
    int max_epochs = 200;
    int patience = 10;  // epochs without val-MSE improvement before stopping
    uint64_t seed = 1;
};

struct TrainReport {
    int epochs_run = 0;
    double train_mse = 0.0;
    double val_mse = 0.0;
    double test_mse = 0.0;
    double spearman_test = 0.0;  // rank correlation of predictions vs targets
    std::vector<double> train_curve;
    std::vector<double> val_curve;
};

namespace detail {

struct LayerGrads {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;
};

// Mean-squared-error loss and its gradients over a batch (X: features x n).
inline double backprop_batch(const ScorerModel& m, const Eigen::MatrixXd& X,
                             const Eigen::VectorXd& y, LayerGrads* grads) {
    const auto n = X.cols();
    std::vector<Eigen::MatrixXd> acts;  // post-activation values per layer
    acts.reserve(m.weights.size() + 1);
    acts.push_back(X);
    for (size_t l = 0; l < m.weights.size(); ++l) {
        Eigen::MatrixXd z = (m.weights[l] * acts.back()).colwise() + m.biases[l];
        if (l + 1 < m.weights.size())
            acts.push_back(z.cwiseMax(0.0));
        else
            acts.push_back((1.0 + (-z.array()).exp()).inverse().matrix());
    }
    const Eigen::VectorXd pred = acts.back().transpose().col(0);
    const Eigen::VectorXd err = pred - y;
    const double loss = err.squaredNorm() / static_cast<double>(n);

    // d(loss)/d(pred), then back through the logistic and rectifier layers.
    Eigen::MatrixXd delta =
        (2.0 / static_cast<double>(n)) *
        (err.transpose().array() * acts.back().array() * (1.0 - acts.back().array())).matrix();
    for (size_t l = m.weights.size(); l-- > 0;) {
        grads->dW[l] = delta * acts[l].transpose();
        grads->db[l] = delta.rowwise().sum();
        if (l > 0) {
            delta = (m.weights[l].transpose() * delta).array() *
                    (acts[l].array() > 0.0).cast<double>();
        }
    }
    return loss;
}

inline double eval_mse(const ScorerModel& m, const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.cols() == 0) return 0.0;
    return (m.forward_batch(X) - y).squaredNorm() / static_cast<double>(X.cols());
}

}  // namespace detail

// Ranks with average ties, then Pearson on the ranks.
inline double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b);

// Trains on the train split, early-stops on the validation split and keeps
// the best-validation weights. Throws Divergence if the loss leaves the reals.
inline ScorerModel train_surrogate(const Eigen::MatrixXd& X_train, const Eigen::VectorXd& y_train,
                                   const Eigen::MatrixXd& X_val, const Eigen::VectorXd& y_val,
                                   const Eigen::MatrixXd& X_test, const Eigen::VectorXd& y_test,
                                   const std::vector<int>& layer_sizes, const TrainHyper& hyper,
                                   TrainReport* report) {
    if (X_train.cols() == 0) throw Error("train_surrogate: empty train split");
    ScorerModel model = ScorerModel::init(layer_sizes, hyper.seed);

    detail::LayerGrads grads, velocity;
    for (size_t l = 0; l < model.weights.size(); ++l) {
        grads.dW.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
        grads.db.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
        velocity.dW.push_back(grads.dW[l]);
        velocity.db.push_back(grads.db[l]);
    }

    Rng rng(mix_seed(hyper.seed, 0x7368756666ull));
    std::vector<int> order(static_cast<size_t>(X_train.cols()));
    std::iota(order.begin(), order.end(), 0);

    ScorerModel best = model;
    double best_val = kInf;
    int since_best = 0;
    TrainReport rep;

    for (int epoch = 0; epoch < hyper.max_epochs; ++epoch) {
        // Fisher-Yates with the deterministic RNG.
        for (size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(i) - 1))]);

        double epoch_loss = 0.0;
        int batches = 0;
        for (size_t start = 0; start < order.size(); start += static_cast<size_t>(hyper.batch_size)) {
            const size_t end = std::min(order.size(), start + static_cast<size_t>(hyper.batch_size));
            Eigen::MatrixXd Xb(X_train.rows(), end - start);
            Eigen::VectorXd yb(end - start);
            for (size_t i = start; i < end; ++i) {
                Xb.col(static_cast<Eigen::Index>(i - start)) = X_train.col(order[i]);
                yb(static_cast<Eigen::Index>(i - start)) = y_train(order[i]);
            }
            epoch_loss += detail::backprop_batch(model, Xb, yb, &grads);
            ++batches;
            for (size_t l = 0; l < model.weights.size(); ++l) {
                velocity.dW[l] = hyper.momentum * velocity.dW[l] - hyper.learning_rate * grads.dW[l];
                velocity.db[l] = hyper.momentum * velocity.db[l] - hyper.learning_rate * grads.db[l];
                model.weights[l] += velocity.dW[l];
                model.biases[l] += velocity.db[l];
            }
        }
        epoch_loss /= std::max(batches, 1);
        if (!std::isfinite(epoch_loss))
            throw Divergence("train_surrogate: non-finite train MSE at epoch " +
                             std::to_string(epoch));

        const double val = detail::eval_mse(model, X_val, y_val);
        rep.train_curve.push_back(epoch_loss);
        rep.val_curve.push_back(val);
        rep.epochs_run = epoch + 1;
        if (val < best_val - 1e-9) {
            best_val = val;
            best = model;
            since_best = 0;
        } else if (++since_best >= hyper.patience) {
            break;
        }
    }

    if (X_val.cols() > 0) model = best;
    rep.train_mse = detail::eval_mse(model, X_train, y_train);
    rep.val_mse = detail::eval_mse(model, X_val, y_val);
    rep.test_mse = detail::eval_mse(model, X_test, y_test);
    if (X_test.cols() > 0) {
        const Eigen::VectorXd pred = model.forward_batch(X_test);
        std::vector<double> p(pred.data(), pred.data() + pred.size());
        std::vector<double> t(y_test.data(), y_test.data() + y_test.size());
        rep.spearman_test = spearman_correlation(p, t);
    }
    if (report) *report = rep;
    return model;
}

inline double spearman_correlation(const std::vector<double>& a, const std::vector<double>& b) {
    const size_t n = a.size();
    if (n < 2 || b.size() != n) return 0.0;
    auto ranks = [](const std::vector<double>& v) {
        const size_t n = v.size();
        std::vector<size_t> idx(n);
        std::iota(idx.begin(), idx.end(), size_t{0});
        std::sort(idx.begin(), idx.end(), [&](size_t i, size_t j) { return v[i] < v[j]; });
        std::vector<double> r(n);
        size_t i = 0;
        while (i < n) {
            size_t j = i;
            while (j + 1 < n && v[idx[j + 1]] == v[idx[i]]) ++j;
            const double avg = 0.5 * (i + j) + 1.0;  // average rank over the tie run
            for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
            i = j + 1;
        }
        return r;
    };
    const std::vector<double> ra = ranks(a), rb = ranks(b);
    double ma = 0.0, mb = 0.0;
    for (size_t i = 0; i < n; ++i) { ma += ra[i]; mb += rb[i]; }
    ma /= n; mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (size_t i = 0; i < n; ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) return 0.0;
    return cov / std::sqrt(va * vb);
}

// ---------------------------------------------------------------------------
// Model file: "ARSMODL1" magic, u32 layer count, u32 sizes, then per layer
// row-major weight matrix and bias vector as little-endian 64-bit floats.

inline void save_model(const ScorerModel& m, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path);
    out.write("ARSMODL1", 8);
    const uint32_t n = static_cast<uint32_t>(m.layer_sizes.size());
    out.write(reinterpret_cast<const char*>(&n), 4);
    for (int s : m.layer_sizes) {
        const uint32_t u = static_cast<uint32_t>(s);
        out.write(reinterpret_cast<const char*>(&u), 4);
    }
    for (size_t l = 0; l < m.weights.size(); ++l) {
        for (Eigen::Index r = 0; r < m.weights[l].rows(); ++r)
            for (Eigen::Index c = 0; c < m.weights[l].cols(); ++c) {
                const double v = m.weights[l](r, c);
                out.write(reinterpret_cast<const char*>(&v), 8);
            }
        out.write(reinterpret_cast<const char*>(m.biases[l].data()),
                  static_cast<std::streamsize>(8 * m.biases[l].size()));
    }
}

inline ScorerModel load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open model file: " + path);
    char magic[8];
    in.read(magic, 8);
    if (!in || std::string(magic, 8) != "ARSMODL1")
        throw MalformedDocument("model file: bad magic");
    uint32_t n = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    if (!in || n < 2 || n > 64) throw MalformedDocument("model file: bad layer count");
    std::vector<int> sizes(n);
    for (uint32_t i = 0; i < n; ++i) {
        uint32_t s = 0;
        in.read(reinterpret_cast<char*>(&s), 4);
        sizes[i] = static_cast<int>(s);
    }
    ScorerModel m;
    m.layer_sizes = sizes;
    for (uint32_t l = 0; l + 1 < n; ++l) {
        Eigen::MatrixXd w(sizes[l + 1], sizes[l]);
        for (Eigen::Index r = 0; r < w.rows(); ++r)
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                double v;
                in.read(reinterpret_cast<char*>(&v), 8);
                w(r, c) = v;
            }
        Eigen::VectorXd b(sizes[l + 1]);
        in.read(reinterpret_cast<char*>(b.data()), static_cast<std::streamsize>(8 * b.size()));
        if (!in) throw MalformedDocument("model file: truncated weights");
        m.weights.push_back(std::move(w));
        m.biases.push_back(std::move(b));
    }
    return m;
}

}  // namespace ars
