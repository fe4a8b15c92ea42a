#include "blocksplit/logistic.hpp"

#include "blocksplit/hash.hpp"

#include <cmath>
#include <cstring>
#include <string>

namespace blocksplit {

namespace {

/// log(1 + exp(t)) without overflow.
double softplus(double t) {
    return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

/// 1 / (1 + exp(t)).
double sigmoid_neg(double t) {
    if (t >= 0.0) {
        const double e = std::exp(-t);
        return e / (1.0 + e);
    }
    return 1.0 / (1.0 + std::exp(t));
}

template <class T>
std::uint64_t hash_bytes(const T& value, std::uint64_t h) {
    char buf[sizeof(T)];
    std::memcpy(buf, &value, sizeof(T));
    return fnv1a64(std::string_view(buf, sizeof(T)), h);
}

std::uint64_t hash_matrix(const SparseRowMatrix& M, std::uint64_t h) {
    h = hash_bytes(M.rows(), h);
    h = hash_bytes(M.cols(), h);
    for (Index r = 0; r < M.outerSize(); ++r) {
        for (SparseRowMatrix::InnerIterator it(M, r); it; ++it) {
            h = hash_bytes(it.row(), h);
            h = hash_bytes(it.col(), h);
            h = hash_bytes(it.value(), h);
        }
    }
    return h;
}

} // namespace

std::shared_ptr<const LogisticProblem::Data> LogisticProblem::build(
    const LibsvmDataset& data, Index dim_x, Index dim_y, double lambda_x, double lambda_y,
    std::optional<double> L_data) {
    if (data.empty()) {
        throw InvalidInput("logistic: empty dataset");
    }
    if (dim_x < 1 || dim_y < 1) {
        throw InvalidInput("logistic: block dimensions must be >= 1");
    }
    if (dim_x + dim_y > data.n_features) {
        throw InvalidInput("logistic: split " + std::to_string(dim_x) + " + " +
                           std::to_string(dim_y) + " exceeds " + std::to_string(data.n_features) +
                           " features");
    }
    if (!(lambda_x >= 0.0) || !(lambda_y >= 0.0) || !std::isfinite(lambda_x) ||
        !std::isfinite(lambda_y)) {
        throw InvalidInput("logistic: regularization weights must be finite and >= 0");
    }
    auto d = std::make_shared<Data>();
    d->xi_x = feature_matrix(data, 0, dim_x);
    d->xi_y = feature_matrix(data, dim_x, dim_y);
    d->labels.resize(static_cast<Index>(data.size()));
    for (std::size_t k = 0; k < data.size(); ++k) {
        d->labels(static_cast<Index>(k)) = data.rows[k].label;
    }
    d->lambda_x = lambda_x;
    d->lambda_y = lambda_y;
    if (L_data) {
        if (!(*L_data >= 0.0) || !std::isfinite(*L_data)) {
            throw InvalidInput("logistic: L_data must be finite and >= 0");
        }
        d->L_data = *L_data;
    } else {
        const SparseRowMatrix kept = feature_matrix(data, 0, dim_x + dim_y);
        d->L_data = estimate_smoothness(kept);
    }
    std::uint64_t h = hash_matrix(d->xi_x, kFnvOffset);
    h = hash_matrix(d->xi_y, h);
    for (Index k = 0; k < d->labels.size(); ++k) {
        h = hash_bytes(d->labels(k), h);
    }
    h = hash_bytes(lambda_x, h);
    h = hash_bytes(lambda_y, h);
    d->fingerprint = hex64(h);
    return d;
}

BlockConstants LogisticProblem::constants_of(const Data& d) {
    return {d.L_data + 2.0 * d.lambda_x, d.L_data + 2.0 * d.lambda_y, 2.0 * d.lambda_x,
            2.0 * d.lambda_y};
}

LogisticProblem::LogisticProblem(const LibsvmDataset& data, Index dim_x, Index dim_y,
                                 double lambda_x, double lambda_y, std::optional<double> L_data)
    : LogisticProblem(build(data, dim_x, dim_y, lambda_x, lambda_y, L_data), dim_x, dim_y) {}

LogisticProblem::LogisticProblem(std::shared_ptr<const Data> data, Index dim_x, Index dim_y)
    : BlockObjective(dim_x, dim_y, constants_of(*data)), data_(std::move(data)) {}

std::unique_ptr<BlockObjective> LogisticProblem::clone() const {
    return std::unique_ptr<BlockObjective>(new LogisticProblem(data_, dim_x(), dim_y()));
}

double LogisticProblem::compute_value(const Vector& x, const Vector& y) const {
    const Vector m = (data_->xi_x * x + data_->xi_y * y).cwiseProduct(data_->labels);
    double loss = 0.0;
    for (Index k = 0; k < m.size(); ++k) {
        loss += softplus(-m(k));
    }
    return loss / static_cast<double>(m.size()) + data_->lambda_x * x.squaredNorm() +
           data_->lambda_y * y.squaredNorm();
}

Vector LogisticProblem::margin_weights(const Vector& x, const Vector& y) const {
    const Vector m = (data_->xi_x * x + data_->xi_y * y).cwiseProduct(data_->labels);
    const double inv_n = 1.0 / static_cast<double>(m.size());
    Vector w(m.size());
    for (Index k = 0; k < m.size(); ++k) {
        w(k) = -data_->labels(k) * sigmoid_neg(m(k)) * inv_n;
    }
    return w;
}

Vector LogisticProblem::compute_grad_x(const Vector& x, const Vector& y) const {
    return data_->xi_x.transpose() * margin_weights(x, y) + (2.0 * data_->lambda_x) * x;
}

Vector LogisticProblem::compute_grad_y(const Vector& x, const Vector& y) const {
    return data_->xi_y.transpose() * margin_weights(x, y) + (2.0 * data_->lambda_y) * y;
}

std::unique_ptr<LogisticProblem> make_logistic(const LibsvmDataset& data, Index dim_x, Index dim_y,
                                               double lambda_x, double lambda_y,
                                               std::optional<double> L_data) {
    return std::make_unique<LogisticProblem>(data, dim_x, dim_y, lambda_x, lambda_y, L_data);
}

double estimate_smoothness(const SparseRowMatrix& features) {
    const Index n = features.rows();
    const Index d = features.cols();
    if (n == 0 || d == 0) {
        throw InvalidInput("estimate_smoothness: empty dataset");
    }
    Vector v = Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
    double lambda = 0.0;
    for (int it = 0; it < 100000; ++it) {
        const Vector w = features.transpose() * (features * v);
        const double next = v.dot(w);
        const double norm = w.norm();
        if (norm == 0.0) {
            return 0.0;
        }
        v = w / norm;
        if (it > 0 && std::abs(next - lambda) <= 1e-10 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda / (4.0 * static_cast<double>(n));
}

double estimate_smoothness(const LibsvmDataset& data) {
    if (data.empty() || data.n_features == 0) {
        throw InvalidInput("estimate_smoothness: empty dataset");
    }
    return estimate_smoothness(feature_matrix(data, 0, data.n_features));
}

} // namespace blocksplit
