#pragma once

#include "blocksplit/libsvm.hpp"
#include "blocksplit/oracle.hpp"

#include <memory>
#include <optional>
#include <string>

namespace blocksplit {

/// f(x, y) = (1/n) sum_k log(1 + exp(-eta_k <xi_k, (x, y)>)) + lambda_x |x|^2 + lambda_y |y|^2
/// with x the first dim_x features and y the next dim_y (the rest dropped).
/// Constants: mu = 2 lambda, L = L_data + 2 lambda per block.
class LogisticProblem final : public BlockObjective {
public:
    /// `L_data` is estimated from the kept features when not supplied.
    LogisticProblem(const LibsvmDataset& data, Index dim_x, Index dim_y, double lambda_x,
                    double lambda_y, std::optional<double> L_data = {});

    double lambda_x() const { return data_->lambda_x; }
    double lambda_y() const { return data_->lambda_y; }
    double L_data() const { return data_->L_data; }
    Index samples() const { return data_->labels.size(); }
    /// FNV-1a over the kept features, labels, split and lambdas.
    const std::string& fingerprint() const { return data_->fingerprint; }

    std::unique_ptr<BlockObjective> clone() const override;
    std::string kind() const override { return "logistic"; }

protected:
    double compute_value(const Vector& x, const Vector& y) const override;
    Vector compute_grad_x(const Vector& x, const Vector& y) const override;
    Vector compute_grad_y(const Vector& x, const Vector& y) const override;

private:
    struct Data {
        SparseRowMatrix xi_x;
        SparseRowMatrix xi_y;
        Vector labels;
        double lambda_x = 0.0;
        double lambda_y = 0.0;
        double L_data = 0.0;
        std::string fingerprint;
    };
    LogisticProblem(std::shared_ptr<const Data> data, Index dim_x, Index dim_y);
    static std::shared_ptr<const Data> build(const LibsvmDataset& data, Index dim_x, Index dim_y,
                                             double lambda_x, double lambda_y,
                                             std::optional<double> L_data);
    static BlockConstants constants_of(const Data& d);

    /// -eta_k sigma(-m_k) / n, the derivative of the mean loss in the margin.
    Vector margin_weights(const Vector& x, const Vector& y) const;

    std::shared_ptr<const Data> data_;
};

std::unique_ptr<LogisticProblem> make_logistic(const LibsvmDataset& data, Index dim_x, Index dim_y,
                                               double lambda_x, double lambda_y,
                                               std::optional<double> L_data = {});

/// lambda_max(Xi^T Xi) / (4n) by power iteration (relative change below
/// 1e-10 between sweeps). Uses all features of the dataset.
double estimate_smoothness(const LibsvmDataset& data);
double estimate_smoothness(const SparseRowMatrix& features);

} // namespace blocksplit
