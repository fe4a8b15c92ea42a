#pragma once

#include "blocksplit/oracle.hpp"

#include <memory>
#include <optional>

namespace blocksplit {

struct BlockSelection {
    bool x = true;
    bool y = true;
};

/// base(x, y) + (w/2)|x - c_x|^2 [if selected] + (w/2)|y - c_y|^2 [if selected].
/// The base is evaluated through its uncounted channel; the wrapper keeps
/// its own counters.
class RegularizedObjective final : public BlockObjective {
public:
    RegularizedObjective(std::shared_ptr<const BlockObjective> base, double weight,
                         BlockSelection selection, BlockVector center);

    const BlockObjective& base() const { return *base_; }
    double weight() const { return weight_; }
    BlockSelection selection() const { return selection_; }
    const BlockVector& center() const { return center_; }

    std::unique_ptr<BlockObjective> clone() const override;
    std::string kind() const override { return "regularized-" + base_->kind(); }

protected:
    double compute_value(const Vector& x, const Vector& y) const override;
    Vector compute_grad_x(const Vector& x, const Vector& y) const override;
    Vector compute_grad_y(const Vector& x, const Vector& y) const override;

private:
    std::shared_ptr<const BlockObjective> base_;
    double weight_;
    BlockSelection selection_;
    BlockVector center_;
};

/// eps / (2 R^2). The added term is at most eps/4 within distance R of the center.
double regularization_weight(double eps, double R);

/// Regularizes the selected blocks (by default those with mu == 0). Solving
/// the result to eps/2 solves the base to eps when the solution lies within
/// R of `center`.
std::unique_ptr<RegularizedObjective> regularize(std::shared_ptr<const BlockObjective> base,
                                                 double eps, double R, BlockVector center,
                                                 std::optional<BlockSelection> selection = {});

} // namespace blocksplit
