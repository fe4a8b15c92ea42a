#include "blocksplit/regularize.hpp"

#include <cmath>

namespace blocksplit {

namespace {

BlockConstants shifted(const BlockConstants& c, double w, BlockSelection s) {
    BlockConstants r = c;
    if (s.x) {
        r.L_x += w;
        r.mu_x += w;
    }
    if (s.y) {
        r.L_y += w;
        r.mu_y += w;
    }
    return r;
}

const BlockObjective& non_null(const std::shared_ptr<const BlockObjective>& p) {
    if (!p) {
        throw InvalidInput("regularize: base objective is null");
    }
    return *p;
}

} // namespace

RegularizedObjective::RegularizedObjective(std::shared_ptr<const BlockObjective> base,
                                           double weight, BlockSelection selection,
                                           BlockVector center)
    : BlockObjective(non_null(base).dim_x(), base->dim_y(),
                     shifted(base->constants(), weight, selection)),
      base_(std::move(base)),
      weight_(weight),
      selection_(selection),
      center_(std::move(center)) {
    if (!(weight >= 0.0) || !std::isfinite(weight)) {
        throw InvalidInput("regularize: weight must be finite and >= 0");
    }
    base_->check_dims(center_.x, center_.y);
    require_finite(center_.x, "regularization center");
    require_finite(center_.y, "regularization center");
}

std::unique_ptr<BlockObjective> RegularizedObjective::clone() const {
    return std::make_unique<RegularizedObjective>(base_, weight_, selection_, center_);
}

double RegularizedObjective::compute_value(const Vector& x, const Vector& y) const {
    double v = base_->value(x, y);
    if (selection_.x) {
        v += 0.5 * weight_ * (x - center_.x).squaredNorm();
    }
    if (selection_.y) {
        v += 0.5 * weight_ * (y - center_.y).squaredNorm();
    }
    return v;
}

Vector RegularizedObjective::compute_grad_x(const Vector& x, const Vector& y) const {
    Vector g = base_->partial_x(x, y);
    if (selection_.x) {
        g += weight_ * (x - center_.x);
    }
    return g;
}

Vector RegularizedObjective::compute_grad_y(const Vector& x, const Vector& y) const {
    Vector g = base_->partial_y(x, y);
    if (selection_.y) {
        g += weight_ * (y - center_.y);
    }
    return g;
}

double regularization_weight(double eps, double R) {
    if (!(eps > 0.0) || !(R > 0.0) || !std::isfinite(eps) || !std::isfinite(R)) {
        throw InvalidInput("regularize: eps and R must be positive and finite");
    }
    return eps / (2.0 * R * R);
}

std::unique_ptr<RegularizedObjective> regularize(std::shared_ptr<const BlockObjective> base,
                                                 double eps, double R, BlockVector center,
                                                 std::optional<BlockSelection> selection) {
    const double w = regularization_weight(eps, R);
    const BlockObjective& b = non_null(base);
    const BlockSelection s =
        selection.value_or(BlockSelection{b.constants().mu_x == 0.0, b.constants().mu_y == 0.0});
    return std::make_unique<RegularizedObjective>(std::move(base), w, s, std::move(center));
}

} // namespace blocksplit
