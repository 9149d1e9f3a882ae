#pragma once

#include "cbwk/types.hpp"

#include <cmath>

namespace cbwk {

/// Normalized exponentiated gradient on the (d+1)-simplex; the last
/// coordinate is slack. The resource prices are lambda = Z * weights[0..d).
template <typename Scalar>
class DualState {
public:
    DualState(Index d, Scalar radius, long horizon)
        : weights_(Vec<Scalar>::Constant(d + 1, Scalar(1) / static_cast<Scalar>(d + 1))),
          log_weights_(Vec<Scalar>::Zero(d + 1)),
          radius_(radius) {
        if (d < 1) throw ConfigError("dual needs d >= 1");
        if (!(radius > Scalar(0))) throw ConfigError("dual radius Z must be positive");
        if (horizon < 1) throw ConfigError("dual horizon T must be >= 1");
        step_ = std::sqrt(std::log(static_cast<Scalar>(d + 1)) / static_cast<Scalar>(horizon));
    }

    Index resources() const { return weights_.size() - 1; }
    Scalar radius() const { return radius_; }
    Scalar step() const { return step_; }
    long rounds() const { return rounds_; }
    const Vec<Scalar>& weights() const { return weights_; }

    void set_step(Scalar eta) {
        if (!(eta > Scalar(0))) throw ConfigError("dual step must be positive");
        step_ = eta;
    }

    Vec<Scalar> lambda() const { return radius_ * weights_.head(resources()); }

    /// Loss <gradient, lambda>; the slack coordinate has zero loss.
    /// The gradient is pre-divided by Z so that the step is scale-free.
    void update_gradient(const Vec<Scalar>& gradient) {
        require_shape(gradient.size() == resources(), "dual gradient length != d");
        log_weights_.head(resources()) -= step_ * gradient;
        const Scalar top = log_weights_.maxCoeff();
        log_weights_.array() -= top;
        weights_ = log_weights_.array().exp();
        weights_ /= weights_.sum();
        ++rounds_;
    }

    /// Feed the realized consumption; the loss is <B/T 1 - c, lambda>.
    void update(const Vec<Scalar>& cost, Scalar budget_rate) {
        require_shape(cost.size() == resources(), "cost length != d");
        update_gradient((Vec<Scalar>::Constant(resources(), budget_rate) - cost).eval());
    }

    // Used only by tests that set an arbitrary starting point.
    void set_weights(const Vec<Scalar>& w) {
        require_shape(w.size() == weights_.size(), "weight length != d+1");
        weights_ = w / w.sum();
        log_weights_ = weights_.array().log();
    }

private:
    Vec<Scalar> weights_;
    Vec<Scalar> log_weights_;
    Scalar radius_;
    Scalar step_ = Scalar(0);
    long rounds_ = 0;
};

template <typename Scalar>
DualState<Scalar> dual_init(Index d, Scalar radius, long horizon) {
    return DualState<Scalar>(d, radius, horizon);
}

}  // namespace cbwk
