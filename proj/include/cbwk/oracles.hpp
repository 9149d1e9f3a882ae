#pragma once

#include "cbwk/environment.hpp"
#include "cbwk/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace cbwk {

enum class OracleKind { OnlineGradientDescent, GlmtronNewton };

inline const char* to_string(OracleKind kind) {
    return kind == OracleKind::GlmtronNewton ? "glmtron" : "ogd";
}

template <typename Scalar>
Scalar link_value(Link link, Scalar z) {
    return link == Link::Logistic ? Scalar(1) / (Scalar(1) + std::exp(-z)) : z;
}

template <typename Scalar>
Scalar link_slope(Link link, Scalar z) {
    if (link != Link::Logistic) return Scalar(1);
    const Scalar s = link_value(link, z);
    return s * (Scalar(1) - s);
}

/// Euclidean projection onto the ball of radius r.
template <typename Scalar>
Vec<Scalar> project_ball(const Vec<Scalar>& v, Scalar r = Scalar(1)) {
    const Scalar n = v.norm();
    return n > r ? Vec<Scalar>(v * (r / n)) : v;
}

/// argmin_u (u - v)' A (u - v) subject to ||u|| <= r, for symmetric positive
/// definite A. The optimum is u(mu) = (A + mu I)^{-1} A v for the multiplier
/// mu >= 0 making ||u|| = r; mu is found by bisection in the eigenbasis of A
/// and the feasible end of the bracket is returned.
template <typename Scalar>
Vec<Scalar> project_ball_in_norm(const Mat<Scalar>& A, const Vec<Scalar>& v, Scalar r = Scalar(1),
                                 int iterations = 20) {
    if (v.norm() <= r) return v;
    Eigen::SelfAdjointEigenSolver<Mat<Scalar>> eig(A);
    const Vec<Scalar>& lam = eig.eigenvalues();
    const Vec<Scalar> w = eig.eigenvectors().transpose() * v;
    auto shrink = [&](Scalar mu) { return Vec<Scalar>(lam.array() / (lam.array() + mu)); };
    auto norm_at = [&](Scalar mu) { return shrink(mu).cwiseProduct(w).norm(); };

    Scalar lo = Scalar(0);
    Scalar hi = lam.maxCoeff() * v.norm() / r;
    while (norm_at(hi) > r) hi *= Scalar(2);
    for (int i = 0; i < iterations; ++i) {
        const Scalar mid = Scalar(0.5) * (lo + hi);
        if (norm_at(mid) > r)
            lo = mid;
        else
            hi = mid;
    }
    Vec<Scalar> u = eig.eigenvectors() * shrink(hi).cwiseProduct(w);
    return project_ball(u, r);
}

/// State of one scalar online regression oracle over linear (or generalized
/// linear) predictors theta'phi with ||theta|| <= 1.
template <typename Scalar>
class OnlinePredictor {
public:
    OnlinePredictor(OracleKind kind, Index dim, Link link = Link::Identity,
                    Scalar eta_scale = Scalar(1))
        : kind_(kind), link_(link), eta_scale_(eta_scale), theta_(Vec<Scalar>::Zero(dim)) {
        if (dim < 1) throw ConfigError("oracle dimension must be positive");
        if (!(eta_scale > Scalar(0))) throw ConfigError("oracle.eta_scale must be positive");
        if (kind_ == OracleKind::GlmtronNewton) {
            gram_ = Mat<Scalar>::Identity(dim, dim);
            gram_inv_ = Mat<Scalar>::Identity(dim, dim);
        }
    }

    OracleKind kind() const { return kind_; }
    Link link() const { return link_; }
    Index dim() const { return theta_.size(); }
    long steps() const { return steps_; }
    int reinitializations() const { return reinit_; }
    const Vec<Scalar>& theta() const { return theta_; }
    const Mat<Scalar>& gram() const { return gram_; }
    const Mat<Scalar>& gram_inverse() const { return gram_inv_; }

    Scalar predict(const Vec<Scalar>& phi) const {
        require_shape(phi.size() == dim(), "feature dimension " + std::to_string(phi.size()) +
                                               " != oracle dimension " + std::to_string(dim()));
        return std::clamp(link_value(link_, theta_.dot(phi)), Scalar(0), Scalar(1));
    }

    void update(const Vec<Scalar>& phi, Scalar target) {
        require_shape(phi.size() == dim(), "feature dimension mismatch in update");
        if (kind_ == OracleKind::OnlineGradientDescent)
            ogd_step(phi, target);
        else
            glmtron_step(phi, target);
    }

private:
    // theta <- Proj(theta - eta_t * 2 (s(z) - y) s'(z) phi), eta_t = eta_scale / sqrt(t).
    void ogd_step(const Vec<Scalar>& phi, Scalar y) {
        ++steps_;
        const Scalar z = theta_.dot(phi);
        const Scalar eta = eta_scale_ / std::sqrt(static_cast<Scalar>(steps_));
        const Scalar grad = Scalar(2) * (link_value(link_, z) - y) * link_slope(link_, z);
        theta_ = project_ball<Scalar>(theta_ - eta * grad * phi);
    }

    // A <- A + phi phi', theta <- Proj_A(theta - A^{-1} (s(z) - y) phi).
    void glmtron_step(const Vec<Scalar>& phi, Scalar y) {
        ++steps_;
        const Scalar z = theta_.dot(phi);
        gram_.noalias() += phi * phi.transpose();

        const Vec<Scalar> u = gram_inv_ * phi;
        const Scalar denom = Scalar(1) + phi.dot(u);
        bool healthy = std::isfinite(denom) && denom > Scalar(0);
        Vec<Scalar> w;
        if (healthy) {
            gram_inv_.noalias() -= (u / denom) * u.transpose();
            w = u / denom;  // equals the updated inverse applied to phi
            const Scalar residual = (gram_ * w - phi).norm();
            healthy = std::isfinite(residual) &&
                      residual <= Scalar(1e-6) * (Scalar(1) + phi.norm()) && gram_inv_.diagonal().minCoeff() > Scalar(0);
        }
        if (!healthy) {
            reinitialize();
            w = gram_inv_ * phi;
        }
        const Scalar resid = link_value(link_, z) - y;
        theta_ = project_ball_in_norm<Scalar>(gram_, theta_ - resid * w);
    }

    void reinitialize() {
        ++reinit_;
        gram_ = Scalar(0.5) * (gram_ + gram_.transpose());
        Eigen::LLT<Mat<Scalar>> llt(gram_);
        gram_inv_ = llt.solve(Mat<Scalar>::Identity(dim(), dim()));
        gram_inv_ = Scalar(0.5) * (gram_inv_ + gram_inv_.transpose());
    }

    OracleKind kind_;
    Link link_;
    Scalar eta_scale_;
    Vec<Scalar> theta_;
    Mat<Scalar> gram_;
    Mat<Scalar> gram_inv_;
    long steps_ = 0;
    int reinit_ = 0;
};

/// d independent scalar oracles, one per cost coordinate. The squared
/// sup-norm regret of the lift is at most the sum of coordinate regrets.
template <typename Scalar>
class VectorPredictor {
public:
    VectorPredictor() = default;
    explicit VectorPredictor(std::vector<OnlinePredictor<Scalar>> parts) : parts_(std::move(parts)) {
        if (parts_.empty()) throw ConfigError("vector oracle needs at least one coordinate");
        for (const auto& p : parts_)
            if (p.kind() != parts_.front().kind() || p.dim() != parts_.front().dim())
                throw ConfigError("vector oracle coordinates must share kind and dimension");
    }

    Index size() const { return static_cast<Index>(parts_.size()); }
    const OnlinePredictor<Scalar>& coordinate(Index i) const { return parts_[static_cast<std::size_t>(i)]; }

    Vec<Scalar> predict(const Vec<Scalar>& phi) const {
        Vec<Scalar> out(size());
        for (Index i = 0; i < size(); ++i) out(i) = parts_[static_cast<std::size_t>(i)].predict(phi);
        return out;
    }

    void update(const Vec<Scalar>& phi, const Vec<Scalar>& targets) {
        require_shape(targets.size() == size(), "cost vector length " + std::to_string(targets.size()) +
                                                    " != " + std::to_string(size()));
        for (Index i = 0; i < size(); ++i) parts_[static_cast<std::size_t>(i)].update(phi, targets(i));
    }

    int reinitializations() const {
        int n = 0;
        for (const auto& p : parts_) n += p.reinitializations();
        return n;
    }

private:
    std::vector<OnlinePredictor<Scalar>> parts_;
};

template <typename Scalar>
VectorPredictor<Scalar> lift_vector(OracleKind kind, Index dim, Index d, Link link = Link::Identity,
                                    Scalar eta_scale = Scalar(1)) {
    std::vector<OnlinePredictor<Scalar>> parts;
    for (Index i = 0; i < d; ++i) parts.emplace_back(kind, dim, link, eta_scale);
    return VectorPredictor<Scalar>(std::move(parts));
}

/// Uniform average of the iterate predictors f_1..f_M produced by one pass of
/// an online oracle (f_i is the predictor in force before sample i).
template <typename Scalar>
class BatchPredictor {
public:
    BatchPredictor(Mat<Scalar> iterates, Link link) : iterates_(std::move(iterates)), link_(link) {}

    Index samples() const { return iterates_.rows(); }

    Scalar predict(const Vec<Scalar>& phi) const {
        require_shape(phi.size() == iterates_.cols(), "feature dimension mismatch in batch predictor");
        const Vec<Scalar> z = iterates_ * phi;
        Scalar acc = Scalar(0);
        for (Index i = 0; i < z.size(); ++i)
            acc += std::clamp(link_value(link_, z(i)), Scalar(0), Scalar(1));
        return acc / static_cast<Scalar>(z.size());
    }

private:
    Mat<Scalar> iterates_;  // M x m, row i is theta_i
    Link link_;
};

/// One pass of a fresh `kind` oracle over (features.col(i), targets(i)).
template <typename Scalar>
BatchPredictor<Scalar> otb_convert(OracleKind kind, const Mat<Scalar>& features, const Vec<Scalar>& targets,
                                   Link link = Link::Identity, Scalar eta_scale = Scalar(1)) {
    if (features.cols() == 0) throw ConfigError("online-to-batch conversion needs M >= 1 samples");
    require_shape(features.cols() == targets.size(), "feature count != target count");
    OnlinePredictor<Scalar> oracle(kind, features.rows(), link, eta_scale);
    Mat<Scalar> iterates(features.cols(), features.rows());
    for (Index i = 0; i < features.cols(); ++i) {
        iterates.row(i) = oracle.theta().transpose();
        oracle.update(features.col(i), targets(i));
    }
    return BatchPredictor<Scalar>(std::move(iterates), link);
}

enum class BoundFamily { Glmtron, Ogd, Aggregation };

/// Closed-form online square-loss regret rates used to set the exploration
/// parameter and the estimation-error radius. The cost rate carries the
/// factor d of the coordinate-wise lift.
struct OracleBoundSpec {
    BoundFamily family = BoundFamily::Glmtron;
    double reward_dim = 1;  // m1
    double cost_dim = 1;    // m2
    double resources = 1;   // d
    double arms = 1;        // K, used by the aggregation rate
    double exponent = 1;    // p, used by the aggregation rate
    double constant = 1;

    static OracleBoundSpec for_oracle(OracleKind kind, double m1, double m2, double d) {
        OracleBoundSpec s;
        s.family = kind == OracleKind::GlmtronNewton ? BoundFamily::Glmtron : BoundFamily::Ogd;
        s.reward_dim = m1;
        s.cost_dim = m2;
        s.resources = d;
        return s;
    }

    double reward_rate(double T) const { return constant * base(T, reward_dim); }
    double cost_rate(double T) const { return constant * resources * base(T, cost_dim); }

private:
    double base(double T, double dim) const {
        switch (family) {
            case BoundFamily::Glmtron:
                return dim * std::max(1.0, std::log(T));
            case BoundFamily::Ogd:
                return std::sqrt(std::max(1.0, T));
            case BoundFamily::Aggregation:
            default:
                return std::pow(arms * std::max(1.0, T), (1.0 + exponent) / (2.0 + exponent));
        }
    }
};

}  // namespace cbwk
