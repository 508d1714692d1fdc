// layout.hpp — block partition of the flat phase vector and the weighted
// canonical two-form it carries.
//
// A coupled state is stored as one flat vector z = (q1, p1, q2, p2).
// Each canonical pair (q_a, p_a) carries a positive weight w_a, so the
// symplectic form is  ω = Σ_a w_a dq_a ∧ dp_a.  Unit weights give the
// standard form; semi-discretized fields use w_a = Δx.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>

#include "hamcoup/errors.hpp"

namespace hamcoup {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Index = Eigen::Index;

class CoordinateLayout {
public:
    // Canonical pairing is structural: dim_p1 == dim_q1, dim_p2 == dim_q2.
    CoordinateLayout(Index dim_q1, Index dim_q2)
        : CoordinateLayout(dim_q1, dim_q2, Vec::Ones(dim_q1 + dim_q2)) {}

    CoordinateLayout(Index dim_q1, Index dim_q2, Vec weights)
        : n1_(dim_q1), n2_(dim_q2), weights_(std::move(weights)) {
        if (n1_ < 0 || n2_ < 0)
            throw LayoutError("CoordinateLayout: block sizes must be nonnegative");
        if (weights_.size() != n1_ + n2_)
            throw LayoutError("CoordinateLayout: expected " + std::to_string(n1_ + n2_) +
                              " weights, got " + std::to_string(weights_.size()));
        for (Index a = 0; a < weights_.size(); ++a)
            if (!(weights_[a] > 0.0) || !std::isfinite(weights_[a]))
                throw LayoutError("CoordinateLayout: weight " + std::to_string(a) +
                                  " is not a positive finite real");
    }

    Index dim_q1() const { return n1_; }
    Index dim_p1() const { return n1_; }
    Index dim_q2() const { return n2_; }
    Index dim_p2() const { return n2_; }
    Index total_dim() const { return 2 * (n1_ + n2_); }
    Index n_pairs() const { return n1_ + n2_; }

    Index q1_offset() const { return 0; }
    Index p1_offset() const { return n1_; }
    Index q2_offset() const { return 2 * n1_; }
    Index p2_offset() const { return 2 * n1_ + n2_; }

    // Pairs are indexed 0..n_pairs()-1: subsystem 1 first, then subsystem 2.
    Index col_q(Index pair) const {
        return pair < n1_ ? q1_offset() + pair : q2_offset() + (pair - n1_);
    }
    Index col_p(Index pair) const {
        return pair < n1_ ? p1_offset() + pair : p2_offset() + (pair - n1_);
    }

    double weight(Index pair) const { return weights_[pair]; }
    const Vec& weights() const { return weights_; }
    Vec weights1() const { return weights_.head(n1_); }
    Vec weights2() const { return weights_.tail(n2_); }

    // Matrix W of the two-form: W(k,l) = ω(e_k, e_l).
    Mat symplectic_form() const {
        Mat w = Mat::Zero(total_dim(), total_dim());
        for (Index a = 0; a < n_pairs(); ++a) {
            w(col_q(a), col_p(a)) = weights_[a];
            w(col_p(a), col_q(a)) = -weights_[a];
        }
        return w;
    }

    bool same_shape(const CoordinateLayout& other) const {
        return n1_ == other.n1_ && n2_ == other.n2_;
    }

private:
    Index n1_, n2_;
    Vec weights_;
};

class PhaseState {
public:
    PhaseState(CoordinateLayout layout, Vec z, double t = 0.0)
        : layout_(std::move(layout)), z_(std::move(z)), t_(t) {
        if (z_.size() != layout_.total_dim())
            throw LayoutError("PhaseState: state has " + std::to_string(z_.size()) +
                              " entries, layout expects " +
                              std::to_string(layout_.total_dim()));
        if (!z_.allFinite() || !std::isfinite(t_))
            throw NumericError("PhaseState: non-finite entry in state vector");
    }

    static PhaseState zero(const CoordinateLayout& layout, double t = 0.0) {
        return PhaseState(layout, Vec::Zero(layout.total_dim()), t);
    }

    const CoordinateLayout& layout() const { return layout_; }
    const Vec& z() const { return z_; }
    double t() const { return t_; }

    Vec q1() const { return z_.segment(layout_.q1_offset(), layout_.dim_q1()); }
    Vec p1() const { return z_.segment(layout_.p1_offset(), layout_.dim_p1()); }
    Vec q2() const { return z_.segment(layout_.q2_offset(), layout_.dim_q2()); }
    Vec p2() const { return z_.segment(layout_.p2_offset(), layout_.dim_p2()); }

    PhaseState with_z(Vec z_new, double t_new) const {
        return PhaseState(layout_, std::move(z_new), t_new);
    }

private:
    CoordinateLayout layout_;
    Vec z_;
    double t_;
};

} // namespace hamcoup
